#include "tasep/dpp.hpp"

namespace tasep {

void for_each_array_with_left_edge(const Config& edge, long lo, long hi, const std::function<void(const LevelArray&)>& visit) {
    const int n = static_cast<int>(edge.size());
    LevelArray a;
    a.x.resize(static_cast<std::size_t>(n));
    for (int i = 1; i <= n; ++i) a.x[static_cast<std::size_t>(i - 1)].assign(static_cast<std::size_t>(i), 0);
    // Fill level by level from the top, entries left to right within a level.
    std::function<void(int, int)> rec = [&](int level, int j) {
        if (level == 0) {
            visit(a);
            return;
        }
        if (j > level) {
            rec(level - 1, 1);
            return;
        }
        long vlo, vhi;
        if (level == n) {
            vlo = lo;
            vhi = j == 1 ? hi : a.at(level, j - 1) - 1;
        } else {
            vlo = a.at(level + 1, j + 1) + 1;
            vhi = a.at(level + 1, j);
        }
        if (j > 1) vhi = std::min(vhi, a.at(level, j - 1) - 1);
        if (j == level) {
            long v = edge[static_cast<std::size_t>(level - 1)];
            if (v < vlo || v > vhi) return;
            a.x[static_cast<std::size_t>(level - 1)][static_cast<std::size_t>(j - 1)] = v;
            rec(level, j + 1);
            return;
        }
        for (long v = vlo; v <= vhi; ++v) {
            a.x[static_cast<std::size_t>(level - 1)][static_cast<std::size_t>(j - 1)] = v;
            rec(level, j + 1);
        }
    };
    rec(n, 1);
}

}  // namespace tasep
