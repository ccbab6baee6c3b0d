#include "tasep/operators.hpp"

#include <limits>

namespace tasep {

void for_each_weyl_in_box(const WeylPoint& lo, const WeylPoint& hi, const std::function<void(const WeylPoint&)>& visit) {
    const std::size_t n = lo.size();
    WeylPoint cur(n);
    std::function<void(std::size_t)> rec = [&](std::size_t i) {
        if (i == n) {
            visit(cur);
            return;
        }
        long top = hi[i];
        if (i > 0) top = std::min(top, cur[i - 1]);
        for (long v = lo[i]; v <= top; ++v) {
            cur[i] = v;
            rec(i + 1);
        }
    };
    rec(0);
}

long TriangularArray::ext(int i, int j) const {
    if (j == 0) return aux_left.at(static_cast<std::size_t>(i));
    if (j == i + 1) return aux_right.at(static_cast<std::size_t>(i));
    return at(i, j);
}

bool TriangularArray::strictly_interlacing() const {
    constexpr long inf = std::numeric_limits<long>::max();
    constexpr long ninf = std::numeric_limits<long>::min();
    if (static_cast<int>(x.size()) != n || static_cast<int>(aux_left.size()) != n || static_cast<int>(aux_right.size()) != n)
        return false;
    auto get = [&](int i, int j) -> long {
        if (j == 0) return i < n ? aux_left[static_cast<std::size_t>(i)] : inf;
        if (j == i + 1) return i < n ? aux_right[static_cast<std::size_t>(i)] : ninf;
        if (j > i + 1) return ninf;
        return at(i, j);
    };
    for (int i = 1; i <= n; ++i) {
        if (static_cast<int>(x[static_cast<std::size_t>(i - 1)].size()) != i) return false;
        for (int j = 1; j <= i + 1; ++j) {
            long a = get(i, j), b = get(i - 1, j - 1), c = get(i, j - 1);
            if (!(a < b && b <= c)) return false;
        }
    }
    return true;
}

}  // namespace tasep
