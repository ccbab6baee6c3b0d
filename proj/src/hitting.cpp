#include "tasep/hitting.hpp"

namespace tasep {

Rates<double> perturb_repeated_q(const Rates<double>& rates, double eps) {
    Rates<double> out = rates;
    for (std::size_t i = 0; i < out.q.size(); ++i) {
        int repeats = 0;
        for (std::size_t j = 0; j < i; ++j)
            if (rates.q[j] == rates.q[i]) ++repeats;
        out.q[i] = rates.q[i] * (1.0 + repeats * eps);
    }
    return out;
}

}  // namespace tasep
