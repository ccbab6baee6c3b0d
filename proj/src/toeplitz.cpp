#include "tasep/toeplitz.hpp"

#include <sstream>

namespace tasep {

Composition Composition::q_chain(int m, int n) {
    std::vector<Factor> f;
    if (m <= n) {
        for (int i = m; i <= n; ++i) f.push_back({FactorKind::Q, i, i});
        return Composition(f);
    }
    for (int i = m - 1; i >= n + 1; --i) f.push_back({FactorKind::Qinv, i, i});
    Composition s(f);
    s.inverse_only_ = m > n + 1;
    return s;
}

Composition Composition::qinv_chain(int m, int n) {
    std::vector<Factor> f;
    for (int i = n; i >= m; --i) f.push_back({FactorKind::Qinv, i, i});
    return Composition(f);
}

Composition Composition::qdag_chain(int m, int n) {
    std::vector<Factor> f;
    for (int i = m; i <= n; ++i) f.push_back({FactorKind::Qdag, i, i});
    return Composition(f);
}

Composition Composition::r_chain(int r, int t) {
    std::vector<Factor> f;
    for (int i = r + 1; i <= t; ++i) f.push_back({FactorKind::R, i, i});
    return Composition(f);
}

Composition Composition::rstar_chain(int r, int t) {
    std::vector<Factor> f;
    for (int i = r + 1; i <= t; ++i) f.push_back({FactorKind::Rstar, i, i});
    return Composition(f);
}

std::string Composition::str() const {
    if (factors_.empty()) return "I";
    std::ostringstream os;
    for (std::size_t i = 0; i < factors_.size(); ++i) {
        const Factor& f = factors_[i];
        if (i) os << " o ";
        switch (f.kind) {
            case FactorKind::Q: os << "Q_" << f.lo; break;
            case FactorKind::Qinv: os << "Qinv_" << f.lo; break;
            case FactorKind::Qdag: os << "Qdag_" << f.lo; break;
            case FactorKind::R: os << "R_" << f.lo; break;
            case FactorKind::Rstar: os << "R*_" << f.lo; break;
            case FactorKind::Qbar: os << "Qbar_[" << f.lo << "," << f.hi << "]"; break;
        }
    }
    return os.str();
}

}  // namespace tasep
