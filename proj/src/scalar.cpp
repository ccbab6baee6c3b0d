#include "tasep/matrix.hpp"
#include "tasep/scalar.hpp"

#include <Eigen/Dense>

#include <cctype>

namespace tasep {

Rational parse_rational(const std::string& raw) {
    std::string text;
    for (char c : raw)
        if (!std::isspace(static_cast<unsigned char>(c))) text.push_back(c);
    if (text.empty()) throw std::invalid_argument("empty number");
    auto slash = text.find('/');
    auto dot = text.find('.');
    try {
        if (slash != std::string::npos) {
            Rational r(mpz_class(text.substr(0, slash)), mpz_class(text.substr(slash + 1)));
            if (r.get_den() == 0) throw std::invalid_argument("zero denominator");
            r.canonicalize();
            return r;
        }
        if (dot != std::string::npos) {
            std::string digits = text.substr(0, dot) + text.substr(dot + 1);
            if (digits.empty() || digits == "-" || digits == "+") throw std::invalid_argument("bad decimal");
            mpz_class den = 1;
            for (std::size_t i = dot + 1; i < text.size(); ++i) den *= 10;
            if (digits[0] == '+') digits.erase(0, 1);
            Rational r(mpz_class(digits), den);
            r.canonicalize();
            return r;
        }
        std::string digits = text[0] == '+' ? text.substr(1) : text;
        return Rational(mpz_class(digits));
    } catch (const std::invalid_argument&) {
        throw std::invalid_argument("cannot parse number '" + raw + "'");
    }
}

std::string rational_to_string(const Rational& r) { return r.get_str(); }

double lu_determinant(const Matrix<double>& a) {
    const auto n = static_cast<Eigen::Index>(a.rows());
    if (a.rows() != a.cols()) throw std::invalid_argument("determinant: matrix not square");
    if (n == 0) return 1.0;
    Eigen::MatrixXd m(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < n; ++j) m(i, j) = a(static_cast<std::size_t>(i), static_cast<std::size_t>(j));
    return m.partialPivLu().determinant();
}

}  // namespace tasep
