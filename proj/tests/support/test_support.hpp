#pragma once

#include <cmath>
#include <complex>
#include <random>
#include <vector>

#include "sargcert/attack_forms.hpp"
#include "sargcert/qmath.hpp"

namespace sargcert::testing {

inline StateVector random_vector(std::mt19937_64& rng, int n) {
    std::normal_distribution<double> gauss;
    StateVector v(n);
    for (int i = 0; i < n; ++i) v(i) = Complex(gauss(rng), gauss(rng));
    return v;
}

inline StateVector random_unit(std::mt19937_64& rng, int n) { return random_vector(rng, n).normalized(); }

inline LinearOperator random_matrix(std::mt19937_64& rng, int rows, int cols) {
    std::normal_distribution<double> gauss;
    LinearOperator m(rows, cols);
    for (int i = 0; i < rows; ++i)
        for (int j = 0; j < cols; ++j) m(i, j) = Complex(gauss(rng), gauss(rng));
    return m;
}

inline LinearOperator random_hermitian(std::mt19937_64& rng, int n) {
    const LinearOperator a = random_matrix(rng, n, n);
    return 0.5 * (a + a.adjoint());
}

inline EffectiveAttack random_attack(std::mt19937_64& rng, int nu) {
    return {nu, random_matrix(rng, 2, 1 << nu)};
}

/// Random map rescaled to operator norm <= 1.
inline EffectiveAttack random_contraction(std::mt19937_64& rng, int nu) {
    LinearOperator m = random_matrix(rng, 2, 1 << nu);
    Eigen::JacobiSVD<LinearOperator> svd(m);
    std::uniform_real_distribution<double> shrink(0.0, 1.0);
    m *= shrink(rng) / svd.singularValues()(0);
    return {nu, m};
}

/// Characteristic polynomial det(t I - A) by Faddeev-LeVerrier; coefficient
/// k multiplies t^(n-k). Real for Hermitian A.
inline std::vector<double> characteristic_polynomial(const LinearOperator& a) {
    const auto n = a.rows();
    std::vector<Complex> c(n + 1);
    c[0] = 1.0;
    LinearOperator m = LinearOperator::Zero(n, n);
    const LinearOperator id = LinearOperator::Identity(n, n);
    for (Eigen::Index k = 1; k <= n; ++k) {
        m = a * m + c[k - 1] * id;
        c[k] = -(a * m).trace() / static_cast<double>(k);
    }
    std::vector<double> out;
    for (const auto& v : c) out.push_back(v.real());
    return out;
}

inline double horner(const std::vector<double>& coeffs, double t) {
    double acc = 0.0;
    for (double c : coeffs) acc = acc * t + c;
    return acc;
}

/// Smallest real root of the characteristic polynomial, bracketed from a
/// Gershgorin lower bound by a fine scan followed by bisection.
inline double smallest_root_oracle(const LinearOperator& a) {
    const auto coeffs = characteristic_polynomial(a);
    double radius = 0.0;
    for (Eigen::Index i = 0; i < a.rows(); ++i) radius = std::max(radius, a.row(i).cwiseAbs().sum());
    double lo = -radius - 1.0;
    const double hi = radius + 1.0;
    const int steps = 200000;
    const double h = (hi - lo) / steps;
    double f_lo = horner(coeffs, lo);
    for (int k = 1; k <= steps; ++k) {
        const double t = lo + h;
        const double f_t = horner(coeffs, t);
        if ((f_t > 0) != (f_lo > 0) || f_t == 0.0) {
            double a_ = lo, b_ = t;
            for (int it = 0; it < 200; ++it) {
                const double mid = 0.5 * (a_ + b_);
                if ((horner(coeffs, mid) > 0) == (f_lo > 0)) a_ = mid;
                else b_ = mid;
            }
            return 0.5 * (a_ + b_);
        }
        lo = t;
        f_lo = f_t;
    }
    return std::nan("");
}

}  // namespace sargcert::testing
