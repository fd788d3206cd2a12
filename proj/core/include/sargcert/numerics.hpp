#pragma once

#include <functional>

namespace sargcert::numerics {

struct Root {
    double x;
    double lo, hi;  // final bracket
    double residual;
    int iterations;
};

/// Bisection for a sign change of f on [lo, hi]. Throws std::domain_error if
/// f(lo) and f(hi) share a sign.
Root bisect(const std::function<double(double)>& f, double lo, double hi, double xtol = 1e-10,
            int max_iter = 200);

struct Minimum {
    double x;
    double value;
};

/// Golden-section search for the minimum of a unimodal f on [lo, hi].
Minimum golden_section(const std::function<double(double)>& f, double lo, double hi,
                       double xtol = 1e-9);

}  // namespace sargcert::numerics
