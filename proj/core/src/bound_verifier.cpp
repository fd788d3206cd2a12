#include "sargcert/bound_verifier.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace sargcert {

double psd_margin(const FormSet& forms, BoundCoefficients c) {
    const LinearOperator h = c.x * forms.bit() + c.y * forms.fil() - forms.ph();
    return qmath::min_eigenvalue(h);
}

double psd_margin(double x, double y, Protocol protocol, int nu) {
    return psd_margin(FormSet(protocol, nu), {x, y});
}

double identity_check_single(const FormSet& forms) {
    if (forms.nu() != 1) throw std::invalid_argument("identity_check_single: needs nu = 1 forms");
    return qmath::max_abs(forms.ph() - 1.5 * forms.bit());
}

double identity_check_single(Protocol protocol) {
    return identity_check_single(FormSet(protocol, 1));
}

std::pair<double, double> correlation_psd_check(const FormSet& forms) {
    if (forms.nu() != 1) throw std::invalid_argument("correlation_psd_check: needs nu = 1 forms");
    const auto& c0m = forms[Event::Chi0Minus];
    return {qmath::min_eigenvalue(c0m - 2.0 * forms[Event::Chi1Plus]),
            qmath::min_eigenvalue(2.0 * forms[Event::Chi1Minus] - c0m)};
}

std::pair<double, double> correlation_psd_check() {
    return correlation_psd_check(FormSet(Protocol::FourState, 1));
}

double g_of_x(double x) {
    if (x < 0) throw std::invalid_argument("g_of_x: x must be non-negative");
    return (3.0 - 2.0 * x + std::sqrt(6.0 - 6.0 * std::sqrt(2.0) * x + 4.0 * x * x)) / 6.0;
}

double g_infimum() {
    const double s = std::sin(kPi / 8);
    return s * s;
}

FrontierPoint frontier(const FormSet& forms, double x, double tol) {
    if (x < 0) throw std::invalid_argument("frontier: x must be non-negative");
    auto feasible = [&](double y) { return psd_margin(forms, {x, y}) >= -tol; };

    double lo = 0.0, hi = 1.0;
    if (feasible(lo)) {
        hi = lo;
    } else {
        // p_ph <= p_fil, so y = 1 always passes
        if (!feasible(hi)) throw std::runtime_error("frontier: y = 1 not certified");
        while (hi - lo > 0.1 * tol) {
            const double mid = 0.5 * (lo + hi);
            (feasible(mid) ? hi : lo) = mid;
        }
    }
    FrontierPoint p{};
    p.x = x;
    p.y_star = hi;
    p.g = g_of_x(x);
    p.margin_at_g = psd_margin(forms, {x, p.g});
    p.gap = p.g - p.y_star;
    return p;
}

FrontierPoint frontier(double x, Protocol protocol, int nu, double tol) {
    return frontier(FormSet(protocol, nu), x, tol);
}

std::vector<double> default_x_grid() {
    std::vector<double> xs;
    for (int k = 0; k <= 40; ++k) xs.push_back(0.25 * k);
    xs.push_back(2.485);
    xs.push_back(2.747);
    xs.push_back(1e3);
    std::sort(xs.begin(), xs.end());
    return xs;
}

std::vector<FrontierPoint> frontier_curve(const FormSet& forms, const std::vector<double>& xs,
                                          double tol) {
    std::vector<FrontierPoint> out;
    out.reserve(xs.size());
    for (double x : xs) out.push_back(frontier(forms, x, tol));
    return out;
}

double zero_rate_check(const FormSet& forms, const std::vector<double>& xs) {
    if (xs.empty()) throw std::invalid_argument("zero_rate_check: empty grid");
    double best = 1.0;
    for (double x : xs) best = std::min(best, frontier(forms, x).y_star);
    return best;
}

double zero_rate_check(Protocol protocol, int nu) { return zero_rate_check(FormSet(protocol, nu)); }

int discrimination_limit(Protocol protocol) { return protocol == Protocol::FourState ? 3 : 5; }

}  // namespace sargcert
