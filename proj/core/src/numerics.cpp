#include "sargcert/numerics.hpp"

#include <cmath>
#include <stdexcept>

namespace sargcert::numerics {

Root bisect(const std::function<double(double)>& f, double lo, double hi, double xtol, int max_iter) {
    double flo = f(lo), fhi = f(hi);
    if (flo == 0.0) return {lo, lo, lo, 0.0, 0};
    if (fhi == 0.0) return {hi, hi, hi, 0.0, 0};
    if ((flo > 0) == (fhi > 0)) throw std::domain_error("bisect: root not bracketed");
    int it = 0;
    while (hi - lo > xtol && it < max_iter) {
        const double mid = 0.5 * (lo + hi);
        const double fm = f(mid);
        ++it;
        if (fm == 0.0) return {mid, mid, mid, 0.0, it};
        if ((fm > 0) == (flo > 0)) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    const double x = 0.5 * (lo + hi);
    return {x, lo, hi, f(x), it};
}

Minimum golden_section(const std::function<double(double)>& f, double lo, double hi, double xtol) {
    const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
    double a = lo, b = hi;
    double c = b - inv_phi * (b - a), d = a + inv_phi * (b - a);
    double fc = f(c), fd = f(d);
    while (b - a > xtol) {
        if (fc <= fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = f(d);
        }
    }
    // the endpoints are candidates too; golden section never evaluates them
    Minimum best{0.5 * (a + b), f(0.5 * (a + b))};
    for (double x : {lo, hi}) {
        const double v = f(x);
        if (v < best.value) best = {x, v};
    }
    return best;
}

}  // namespace sargcert::numerics
