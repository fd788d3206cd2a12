#include "sargcert/keyrate.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "sargcert/attack_forms.hpp"
#include "sargcert/bound_verifier.hpp"
#include "sargcert/numerics.hpp"

namespace sargcert {

namespace {

double plogp(double q) { return q > 0.0 ? -q * std::log2(q) : 0.0; }

void check_unit(double v, const char* what) {
    if (!(v >= 0.0 && v <= 1.0)) throw std::invalid_argument(std::string(what) + " must lie in [0, 1]");
}

JointErrorDistribution single_family(double e, double s) {
    return {1.0 - 2.5 * e + s, 1.5 * e - s, e - s, s};
}

void check_single_range(double e) {
    if (!(e >= 0.0 && e <= 0.4))
        throw std::invalid_argument("single-photon marginals infeasible: e_bit must lie in [0, 0.4]");
}

// Worst-case phase error rate fed into an entropy: anything above 1/2 is no
// more informative to Eve than 1/2.
double entropy_capped(double e) { return binary_entropy(std::min(e, 0.5)); }

}  // namespace

double binary_entropy(double e) {
    check_unit(e, "binary_entropy argument");
    return plogp(e) + plogp(1.0 - e);
}

double JointErrorDistribution::entropy() const {
    return plogp(q00) + plogp(q01) + plogp(q10) + plogp(q11);
}

WorstJoint worst_joint_single(double e) {
    check_single_range(e);
    const double s = std::clamp(1.5 * e * e, 0.5 * e, e);
    const auto dist = single_family(e, s);
    return {dist, dist.entropy(), s};
}

WorstJoint worst_joint_single_numeric(double e) {
    check_single_range(e);
    if (e == 0.0) return worst_joint_single(0.0);
    const auto best = numerics::golden_section(
        [e](double s) { return -single_family(e, s).entropy(); }, 0.5 * e, e, 1e-12);
    const auto dist = single_family(e, best.x);
    return {dist, dist.entropy(), best.x};
}

RateResult rate_single(double e_bit) {
    const auto w = worst_joint_single(e_bit);
    return {e_bit, 1.5 * e_bit, std::nullopt, w.dist, 1.0 - w.h_max};
}

ThresholdResult threshold_single() {
    const auto root = numerics::bisect([](double e) { return rate_single(e).rate; }, 0.05, 0.15, 1e-9);
    return {Protocol::FourState, 1, root.x, depol_p(root.x), root.lo, root.hi, root.residual, std::nullopt};
}

PhaseBound ephase_bound_two(double e_bit) {
    check_unit(e_bit, "e_bit");
    if (e_bit > 0.5) throw std::invalid_argument("ephase_bound_two: e_bit must lie in [0, 0.5]");
    if (e_bit == 0.0) return {g_infimum(), kMaxBoundSlope, true};

    auto objective = [e_bit](double x) { return x * e_bit + g_of_x(x); };

    // x e + g(x) is convex; a coarse scan guards the golden-section assumption
    constexpr int kScan = 200;
    bool rising = false;
    double prev = objective(0.0);
    for (int k = 1; k <= kScan; ++k) {
        const double v = objective(kMaxBoundSlope * k / kScan);
        if (v > prev + 1e-12) rising = true;
        else if (rising && v < prev - 1e-12) throw std::logic_error("ephase_bound_two: objective not unimodal");
        prev = v;
    }

    const auto m = numerics::golden_section(objective, 0.0, kMaxBoundSlope, 1e-10);
    return {m.value, m.x, m.x >= kMaxBoundSlope - 1e-6};
}

RateResult rate_two(double e_bit) {
    const auto b = ephase_bound_two(e_bit);
    return {e_bit, b.e_ph, b.x_opt, std::nullopt, 1.0 - binary_entropy(e_bit) - entropy_capped(b.e_ph)};
}

ThresholdResult threshold_two() {
    const auto root = numerics::bisect([](double e) { return rate_two(e).rate; }, 0.01, 0.05, 1e-9);
    return {Protocol::FourState, 2,           root.x,        depol_p(root.x),
            root.lo,             root.hi,     root.residual, ephase_bound_two(root.x).x_opt};
}

double depol_ebit(double p) {
    if (!(p >= 0.0 && p <= 0.75)) throw std::invalid_argument("depolarizing rate must lie in [0, 0.75]");
    return 4.0 * p / (3.0 + 4.0 * p);
}

double depol_p(double e) {
    // e = 4p/(3+4p) maps [0, 0.75] onto [0, 1/2]
    if (!(e >= 0.0 && e <= 0.5)) throw std::invalid_argument("bit error rate must lie in [0, 0.5]");
    return 3.0 * e / (4.0 * (1.0 - e));
}

void DecoyInputs::validate() const {
    check_unit(p_conc, "P_conc");
    check_unit(e_bit, "e_bit");
    for (int k = 0; k < 2; ++k) {
        check_unit(xi[k], "xi");
        check_unit(e_nu[k], "e_bit(nu)");
    }
    if (xi[0] + xi[1] > p_conc + 1e-12) throw std::invalid_argument("xi(1) + xi(2) exceeds P_conc");
}

double conditional_phase_entropy_single(double e) {
    return worst_joint_single(e).h_max - binary_entropy(e);
}

double conditional_phase_entropy_two(double e) { return entropy_capped(ephase_bound_two(e).e_ph); }

double decoy_total_rate(const DecoyInputs& d) {
    d.validate();
    return -d.p_conc * binary_entropy(d.e_bit) +
           d.xi[0] * (1.0 - conditional_phase_entropy_single(d.e_nu[0])) +
           d.xi[1] * (1.0 - conditional_phase_entropy_two(d.e_nu[1]));
}

ThresholdResult frontier_threshold(Protocol protocol, int nu, const std::vector<double>& xs) {
    const FormSet forms(protocol, nu);
    const auto curve = frontier_curve(forms, xs);

    auto bound = [&curve](double e) {
        const FrontierPoint* best = &curve.front();
        for (const auto& p : curve)
            if (p.x * e + p.y_star < best->x * e + best->y_star) best = &p;
        return std::pair{best->x * e + best->y_star, best->x};
    };
    auto rate = [&](double e) { return 1.0 - binary_entropy(e) - entropy_capped(bound(e).first); };

    ThresholdResult r{protocol, nu, 0.0, 0.0, 0.0, 0.0, rate(0.0), bound(0.0).second, false};
    if (rate(0.0) <= 0.0) return r;
    const auto root = numerics::bisect(rate, 0.0, 0.5, 1e-9);
    r.e_threshold = root.x;
    r.p_threshold = depol_p(root.x);
    r.bracket_lo = root.lo;
    r.bracket_hi = root.hi;
    r.residual = root.residual;
    r.x_opt = bound(root.x).second;
    r.key_possible = true;
    return r;
}

ThresholdResult sixstate_thresholds(int nu) {
    if (nu < 1 || nu > 4) throw std::invalid_argument("sixstate_thresholds: nu must be in 1..4");
    return frontier_threshold(Protocol::SixState, nu, default_x_grid());
}

}  // namespace sargcert
