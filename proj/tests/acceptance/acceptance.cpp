// Acceptance suite: one PASS/FAIL line per criterion.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <string>

#include "sargcert/attack_forms.hpp"
#include "sargcert/bound_verifier.hpp"
#include "sargcert/keyrate.hpp"
#include "sargcert/protocol_sim.hpp"
#include "sargcert/qmath.hpp"

using namespace sargcert;

namespace {

struct Outcome {
    bool pass;
    std::string detail;
};

int failures = 0;

void criterion(int id, const char* name, double limit_s, const std::function<Outcome()>& body) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o{false, ""};
    try {
        o = body();
    } catch (const std::exception& e) {
        o = {false, std::string("exception: ") + e.what()};
    }
    const double elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (limit_s > 0 && elapsed >= limit_s) {
        o.pass = false;
        o.detail += " [runtime limit exceeded]";
    }
    if (!o.pass) ++failures;
    std::printf("%s  %2d  %-34s %8.3fs  %s\n", o.pass ? "PASS" : "FAIL", id, name, elapsed, o.detail.c_str());
    std::fflush(stdout);
}

std::string fmt(const char* f, auto... args) {
    char buf[512];
    std::snprintf(buf, sizeof buf, f, args...);
    return buf;
}

double entropy_bits(std::initializer_list<double> ps) {
    double h = 0;
    for (double p : ps)
        if (p > 0) h -= p * std::log2(p);
    return h;
}

Outcome structural() {
    const auto c = constants(Protocol::FourState);
    const double d1 = (c.rotation * c.phi[1] - c.phi[0]).cwiseAbs().maxCoeff();
    const LinearOperator r2 = c.rotation * c.rotation;
    const double d2 = qmath::max_abs(r2 * r2 + c.identity);
    const auto ev = qmath::eigenvalues(c.filter);
    const double d3 = std::max(std::abs(ev[0] - std::sin(kPi / 8)), std::abs(ev[1] - std::cos(kPi / 8)));
    const double d4 = filter_measurement_identity_check().max_deviation;
    const StateVector filtered = qmath::tensor(c.identity, c.filter) * c.entangled_source(1);
    const double d5 = (filtered - 0.5 * c.bell[kChi0Plus]).cwiseAbs().maxCoeff();
    const double worst = std::max({d1, d2, d3, d4, d5});
    return {worst < 1e-12, fmt("max deviation %.3g (tol 1e-12)", worst)};
}

Outcome single_equality() {
    const FormSet forms(Protocol::FourState, 1);
    const double d = qmath::max_abs(forms.ph() - 1.5 * forms.bit());
    const PairStateModel model(Protocol::FourState, 1);
    std::mt19937_64 rng(2024);
    std::normal_distribution<double> n;
    double worst_rel = 0;
    for (int k = 0; k < 100; ++k) {
        LinearOperator m(2, 2);
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j) m(i, j) = Complex(n(rng), n(rng));
        const auto w = event_weights(model.conditional_pair_state(EffectiveAttack(1, m)));
        worst_rel = std::max(worst_rel, std::abs(w.ph - 1.5 * w.bit) / std::max(w.ph, 1e-300));
    }
    return {d < 1e-10 && worst_rel < 1e-9, fmt("||H_ph - 1.5 H_bit|| = %.3g, random attacks rel %.3g", d, worst_rel)};
}

Outcome correlations() {
    const auto [a, b] = correlation_psd_check();
    return {a >= -1e-10 && b >= -1e-10, fmt("lambda_min = %.3g, %.3g (>= -1e-10)", a, b)};
}

Outcome two_photon_bound() {
    const FormSet forms(Protocol::FourState, 2);
    std::vector<double> xs;
    for (int k = 0; k <= 40; ++k) xs.push_back(0.25 * k);
    xs.push_back(1e3);
    double margin = 1e300, dominance = -1e300;
    for (double x : xs) {
        margin = std::min(margin, psd_margin(forms, {x, g_of_x(x)}));
        dominance = std::max(dominance, frontier(forms, x).y_star - g_of_x(x));
    }
    const double limit = g_of_x(1e6) - std::pow(std::sin(kPi / 8), 2);
    const bool ok = margin >= -1e-9 && dominance <= 1e-6 && limit < 1e-5;
    return {ok, fmt("min margin %.3g, max y*-g %.3g, g(1e6)-inf %.3g over %zu x values", margin, dominance, limit,
                    xs.size())};
}

Outcome thresholds() {
    const auto one = threshold_single();
    const auto two = threshold_two();
    const double p1 = depol_p(one.e_threshold), p2 = depol_p(two.e_threshold);
    const double x = two.x_opt.value_or(-1);
    const bool ok = std::abs(one.e_threshold - 0.0968) <= 2e-4 && std::abs(two.e_threshold - 0.0271) <= 2e-4 &&
                    std::abs(p1 - 0.0804) <= 5e-4 && std::abs(p2 - 0.0208) <= 5e-4 && std::abs(x - 2.747) <= 0.5;
    return {ok, fmt("e1 %.5f (0.0968) e2 %.5f (0.0271) p1 %.5f (0.0804) p2 %.5f (0.0208) x_opt %.3f (2.747)",
                    one.e_threshold, two.e_threshold, p1, p2, x)};
}

Outcome no_key() {
    const double three = zero_rate_check(Protocol::FourState, 3);
    const auto curve = frontier_curve(FormSet(Protocol::FourState, 2), default_x_grid());
    double two = 1.0;
    for (const auto& p : curve) two = std::min(two, p.y_star);
    const double sin2 = std::pow(std::sin(kPi / 8), 2);
    return {three >= 0.5 - 1e-3 && two <= sin2 + 1e-3,
            fmt("nu=3 min y* %.6f (>= 0.499), nu=2 min y* %.6f (<= %.6f)", three, two, sin2 + 1e-3)};
}

Outcome channel_law() {
    double worst = 0, worst_conc = 0;
    for (int nu : {1, 2})
        for (double eta : {1.0, 0.5})
            for (double p : {0.01, 0.03, 0.05}) {
                const auto s = exact_channel_stats(Protocol::FourState, nu, p, eta);
                worst = std::max(worst, std::abs(s.e_bit - 4 * p / (3 + 4 * p)));
                if (nu == 1 && eta == 1.0) worst_conc = std::max(worst_conc, std::abs(s.conclusive - (0.25 + p / 3)));
            }
    return {worst < 1e-9 && worst_conc < 1e-9, fmt("e_bit dev %.3g, conclusive dev %.3g (tol 1e-9)", worst, worst_conc)};
}

Outcome monte_carlo() {
    struct Case {
        int nu;
        double p, eta;
    };
    std::string detail;
    bool ok = true;
    for (Case c : {Case{1, 0.05, 0.5}, Case{2, 0.03, 1.0}}) {
        SimConfig cfg;
        cfg.protocol = Protocol::FourState;
        cfg.source = PhotonSource::fixed(c.nu);
        cfg.depolarizing = c.p;
        cfg.transmittance = c.eta;
        cfg.trials = 1'000'000;
        cfg.seed = 0x5eed0000ULL + c.nu;
        const auto a = run_monte_carlo(cfg);
        const auto b = run_monte_carlo(cfg, 3);
        const auto cmp = compare(a, exact_channel_stats(cfg.protocol, c.nu, c.p, c.eta));
        const bool replay = a.sifted == b.sifted && a.conclusive == b.conclusive && a.errors == b.errors;
        ok = ok && cmp.pass && replay;
        detail += fmt("nu=%d z=(%.2f, %.2f) replay %s; ", c.nu, cmp.z_conclusive, cmp.z_e_bit, replay ? "ok" : "MISMATCH");
    }
    return {ok, detail};
}

Outcome entropy_oracle() {
    double worst = 0;
    for (double e : {0.02, 0.05, 0.0968, 0.12}) {
        double best = -1;
        const int n = 100000;
        for (int k = 0; k <= n; ++k) {
            const double s = e / 2 + (e / 2) * k / n;
            best = std::max(best, entropy_bits({1 - 2.5 * e + s, 1.5 * e - s, e - s, s}));
        }
        worst = std::max(worst, std::abs(worst_joint_single(e).h_max - best));
    }
    const double at = worst_joint_single(0.0968).h_max;
    return {worst < 1e-6 && std::abs(at - 1.0) <= 2e-3,
            fmt("max grid deviation %.3g, H_max(0.0968) = %.5f", worst, at)};
}

Outcome six_state() {
    std::string detail;
    bool ok = true;
    double prev = 1.0;
    for (int nu = 1; nu <= 4; ++nu) {
        const auto t = sixstate_thresholds(nu);
        const double ref = ReferenceThresholds::six_state[nu - 1];
        ok = ok && t.key_possible && t.e_threshold > 0 && t.e_threshold < prev;
        prev = t.e_threshold;
        detail += fmt("nu=%d %.3f%% (ref %.3f%%, dev %+.3f%%); ", nu, 100 * t.e_threshold, 100 * ref,
                      100 * (t.e_threshold - ref));
    }
    return {ok, detail};
}

}  // namespace

int main() {
    criterion(1, "structural identities", 1, structural);
    criterion(2, "single-photon phase/bit equality", 0, single_equality);
    criterion(3, "correlation inequalities", 0, correlations);
    criterion(4, "two-photon bound", 10, two_photon_bound);
    criterion(5, "thresholds", 5, thresholds);
    criterion(6, "no-key regimes", 0, no_key);
    criterion(7, "channel law", 0, channel_law);
    criterion(8, "Monte Carlo consistency", 60, monte_carlo);
    criterion(9, "entropy oracle", 0, entropy_oracle);
    criterion(10, "six-state pipeline", 60, six_state);
    std::printf("%d of 10 criteria failed\n", failures);
    return failures == 0 ? 0 : 1;
}
