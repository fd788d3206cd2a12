#include <doctest.h>

#include <cmath>

#include "sargcert/keyrate.hpp"
#include "sargcert/protocol_sim.hpp"

using namespace sargcert;

namespace {

SimConfig make_config(int nu, double p, double eta, std::uint64_t trials, std::uint64_t seed = 1) {
    SimConfig c;
    c.source = PhotonSource::fixed(nu);
    c.depolarizing = p;
    c.transmittance = eta;
    c.trials = trials;
    c.seed = seed;
    return c;
}

}  // namespace

TEST_CASE("exact stats: single photon closed form") {
    for (Protocol proto : {Protocol::FourState, Protocol::SixState})
        for (double p : {0.0, 0.01, 0.05, 0.2}) {
            const auto s = exact_channel_stats(proto, 1, p, 1.0);
            CHECK(std::abs(s.conclusive - (0.25 + p / 3.0)) < 1e-12);
            CHECK(std::abs(s.e_bit - depol_ebit(p)) < 1e-12);
        }
}

TEST_CASE("exact stats: two photons with double-click squash") {
    for (double p : {0.0, 0.03, 0.1}) {
        const double a = 1.0 - 4.0 * p / 3.0, b = 4.0 * p / 3.0;
        const auto s = exact_channel_stats(Protocol::FourState, 2, p, 1.0);
        CHECK(std::abs(s.conclusive - (a / 4 + b / 2)) < 1e-12);
        CHECK(std::abs(s.errors - b / 4) < 1e-12);
        CHECK(std::abs(s.e_bit - depol_ebit(p)) < 1e-12);
    }
}

TEST_CASE("exact error rate does not depend on loss") {
    for (int nu : {1, 2})
        for (double eta : {1.0, 0.7, 0.5, 0.1})
            for (double p : {0.01, 0.03, 0.05})
                CHECK(std::abs(exact_channel_stats(Protocol::FourState, nu, p, eta).e_bit - depol_ebit(p)) < 1e-12);
    CHECK(std::abs(exact_channel_stats(Protocol::FourState, 2, 0.0, 0.5).e_bit) < 1e-15);
    CHECK_THROWS_AS(exact_channel_stats(Protocol::FourState, 3, 0.0, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(exact_channel_stats(Protocol::FourState, 1, 0.9, 1.0), std::invalid_argument);
}

TEST_CASE("config validation") {
    CHECK_THROWS_AS(make_config(1, -0.1, 1.0, 10).validate(), std::invalid_argument);
    CHECK_THROWS_AS(make_config(1, 0.1, 0.0, 10).validate(), std::invalid_argument);
    CHECK_THROWS_AS(make_config(5, 0.1, 1.0, 10).validate(), std::invalid_argument);
    CHECK_THROWS_AS(make_config(1, 0.1, 1.0, 0).validate(), std::invalid_argument);
    SimConfig c = make_config(1, 0.1, 1.0, 10);
    c.source = PhotonSource::coherent(-1.0);
    CHECK_THROWS_AS(c.validate(), std::invalid_argument);
}

TEST_CASE("trial records are consistent") {
    const MonteCarloEngine engine(make_config(2, 0.2, 0.6, 1));
    int conclusive = 0;
    for (std::uint64_t i = 0; i < 20000; ++i) {
        const auto t = engine.run_trial(i);
        if (!t.sifted) {
            CHECK_FALSE(t.conclusive);
            continue;
        }
        CHECK(t.photons_arrived == t.bar_clicks + t.plain_clicks);
        CHECK(t.photons_arrived <= t.photons_sent);
        CHECK(t.squash_used == (t.bar_clicks > 0 && t.plain_clicks > 0));
        if (t.conclusive) {
            ++conclusive;
            CHECK(t.inferred_bit == 1 - t.bob_basis);
            CHECK(t.error == (t.inferred_bit != t.alice_bit));
        } else {
            CHECK(t.inferred_bit == -1);
        }
    }
    CHECK(conclusive > 0);
}

TEST_CASE("noiseless single photons") {
    const auto s = run_monte_carlo(make_config(1, 0.0, 1.0, 200000));
    const auto exact = exact_channel_stats(Protocol::FourState, 1, 0.0, 1.0);
    CHECK(s.errors == 0);
    CHECK(std::abs(s.conclusive_fraction - 0.25) <= 3 * s.conclusive_stderr);
    CHECK(compare(s, exact).pass);
}

TEST_CASE("conclusive fraction is 1/4 at p = 0 for every photon number") {
    for (int nu = 1; nu <= 4; ++nu) {
        const auto s = run_monte_carlo(make_config(nu, 0.0, 1.0, 100000, 3));
        CHECK(s.errors == 0);
        CHECK(std::abs(s.conclusive_fraction - 0.25) <= 3 * s.conclusive_stderr);
    }
}

TEST_CASE("simulation matches exact statistics") {
    for (auto [nu, p, eta] : {std::tuple{1, 0.05, 0.5}, std::tuple{2, 0.03, 1.0}, std::tuple{2, 0.1, 0.4}}) {
        const auto cfg = make_config(nu, p, eta, 200000, 42);
        const auto cmp = compare(run_monte_carlo(cfg), exact_channel_stats(Protocol::FourState, nu, p, eta));
        CHECK(cmp.pass);
    }
    SimConfig six = make_config(1, 0.05, 1.0, 400000, 9);
    six.protocol = Protocol::SixState;
    CHECK(compare(run_monte_carlo(six), exact_channel_stats(Protocol::SixState, 1, 0.05, 1.0)).pass);
}

TEST_CASE("results do not depend on sharding and replay exactly") {
    const auto cfg = make_config(2, 0.05, 0.7, 50000, 77);
    const auto a = run_monte_carlo(cfg, 1), b = run_monte_carlo(cfg, 5), c = run_monte_carlo(cfg, 0);
    CHECK(a.sifted == b.sifted);
    CHECK(a.conclusive == b.conclusive);
    CHECK(a.errors == b.errors);
    CHECK(a.conclusive == c.conclusive);
    CHECK(a.e_bit == c.e_bit);

    const auto other = run_monte_carlo(make_config(2, 0.05, 0.7, 50000, 78), 1);
    CHECK(other.conclusive != a.conclusive);
}

TEST_CASE("sift relabeling leaves statistics unchanged") {
    auto cfg = make_config(1, 0.05, 1.0, 200000, 5);
    const auto base = run_monte_carlo(cfg);
    cfg.sift_offset = 1;
    const auto shifted = run_monte_carlo(cfg);
    const double z_c = (shifted.conclusive_fraction - base.conclusive_fraction) /
                       std::hypot(base.conclusive_stderr, shifted.conclusive_stderr);
    const double z_e = (shifted.e_bit - base.e_bit) / std::hypot(base.e_bit_stderr, shifted.e_bit_stderr);
    CHECK(std::abs(z_c) <= 3.0);
    CHECK(std::abs(z_e) <= 3.0);
}

TEST_CASE("coherent source per-photon breakdown") {
    SimConfig cfg = make_config(1, 0.02, 0.5, 200000, 21);
    cfg.source = PhotonSource::coherent(0.5);
    const auto s = run_monte_carlo(cfg);
    std::uint64_t sifted = 0, conc = 0;
    for (const auto& row : s.per_nu) {
        sifted += row.sifted;
        conc += row.conclusive;
        if (row.nu == 0) CHECK(row.conclusive == 0);
        CHECK(row.nu <= kMaxCoherentPhotons);
    }
    CHECK(sifted == s.sifted);
    CHECK(conc == s.conclusive);
    // vacuum share of sifted pulses is e^{-mu}
    const double vac = static_cast<double>(s.per_nu.front().sifted) / s.sifted;
    CHECK(std::abs(vac - std::exp(-0.5)) < 5 * std::sqrt(vac * (1 - vac) / s.sifted));
}

TEST_CASE("compare") {
    const auto exact = exact_channel_stats(Protocol::FourState, 1, 0.03, 1.0);
    const auto self = compare(as_sim_stats(exact), exact);
    CHECK(self.z_conclusive == 0.0);
    CHECK(self.z_e_bit == 0.0);
    CHECK(self.pass);

    const auto sim = run_monte_carlo(make_config(1, 0.05, 1.0, 200000, 8));
    const auto wrong = exact_channel_stats(Protocol::FourState, 1, 0.05, 1.0);
    auto wrong_p = wrong;
    wrong_p.e_bit = depol_ebit(0.03);
    wrong_p.conclusive = 0.25 + 0.03 / 3.0;
    CHECK_FALSE(compare(sim, wrong_p).pass);
    CHECK(compare(sim, wrong).pass);

    CHECK_THROWS_AS(compare(sim, exact), std::invalid_argument);
}
