#include "sargcert/protocol_sim.hpp"

#include <algorithm>
#include <bit>
#include <array>
#include <cmath>
#include <limits>
#include <map>
#include <stdexcept>
#include <thread>

namespace sargcert {

void SimConfig::validate() const {
    if (!(depolarizing >= 0.0 && depolarizing <= 0.75))
        throw std::invalid_argument("depolarizing rate must lie in [0, 0.75]");
    if (!(transmittance > 0.0 && transmittance <= 1.0))
        throw std::invalid_argument("transmittance must lie in (0, 1]");
    if (trials == 0) throw std::invalid_argument("trials must be positive");
    if (source.kind == PhotonSource::Kind::Fixed) {
        if (source.nu < 1 || source.nu > kMaxFixedPhotons)
            throw std::invalid_argument("fixed photon number must lie in 1..4");
    } else if (!(source.mu > 0.0 && std::isfinite(source.mu))) {
        throw std::invalid_argument("coherent intensity must be positive");
    }
}

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

}  // namespace

TrialRng::TrialRng(std::uint64_t seed, std::uint64_t index)
    : state_(splitmix64(seed ^ splitmix64(index ^ 0x5851f42d4c957f2dULL))) {}

std::uint64_t TrialRng::next() {
    state_ += 0x9e3779b97f4a7c15ULL;
    std::uint64_t z = state_;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

double TrialRng::uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

int TrialRng::below(int n) { return static_cast<int>(uniform() * n); }

MonteCarloEngine::MonteCarloEngine(SimConfig config)
    : config_(config), constants_(constants(config.protocol)) {
    config_.validate();
    if (config_.source.kind == PhotonSource::Kind::Coherent) {
        // Poisson law truncated at kMaxCoherentPhotons and renormalized
        double term = std::exp(-config_.source.mu), total = 0.0;
        for (int n = 0; n <= kMaxCoherentPhotons; ++n) {
            total += term;
            photon_cdf_.push_back(total);
            term *= config_.source.mu / (n + 1);
        }
        for (double& c : photon_cdf_) c /= total;
        photon_cdf_.back() = 1.0;
    }
}

int MonteCarloEngine::draw_photon_number(TrialRng& rng) const {
    if (config_.source.kind == PhotonSource::Kind::Fixed) return config_.source.nu;
    const double u = rng.uniform();
    return static_cast<int>(std::upper_bound(photon_cdf_.begin(), photon_cdf_.end(), u) -
                            photon_cdf_.begin());
}

TrialRecord MonteCarloEngine::run_trial(std::uint64_t index) const {
    TrialRng rng(config_.seed, index);
    TrialRecord t;
    const int cosets = constants_.sift_size() / 4;

    t.alice_bit = rng.coin() ? 1 : 0;
    t.alice_k = rng.below(4);
    t.alice_l = rng.below(cosets);
    t.bob_k = rng.below(4);
    t.bob_l = rng.below(cosets);
    t.bob_basis = rng.coin() ? 1 : 0;
    t.photons_sent = draw_photon_number(rng);
    t.sifted = t.alice_k == t.bob_k && t.alice_l == t.bob_l;
    if (!t.sifted) return t;

    const int shift = ((config_.sift_offset % 4) + 4) % 4;
    const LinearOperator& u_alice = constants_.sift[4 * t.alice_l + (t.alice_k + shift) % 4];
    const LinearOperator& u_bob = constants_.sift[4 * t.bob_l + (t.bob_k + shift) % 4];
    const StateVector sent = u_alice * constants_.phi[t.alice_bit];
    const StateVector& bar = constants_.phi_bar[t.bob_basis];

    const bool intact = rng.uniform() >= 4.0 * config_.depolarizing / 3.0;
    for (int k = 0; k < t.photons_sent; ++k) {
        StateVector photon = sent;
        if (!intact) {
            // Haar-random pure polarization
            const double cos_theta = 2.0 * rng.uniform() - 1.0;
            const double phase = 2.0 * kPi * rng.uniform();
            photon = StateVector(2);
            photon << std::sqrt(0.5 * (1.0 + cos_theta)),
                std::polar(std::sqrt(0.5 * (1.0 - cos_theta)), phase);
        }
        if (rng.uniform() >= config_.transmittance) continue;
        ++t.photons_arrived;
        const StateVector received = u_bob.adjoint() * photon;
        const double p_bar = std::norm(bar.dot(received));
        if (rng.uniform() < p_bar) ++t.bar_clicks;
        else ++t.plain_clicks;
    }

    if (t.photons_arrived == 0) return t;
    if (t.bar_clicks > 0 && t.plain_clicks > 0) {
        t.squash_used = true;
        t.conclusive = rng.coin();
    } else {
        t.conclusive = t.bar_clicks > 0;
    }
    if (t.conclusive) {
        t.inferred_bit = 1 - t.bob_basis;
        t.error = t.inferred_bit != t.alice_bit;
    }
    return t;
}

namespace {

struct Tally {
    std::uint64_t sifted = 0, conclusive = 0, errors = 0;
    std::array<std::array<std::uint64_t, 3>, kMaxCoherentPhotons + 1> by_nu{};

    void add(const TrialRecord& t) {
        if (!t.sifted) return;
        ++sifted;
        auto& row = by_nu[t.photons_sent];
        ++row[0];
        if (t.conclusive) {
            ++conclusive;
            ++row[1];
            if (t.error) {
                ++errors;
                ++row[2];
            }
        }
    }
    void merge(const Tally& o) {
        sifted += o.sifted;
        conclusive += o.conclusive;
        errors += o.errors;
        for (std::size_t n = 0; n < by_nu.size(); ++n)
            for (int k = 0; k < 3; ++k) by_nu[n][k] += o.by_nu[n][k];
    }
};

double binomial_stderr(double f, std::uint64_t n) {
    return n == 0 ? 0.0 : std::sqrt(f * (1.0 - f) / static_cast<double>(n));
}

}  // namespace

SimStats MonteCarloEngine::run(unsigned threads) const {
    if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
    threads = static_cast<unsigned>(std::min<std::uint64_t>(threads, config_.trials));

    std::vector<Tally> tallies(threads);
    auto work = [&](unsigned shard) {
        const std::uint64_t begin = config_.trials * shard / threads;
        const std::uint64_t end = config_.trials * (shard + 1) / threads;
        for (std::uint64_t i = begin; i < end; ++i) tallies[shard].add(run_trial(i));
    };
    if (threads == 1) {
        work(0);
    } else {
        std::vector<std::jthread> pool;
        for (unsigned s = 0; s < threads; ++s) pool.emplace_back(work, s);
    }

    Tally total;
    for (const auto& t : tallies) total.merge(t);

    SimStats s;
    s.config = config_;
    s.trials = config_.trials;
    s.sifted = total.sifted;
    s.conclusive = total.conclusive;
    s.errors = total.errors;
    s.conclusive_fraction = s.sifted ? static_cast<double>(s.conclusive) / s.sifted : 0.0;
    s.conclusive_stderr = binomial_stderr(s.conclusive_fraction, s.sifted);
    s.e_bit = s.conclusive ? static_cast<double>(s.errors) / s.conclusive : 0.0;
    s.e_bit_stderr = binomial_stderr(s.e_bit, s.conclusive);
    for (std::size_t n = 0; n < total.by_nu.size(); ++n) {
        const auto& row = total.by_nu[n];
        if (row[0] == 0) continue;
        s.per_nu.push_back({static_cast<int>(n), row[0], row[1], row[2]});
    }
    return s;
}

SimStats run_monte_carlo(const SimConfig& config, unsigned threads) {
    return MonteCarloEngine(config).run(threads);
}

ExactStats exact_channel_stats(Protocol protocol, int nu, double p, double eta) {
    if (nu < 1 || nu > 2) throw std::invalid_argument("exact_channel_stats: nu must be 1 or 2");
    if (!(p >= 0.0 && p <= 0.75)) throw std::invalid_argument("depolarizing rate must lie in [0, 0.75]");
    if (!(eta > 0.0 && eta <= 1.0)) throw std::invalid_argument("transmittance must lie in (0, 1]");

    const ConstantSet c = constants(protocol);
    const double intact_weight = 1.0 - 4.0 * p / 3.0;
    const LinearOperator mixed = 0.5 * c.identity;
    const double sift_weight = 1.0 / c.sift_size();

    double conclusive = 0.0, errors = 0.0;
    for (const auto& u : c.sift) {
        for (int j = 0; j < 2; ++j) {
            const LinearOperator intact = qmath::projector(u * c.phi[j]);
            for (int jb = 0; jb < 2; ++jb) {
                // Bob's effects after undoing U_g: index 0 = phi_bar (conclusive), 1 = phi
                const std::array<LinearOperator, 2> effects{
                    u * qmath::projector(c.phi_bar[jb]) * u.adjoint(),
                    u * qmath::projector(c.phi[jb]) * u.adjoint()};
                const bool wrong = (1 - jb) != j;
                for (int branch = 0; branch < 2; ++branch) {
                    const double bw = branch == 0 ? intact_weight : 1.0 - intact_weight;
                    if (bw == 0.0) continue;
                    const LinearOperator& photon = branch == 0 ? intact : mixed;
                    for (int mask = 1; mask < (1 << nu); ++mask) {
                        const int arrived = std::popcount(static_cast<unsigned>(mask));
                        const double aw =
                            std::pow(eta, arrived) * std::pow(1.0 - eta, nu - arrived);
                        const LinearOperator rho = qmath::tensor_power(photon, arrived);
                        double p_conc = 0.0;
                        for (int outcome = 0; outcome < (1 << arrived); ++outcome) {
                            LinearOperator effect = LinearOperator::Identity(1, 1);
                            for (int k = arrived - 1; k >= 0; --k)
                                effect = qmath::tensor(effect, effects[(outcome >> k) & 1]);
                            const double prob = std::max(0.0, (rho * effect).trace().real());
                            const int plain = std::popcount(static_cast<unsigned>(outcome));
                            if (plain == 0) p_conc += prob;
                            else if (plain < arrived) p_conc += 0.5 * prob;  // squash coin
                        }
                        const double w = sift_weight * 0.25 * bw * aw * p_conc;
                        conclusive += w;
                        if (wrong) errors += w;
                    }
                }
            }
        }
    }
    return {protocol, nu, p, eta, conclusive, errors, conclusive > 0.0 ? errors / conclusive : 0.0};
}

namespace {

double zscore(double sim, double exact, double stderr_) {
    const double diff = sim - exact;
    if (stderr_ > 0.0) return diff / stderr_;
    if (std::abs(diff) <= 1e-12) return 0.0;
    return std::copysign(std::numeric_limits<double>::infinity(), diff);
}

}  // namespace

Comparison compare(const SimStats& sim, const ExactStats& exact) {
    const auto& cfg = sim.config;
    if (cfg.protocol != exact.protocol || cfg.source.kind != PhotonSource::Kind::Fixed ||
        cfg.source.nu != exact.nu || cfg.depolarizing != exact.depolarizing ||
        cfg.transmittance != exact.transmittance)
        throw std::invalid_argument("compare: simulation and exact parameters differ");
    Comparison c{zscore(sim.conclusive_fraction, exact.conclusive, sim.conclusive_stderr),
                 zscore(sim.e_bit, exact.e_bit, sim.e_bit_stderr), false};
    c.pass = std::abs(c.z_conclusive) <= 3.0 && std::abs(c.z_e_bit) <= 3.0;
    return c;
}

SimStats as_sim_stats(const ExactStats& exact) {
    SimStats s;
    s.config.protocol = exact.protocol;
    s.config.source = PhotonSource::fixed(exact.nu);
    s.config.depolarizing = exact.depolarizing;
    s.config.transmittance = exact.transmittance;
    s.conclusive_fraction = exact.conclusive;
    s.e_bit = exact.e_bit;
    return s;
}

}  // namespace sargcert
