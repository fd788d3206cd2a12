#pragma once

#include <cstdint>
#include <vector>

#include "sargcert/qmath.hpp"

namespace sargcert {

struct PhotonSource {
    enum class Kind { Fixed, Coherent };
    Kind kind = Kind::Fixed;
    int nu = 1;       // Fixed
    double mu = 0.0;  // Coherent: Poisson mean, truncated at kMaxCoherentPhotons

    static PhotonSource fixed(int nu) { return {Kind::Fixed, nu, 0.0}; }
    static PhotonSource coherent(double mu) { return {Kind::Coherent, 0, mu}; }
};

inline constexpr int kMaxCoherentPhotons = 6;
inline constexpr int kMaxFixedPhotons = 4;

struct SimConfig {
    Protocol protocol = Protocol::FourState;
    PhotonSource source;
    double depolarizing = 0.0;   // p in [0, 0.75]
    double transmittance = 1.0;  // per-photon eta in (0, 1]
    std::uint64_t trials = 0;
    std::uint64_t seed = 0;
    // Added (mod 4) to both parties' R^K index; the statistics must not move.
    int sift_offset = 0;

    void validate() const;
};

struct TrialRecord {
    int alice_bit = 0;
    int alice_k = 0, alice_l = 0;
    int bob_k = 0, bob_l = 0;
    int bob_basis = 0;  // j'
    bool sifted = false;
    int photons_sent = 0;
    int photons_arrived = 0;
    int bar_clicks = 0;    // arrived photons giving phi_bar_{j'}
    int plain_clicks = 0;  // arrived photons giving phi_{j'}
    bool squash_used = false;
    bool conclusive = false;
    int inferred_bit = -1;
    bool error = false;
};

struct PhotonBreakdown {
    int nu = 0;
    std::uint64_t sifted = 0;
    std::uint64_t conclusive = 0;
    std::uint64_t errors = 0;
};

struct SimStats {
    SimConfig config;
    std::uint64_t trials = 0;
    std::uint64_t sifted = 0;
    std::uint64_t conclusive = 0;
    std::uint64_t errors = 0;
    double conclusive_fraction = 0.0;
    double conclusive_stderr = 0.0;
    double e_bit = 0.0;
    double e_bit_stderr = 0.0;
    std::vector<PhotonBreakdown> per_nu;  // by photons sent, ascending, empty rows omitted
};

/// Counter-based generator: the stream of a trial depends only on
/// (master seed, trial index).
class TrialRng {
public:
    TrialRng(std::uint64_t seed, std::uint64_t index);
    std::uint64_t next();
    double uniform();  // [0, 1)
    int below(int n);
    bool coin() { return (next() >> 63) != 0; }

private:
    std::uint64_t state_;
};

class MonteCarloEngine {
public:
    explicit MonteCarloEngine(SimConfig config);

    TrialRecord run_trial(std::uint64_t index) const;
    SimStats run(unsigned threads = 0) const;

    const SimConfig& config() const { return config_; }

private:
    int draw_photon_number(TrialRng& rng) const;

    SimConfig config_;
    ConstantSet constants_;
    std::vector<double> photon_cdf_;
};

SimStats run_monte_carlo(const SimConfig& config, unsigned threads = 0);

struct ExactStats {
    Protocol protocol;
    int nu;
    double depolarizing;
    double transmittance;
    double conclusive;  // per sifted pulse
    double errors;      // conclusive and wrong, per sifted pulse
    double e_bit;
};

/// Exact enumeration over sift rotations, bit values, Bob's basis, channel
/// branch, arrival pattern, outcomes and squash coin. nu must be 1 or 2.
ExactStats exact_channel_stats(Protocol protocol, int nu, double p, double eta);

struct Comparison {
    double z_conclusive;
    double z_e_bit;
    bool pass;  // both |z| <= 3
};

/// Throws std::invalid_argument on parameter mismatch.
Comparison compare(const SimStats& sim, const ExactStats& exact);
/// A zero-variance SimStats carrying the exact values (self-comparison).
SimStats as_sim_stats(const ExactStats& exact);

}  // namespace sargcert
