#pragma once

#include <array>
#include <optional>
#include <vector>

#include "sargcert/qmath.hpp"

namespace sargcert {

/// h(e) in bits, h(0) = h(1) = 0. Throws for e outside [0, 1].
double binary_entropy(double e);

/// Per-conclusive-pair probabilities of (bit error, phase error).
struct JointErrorDistribution {
    double q00, q01, q10, q11;

    double entropy() const;
    double bit_error() const { return q10 + q11; }
    double phase_error() const { return q01 + q11; }
};

struct WorstJoint {
    JointErrorDistribution dist;
    double h_max;
    double s;  // q11
};

/// Single-photon worst case: maximize H over q11 = s in [e/2, e] with
/// marginals (e, 3e/2). The entropy is concave in s with stationary point
/// s = 3e^2/2, so the maximizer is that point clamped to the segment.
/// Requires 0 <= e <= 0.4.
WorstJoint worst_joint_single(double e_bit);
/// Same maximization by golden-section search over s (cross-check route).
WorstJoint worst_joint_single_numeric(double e_bit);

struct RateResult {
    double e_bit;
    double e_ph;
    std::optional<double> x_opt;                  // two-photon only
    std::optional<JointErrorDistribution> joint;  // single-photon only
    double rate;
};

struct ThresholdResult {
    Protocol protocol;
    int nu;
    double e_threshold;
    double p_threshold;  // depolarizing rate giving e_threshold
    double bracket_lo, bracket_hi;
    double residual;
    std::optional<double> x_opt;
    bool key_possible = true;  // false if the rate is non-positive already at e = 0
};

RateResult rate_single(double e_bit);
ThresholdResult threshold_single();

struct PhaseBound {
    double e_ph;
    double x_opt;
    bool clamped;  // minimizer sat at the edge of [0, kMaxBoundSlope]
};

inline constexpr double kMaxBoundSlope = 50.0;

/// min over x in [0, 50] of x e + g(x), by golden section. At e = 0 the
/// infimum sin^2(pi/8) is returned with x_opt clamped to 50.
PhaseBound ephase_bound_two(double e_bit);
RateResult rate_two(double e_bit);
ThresholdResult threshold_two();

/// Conclusive bit-error rate of a depolarizing channel, 4p / (3 + 4p).
double depol_ebit(double p);
/// Exact inverse, 3e / (4 (1 - e)).
double depol_p(double e);

struct DecoyInputs {
    double p_conc;
    double e_bit;
    std::array<double, 2> xi;     // conclusive fraction from nu = 1, 2
    std::array<double, 2> e_nu;  // bit-error upper bounds for nu = 1, 2

    void validate() const;
};

/// R = -P_conc h(e_bit) + sum_nu xi(nu) (1 - Hbar(Z_nu | X_nu)).
double decoy_total_rate(const DecoyInputs& d);
/// Hbar(Z_1|X_1) = H_max(e) - h(e).
double conditional_phase_entropy_single(double e);
/// Hbar(Z_2|X_2) = h(e_ph bound).
double conditional_phase_entropy_two(double e);

/// Threshold from the numerically certified frontier: e_ph(e) = min over the
/// x grid of x e + y*(x), rate 1 - h(e) - h(e_ph).
ThresholdResult frontier_threshold(Protocol protocol, int nu, const std::vector<double>& xs);
ThresholdResult sixstate_thresholds(int nu);

struct ReferenceThresholds {
    static constexpr double four_state_single = 0.0968;
    static constexpr double four_state_two = 0.0271;
    static constexpr double four_state_single_p = 0.0804;
    static constexpr double four_state_two_p = 0.0208;
    static constexpr double two_photon_x = 2.747;
    static constexpr std::array<double, 4> six_state{0.112, 0.0560, 0.0237, 0.00788};
    static constexpr std::array<double, 4> six_state_p{0.0949, 0.0445, 0.0182, 0.00595};
    static constexpr double bb84_p = 0.165;
    static constexpr double original_six_state_p = 0.190;
};

}  // namespace sargcert
