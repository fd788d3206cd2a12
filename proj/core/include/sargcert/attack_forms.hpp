#pragma once

#include <array>
#include <span>
#include <string>
#include <vector>

#include "sargcert/qmath.hpp"

namespace sargcert {

inline constexpr int kMaxPhotons = 5;

/// One Kraus branch of Eve's channel on a nu-photon pulse, after the trash
/// photons have been projected. Rows index Bob's kept qubit, columns the nu
/// transit qubits in the Z product basis (kept qubit most significant).
class EffectiveAttack {
public:
    EffectiveAttack(int nu, LinearOperator map);

    static EffectiveAttack zero(int nu);
    /// Row-major inverse of flatten().
    static EffectiveAttack unflatten(const StateVector& coords, int nu);

    int nu() const { return nu_; }
    const LinearOperator& map() const { return map_; }
    /// Row-major (output index major) coordinate vector of length 2^(nu+1).
    StateVector flatten() const;

    static int dimension(int nu) { return 1 << (nu + 1); }

private:
    int nu_;
    LinearOperator map_;
};

/// Assembles an attack from per-trash-index 2x2 blocks: block u is the action
/// on Bob's photon when the trash photons select index u.
EffectiveAttack blocks_to_attack(std::span<const LinearOperator> blocks, int nu);

enum class Event { Fil, Bit, Ph, Chi0Plus, Chi0Minus, Chi1Plus, Chi1Minus };
inline constexpr std::array<Event, 7> kAllEvents{Event::Fil,      Event::Bit,      Event::Ph,
                                                 Event::Chi0Plus, Event::Chi0Minus,
                                                 Event::Chi1Plus, Event::Chi1Minus};
std::string to_string(Event e);

struct EventWeights {
    double fil;
    double bit;
    double ph;
};

/// Conditional two-qubit state of Alice's qubit and Bob's kept qubit after a
/// successful filter on a sifted round, averaged over the sift rotations.
/// Unnormalized: its trace is the filter success probability.
class PairStateModel {
public:
    PairStateModel(Protocol protocol, int nu);

    Protocol protocol() const { return constants_.protocol; }
    int nu() const { return nu_; }
    const ConstantSet& constants() const { return constants_; }

    LinearOperator conditional_pair_state(const EffectiveAttack& attack) const;

private:
    ConstantSet constants_;
    int nu_;
    // Per sift rotation: Bob's post-channel operator F U_g^dagger and Alice's
    // entangled source rotated by 1 (x) U_g^{(x)nu}, reshaped 2 x 2^nu.
    std::vector<LinearOperator> bob_ops_;
    std::vector<LinearOperator> sources_;
};

LinearOperator conditional_pair_state(const EffectiveAttack& attack, Protocol protocol);

/// Event weights of a (possibly unnormalized) pair state.
EventWeights event_weights(const LinearOperator& rho);
double event_weight(Event e, const LinearOperator& rho);

/// Hermitian form H with p_event(attack) = v^dagger H v, v = attack.flatten().
struct EventForm {
    Event event;
    Protocol protocol;
    int nu;
    LinearOperator matrix;

    double evaluate(const StateVector& coords) const;
};

/// All seven forms for one (protocol, nu), built by polarization over basis
/// attacks e_i, e_i + e_j and e_i + i e_j.
class FormSet {
public:
    FormSet(Protocol protocol, int nu);

    Protocol protocol() const { return protocol_; }
    int nu() const { return nu_; }
    int dimension() const { return EffectiveAttack::dimension(nu_); }

    const LinearOperator& operator[](Event e) const { return forms_[static_cast<int>(e)]; }
    EventForm form(Event e) const { return {e, protocol_, nu_, (*this)[e]}; }
    const LinearOperator& fil() const { return (*this)[Event::Fil]; }
    const LinearOperator& bit() const { return (*this)[Event::Bit]; }
    const LinearOperator& ph() const { return (*this)[Event::Ph]; }

    EventWeights weights(const EffectiveAttack& attack) const;

private:
    Protocol protocol_;
    int nu_;
    std::array<LinearOperator, 7> forms_;
};

EventForm form_matrix(Event event, Protocol protocol, int nu);

}  // namespace sargcert
