#include "sargcert/attack_forms.hpp"

#include <stdexcept>

namespace sargcert {

namespace {

void check_nu(int nu) {
    if (nu < 1 || nu > kMaxPhotons)
        throw std::invalid_argument("photon number must be in 1.." + std::to_string(kMaxPhotons));
}

}  // namespace

EffectiveAttack::EffectiveAttack(int nu, LinearOperator map) : nu_(nu), map_(std::move(map)) {
    check_nu(nu);
    if (map_.rows() != 2 || map_.cols() != (1 << nu))
        throw std::invalid_argument("EffectiveAttack: map must be 2 x 2^nu");
}

EffectiveAttack EffectiveAttack::zero(int nu) {
    check_nu(nu);
    return {nu, LinearOperator::Zero(2, 1 << nu)};
}

EffectiveAttack EffectiveAttack::unflatten(const StateVector& coords, int nu) {
    check_nu(nu);
    const int cols = 1 << nu;
    if (coords.size() != 2 * cols)
        throw std::invalid_argument("unflatten: coordinate vector has wrong length");
    LinearOperator m(2, cols);
    for (int r = 0; r < 2; ++r)
        for (int c = 0; c < cols; ++c) m(r, c) = coords(r * cols + c);
    return {nu, std::move(m)};
}

StateVector EffectiveAttack::flatten() const {
    const auto cols = map_.cols();
    StateVector v(2 * cols);
    for (int r = 0; r < 2; ++r)
        for (Eigen::Index c = 0; c < cols; ++c) v(r * cols + c) = map_(r, c);
    return v;
}

EffectiveAttack blocks_to_attack(std::span<const LinearOperator> blocks, int nu) {
    check_nu(nu);
    const int trash = 1 << (nu - 1);
    if (static_cast<int>(blocks.size()) != trash)
        throw std::invalid_argument("blocks_to_attack: expected 2^(nu-1) blocks");
    LinearOperator m = LinearOperator::Zero(2, 2 * trash);
    for (int u = 0; u < trash; ++u) {
        if (blocks[u].rows() != 2 || blocks[u].cols() != 2)
            throw std::invalid_argument("blocks_to_attack: blocks must be 2x2");
        for (int b = 0; b < 2; ++b) m.col(b * trash + u) = blocks[u].col(b);
    }
    return {nu, std::move(m)};
}

std::string to_string(Event e) {
    switch (e) {
        case Event::Fil: return "fil";
        case Event::Bit: return "bit";
        case Event::Ph: return "ph";
        case Event::Chi0Plus: return "bell:chi0+";
        case Event::Chi0Minus: return "bell:chi0-";
        case Event::Chi1Plus: return "bell:chi1+";
        case Event::Chi1Minus: return "bell:chi1-";
    }
    return "?";
}

PairStateModel::PairStateModel(Protocol protocol, int nu)
    : constants_(sargcert::constants(protocol)), nu_(nu) {
    check_nu(nu);
    const StateVector psi = constants_.entangled_source(nu);
    const int cols = 1 << nu;
    for (const auto& u : constants_.sift) {
        bob_ops_.push_back(constants_.filter * u.adjoint());
        const StateVector rotated =
            qmath::tensor(constants_.identity, qmath::tensor_power(u, nu)) * psi;
        LinearOperator w(2, cols);
        for (int a = 0; a < 2; ++a) w.row(a) = rotated.segment(a * cols, cols).transpose();
        sources_.push_back(std::move(w));
    }
}

LinearOperator PairStateModel::conditional_pair_state(const EffectiveAttack& attack) const {
    if (attack.nu() != nu_) throw std::invalid_argument("conditional_pair_state: photon number mismatch");
    LinearOperator rho = LinearOperator::Zero(4, 4);
    StateVector out(4);
    for (std::size_t g = 0; g < bob_ops_.size(); ++g) {
        // out[a, o] = sum_i W[a, i] (B M)[o, i]
        const LinearOperator bm = bob_ops_[g] * attack.map();
        const LinearOperator o = sources_[g] * bm.transpose();
        for (int a = 0; a < 2; ++a)
            for (int b = 0; b < 2; ++b) out(2 * a + b) = o(a, b);
        rho.noalias() += out * out.adjoint();
    }
    return rho / static_cast<double>(bob_ops_.size());
}

LinearOperator conditional_pair_state(const EffectiveAttack& attack, Protocol protocol) {
    return PairStateModel(protocol, attack.nu()).conditional_pair_state(attack);
}

double event_weight(Event e, const LinearOperator& rho) {
    if (rho.rows() != 4 || rho.cols() != 4) throw std::invalid_argument("event_weight: expected 4x4 state");
    auto overlap = [&](int k) {
        static const ConstantSet c = constants(Protocol::FourState);
        return (c.bell[k].adjoint() * rho * c.bell[k])(0, 0).real();
    };
    switch (e) {
        case Event::Fil: return rho.trace().real();
        case Event::Bit: return overlap(kChi1Plus) + overlap(kChi1Minus);
        case Event::Ph: return overlap(kChi0Minus) + overlap(kChi1Minus);
        case Event::Chi0Plus: return overlap(kChi0Plus);
        case Event::Chi0Minus: return overlap(kChi0Minus);
        case Event::Chi1Plus: return overlap(kChi1Plus);
        case Event::Chi1Minus: return overlap(kChi1Minus);
    }
    return 0.0;
}

EventWeights event_weights(const LinearOperator& rho) {
    return {event_weight(Event::Fil, rho), event_weight(Event::Bit, rho), event_weight(Event::Ph, rho)};
}

double EventForm::evaluate(const StateVector& coords) const {
    return (coords.adjoint() * matrix * coords)(0, 0).real();
}

FormSet::FormSet(Protocol protocol, int nu) : protocol_(protocol), nu_(nu) {
    const PairStateModel model(protocol, nu);
    const int d = EffectiveAttack::dimension(nu);
    for (auto& f : forms_) f = LinearOperator::Zero(d, d);

    auto weights_at = [&](const StateVector& v) {
        const LinearOperator rho = model.conditional_pair_state(EffectiveAttack::unflatten(v, nu));
        std::array<double, 7> w{};
        for (Event e : kAllEvents) w[static_cast<int>(e)] = event_weight(e, rho);
        return w;
    };

    std::vector<std::array<double, 7>> diag(d);
    for (int i = 0; i < d; ++i) {
        diag[i] = weights_at(StateVector::Unit(d, i));
        for (int k = 0; k < 7; ++k) forms_[k](i, i) = diag[i][k];
    }
    const Complex imag(0, 1);
    for (int i = 0; i < d; ++i) {
        for (int j = i + 1; j < d; ++j) {
            const StateVector ei = StateVector::Unit(d, i), ej = StateVector::Unit(d, j);
            const auto sum = weights_at(ei + ej);
            const auto twisted = weights_at(ei + imag * ej);
            for (int k = 0; k < 7; ++k) {
                const double re = 0.5 * (sum[k] - diag[i][k] - diag[j][k]);
                const double im = 0.5 * (diag[i][k] + diag[j][k] - twisted[k]);
                forms_[k](i, j) = Complex(re, im);
                forms_[k](j, i) = Complex(re, -im);
            }
        }
    }
}

EventWeights FormSet::weights(const EffectiveAttack& attack) const {
    if (attack.nu() != nu_) throw std::invalid_argument("FormSet::weights: photon number mismatch");
    const StateVector v = attack.flatten();
    auto q = [&](const LinearOperator& h) { return (v.adjoint() * h * v)(0, 0).real(); };
    return {q(fil()), q(bit()), q(ph())};
}

EventForm form_matrix(Event event, Protocol protocol, int nu) {
    return FormSet(protocol, nu).form(event);
}

}  // namespace sargcert
