#include "sargcert/qmath.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace sargcert {

std::string to_string(Protocol p) {
    return p == Protocol::FourState ? "four-state" : "six-state";
}

Protocol parse_protocol(std::string_view text) {
    if (text == "four-state") return Protocol::FourState;
    if (text == "six-state") return Protocol::SixState;
    throw std::invalid_argument("unknown protocol: " + std::string(text));
}

namespace qmath {

LinearOperator tensor(const LinearOperator& a, const LinearOperator& b) {
    LinearOperator out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i)
        for (Eigen::Index j = 0; j < a.cols(); ++j)
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    return out;
}

StateVector tensor(const StateVector& a, const StateVector& b) {
    StateVector out(a.size() * b.size());
    for (Eigen::Index i = 0; i < a.size(); ++i) out.segment(i * b.size(), b.size()) = a(i) * b;
    return out;
}

StateVector tensor_power(const StateVector& a, int n) {
    StateVector out = StateVector::Ones(1);
    for (int k = 0; k < n; ++k) out = tensor(out, a);
    return out;
}

LinearOperator tensor_power(const LinearOperator& a, int n) {
    LinearOperator out = LinearOperator::Identity(1, 1);
    for (int k = 0; k < n; ++k) out = tensor(out, a);
    return out;
}

LinearOperator projector(const StateVector& v) { return v * v.adjoint(); }

double max_abs(const LinearOperator& m) {
    return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

double hermitian_defect(const LinearOperator& h) {
    if (h.rows() != h.cols()) return std::numeric_limits<double>::infinity();
    return max_abs(h - h.adjoint());
}

bool is_hermitian(const LinearOperator& h, double tol) {
    if (h.rows() != h.cols()) return false;
    const double scale = std::max(1.0, max_abs(h));
    return hermitian_defect(h) <= tol * scale;
}

namespace {

Eigen::SelfAdjointEigenSolver<LinearOperator> solve_hermitian(const LinearOperator& h,
                                                              bool vectors) {
    if (h.rows() == 0 || h.rows() != h.cols())
        throw std::invalid_argument("eigen: matrix must be square and non-empty");
    if (!is_hermitian(h))
        throw std::invalid_argument("eigen: matrix is not Hermitian (defect " +
                                    std::to_string(hermitian_defect(h)) + ")");
    LinearOperator sym = 0.5 * (h + h.adjoint());
    Eigen::SelfAdjointEigenSolver<LinearOperator> solver(
        sym, vectors ? Eigen::ComputeEigenvectors : Eigen::EigenvaluesOnly);
    if (solver.info() != Eigen::Success) throw std::runtime_error("eigen: solver failed");
    return solver;
}

}  // namespace

EigenPair min_eigenpair(const LinearOperator& h) {
    auto solver = solve_hermitian(h, true);
    return {solver.eigenvalues()(0), solver.eigenvectors().col(0)};
}

double min_eigenvalue(const LinearOperator& h) {
    return solve_hermitian(h, false).eigenvalues()(0);
}

std::vector<double> eigenvalues(const LinearOperator& h) {
    auto solver = solve_hermitian(h, false);
    const auto& ev = solver.eigenvalues();
    return {ev.data(), ev.data() + ev.size()};
}

std::array<double, 3> bloch_vector(const StateVector& s) {
    if (s.size() != 2) throw std::invalid_argument("bloch_vector: state must be a qubit");
    const double n2 = s.squaredNorm();
    if (std::abs(n2 - 1.0) > 1e-9) throw std::invalid_argument("bloch_vector: state must be unit norm");
    const Complex c = std::conj(s(0)) * s(1);
    return {2.0 * c.real(), 2.0 * c.imag(), std::norm(s(0)) - std::norm(s(1))};
}

}  // namespace qmath

namespace {

StateVector qubit(Complex a, Complex b) {
    StateVector v(2);
    v << a, b;
    return v;
}

// pi/2 Bloch rotation about the axis of the unit qubit state `axis`.
LinearOperator quarter_turn(const StateVector& axis, const StateVector& axis_bar) {
    const double c = std::cos(kPi / 4), s = std::sin(kPi / 4);
    return c * LinearOperator::Identity(2, 2) -
           Complex(0, s) * (qmath::projector(axis) - qmath::projector(axis_bar));
}

}  // namespace

StateVector ConstantSet::entangled_source(int nu) const {
    if (nu < 1) throw std::invalid_argument("entangled_source: nu must be >= 1");
    StateVector out = qmath::tensor(z0, qmath::tensor_power(phi[0], nu)) +
                      qmath::tensor(z1, qmath::tensor_power(phi[1], nu));
    return out / std::sqrt(2.0);
}

ConstantSet constants(Protocol protocol) {
    ConstantSet c;
    c.protocol = protocol;
    const double r2 = std::sqrt(2.0);
    const double s8 = std::sin(kPi / 8), c8 = std::cos(kPi / 8);
    const Complex i(0, 1);

    c.z0 = qubit(1, 0);
    c.z1 = qubit(0, 1);
    c.x0 = qubit(1 / r2, 1 / r2);
    c.x1 = qubit(1 / r2, -1 / r2);
    c.y0 = (c.x0 + i * c.x1) / r2;
    c.y1 = (c.x0 - i * c.x1) / r2;

    c.phi[0] = c8 * c.x0 + s8 * c.x1;
    c.phi[1] = c8 * c.x0 - s8 * c.x1;
    c.phi_bar[0] = -s8 * c.x0 + c8 * c.x1;
    c.phi_bar[1] = s8 * c.x0 + c8 * c.x1;

    c.identity = LinearOperator::Identity(2, 2);
    c.filter = s8 * qmath::projector(c.x0) + c8 * qmath::projector(c.x1);
    c.filter_failure = c8 * qmath::projector(c.x0) + s8 * qmath::projector(c.x1);
    c.rotation = std::cos(kPi / 4) * c.identity +
                 std::sin(kPi / 4) * (c.x1 * c.x0.adjoint() - c.x0 * c.x1.adjoint());
    c.twist = quarter_turn(c.phi[0], c.phi_bar[0]);
    c.twist_alt = quarter_turn(c.phi[1], c.phi_bar[1]);

    c.bell[kChi0Plus] = (qmath::tensor(c.z0, c.z0) + qmath::tensor(c.z1, c.z1)) / r2;
    c.bell[kChi0Minus] = (qmath::tensor(c.z0, c.z0) - qmath::tensor(c.z1, c.z1)) / r2;
    c.bell[kChi1Plus] = (qmath::tensor(c.z0, c.z1) + qmath::tensor(c.z1, c.z0)) / r2;
    c.bell[kChi1Minus] = (qmath::tensor(c.z0, c.z1) - qmath::tensor(c.z1, c.z0)) / r2;
    for (int k = 0; k < 4; ++k) c.bell_projector[k] = qmath::projector(c.bell[k]);

    std::vector<LinearOperator> powers;
    LinearOperator rk = c.identity;
    for (int k = 0; k < 4; ++k) {
        powers.push_back(rk);
        rk = c.rotation * rk;
    }

    std::vector<LinearOperator> cosets{c.identity};
    if (protocol == Protocol::SixState) {
        const LinearOperator t2 = c.twist * c.twist;
        cosets = {c.identity, c.twist, t2, t2 * c.twist, c.twist_alt,
                  c.twist_alt * c.twist_alt * c.twist_alt};
    }
    for (const auto& lead : cosets)
        for (const auto& r : powers) c.sift.push_back(lead * r);
    return c;
}

FilterIdentityReport filter_measurement_identity_check() {
    const ConstantSet c = constants(Protocol::FourState);
    FilterIdentityReport report{0.0, {-1, -1}};
    const std::array<StateVector, 2> z{c.z0, c.z1};
    for (int j = 0; j < 2; ++j) {
        const LinearOperator lhs = c.filter * qmath::projector(z[j]) * c.filter.adjoint();
        double best = std::numeric_limits<double>::infinity();
        for (int k = 0; k < 2; ++k) {
            const double dev = qmath::max_abs(lhs - 0.5 * qmath::projector(c.phi_bar[k]));
            if (dev < best) {
                best = dev;
                report.sigma[j] = k;
            }
        }
        report.max_deviation = std::max(report.max_deviation, best);
    }
    return report;
}

}  // namespace sargcert
