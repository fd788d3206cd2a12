#pragma once

#include <array>
#include <complex>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

namespace sargcert {

using Complex = std::complex<double>;
using StateVector = Eigen::VectorXcd;
using LinearOperator = Eigen::MatrixXcd;

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kStructuralTol = 1e-12;
inline constexpr double kEigenResidualTol = 1e-9;

enum class Protocol { FourState, SixState };

std::string to_string(Protocol p);
/// Accepts "four-state" / "six-state"; throws std::invalid_argument otherwise.
Protocol parse_protocol(std::string_view text);

namespace qmath {

/// Kronecker product, left factor is the most significant index.
LinearOperator tensor(const LinearOperator& a, const LinearOperator& b);
StateVector tensor(const StateVector& a, const StateVector& b);
StateVector tensor_power(const StateVector& a, int n);
LinearOperator tensor_power(const LinearOperator& a, int n);

/// |v><v| for a (not necessarily normalized) vector.
LinearOperator projector(const StateVector& v);

double hermitian_defect(const LinearOperator& h);
bool is_hermitian(const LinearOperator& h, double tol = kStructuralTol);

struct EigenPair {
    double value;
    StateVector vector;
};

/// Smallest eigenvalue and a unit eigenvector. Throws std::invalid_argument
/// when the input is not square or |h - h^dagger| exceeds kStructuralTol
/// (relative to the largest entry when that exceeds one).
EigenPair min_eigenpair(const LinearOperator& h);
double min_eigenvalue(const LinearOperator& h);
/// Ascending eigenvalues of a Hermitian matrix.
std::vector<double> eigenvalues(const LinearOperator& h);

double max_abs(const LinearOperator& m);

/// Bloch vector (<X>, <Y>, <Z>) w.r.t. the computational (Z) basis.
std::array<double, 3> bloch_vector(const StateVector& s);

}  // namespace qmath

/// Named states and operators of the four- and six-state protocols.
///
/// Everything is expressed in the Z product basis |0_z>, |1_z>. The X basis
/// is fixed as |0_x> = (|0_z> + |1_z>)/sqrt2, |1_x> = (|0_z> - |1_z>)/sqrt2,
/// which reproduces |j_z> = (|0_x> + (-1)^j |1_x>)/sqrt2.
struct ConstantSet {
    Protocol protocol;

    StateVector x0, x1, z0, z1, y0, y1;
    std::array<StateVector, 2> phi;      // |phi_j> = cos(pi/8)|0_x> + (-1)^j sin(pi/8)|1_x>
    std::array<StateVector, 2> phi_bar;  // <phi_bar_j|phi_j> = 0, R|phi_bar_1> = |phi_bar_0>

    LinearOperator identity;
    LinearOperator filter;          // F, success branch of Bob's filtering
    LinearOperator filter_failure;  // sqrt(1 - F^2)
    LinearOperator rotation;        // R, pi/2 Bloch rotation about Y
    LinearOperator twist;           // pi/2 Bloch rotation about the |phi_0> axis
    LinearOperator twist_alt;       // pi/2 Bloch rotation about the |phi_1> axis

    // Bell states chi_{0+}, chi_{0-}, chi_{1+}, chi_{1-} (Alice first).
    std::array<StateVector, 4> bell;
    std::array<LinearOperator, 4> bell_projector;

    /// Sift rotations U_g. Four-state: R^K, K = 0..3. Six-state: C_L R^K with
    /// L = 0..5 over coset representatives {1, T, T^2, T^3, T', T'^3}, giving
    /// the 24 proper rotations of the octahedron; index g = 4 L + K.
    std::vector<LinearOperator> sift;

    int sift_size() const { return static_cast<int>(sift.size()); }

    /// |Psi^(nu)>_AB = (|0_z>|phi_0>^nu + |1_z>|phi_1>^nu)/sqrt2, Alice first.
    StateVector entangled_source(int nu) const;
};

enum BellIndex : int { kChi0Plus = 0, kChi0Minus = 1, kChi1Plus = 2, kChi1Minus = 3 };

ConstantSet constants(Protocol protocol);

struct FilterIdentityReport {
    double max_deviation;
    /// sigma[j'] such that F|j'_z><j'_z|F^dagger = 1/2 P(|phi_bar_sigma>).
    std::array<int, 2> sigma;
};

/// Compares F|j'_z><j'_z|F^dagger against 1/2 |phi_bar_k><phi_bar_k| for
/// both k and keeps the matching assignment.
FilterIdentityReport filter_measurement_identity_check();

}  // namespace sargcert
