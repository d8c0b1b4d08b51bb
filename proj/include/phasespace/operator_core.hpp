#pragma once

#include <array>
#include <complex>

#include <Eigen/Dense>

#include "phasespace/errors.hpp"

namespace phasespace {

using cplx = std::complex<double>;

/// Units and ladder-operator scaling shared by every module.
///
/// hbar = 1 and q = (a + a^dag)/sqrt(2), p = -i(a - a^dag)/sqrt(2), so [q, p] = i
/// and the vacuum has variance 1/2 in every quadrature.
struct LadderConvention {
    static constexpr double hbar = 1.0;
    static constexpr double quad_scale = 0.70710678118654752440;  // 1/sqrt(2)
    static constexpr double vacuum_variance = 0.5;
};

/// Truncation and degeneracy thresholds.
struct Tolerances {
    static constexpr int default_n_max = 60;
    /// Admission margin: a state may not put more than tail_tol of its weight
    /// on the top `tail_margin` number states.
    static constexpr int tail_margin = 10;
    static constexpr double tail_tol = 1e-10;
    static constexpr double orth_tol = 1e-10;
    static constexpr double hermitian_tol = 1e-12;
};

/// Truncated number-basis state vector, indices 0..n_max.
class FockVector {
public:
    explicit FockVector(Eigen::VectorXcd amplitudes);

    int n_max() const { return static_cast<int>(amplitudes_.size()) - 1; }
    int dim() const { return static_cast<int>(amplitudes_.size()); }
    const Eigen::VectorXcd& amplitudes() const { return amplitudes_; }
    double squared_norm() const { return amplitudes_.squaredNorm(); }

private:
    Eigen::VectorXcd amplitudes_;
};

/// Truncated number-basis operator. Represents states, effects and pseudo-states.
class FockOperator {
public:
    /// Throws PreconditionError if `hermitian` is asserted but the matrix is not
    /// Hermitian within Tolerances::hermitian_tol (relative to its largest entry).
    explicit FockOperator(Eigen::MatrixXcd entries, bool hermitian = false);

    static FockOperator identity(int n_max);
    static FockOperator projector(const FockVector& psi);
    /// |ket><bra|
    static FockOperator dyad(const FockVector& ket, const FockVector& bra);

    int n_max() const { return static_cast<int>(entries_.rows()) - 1; }
    int dim() const { return static_cast<int>(entries_.rows()); }
    const Eigen::MatrixXcd& matrix() const { return entries_; }
    bool hermitian() const { return hermitian_; }
    cplx trace() const { return entries_.trace(); }
    cplx operator()(int row, int col) const { return entries_(row, col); }

    FockOperator scaled(double factor) const;

private:
    Eigen::MatrixXcd entries_;
    bool hermitian_;
};

// ---------------------------------------------------------------------------
// Ladder and quadrature operators

Eigen::MatrixXcd annihilation_matrix(int n_max);
FockOperator position_operator(int n_max);
FockOperator momentum_operator(int n_max);
/// x_theta = q cos(theta) + p sin(theta)
FockOperator quadrature_operator(double theta, int n_max);

// ---------------------------------------------------------------------------
// States

/// Coherent state |alpha>. Throws TruncationInsufficient when the Poisson tail
/// beyond n_max carries more than Tolerances::tail_tol.
FockVector coherent_state(cplx alpha, int n_max);

/// Squeezed vacuum S(zeta)|0>, zeta = r e^{i phi}.
FockVector squeezed_vacuum(double r, double phi, int n_max);

/// D(alpha) S(r e^{i phi}) |0>; same tail policy as coherent_state.
FockVector displaced_squeezed_state(cplx alpha, double r, double phi, int n_max);

/// Matrix elements <m|D(xi)|n> of the untruncated displacement operator,
/// restricted to 0..n_max. Closed form in associated Laguerre polynomials.
Eigen::MatrixXcd displacement_matrix(cplx xi, int n_max);

/// Weight of the operator on the top Tolerances::tail_margin number states,
/// relative to its total diagonal weight.
double fock_tail_weight(const FockOperator& op);

/// Throws TruncationInsufficient unless fock_tail_weight(op) < tail_tol.
void require_admitted(const FockOperator& op, const char* what);

// ---------------------------------------------------------------------------
// Exponentials and products

/// exp(i (k_q q + k_p p)) of the truncated quadrature matrices, by Hermitian
/// eigendecomposition. Unitary on the truncated space; matches the untruncated
/// displacement operator only while exp_ikx_accuracy_degraded(k, n_max) is false.
FockOperator exp_ikx(std::array<double, 2> k, int n_max);

/// True when |k| exceeds the range over which the truncated exponential reproduces
/// low-lying matrix elements of the infinite-dimensional one.
bool exp_ikx_accuracy_degraded(std::array<double, 2> k, int n_max);

/// Displacement amplitude xi with D(xi) = exp(i (k_q q + k_p p)).
cplx displacement_amplitude(std::array<double, 2> k);

/// (AB + BA)/2
FockOperator jordan_product(const FockOperator& a, const FockOperator& b);

/// Tr[AB]
cplx trace_pairing(const FockOperator& a, const FockOperator& b);

// ---------------------------------------------------------------------------
// Smoothed weak-valued pseudo-state

/// (E_R o rho_F) / Tr[E_R rho_F]. Hermitian with unit trace; may have negative
/// eigenvalues. E_R need not be normalized.
FockOperator swv_state(const FockOperator& rho_f, const FockOperator& e_r);

/// Closed form of swv_state(|alpha><alpha|, |beta><beta|).
FockOperator swv_coherent_pair(cplx alpha, cplx beta, int n_max);

/// Re( Tr[A rho_F E_R] / Tr[rho_F E_R] ), the real weak value of A.
double real_weak_value(const FockOperator& a, const FockOperator& rho_f, const FockOperator& e_r);

/// Tr[x_theta^2 rho] - Tr[x_theta rho]^2 for a unit-trace Hermitian (pseudo-)state.
double pseudo_state_variance(const FockOperator& rho, double theta);

/// Smallest eigenvalue of a Hermitian operator.
double min_eigenvalue(const FockOperator& op);

}  // namespace phasespace
