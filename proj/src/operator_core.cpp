#include "phasespace/operator_core.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "displacement_kernel.hpp"

namespace phasespace {

namespace {

constexpr double kSqrtHalf = LadderConvention::quad_scale;

bool all_finite(const Eigen::MatrixXcd& m)
{
    return m.allFinite();
}

double hermitian_defect(const Eigen::MatrixXcd& m)
{
    return (m - m.adjoint()).cwiseAbs().maxCoeff();
}

void require_same_dim(const FockOperator& a, const FockOperator& b, const char* what)
{
    if (a.dim() != b.dim()) {
        throw DimensionMismatch(std::string(what) + ": operators have n_max " + std::to_string(a.n_max()) +
                                " and " + std::to_string(b.n_max()));
    }
}

void require_tail(const Eigen::VectorXcd& amplitudes, const char* what)
{
    const double missing = 1.0 - amplitudes.squaredNorm();
    if (missing > Tolerances::tail_tol) {
        throw TruncationInsufficient(std::string(what) + ": tail mass " + describe_value(missing) +
                                     " beyond n_max = " + std::to_string(amplitudes.size() - 1) +
                                     " exceeds tail_tol");
    }
}

FockOperator normalized_hermitian(Eigen::MatrixXcd m)
{
    Eigen::MatrixXcd sym = 0.5 * (m + m.adjoint());
    return FockOperator(std::move(sym), true);
}

}  // namespace

// ---------------------------------------------------------------------------

FockVector::FockVector(Eigen::VectorXcd amplitudes) : amplitudes_(std::move(amplitudes))
{
    if (amplitudes_.size() < 2) throw PreconditionError("FockVector: n_max must be >= 1");
    if (!amplitudes_.allFinite()) throw PreconditionError("FockVector: non-finite amplitude");
}

FockOperator::FockOperator(Eigen::MatrixXcd entries, bool hermitian)
    : entries_(std::move(entries)), hermitian_(hermitian)
{
    if (entries_.rows() != entries_.cols() || entries_.rows() < 2) {
        throw DimensionMismatch("FockOperator: expected a square matrix with n_max >= 1");
    }
    if (!all_finite(entries_)) throw PreconditionError("FockOperator: non-finite entry");
    if (hermitian_) {
        const double scale = std::max(1.0, entries_.cwiseAbs().maxCoeff());
        if (hermitian_defect(entries_) > Tolerances::hermitian_tol * scale) {
            throw PreconditionError("FockOperator: matrix flagged Hermitian is not");
        }
    }
}

FockOperator FockOperator::identity(int n_max)
{
    return FockOperator(Eigen::MatrixXcd::Identity(n_max + 1, n_max + 1), true);
}

FockOperator FockOperator::projector(const FockVector& psi)
{
    const auto& v = psi.amplitudes();
    return normalized_hermitian(v * v.adjoint());
}

FockOperator FockOperator::dyad(const FockVector& ket, const FockVector& bra)
{
    if (ket.dim() != bra.dim()) throw DimensionMismatch("dyad: vectors have different n_max");
    return FockOperator(ket.amplitudes() * bra.amplitudes().adjoint());
}

FockOperator FockOperator::scaled(double factor) const
{
    return FockOperator(entries_ * factor, hermitian_);
}

// ---------------------------------------------------------------------------

Eigen::MatrixXcd annihilation_matrix(int n_max)
{
    if (n_max < 1) throw PreconditionError("annihilation_matrix: n_max must be >= 1");
    Eigen::MatrixXcd a = Eigen::MatrixXcd::Zero(n_max + 1, n_max + 1);
    for (int n = 1; n <= n_max; ++n) a(n - 1, n) = std::sqrt(double(n));
    return a;
}

FockOperator position_operator(int n_max)
{
    const Eigen::MatrixXcd a = annihilation_matrix(n_max);
    return FockOperator(kSqrtHalf * (a + a.adjoint()), true);
}

FockOperator momentum_operator(int n_max)
{
    const Eigen::MatrixXcd a = annihilation_matrix(n_max);
    return FockOperator(cplx(0.0, -kSqrtHalf) * (a - a.adjoint()), true);
}

FockOperator quadrature_operator(double theta, int n_max)
{
    const Eigen::MatrixXcd a = annihilation_matrix(n_max);
    // q cos + p sin = (a e^{-i theta} + a^dag e^{i theta}) / sqrt(2)
    const cplx phase = std::polar(1.0, theta);
    Eigen::MatrixXcd x = kSqrtHalf * (std::conj(phase) * a + phase * a.adjoint());
    return normalized_hermitian(std::move(x));
}

// ---------------------------------------------------------------------------

FockVector coherent_state(cplx alpha, int n_max)
{
    if (n_max < 1) throw PreconditionError("coherent_state: n_max must be >= 1");
    Eigen::VectorXcd c(n_max + 1);
    c(0) = std::exp(-0.5 * std::norm(alpha));
    for (int n = 1; n <= n_max; ++n) c(n) = c(n - 1) * alpha / std::sqrt(double(n));
    require_tail(c, "coherent_state");
    return FockVector(std::move(c));
}

FockVector squeezed_vacuum(double r, double phi, int n_max)
{
    if (n_max < 1) throw PreconditionError("squeezed_vacuum: n_max must be >= 1");
    if (r < 0.0) throw PreconditionError("squeezed_vacuum: r must be non-negative");
    Eigen::VectorXcd c = Eigen::VectorXcd::Zero(n_max + 1);
    const cplx ratio = -std::polar(std::tanh(r), phi);
    c(0) = 1.0 / std::sqrt(std::cosh(r));
    for (int n = 0; 2 * n + 2 <= n_max; ++n) {
        c(2 * n + 2) = c(2 * n) * ratio * std::sqrt((2.0 * n + 1.0) * (2.0 * n + 2.0)) / (2.0 * (n + 1.0));
    }
    require_tail(c, "squeezed_vacuum");
    return FockVector(std::move(c));
}

FockVector displaced_squeezed_state(cplx alpha, double r, double phi, int n_max)
{
    const FockVector vac = squeezed_vacuum(r, phi, n_max);
    Eigen::VectorXcd c = displacement_matrix(alpha, n_max) * vac.amplitudes();
    require_tail(c, "displaced_squeezed_state");
    return FockVector(std::move(c));
}

Eigen::MatrixXcd displacement_matrix(cplx xi, int n_max)
{
    if (n_max < 1) throw PreconditionError("displacement_matrix: n_max must be >= 1");
    Eigen::MatrixXd ell;
    detail::DisplacementRadial(n_max).evaluate(std::norm(xi), ell);
    const double phi = std::arg(xi);
    Eigen::MatrixXcd d(n_max + 1, n_max + 1);
    for (int diff = 0; diff <= n_max; ++diff) {
        const cplx up = std::polar(1.0, diff * phi);
        const cplx down = (diff % 2 == 0 ? 1.0 : -1.0) * std::conj(up);
        for (int n = 0; n + diff <= n_max; ++n) {
            d(n + diff, n) = up * ell(n, diff);
            d(n, n + diff) = down * ell(n, diff);
        }
    }
    return d;
}

double fock_tail_weight(const FockOperator& op)
{
    const Eigen::VectorXd diag = op.matrix().diagonal().cwiseAbs();
    const double total = diag.sum();
    if (total == 0.0) return 0.0;
    const int start = std::max(0, op.n_max() - Tolerances::tail_margin + 1);
    return diag.tail(op.dim() - start).sum() / total;
}

void require_admitted(const FockOperator& op, const char* what)
{
    const double tail = fock_tail_weight(op);
    if (!(tail < Tolerances::tail_tol)) {
        throw TruncationInsufficient(std::string(what) + ": weight " + describe_value(tail) +
                                     " on the top " + std::to_string(Tolerances::tail_margin) +
                                     " number states exceeds tail_tol (raise n_max)");
    }
}

// ---------------------------------------------------------------------------

cplx displacement_amplitude(std::array<double, 2> k)
{
    return kSqrtHalf * cplx(-k[1], k[0]);
}

FockOperator exp_ikx(std::array<double, 2> k, int n_max)
{
    if (n_max < 1) throw PreconditionError("exp_ikx: n_max must be >= 1");
    const Eigen::MatrixXcd gen = k[0] * position_operator(n_max).matrix() + k[1] * momentum_operator(n_max).matrix();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig(gen);
    const Eigen::VectorXcd phases = (cplx(0.0, 1.0) * eig.eigenvalues().cast<cplx>()).array().exp();
    const Eigen::MatrixXcd& v = eig.eigenvectors();
    return FockOperator(v * phases.asDiagonal() * v.adjoint());
}

bool exp_ikx_accuracy_degraded(std::array<double, 2> k, int n_max)
{
    return std::hypot(k[0], k[1]) > std::sqrt(2.0 * n_max);
}

FockOperator jordan_product(const FockOperator& a, const FockOperator& b)
{
    require_same_dim(a, b, "jordan_product");
    const Eigen::MatrixXcd ab = a.matrix() * b.matrix();
    const Eigen::MatrixXcd ba = b.matrix() * a.matrix();
    return FockOperator(0.5 * (ab + ba), a.hermitian() && b.hermitian());
}

cplx trace_pairing(const FockOperator& a, const FockOperator& b)
{
    require_same_dim(a, b, "trace_pairing");
    // Tr[AB] = sum_ij A_ij B_ji
    return (a.matrix().array() * b.matrix().transpose().array()).sum();
}

// ---------------------------------------------------------------------------

FockOperator swv_state(const FockOperator& rho_f, const FockOperator& e_r)
{
    require_same_dim(rho_f, e_r, "swv_state");
    if (hermitian_defect(rho_f.matrix()) > 1e-10 || hermitian_defect(e_r.matrix()) > 1e-10) {
        throw PreconditionError("swv_state: rho_F and E_R must be Hermitian");
    }
    if (std::abs(rho_f.trace() - 1.0) > 1e-8) throw PreconditionError("swv_state: rho_F must have unit trace");
    if (min_eigenvalue(rho_f) < -1e-10 || min_eigenvalue(e_r) < -1e-10 * std::max(1.0, std::abs(e_r.trace()))) {
        throw PreconditionError("swv_state: rho_F and E_R must be positive semidefinite");
    }
    const double norm = trace_pairing(e_r, rho_f).real();
    if (std::abs(norm) < Tolerances::orth_tol) {
        throw OrthogonalBoundary("swv_state: Tr[E_R rho_F] = " + describe_value(norm) + " is below orth_tol");
    }
    const Eigen::MatrixXcd numerator = 0.5 * (e_r.matrix() * rho_f.matrix() + rho_f.matrix() * e_r.matrix());
    return normalized_hermitian(numerator / norm);
}

FockOperator swv_coherent_pair(cplx alpha, cplx beta, int n_max)
{
    const double overlap_sq = std::exp(-std::norm(alpha - beta));
    if (overlap_sq < Tolerances::orth_tol) {
        throw OrthogonalBoundary("swv_coherent_pair: |<alpha|beta>|^2 is below orth_tol");
    }
    const FockVector ka = coherent_state(alpha, n_max);
    const FockVector kb = coherent_state(beta, n_max);
    // e^{-beta* alpha} / (2 e^{-(|alpha|^2 + |beta|^2)/2}), exponents combined
    const cplx c = 0.5 * std::exp(-std::conj(beta) * alpha + 0.5 * (std::norm(alpha) + std::norm(beta)));
    const Eigen::MatrixXcd ab = ka.amplitudes() * kb.amplitudes().adjoint();
    return normalized_hermitian(c * ab + std::conj(c) * ab.adjoint());
}

double real_weak_value(const FockOperator& a, const FockOperator& rho_f, const FockOperator& e_r)
{
    require_same_dim(a, rho_f, "real_weak_value");
    require_same_dim(rho_f, e_r, "real_weak_value");
    if (hermitian_defect(a.matrix()) > 1e-10) throw PreconditionError("real_weak_value: A must be Hermitian");
    const cplx norm = trace_pairing(rho_f, e_r);
    if (std::abs(norm) < Tolerances::orth_tol) {
        throw OrthogonalBoundary("real_weak_value: Tr[rho_F E_R] is below orth_tol");
    }
    const cplx num = (a.matrix() * rho_f.matrix() * e_r.matrix()).trace();
    return (num / norm).real();
}

double pseudo_state_variance(const FockOperator& rho, double theta)
{
    if (hermitian_defect(rho.matrix()) > 1e-10) throw PreconditionError("pseudo_state_variance: rho must be Hermitian");
    if (std::abs(rho.trace() - 1.0) > 1e-8) throw PreconditionError("pseudo_state_variance: rho must have unit trace");
    const FockOperator x = quadrature_operator(theta, rho.n_max());
    const Eigen::MatrixXcd x_rho = x.matrix() * rho.matrix();
    const double first = x_rho.trace().real();
    const double second = trace_pairing(x, FockOperator(x_rho)).real();
    return second - first * first;
}

double min_eigenvalue(const FockOperator& op)
{
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig(op.matrix(), Eigen::EigenvaluesOnly);
    return eig.eigenvalues().minCoeff();
}

}  // namespace phasespace
