#include "phasespace/phase_space.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <string>
#include <vector>

#include "displacement_kernel.hpp"

namespace phasespace {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kImagDiscard = 1e-6;
// Relative magnitude below which a ring of the k-grid counts as empty.
constexpr double kChiFloor = 1e-18;
// Entries smaller than this (relative) do not enlarge the effective Fock support.
constexpr double kSupportFloor = 1e-20;

void require_same_grid(const PhaseGrid& a, const PhaseGrid& b, const char* what)
{
    if (!(a == b)) throw GridMismatch(std::string(what) + ": fields live on different grids");
}

int effective_support(const Eigen::MatrixXcd& m)
{
    const double floor = kSupportFloor * m.cwiseAbs().maxCoeff();
    for (int n = static_cast<int>(m.rows()) - 1; n > 0; --n) {
        if (m.row(n).cwiseAbs().maxCoeff() > floor || m.col(n).cwiseAbs().maxCoeff() > floor) return n;
    }
    return 1;
}

/// Tr[op D(xi)] for an operator already trimmed to its effective support.
cplx characteristic_point(const Eigen::MatrixXcd& op, bool hermitian, double kq, double kp,
                          const detail::DisplacementRadial& radial, Eigen::MatrixXd& ell)
{
    const int n_max = radial.n_max();
    const cplx xi = displacement_amplitude({kq, kp});
    radial.evaluate(std::norm(xi), ell);
    const double phi = std::arg(xi);
    cplx total = 0.0;
    for (int d = 0; d <= n_max; ++d) {
        const double* col = &ell(0, d);
        cplx upper = 0.0;  // sum_n op(n, n+d) <n+d|D|n>
        for (int n = 0; n + d <= n_max; ++n) upper += op(n, n + d) * col[n];
        const cplx up = std::polar(1.0, d * phi) * upper;
        if (d == 0) {
            total += up;
            continue;
        }
        const double sign = d % 2 == 0 ? 1.0 : -1.0;
        if (hermitian) {
            // op(n+d, n) = conj(op(n, n+d)), so the lower band is the conjugate term.
            total += up + sign * std::conj(up);
        } else {
            cplx lower = 0.0;  // sum_n op(n+d, n) <n|D|n+d>
            for (int n = 0; n + d <= n_max; ++n) lower += op(n + d, n) * col[n];
            total += up + sign * std::polar(1.0, -d * phi) * lower;
        }
    }
    return total;
}

/// Fourier matrix F(j, m) = exp(sign * i * k_m * x_j) over a block of k indices.
Eigen::MatrixXcd fourier_block(int n_x, double dx, double dk, int n_k, int first, int count, double sign)
{
    Eigen::MatrixXcd f(n_x, count);
    for (int j = 0; j < n_x; ++j) {
        const double x = (j - 0.5 * (n_x - 1)) * dx;
        for (int c = 0; c < count; ++c) {
            const double k = (first + c - n_k / 2) * dk;
            f(j, c) = std::polar(1.0, sign * k * x);
        }
    }
    return f;
}

WeightedWigner weighted_wigner(const WignerField& w, bool along_p)
{
    const PhaseGrid& g = w.grid;
    const int nq = g.n_q();
    const int np = g.n_p();
    // q rho -> (q + i/2 d/dp) W ;  p rho -> (p - i/2 d/dq) W
    const double coeff = along_p ? 0.5 * LadderConvention::hbar : -0.5 * LadderConvention::hbar;
    const double h = along_p ? g.dp() : g.dq();
    Eigen::MatrixXcd out(nq, np);
    for (int i = 0; i < nq; ++i) {
        for (int j = 0; j < np; ++j) {
            const int idx = along_p ? j : i;
            const int n = along_p ? np : nq;
            auto at = [&](int shift) { return along_p ? w.values(i, j + shift) : w.values(i + shift, j); };
            double deriv;
            if (idx == 0) {
                deriv = (at(1) - at(0)) / h;
            } else if (idx == n - 1) {
                deriv = (at(0) - at(-1)) / h;
            } else {
                deriv = (at(1) - at(-1)) / (2.0 * h);
            }
            const double coord = along_p ? g.q(i) : g.p(j);
            out(i, j) = cplx(coord * w.values(i, j), coeff * deriv);
        }
    }
    return WeightedWigner{ComplexField{g, std::move(out)}, 1, along_p};
}

}  // namespace

// ---------------------------------------------------------------------------

PhaseGrid::PhaseGrid(double q_max, double p_max, int n_q, int n_p)
    : q_max_(q_max), p_max_(p_max), n_q_(n_q), n_p_(n_p)
{
    if (!(q_max > 0.0) || !(p_max > 0.0)) throw PreconditionError("PhaseGrid: extents must be positive");
    if (n_q < 64 || n_p < 64 || n_q % 2 != 0 || n_p % 2 != 0) {
        throw PreconditionError("PhaseGrid: sample counts must be even and >= 64");
    }
}

double PhaseGrid::dkq() const { return 2.0 * kPi / (n_q_ * dq()); }
double PhaseGrid::dkp() const { return 2.0 * kPi / (n_p_ * dp()); }

WignerField::WignerField(PhaseGrid g, Eigen::MatrixXd v) : grid(g), values(std::move(v))
{
    if (values.rows() != grid.n_q() || values.cols() != grid.n_p()) {
        throw DimensionMismatch("WignerField: value matrix does not match grid");
    }
    if (!values.allFinite()) throw PreconditionError("WignerField: non-finite value");
}

CharacteristicField::CharacteristicField(PhaseGrid g, Eigen::MatrixXcd v) : grid(g), values(std::move(v))
{
    if (values.rows() != grid.n_q() || values.cols() != grid.n_p()) {
        throw DimensionMismatch("CharacteristicField: value matrix does not match grid");
    }
}

GaussianPhaseDist::GaussianPhaseDist(Eigen::Vector2d m, Eigen::Matrix2d c) : mean(m), cov(c)
{
    if (std::abs(cov(0, 1) - cov(1, 0)) > 1e-14 * std::max(1.0, cov.cwiseAbs().maxCoeff())) {
        throw PreconditionError("GaussianPhaseDist: covariance is not symmetric");
    }
    cov(1, 0) = cov(0, 1);
    if (!(cov(0, 0) > 0.0) || !(cov.determinant() > 0.0)) {
        throw SingularCovariance("GaussianPhaseDist: covariance is not positive definite");
    }
}

GaussianPhaseDist GaussianPhaseDist::coherent(cplx alpha)
{
    const double s = 1.0 / LadderConvention::quad_scale;
    return {Eigen::Vector2d(s * alpha.real(), s * alpha.imag()), 0.5 * Eigen::Matrix2d::Identity()};
}

SymplecticForm SymplecticForm::standard()
{
    Eigen::Matrix2d s;
    s << 0.0, 1.0, -1.0, 0.0;
    return {s};
}

// ---------------------------------------------------------------------------

CharacteristicField characteristic_of_operator(const FockOperator& op, const PhaseGrid& grid)
{
    require_admitted(op, "characteristic_of_operator");
    const int n_eff = effective_support(op.matrix());
    const Eigen::MatrixXcd trimmed = op.matrix().topLeftCorner(n_eff + 1, n_eff + 1);

    const int nq = grid.n_q();
    const int np = grid.n_p();
    std::vector<double> radius(static_cast<std::size_t>(nq) * np);
    for (int m = 0; m < nq; ++m) {
        for (int n = 0; n < np; ++n) radius[static_cast<std::size_t>(m) * np + n] = std::hypot(grid.kq(m), grid.kp(n));
    }
    std::vector<std::size_t> order(radius.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return radius[a] < radius[b]; });

    // Every matrix element in the support is oscillatory inside |xi|^2 < 4 n + 2 and
    // decays monotonically outside, so beyond that radius the field may be cut
    // at the first ring that is negligible.
    const double k_turn = std::sqrt(8.0 * n_eff + 4.0);
    const double ring = std::min(grid.dkq(), grid.dkp());

    const bool hermitian = (trimmed - trimmed.adjoint()).cwiseAbs().maxCoeff() <= 1e-14 * trimmed.cwiseAbs().maxCoeff();
    const detail::DisplacementRadial radial(n_eff);
    Eigen::MatrixXcd values = Eigen::MatrixXcd::Zero(nq, np);
    Eigen::MatrixXd ell;
    std::vector<bool> done(radius.size(), false);
    double global_max = 0.0;
    double ring_edge = k_turn;
    double ring_max = 0.0;
    for (std::size_t idx : order) {
        const double r = radius[idx];
        if (r > ring_edge) {
            if (r > k_turn && ring_edge > k_turn && ring_max <= kChiFloor * global_max) break;
            ring_max = 0.0;
            while (ring_edge < r) ring_edge += ring;
        }
        const int m = static_cast<int>(idx / np);
        const int n = static_cast<int>(idx % np);
        // chi(-k) = conj(chi(k)) for Hermitian operators; -k_m is sample nq - m.
        const int mirror_m = nq - m;
        const int mirror_n = np - n;
        cplx chi;
        if (hermitian && mirror_m < nq && mirror_n < np && done[static_cast<std::size_t>(mirror_m) * np + mirror_n]) {
            chi = std::conj(values(mirror_m, mirror_n));
        } else {
            chi = characteristic_point(trimmed, hermitian, grid.kq(m), grid.kp(n), radial, ell);
        }
        values(m, n) = chi;
        done[idx] = true;
        global_max = std::max(global_max, std::abs(chi));
        ring_max = std::max(ring_max, std::abs(chi));
    }
    return CharacteristicField(grid, std::move(values));
}

ComplexField complex_wigner_from_characteristic(const CharacteristicField& chi)
{
    const PhaseGrid& g = chi.grid;
    const int nq = g.n_q();
    const int np = g.n_p();
    // Only the block of k-samples holding non-zero values contributes.
    int q_lo = nq, q_hi = -1, p_lo = np, p_hi = -1;
    for (int m = 0; m < nq; ++m) {
        for (int n = 0; n < np; ++n) {
            if (chi.values(m, n) != cplx(0.0)) {
                q_lo = std::min(q_lo, m);
                q_hi = std::max(q_hi, m);
                p_lo = std::min(p_lo, n);
                p_hi = std::max(p_hi, n);
            }
        }
    }
    if (q_hi < 0) return ComplexField{g, Eigen::MatrixXcd::Zero(nq, np)};
    const int q_count = q_hi - q_lo + 1;
    const int p_count = p_hi - p_lo + 1;
    const Eigen::MatrixXcd fq = fourier_block(nq, g.dq(), g.dkq(), nq, q_lo, q_count, -1.0);
    const Eigen::MatrixXcd fp = fourier_block(np, g.dp(), g.dkp(), np, p_lo, p_count, -1.0);
    const double scale = g.dkq() * g.dkp() / (4.0 * kPi * kPi);
    Eigen::MatrixXcd w = scale * (fq * chi.values.block(q_lo, p_lo, q_count, p_count) * fp.transpose());
    return ComplexField{g, std::move(w)};
}

WignerField wigner_from_characteristic(const CharacteristicField& chi)
{
    ComplexField w = complex_wigner_from_characteristic(chi);
    // The Nyquist row and column (index 0) have no mirror sample; keeping the
    // real part completes them Hermitian-symmetrically, so their imaginary
    // contribution is not evidence of a non-Hermitian source.
    double residue = 0.0;
    if (chi.values.row(0).cwiseAbs().maxCoeff() > 0.0 || chi.values.col(0).cwiseAbs().maxCoeff() > 0.0) {
        CharacteristicField inner = chi;
        inner.values.row(0).setZero();
        inner.values.col(0).setZero();
        residue = complex_wigner_from_characteristic(inner).values.imag().cwiseAbs().maxCoeff();
    } else {
        residue = w.values.imag().cwiseAbs().maxCoeff();
    }
    if (residue > kImagDiscard) {
        throw NonHermitianSource("wigner_from_characteristic: imaginary residue " + describe_value(residue));
    }
    return WignerField(w.grid, w.values.real());
}

CharacteristicField characteristic_from_wigner(const WignerField& w)
{
    const PhaseGrid& g = w.grid;
    const Eigen::MatrixXcd fq = fourier_block(g.n_q(), g.dq(), g.dkq(), g.n_q(), 0, g.n_q(), 1.0);
    const Eigen::MatrixXcd fp = fourier_block(g.n_p(), g.dp(), g.dkp(), g.n_p(), 0, g.n_p(), 1.0);
    Eigen::MatrixXcd chi = g.cell_area() * (fq.transpose() * w.values.cast<cplx>() * fp);
    return CharacteristicField(g, std::move(chi));
}

WignerField wigner_of_operator(const FockOperator& op, const PhaseGrid& grid)
{
    return wigner_from_characteristic(characteristic_of_operator(op, grid));
}

ComplexField complex_wigner_of_operator(const FockOperator& op, const PhaseGrid& grid)
{
    return complex_wigner_from_characteristic(characteristic_of_operator(op, grid));
}

double overlap_trace(const WignerField& a, const WignerField& b)
{
    require_same_grid(a.grid, b.grid, "overlap_trace");
    return 2.0 * kPi * (a.values.array() * b.values.array()).sum() * a.grid.cell_area();
}

WeightedWigner q_weighted_wigner(const WignerField& w) { return weighted_wigner(w, true); }

WeightedWigner p_weighted_wigner(const WignerField& w) { return weighted_wigner(w, false); }

WignerField gaussian_wigner_eval(const GaussianPhaseDist& g, const PhaseGrid& grid)
{
    const Eigen::Matrix2d inv = g.cov.inverse();
    const double norm = 1.0 / (2.0 * kPi * std::sqrt(g.cov.determinant()));
    Eigen::MatrixXd values(grid.n_q(), grid.n_p());
    for (int i = 0; i < grid.n_q(); ++i) {
        for (int j = 0; j < grid.n_p(); ++j) {
            const Eigen::Vector2d d(grid.q(i) - g.mean(0), grid.p(j) - g.mean(1));
            values(i, j) = norm * std::exp(-0.5 * d.dot(inv * d));
        }
    }
    return WignerField(grid, std::move(values));
}

CharacteristicField gaussian_characteristic(const GaussianPhaseDist& g, const PhaseGrid& grid)
{
    Eigen::MatrixXcd values(grid.n_q(), grid.n_p());
    for (int m = 0; m < grid.n_q(); ++m) {
        for (int n = 0; n < grid.n_p(); ++n) {
            const Eigen::Vector2d k(grid.kq(m), grid.kp(n));
            values(m, n) = std::exp(cplx(-0.5 * k.dot(g.cov * k), k.dot(g.mean)));
        }
    }
    return CharacteristicField(grid, std::move(values));
}

PhaseMoments field_moments(const WignerField& w)
{
    const PhaseGrid& g = w.grid;
    const double total = w.integral();
    if (std::abs(total - 1.0) > 1e-4) {
        throw Unnormalized("field_moments: field integrates to " + describe_value(total));
    }
    const Eigen::VectorXd q_marg = w.values.rowwise().sum() * g.cell_area();
    const Eigen::VectorXd p_marg = w.values.colwise().sum().transpose() * g.cell_area();

    // Mirror-paired sums so that a symmetric field has mean exactly zero.
    auto first_moment = [](const Eigen::VectorXd& marg, auto coord) {
        const int n = static_cast<int>(marg.size());
        double s = 0.0;
        for (int i = 0; i < n / 2; ++i) s += coord(i) * (marg(i) - marg(n - 1 - i));
        return s;
    };
    const double mq = first_moment(q_marg, [&](int i) { return g.q(i); }) / total;
    const double mp = first_moment(p_marg, [&](int j) { return g.p(j); }) / total;

    double vqq = 0.0, vpp = 0.0, vqp = 0.0;
    for (int i = 0; i < g.n_q(); ++i) {
        const double dq = g.q(i) - mq;
        for (int j = 0; j < g.n_p(); ++j) {
            const double dp = g.p(j) - mp;
            const double v = w.values(i, j);
            vqq += dq * dq * v;
            vpp += dp * dp * v;
            vqp += dq * dp * v;
        }
    }
    const double scale = g.cell_area() / total;
    PhaseMoments out;
    out.mean = Eigen::Vector2d(mq, mp);
    out.cov << vqq * scale, vqp * scale, vqp * scale, vpp * scale;
    return out;
}

double field_quadrature_variance(const WignerField& w, double theta)
{
    const PhaseMoments m = field_moments(w);
    const Eigen::Vector2d c(std::cos(theta), std::sin(theta));
    return c.dot(m.cov * c);
}

}  // namespace phasespace
