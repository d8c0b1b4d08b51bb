#pragma once

#include <Eigen/Dense>

#include "phasespace/operator_core.hpp"

namespace phasespace {

/// Uniform, origin-symmetric phase-space grid.
///
/// Samples sit at cell centres, q_i = (i - (n_q - 1)/2) dq with dq = 2 q_max / n_q,
/// so the grid covers [-q_max, q_max] and mirror pairs are exact negatives.
///
/// The conjugate k-grid is the discrete Fourier dual: k_m = (m - n/2) dk with
/// dk = 2 pi / (n dq) = pi / q_max. It contains k = 0 (index n/2) and differences
/// of k-samples are again k-samples, which the convolution routines rely on.
class PhaseGrid {
public:
    static constexpr double default_extent = 6.0;
    static constexpr int default_points = 256;

    PhaseGrid(double q_max, double p_max, int n_q, int n_p);
    static PhaseGrid square(double x_max, int n) { return PhaseGrid(x_max, x_max, n, n); }
    static PhaseGrid default_grid() { return square(default_extent, default_points); }

    double q_max() const { return q_max_; }
    double p_max() const { return p_max_; }
    int n_q() const { return n_q_; }
    int n_p() const { return n_p_; }

    double dq() const { return 2.0 * q_max_ / n_q_; }
    double dp() const { return 2.0 * p_max_ / n_p_; }
    double cell_area() const { return dq() * dp(); }
    double q(int i) const { return (i - 0.5 * (n_q_ - 1)) * dq(); }
    double p(int j) const { return (j - 0.5 * (n_p_ - 1)) * dp(); }

    double dkq() const;
    double dkp() const;
    double kq(int m) const { return (m - n_q_ / 2) * dkq(); }
    double kp(int m) const { return (m - n_p_ / 2) * dkp(); }
    int k_zero_q() const { return n_q_ / 2; }
    int k_zero_p() const { return n_p_ / 2; }

    bool operator==(const PhaseGrid& other) const = default;

private:
    double q_max_;
    double p_max_;
    int n_q_;
    int n_p_;
};

/// Real phase-space function sampled on a PhaseGrid; values(i, j) at (q_i, p_j).
struct WignerField {
    WignerField(PhaseGrid grid, Eigen::MatrixXd values);

    PhaseGrid grid;
    Eigen::MatrixXd values;

    double integral() const { return values.sum() * grid.cell_area(); }
    double max_value() const { return values.maxCoeff(); }
    double min_value() const { return values.minCoeff(); }
};

/// Complex phase-space function (Wigner transform of a non-Hermitian operator).
struct ComplexField {
    PhaseGrid grid;
    Eigen::MatrixXcd values;
};

/// Characteristic function on the dual k-grid of `grid`; values(m, n) at (kq(m), kp(n)).
struct CharacteristicField {
    CharacteristicField(PhaseGrid grid, Eigen::MatrixXcd values);

    PhaseGrid grid;
    Eigen::MatrixXcd values;

    cplx at_zero() const { return values(grid.k_zero_q(), grid.k_zero_p()); }
};

struct GaussianPhaseDist {
    GaussianPhaseDist(Eigen::Vector2d mean, Eigen::Matrix2d cov);
    static GaussianPhaseDist vacuum() { return {Eigen::Vector2d::Zero(), 0.5 * Eigen::Matrix2d::Identity()}; }
    /// Wigner function of |alpha>: mean (sqrt2 Re alpha, sqrt2 Im alpha), cov I/2.
    static GaussianPhaseDist coherent(cplx alpha);

    Eigen::Vector2d mean;
    Eigen::Matrix2d cov;
};

/// Antisymmetric form with [x_i, x_j] = i sigma_ij for x = (q, p).
struct SymplecticForm {
    Eigen::Matrix2d sigma;

    static SymplecticForm standard();
    SymplecticForm negated() const { return {-sigma}; }
    double apply(double kq, double kp, double gq, double gp) const
    {
        return kq * (sigma(0, 0) * gq + sigma(0, 1) * gp) + kp * (sigma(1, 0) * gq + sigma(1, 1) * gp);
    }
};

struct PhaseMoments {
    Eigen::Vector2d mean;
    Eigen::Matrix2d cov;
};

/// (q + i d/dp)-type derivative field. Entries within `edge_margin` of the p
/// boundary (or q boundary, for the p-weighted variant) use one-sided
/// differences and are flagged unreliable.
struct WeightedWigner {
    ComplexField field;
    int edge_margin = 1;
    bool along_p = true;

    bool reliable(int i, int j) const
    {
        const int idx = along_p ? j : i;
        const int n = along_p ? field.grid.n_p() : field.grid.n_q();
        return idx >= edge_margin && idx < n - edge_margin;
    }
};

// ---------------------------------------------------------------------------

/// chi(k) = Tr[op exp(i k.x)] on the dual grid. The displacement matrix
/// elements are evaluated in closed form so the result is exact for the
/// truncated operator at every |k|. Throws TruncationInsufficient if `op`
/// is not admitted by the Fock tail policy.
CharacteristicField characteristic_of_operator(const FockOperator& op, const PhaseGrid& grid);

/// W(x) = (2 pi)^-2 Int dk chi(k) e^{-i k.x}. Throws NonHermitianSource when the
/// imaginary residue exceeds 1e-6; residues up to that are discarded.
WignerField wigner_from_characteristic(const CharacteristicField& chi);
ComplexField complex_wigner_from_characteristic(const CharacteristicField& chi);

/// Forward transform chi(k) = Int dx W(x) e^{i k.x} onto the dual grid.
CharacteristicField characteristic_from_wigner(const WignerField& w);

WignerField wigner_of_operator(const FockOperator& op, const PhaseGrid& grid);
ComplexField complex_wigner_of_operator(const FockOperator& op, const PhaseGrid& grid);

/// 2 pi Int W_A W_B, which equals Tr[AB].
double overlap_trace(const WignerField& a, const WignerField& b);

/// Wigner function of q.rho from that of rho: (q + (i/2) d/dp) W with hbar = 1.
WeightedWigner q_weighted_wigner(const WignerField& w);
/// Wigner function of p.rho: (p - (i/2) d/dq) W.
WeightedWigner p_weighted_wigner(const WignerField& w);

WignerField gaussian_wigner_eval(const GaussianPhaseDist& g, const PhaseGrid& grid);
CharacteristicField gaussian_characteristic(const GaussianPhaseDist& g, const PhaseGrid& grid);

/// Mean and covariance by Riemann sums. Throws Unnormalized if |Int W - 1| > 1e-4.
PhaseMoments field_moments(const WignerField& w);

/// c^T cov c with c = (cos theta, sin theta).
double field_quadrature_variance(const WignerField& w, double theta);

}  // namespace phasespace
