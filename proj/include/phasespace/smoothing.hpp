#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include <Eigen/Dense>
#include <nlohmann/json.hpp>

#include "phasespace/operator_core.hpp"
#include "phasespace/phase_space.hpp"

namespace phasespace {

// ---------------------------------------------------------------------------
// Classical smoothing

/// Normalized probability vector over an abstract finite state list.
class ClassicalGridDist {
public:
    /// Throws PreconditionError if an entry is negative or the sum differs from 1 by more than 1e-12.
    explicit ClassicalGridDist(std::vector<double> probabilities);
    /// Normalizes `weights`; throws ZeroEvidence if they sum to zero.
    static ClassicalGridDist from_weights(std::vector<double> weights);

    std::size_t size() const { return probabilities_.size(); }
    double operator[](std::size_t i) const { return probabilities_[i]; }
    const std::vector<double>& probabilities() const { return probabilities_; }

private:
    std::vector<double> probabilities_;
};

/// wp_S(x) = E_R(x) wp_F(x) / sum_x E_R(x) wp_F(x)
ClassicalGridDist classical_smooth(const ClassicalGridDist& filtered, std::span<const double> retro_likelihood);

/// Discrete hidden Markov chain. transition(i, j) = P(x_{t+1} = j | x_t = i),
/// emission(i, o) = P(y_t = o | x_t = i).
struct HiddenMarkovChain {
    Eigen::VectorXd initial;
    Eigen::MatrixXd transition;
    Eigen::MatrixXd emission;

    void validate() const;
    int states() const { return static_cast<int>(initial.size()); }
};

/// P(x_t | y_0..y_t) by the forward recursion.
ClassicalGridDist hmm_filtered(const HiddenMarkovChain& chain, std::span<const int> observations, int t);
/// P(y_{t+1}..y_{T-1} | x_t) by the backward recursion.
std::vector<double> hmm_retro_likelihood(const HiddenMarkovChain& chain, std::span<const int> observations, int t);
/// P(x_t | y_0..y_{T-1}) by summing the joint probability of every state path.
ClassicalGridDist hmm_smoothed_by_enumeration(const HiddenMarkovChain& chain, std::span<const int> observations, int t);

// ---------------------------------------------------------------------------
// Smoothed Wigner distribution

/// 2 pi Int W_F W_R, equal to Tr[E_R rho_F].
double swd_normalization(const WignerField& w_f, const WignerField& w_r);

/// 2 pi W_F W_R / N. Throws OrthogonalBoundary if |N| < orth_tol.
WignerField swd_field(const WignerField& w_f, const WignerField& w_r);

/// Gaussian product in information form:
/// cov_S = (cov_F^-1 + cov_R^-1)^-1, mean_S = cov_S (cov_F^-1 mean_F + cov_R^-1 mean_R).
GaussianPhaseDist swd_gaussian(const GaussianPhaseDist& f, const GaussianPhaseDist& r);

/// Kernel multiplying chi_F(k) chi_R(k' - k) inside the smoothing convolution.
using ConvolutionModulation = std::function<double(double kq, double kp, double gq, double gp)>;

/// (2 pi N)^-1 sum_k w_k chi_F(k) chi_R(k' - k) m(k, k' - k) with trapezoidal
/// weights w_k, N fixed so the result is 1 at k' = 0. An empty modulation means m = 1.
CharacteristicField smoothed_characteristic(const CharacteristicField& chi_f, const CharacteristicField& chi_r,
                                            const ConvolutionModulation& modulation);

/// Characteristic function of the smoothed Wigner distribution.
CharacteristicField chi_swd(const CharacteristicField& chi_f, const CharacteristicField& chi_r);

/// Characteristic function of the SWV pseudo-state: the same convolution as
/// chi_swd, modulated by cos(k^T sigma (k' - k) / 2).
CharacteristicField chi_swv(const CharacteristicField& chi_f, const CharacteristicField& chi_r,
                            const SymplecticForm& sigma);

// ---------------------------------------------------------------------------
// First moments and variances from both constructions

struct VarianceSample {
    double theta;
    double v_swd;
    double v_swv;
    double v_vac;
};

struct MomentReport {
    Eigen::Vector2d mean_swv;
    Eigen::Vector2d mean_swd;
    double discrepancy;
    double normalization;
    std::vector<VarianceSample> variance_samples;

    nlohmann::json to_json() const;
};

/// Evenly spaced angles theta_i = 2 pi i / (count - 1), i = 0..count-1.
std::vector<double> theta_sweep(int count);

/// Computes <q>, <p> as real weak values (SWV route) and as moments of the
/// smoothed Wigner distribution on `grid` (SWD route), plus quadrature
/// variances of both at `theta_samples` angles.
MomentReport verify_first_moment_equivalence(const FockOperator& rho_f, const FockOperator& e_r,
                                             const PhaseGrid& grid, int theta_samples = 8);

// ---------------------------------------------------------------------------
// Typical coherent amplitude

struct TypicalAlpha {
    double delta;
    double alpha;
};

/// delta solves P(|alpha - beta| < delta) = 1/2 under the density (1/pi) e^{-|alpha-beta|^2};
/// alpha = delta / 2 for the antipodal pair beta = -alpha.
TypicalAlpha typical_alpha();

/// Int over the disk |z| < delta of (1/pi) e^{-|z|^2} d^2 z, by nested Gauss-Legendre quadrature.
double disk_probability(double delta);

// ---------------------------------------------------------------------------
// Random pure Gaussian pairs

struct GaussianStateSpec {
    cplx alpha;
    double r;
    double phi;
};

struct GaussianPairSpec {
    GaussianStateSpec filtered;
    GaussianStateSpec retro;
};

constexpr std::uint64_t kDefaultSuiteSeed = 20190402;

/// Amplitudes uniform in the unit disk, squeezing r uniform in [0, 0.5],
/// squeezing phase uniform in [0, 2 pi).
std::vector<GaussianPairSpec> random_gaussian_pairs(std::uint64_t seed, int count);

FockOperator gaussian_projector(const GaussianStateSpec& spec, int n_max);

}  // namespace phasespace
