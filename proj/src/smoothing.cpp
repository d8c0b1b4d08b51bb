#include "phasespace/smoothing.hpp"

#include <cmath>
#include <numbers>
#include <random>
#include <string>

#include <boost/math/quadrature/gauss.hpp>

namespace phasespace {

namespace {

constexpr double kPi = std::numbers::pi;

void require_same_grid(const PhaseGrid& a, const PhaseGrid& b, const char* what)
{
    if (!(a == b)) throw GridMismatch(std::string(what) + ": inputs live on different grids");
}

void require_observations(const HiddenMarkovChain& chain, std::span<const int> obs, int t)
{
    chain.validate();
    if (obs.empty() || t < 0 || t >= static_cast<int>(obs.size())) {
        throw PreconditionError("hidden Markov chain: time index outside the observation record");
    }
    for (int o : obs) {
        if (o < 0 || o >= chain.emission.cols()) throw PreconditionError("hidden Markov chain: unknown observation symbol");
    }
}

}  // namespace

// ---------------------------------------------------------------------------

ClassicalGridDist::ClassicalGridDist(std::vector<double> probabilities) : probabilities_(std::move(probabilities))
{
    if (probabilities_.empty()) throw PreconditionError("ClassicalGridDist: empty support");
    double sum = 0.0;
    for (double p : probabilities_) {
        if (!(p >= 0.0) || !std::isfinite(p)) throw PreconditionError("ClassicalGridDist: negative or non-finite entry");
        sum += p;
    }
    if (std::abs(sum - 1.0) > 1e-12) throw PreconditionError("ClassicalGridDist: probabilities do not sum to one");
}

ClassicalGridDist ClassicalGridDist::from_weights(std::vector<double> weights)
{
    double sum = 0.0;
    for (double w : weights) {
        if (!(w >= 0.0) || !std::isfinite(w)) throw PreconditionError("ClassicalGridDist: negative or non-finite weight");
        sum += w;
    }
    if (!(sum > 0.0)) throw ZeroEvidence("ClassicalGridDist: weights sum to zero");
    for (double& w : weights) w /= sum;
    return ClassicalGridDist(std::move(weights));
}

ClassicalGridDist classical_smooth(const ClassicalGridDist& filtered, std::span<const double> retro_likelihood)
{
    if (retro_likelihood.size() != filtered.size()) {
        throw DimensionMismatch("classical_smooth: likelihood and filtered distribution differ in support");
    }
    std::vector<double> product(filtered.size());
    bool flat = true;
    for (std::size_t i = 0; i < product.size(); ++i) {
        if (!(retro_likelihood[i] >= 0.0)) throw PreconditionError("classical_smooth: negative likelihood");
        product[i] = retro_likelihood[i] * filtered[i];
        flat = flat && retro_likelihood[i] == retro_likelihood[0];
    }
    // A flat likelihood carries no evidence; returning the prior avoids renormalization roundoff.
    if (flat && retro_likelihood[0] > 0.0) return filtered;
    return ClassicalGridDist::from_weights(std::move(product));
}

void HiddenMarkovChain::validate() const
{
    const auto n = initial.size();
    if (n == 0 || transition.rows() != n || transition.cols() != n || emission.rows() != n || emission.cols() == 0) {
        throw DimensionMismatch("HiddenMarkovChain: inconsistent dimensions");
    }
    auto stochastic = [](const Eigen::MatrixXd& m) {
        return (m.array() >= 0.0).all() && ((m.rowwise().sum().array() - 1.0).abs() < 1e-12).all();
    };
    if (!stochastic(initial.transpose()) || !stochastic(transition) || !stochastic(emission)) {
        throw PreconditionError("HiddenMarkovChain: rows must be probability vectors");
    }
}

ClassicalGridDist hmm_filtered(const HiddenMarkovChain& chain, std::span<const int> observations, int t)
{
    require_observations(chain, observations, t);
    Eigen::VectorXd belief = chain.initial.cwiseProduct(chain.emission.col(observations[0]));
    for (int s = 1; s <= t; ++s) {
        const double total = belief.sum();
        if (!(total > 0.0)) throw ZeroEvidence("hmm_filtered: observation record has zero probability");
        belief /= total;
        belief = (chain.transition.transpose() * belief).cwiseProduct(chain.emission.col(observations[s]));
    }
    return ClassicalGridDist::from_weights(std::vector<double>(belief.data(), belief.data() + belief.size()));
}

std::vector<double> hmm_retro_likelihood(const HiddenMarkovChain& chain, std::span<const int> observations, int t)
{
    require_observations(chain, observations, t);
    Eigen::VectorXd like = Eigen::VectorXd::Ones(chain.states());
    for (int s = static_cast<int>(observations.size()) - 1; s > t; --s) {
        like = chain.transition * like.cwiseProduct(chain.emission.col(observations[s]));
    }
    return std::vector<double>(like.data(), like.data() + like.size());
}

ClassicalGridDist hmm_smoothed_by_enumeration(const HiddenMarkovChain& chain, std::span<const int> observations, int t)
{
    require_observations(chain, observations, t);
    const int n = chain.states();
    const int steps = static_cast<int>(observations.size());
    std::vector<double> marginal(n, 0.0);
    std::vector<int> path(steps, 0);
    while (true) {
        double joint = chain.initial(path[0]) * chain.emission(path[0], observations[0]);
        for (int s = 1; s < steps; ++s) {
            joint *= chain.transition(path[s - 1], path[s]) * chain.emission(path[s], observations[s]);
        }
        marginal[path[t]] += joint;
        int pos = steps - 1;
        while (pos >= 0 && ++path[pos] == n) path[pos--] = 0;
        if (pos < 0) break;
    }
    return ClassicalGridDist::from_weights(std::move(marginal));
}

// ---------------------------------------------------------------------------

double swd_normalization(const WignerField& w_f, const WignerField& w_r)
{
    return overlap_trace(w_f, w_r);
}

WignerField swd_field(const WignerField& w_f, const WignerField& w_r)
{
    require_same_grid(w_f.grid, w_r.grid, "swd_field");
    const double norm = swd_normalization(w_f, w_r);
    if (std::abs(norm) < Tolerances::orth_tol) {
        throw OrthogonalBoundary("swd_field: normalization " + describe_value(norm) + " is below orth_tol");
    }
    Eigen::MatrixXd values = (2.0 * kPi / norm) * (w_f.values.array() * w_r.values.array()).matrix();
    return WignerField(w_f.grid, std::move(values));
}

GaussianPhaseDist swd_gaussian(const GaussianPhaseDist& f, const GaussianPhaseDist& r)
{
    const Eigen::Matrix2d info_f = f.cov.inverse();
    const Eigen::Matrix2d info_r = r.cov.inverse();
    Eigen::Matrix2d cov = (info_f + info_r).inverse();
    cov(1, 0) = cov(0, 1);
    const Eigen::Vector2d mean = cov * (info_f * f.mean + info_r * r.mean);
    return GaussianPhaseDist(mean, cov);
}

CharacteristicField smoothed_characteristic(const CharacteristicField& chi_f, const CharacteristicField& chi_r,
                                            const ConvolutionModulation& modulation)
{
    require_same_grid(chi_f.grid, chi_r.grid, "smoothed_characteristic");
    const PhaseGrid& g = chi_f.grid;
    const int nq = g.n_q();
    const int np = g.n_p();
    const int zq = g.k_zero_q();
    const int zp = g.k_zero_p();
    auto weight = [](int m, int n) { return (m == 0 || m == n - 1) ? 0.5 : 1.0; };
    const double dk2 = g.dkq() * g.dkp();

    Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(nq, np);
    for (int a = 0; a < nq; ++a) {
        for (int b = 0; b < np; ++b) {
            cplx acc = 0.0;
            for (int m = 0; m < nq; ++m) {
                const int dm = a - m + zq;  // index of k'_q - k_q
                if (dm < 0 || dm >= nq) continue;
                const double wq = weight(m, nq);
                for (int n = 0; n < np; ++n) {
                    const int dn = b - n + zp;
                    if (dn < 0 || dn >= np) continue;
                    cplx term = chi_f.values(m, n) * chi_r.values(dm, dn);
                    if (term == cplx(0.0)) continue;
                    if (modulation) term *= modulation(g.kq(m), g.kp(n), g.kq(dm), g.kp(dn));
                    acc += wq * weight(n, np) * term;
                }
            }
            out(a, b) = acc * dk2;
        }
    }
    // chi(0) = (2 pi)^-1 Int chi_F(k) chi_R(-k) dk = Tr[rho_F E_R], the normalization N.
    const cplx norm = out(zq, zp) / (2.0 * kPi);
    if (std::abs(norm) < Tolerances::orth_tol) {
        throw OrthogonalBoundary("smoothed_characteristic: normalization is below orth_tol");
    }
    out /= (2.0 * kPi * norm);
    return CharacteristicField(g, std::move(out));
}

CharacteristicField chi_swd(const CharacteristicField& chi_f, const CharacteristicField& chi_r)
{
    return smoothed_characteristic(chi_f, chi_r, ConvolutionModulation{});
}

CharacteristicField chi_swv(const CharacteristicField& chi_f, const CharacteristicField& chi_r,
                            const SymplecticForm& sigma)
{
    return smoothed_characteristic(chi_f, chi_r, [&sigma](double kq, double kp, double gq, double gp) {
        return std::cos(0.5 * sigma.apply(kq, kp, gq, gp));
    });
}

// ---------------------------------------------------------------------------

nlohmann::json MomentReport::to_json() const
{
    nlohmann::json samples = nlohmann::json::array();
    for (const auto& s : variance_samples) {
        samples.push_back({{"theta", s.theta}, {"v_swd", s.v_swd}, {"v_swv", s.v_swv}, {"v_vac", s.v_vac}});
    }
    return {{"mean_swv", {mean_swv(0), mean_swv(1)}},
            {"mean_swd", {mean_swd(0), mean_swd(1)}},
            {"discrepancy", discrepancy},
            {"normalization", normalization},
            {"variance_samples", samples}};
}

std::vector<double> theta_sweep(int count)
{
    if (count < 2) return count == 1 ? std::vector<double>{0.0} : std::vector<double>{};
    std::vector<double> out(count);
    for (int i = 0; i < count; ++i) out[i] = 2.0 * kPi * i / (count - 1);
    return out;
}

MomentReport verify_first_moment_equivalence(const FockOperator& rho_f, const FockOperator& e_r,
                                             const PhaseGrid& grid, int theta_samples)
{
    const int n_max = rho_f.n_max();
    const double norm = trace_pairing(e_r, rho_f).real();
    if (std::abs(norm) < Tolerances::orth_tol) {
        throw OrthogonalBoundary("verify_first_moment_equivalence: Tr[E_R rho_F] is below orth_tol");
    }

    MomentReport report;
    report.normalization = norm;
    report.mean_swv = Eigen::Vector2d(real_weak_value(position_operator(n_max), rho_f, e_r),
                                      real_weak_value(momentum_operator(n_max), rho_f, e_r));

    const WignerField swd = swd_field(wigner_of_operator(rho_f, grid), wigner_of_operator(e_r, grid));
    const PhaseMoments moments = field_moments(swd);
    report.mean_swd = moments.mean;
    report.discrepancy = (report.mean_swv - report.mean_swd).cwiseAbs().maxCoeff();

    const FockOperator swv = swv_state(rho_f, e_r);
    for (double theta : theta_sweep(theta_samples)) {
        const Eigen::Vector2d c(std::cos(theta), std::sin(theta));
        report.variance_samples.push_back(
            {theta, c.dot(moments.cov * c), pseudo_state_variance(swv, theta), LadderConvention::vacuum_variance});
    }
    return report;
}

// ---------------------------------------------------------------------------

TypicalAlpha typical_alpha()
{
    const double delta = std::sqrt(std::numbers::ln2);
    return {delta, 0.5 * delta};
}

double disk_probability(double delta)
{
    if (delta <= 0.0) return 0.0;
    using Rule = boost::math::quadrature::gauss<double, 40>;
    // x = delta sin(t) keeps the outer integrand smooth at the rim of the disk.
    const double outer = Rule::integrate(
        [delta](double t) {
            const double x = delta * std::sin(t);
            const double half = delta * std::cos(t);
            const double inner = Rule::integrate([x](double y) { return std::exp(-x * x - y * y); }, -half, half);
            return inner * delta * std::cos(t);
        },
        -0.5 * kPi, 0.5 * kPi);
    return outer / kPi;
}

// ---------------------------------------------------------------------------

std::vector<GaussianPairSpec> random_gaussian_pairs(std::uint64_t seed, int count)
{
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    auto draw = [&]() {
        const double radius = std::sqrt(unit(rng));
        const double angle = 2.0 * kPi * unit(rng);
        const double r = 0.5 * unit(rng);
        const double phi = 2.0 * kPi * unit(rng);
        return GaussianStateSpec{std::polar(radius, angle), r, phi};
    };
    std::vector<GaussianPairSpec> out;
    out.reserve(count);
    for (int i = 0; i < count; ++i) {
        const GaussianStateSpec f = draw();
        const GaussianStateSpec r = draw();
        out.push_back({f, r});
    }
    return out;
}

FockOperator gaussian_projector(const GaussianStateSpec& spec, int n_max)
{
    return FockOperator::projector(displaced_squeezed_state(spec.alpha, spec.r, spec.phi, n_max));
}

}  // namespace phasespace
