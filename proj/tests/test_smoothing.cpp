#include <doctest.h>

#include <cmath>
#include <numbers>
#include <set>

#include "oracles.hpp"
#include "phasespace/smoothing.hpp"

using namespace phasespace;

namespace {

constexpr int kN = Tolerances::default_n_max;
const double kFigAlpha = std::sqrt(std::numbers::ln2) / 2.0;
const PhaseGrid kGrid = PhaseGrid::default_grid();

FockOperator coherent_projector(cplx alpha) { return FockOperator::projector(coherent_state(alpha, kN)); }

HiddenMarkovChain sample_chain()
{
    HiddenMarkovChain c;
    c.initial = Eigen::Vector3d(0.2, 0.5, 0.3);
    c.transition.resize(3, 3);
    c.transition << 0.6, 0.3, 0.1,
                    0.25, 0.5, 0.25,
                    0.05, 0.15, 0.8;
    c.emission.resize(3, 3);
    c.emission << 0.7, 0.2, 0.1,
                  0.2, 0.6, 0.2,
                  0.1, 0.3, 0.6;
    return c;
}

double max_abs(const Eigen::MatrixXcd& m) { return m.cwiseAbs().maxCoeff(); }

}  // namespace

TEST_SUITE("classical")
{
    TEST_CASE("uniform likelihood returns the filtered distribution exactly")
    {
        const ClassicalGridDist f({0.1, 0.25, 0.65});
        const std::vector<double> flat(3, 0.4);
        CHECK(classical_smooth(f, flat).probabilities() == f.probabilities());
    }

    TEST_CASE("smoothing multiplies and renormalizes")
    {
        const ClassicalGridDist f({0.5, 0.5});
        const std::vector<double> like{1.0, 3.0};
        const ClassicalGridDist s = classical_smooth(f, like);
        CHECK(s[0] == doctest::Approx(0.25));
        CHECK(s[1] == doctest::Approx(0.75));
    }

    TEST_CASE("zero evidence and malformed inputs are rejected")
    {
        const ClassicalGridDist f({1.0, 0.0});
        const std::vector<double> like{0.0, 2.0};
        CHECK_THROWS_AS(classical_smooth(f, like), ZeroEvidence);
        CHECK_THROWS_AS(ClassicalGridDist({0.5, 0.6}), PreconditionError);
        CHECK_THROWS_AS(ClassicalGridDist({-0.1, 1.1}), PreconditionError);
        const std::vector<double> short_like{1.0};
        CHECK_THROWS_AS(classical_smooth(f, short_like), DimensionMismatch);
    }

    TEST_CASE("forward-backward smoothing matches path enumeration at every time")
    {
        const HiddenMarkovChain c = sample_chain();
        const std::vector<int> obs{2, 0, 1, 1, 2, 0};
        for (int t = 0; t < static_cast<int>(obs.size()); ++t) {
            const ClassicalGridDist s = classical_smooth(hmm_filtered(c, obs, t), hmm_retro_likelihood(c, obs, t));
            const std::vector<double> ref = oracle::enumerate_smoothed(c.initial, c.transition, c.emission, obs, t);
            const ClassicalGridDist lib = hmm_smoothed_by_enumeration(c, obs, t);
            for (int x = 0; x < 3; ++x) {
                CHECK(std::abs(s[x] - ref[x]) < 1e-12);
                CHECK(std::abs(lib[x] - ref[x]) < 1e-12);
            }
        }
    }

    TEST_CASE("smoothing at the final time is filtering")
    {
        const HiddenMarkovChain c = sample_chain();
        const std::vector<int> obs{0, 1, 2};
        const std::vector<double> retro = hmm_retro_likelihood(c, obs, 2);
        for (double r : retro) CHECK(r == 1.0);
    }

    TEST_CASE("classical smoothing is invariant under likelihood scaling")
    {
        const ClassicalGridDist f({0.2, 0.3, 0.5});
        const std::vector<double> like{0.1, 0.7, 0.4};
        std::vector<double> scaled = like;
        for (double& v : scaled) v *= 1234.5;
        const ClassicalGridDist a = classical_smooth(f, like);
        const ClassicalGridDist b = classical_smooth(f, scaled);
        for (int x = 0; x < 3; ++x) CHECK(std::abs(a[x] - b[x]) <= 1e-15);
    }
}

TEST_SUITE("smoothed Wigner distribution")
{
    TEST_CASE("SWD of two coherent states is the information-form Gaussian")
    {
        const cplx alpha(0.6, -0.2);
        const cplx beta(-0.3, 0.4);
        const WignerField swd = swd_field(wigner_of_operator(coherent_projector(alpha), kGrid),
                                          wigner_of_operator(coherent_projector(beta), kGrid));
        CHECK(swd.integral() == doctest::Approx(1.0).epsilon(1e-4));
        const GaussianPhaseDist g = swd_gaussian(GaussianPhaseDist::coherent(alpha), GaussianPhaseDist::coherent(beta));
        CHECK((swd.values - gaussian_wigner_eval(g, kGrid).values).cwiseAbs().maxCoeff() < 1e-5);
        CHECK((g.cov - 0.25 * Eigen::Matrix2d::Identity()).cwiseAbs().maxCoeff() < 1e-15);
    }

    TEST_CASE("Gaussian fusion equals the normalized pointwise product of densities")
    {
        const GaussianPhaseDist f(Eigen::Vector2d(0.5, -0.2), (Eigen::Matrix2d() << 0.7, 0.2, 0.2, 0.4).finished());
        const GaussianPhaseDist r(Eigen::Vector2d(-0.4, 0.6), (Eigen::Matrix2d() << 0.3, -0.05, -0.05, 0.9).finished());
        const GaussianPhaseDist s = swd_gaussian(f, r);
        // The product of densities is proportional to the fused density, so
        // their ratio must be constant over the plane.
        const double ref_ratio = oracle::gaussian_density(Eigen::Vector2d::Zero(), f.mean, f.cov) *
                                 oracle::gaussian_density(Eigen::Vector2d::Zero(), r.mean, r.cov) /
                                 oracle::gaussian_density(Eigen::Vector2d::Zero(), s.mean, s.cov);
        for (auto x : {Eigen::Vector2d(0.3, 0.1), Eigen::Vector2d(-1.0, 0.8), Eigen::Vector2d(0.9, -1.3)}) {
            const double ratio = oracle::gaussian_density(x, f.mean, f.cov) * oracle::gaussian_density(x, r.mean, r.cov) /
                                 oracle::gaussian_density(x, s.mean, s.cov);
            CHECK(ratio == doctest::Approx(ref_ratio).epsilon(1e-12));
        }
    }

    TEST_CASE("SWD is invariant under effect scaling and rejects orthogonal pairs")
    {
        const WignerField wf = wigner_of_operator(coherent_projector(cplx(0.2, 0.1)), kGrid);
        const WignerField wr = wigner_of_operator(coherent_projector(cplx(-0.5, 0.3)), kGrid);
        const WignerField base = swd_field(wf, wr);
        const WignerField scaled = swd_field(wf, WignerField(kGrid, 17.0 * wr.values));
        CHECK((base.values - scaled.values).cwiseAbs().maxCoeff() <= 1e-12 * base.max_value());
        CHECK_THROWS_AS(swd_field(wf, WignerField(kGrid, Eigen::MatrixXd::Zero(kGrid.n_q(), kGrid.n_p()))),
                        OrthogonalBoundary);
    }

    TEST_CASE("convolved characteristic function matches the transform of the SWD field")
    {
        const PhaseGrid g = PhaseGrid::square(8.0, 64);
        const FockOperator rho = FockOperator::projector(displaced_squeezed_state(cplx(0.3, 0.2), 0.2, 0.6, kN));
        const FockOperator e = coherent_projector(cplx(-0.4, 0.1));
        const CharacteristicField chi = chi_swd(characteristic_of_operator(rho, g), characteristic_of_operator(e, g));
        const CharacteristicField ref = characteristic_from_wigner(swd_field(wigner_of_operator(rho, g), wigner_of_operator(e, g)));
        CHECK(max_abs((chi.values - ref.values).block(16, 16, 32, 32)) < 1e-4);
        CHECK(std::abs(chi.at_zero() - 1.0) < 1e-12);
    }

    TEST_CASE("cosine-modulated convolution equals the characteristic function of the SWV state")
    {
        const PhaseGrid g = PhaseGrid::square(8.0, 64);
        const cplx alpha(kFigAlpha, 0.0);
        const FockOperator rho = coherent_projector(alpha);
        const FockOperator e = coherent_projector(-alpha);
        const CharacteristicField cf = characteristic_of_operator(rho, g);
        const CharacteristicField cr = characteristic_of_operator(e, g);
        const CharacteristicField swv = chi_swv(cf, cr, SymplecticForm::standard());
        const CharacteristicField ref = characteristic_of_operator(swv_state(rho, e), g);
        CHECK(max_abs((swv.values - ref.values).block(16, 16, 32, 32)) < 1e-3);

        const CharacteristicField flipped = chi_swv(cf, cr, SymplecticForm::standard().negated());
        CHECK(max_abs(swv.values - flipped.values) == 0.0);

        const CharacteristicField scaled = chi_swv(cf, CharacteristicField(g, 5.0 * cr.values), SymplecticForm::standard());
        CHECK(max_abs(scaled.values - swv.values) <= 1e-12 * max_abs(swv.values));
    }
}

TEST_SUITE("moments")
{
    TEST_CASE("SWV and SWD share first moments")
    {
        for (const auto& pair : random_gaussian_pairs(kDefaultSuiteSeed, 5)) {
            const MomentReport r = verify_first_moment_equivalence(gaussian_projector(pair.filtered, kN),
                                                                   gaussian_projector(pair.retro, kN), kGrid, 4);
            CHECK(r.discrepancy < 1e-5);
            CHECK(r.variance_samples.size() == 4);
        }
    }

    TEST_CASE("moment report serializes with exactly the documented fields")
    {
        const cplx alpha(kFigAlpha, 0.0);
        const MomentReport r = verify_first_moment_equivalence(coherent_projector(alpha), coherent_projector(-alpha), kGrid, 3);
        const nlohmann::json j = r.to_json();
        std::set<std::string> keys;
        for (const auto& [k, v] : j.items()) keys.insert(k);
        CHECK(keys == std::set<std::string>{"mean_swv", "mean_swd", "discrepancy", "normalization", "variance_samples"});
        CHECK(j["mean_swv"].size() == 2);
        std::set<std::string> sample_keys;
        for (const auto& [k, v] : j["variance_samples"][0].items()) sample_keys.insert(k);
        CHECK(sample_keys == std::set<std::string>{"theta", "v_swd", "v_swv", "v_vac"});
        CHECK(j["normalization"].get<double>() == doctest::Approx(0.5).epsilon(1e-12));
        CHECK(j["variance_samples"][0]["v_vac"].get<double>() == 0.5);
    }

    TEST_CASE("theta sweep spans the closed interval")
    {
        const std::vector<double> t = theta_sweep(5);
        CHECK(t.front() == 0.0);
        CHECK(t.back() == doctest::Approx(2.0 * std::numbers::pi));
    }
}

TEST_SUITE("typical amplitude")
{
    TEST_CASE("disk probability matches the closed form 1 - exp(-delta^2)")
    {
        for (double d : {0.1, 0.5, 1.0, 2.0}) CHECK(disk_probability(d) == doctest::Approx(1.0 - std::exp(-d * d)).epsilon(1e-13));
        const TypicalAlpha t = typical_alpha();
        CHECK(std::abs(disk_probability(t.delta) - 0.5) < 1e-12);
        CHECK(t.alpha == doctest::Approx(0.416277).epsilon(1e-6));
    }
}

TEST_SUITE("random suite")
{
    TEST_CASE("pairs are reproducible and respect the sampling ranges")
    {
        const auto a = random_gaussian_pairs(7, 50);
        const auto b = random_gaussian_pairs(7, 50);
        for (std::size_t i = 0; i < a.size(); ++i) {
            CHECK(a[i].filtered.alpha == b[i].filtered.alpha);
            CHECK(std::abs(a[i].retro.alpha) <= 1.0);
            CHECK(a[i].filtered.r >= 0.0);
            CHECK(a[i].filtered.r <= 0.5);
        }
        CHECK(random_gaussian_pairs(8, 1)[0].filtered.alpha != a[0].filtered.alpha);
    }
}

TEST_SUITE("worked cases")
{
    TEST_CASE("indicator likelihood yields a point mass")
    {
        const ClassicalGridDist f({0.2, 0.5, 0.3});
        const std::vector<double> indicator{0.0, 1.0, 0.0};
        CHECK(classical_smooth(f, indicator).probabilities() == std::vector<double>{0.0, 1.0, 0.0});
    }

    TEST_CASE("three-step chain against all 27 paths")
    {
        const HiddenMarkovChain c = sample_chain();
        const std::vector<int> obs{1, 2, 0};
        const ClassicalGridDist s = classical_smooth(hmm_filtered(c, obs, 1), hmm_retro_likelihood(c, obs, 1));
        const std::vector<double> ref = oracle::enumerate_smoothed(c.initial, c.transition, c.emission, obs, 1);
        for (int x = 0; x < 3; ++x) CHECK(std::abs(s[x] - ref[x]) < 1e-12);
    }

    TEST_CASE("SWD of vacuum with itself halves the covariance")
    {
        const WignerField v = wigner_of_operator(coherent_projector(0.0), kGrid);
        const PhaseMoments m = field_moments(swd_field(v, v));
        CHECK((m.cov - 0.25 * Eigen::Matrix2d::Identity()).cwiseAbs().maxCoeff() < 1e-5);
        const GaussianPhaseDist g = swd_gaussian(GaussianPhaseDist::vacuum(), GaussianPhaseDist::vacuum());
        CHECK(g.mean.cwiseAbs().maxCoeff() == 0.0);
        CHECK((g.cov - 0.25 * Eigen::Matrix2d::Identity()).cwiseAbs().maxCoeff() < 1e-15);
    }

    TEST_CASE("antipodal coherent pair: SWD centred exactly, moments match the fusion")
    {
        const WignerField wf = wigner_of_operator(coherent_projector(kFigAlpha), kGrid);
        const WignerField wr = wigner_of_operator(coherent_projector(-kFigAlpha), kGrid);
        const WignerField swd = swd_field(wf, wr);
        const PhaseMoments m = field_moments(swd);
        CHECK(std::abs(m.mean(0)) < 1e-15);
        CHECK(std::abs(m.mean(1)) < 1e-15);
        const GaussianPhaseDist g = swd_gaussian(GaussianPhaseDist::coherent(kFigAlpha), GaussianPhaseDist::coherent(-kFigAlpha));
        CHECK((m.cov - g.cov).cwiseAbs().maxCoeff() < 1e-5);
        CHECK(g.mean.cwiseAbs().maxCoeff() < 1e-15);
        for (double theta : {0.0, 1.0, 2.0}) CHECK(std::abs(field_quadrature_variance(swd, theta) - 0.25) < 1e-4);
        // The SWD denominator reproduces Tr[E_R rho_F].
        CHECK(std::abs(swd_normalization(wf, wr) - trace_pairing(coherent_projector(-kFigAlpha), coherent_projector(kFigAlpha)).real()) < 1e-6);
    }

    TEST_CASE("Gaussian fusion of a state with itself keeps the mean")
    {
        const GaussianPhaseDist f(Eigen::Vector2d(0.3, -0.8), (Eigen::Matrix2d() << 0.5, 0.1, 0.1, 0.7).finished());
        const GaussianPhaseDist s = swd_gaussian(f, f);
        CHECK((s.mean - f.mean).cwiseAbs().maxCoeff() < 1e-14);
        CHECK((s.cov - 0.5 * f.cov).cwiseAbs().maxCoeff() < 1e-15);
    }

    TEST_CASE("convolution of Gaussian characteristic functions is the fused Gaussian")
    {
        const PhaseGrid g = PhaseGrid::square(8.0, 64);
        const GaussianPhaseDist f(Eigen::Vector2d(0.4, 0.1), (Eigen::Matrix2d() << 0.6, 0.1, 0.1, 0.5).finished());
        const GaussianPhaseDist r(Eigen::Vector2d(-0.2, 0.3), (Eigen::Matrix2d() << 0.5, -0.1, -0.1, 0.8).finished());
        const CharacteristicField chi = chi_swd(gaussian_characteristic(f, g), gaussian_characteristic(r, g));
        const CharacteristicField ref = gaussian_characteristic(swd_gaussian(f, r), g);
        CHECK(max_abs((chi.values - ref.values).block(16, 16, 32, 32)) < 1e-6);
    }

    TEST_CASE("unit modulation reduces the SWV convolution to the SWD convolution")
    {
        const PhaseGrid g = PhaseGrid::square(8.0, 64);
        const CharacteristicField cf = characteristic_of_operator(coherent_projector(kFigAlpha), g);
        const CharacteristicField cr = characteristic_of_operator(coherent_projector(-kFigAlpha), g);
        const CharacteristicField unit = smoothed_characteristic(cf, cr, [](double, double, double, double) { return 1.0; });
        CHECK(max_abs(unit.values - chi_swd(cf, cr).values) == 0.0);
        CHECK(std::abs(chi_swv(cf, cr, SymplecticForm::standard()).at_zero() - 1.0) < 1e-14);
    }

    TEST_CASE("figure pair: shared means, different second moments")
    {
        const MomentReport r = verify_first_moment_equivalence(coherent_projector(kFigAlpha), coherent_projector(-kFigAlpha), kGrid, 5);
        CHECK(r.discrepancy < 1e-8);
        CHECK(r.mean_swv.cwiseAbs().maxCoeff() < 1e-12);
        CHECK(r.mean_swd.cwiseAbs().maxCoeff() < 1e-12);
        const VarianceSample& quarter = r.variance_samples[1];  // theta = pi/2
        CHECK(quarter.theta == doctest::Approx(std::numbers::pi / 2));
        CHECK(quarter.v_swd == doctest::Approx(0.25).epsilon(1e-6));
        CHECK(std::abs(quarter.v_swv - 0.25) > 0.05);
        for (const auto& s : r.variance_samples) CHECK(s.v_vac == 0.5);
    }

    TEST_CASE("disk probability vanishes with the radius")
    {
        CHECK(disk_probability(0.0) == 0.0);
        CHECK(disk_probability(1e-4) < 1e-7);
        CHECK(typical_alpha().delta == doctest::Approx(0.832554611).epsilon(1e-9));
    }
}
