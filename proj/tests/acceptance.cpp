// Acceptance run: one PASS/FAIL line per criterion, tolerances pinned below.
//
// Exit status is 0 when every criterion passes except those listed in
// kKnownRed, and those are still required to fail. Any other outcome
// exits 1, so an unexpected regression or an unexpected recovery both show up.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "phasespace/scenario.hpp"

using namespace phasespace;

namespace {

namespace tol {
constexpr double first_moment = 1e-5;
constexpr double first_moment_seconds = 60.0;
constexpr double chi_swv = 1e-3;
constexpr double chi_swv_seconds = 120.0;
constexpr double swv_negativity = -1e-3;
constexpr double swd_floor = -1e-9;
constexpr double swd_closed_form = 1e-5;
constexpr double containment_margin = 1e-9;
constexpr double v_swd = 1e-4;
constexpr double v_swv_ceiling = 1e-6;
constexpr double v_swv_dip = 1e-3;
constexpr double v_swv_dip_fraction = 0.9;
constexpr double disk = 1e-6;
constexpr double alpha_paper = 5e-4;
constexpr double overlap = 1e-6;
constexpr double pair_trace = 1e-6;
constexpr double closed_form = 1e-8;
constexpr double scaling = 1e-12;
constexpr double hmm = 1e-12;
constexpr double convergence_ratio = 4.0;
}  // namespace tol

constexpr int kFirstMomentPairs = 100;
constexpr int kOverlapPairs = 20;
constexpr int kThetaSamples = 361;

// The SWV e^{-1/2} contour is tangent to the vacuum contour on the q axis,
// so strict containment cannot hold at theta = 0 and pi.
const std::set<int> kKnownRed{3};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0)
{
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt(double x)
{
    char buf[48];
    std::snprintf(buf, sizeof buf, "%.3e", x);
    return buf;
}

struct Outcome {
    bool passed;
    std::string detail;
};

Outcome criterion_first_moments()
{
    const auto t0 = Clock::now();
    const double defect = first_moment_suite_defect(kDefaultSuiteSeed, kFirstMomentPairs, PhaseGrid::default_grid(),
                                                    Tolerances::default_n_max);
    const double elapsed = seconds_since(t0);
    return {defect < tol::first_moment && elapsed < tol::first_moment_seconds,
            "max |<x>_SWV - <x>_SWD| = " + fmt(defect) + " over " + std::to_string(kFirstMomentPairs) + " pairs in " +
                fmt(elapsed) + " s"};
}

Outcome criterion_cosine_characteristic()
{
    const auto t0 = Clock::now();
    const double a = RunConfig::default_alpha();
    const double defect = chi_swv_fock_defect(cplx(a, 0.0), cplx(-a, 0.0), PhaseGrid::square(8.0, 64),
                                              Tolerances::default_n_max);
    const double elapsed = seconds_since(t0);
    return {defect < tol::chi_swv && elapsed < tol::chi_swv_seconds,
            "interior max |chi_swv - chi(swv_state)| = " + fmt(defect) + " in " + fmt(elapsed) + " s"};
}

Outcome criterion_figure1()
{
    const Figure1Data d = compute_figure1(RunConfig{});
    const double swv_min = d.swv.field.min_value();
    const double swd_min = d.swd.field.min_value();
    const double closed =
        (gaussian_wigner_eval(d.swd_closed_form, d.swd.field.grid).values - d.swd.field.values).cwiseAbs().maxCoeff();
    const std::vector<double> angles = theta_sweep(kThetaSamples);
    const ContainmentReport swv =
        contour_containment(d.swv.contour, d.swv.vacuum_contour, d.swv.center, angles, tol::containment_margin);
    const ContainmentReport swd =
        contour_containment(d.swd.contour, d.swd.vacuum_contour, d.swd.center, angles, tol::containment_margin);
    const bool ok = swv_min < tol::swv_negativity && swd_min >= tol::swd_floor && closed < tol::swd_closed_form &&
                    swv.strictly_inside() && swd.strictly_inside();
    std::ostringstream os;
    os << "min W_SWV = " << fmt(swv_min) << ", min SWD = " << fmt(swd_min) << ", SWD vs fusion = " << fmt(closed)
       << "; containment SWV " << swv.samples - swv.failures << "/" << swv.samples << " (worst gap " << fmt(swv.worst_margin)
       << " at theta " << fmt(swv.worst_angle) << "), SWD " << swd.samples - swd.failures << "/" << swd.samples
       << " (worst gap " << fmt(swd.worst_margin) << ")";
    return {ok, os.str()};
}

Outcome criterion_figure2()
{
    RunConfig c;
    c.theta_samples = kThetaSamples;
    const std::vector<VarianceSample> rows = compute_figure2(c);
    double swd_dev = 0.0, swd_max = 0.0, swv_max = -1.0;
    int dips = 0;
    for (const auto& r : rows) {
        swd_dev = std::max(swd_dev, std::abs(r.v_swd - 0.25));
        swd_max = std::max(swd_max, r.v_swd);
        swv_max = std::max(swv_max, r.v_swv);
        dips += r.v_swv < 0.5 - tol::v_swv_dip;
    }
    const double fraction = static_cast<double>(dips) / rows.size();
    const bool ok = rows.size() == kThetaSamples && swd_dev <= tol::v_swd && swd_max < 0.5 &&
                    swv_max <= 0.5 + tol::v_swv_ceiling && fraction >= tol::v_swv_dip_fraction;
    return {ok, "max |v_swd - 0.25| = " + fmt(swd_dev) + ", max v_swv = " + fmt(swv_max) +
                    ", fraction with v_swv < 0.499 = " + fmt(fraction)};
}

Outcome criterion_typical_alpha()
{
    const TypicalAlpha t = typical_alpha();
    const double p = disk_probability(t.delta);
    const bool ok = std::abs(p - 0.5) < tol::disk && std::abs(t.alpha - 0.416) < tol::alpha_paper &&
                    std::abs(t.alpha - 0.416277) < 1e-6;
    char buf[128];
    std::snprintf(buf, sizeof buf, "disk integral = %.15f, alpha = %.9f", p, t.alpha);
    return {ok, buf};
}

Outcome criterion_identities()
{
    const int n = Tolerances::default_n_max;
    const double overlap = overlap_suite_defect(kDefaultSuiteSeed, kOverlapPairs, PhaseGrid::default_grid(), n);

    const cplx alpha(RunConfig::default_alpha(), 0.0);
    const FockOperator rho = FockOperator::projector(coherent_state(alpha, n));
    const FockOperator e = FockOperator::projector(coherent_state(-alpha, n));
    const double pair_trace = std::abs(trace_pairing(rho, e).real() - 0.5);
    const FockOperator swv = swv_state(rho, e);
    const double closed = (swv_coherent_pair(alpha, -alpha, n).matrix() - swv.matrix()).cwiseAbs().maxCoeff();

    // Effect scaling, checked on every construction that consumes the effect.
    const double c = 3.7;
    const FockOperator e_scaled = e.scaled(c);
    auto rel = [](const auto& a, const auto& b) { return (a - b).cwiseAbs().maxCoeff() / b.cwiseAbs().maxCoeff(); };
    double scaling = rel(swv_state(rho, e_scaled).matrix(), swv.matrix());
    const PhaseGrid g = PhaseGrid::default_grid();
    const WignerField wf = wigner_of_operator(rho, g);
    const WignerField wr = wigner_of_operator(e, g);
    scaling = std::max(scaling, rel(swd_field(wf, WignerField(g, c * wr.values)).values, swd_field(wf, wr).values));
    const PhaseGrid kg = PhaseGrid::square(8.0, 64);
    const CharacteristicField cf = characteristic_of_operator(rho, kg);
    const CharacteristicField cr = characteristic_of_operator(e, kg);
    const CharacteristicField cr_scaled(kg, c * cr.values);
    scaling = std::max(scaling, rel(chi_swd(cf, cr_scaled).values, chi_swd(cf, cr).values));
    scaling = std::max(scaling, rel(chi_swv(cf, cr_scaled, SymplecticForm::standard()).values,
                                    chi_swv(cf, cr, SymplecticForm::standard()).values));
    const ClassicalGridDist f({0.2, 0.3, 0.5});
    const std::vector<double> like{0.1, 0.7, 0.4};
    const std::vector<double> like_scaled{0.1 * c, 0.7 * c, 0.4 * c};
    const ClassicalGridDist s0 = classical_smooth(f, like);
    const ClassicalGridDist s1 = classical_smooth(f, like_scaled);
    for (std::size_t i = 0; i < f.size(); ++i) scaling = std::max(scaling, std::abs(s1[i] - s0[i]) / s0[i]);

    const bool ok = overlap < tol::overlap && pair_trace < tol::pair_trace && closed < tol::closed_form &&
                    scaling < tol::scaling;
    return {ok, "overlap identity " + fmt(overlap) + ", |Tr[rho E] - 1/2| = " + fmt(pair_trace) +
                    ", closed form vs generic " + fmt(closed) + ", scaling " + fmt(scaling)};
}

Outcome criterion_classical()
{
    const ClassicalDemo d = compute_classical_demo(false);
    const std::vector<double> ref =
        oracle::enumerate_smoothed(d.chain.initial, d.chain.transition, d.chain.emission, d.observations, d.t);
    double worst = 0.0;
    for (std::size_t x = 0; x < ref.size(); ++x) worst = std::max(worst, std::abs(d.smoothed[x] - ref[x]));
    const ClassicalDemo flat = compute_classical_demo(true);
    const bool identity = flat.smoothed.probabilities() == flat.filtered.probabilities();
    return {worst < tol::hmm && identity,
            "max |smoothed - enumeration| = " + fmt(worst) + ", uniform-likelihood identity " + (identity ? "exact" : "broken")};
}

Outcome criterion_convergence()
{
    // On the default grid both defects already sit at roundoff, where the
    // ratio carries no information. The coarse family below is the smallest
    // mesh at which the discretization error is visible.
    const int n = Tolerances::default_n_max;
    const PhaseGrid coarse = PhaseGrid::square(16.0, 64);
    const PhaseGrid fine = PhaseGrid::square(16.0, 128);
    const double fm_c = first_moment_suite_defect(kDefaultSuiteSeed, kFirstMomentPairs, coarse, n);
    const double fm_f = first_moment_suite_defect(kDefaultSuiteSeed, kFirstMomentPairs, fine, n);
    const double ov_c = overlap_suite_defect(kDefaultSuiteSeed, kOverlapPairs, coarse, n);
    const double ov_f = overlap_suite_defect(kDefaultSuiteSeed, kOverlapPairs, fine, n);
    const bool ok = fm_c >= tol::convergence_ratio * fm_f && ov_c >= tol::convergence_ratio * ov_f;
    return {ok, "q_max 16, 64 -> 128 points: first moments " + fmt(fm_c) + " -> " + fmt(fm_f) + ", overlap " + fmt(ov_c) +
                    " -> " + fmt(ov_f)};
}

}  // namespace

int main()
{
    const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
        {"first-moment equivalence", criterion_first_moments},
        {"cosine-modulated characteristic function", criterion_cosine_characteristic},
        {"figure 1 fields and contours", criterion_figure1},
        {"figure 2 variance sweep", criterion_figure2},
        {"typical coherent amplitude", criterion_typical_alpha},
        {"identity suite", criterion_identities},
        {"classical baseline", criterion_classical},
        {"convergence under grid refinement", criterion_convergence},
    };

    int unexpected = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        const int id = static_cast<int>(i) + 1;
        Outcome o;
        try {
            o = criteria[i].second();
        } catch (const std::exception& e) {
            o = {false, std::string("raised: ") + e.what()};
        }
        const bool red = kKnownRed.count(id) > 0;
        std::printf("%s criterion %d (%s): %s%s\n", o.passed ? "PASS" : "FAIL", id, criteria[i].first.c_str(),
                    o.detail.c_str(), red ? " [known red]" : "");
        std::fflush(stdout);
        if (o.passed == red) ++unexpected;
    }
    std::printf("%s\n", unexpected == 0 ? "acceptance: results as expected" : "acceptance: unexpected results");
    return unexpected == 0 ? 0 : 1;
}
