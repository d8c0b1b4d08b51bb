#include "phasespace/scenario.hpp"

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <numbers>
#include <random>
#include <sstream>

#include "phasespace/errors.hpp"

namespace phasespace {

namespace fs = std::filesystem;

namespace {

constexpr double kPi = std::numbers::pi;

// Bounds held by `verify`; the acceptance binary pins the same values.
constexpr double kFirstMomentTol = 1e-5;
constexpr double kChiSwvTol = 1e-3;
constexpr double kOverlapTol = 1e-6;
constexpr double kClosedFormTol = 1e-8;
constexpr double kTraceTol = 1e-10;
constexpr double kGridTol = 1e-4;
constexpr double kDiskTol = 1e-6;
constexpr int kFirstMomentPairs = 100;
constexpr int kOverlapPairs = 20;

std::string describe_pair(cplx alpha, cplx beta)
{
    std::ostringstream os;
    os << "rho_F=|alpha><alpha|, E_R=|beta><beta|, alpha=" << format_double(alpha.real()) << "+"
       << format_double(alpha.imag()) << "i, beta=" << format_double(beta.real()) << "+" << format_double(beta.imag())
       << "i";
    return os.str();
}

ContourPanel make_panel(WignerField field)
{
    const double level = relative_contour_level(field);
    std::vector<Polyline> contour = marching_squares(field, level);
    const Eigen::Vector2d center = field_moments(field).mean;
    const WignerField vacuum =
        gaussian_wigner_eval(GaussianPhaseDist(center, GaussianPhaseDist::vacuum().cov), field.grid);
    std::vector<Polyline> vacuum_contour = marching_squares(vacuum, relative_contour_level(vacuum));
    return ContourPanel{std::move(field), level, center, std::move(contour), std::move(vacuum_contour)};
}

CheckResult bounded(std::string name, double value, double tolerance, std::string detail = {})
{
    return CheckResult{std::move(name), value <= tolerance, value, tolerance, std::move(detail)};
}

void write_distribution_rows(std::ofstream& out, const std::string& label, const ClassicalDemo& demo)
{
    auto row = [&](const char* name, const ClassicalGridDist& d) {
        out << label << ',' << name;
        for (double p : d.probabilities()) out << ',' << format_double(p);
        out << '\n';
    };
    row("filtered", demo.filtered);
    row("retro_likelihood", demo.retro);
    row("smoothed", demo.smoothed);
    row("enumerated", demo.enumerated);
}

nlohmann::json demo_json(const ClassicalDemo& demo)
{
    return {
        {"t", demo.t},
        {"observations", demo.observations},
        {"filtered", demo.filtered.probabilities()},
        {"retro_likelihood", demo.retro.probabilities()},
        {"smoothed", demo.smoothed.probabilities()},
        {"enumerated", demo.enumerated.probabilities()},
    };
}

}  // namespace

// ---------------------------------------------------------------------------

ExitCode exit_code_for(const std::exception& e)
{
    if (dynamic_cast<const OrthogonalBoundary*>(&e)) return ExitCode::orthogonal;
    if (dynamic_cast<const IoError*>(&e) || dynamic_cast<const fs::filesystem_error*>(&e)) return ExitCode::io;
    if (dynamic_cast<const PreconditionError*>(&e)) return ExitCode::precondition;
    return ExitCode::invariant_failure;
}

double RunConfig::default_alpha()
{
    return typical_alpha().alpha;
}

RunConfig RunConfig::from_environment()
{
    RunConfig config;
    if (const char* env = std::getenv("PHASESPACE_SEED"); env && *env) {
        try {
            std::size_t used = 0;
            config.seed = std::stoull(env, &used);
            if (env[used] != '\0') throw std::invalid_argument(env);
        } catch (const std::exception&) {
            throw PreconditionError(std::string("PHASESPACE_SEED is not an unsigned integer: ") + env);
        }
    }
    return config;
}

void RunConfig::validate() const
{
    if (!(alpha > 0.0) || !std::isfinite(alpha)) throw PreconditionError("alpha must be positive");
    if (theta_samples < 3) throw PreconditionError("theta_samples must be at least 3");
    if (n_max < 20) throw PreconditionError("n_max must be at least 20");
    (void)grid();
}

// ---------------------------------------------------------------------------

Figure1Data compute_figure1(const RunConfig& config)
{
    config.validate();
    const PhaseGrid grid = config.grid();
    const cplx alpha(config.alpha, 0.0);
    const cplx beta = config.beta_value();
    const FockOperator rho_f = FockOperator::projector(coherent_state(alpha, config.n_max));
    const FockOperator e_r = FockOperator::projector(coherent_state(beta, config.n_max));

    WignerField w_swv = wigner_of_operator(swv_state(rho_f, e_r), grid);
    WignerField w_swd = swd_field(wigner_of_operator(rho_f, grid), wigner_of_operator(e_r, grid));
    return Figure1Data{
        make_panel(std::move(w_swv)),
        make_panel(std::move(w_swd)),
        swd_gaussian(GaussianPhaseDist::coherent(alpha), GaussianPhaseDist::coherent(beta)),
        trace_pairing(e_r, rho_f).real(),
    };
}

std::array<ContourArtifact, 2> cmd_figure1(const RunConfig& config)
{
    const Figure1Data data = compute_figure1(config);
    const std::string pair = describe_pair(cplx(config.alpha, 0.0), config.beta_value());
    auto emit = [&](const std::string& stem, const ContourPanel& panel, const std::string& source) {
        ContourArtifact a;
        a.level = panel.level;
        a.field_file = write_field(config.output_dir, stem + "_field", panel.field, {source, panel.field.integral()},
                                   config.format);
        a.contour_file = write_polylines(config.output_dir, stem + "_contour", panel.contour, panel.level, config.format);
        const double vacuum_level = std::exp(-0.5) / kPi;
        a.vacuum_contour_file = write_polylines(config.output_dir, stem + "_vacuum_contour", panel.vacuum_contour,
                                                vacuum_level, config.format);
        return a;
    };
    return {
        emit("swv", data.swv, "Wigner function of the SWV pseudo-state; " + pair),
        emit("swd", data.swd, "smoothed Wigner distribution; " + pair),
    };
}

// ---------------------------------------------------------------------------

std::vector<VarianceSample> compute_figure2(const RunConfig& config)
{
    config.validate();
    const FockOperator rho_f = FockOperator::projector(coherent_state(cplx(config.alpha, 0.0), config.n_max));
    const FockOperator e_r = FockOperator::projector(coherent_state(config.beta_value(), config.n_max));
    return verify_first_moment_equivalence(rho_f, e_r, config.grid(), config.theta_samples).variance_samples;
}

fs::path cmd_figure2(const RunConfig& config)
{
    const std::vector<VarianceSample> rows = compute_figure2(config);
    if (config.format == FileFormat::json) {
        auto arr = nlohmann::json::array();
        for (const auto& r : rows) arr.push_back({{"theta", r.theta}, {"v_swd", r.v_swd}, {"v_swv", r.v_swv}, {"v_vac", r.v_vac}});
        const fs::path path = config.output_dir / "figure2.json";
        write_json_file(path, {{"samples", std::move(arr)}});
        return path;
    }
    std::error_code ec;
    fs::create_directories(config.output_dir, ec);
    const fs::path path = config.output_dir / "figure2.csv";
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open for writing: " + path.string());
    out << "theta,v_swd,v_swv,v_vac\n";
    for (const auto& r : rows) {
        out << format_double(r.theta) << ',' << format_double(r.v_swd) << ',' << format_double(r.v_swv) << ','
            << format_double(r.v_vac) << '\n';
    }
    if (!out.flush()) throw IoError("write failed: " + path.string());
    return path;
}

// ---------------------------------------------------------------------------

std::vector<std::pair<FockOperator, FockOperator>> random_hermitian_pairs(std::uint64_t seed, int count, int n_max)
{
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    auto amplitude = [&]() { return std::polar(1.5 * std::sqrt(unit(rng)), 2.0 * kPi * unit(rng)); };
    auto draw = [&]() {
        Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(n_max + 1, n_max + 1);
        for (int j = 0; j < 3; ++j) {
            const double c = 2.0 * unit(rng) - 1.0;
            const Eigen::VectorXcd a = coherent_state(amplitude(), n_max).amplitudes();
            const Eigen::VectorXcd b = coherent_state(amplitude(), n_max).amplitudes();
            const Eigen::MatrixXcd ab = a * b.adjoint();
            m += c * (ab + ab.adjoint());
        }
        return FockOperator(std::move(m), true);
    };
    std::vector<std::pair<FockOperator, FockOperator>> out;
    out.reserve(count);
    for (int i = 0; i < count; ++i) {
        FockOperator a = draw();
        FockOperator b = draw();
        out.emplace_back(std::move(a), std::move(b));
    }
    return out;
}

double first_moment_suite_defect(std::uint64_t seed, int count, const PhaseGrid& grid, int n_max)
{
    double worst = 0.0;
    for (const auto& pair : random_gaussian_pairs(seed, count)) {
        const MomentReport r = verify_first_moment_equivalence(gaussian_projector(pair.filtered, n_max),
                                                               gaussian_projector(pair.retro, n_max), grid, 3);
        worst = std::max(worst, r.discrepancy);
    }
    return worst;
}

double overlap_suite_defect(std::uint64_t seed, int count, const PhaseGrid& grid, int n_max)
{
    double worst = 0.0;
    for (const auto& [a, b] : random_hermitian_pairs(seed, count, n_max)) {
        const double on_grid = overlap_trace(wigner_of_operator(a, grid), wigner_of_operator(b, grid));
        worst = std::max(worst, std::abs(on_grid - trace_pairing(a, b).real()));
    }
    return worst;
}

double chi_swv_fock_defect(cplx alpha, cplx beta, const PhaseGrid& k_grid, int n_max)
{
    const FockOperator rho_f = FockOperator::projector(coherent_state(alpha, n_max));
    const FockOperator e_r = FockOperator::projector(coherent_state(beta, n_max));
    const CharacteristicField convolved = chi_swv(characteristic_of_operator(rho_f, k_grid),
                                                  characteristic_of_operator(e_r, k_grid), SymplecticForm::standard());
    const CharacteristicField oracle = characteristic_of_operator(swv_state(rho_f, e_r), k_grid);
    const int q0 = k_grid.n_q() / 4;
    const int p0 = k_grid.n_p() / 4;
    const auto diff = (convolved.values - oracle.values).block(q0, p0, k_grid.n_q() / 2, k_grid.n_p() / 2);
    return diff.cwiseAbs().maxCoeff();
}

bool VerifyReport::all_passed() const
{
    if (error_kind) return false;
    for (const auto& c : checks)
        if (!c.passed) return false;
    return true;
}

nlohmann::json VerifyReport::to_json() const
{
    auto arr = nlohmann::json::array();
    std::vector<std::string> failing;
    for (const auto& c : checks) {
        arr.push_back({{"name", c.name}, {"passed", c.passed}, {"value", c.value}, {"tolerance", c.tolerance},
                       {"detail", c.detail}});
        if (!c.passed) failing.push_back(c.name);
    }
    nlohmann::json j = {{"passed", all_passed()}, {"checks", std::move(arr)}, {"failing", std::move(failing)}};
    if (error_kind) j["error"] = {{"kind", *error_kind}, {"message", error_message.value_or("")}};
    return j;
}

VerifyReport run_verification(const RunConfig& config)
{
    config.validate();
    const PhaseGrid grid = config.grid();
    const cplx alpha(config.alpha, 0.0);
    const cplx beta = config.beta_value();
    VerifyReport report;

    // The configured pair runs first so truncation problems surface before the suites.
    const FockOperator rho_f = FockOperator::projector(coherent_state(alpha, config.n_max));
    const FockOperator e_r = FockOperator::projector(coherent_state(beta, config.n_max));
    const FockOperator swv = swv_state(rho_f, e_r);

    const double expected_norm = std::exp(-std::norm(alpha - beta));
    report.checks.push_back(bounded("pair_normalization", std::abs(trace_pairing(e_r, rho_f).real() - expected_norm),
                                    kTraceTol, "Tr[E_R rho_F] against exp(-|alpha - beta|^2)"));
    report.checks.push_back(bounded("swv_unit_trace", std::abs(swv.trace() - 1.0), kTraceTol));
    report.checks.push_back(bounded("coherent_pair_closed_form",
                                    (swv_coherent_pair(alpha, beta, config.n_max).matrix() - swv.matrix())
                                        .cwiseAbs()
                                        .maxCoeff(),
                                    kClosedFormTol, "closed form against the generic Jordan-product construction"));
    const WignerField w_swd = swd_field(wigner_of_operator(rho_f, grid), wigner_of_operator(e_r, grid));
    report.checks.push_back(bounded("swd_unit_integral", std::abs(w_swd.integral() - 1.0), kGridTol));
    report.checks.push_back(bounded("swv_wigner_unit_integral",
                                    std::abs(wigner_of_operator(swv, grid).integral() - 1.0), kGridTol));

    const PhaseGrid k_grid = PhaseGrid::square(8.0, 64);
    report.checks.push_back(bounded("chi_swv_vs_fock", chi_swv_fock_defect(alpha, beta, k_grid, config.n_max),
                                    kChiSwvTol, "central half of a 64x64 k-grid"));

    report.checks.push_back(bounded("first_moment_equivalence",
                                    first_moment_suite_defect(config.seed, kFirstMomentPairs, grid, config.n_max),
                                    kFirstMomentTol, std::to_string(kFirstMomentPairs) + " random Gaussian pairs"));
    report.checks.push_back(bounded("overlap_trace_identity",
                                    overlap_suite_defect(config.seed, kOverlapPairs, grid, config.n_max), kOverlapTol,
                                    std::to_string(kOverlapPairs) + " random Hermitian pairs"));

    const TypicalAlpha typical = typical_alpha();
    report.checks.push_back(bounded("typical_alpha_disk_integral", std::abs(disk_probability(typical.delta) - 0.5),
                                    kDiskTol, "alpha = " + format_double(typical.alpha)));
    return report;
}

ExitCode cmd_verify(const RunConfig& config)
{
    const fs::path path = config.output_dir / "verify_report.json";
    VerifyReport report;
    try {
        report = run_verification(config);
    } catch (const PhaseSpaceError& e) {
        const ExitCode code = exit_code_for(e);
        report.error_kind = code == ExitCode::precondition ? "precondition"
                            : code == ExitCode::orthogonal ? "orthogonal_boundary"
                                                           : "error";
        if (dynamic_cast<const TruncationInsufficient*>(&e)) report.error_kind = "truncation_insufficient";
        report.error_message = e.what();
        write_json_file(path, report.to_json());
        throw;
    }
    write_json_file(path, report.to_json());
    return report.all_passed() ? ExitCode::success : ExitCode::invariant_failure;
}

// ---------------------------------------------------------------------------

ClassicalDemo compute_classical_demo(bool uniform_emission)
{
    HiddenMarkovChain chain;
    chain.initial = Eigen::Vector3d(0.5, 0.3, 0.2);
    chain.transition.resize(3, 3);
    chain.transition << 0.80, 0.15, 0.05,
                        0.10, 0.70, 0.20,
                        0.20, 0.20, 0.60;
    chain.emission.resize(3, 2);
    if (uniform_emission) {
        chain.emission.setConstant(0.5);
    } else {
        chain.emission << 0.90, 0.10,
                          0.40, 0.60,
                          0.15, 0.85;
    }
    const std::vector<int> obs{0, 1, 1, 0, 1};
    const int t = 2;

    const ClassicalGridDist filtered = hmm_filtered(chain, obs, t);
    const std::vector<double> retro = hmm_retro_likelihood(chain, obs, t);
    return ClassicalDemo{
        chain,
        obs,
        t,
        filtered,
        ClassicalGridDist::from_weights(retro),
        classical_smooth(filtered, retro),
        hmm_smoothed_by_enumeration(chain, obs, t),
    };
}

fs::path cmd_classical_demo(const RunConfig& config)
{
    const ClassicalDemo demo = compute_classical_demo(false);
    const ClassicalDemo flat = compute_classical_demo(true);
    if (config.format == FileFormat::json) {
        const fs::path path = config.output_dir / "classical_demo.json";
        write_json_file(path, {{"chain", demo_json(demo)}, {"uniform_emission", demo_json(flat)}});
        return path;
    }
    std::error_code ec;
    fs::create_directories(config.output_dir, ec);
    const fs::path path = config.output_dir / "classical_demo.csv";
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open for writing: " + path.string());
    out << "case,row,x0,x1,x2\n";
    write_distribution_rows(out, "chain", demo);
    write_distribution_rows(out, "uniform_emission", flat);
    if (!out.flush()) throw IoError("write failed: " + path.string());
    return path;
}

}  // namespace phasespace
