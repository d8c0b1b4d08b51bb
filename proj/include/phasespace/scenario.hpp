#pragma once

#include <array>
#include <cstdint>
#include <exception>
#include <filesystem>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "phasespace/contour.hpp"
#include "phasespace/field_io.hpp"
#include "phasespace/operator_core.hpp"
#include "phasespace/phase_space.hpp"
#include "phasespace/smoothing.hpp"

namespace phasespace {

enum class ExitCode : int {
    success = 0,
    invariant_failure = 1,
    precondition = 2,
    orthogonal = 3,
    io = 4,
};

/// Exit code for an exception escaping a command.
ExitCode exit_code_for(const std::exception& e);

struct RunConfig {
    double alpha = default_alpha();
    /// Retrofiltered coherent amplitude; -alpha when unset.
    std::optional<cplx> beta;
    double grid_extent = PhaseGrid::default_extent;
    int grid_points = PhaseGrid::default_points;
    int n_max = Tolerances::default_n_max;
    int theta_samples = 361;
    std::filesystem::path output_dir = ".";
    FileFormat format = FileFormat::csv;
    std::uint64_t seed = kDefaultSuiteSeed;

    static double default_alpha();
    /// Defaults with the seed taken from PHASESPACE_SEED when that is set.
    static RunConfig from_environment();

    /// Throws PreconditionError unless alpha > 0, theta_samples >= 3, n_max >= 20.
    void validate() const;
    cplx beta_value() const { return beta.value_or(cplx(-alpha, 0.0)); }
    PhaseGrid grid() const { return PhaseGrid::square(grid_extent, grid_points); }
};

// ---------------------------------------------------------------------------
// figure1

/// One smoothed field with its e^{-1/2} contour and the vacuum contour drawn
/// around the field's mean.
struct ContourPanel {
    WignerField field;
    double level;
    Eigen::Vector2d center;
    std::vector<Polyline> contour;
    std::vector<Polyline> vacuum_contour;
};

struct Figure1Data {
    ContourPanel swv;
    ContourPanel swd;
    /// Information-form fusion of the two coherent-state Gaussians.
    GaussianPhaseDist swd_closed_form;
    double normalization;
};

Figure1Data compute_figure1(const RunConfig& config);

struct ContourArtifact {
    std::filesystem::path field_file;
    std::filesystem::path contour_file;
    std::filesystem::path vacuum_contour_file;
    double level;
};

/// Writes swv_field, swv_contour, swv_vacuum_contour and the swd_ equivalents.
std::array<ContourArtifact, 2> cmd_figure1(const RunConfig& config);

// ---------------------------------------------------------------------------
// figure2

std::vector<VarianceSample> compute_figure2(const RunConfig& config);

/// Writes figure2.csv (theta,v_swd,v_swv,v_vac) or figure2.json.
std::filesystem::path cmd_figure2(const RunConfig& config);

// ---------------------------------------------------------------------------
// verify

struct CheckResult {
    std::string name;
    bool passed;
    /// Worst observed defect and the bound it is held to.
    double value;
    double tolerance;
    std::string detail;
};

struct VerifyReport {
    std::vector<CheckResult> checks;
    std::optional<std::string> error_kind;
    std::optional<std::string> error_message;

    bool all_passed() const;
    nlohmann::json to_json() const;
};

/// Hermitian operators built as sum_j c_j (|a_j><b_j| + |b_j><a_j|) with three
/// terms, |a_j|, |b_j| <= 1.5 and real c_j in [-1, 1].
std::vector<std::pair<FockOperator, FockOperator>> random_hermitian_pairs(std::uint64_t seed, int count, int n_max);

/// Worst |<x>_SWV - <x>_SWD| over `count` seeded Gaussian pairs.
double first_moment_suite_defect(std::uint64_t seed, int count, const PhaseGrid& grid, int n_max);

/// Worst |2 pi Int W_A W_B - Tr[AB]| over `count` seeded Hermitian pairs.
double overlap_suite_defect(std::uint64_t seed, int count, const PhaseGrid& grid, int n_max);

/// Max |chi_swv - chi(swv_state)| over the central half of the k-grid of
/// `k_grid`, for the coherent pair (alpha, beta).
double chi_swv_fock_defect(cplx alpha, cplx beta, const PhaseGrid& k_grid, int n_max);

/// Runs every check. Library errors propagate.
VerifyReport run_verification(const RunConfig& config);

/// Writes verify_report.json. Library errors are recorded in the report and
/// rethrown; a failed check yields invariant_failure.
ExitCode cmd_verify(const RunConfig& config);

// ---------------------------------------------------------------------------
// classical-demo

struct ClassicalDemo {
    HiddenMarkovChain chain;
    std::vector<int> observations;
    int t;
    ClassicalGridDist filtered;
    /// Retrofiltered likelihood rescaled to unit sum (the smoother is scale-free in it).
    ClassicalGridDist retro;
    ClassicalGridDist smoothed;
    ClassicalGridDist enumerated;
};

/// Fixed 3-state, 5-step chain evaluated at its midpoint. With
/// `uniform_emission` every observation is equally likely from every state.
ClassicalDemo compute_classical_demo(bool uniform_emission = false);

std::filesystem::path cmd_classical_demo(const RunConfig& config);

}  // namespace phasespace
