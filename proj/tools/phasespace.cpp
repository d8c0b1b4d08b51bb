// Command-line frontend: figure data, the verification suite and the classical baseline.

#include <cstdio>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "phasespace/errors.hpp"
#include "phasespace/scenario.hpp"

namespace {

using phasespace::ExitCode;


// "RE,IM" or a bare real part.
bool parse_pair(const std::string& text, double& a, double& b)
{
    const auto comma = text.find(',');
    try {
        std::size_t used = 0;
        if (comma == std::string::npos) {
            a = std::stod(text, &used);
            b = 0.0;
            return used == text.size();
        }
        const std::string lhs = text.substr(0, comma);
        const std::string rhs = text.substr(comma + 1);
        a = std::stod(lhs, &used);
        if (used != lhs.size()) return false;
        b = std::stod(rhs, &used);
        return used == rhs.size();
    } catch (const std::exception&) {
        return false;
    }
}

int run(int argc, char** argv)
{
    CLI::App app{"Smoothed weak-valued states and smoothed Wigner distributions in phase space"};
    app.require_subcommand(1, 1);

    phasespace::RunConfig config = phasespace::RunConfig::from_environment();
    std::string beta_text;
    std::string grid_text;
    std::string format = "csv";

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--alpha", config.alpha, "Filtered coherent amplitude (real)")->capture_default_str();
        sub->add_option("--beta", beta_text, "Retrofiltered coherent amplitude RE,IM (default -alpha)");
        sub->add_option("--nmax", config.n_max, "Fock truncation")->capture_default_str();
        sub->add_option("--grid", grid_text, "Phase-space grid QMAX,NPOINTS (default 6,256)");
        sub->add_option("--theta-samples", config.theta_samples, "Quadrature angles in [0, 2 pi]")->capture_default_str();
        sub->add_option("--out", config.output_dir, "Output directory")->capture_default_str();
        sub->add_option("--format", format, "Output format")->check(CLI::IsMember({"csv", "json"}))->capture_default_str();
    };

    CLI::App* fig1 = app.add_subcommand("figure1", "SWV and SWD fields with their e^-1/2 contours and vacuum references");
    CLI::App* fig2 = app.add_subcommand("figure2", "Quadrature-variance sweep of both smoothed constructions");
    CLI::App* verify = app.add_subcommand("verify", "Run the invariant suite and write verify_report.json");
    CLI::App* demo = app.add_subcommand("classical-demo", "Forward-backward smoothing on a 3-state hidden Markov chain");
    for (CLI::App* sub : {fig1, fig2, verify, demo}) add_common(sub);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : static_cast<int>(ExitCode::precondition);
    }

    if (!beta_text.empty()) {
        double re = 0.0, im = 0.0;
        if (!parse_pair(beta_text, re, im)) throw phasespace::PreconditionError("--beta expects RE,IM");
        config.beta = phasespace::cplx(re, im);
    }
    if (!grid_text.empty()) {
        double qmax = 0.0, points = 0.0;
        if (!parse_pair(grid_text, qmax, points) || grid_text.find(',') == std::string::npos ||
            points != static_cast<double>(static_cast<int>(points))) {
            throw phasespace::PreconditionError("--grid expects QMAX,NPOINTS");
        }
        config.grid_extent = qmax;
        config.grid_points = static_cast<int>(points);
    }
    config.format = phasespace::parse_file_format(format);
    config.validate();

    if (*fig1) {
        for (const auto& a : phasespace::cmd_figure1(config)) {
            std::cout << a.field_file.string() << '\n' << a.contour_file.string() << '\n'
                      << a.vacuum_contour_file.string() << '\n';
        }
        return 0;
    }
    if (*fig2) {
        std::cout << phasespace::cmd_figure2(config).string() << '\n';
        return 0;
    }
    if (*verify) {
        const ExitCode code = phasespace::cmd_verify(config);
        std::cout << (config.output_dir / "verify_report.json").string() << '\n';
        if (code != ExitCode::success) std::cerr << "verify: one or more checks failed\n";
        return static_cast<int>(code);
    }
    std::cout << phasespace::cmd_classical_demo(config).string() << '\n';
    return 0;
}

}  // namespace

int main(int argc, char** argv)
{
    try {
        return run(argc, argv);
    } catch (const std::exception& e) {
        std::cerr << "phasespace: " << e.what() << '\n';
        return static_cast<int>(phasespace::exit_code_for(e));
    }
}
