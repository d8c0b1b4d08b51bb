#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "phasespace/errors.hpp"
#include "phasespace/scenario.hpp"

namespace py = pybind11;
using namespace phasespace;

namespace {

FockOperator as_operator(const Eigen::MatrixXcd& m)
{
    return FockOperator(m, (m - m.adjoint()).cwiseAbs().maxCoeff() <= Tolerances::hermitian_tol * m.cwiseAbs().maxCoeff());
}

PhaseGrid make_grid(double extent, int points) { return PhaseGrid::square(extent, points); }

py::dict field_dict(const WignerField& w)
{
    Eigen::VectorXd q(w.grid.n_q()), p(w.grid.n_p());
    for (int i = 0; i < w.grid.n_q(); ++i) q(i) = w.grid.q(i);
    for (int j = 0; j < w.grid.n_p(); ++j) p(j) = w.grid.p(j);
    py::dict d;
    d["q"] = q;
    d["p"] = p;
    d["values"] = w.values;
    return d;
}

py::list polylines(const std::vector<Polyline>& lines)
{
    py::list out;
    for (const auto& l : lines) {
        Eigen::MatrixX2d pts(static_cast<Eigen::Index>(l.points.size()), 2);
        for (std::size_t k = 0; k < l.points.size(); ++k) pts.row(static_cast<Eigen::Index>(k)) = l.points[k];
        out.append(py::make_tuple(pts, l.closed));
    }
    return out;
}

py::dict panel_dict(const ContourPanel& panel)
{
    py::dict d = field_dict(panel.field);
    d["level"] = panel.level;
    d["center"] = Eigen::Vector2d(panel.center);
    d["contour"] = polylines(panel.contour);
    d["vacuum_contour"] = polylines(panel.vacuum_contour);
    return d;
}

RunConfig make_config(double alpha, std::optional<cplx> beta, double extent, int points, int n_max, int theta_samples)
{
    RunConfig c;
    c.alpha = alpha;
    c.beta = beta;
    c.grid_extent = extent;
    c.grid_points = points;
    c.n_max = n_max;
    c.theta_samples = theta_samples;
    return c;
}

}  // namespace

PYBIND11_MODULE(_phasespace, m)
{
    m.doc() = "Smoothed weak-valued states and smoothed Wigner distributions";

    auto base = py::register_exception<PhaseSpaceError>(m, "PhaseSpaceError");
    auto pre = py::register_exception<PreconditionError>(m, "PreconditionError", base.ptr());
    py::register_exception<TruncationInsufficient>(m, "TruncationInsufficient", pre.ptr());
    py::register_exception<OrthogonalBoundary>(m, "OrthogonalBoundary", base.ptr());
    py::register_exception<IoError>(m, "IoError", base.ptr());

    m.attr("DEFAULT_N_MAX") = Tolerances::default_n_max;
    m.attr("DEFAULT_EXTENT") = PhaseGrid::default_extent;
    m.attr("DEFAULT_POINTS") = PhaseGrid::default_points;
    m.attr("DEFAULT_SEED") = kDefaultSuiteSeed;

    m.def("coherent_state", [](cplx alpha, int n_max) { return Eigen::VectorXcd(coherent_state(alpha, n_max).amplitudes()); },
          py::arg("alpha"), py::arg("n_max") = Tolerances::default_n_max, "Number-basis amplitudes of |alpha>.");
    m.def("displaced_squeezed_state",
          [](cplx alpha, double r, double phi, int n_max) {
              return Eigen::VectorXcd(displaced_squeezed_state(alpha, r, phi, n_max).amplitudes());
          },
          py::arg("alpha"), py::arg("r"), py::arg("phi"), py::arg("n_max") = Tolerances::default_n_max);
    m.def("position_operator", [](int n_max) { return Eigen::MatrixXcd(position_operator(n_max).matrix()); },
          py::arg("n_max") = Tolerances::default_n_max);
    m.def("momentum_operator", [](int n_max) { return Eigen::MatrixXcd(momentum_operator(n_max).matrix()); },
          py::arg("n_max") = Tolerances::default_n_max);

    m.def("jordan_product",
          [](const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b) {
              return Eigen::MatrixXcd(jordan_product(as_operator(a), as_operator(b)).matrix());
          },
          py::arg("a"), py::arg("b"), "(AB + BA) / 2");
    m.def("trace_pairing",
          [](const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b) { return trace_pairing(as_operator(a), as_operator(b)); },
          py::arg("a"), py::arg("b"));
    m.def("swv_state",
          [](const Eigen::MatrixXcd& rho_f, const Eigen::MatrixXcd& e_r) {
              return Eigen::MatrixXcd(swv_state(as_operator(rho_f), as_operator(e_r)).matrix());
          },
          py::arg("rho_f"), py::arg("e_r"), "Normalized Jordan product of the effect and the filtered state.");
    m.def("swv_coherent_pair",
          [](cplx alpha, cplx beta, int n_max) { return Eigen::MatrixXcd(swv_coherent_pair(alpha, beta, n_max).matrix()); },
          py::arg("alpha"), py::arg("beta"), py::arg("n_max") = Tolerances::default_n_max);
    m.def("real_weak_value",
          [](const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& rho_f, const Eigen::MatrixXcd& e_r) {
              return real_weak_value(as_operator(a), as_operator(rho_f), as_operator(e_r));
          },
          py::arg("a"), py::arg("rho_f"), py::arg("e_r"));
    m.def("min_eigenvalue", [](const Eigen::MatrixXcd& op) { return min_eigenvalue(as_operator(op)); }, py::arg("op"));

    m.def("wigner_of_operator",
          [](const Eigen::MatrixXcd& op, double extent, int points) {
              return field_dict(wigner_of_operator(as_operator(op), make_grid(extent, points)));
          },
          py::arg("op"), py::arg("extent") = PhaseGrid::default_extent, py::arg("points") = PhaseGrid::default_points,
          "Wigner function on a square cell-centred grid; returns q, p and values[i, j] at (q[i], p[j]).");
    m.def("overlap_trace",
          [](const Eigen::MatrixXd& a, const Eigen::MatrixXd& b, double extent) {
              const PhaseGrid g(extent, extent, static_cast<int>(a.rows()), static_cast<int>(a.cols()));
              return overlap_trace(WignerField(g, a), WignerField(g, b));
          },
          py::arg("a"), py::arg("b"), py::arg("extent") = PhaseGrid::default_extent);
    m.def("swd_field",
          [](const Eigen::MatrixXcd& rho_f, const Eigen::MatrixXcd& e_r, double extent, int points) {
              const PhaseGrid g = make_grid(extent, points);
              return field_dict(swd_field(wigner_of_operator(as_operator(rho_f), g), wigner_of_operator(as_operator(e_r), g)));
          },
          py::arg("rho_f"), py::arg("e_r"), py::arg("extent") = PhaseGrid::default_extent,
          py::arg("points") = PhaseGrid::default_points);
    m.def("verify_first_moment_equivalence",
          [](const Eigen::MatrixXcd& rho_f, const Eigen::MatrixXcd& e_r, double extent, int points, int theta_samples) {
              const MomentReport r = verify_first_moment_equivalence(as_operator(rho_f), as_operator(e_r),
                                                                     make_grid(extent, points), theta_samples);
              return r.to_json().dump();
          },
          py::arg("rho_f"), py::arg("e_r"), py::arg("extent") = PhaseGrid::default_extent,
          py::arg("points") = PhaseGrid::default_points, py::arg("theta_samples") = 8,
          "MomentReport as a JSON string.");

    m.def("classical_smooth",
          [](const std::vector<double>& filtered, const std::vector<double>& likelihood) {
              return classical_smooth(ClassicalGridDist(filtered), likelihood).probabilities();
          },
          py::arg("filtered"), py::arg("retro_likelihood"));
    m.def("typical_alpha", []() { const TypicalAlpha t = typical_alpha(); return py::make_tuple(t.delta, t.alpha); },
          "(delta, alpha) for the antipodal coherent pair.");
    m.def("disk_probability", &disk_probability, py::arg("delta"));

    m.def("figure1",
          [](double alpha, std::optional<cplx> beta, double extent, int points, int n_max) {
              const Figure1Data d = compute_figure1(make_config(alpha, beta, extent, points, n_max, 361));
              py::dict out;
              out["swv"] = panel_dict(d.swv);
              out["swd"] = panel_dict(d.swd);
              out["normalization"] = d.normalization;
              return out;
          },
          py::arg("alpha") = RunConfig::default_alpha(), py::arg("beta") = std::nullopt,
          py::arg("extent") = PhaseGrid::default_extent, py::arg("points") = PhaseGrid::default_points,
          py::arg("n_max") = Tolerances::default_n_max);
    m.def("figure2",
          [](double alpha, std::optional<cplx> beta, int theta_samples, int n_max) {
              const auto rows = compute_figure2(make_config(alpha, beta, PhaseGrid::default_extent,
                                                            PhaseGrid::default_points, n_max, theta_samples));
              Eigen::MatrixX4d table(static_cast<Eigen::Index>(rows.size()), 4);
              for (std::size_t k = 0; k < rows.size(); ++k)
                  table.row(static_cast<Eigen::Index>(k)) << rows[k].theta, rows[k].v_swd, rows[k].v_swv, rows[k].v_vac;
              return table;
          },
          py::arg("alpha") = RunConfig::default_alpha(), py::arg("beta") = std::nullopt, py::arg("theta_samples") = 361,
          py::arg("n_max") = Tolerances::default_n_max, "Rows of (theta, v_swd, v_swv, v_vac).");
}
