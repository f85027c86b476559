#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "wmfs/assembly.hpp"
#include "wmfs/experiment.hpp"
#include "wmfs/field.hpp"
#include "wmfs/geometry.hpp"
#include "wmfs/quadrature.hpp"
#include "wmfs/solver.hpp"
#include "wmfs/util.hpp"
#include "wmfs/wavelets.hpp"
#include "wmfs/whitney.hpp"

namespace py = pybind11;
using namespace wmfs;

namespace {

py::object json_to_py(const nlohmann::json& j) {
  return py::module_::import("json").attr("loads")(j.dump());
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Whitney-MFS solver for planar Laplace Neumann problems";

  m.def("set_thread_count", &set_thread_count, py::arg("n"),
        "Worker thread count for parallel kernels; 0 selects the hardware "
        "concurrency.");
  m.def("thread_count", &thread_count);

  // -- geometry ----------------------------------------------------------
  py::class_<BoundaryCurve>(m, "BoundaryCurve")
      .def_readonly("name", &BoundaryCurve::name)
      .def_readonly("corners", &BoundaryCurve::corners)
      .def("radius", [](const BoundaryCurve& c, double t) { return c.radius(t); },
           py::arg("theta"))
      .def("__repr__", [](const BoundaryCurve& c) {
        std::ostringstream os;
        os << "BoundaryCurve('" << c.name << "', " << c.corners.size()
           << " corners)";
        return os.str();
      });

  py::class_<BoundaryPoint>(m, "BoundaryPoint")
      .def_readonly("theta", &BoundaryPoint::theta)
      .def_readonly("position", &BoundaryPoint::position)
      .def_readonly("tangent", &BoundaryPoint::tangent)
      .def_readonly("normal", &BoundaryPoint::normal);

  m.def("circle_curve", &circle_curve, py::arg("radius") = 1.0);
  m.def("star_curve", &star_curve);
  m.def("square_curve", &square_curve);
  m.def("tabulated_curve", &tabulated_curve, py::arg("samples"));
  m.def("position_at", &position_at, py::arg("curve"), py::arg("theta"));
  m.def("point_at", &point_at, py::arg("curve"), py::arg("theta"));
  m.def("is_corner", &is_corner, py::arg("curve"), py::arg("theta"));
  m.def("distance_to_curve", &distance_to_curve, py::arg("curve"), py::arg("z"));
  m.def("inside_domain", &inside_domain, py::arg("curve"), py::arg("z"),
        py::arg("guard") = 1e-12);
  m.def("lipschitz_constant", &lipschitz_constant, py::arg("curve"));

  py::class_<BoundingBox>(m, "BoundingBox")
      .def_readonly("xmin", &BoundingBox::xmin)
      .def_readonly("xmax", &BoundingBox::xmax)
      .def_readonly("ymin", &BoundingBox::ymin)
      .def_readonly("ymax", &BoundingBox::ymax);
  m.def("bounding_box", &bounding_box, py::arg("curve"));

  // -- sources -----------------------------------------------------------
  py::enum_<SourceTag>(m, "SourceTag")
      .value("layer", SourceTag::layer)
      .value("cone", SourceTag::cone)
      .value("ring", SourceTag::ring);

  py::class_<SourcePoint>(m, "SourcePoint")
      .def_readonly("point", &SourcePoint::point)
      .def_readonly("layer", &SourcePoint::layer)
      .def_readonly("tag", &SourcePoint::tag)
      .def_readonly("cone_id", &SourcePoint::cone_id);

  py::class_<SourceSet>(m, "SourceSet")
      .def_readonly("points", &SourceSet::points)
      .def_readonly("eps", &SourceSet::eps)
      .def("__len__", &SourceSet::size)
      .def("positions", [](const SourceSet& s) {
        std::vector<cplx> out;
        out.reserve(s.size());
        for (const auto& p : s.points) out.push_back(p.point);
        return out;
      });

  m.def("whitney_layers", &whitney_layers, py::arg("curve"), py::arg("eps"),
        py::arg("n0"), py::arg("n"));
  m.def("interior_whitney_layers", &interior_whitney_layers, py::arg("curve"),
        py::arg("eps"), py::arg("n0"), py::arg("n"));

  py::class_<ConeSpec>(m, "ConeSpec")
      .def(py::init([](double apex_theta, int levels, double half_angle,
                       double rho0, double decay, int points_per_level,
                       double clearance) {
             return ConeSpec{apex_theta, levels,          half_angle, rho0,
                             decay,      points_per_level, clearance};
           }),
           py::arg("apex_theta"), py::arg("levels"),
           py::arg("half_angle") = pi / 3.0, py::arg("rho0") = 1.0,
           py::arg("decay") = 0.0, py::arg("points_per_level") = 0,
           py::arg("clearance") = 0.2)
      .def_readwrite("apex_theta", &ConeSpec::apex_theta)
      .def_readwrite("levels", &ConeSpec::levels)
      .def_readwrite("half_angle", &ConeSpec::half_angle)
      .def_readwrite("rho0", &ConeSpec::rho0)
      .def_readwrite("decay", &ConeSpec::decay)
      .def_readwrite("points_per_level", &ConeSpec::points_per_level)
      .def_readwrite("clearance", &ConeSpec::clearance);

  m.def("cone_points", &cone_points, py::arg("curve"), py::arg("spec"),
        py::arg("eps"), py::arg("cone_id") = 0);
  m.def("mfs_ring", &mfs_ring, py::arg("curve"), py::arg("count"),
        py::arg("r_mfs"));
  m.def("merge", &merge, py::arg("a"), py::arg("b"));

  py::class_<CoverReport>(m, "CoverReport")
      .def_readonly("covered", &CoverReport::covered)
      .def_readonly("n_estimate", &CoverReport::n_estimate)
      .def_readonly("uncovered", &CoverReport::uncovered)
      .def_readonly("samples", &CoverReport::samples)
      .def_readonly("eps_prime", &CoverReport::eps_prime)
      .def_readonly("band_lo", &CoverReport::band_lo)
      .def_readonly("band_hi", &CoverReport::band_hi)
      .def_readonly("source_dist_min", &CoverReport::source_dist_min)
      .def_readonly("source_dist_max", &CoverReport::source_dist_max);

  m.def("verify_cover", &verify_cover, py::arg("set"), py::arg("curve"),
        py::arg("eps_prime"), py::arg("band") = 0.0,
        py::arg("samples") = 100000, py::arg("seed") = 20240901,
        py::call_guard<py::gil_scoped_release>());

  // -- wavelets and assembly ---------------------------------------------
  py::enum_<TraceKind>(m, "TraceKind")
      .value("neumann", TraceKind::neumann)
      .value("dirichlet_regularity", TraceKind::dirichlet_regularity);

  py::class_<WaveletFamily>(m, "WaveletFamily")
      .def_readonly("sources", &WaveletFamily::sources)
      .def_readonly("order", &WaveletFamily::order)
      .def_readonly("b", &WaveletFamily::b)
      .def("__len__", &WaveletFamily::size);

  m.def("normalize", &normalize, py::arg("sources"), py::arg("curve"),
        py::arg("order") = 1, py::call_guard<py::gil_scoped_release>());
  m.def("wavelet_value", &wavelet_value, py::arg("family"), py::arg("j"),
        py::arg("z"));
  m.def("element_inner_product", &element_inner_product, py::arg("family"),
        py::arg("j"), py::arg("w_start"), py::arg("w_end"), py::arg("trace"),
        py::arg("companion"));
  m.def("independence_gram", &independence_gram, py::arg("family"),
        py::arg("curve"), py::call_guard<py::gil_scoped_release>());

  py::class_<Segment>(m, "Segment")
      .def_readonly("theta_start", &Segment::theta_start)
      .def_readonly("theta_end", &Segment::theta_end);

  py::class_<BoundaryMesh>(m, "BoundaryMesh")
      .def_readonly("angles", &BoundaryMesh::angles)
      .def_readonly("segments", &BoundaryMesh::segments)
      .def_readonly("m0", &BoundaryMesh::m0)
      .def_readonly("raw_count", &BoundaryMesh::raw_count)
      .def_readonly("duplicates_removed", &BoundaryMesh::duplicates_removed);

  m.def("adapted_boundary_points", &adapted_boundary_points, py::arg("sources"),
        py::arg("curve"), py::arg("m0"),
        py::arg("forced") = std::vector<double>{});

  py::class_<BoundarySystem>(m, "BoundarySystem")
      .def_readonly("matrix", &BoundarySystem::matrix)
      .def_readonly("rhs", &BoundarySystem::rhs)
      .def_readonly("s_n", &BoundarySystem::s_n)
      .def_readonly("m0", &BoundarySystem::m0)
      .def_readonly("nominal_rows", &BoundarySystem::nominal_rows)
      .def_readonly("duplicates_removed", &BoundarySystem::duplicates_removed)
      .def_readonly("trace", &BoundarySystem::trace);

  m.def(
      "assemble",
      [](const WaveletFamily& family, const BoundaryCurve& curve,
         const BoundaryMesh& mesh, TraceKind trace, const BoundaryData& g) {
        return assemble(family, curve, mesh, trace, g);
      },
      py::arg("family"), py::arg("curve"), py::arg("mesh"), py::arg("trace"),
      py::arg("g"));

  // -- solve and evaluate ------------------------------------------------
  py::class_<Expansion>(m, "Expansion")
      .def_readonly("d", &Expansion::d)
      .def("s_n", &Expansion::s_n)
      .def("coeff", &Expansion::coeff, py::arg("j"));

  py::class_<SolveDiagnostics>(m, "SolveDiagnostics")
      .def_readonly("residual", &SolveDiagnostics::residual)
      .def_readonly("coeff_norm", &SolveDiagnostics::coeff_norm)
      .def_readonly("sigma_max", &SolveDiagnostics::sigma_max)
      .def_readonly("sigma_min", &SolveDiagnostics::sigma_min)
      .def_readonly("rank_estimate", &SolveDiagnostics::rank_estimate)
      .def_readonly("rows", &SolveDiagnostics::rows)
      .def_readonly("cols", &SolveDiagnostics::cols)
      .def("__repr__", [](const SolveDiagnostics& d) {
        std::ostringstream os;
        os << "SolveDiagnostics(residual=" << d.residual
           << ", coeff_norm=" << d.coeff_norm << ", rank=" << d.rank_estimate
           << ", " << d.rows << "x" << d.cols << ")";
        return os.str();
      });

  m.def(
      "min_norm_solve",
      [](const Eigen::MatrixXd& a, const Eigen::VectorXd& b) {
        SolveDiagnostics diag;
        Eigen::VectorXd x = min_norm_solve(a, b, &diag);
        return std::make_pair(x, diag);
      },
      py::arg("a"), py::arg("b"), py::call_guard<py::gil_scoped_release>());
  m.def(
      "solve_system",
      [](const BoundarySystem& sys) { return min_norm_solve(sys); },
      py::arg("system"), py::call_guard<py::gil_scoped_release>());

  m.def("eval_f", &eval_f, py::arg("expansion"), py::arg("family"),
        py::arg("z"));
  m.def("eval_u", &eval_u, py::arg("expansion"), py::arg("family"),
        py::arg("z"), py::arg("calibration") = 0.0);
  m.def("calibrate_u", &calibrate_u, py::arg("expansion"), py::arg("family"),
        py::arg("curve"), py::arg("u_exact"));

  py::class_<ErrorReport>(m, "ErrorReport")
      .def_readonly("linf", &ErrorReport::linf)
      .def_readonly("l2", &ErrorReport::l2)
      .def_readonly("nodes", &ErrorReport::nodes)
      .def_readonly("resolution", &ErrorReport::resolution)
      .def_readonly("xs", &ErrorReport::xs)
      .def_readonly("ys", &ErrorReport::ys)
      .def_readonly("err", &ErrorReport::err);

  py::class_<ReferenceSolution>(m, "ReferenceSolution")
      .def_readonly("f", &ReferenceSolution::f)
      .def_readonly("u", &ReferenceSolution::u);

  m.def("reference_from_expansion", &reference_from_expansion,
        py::arg("expansion"), py::arg("family"));
  m.def("error_grid_f", &error_grid_f, py::arg("expansion"), py::arg("family"),
        py::arg("reference"), py::arg("curve"), py::arg("resolution"),
        py::call_guard<py::gil_scoped_release>());
  m.def("error_grid_u", &error_grid_u, py::arg("expansion"), py::arg("family"),
        py::arg("reference"), py::arg("curve"), py::arg("resolution"),
        py::arg("calibration"), py::call_guard<py::gil_scoped_release>());

  // -- experiments -------------------------------------------------------
  py::class_<ProblemData>(m, "ProblemData")
      .def_readonly("name", &ProblemData::name)
      .def_readonly("g", &ProblemData::g)
      .def_readonly("reference", &ProblemData::reference)
      .def_readonly("has_reference", &ProblemData::has_reference)
      .def_readonly("singular_angles", &ProblemData::singular_angles)
      .def_readonly("default_compare", &ProblemData::default_compare);

  m.def("builtin_data", &builtin_data, py::arg("name"), py::arg("curve"),
        py::arg("trace") = TraceKind::neumann);

  m.def(
      "run_config",
      [](const std::string& path, const std::string& out_dir) {
        ExperimentConfig cfg = load_config(path);
        std::vector<RunRecord> records;
        bool ok = run(cfg, out_dir, &records);
        py::list out;
        for (const auto& r : records) out.append(json_to_py(record_to_json(r)));
        return std::make_pair(ok, out);
      },
      py::arg("config_path"), py::arg("out_dir"),
      "Run a batch experiment config; returns (all_ok, records).");

  m.def("save_solution", &save_solution, py::arg("path"), py::arg("expansion"),
        py::arg("family"));
  m.def("load_solution", &load_solution, py::arg("path"));
}
