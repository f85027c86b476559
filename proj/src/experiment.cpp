#include "wmfs/experiment.hpp"

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "wmfs/quadrature.hpp"

namespace wmfs {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

cplx data_f1(cplx z) {
  return std::exp(z / 3.0 - cplx(0.0, 0.1) * z) * std::sin(z / 3.0);
}

double data_u1(cplx z) {
  cplx a = 15.0 / cplx(-7.0, 10.0) * std::exp(cplx(1.0 / 3.0, 7.0 / 30.0) * z);
  cplx b = 15.0 / cplx(13.0, 10.0) * std::exp(cplx(1.0 / 3.0, -13.0 / 30.0) * z);
  return (a - b).real();
}

const cplx kF2Singularity{-1.0, -0.1};

cplx data_f2(cplx z) { return std::sqrt(z - kF2Singularity); }

cplx data_h3(cplx z) {
  double x = z.real(), y = z.imag();
  return cplx(x * y * y * std::sin(y), -std::sin(x * x * x) * std::cos(x * y));
}

cplx trace_vector(const BoundaryPoint& bp, TraceKind trace) {
  return trace == TraceKind::neumann ? bp.normal : bp.tangent;
}

std::vector<double> corner_split(const BoundaryCurve& curve) {
  std::vector<double> breaks{-pi, pi};
  for (double c : curve.corners)
    if (c > -pi && c < pi) breaks.push_back(c);
  std::sort(breaks.begin(), breaks.end());
  return breaks;
}

}  // namespace

ProblemData builtin_data(const std::string& name, const BoundaryCurve& curve,
                         TraceKind trace) {
  ProblemData data;
  data.name = name;
  if (name == "f1" || name == "u1") {
    data.g = [trace](const BoundaryPoint& bp) {
      return (trace_vector(bp, trace) * data_f1(bp.position)).real();
    };
    data.reference.f = data_f1;
    data.reference.u = data_u1;
    data.has_reference = true;
    data.default_compare = name == "u1" ? "u" : "f";
    return data;
  }
  if (name == "f2") {
    data.g = [trace](const BoundaryPoint& bp) {
      return (trace_vector(bp, trace) * data_f2(bp.position)).real();
    };
    data.reference.f = data_f2;
    data.has_reference = true;
    double theta_p = std::arg(kF2Singularity);
    if (std::abs(position_at(curve, theta_p) - kF2Singularity) < 1e-9)
      data.singular_angles.push_back(wrap_angle(theta_p));
    return data;
  }
  if (name == "g3") {
    auto raw = [trace](const BoundaryPoint& bp) {
      return (trace_vector(bp, trace) * data_h3(bp.position)).real();
    };
    auto breaks = corner_split(curve);
    double mass = adaptive_integrate(
        [&](double t) {
          return raw(point_at(curve, t)) * arclength_jacobian(curve, t);
        },
        breaks, 1e-12);
    double length = adaptive_integrate(
        [&](double t) { return arclength_jacobian(curve, t); }, breaks, 1e-12);
    double c = mass / length;
    data.g = [raw, c](const BoundaryPoint& bp) { return raw(bp) - c; };
    data.has_reference = false;
    return data;
  }
  throw std::invalid_argument("builtin_data: unknown datum '" + name + "'");
}

BoundaryCurve curve_from_json(const json& j) {
  std::string name = j.is_string() ? j.get<std::string>()
                                   : j.value("name", std::string("star"));
  if (name == "star") return star_curve();
  if (name == "square") return square_curve();
  if (name == "circle") return circle_curve(j.is_object() ? j.value("radius", 1.0) : 1.0);
  if (name == "table") {
    std::vector<std::pair<double, double>> samples;
    for (const auto& row : j.at("samples"))
      samples.emplace_back(row.at(0).get<double>(), row.at(1).get<double>());
    return tabulated_curve(std::move(samples));
  }
  throw std::invalid_argument("curve_from_json: unknown curve '" + name + "'");
}

namespace {

TraceKind trace_from_string(const std::string& s) {
  if (s == "neumann") return TraceKind::neumann;
  if (s == "dirichlet_regularity") return TraceKind::dirichlet_regularity;
  throw std::invalid_argument("unknown trace kind '" + s + "'");
}

SourcesConfig parse_sources(const json& j) {
  SourcesConfig sc;
  sc.type = j.value("type", std::string("whitney"));
  sc.eps = j.value("eps", 0.3);
  if (j.contains("layers")) {
    const auto& l = j.at("layers");
    sc.layer_lo = l.at(0).get<int>();
    sc.layer_hi = l.at(1).get<int>();
  }
  if (j.contains("cones")) {
    for (const auto& cj : j.at("cones")) {
      ConeConfig cc;
      if (cj.contains("apex")) {
        const auto& a = cj.at("apex");
        if (a.is_string()) {
          cc.apex_mode = a.get<std::string>();
        } else {
          cc.apex_mode = "theta";
          cc.apex_theta = a.get<double>();
        }
      }
      cc.levels = cj.value("levels", 0);
      cc.half_angle = cj.value("half_angle", pi / 3.0);
      cc.rho0 = cj.value("rho0", 1.0);
      cc.decay = cj.value("decay", 0.0);
      cc.points_per_level = cj.value("points_per_level", 0);
      cc.clearance = cj.value("clearance", 0.2);
      sc.cones.push_back(cc);
    }
  }
  sc.mfs_count = j.value("count", 148);
  sc.r_mfs = j.value("r_mfs", 1.5);
  return sc;
}

}  // namespace

ExperimentConfig parse_config(const json& j) {
  ExperimentConfig cfg;
  cfg.name = j.value("name", std::string("run"));
  cfg.curve = curve_from_json(j.contains("curve") ? j.at("curve") : json("star"));
  if (j.contains("data"))
    cfg.data_name = j.at("data").is_string() ? j.at("data").get<std::string>()
                                             : j.at("data").value("name", "f1");
  cfg.trace = trace_from_string(j.value("trace", std::string("neumann")));
  cfg.order = j.value("order", 1);
  cfg.m0 = j.value("m0", 5);
  cfg.grid_resolution = j.value("grid_resolution", 1000);
  cfg.compare = j.value("compare", std::string("auto"));
  if (j.contains("sources")) cfg.sources = parse_sources(j.at("sources"));
  if (j.contains("sweep")) {
    SweepConfig sw;
    sw.axis = j.at("sweep").at("axis").get<std::string>();
    for (const auto& v : j.at("sweep").at("values")) sw.values.push_back(v.get<double>());
    cfg.sweep = sw;
  }
  if (j.contains("reference")) cfg.reference = j.at("reference");
  if (j.contains("cover")) {
    cfg.cover.eps_prime = j.at("cover").value("eps_prime", 0.0);
    cfg.cover.band = j.at("cover").value("band", 0.0);
    cfg.cover.samples = j.at("cover").value("samples", 100000);
  }
  cfg.seed = j.value("seed", std::uint64_t{20240901});
  cfg.threads = j.value("threads", 0);
  cfg.emit_grids = j.value("emit_grids", false);
  return cfg;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("load_config: cannot open " + path);
  json j;
  in >> j;
  return parse_config(j);
}

SourceSet build_sources(const ExperimentConfig& cfg, const ProblemData& data,
                        const std::string& axis, double value) {
  SourcesConfig sc = cfg.sources;
  if (axis == "layers") sc.layer_hi = static_cast<int>(std::lround(value));
  if (axis == "cone_levels")
    for (auto& c : sc.cones) c.levels = static_cast<int>(std::lround(value));
  if (axis == "mfs_count") sc.mfs_count = static_cast<int>(std::lround(value));
  if (axis == "r_mfs") sc.r_mfs = value;

  if (sc.type == "mfs") return mfs_ring(cfg.curve, sc.mfs_count, sc.r_mfs);

  SourceSet set;
  if (sc.type == "whitney")
    set = whitney_layers(cfg.curve, sc.eps, sc.layer_lo, sc.layer_hi);
  else if (sc.type == "whitney_interior")
    set = interior_whitney_layers(cfg.curve, sc.eps, sc.layer_lo, sc.layer_hi);
  else
    throw std::invalid_argument("build_sources: unknown type '" + sc.type + "'");

  int cone_id = 0;
  for (const auto& cc : sc.cones) {
    std::vector<double> apexes;
    if (cc.apex_mode == "theta") {
      apexes.push_back(cc.apex_theta);
    } else if (cc.apex_mode == "data") {
      if (data.singular_angles.empty())
        throw std::invalid_argument("build_sources: cone apex 'data' needs a datum with a singular angle");
      apexes = data.singular_angles;
    } else if (cc.apex_mode == "corners") {
      if (cfg.curve.corners.empty())
        throw std::invalid_argument("build_sources: cone apex 'corners' on a smooth curve");
      apexes = cfg.curve.corners;
    } else {
      throw std::invalid_argument("build_sources: unknown apex mode '" + cc.apex_mode + "'");
    }
    for (double theta : apexes) {
      ConeSpec spec{theta,    cc.levels, cc.half_angle,       cc.rho0,
                    cc.decay, cc.points_per_level, cc.clearance};
      set = merge(std::move(set), cone_points(cfg.curve, spec, sc.eps, cone_id++));
    }
  }
  return set;
}

json record_to_json(const RunRecord& r) {
  json j;
  j["index"] = r.index;
  j["sweep_value"] = r.sweep_value;
  j["label"] = r.label;
  j["s_n"] = r.s_n;
  j["rows"] = r.rows;
  j["cols"] = r.cols;
  j["nominal_rows"] = r.nominal_rows;
  j["duplicates_removed"] = r.duplicates_removed;
  j["m0"] = r.m0;
  j["linf"] = r.linf;
  j["l2"] = r.l2;
  j["grid_nodes"] = r.grid_nodes;
  j["coeff_norm"] = r.coeff_norm;
  j["residual"] = r.residual;
  j["sigma_max"] = r.sigma_max;
  j["sigma_min"] = r.sigma_min;
  j["wall_seconds"] = r.wall_seconds;
  j["ok"] = r.ok;
  j["error"] = r.error;
  return j;
}

namespace {

struct PointSolution {
  SourceSet set;
  WaveletFamily family;
  BoundaryMesh mesh;
  Expansion expansion;
  SolveDiagnostics diag;
};

PointSolution solve_point(const ExperimentConfig& cfg, const ProblemData& data,
                          const std::string& axis, double value) {
  PointSolution ps;
  ps.set = build_sources(cfg, data, axis, value);
  int m0 = axis == "m0" ? static_cast<int>(std::lround(value)) : cfg.m0;
  ps.family = normalize(ps.set, cfg.curve, cfg.order);
  ps.mesh = adapted_boundary_points(ps.set, cfg.curve, m0, data.singular_angles);
  BoundarySystem sys = assemble(ps.family, cfg.curve, ps.mesh, cfg.trace, data.g);
  auto [exp, diag] = min_norm_solve(sys);
  ps.expansion = std::move(exp);
  ps.diag = diag;
  return ps;
}

struct ResolvedReference {
  ReferenceSolution ref;
  bool available = false;
};

ResolvedReference resolve_reference(const ExperimentConfig& cfg,
                                    const ProblemData& data,
                                    const std::string& out_dir) {
  ResolvedReference rr;
  std::string type = cfg.reference.value("type", std::string("closed_form"));
  if (type == "closed_form") {
    rr.ref = data.reference;
    rr.available = data.has_reference;
    return rr;
  }
  if (type == "expansion") {
    auto [exp, fam] = load_solution(cfg.reference.at("path").get<std::string>());
    rr.ref = reference_from_expansion(std::move(exp), std::move(fam));
    rr.available = true;
    return rr;
  }
  if (type == "computed") {
    ExperimentConfig ref_cfg = cfg;
    ref_cfg.sources = parse_sources(cfg.reference.at("sources"));
    ref_cfg.m0 = cfg.reference.value("m0", cfg.m0);
    ref_cfg.sweep.reset();
    PointSolution ps = solve_point(ref_cfg, data, "", 0.0);
    if (!out_dir.empty())
      save_solution((fs::path(out_dir) / "reference_solution.json").string(),
                    ps.expansion, ps.family);
    rr.ref = reference_from_expansion(std::move(ps.expansion), std::move(ps.family));
    rr.available = true;
    return rr;
  }
  throw std::invalid_argument("resolve_reference: unknown type '" + type + "'");
}

void write_grid_csv(const std::string& path, const ErrorReport& report) {
  std::ofstream out(path);
  out << "x,y,err\n";
  out.precision(17);
  for (std::size_t i = 0; i < report.err.size(); ++i)
    out << report.xs[i] << "," << report.ys[i] << "," << report.err[i] << "\n";
}

RunRecord run_single(const ExperimentConfig& cfg, const ProblemData& data,
                     const ResolvedReference& rr, const std::string& axis,
                     double value, int index, const std::string& out_dir) {
  RunRecord rec;
  rec.index = index;
  rec.sweep_value = value;
  rec.label = axis.empty() ? cfg.name : axis + "=" + std::to_string(value);
  rec.linf = std::numeric_limits<double>::quiet_NaN();
  rec.l2 = std::numeric_limits<double>::quiet_NaN();
  auto t0 = std::chrono::steady_clock::now();
  try {
    PointSolution ps = solve_point(cfg, data, axis, value);
    rec.s_n = ps.set.size();
    rec.rows = ps.diag.rows;
    rec.cols = ps.diag.cols;
    rec.nominal_rows = ps.mesh.m0 * static_cast<int>(ps.set.size());
    rec.duplicates_removed = ps.mesh.duplicates_removed;
    rec.m0 = ps.mesh.m0;
    rec.coeff_norm = ps.diag.coeff_norm;
    rec.residual = ps.diag.residual;
    rec.sigma_max = ps.diag.sigma_max;
    rec.sigma_min = ps.diag.sigma_min;

    if (rr.available) {
      std::string cmp = cfg.compare == "auto" ? data.default_compare : cfg.compare;
      ErrorReport report;
      if (cmp == "u") {
        double cal = calibrate_u(ps.expansion, ps.family, cfg.curve, rr.ref.u);
        report = error_grid_u(ps.expansion, ps.family, rr.ref, cfg.curve,
                              cfg.grid_resolution, cal);
      } else {
        report = error_grid_f(ps.expansion, ps.family, rr.ref, cfg.curve,
                              cfg.grid_resolution);
      }
      rec.linf = report.linf;
      rec.l2 = report.l2;
      rec.grid_nodes = report.nodes;
      if (cfg.emit_grids && !out_dir.empty()) {
        std::ostringstream name;
        name << "grid_" << index << ".csv";
        write_grid_csv((fs::path(out_dir) / name.str()).string(), report);
      }
    }
    rec.ok = true;
  } catch (const std::exception& e) {
    rec.ok = false;
    rec.error = e.what();
  }
  rec.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return rec;
}

}  // namespace

bool run(const ExperimentConfig& cfg, const std::string& out_dir,
         std::vector<RunRecord>* records_out) {
  set_thread_count(cfg.threads);
  if (!out_dir.empty()) fs::create_directories(out_dir);

  ProblemData data = builtin_data(cfg.data_name, cfg.curve, cfg.trace);
  ResolvedReference rr = resolve_reference(cfg, data, out_dir);

  std::vector<std::pair<std::string, double>> points;
  if (cfg.sweep)
    for (double v : cfg.sweep->values) points.emplace_back(cfg.sweep->axis, v);
  else
    points.emplace_back("", 0.0);

  std::vector<RunRecord> records;
  bool all_ok = true;
  int index = 0;
  for (const auto& [axis, value] : points) {
    RunRecord rec = run_single(cfg, data, rr, axis, value, index++, out_dir);
    all_ok = all_ok && rec.ok;
    records.push_back(std::move(rec));
  }
  if (!out_dir.empty()) write_records(out_dir, records);
  if (records_out) *records_out = std::move(records);
  return all_ok;
}

std::vector<NormRow> coefficient_norm_sweep(const ExperimentConfig& cfg) {
  set_thread_count(cfg.threads);
  ProblemData data = builtin_data(cfg.data_name, cfg.curve, cfg.trace);
  std::vector<std::pair<std::string, double>> points;
  if (cfg.sweep)
    for (double v : cfg.sweep->values) points.emplace_back(cfg.sweep->axis, v);
  else
    points.emplace_back("", 0.0);
  std::vector<NormRow> rows;
  for (const auto& [axis, value] : points) {
    PointSolution ps = solve_point(cfg, data, axis, value);
    NormRow row;
    row.sweep_value = value;
    row.s_n = ps.set.size();
    row.coeff_norm = ps.diag.coeff_norm;
    row.residual = ps.diag.residual;
    row.sigma_ratio = ps.diag.sigma_min > 0.0 ? ps.diag.sigma_max / ps.diag.sigma_min
                                              : std::numeric_limits<double>::infinity();
    rows.push_back(row);
  }
  return rows;
}

void save_solution(const std::string& path, const Expansion& expansion,
                   const WaveletFamily& family) {
  json j;
  j["format"] = "wmfs-solution";
  j["order"] = family.order;
  j["eps"] = family.sources.eps;
  json pts = json::array();
  for (const auto& sp : family.sources.points)
    pts.push_back({{"re", sp.point.real()},
                   {"im", sp.point.imag()},
                   {"layer", sp.layer},
                   {"tag", to_string(sp.tag)},
                   {"cone", sp.cone_id}});
  j["sources"] = pts;
  j["b"] = family.b;
  j["d"] = expansion.d;
  std::ofstream out(path);
  if (!out) throw std::runtime_error("save_solution: cannot write " + path);
  out << j.dump(2) << "\n";
}

std::pair<Expansion, WaveletFamily> load_solution(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("load_solution: cannot open " + path);
  json j;
  in >> j;
  if (j.value("format", std::string()) != "wmfs-solution")
    throw std::runtime_error("load_solution: not a solution bundle: " + path);
  WaveletFamily family;
  family.order = j.at("order").get<int>();
  family.sources.eps = j.value("eps", 0.0);
  for (const auto& p : j.at("sources")) {
    SourcePoint sp;
    sp.point = cplx(p.at("re").get<double>(), p.at("im").get<double>());
    sp.layer = p.value("layer", 0);
    std::string tag = p.value("tag", std::string("layer"));
    sp.tag = tag == "cone" ? SourceTag::cone
                           : tag == "ring" ? SourceTag::ring : SourceTag::layer;
    sp.cone_id = p.value("cone", 0);
    family.sources.points.push_back(sp);
  }
  family.b = j.at("b").get<std::vector<double>>();
  Expansion exp;
  exp.d = j.at("d").get<std::vector<double>>();
  if (exp.d.size() != 2 * family.sources.size() || family.b.size() != family.sources.size())
    throw std::runtime_error("load_solution: inconsistent bundle " + path);
  return {std::move(exp), std::move(family)};
}

void write_sources_csv(const std::string& path, const SourceSet& set) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("write_sources_csv: cannot write " + path);
  out << "re,im,layer,tag\n";
  out.precision(17);
  for (const auto& sp : set.points)
    out << sp.point.real() << "," << sp.point.imag() << "," << sp.layer << ","
        << to_string(sp.tag) << "\n";
}

void write_records(const std::string& dir, const std::vector<RunRecord>& records) {
  fs::create_directories(dir);
  std::ofstream jl(fs::path(dir) / "records.jsonl");
  for (const auto& r : records) jl << record_to_json(r).dump() << "\n";

  std::ofstream csv(fs::path(dir) / "records.csv");
  csv << "index,sweep_value,label,s_n,rows,cols,nominal_rows,duplicates_removed,"
         "m0,linf,l2,grid_nodes,coeff_norm,residual,sigma_max,sigma_min,"
         "wall_seconds,ok,error\n";
  csv.precision(17);
  for (const auto& r : records)
    csv << r.index << "," << r.sweep_value << "," << r.label << "," << r.s_n
        << "," << r.rows << "," << r.cols << "," << r.nominal_rows << ","
        << r.duplicates_removed << "," << r.m0 << "," << r.linf << "," << r.l2
        << "," << r.grid_nodes << "," << r.coeff_norm << "," << r.residual
        << "," << r.sigma_max << "," << r.sigma_min << "," << r.wall_seconds
        << "," << (r.ok ? 1 : 0) << "," << r.error << "\n";
}

}  // namespace wmfs
