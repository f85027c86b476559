#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "wmfs/field.hpp"

namespace wmfs {

/// A named boundary datum: the assembled right-hand side g plus whatever
/// closed-form reference fields exist for it.
struct ProblemData {
  std::string name;
  BoundaryData g;
  ReferenceSolution reference;
  bool has_reference = false;
  std::vector<double> singular_angles;  // boundary singularities to force
  std::string default_compare = "f";    // which field the error is measured on
};

/// f1 / u1 (entire solution pair), f2 (branch-point singularity on the
/// square), g3 (generic smooth datum, balanced to mean zero).
ProblemData builtin_data(const std::string& name, const BoundaryCurve& curve,
                         TraceKind trace);

struct ConeConfig {
  std::string apex_mode = "theta";  // theta | data | corners
  double apex_theta = 0.0;
  int levels = 0;
  double half_angle = pi / 3.0;
  double rho0 = 1.0;
  double decay = 0.0;
  int points_per_level = 0;
  double clearance = 0.2;
};

struct SourcesConfig {
  std::string type = "whitney";  // whitney | whitney_interior | mfs
  double eps = 0.3;
  int layer_lo = 0;
  int layer_hi = 2;
  std::vector<ConeConfig> cones;
  int mfs_count = 148;
  double r_mfs = 1.5;
};

struct SweepConfig {
  std::string axis;  // layers | cone_levels | m0 | mfs_count | r_mfs
  std::vector<double> values;
};

struct CoverConfig {
  double eps_prime = 0.0;  // 0: use 3/2 L^2 eps from the curve estimate
  double band = 0.0;       // 0: outermost source distance
  int samples = 100000;
};

struct ExperimentConfig {
  std::string name = "run";
  BoundaryCurve curve;
  std::string data_name = "f1";
  TraceKind trace = TraceKind::neumann;
  int order = 1;
  int m0 = 5;
  int grid_resolution = 1000;
  std::string compare = "auto";  // auto | f | u
  SourcesConfig sources;
  std::optional<SweepConfig> sweep;
  nlohmann::json reference = {{"type", "closed_form"}};
  CoverConfig cover;
  std::uint64_t seed = 20240901;
  int threads = 0;
  bool emit_grids = false;
};

ExperimentConfig parse_config(const nlohmann::json& j);
ExperimentConfig load_config(const std::string& path);
BoundaryCurve curve_from_json(const nlohmann::json& j);

/// Sources for one sweep point; value ignored when axis is empty.
SourceSet build_sources(const ExperimentConfig& cfg, const ProblemData& data,
                        const std::string& axis = "", double value = 0.0);

struct RunRecord {
  int index = 0;
  double sweep_value = 0.0;
  std::string label;
  std::size_t s_n = 0;
  int rows = 0, cols = 0, nominal_rows = 0, duplicates_removed = 0, m0 = 0;
  double linf = 0.0, l2 = 0.0;
  std::size_t grid_nodes = 0;
  double coeff_norm = 0.0, residual = 0.0, sigma_max = 0.0, sigma_min = 0.0;
  double wall_seconds = 0.0;
  bool ok = false;
  std::string error;
};

nlohmann::json record_to_json(const RunRecord& r);

/// Full experiment: resolve the reference once, run every sweep point in
/// config order, write records.jsonl / records.csv (and per-point grid CSVs
/// when emit_grids) under out_dir. Failed points are recorded, not fatal.
/// Returns true iff every sweep point succeeded.
bool run(const ExperimentConfig& cfg, const std::string& out_dir,
         std::vector<RunRecord>* records_out = nullptr);

struct NormRow {
  double sweep_value = 0.0;
  std::size_t s_n = 0;
  double coeff_norm = 0.0;
  double residual = 0.0;
  double sigma_ratio = 0.0;  // sigma_max / sigma_min
};

/// Coefficient-norm instrumentation: same pipeline as run() but skipping
/// reference and grid evaluation.
std::vector<NormRow> coefficient_norm_sweep(const ExperimentConfig& cfg);

/// Self-contained solution bundle (sources, normalization, coefficients).
void save_solution(const std::string& path, const Expansion& expansion,
                   const WaveletFamily& family);
std::pair<Expansion, WaveletFamily> load_solution(const std::string& path);

void write_sources_csv(const std::string& path, const SourceSet& set);
void write_records(const std::string& dir, const std::vector<RunRecord>& records);

}  // namespace wmfs
