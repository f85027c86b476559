#include <filesystem>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>
#include <json.hpp>

#include "wmfs/experiment.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

void write_binary(const std::string& path, const double* data, std::size_t count) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out.write(reinterpret_cast<const char*>(data), count * sizeof(double));
}

std::vector<double> read_binary(const std::string& path, std::size_t count) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::vector<double> data(count);
  in.read(reinterpret_cast<char*>(data.data()), count * sizeof(double));
  if (static_cast<std::size_t>(in.gcount()) != count * sizeof(double))
    throw std::runtime_error("short read from " + path);
  return data;
}

wmfs::SourceSet make_sources(const wmfs::ExperimentConfig& cfg) {
  wmfs::ProblemData data =
      wmfs::builtin_data(cfg.data_name, cfg.curve, cfg.trace);
  return wmfs::build_sources(cfg, data);
}

int cmd_sources(const wmfs::ExperimentConfig& cfg, const std::string& out_dir) {
  wmfs::SourceSet set = make_sources(cfg);
  fs::create_directories(out_dir);
  std::string path = (fs::path(out_dir) / "sources.csv").string();
  wmfs::write_sources_csv(path, set);
  std::cout << "wrote " << set.size() << " sources to " << path << "\n";
  return 0;
}

int cmd_assemble(const wmfs::ExperimentConfig& cfg, const std::string& out_dir) {
  wmfs::ProblemData data =
      wmfs::builtin_data(cfg.data_name, cfg.curve, cfg.trace);
  wmfs::SourceSet set = wmfs::build_sources(cfg, data);
  wmfs::WaveletFamily family = wmfs::normalize(set, cfg.curve, cfg.order);
  wmfs::BoundaryMesh mesh = wmfs::adapted_boundary_points(
      set, cfg.curve, cfg.m0, data.singular_angles);
  wmfs::BoundarySystem sys =
      wmfs::assemble(family, cfg.curve, mesh, cfg.trace, data.g);

  fs::create_directories(out_dir);
  write_binary((fs::path(out_dir) / "matrix.bin").string(), sys.matrix.data(),
               sys.matrix.size());
  write_binary((fs::path(out_dir) / "rhs.bin").string(), sys.rhs.data(),
               sys.rhs.size());
  wmfs::write_sources_csv((fs::path(out_dir) / "sources.csv").string(), set);

  json manifest;
  manifest["format"] = "wmfs-system";
  manifest["rows"] = sys.matrix.rows();
  manifest["cols"] = sys.matrix.cols();
  manifest["s_n"] = sys.s_n;
  manifest["m0"] = sys.m0;
  manifest["nominal_rows"] = sys.nominal_rows;
  manifest["duplicates_removed"] = sys.duplicates_removed;
  manifest["trace"] = cfg.trace == wmfs::TraceKind::neumann ? "neumann"
                                                            : "dirichlet_regularity";
  manifest["order"] = cfg.order;
  manifest["layout"] = "column-major float64";
  manifest["matrix"] = "matrix.bin";
  manifest["rhs"] = "rhs.bin";
  std::ofstream mf(fs::path(out_dir) / "manifest.json");
  mf << manifest.dump(2) << "\n";
  std::cout << "assembled " << sys.matrix.rows() << " x " << sys.matrix.cols()
            << " system (nominal " << sys.nominal_rows << " rows) in " << out_dir
            << "\n";
  return 0;
}

int cmd_solve(const wmfs::ExperimentConfig* cfg, const std::string& system_dir,
              const std::string& out_dir) {
  fs::create_directories(out_dir);
  wmfs::SolveDiagnostics diag;
  json out;
  if (!system_dir.empty()) {
    std::ifstream mf(fs::path(system_dir) / "manifest.json");
    if (!mf) throw std::runtime_error("no manifest.json in " + system_dir);
    json manifest;
    mf >> manifest;
    Eigen::Index rows = manifest.at("rows").get<Eigen::Index>();
    Eigen::Index cols = manifest.at("cols").get<Eigen::Index>();
    auto mdata = read_binary(
        (fs::path(system_dir) / manifest.at("matrix").get<std::string>()).string(),
        static_cast<std::size_t>(rows) * cols);
    auto rdata = read_binary(
        (fs::path(system_dir) / manifest.at("rhs").get<std::string>()).string(),
        rows);
    Eigen::MatrixXd a = Eigen::Map<Eigen::MatrixXd>(mdata.data(), rows, cols);
    Eigen::VectorXd b = Eigen::Map<Eigen::VectorXd>(rdata.data(), rows);
    Eigen::VectorXd x = wmfs::min_norm_solve(a, b, &diag);
    out["d"] = std::vector<double>(x.data(), x.data() + x.size());
  } else {
    wmfs::ProblemData data =
        wmfs::builtin_data(cfg->data_name, cfg->curve, cfg->trace);
    wmfs::SourceSet set = wmfs::build_sources(*cfg, data);
    wmfs::WaveletFamily family = wmfs::normalize(set, cfg->curve, cfg->order);
    wmfs::BoundaryMesh mesh = wmfs::adapted_boundary_points(
        set, cfg->curve, cfg->m0, data.singular_angles);
    wmfs::BoundarySystem sys =
        wmfs::assemble(family, cfg->curve, mesh, cfg->trace, data.g);
    auto [exp, d] = wmfs::min_norm_solve(sys);
    diag = d;
    wmfs::save_solution((fs::path(out_dir) / "solution.json").string(), exp,
                        family);
    out["solution"] = "solution.json";
  }
  out["residual"] = diag.residual;
  out["coeff_norm"] = diag.coeff_norm;
  out["sigma_max"] = diag.sigma_max;
  out["sigma_min"] = diag.sigma_min;
  out["rank_estimate"] = diag.rank_estimate;
  out["rows"] = diag.rows;
  out["cols"] = diag.cols;
  std::ofstream df(fs::path(out_dir) / "diagnostics.json");
  df << out.dump(2) << "\n";
  std::cout << out.dump(2) << "\n";
  return 0;
}

int cmd_run(const wmfs::ExperimentConfig& cfg, const std::string& out_dir) {
  std::vector<wmfs::RunRecord> records;
  bool ok = wmfs::run(cfg, out_dir, &records);
  for (const auto& r : records)
    std::cout << (r.ok ? "ok   " : "FAIL ") << r.label << "  s_n=" << r.s_n
              << "  linf=" << r.linf << "  |d|=" << r.coeff_norm
              << "  t=" << r.wall_seconds << "s"
              << (r.ok ? "" : "  error: " + r.error) << "\n";
  return ok ? 0 : 1;
}

int cmd_verify_cover(const wmfs::ExperimentConfig& cfg,
                     const std::string& out_dir) {
  wmfs::SourceSet set = make_sources(cfg);
  double eps_prime = cfg.cover.eps_prime;
  if (eps_prime <= 0.0) {
    double lip = wmfs::lipschitz_constant(cfg.curve);
    eps_prime = 1.5 * lip * lip * cfg.sources.eps;
  }
  if (eps_prime >= 1.0)
    throw std::runtime_error("verify-cover: eps_prime = " +
                             std::to_string(eps_prime) +
                             " >= 1; the fineness hypothesis cannot hold");
  wmfs::CoverReport rep = wmfs::verify_cover(set, cfg.curve, eps_prime,
                                             cfg.cover.band, cfg.cover.samples,
                                             cfg.seed);
  json j;
  j["covered"] = rep.covered;
  j["n_estimate"] = rep.n_estimate;
  j["uncovered"] = rep.uncovered;
  j["samples"] = rep.samples;
  j["eps_prime"] = rep.eps_prime;
  j["band_lo"] = rep.band_lo;
  j["band_hi"] = rep.band_hi;
  j["source_dist_min"] = rep.source_dist_min;
  j["source_dist_max"] = rep.source_dist_max;
  std::cout << j.dump(2) << "\n";
  if (!out_dir.empty()) {
    fs::create_directories(out_dir);
    std::ofstream out(fs::path(out_dir) / "cover_report.json");
    out << j.dump(2) << "\n";
  }
  return rep.covered ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Whitney method of fundamental solutions, batch driver"};
  app.require_subcommand(1);

  std::string config_path, out_dir, system_dir;
  int threads = 0;
  app.add_option("--threads", threads, "worker threads (0 = auto)");

  auto add_common = [&](CLI::App* sub, bool need_config) {
    sub->fallthrough();  // let --threads after the subcommand reach the app
    auto* opt = sub->add_option("--config", config_path, "experiment config JSON");
    if (need_config) opt->required();
    sub->add_option("--out", out_dir, "output directory");
    return sub;
  };

  auto* sc_sources = add_common(app.add_subcommand("sources", "emit the source set as CSV"), true);
  auto* sc_assemble = add_common(app.add_subcommand("assemble", "assemble and dump the boundary system"), true);
  auto* sc_solve = add_common(app.add_subcommand("solve", "minimum-norm solve"), false);
  sc_solve->add_option("--system", system_dir, "directory holding a dumped system");
  auto* sc_run = add_common(app.add_subcommand("run", "full experiment with sweep"), true);
  auto* sc_cover = add_common(app.add_subcommand("verify-cover", "Monte-Carlo Whitney cover check"), true);

  CLI11_PARSE(app, argc, argv);

  try {
    wmfs::ExperimentConfig cfg;
    if (!config_path.empty()) cfg = wmfs::load_config(config_path);
    if (threads > 0) cfg.threads = threads;
    wmfs::set_thread_count(cfg.threads);

    if (sc_sources->parsed())
      return cmd_sources(cfg, out_dir.empty() ? "." : out_dir);
    if (sc_assemble->parsed())
      return cmd_assemble(cfg, out_dir.empty() ? "." : out_dir);
    if (sc_solve->parsed()) {
      if (config_path.empty() && system_dir.empty())
        throw std::runtime_error("solve: need --config or --system");
      return cmd_solve(config_path.empty() ? nullptr : &cfg, system_dir,
                       out_dir.empty() ? "." : out_dir);
    }
    if (sc_run->parsed()) return cmd_run(cfg, out_dir.empty() ? "." : out_dir);
    if (sc_cover->parsed()) return cmd_verify_cover(cfg, out_dir);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
