#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"

#include "grasslab/flow.hpp"
#include "grasslab/qkmap.hpp"
#include "grasslab/rep.hpp"
#include "grasslab/verify.hpp"

using namespace grasslab;
using nlohmann::json;

namespace {

const double kPi = 3.14159265358979323846;

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Writes to DIR/name when an output directory is set, stdout otherwise.
void emit(const std::string& out_dir, const std::string& name, const std::string& text) {
  if (out_dir.empty()) {
    std::cout << text;
    return;
  }
  std::filesystem::create_directories(out_dir);
  std::ofstream f(std::filesystem::path(out_dir) / name);
  if (!f) throw ConfigError("cannot write " + (std::filesystem::path(out_dir) / name).string());
  f << text;
}

std::vector<double> parse_grid(const std::string& spec) {
  std::vector<std::string> parts;
  std::stringstream ss(spec);
  for (std::string p; std::getline(ss, p, ':');) parts.push_back(p);
  if (parts.size() != 3) throw ConfigError("--t-grid expects START:STOP:STEPS");
  double start, stop;
  int steps;
  try {
    start = std::stod(parts[0]);
    stop = std::stod(parts[1]);
    steps = std::stoi(parts[2]);
  } catch (const std::exception&) {
    throw ConfigError("--t-grid expects START:STOP:STEPS");
  }
  if (steps < 1) throw ConfigError("--t-grid needs at least one step");
  if (steps == 1) return {start};
  std::vector<double> ts;
  for (int i = 0; i < steps; ++i) ts.push_back(start + (stop - start) * i / (steps - 1));
  return ts;
}

bool singular(double t) {
  const double r = std::remainder(t, kPi / 2);
  return std::abs(r) < 1e-9;
}

int cmd_verify(const std::string& suite, const VerifyOptions& opts, const std::string& out) {
  const auto entries = verify_suite(suite, opts);
  const json report = verify_report(suite, opts, entries);
  emit(out, "verify_" + suite + ".json", report.dump(2) + "\n");
  return report["pass"].get<bool>() ? 0 : 1;
}

int cmd_flow(const VerifyOptions& opts, const std::string& direction, bool symmetric, const std::string& out) {
  const LieAlgebra alg = load_algebra(opts.algebra);
  if (alg.dim() < 4) throw ConfigError("flow needs an algebra of dimension at least 4");
  if (direction != "ascend" && direction != "descend") throw ConfigError("direction must be ascend or descend");
  if (symmetric && opts.algebra != "so4") throw ConfigError("--symmetric requires --algebra so4");
  const FlowDirection dir = direction == "ascend" ? FlowDirection::ascend : FlowDirection::descend;
  std::vector<FlowResult> results(opts.samples);
  parallel_for(opts.samples, opts.threads, [&](int i) {
    std::mt19937_64 rng(opts.seed + static_cast<std::uint64_t>(i));
    const GrassPoint v0 = symmetric ? random_symmetric_seed(rng) : random_grass_point(rng, alg.dim(), 3);
    results[i] = flow_run(alg, v0, dir, {}, true);
  });
  json summary;
  summary["schema"] = 1;
  summary["algebra"] = opts.algebra;
  summary["direction"] = direction;
  summary["seeds"] = json::array();
  std::vector<double> terminal;
  bool all_converged = true;
  for (int i = 0; i < opts.samples; ++i) {
    const std::uint64_t seed = opts.seed + static_cast<std::uint64_t>(i);
    summary["seeds"].push_back(summary_json(results[i], seed));
    terminal.push_back(results[i].report.psi_value);
    all_converged = all_converged && results[i].report.converged;
    if (!out.empty()) emit(out, "trajectory_" + std::to_string(seed) + ".csv", trajectory_csv(results[i]));
  }
  json hist = json::array();
  for (double level : critical_catalog(terminal)) {
    int count = 0;
    for (double p : terminal) count += std::abs(std::abs(p) - level) < 1e-4 ? 1 : 0;
    hist.push_back({{"abs_psi", level}, {"count", count}});
  }
  summary["histogram"] = hist;
  summary["all_converged"] = all_converged;
  emit(out, "summary.json", summary.dump(2) + "\n");
  return 0;
}

int cmd_geodesic(const std::string& grid, bool allow_singular, const std::string& out) {
  const auto ts = parse_grid(grid);
  std::vector<GeodesicRow> rows;
  for (double t : ts) {
    if (t < -1e-12 || t > kPi + 1e-12) throw ConfigError("grid must lie in [0, pi]");
    if (singular(t) && !allow_singular) throw ConfigError("grid touches a pole; pass --allow-singular");
    rows.push_back(geodesic_row(t));
  }
  emit(out, "geodesic.csv", geodesic_csv(rows));
  return 0;
}

int cmd_decompose(double t, const std::string& out) {
  if (singular(t)) throw ConfigError("t must avoid the poles");
  const ImageDecomposition d = decompose_image(t);
  json j;
  j["schema"] = 1;
  j["t"] = t;
  j["tangent"] = to_json(d.tangent);
  j["tangent_string"] = d.tangent.to_string();
  j["image"] = to_json(d.image);
  j["image_string"] = d.image.to_string();
  j["invariance_residual"] = d.invariance_residual;
  j["fundamental"] = {{"long_root", weight_decompose(long_root_h()).to_string()},
                      {"short_root", weight_decompose(short_root_h()).to_string()},
                      {"principal", weight_decompose(principal_sl2_embedding().h).to_string()}};
  j["adjoint"] = {{"long_root", weight_decompose(induced_sym2(long_root_h())).to_string()},
                  {"short_root", weight_decompose(induced_sym2(short_root_h())).to_string()},
                  {"principal", weight_decompose(induced_sym2(principal_sl2_embedding().h)).to_string()}};
  emit(out, "decompose.json", j.dump(2) + "\n");
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Grassmannian, gradient-flow and quaternionic-map verification"};
  app.require_subcommand(1);

  VerifyOptions opts;
  opts.threads = default_threads();
  std::string out, grid = "0.05:1.5:30", direction = "ascend";
  double tol = 0.0, t_decomp = kPi / 4;
  bool allow_singular = false, symmetric = false;
  std::string suite = "all";

  auto common = [&](CLI::App* sub) {
    sub->add_option("--algebra", opts.algebra, "so4, sp2 or file:PATH");
    sub->add_option("--seed", opts.seed, "base random seed");
    sub->add_option("--samples", opts.samples, "sample or seed count");
    sub->add_option("--out", out, "output directory (stdout when omitted)");
  };

  auto* verify = app.add_subcommand("verify", "run identity suites and print a JSON report");
  common(verify);
  verify->add_option("suite", suite, "all, grass, rep, flow or qk")
      ->check(CLI::IsMember({"all", "grass", "rep", "flow", "qk"}));
  verify->add_option("--k", opts.k, "subspace dimension for the grass suite");
  verify->add_option("--n", opts.n, "ambient dimension for the grass suite");
  auto* tol_opt = verify->add_option("--tol", tol, "override every tolerance");

  auto* flow = app.add_subcommand("flow", "gradient flow of psi from random seeds");
  common(flow);
  flow->add_option("--direction", direction, "ascend or descend");
  flow->add_flag("--symmetric", symmetric, "seed on the e_i <-> f_i fixed locus (so4)");

  auto* geo = app.add_subcommand("geodesic", "table along the normal geodesic");
  geo->add_option("--t-grid", grid, "START:STOP:STEPS");
  geo->add_flag("--allow-singular", allow_singular, "keep pole rows with blank coincidence columns");
  geo->add_option("--out", out, "output directory (stdout when omitted)");

  auto* dec = app.add_subcommand("decompose", "sp(1) decompositions of the tangent space and the image");
  dec->add_option("--t", t_decomp, "geodesic parameter");
  dec->add_option("--out", out, "output directory (stdout when omitted)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }
  if (tol_opt->count() > 0) opts.tol = tol;
  if (opts.samples < 1) {
    std::cerr << "error: --samples must be positive\n";
    return 2;
  }

  try {
    if (verify->parsed()) return cmd_verify(suite, opts, out);
    if (flow->parsed()) return cmd_flow(opts, direction, symmetric, out);
    if (geo->parsed()) return cmd_geodesic(grid, allow_singular, out);
    if (dec->parsed()) return cmd_decompose(t_decomp, out);
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const InputError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
