// Copyright 2026 dualproj contributors
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <cstdlib>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "dualproj/diagnostics.hpp"
#include "dualproj/dual.hpp"
#include "dualproj/error.hpp"
#include "dualproj/io.hpp"
#include "dualproj/projection.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInfeasible = 2;
constexpr int kExitValidation = 3;
constexpr int kExitRuntimeLimit = 4;

int default_threads() {
  if (const char* env = std::getenv("DUALPROJ_THREADS")) {
    const int v = std::atoi(env);
    if (v > 0) return v;
  }
  return 1;
}

std::vector<double> parse_csv_vector(const std::string& text) {
  std::vector<double> values;
  std::string token;
  for (char c : text) {
    if (c == ',') {
      values.push_back(dualproj::parse_double_token(token));
      token.clear();
    } else {
      token += c;
    }
  }
  if (!token.empty()) values.push_back(dualproj::parse_double_token(token));
  return values;
}

std::string to_csv(const std::vector<double>& values) {
  std::string out;
  for (size_t i = 0; i < values.size(); ++i) {
    if (i) out += ',';
    out += dualproj::format_double(values[i]);
  }
  return out;
}

int run_solve(const std::string& path, bool adaptive, double gamma,
              const std::string& optimizer, int max_iters, int threads, int inner_iters,
              double tau, const std::string& trace_path, const std::string& summary_path) {
  const dualproj::Problem p = dualproj::parse_problem(path);

  dualproj::SolveOptions opts;
  opts.adaptive_gamma = adaptive;
  opts.gamma = gamma;
  opts.threads = threads;
  opts.optimizer.method = dualproj::optim_method_from_name(optimizer);
  opts.optimizer.max_iters = max_iters;
  opts.stage.inner_iters = inner_iters;
  opts.stage.tau = tau;

  const dualproj::SolveOutcome outcome = dualproj::solve_problem(p, opts);

  if (!trace_path.empty()) {
    dualproj::write_file(trace_path, dualproj::trace_to_csv(outcome.trace));
  }
  const std::string summary = dualproj::summary_to_json(outcome);
  if (!summary_path.empty()) {
    dualproj::write_file(summary_path, summary);
  } else {
    std::cout << summary << '\n';
  }

  if (outcome.verdict.status == dualproj::InfeasibilityStatus::kProvenInfeasible) {
    return kExitInfeasible;
  }
  if (!outcome.converged || outcome.stalled) return kExitRuntimeLimit;
  return kExitOk;
}

int run_project(const std::string& kind, int delta, const std::string& point_csv,
                const std::string& vertices_path) {
  const std::vector<double> point = parse_csv_vector(point_csv);
  dualproj::PolytopeSpec spec;
  if (kind == "box") {
    spec = dualproj::PolytopeSpec::box();
  } else if (kind == "simplex_eq") {
    spec = dualproj::PolytopeSpec::simplex_eq();
  } else if (kind == "simplex_iq") {
    spec = dualproj::PolytopeSpec::simplex_iq();
  } else if (kind == "boxcut_eq") {
    spec = dualproj::PolytopeSpec::boxcut_eq(delta);
  } else if (kind == "boxcut_iq") {
    spec = dualproj::PolytopeSpec::boxcut_iq(delta);
  } else if (kind == "parity") {
    spec = dualproj::PolytopeSpec::parity();
  } else if (kind == "general") {
    if (vertices_path.empty()) {
      std::cerr << "general projection needs --vertices <csv file>\n";
      return kExitValidation;
    }
    std::vector<std::vector<double>> vertices;
    std::istringstream in(dualproj::read_file(vertices_path));
    std::string line;
    while (std::getline(in, line)) {
      if (!line.empty()) vertices.push_back(parse_csv_vector(line));
    }
    spec = dualproj::PolytopeSpec::general(std::move(vertices));
  } else {
    std::cerr << "unknown kind '" << kind << "'\n";
    return kExitValidation;
  }

  const dualproj::ProjectionResult result = dualproj::project_polytope(spec, point);
  std::cout << to_csv(result.x) << '\n';
  return kExitOk;
}

int run_generate(const std::string& spec_path, const std::string& out_path, bool infeasible) {
  const dualproj::MarketplaceSpec spec =
      dualproj::marketplace_spec_from_json(dualproj::read_file(spec_path));
  dualproj::Problem p;
  if (infeasible) {
    p = dualproj::generate_infeasible(spec, spec.seed);
  } else {
    p = dualproj::generate_marketplace(spec);
  }
  dualproj::GeneratorMeta meta;
  meta.seed = spec.seed;
  meta.kind = spec.kind == dualproj::MarketplaceKind::kMatching ? "matching" : "diversity";
  dualproj::write_problem(p, meta, out_path);
  return kExitOk;
}

int run_check_infeasible(const std::string& path, double gamma, int max_iters, int threads) {
  const dualproj::Problem p = dualproj::parse_problem(path);
  const double bound = dualproj::infeasibility_bound(p, gamma);

  dualproj::OptimizerConfig cfg;
  cfg.method = dualproj::OptimMethod::kPga;
  cfg.max_iters = max_iters;
  cfg.threads = threads;

  const double reference = dualproj::relaxation_reference(p, gamma, cfg);

  dualproj::OptimizerConfig eq_cfg = cfg;
  eq_cfg.stop_above = bound + std::max(1.0, std::abs(bound));
  const std::vector<double> zero(p.num_rows, 0.0);
  const dualproj::OptimizerResult run = dualproj::maximize_dual(p, gamma, zero, eq_cfg);

  std::vector<double> g_trace;
  g_trace.reserve(run.trace.size());
  for (const auto& rec : run.trace) g_trace.push_back(rec.g);

  const dualproj::InfeasibilityVerdict verdict =
      dualproj::check_infeasible(g_trace, bound, reference);
  std::cout << "status: " << dualproj::infeasibility_status_name(verdict.status) << '\n'
            << "bound: " << dualproj::format_double(verdict.bound) << '\n'
            << "max_g_seen: " << dualproj::format_double(verdict.max_g_seen) << '\n'
            << "relaxed_reference: " << dualproj::format_double(reference) << '\n';
  return verdict.status == dualproj::InfeasibilityStatus::kProvenInfeasible ? kExitInfeasible
                                                                            : kExitOk;
}

int run_stats(const std::string& trace_path, const std::string& q_out,
              const std::string& mu_out) {
  const std::vector<dualproj::TraceRow> rows =
      dualproj::parse_trace_csv(dualproj::read_file(trace_path));

  std::string q_csv = "iter,q\n";
  for (const auto& r : rows) {
    q_csv += std::to_string(r.iter) + ',' + dualproj::format_double(r.q) + '\n';
  }

  // Mean corral dimension and vertex fraction per gamma, in first-seen order.
  std::vector<double> gammas;
  std::map<double, std::pair<double, long>> mu_acc;
  std::map<double, double> vf_acc;
  for (const auto& r : rows) {
    if (mu_acc.find(r.gamma) == mu_acc.end()) gammas.push_back(r.gamma);
    auto& acc = mu_acc[r.gamma];
    acc.first += r.mu;
    acc.second += 1;
    vf_acc[r.gamma] += r.vertex_frac;
  }
  std::string mu_csv = "gamma,mean_mu,mean_vertex_frac\n";
  for (double g : gammas) {
    const auto& acc = mu_acc[g];
    mu_csv += dualproj::format_double(g) + ',' +
              dualproj::format_double(acc.first / acc.second) + ',' +
              dualproj::format_double(vf_acc[g] / acc.second) + '\n';
  }

  if (q_out.empty() && mu_out.empty()) {
    std::cout << q_csv << '\n' << mu_csv;
  } else {
    if (!q_out.empty()) dualproj::write_file(q_out, q_csv);
    if (!mu_out.empty()) dualproj::write_file(mu_out, mu_csv);
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"dual-decomposition LP solver with vertex-oriented projections"};
  app.require_subcommand(1);

  // solve
  std::string solve_path, solve_optimizer = "lbfgsb", trace_path, summary_path;
  double solve_gamma = 0.1, solve_tau = 1.0;
  bool adaptive = false;
  int solve_max_iters = 1000, solve_threads = default_threads(), solve_inner = 50;
  CLI::App* solve = app.add_subcommand("solve", "solve a problem file");
  solve->add_option("problem", solve_path)->required();
  solve->add_option("--gamma", solve_gamma, "fixed smoothing value");
  solve->add_flag("--adaptive-gamma", adaptive, "stage-wise gamma adaptation");
  solve->add_option("--optimizer", solve_optimizer, "pga|agd|lbfgsb");
  solve->add_option("--max-iters", solve_max_iters);
  solve->add_option("--threads", solve_threads);
  solve->add_option("--inner-iters", solve_inner, "optimizer iterations per stage check");
  solve->add_option("--tau", solve_tau, "opportunity fraction for the first stage");
  solve->add_option("--trace", trace_path, "write the iteration trace CSV here");
  solve->add_option("--summary", summary_path, "write the summary JSON here");

  // project
  std::string project_kind, project_point, project_vertices;
  int project_delta = 0;
  CLI::App* project = app.add_subcommand("project", "project a point onto a polytope");
  project->add_option("kind", project_kind)->required();
  project->add_option("--delta", project_delta);
  project->add_option("--point", project_point)->required();
  project->add_option("--vertices", project_vertices, "vertex list file for kind=general");

  // generate
  std::string gen_spec, gen_out;
  bool gen_infeasible = false;
  CLI::App* generate = app.add_subcommand("generate", "generate a synthetic instance");
  generate->add_option("spec", gen_spec)->required();
  generate->add_option("-o,--output", gen_out)->required();
  generate->add_flag("--infeasible", gen_infeasible, "certified-infeasible variant");

  // check-infeasible
  std::string check_path;
  double check_gamma = 1.0;
  int check_max_iters = 5000, check_threads = default_threads();
  CLI::App* check = app.add_subcommand("check-infeasible", "run the infeasibility diagnostics");
  check->add_option("problem", check_path)->required();
  check->add_option("--gamma", check_gamma);
  check->add_option("--max-iters", check_max_iters);
  check->add_option("--threads", check_threads);

  // stats
  std::string stats_path, stats_q_out, stats_mu_out;
  CLI::App* stats = app.add_subcommand("stats", "plot data from a trace CSV");
  stats->add_option("trace", stats_path)->required();
  stats->add_option("--q-out", stats_q_out);
  stats->add_option("--mu-out", stats_mu_out);

  CLI11_PARSE(app, argc, argv);

  try {
    if (solve->parsed()) {
      return run_solve(solve_path, adaptive, solve_gamma, solve_optimizer, solve_max_iters,
                       solve_threads, solve_inner, solve_tau, trace_path, summary_path);
    }
    if (project->parsed()) {
      return run_project(project_kind, project_delta, project_point, project_vertices);
    }
    if (generate->parsed()) return run_generate(gen_spec, gen_out, gen_infeasible);
    if (check->parsed()) {
      return run_check_infeasible(check_path, check_gamma, check_max_iters, check_threads);
    }
    if (stats->parsed()) return run_stats(stats_path, stats_q_out, stats_mu_out);
  } catch (const dualproj::Error& e) {
    std::cerr << e.what() << '\n';
    switch (e.code()) {
      case dualproj::ErrorCode::kValidationError:
      case dualproj::ErrorCode::kParseError:
      case dualproj::ErrorCode::kInvalidSpec:
      case dualproj::ErrorCode::kInvalidDelta:
        return kExitValidation;
      case dualproj::ErrorCode::kMaxIterationsExceeded:
      case dualproj::ErrorCode::kStageStall:
      case dualproj::ErrorCode::kScaleExceeded:
        return kExitRuntimeLimit;
      default:
        return 1;
    }
  } catch (const std::exception& e) {
    std::cerr << e.what() << '\n';
    return 1;
  }
  return kExitOk;
}
