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

#include "dualproj/io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <random>
#include <sstream>

#include <json.hpp>

#include "dualproj/dual.hpp"
#include "dualproj/error.hpp"
#include "dualproj/projection.hpp"

namespace dualproj {

using nlohmann::json;

std::string format_double(double value) {
  char buffer[64];
  const auto result = std::to_chars(buffer, buffer + sizeof(buffer), value);
  return std::string(buffer, result.ptr);
}

double parse_double_token(const std::string& token) {
  double value = 0.0;
  const char* first = token.data();
  const char* last = token.data() + token.size();
  const auto result = std::from_chars(first, last, value);
  if (result.ec != std::errc() || result.ptr != last) {
    throw Error(ErrorCode::kParseError, "bad numeric token '" + token + "'");
  }
  return value;
}

namespace {

long parse_long_token(const std::string& token) {
  long value = 0;
  const auto result = std::from_chars(token.data(), token.data() + token.size(), value);
  if (result.ec != std::errc() || result.ptr != token.data() + token.size()) {
    throw Error(ErrorCode::kParseError, "bad integer token '" + token + "'");
  }
  return value;
}

std::vector<std::string> split_ws(const std::string& line) {
  std::vector<std::string> tokens;
  std::istringstream in(line);
  std::string token;
  while (in >> token) tokens.push_back(std::move(token));
  return tokens;
}

PolytopeKind kind_from_name(const std::string& name, int line_no) {
  if (name == "box") return PolytopeKind::kBox;
  if (name == "simplex_eq") return PolytopeKind::kSimplexEq;
  if (name == "simplex_iq") return PolytopeKind::kSimplexIq;
  if (name == "boxcut_eq") return PolytopeKind::kBoxCutEq;
  if (name == "boxcut_iq") return PolytopeKind::kBoxCutIq;
  if (name == "parity") return PolytopeKind::kParity;
  if (name == "general") return PolytopeKind::kGeneral;
  throw Error(ErrorCode::kParseError,
              "line " + std::to_string(line_no) + ": unknown polytope kind '" + name + "'");
}

}  // namespace

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kParseError, "cannot open '" + path + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::kParseError, "cannot write '" + path + "'");
  out << content;
}

std::string serialize_problem(const Problem& p, const GeneratorMeta& meta) {
  json header;
  header["format"] = "dualproj-problem";
  header["version"] = 1;
  header["blocks"] = p.num_blocks();
  header["rows"] = p.num_rows;
  header["vars"] = p.total_dim();
  if (meta.seed) header["seed"] = *meta.seed;
  if (meta.known_optimum) header["known_optimum"] = *meta.known_optimum;
  if (!meta.kind.empty()) header["kind"] = meta.kind;

  std::string out = header.dump();
  out += '\n';
  out += 'b';
  for (double v : p.budget) {
    out += ' ';
    out += format_double(v);
  }
  out += '\n';
  for (const Block& b : p.blocks) {
    out += "block " + std::to_string(b.id) + ' ' + polytope_kind_name(b.spec.kind) + ' ' +
           std::to_string(b.dim);
    if (b.spec.kind == PolytopeKind::kBoxCutEq || b.spec.kind == PolytopeKind::kBoxCutIq) {
      out += ' ' + std::to_string(b.spec.delta);
    }
    out += '\n';
    out += 'c';
    for (double v : b.cost) {
      out += ' ';
      out += format_double(v);
    }
    out += '\n';
    for (const auto& vertex : b.spec.vertices) {
      out += "vertex";
      for (double v : vertex) {
        out += ' ';
        out += format_double(v);
      }
      out += '\n';
    }
    for (const Triplet& t : b.coupling) {
      out += "A " + std::to_string(t.row) + ' ' + std::to_string(t.col) + ' ' +
             format_double(t.value) + '\n';
    }
  }
  out += "end\n";
  return out;
}

ProblemDocument parse_problem_text(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  int line_no = 0;

  if (!std::getline(in, line)) throw Error(ErrorCode::kParseError, "empty problem file");
  ++line_no;
  json header;
  try {
    header = json::parse(line);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kParseError, std::string("line 1: bad header: ") + e.what());
  }
  if (header.value("format", "") != "dualproj-problem") {
    throw Error(ErrorCode::kParseError, "line 1: not a dualproj problem file");
  }

  ProblemDocument doc;
  if (header.contains("seed")) doc.meta.seed = header["seed"].get<uint64_t>();
  if (header.contains("known_optimum")) {
    doc.meta.known_optimum = header["known_optimum"].get<double>();
  }
  doc.meta.kind = header.value("kind", "");
  doc.problem.num_rows = header.value("rows", 0);

  Block* current = nullptr;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::vector<std::string> tokens = split_ws(line);
    if (tokens.empty()) continue;
    const std::string& tag = tokens[0];

    if (tag == "b") {
      doc.problem.budget.clear();
      for (size_t i = 1; i < tokens.size(); ++i) {
        doc.problem.budget.push_back(parse_double_token(tokens[i]));
      }
    } else if (tag == "block") {
      if (tokens.size() < 4) {
        throw Error(ErrorCode::kParseError,
                    "line " + std::to_string(line_no) + ": malformed block record");
      }
      Block b;
      b.id = static_cast<int>(parse_long_token(tokens[1]));
      b.spec.kind = kind_from_name(tokens[2], line_no);
      b.dim = static_cast<int>(parse_long_token(tokens[3]));
      if (b.spec.kind == PolytopeKind::kBoxCutEq || b.spec.kind == PolytopeKind::kBoxCutIq) {
        if (tokens.size() < 5) {
          throw Error(ErrorCode::kParseError,
                      "line " + std::to_string(line_no) + ": box-cut block misses delta");
        }
        b.spec.delta = static_cast<int>(parse_long_token(tokens[4]));
      }
      doc.problem.blocks.push_back(std::move(b));
      current = &doc.problem.blocks.back();
    } else if (tag == "c") {
      if (!current) {
        throw Error(ErrorCode::kParseError,
                    "line " + std::to_string(line_no) + ": cost outside a block");
      }
      current->cost.clear();
      for (size_t i = 1; i < tokens.size(); ++i) {
        current->cost.push_back(parse_double_token(tokens[i]));
      }
    } else if (tag == "vertex") {
      if (!current) {
        throw Error(ErrorCode::kParseError,
                    "line " + std::to_string(line_no) + ": vertex outside a block");
      }
      std::vector<double> vertex;
      for (size_t i = 1; i < tokens.size(); ++i) {
        vertex.push_back(parse_double_token(tokens[i]));
      }
      current->spec.vertices.push_back(std::move(vertex));
    } else if (tag == "A") {
      if (!current || tokens.size() != 4) {
        throw Error(ErrorCode::kParseError,
                    "line " + std::to_string(line_no) + ": malformed coupling record");
      }
      Triplet t;
      t.row = static_cast<int>(parse_long_token(tokens[1]));
      t.col = static_cast<int>(parse_long_token(tokens[2]));
      t.value = parse_double_token(tokens[3]);
      current->coupling.push_back(t);
    } else if (tag == "end") {
      break;
    } else {
      throw Error(ErrorCode::kParseError,
                  "line " + std::to_string(line_no) + ": unknown record '" + tag + "'");
    }
  }
  for (Block& b : doc.problem.blocks) b.sort_coupling();

  const ValidationReport report = validate_problem(doc.problem);
  if (!report.ok()) {
    std::string message;
    for (const Violation& v : report.violations) {
      if (!message.empty()) message += "; ";
      message += "block " + std::to_string(v.block_id) + ": " + v.reason;
    }
    throw Error(ErrorCode::kValidationError, message);
  }
  return doc;
}

Problem parse_problem(const std::string& path) {
  return parse_problem_text(read_file(path)).problem;
}

void write_problem(const Problem& p, const GeneratorMeta& meta, const std::string& path) {
  write_file(path, serialize_problem(p, meta));
}

// ---------------------------------------------------------------------------
// Generators
// ---------------------------------------------------------------------------

namespace {

// mt19937_64-backed uniforms with a fixed bit-to-double mapping, so files are
// byte-identical across platforms.
class Rng {
 public:
  explicit Rng(uint64_t seed) : engine_(seed) {}

  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  bool bernoulli(double prob) { return uniform() < prob; }

 private:
  std::mt19937_64 engine_;
};

PolytopeSpec block_spec_for(const MarketplaceSpec& spec) {
  int delta = spec.delta;
  if (delta <= 0) delta = std::min(3, spec.block_dim - 1);
  switch (spec.block_kind) {
    case PolytopeKind::kSimplexEq: return PolytopeSpec::simplex_eq();
    case PolytopeKind::kSimplexIq: return PolytopeSpec::simplex_iq();
    case PolytopeKind::kBoxCutEq: return PolytopeSpec::boxcut_eq(delta);
    case PolytopeKind::kBoxCutIq: return PolytopeSpec::boxcut_iq(delta);
    case PolytopeKind::kBox: return PolytopeSpec::box();
    default:
      throw Error(ErrorCode::kInvalidSpec, "generator supports box/simplex/box-cut blocks");
  }
}

// An always-feasible interior allocation of the block polytope.
std::vector<double> feasible_anchor(const PolytopeSpec& spec, int dim) {
  std::vector<double> x(dim, 0.0);
  switch (spec.kind) {
    case PolytopeKind::kSimplexEq:
      std::fill(x.begin(), x.end(), 1.0 / dim);
      break;
    case PolytopeKind::kSimplexIq:
      std::fill(x.begin(), x.end(), 0.5 / dim);
      break;
    case PolytopeKind::kBoxCutEq:
      std::fill(x.begin(), x.end(), static_cast<double>(spec.delta) / dim);
      break;
    case PolytopeKind::kBoxCutIq:
      std::fill(x.begin(), x.end(), 0.5 * spec.delta / dim);
      break;
    case PolytopeKind::kBox:
      std::fill(x.begin(), x.end(), 0.25);
      break;
    default:
      break;
  }
  return x;
}

void check_spec(const MarketplaceSpec& spec) {
  if (spec.num_blocks < 1 || spec.block_dim < 1 || spec.num_rows < 0 ||
      spec.density < 0.0 || spec.density > 1.0 || spec.tightness < 0.0 ||
      spec.tightness > 1.0) {
    throw Error(ErrorCode::kInvalidSpec, "bad generator spec");
  }
  if ((spec.block_kind == PolytopeKind::kBoxCutEq ||
       spec.block_kind == PolytopeKind::kBoxCutIq) &&
      spec.block_dim < 3) {
    throw Error(ErrorCode::kInvalidSpec, "box-cut blocks need K >= 3");
  }
}

}  // namespace

MarketplaceSpec marketplace_spec_from_json(const std::string& json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kParseError, std::string("bad generator spec: ") + e.what());
  }
  MarketplaceSpec spec;
  spec.num_blocks = j.value("I", spec.num_blocks);
  spec.block_dim = j.value("K", spec.block_dim);
  spec.num_rows = j.value("m", spec.num_rows);
  const std::string kind = j.value("kind", "matching");
  if (kind == "matching") {
    spec.kind = MarketplaceKind::kMatching;
  } else if (kind == "diversity") {
    spec.kind = MarketplaceKind::kDiversity;
  } else {
    throw Error(ErrorCode::kInvalidSpec, "kind must be matching or diversity");
  }
  if (j.contains("block")) {
    const std::string name = j["block"].get<std::string>();
    spec.block_kind = kind_from_name(name, 0);
  } else if (spec.kind == MarketplaceKind::kDiversity) {
    spec.block_kind = PolytopeKind::kBoxCutEq;
  }
  spec.delta = j.value("delta", 0);
  spec.density = j.value("density", spec.density);
  spec.tightness = j.value("tightness", spec.tightness);
  spec.seed = j.value("seed", spec.seed);
  return spec;
}

Problem generate_marketplace(const MarketplaceSpec& raw) {
  MarketplaceSpec spec = raw;
  if (spec.kind == MarketplaceKind::kDiversity) spec.block_kind = PolytopeKind::kBoxCutEq;
  check_spec(spec);
  Rng rng(spec.seed);

  const bool diversity = spec.kind == MarketplaceKind::kDiversity;
  Problem p;
  p.num_rows = spec.num_rows;
  p.blocks.reserve(spec.num_blocks);

  std::vector<double> coupled_feasible(spec.num_rows, 0.0);
  std::vector<double> coupled_greedy(spec.num_rows, 0.0);

  for (int i = 0; i < spec.num_blocks; ++i) {
    Block b;
    b.id = i;
    b.dim = spec.block_dim;
    b.spec = block_spec_for(spec);
    b.cost.resize(b.dim);
    for (int k = 0; k < b.dim; ++k) b.cost[k] = -rng.uniform();

    for (int j = 0; j < spec.num_rows; ++j) {
      for (int k = 0; k < b.dim; ++k) {
        if (!rng.bernoulli(spec.density)) continue;
        const double magnitude = rng.uniform();
        b.coupling.push_back({j, k, diversity ? -magnitude : magnitude});
      }
    }
    b.sort_coupling();

    const std::vector<double> anchor = feasible_anchor(b.spec, b.dim);
    const LinMinResult lm = polytope_linmin(b.spec, b.cost, b.dim);
    std::vector<double> greedy(b.dim, 0.0);
    materialize_vertex(b.spec, lm.vertex, greedy);
    for (const Triplet& t : b.coupling) {
      coupled_feasible[t.row] += t.value * anchor[t.col];
      coupled_greedy[t.row] += t.value * greedy[t.col];
    }
    p.blocks.push_back(std::move(b));
  }

  p.budget.resize(spec.num_rows);
  for (int j = 0; j < spec.num_rows; ++j) {
    const double slack = std::max(0.0, coupled_greedy[j] - coupled_feasible[j]);
    p.budget[j] = coupled_feasible[j] + spec.tightness * slack;
  }
  return p;
}

Problem generate_infeasible(const MarketplaceSpec& raw, uint64_t seed) {
  MarketplaceSpec spec = raw;
  spec.seed = seed;
  if (spec.block_kind != PolytopeKind::kSimplexEq &&
      spec.block_kind != PolytopeKind::kBoxCutEq) {
    throw Error(ErrorCode::kInvalidSpec, "infeasible generator needs Eq-kind blocks");
  }
  if (spec.num_rows < 1) {
    throw Error(ErrorCode::kInvalidSpec, "infeasible generator needs at least one row");
  }
  Problem p = generate_marketplace(spec);

  // Densify row 0 with entries in [0.5, 1) and push its budget strictly
  // below the smallest coupling value any feasible point can reach.
  Rng rng(seed ^ 0x9e3779b97f4a7c15ull);
  double achievable_min = 0.0;
  for (Block& b : p.blocks) {
    std::erase_if(b.coupling, [](const Triplet& t) { return t.row == 0; });
    std::vector<double> row(b.dim);
    for (int k = 0; k < b.dim; ++k) {
      row[k] = rng.uniform(0.5, 1.0);
      b.coupling.push_back({0, k, row[k]});
    }
    b.sort_coupling();
    achievable_min += polytope_linmin(b.spec, row, b.dim).value;
  }
  p.budget[0] = 0.5 * achievable_min;
  return p;
}

// ---------------------------------------------------------------------------
// Trace CSV
// ---------------------------------------------------------------------------

const char* const kTraceHeader =
    "iter,stage,gamma,eps,g_gamma,g0,grad_norm,eta,mu,vertex_frac,q,wall_ms";

std::string trace_to_csv(const std::vector<TraceRow>& rows) {
  std::string out = kTraceHeader;
  out += '\n';
  for (const TraceRow& r : rows) {
    out += std::to_string(r.iter);
    out += ',';
    out += std::to_string(r.stage);
    for (double v : {r.gamma, r.eps, r.g_gamma, r.g0, r.grad_norm, r.eta, r.mu, r.vertex_frac,
                     r.q, r.wall_ms}) {
      out += ',';
      out += format_double(v);
    }
    out += '\n';
  }
  return out;
}

std::vector<TraceRow> parse_trace_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line)) throw Error(ErrorCode::kParseError, "empty trace");
  if (line != kTraceHeader) throw Error(ErrorCode::kParseError, "unexpected trace header");

  std::vector<TraceRow> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<std::string> fields;
    std::string field;
    std::istringstream ls(line);
    while (std::getline(ls, field, ',')) fields.push_back(field);
    if (fields.size() != 12) throw Error(ErrorCode::kParseError, "bad trace row");
    TraceRow r;
    r.iter = parse_long_token(fields[0]);
    r.stage = static_cast<int>(parse_long_token(fields[1]));
    double* slots[] = {&r.gamma, &r.eps, &r.g_gamma, &r.g0, &r.grad_norm,
                       &r.eta,   &r.mu,  &r.vertex_frac, &r.q, &r.wall_ms};
    for (int i = 0; i < 10; ++i) *slots[i] = parse_double_token(fields[i + 2]);
    rows.push_back(r);
  }
  return rows;
}

std::string trace_csv_drop_wall(const std::string& csv) {
  std::istringstream in(csv);
  std::string line;
  std::string out;
  while (std::getline(in, line)) {
    const size_t cut = line.rfind(',');
    out += cut == std::string::npos ? line : line.substr(0, cut);
    out += '\n';
  }
  return out;
}

// ---------------------------------------------------------------------------
// Solve driver
// ---------------------------------------------------------------------------

SolveOutcome solve_problem(const Problem& p, const SolveOptions& opts) {
  const ValidationReport report = validate_problem(p);
  if (!report.ok()) {
    throw Error(ErrorCode::kValidationError, report.violations.front().reason);
  }

  SolveOutcome outcome;
  const std::vector<double> zero(p.num_rows, 0.0);
  outcome.g0_zero = eval_g0(p, zero).value;

  long iter_counter = 0;
  double current_bound = 0.0;
  double max_g_seen = -std::numeric_limits<double>::infinity();
  bool bound_crossed = false;

  auto push_row = [&](int stage, double gamma, double eps, const IterationRecord& rec,
                      std::span<const double> lambda) {
    TraceRow row;
    row.iter = iter_counter++;
    row.stage = stage;
    row.gamma = gamma;
    row.eps = eps;
    row.g_gamma = rec.g;
    row.g0 = opts.compute_g0_rows ? eval_g0(p, lambda).value
                                  : std::numeric_limits<double>::quiet_NaN();
    row.grad_norm = rec.grad_norm;
    row.eta = rec.step;
    row.mu = rec.stats.mean_dim;
    row.vertex_frac = rec.stats.vertex_fraction();
    row.q = std::numeric_limits<double>::quiet_NaN();
    row.wall_ms = rec.wall_ms;
    outcome.trace.push_back(row);
    max_g_seen = std::max(max_g_seen, rec.g);
    if (opts.bound_check && rec.g > current_bound + 1e-9) bound_crossed = true;
  };

  if (opts.adaptive_gamma) {
    StageConfig stage_cfg = opts.stage;
    stage_cfg.optimizer = opts.optimizer;
    stage_cfg.optimizer.threads = opts.threads;

    // The bound depends on gamma, which the stages adapt; track the loosest
    // gamma seen so the proof stays valid for every stage.
    double max_gamma_seen = 0.0;
    StagewiseResult run = stagewise_solve(
        p, stage_cfg,
        [&](int stage, double gamma, double eps, const IterationRecord& rec,
            std::span<const double> lambda) {
          if (gamma > max_gamma_seen) {
            max_gamma_seen = gamma;
            current_bound = infeasibility_bound(p, gamma);
          }
          push_row(stage, gamma, eps, rec, lambda);
        });
    outcome.lambda = std::move(run.lambda);
    outcome.stages = std::move(run.stages);
    outcome.stalled = run.stalled;
    outcome.converged = !run.stalled;
    outcome.evals = run.evals;
    outcome.g0 = run.g0_final;
  } else {
    current_bound = infeasibility_bound(p, opts.gamma);
    OptimizerConfig cfg = opts.optimizer;
    cfg.threads = opts.threads;
    if (opts.bound_check) {
      cfg.stop_above = current_bound + std::max(1.0, std::abs(current_bound));
    }
    OptimizerResult run = maximize_dual(
        p, opts.gamma, zero, cfg,
        [&](const IterationRecord& rec, std::span<const double> lambda) {
          push_row(0, opts.gamma, std::numeric_limits<double>::quiet_NaN(), rec, lambda);
        });
    outcome.lambda = std::move(run.lambda);
    outcome.converged = run.converged;
    outcome.evals = run.evals;
    outcome.g0 = eval_g0(p, outcome.lambda).value;
  }

  const double final_gamma =
      opts.adaptive_gamma && !outcome.stages.empty() ? outcome.stages.back().gamma : opts.gamma;
  const DualEvaluation final_eval =
      eval_dual(p, outcome.lambda, final_gamma, {opts.threads, false});
  outcome.g_gamma = final_eval.g;
  outcome.final_stats = final_eval.stats;

  // Fill Q against the best g0 seen in this run.
  double g0_best = outcome.g0;
  for (const TraceRow& row : outcome.trace) {
    if (std::isfinite(row.g0)) g0_best = std::max(g0_best, row.g0);
  }
  if (std::abs(g0_best - outcome.g0_zero) >= 1e-14) {
    for (TraceRow& row : outcome.trace) {
      if (std::isfinite(row.g0)) row.q = quality_score(row.g0, outcome.g0_zero, g0_best);
    }
    outcome.q = quality_score(outcome.g0, outcome.g0_zero, g0_best);
  } else if (std::abs(outcome.g0 - g0_best) < 1e-12) {
    // Constraints never bound: lambda = 0 already attains the best value.
    outcome.q = 1.0;
    for (TraceRow& row : outcome.trace) {
      if (std::isfinite(row.g0)) row.q = 1.0;
    }
  } else {
    outcome.q = std::numeric_limits<double>::quiet_NaN();
  }

  InfeasibilityVerdict verdict;
  verdict.bound = current_bound;
  verdict.max_g_seen = max_g_seen;
  verdict.status = bound_crossed ? InfeasibilityStatus::kProvenInfeasible
                                 : InfeasibilityStatus::kNoEvidence;
  outcome.verdict = verdict;
  return outcome;
}

std::string summary_to_json(const SolveOutcome& outcome) {
  json j;
  j["lambda"] = outcome.lambda;
  j["g0"] = outcome.g0;
  j["g_gamma"] = outcome.g_gamma;
  j["g0_zero"] = outcome.g0_zero;
  if (std::isfinite(outcome.q)) {
    j["q"] = outcome.q;
  } else {
    j["q"] = nullptr;
  }
  j["converged"] = outcome.converged;
  j["stalled"] = outcome.stalled;
  j["evals"] = outcome.evals;
  j["corral"] = {{"mu", outcome.final_stats.mean_dim},
                 {"vertex_fraction", outcome.final_stats.vertex_fraction()},
                 {"vertex_blocks", outcome.final_stats.vertex_blocks},
                 {"blocks", outcome.final_stats.total_blocks}};
  j["infeasibility"] = {{"status", infeasibility_status_name(outcome.verdict.status)},
                        {"bound", outcome.verdict.bound},
                        {"max_g_seen", outcome.verdict.max_g_seen}};
  json stages = json::array();
  for (const StageRecord& s : outcome.stages) {
    stages.push_back({{"stage", s.stage},
                      {"eps", s.eps},
                      {"gamma", s.gamma},
                      {"g0_entry", s.g0_entry},
                      {"g0_exit", s.g0_exit},
                      {"psi_a", s.psi_a},
                      {"g_drop", s.g_drop},
                      {"repeats", s.repeats},
                      {"converged", s.converged}});
  }
  j["stages"] = stages;
  return j.dump(2);
}

}  // namespace dualproj
