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

#ifndef DUALPROJ_IO_HPP
#define DUALPROJ_IO_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "dualproj/diagnostics.hpp"
#include "dualproj/optimizers.hpp"
#include "dualproj/problem.hpp"
#include "dualproj/smoothing.hpp"

namespace dualproj {

// Locale-independent shortest-round-trip numeric formatting.
std::string format_double(double value);
double parse_double_token(const std::string& token);

struct GeneratorMeta {
  std::optional<uint64_t> seed;
  std::optional<double> known_optimum;
  std::string kind;
};

struct ProblemDocument {
  Problem problem;
  GeneratorMeta meta;
};

/// Line-oriented text format: a JSON header line followed by the budget
/// vector and per-block sections. Round-trips all finite doubles bit-exactly.
std::string serialize_problem(const Problem& p, const GeneratorMeta& meta = {});
ProblemDocument parse_problem_text(const std::string& text);
Problem parse_problem(const std::string& path);
void write_problem(const Problem& p, const GeneratorMeta& meta, const std::string& path);
std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& content);

// ---------------------------------------------------------------------------
// Synthetic generators
// ---------------------------------------------------------------------------

enum class MarketplaceKind { kMatching, kDiversity };

struct MarketplaceSpec {
  int num_blocks = 100;
  int block_dim = 10;
  int num_rows = 5;
  MarketplaceKind kind = MarketplaceKind::kMatching;
  PolytopeKind block_kind = PolytopeKind::kSimplexEq;  // matching: SimplexEq or BoxCutIq
  int delta = 0;             // 0 -> min(3, K-1) for box-cut kinds
  double density = 0.3;
  double tightness = 0.5;    // 0 = budgets at the conservative anchor, 1 = slack
  uint64_t seed = 1;
};

MarketplaceSpec marketplace_spec_from_json(const std::string& json_text);

/// Deterministic in (spec, seed); budgets are placed between a guaranteed
/// feasible allocation and the unconstrained optimum.
Problem generate_marketplace(const MarketplaceSpec& spec);

/// Eq-kind instance whose first budget row sits strictly below the minimum
/// achievable coupling value, hence certainly infeasible; its Iq relaxation
/// is feasible.
Problem generate_infeasible(const MarketplaceSpec& spec, uint64_t seed);

// ---------------------------------------------------------------------------
// Run trace and summary
// ---------------------------------------------------------------------------

struct TraceRow {
  long iter = 0;
  int stage = 0;
  double gamma = 0.0;
  double eps = 0.0;
  double g_gamma = 0.0;
  double g0 = 0.0;
  double grad_norm = 0.0;
  double eta = 0.0;
  double mu = 0.0;
  double vertex_frac = 0.0;
  double q = 0.0;
  double wall_ms = 0.0;
};

extern const char* const kTraceHeader;

std::string trace_to_csv(const std::vector<TraceRow>& rows);
std::vector<TraceRow> parse_trace_csv(const std::string& text);
/// The trace with the wall-clock column removed; all other columns are
/// deterministic for a fixed problem and configuration.
std::string trace_csv_drop_wall(const std::string& csv);

struct SolveOptions {
  bool adaptive_gamma = true;
  double gamma = 0.1;           // fixed-gamma runs
  OptimizerConfig optimizer;
  StageConfig stage;
  int threads = 1;
  bool compute_g0_rows = true;  // g0 and Q columns in the trace
  bool bound_check = true;      // stop and flag once g exceeds the proof bound
};

struct SolveOutcome {
  std::vector<double> lambda;
  double g0 = 0.0;
  double g_gamma = 0.0;
  double g0_zero = 0.0;
  double q = 0.0;  // NaN when the anchor is degenerate
  bool converged = false;
  bool stalled = false;
  long evals = 0;
  CorralStats final_stats;
  InfeasibilityVerdict verdict;
  std::vector<TraceRow> trace;
  std::vector<StageRecord> stages;
};

SolveOutcome solve_problem(const Problem& p, const SolveOptions& opts);

std::string summary_to_json(const SolveOutcome& outcome);

}  // namespace dualproj

#endif  // DUALPROJ_IO_HPP
