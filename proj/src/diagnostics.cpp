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

#include "dualproj/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "dualproj/dual.hpp"
#include "dualproj/error.hpp"
#include "dualproj/projection.hpp"

namespace dualproj {

const char* infeasibility_status_name(InfeasibilityStatus status) {
  switch (status) {
    case InfeasibilityStatus::kProvenInfeasible: return "proven_infeasible";
    case InfeasibilityStatus::kSuspectedInfeasible: return "suspected_infeasible";
    case InfeasibilityStatus::kNoEvidence: return "no_evidence";
  }
  return "unknown";
}

namespace {

double block_bound(const Block& b, double gamma) {
  const double half = 0.5 * gamma;
  switch (b.spec.kind) {
    case PolytopeKind::kBox: {
      double s = 0.0;
      for (double c : b.cost) s += std::max(0.0, c + half);
      return s;
    }
    case PolytopeKind::kSimplexEq: {
      double best = b.cost[0] + half;
      for (int k = 1; k < b.dim; ++k) best = std::max(best, b.cost[k] + half);
      return best;
    }
    case PolytopeKind::kSimplexIq: {
      double best = 0.0;
      for (int k = 0; k < b.dim; ++k) best = std::max(best, b.cost[k] + half);
      return best;
    }
    case PolytopeKind::kBoxCutEq: {
      std::vector<double> scores(b.dim);
      for (int k = 0; k < b.dim; ++k) scores[k] = b.cost[k] + half;
      const VertexId top = boxcut_vertex_oracle(scores, b.spec.delta);
      double s = 0.0;
      for (int k : top.ones) s += scores[k];
      return s;
    }
    case PolytopeKind::kBoxCutIq: {
      std::vector<double> scores(b.dim);
      for (int k = 0; k < b.dim; ++k) scores[k] = b.cost[k] + half;
      std::sort(scores.begin(), scores.end(), std::greater<double>());
      double s = 0.0;
      for (int k = 0; k < std::min(b.spec.delta, b.dim); ++k) {
        if (scores[k] > 0.0) s += scores[k];
      }
      return s;
    }
    case PolytopeKind::kParity: {
      std::vector<double> scores(b.dim);
      for (int k = 0; k < b.dim; ++k) scores[k] = b.cost[k] + half;
      const VertexId v = parity_vertex_oracle(scores);
      double s = 0.0;
      for (int k : v.ones) s += scores[k];
      return s;
    }
    case PolytopeKind::kGeneral: {
      double best = -std::numeric_limits<double>::infinity();
      for (const auto& v : b.spec.vertices) {
        best = std::max(best, detail::dot(b.cost, v) + half * detail::dot(v, v));
      }
      return best;
    }
  }
  return 0.0;
}

}  // namespace

double infeasibility_bound(const Problem& p, double gamma) {
  if (gamma < 0.0) throw Error(ErrorCode::kInvalidGamma, "gamma must be nonnegative");
  double total = 0.0;
  for (const Block& b : p.blocks) total += block_bound(b, gamma);
  return total;
}

InfeasibilityVerdict check_infeasible(std::span<const double> g_trace, double bound,
                                      std::optional<double> relaxed_reference,
                                      const InfeasibilityConfig& cfg) {
  InfeasibilityVerdict verdict;
  verdict.bound = bound;
  verdict.relaxed_reference = relaxed_reference;
  double max_g = -std::numeric_limits<double>::infinity();
  for (double g : g_trace) {
    if (std::isfinite(g)) max_g = std::max(max_g, g);
  }
  verdict.max_g_seen = max_g;

  if (max_g > bound + 1e-9) {
    verdict.status = InfeasibilityStatus::kProvenInfeasible;
    return verdict;
  }
  if (relaxed_reference.has_value() && g_trace.size() >= 2) {
    const double g_ref = *relaxed_reference;
    const double threshold = g_ref + (cfg.suspect_factor - 1.0) * std::max(1.0, std::abs(g_ref));
    size_t anchor = g_trace.size() - 1 - (g_trace.size() - 1) / 5;
    if (anchor == g_trace.size() - 1) --anchor;
    const bool rising = g_trace.back() > g_trace[anchor];
    if (max_g > threshold && rising) {
      verdict.status = InfeasibilityStatus::kSuspectedInfeasible;
      return verdict;
    }
  }
  verdict.status = InfeasibilityStatus::kNoEvidence;
  return verdict;
}

Problem relax_to_iq(const Problem& p) {
  Problem relaxed = p;
  for (Block& b : relaxed.blocks) {
    if (b.spec.kind == PolytopeKind::kSimplexEq) b.spec.kind = PolytopeKind::kSimplexIq;
    if (b.spec.kind == PolytopeKind::kBoxCutEq) b.spec.kind = PolytopeKind::kBoxCutIq;
  }
  return relaxed;
}

double relaxation_reference(const Problem& p, double gamma, const OptimizerConfig& cfg) {
  const Problem relaxed = relax_to_iq(p);
  const std::vector<double> lambda0(p.num_rows, 0.0);
  const OptimizerResult run = maximize_dual(relaxed, gamma, lambda0, cfg);
  return run.g;
}

PrimalPoint repair_to_feasible(const Problem& p, const PrimalPoint& x) {
  for (const Block& b : p.blocks) {
    const PolytopeKind kind = b.spec.kind;
    if (kind != PolytopeKind::kBox && kind != PolytopeKind::kSimplexIq &&
        kind != PolytopeKind::kBoxCutIq) {
      throw Error(ErrorCode::kRepairUnavailable,
                  std::string("block ") + std::to_string(b.id) + " has kind " +
                      polytope_kind_name(kind) + ", not closed under shrinkage");
    }
    for (const Triplet& t : b.coupling) {
      if (t.value < 0.0) {
        throw Error(ErrorCode::kRepairUnavailable, "negative coupling entries");
      }
    }
  }
  for (double bj : p.budget) {
    if (bj < 0.0) throw Error(ErrorCode::kRepairUnavailable, "negative budget entries");
  }

  const std::vector<double> r = residual(p, x);
  std::vector<bool> violated(p.num_rows, false);
  double beta = 1.0;
  bool any = false;
  for (int j = 0; j < p.num_rows; ++j) {
    if (r[j] > 0.0) {
      violated[j] = true;
      any = true;
      const double row_value = r[j] + p.budget[j];  // (A x)_j > 0 here
      beta = std::min(beta, p.budget[j] / row_value);
    }
  }
  if (!any) return x;

  PrimalPoint repaired = x;
  const std::vector<int> offsets = p.block_offsets();
  for (int i = 0; i < p.num_blocks(); ++i) {
    bool contributes = false;
    for (const Triplet& t : p.blocks[i].coupling) {
      if (violated[t.row] && t.value != 0.0) {
        contributes = true;
        break;
      }
    }
    if (!contributes) continue;
    double* xi = repaired.x.data() + offsets[i];
    for (int k = 0; k < p.blocks[i].dim; ++k) xi[k] *= beta;
  }
  return repaired;
}

double penalized_objective(const Problem& p, const PrimalPoint& x) {
  const std::vector<double> r = residual(p, x);
  double penalty = 0.0;
  for (double rj : r) penalty += std::max(0.0, rj);
  return objective(p, x, 0.0) + penalty;
}

GapReport weak_duality_gap(const Problem& p, const PrimalPoint& x_tilde,
                           std::span<const double> lambda) {
  const FeasibilityReport feas = is_feasible(p, x_tilde, 1e-9);
  if (!feas.feasible) {
    throw Error(ErrorCode::kInfeasibleCandidate,
                "candidate violates constraints by " + std::to_string(feas.max_violation));
  }
  GapReport report;
  report.primal = objective(p, x_tilde, 0.0);
  report.dual = eval_g0(p, lambda).value;
  report.gap = report.primal - report.dual;
  return report;
}

namespace {

constexpr double kBudgetTol = 1e-9;

// Cost-ascending coordinate order, ties toward the smaller index.
std::vector<int> by_cost(const Block& b) {
  std::vector<int> order(b.dim);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int a, int c) {
    if (b.cost[a] != b.cost[c]) return b.cost[a] < b.cost[c];
    return a < c;
  });
  return order;
}

bool column_fits(const Block& b, int col, const std::vector<double>& used,
                 const std::vector<double>& budget) {
  for (const Triplet& t : b.coupling) {
    if (t.col != col) continue;
    if (used[t.row] + t.value > budget[t.row] + kBudgetTol) return false;
  }
  return true;
}

void commit_column(const Block& b, int col, double value, std::vector<double>& used) {
  for (const Triplet& t : b.coupling) {
    if (t.col == col) used[t.row] += t.value * value;
  }
}

bool vertex_fits(const Block& b, std::span<const double> v, const std::vector<double>& used,
                 const std::vector<double>& budget, std::vector<double>& scratch) {
  scratch.assign(budget.size(), 0.0);
  for (const Triplet& t : b.coupling) scratch[t.row] += t.value * v[t.col];
  for (size_t j = 0; j < budget.size(); ++j) {
    if (used[j] + scratch[j] > budget[j] + kBudgetTol) return false;
  }
  return true;
}

}  // namespace

GreedyResult greedy_baseline(const Problem& p) {
  for (const Block& b : p.blocks) {
    for (const Triplet& t : b.coupling) {
      if (t.value < 0.0) {
        throw Error(ErrorCode::kInvalidSpec, "greedy baseline needs nonnegative coupling");
      }
    }
  }
  for (double bj : p.budget) {
    if (bj < 0.0) throw Error(ErrorCode::kInvalidSpec, "greedy baseline needs nonnegative budget");
  }

  GreedyResult result;
  result.x.x.assign(p.total_dim(), 0.0);
  const std::vector<int> offsets = p.block_offsets();
  std::vector<double> used(p.num_rows, 0.0);
  std::vector<double> scratch;

  for (int i = 0; i < p.num_blocks(); ++i) {
    const Block& b = p.blocks[i];
    double* xi = result.x.x.data() + offsets[i];
    switch (b.spec.kind) {
      case PolytopeKind::kBox: {
        for (int k : by_cost(b)) {
          if (b.cost[k] >= 0.0) break;
          if (!column_fits(b, k, used, p.budget)) continue;
          xi[k] = 1.0;
          commit_column(b, k, 1.0, used);
        }
        break;
      }
      case PolytopeKind::kSimplexEq:
      case PolytopeKind::kSimplexIq: {
        int pick = -1;
        for (int k : by_cost(b)) {
          if (b.spec.kind == PolytopeKind::kSimplexIq && b.cost[k] >= 0.0) break;
          if (column_fits(b, k, used, p.budget)) {
            pick = k;
            break;
          }
        }
        if (pick < 0 && b.spec.kind == PolytopeKind::kSimplexEq) {
          throw Error(ErrorCode::kBaselineInfeasible,
                      "block " + std::to_string(b.id) + " has no budget-respecting vertex");
        }
        if (pick >= 0) {
          xi[pick] = 1.0;
          commit_column(b, pick, 1.0, used);
        }
        break;
      }
      case PolytopeKind::kBoxCutEq:
      case PolytopeKind::kBoxCutIq: {
        const bool eq = b.spec.kind == PolytopeKind::kBoxCutEq;
        int taken = 0;
        for (int k : by_cost(b)) {
          if (taken == b.spec.delta) break;
          if (!eq && b.cost[k] >= 0.0) break;
          if (!column_fits(b, k, used, p.budget)) continue;
          xi[k] = 1.0;
          commit_column(b, k, 1.0, used);
          ++taken;
        }
        if (eq && taken < b.spec.delta) {
          throw Error(ErrorCode::kBaselineInfeasible,
                      "block " + std::to_string(b.id) + " cannot place delta items");
        }
        break;
      }
      case PolytopeKind::kParity: {
        const LinMinResult lm = polytope_linmin(b.spec, b.cost, b.dim);
        std::vector<double> v(b.dim, 0.0);
        for (int k : lm.vertex.ones) v[k] = 1.0;
        if (vertex_fits(b, v, used, p.budget, scratch)) {
          for (int k = 0; k < b.dim; ++k) xi[k] = v[k];
          for (const Triplet& t : b.coupling) used[t.row] += t.value * v[t.col];
        }
        // Otherwise the zero vertex (even parity) stands.
        break;
      }
      case PolytopeKind::kGeneral: {
        int pick = -1;
        double pick_cost = 0.0;
        for (size_t r = 0; r < b.spec.vertices.size(); ++r) {
          const auto& v = b.spec.vertices[r];
          if (!vertex_fits(b, v, used, p.budget, scratch)) continue;
          const double cost = detail::dot(b.cost, v);
          if (pick < 0 || cost < pick_cost) {
            pick = static_cast<int>(r);
            pick_cost = cost;
          }
        }
        if (pick < 0) {
          throw Error(ErrorCode::kBaselineInfeasible,
                      "block " + std::to_string(b.id) + " has no budget-respecting vertex");
        }
        const auto& v = b.spec.vertices[pick];
        for (int k = 0; k < b.dim; ++k) xi[k] = v[k];
        for (const Triplet& t : b.coupling) used[t.row] += t.value * v[t.col];
        break;
      }
    }
  }
  result.objective = objective(p, result.x, 0.0);
  return result;
}

}  // namespace dualproj
