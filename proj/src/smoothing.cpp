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

#include "dualproj/smoothing.hpp"

#include <algorithm>
#include <cmath>

#include "dualproj/dual.hpp"
#include "dualproj/error.hpp"

namespace dualproj {

double psi_tilde(int num_rows, double delta) {
  return 0.5 * static_cast<double>(num_rows) * delta;
}

namespace {

// 2 * max_{x in C} ||x||^2 / 2, i.e. the block's delta-like scale.
double block_delta_equivalent(const Block& b) {
  switch (b.spec.kind) {
    case PolytopeKind::kBox: return static_cast<double>(b.dim);
    case PolytopeKind::kSimplexEq:
    case PolytopeKind::kSimplexIq: return 1.0;
    case PolytopeKind::kBoxCutEq:
    case PolytopeKind::kBoxCutIq: return static_cast<double>(b.spec.delta);
    case PolytopeKind::kParity: return static_cast<double>(2 * (b.dim / 2));
    case PolytopeKind::kGeneral: {
      double best = 0.0;
      for (const auto& v : b.spec.vertices) {
        best = std::max(best, detail::dot(v, v));
      }
      return best;
    }
  }
  return 1.0;
}

double block_max_half_norm_sq(const Block& b) {
  return 0.5 * block_delta_equivalent(b);
}

}  // namespace

double delta_equivalent(const Problem& p) {
  double best = 1.0;
  for (const Block& b : p.blocks) best = std::max(best, block_delta_equivalent(b));
  return best;
}

double psi_gamma(const Problem& p, const PrimalPoint& x0) {
  if (static_cast<int>(x0.x.size()) != p.total_dim()) {
    throw Error(ErrorCode::kDimensionMismatch, "x0 length mismatch");
  }
  double max_term = 0.0;
  for (const Block& b : p.blocks) max_term += block_max_half_norm_sq(b);
  double norm_sq = 0.0;
  for (double v : x0.x) norm_sq += v * v;
  return max_term - 0.5 * norm_sq;
}

bool sufficient_convergence(double g0_bar, double g0_tilde, double gamma, double psi_a,
                            double eps, double g_drop) {
  const double budget = 0.5 * eps * g_drop;
  return (g0_bar - g0_tilde) <= budget && gamma * psi_a <= budget;
}

Lemma1Check check_lemma1(const Problem& p, double gamma, std::span<const double> lambda0,
                         std::span<const double> lambda_gamma,
                         std::span<const double> lambda_tilde) {
  const double g0_at_l0 = eval_g0(p, lambda0).value;
  const double g0_at_lg = eval_g0(p, lambda_gamma).value;
  const double g0_at_lt = eval_g0(p, lambda_tilde).value;

  const DualEvaluation smoothed = eval_dual(p, lambda0, gamma, {1, true});
  const double psi = psi_gamma(p, smoothed.x_star);

  Lemma1Check check;
  check.gamma_psi = gamma * psi;
  check.lhs = g0_at_l0 - g0_at_lt;
  check.rhs = (g0_at_lg - g0_at_lt) + check.gamma_psi;
  check.holds = check.lhs <= check.rhs + 1e-9;
  check.smoothing_gap = g0_at_l0 - g0_at_lg;
  check.smoothing_gap_holds = check.smoothing_gap <= check.gamma_psi + 1e-9;
  return check;
}

double quality_score(double g0_lambda, double g0_zero, double g0_best) {
  if (std::abs(g0_best - g0_zero) < 1e-14) {
    throw Error(ErrorCode::kDegenerateAnchor, "g0_best equals g0(0)");
  }
  return (g0_lambda - g0_zero) / (g0_best - g0_zero);
}

StagewiseResult stagewise_solve(const Problem& p, const StageConfig& cfg,
                                const StagewiseObserver& observer) {
  const ValidationReport report = validate_problem(p);
  if (!report.ok()) {
    throw Error(ErrorCode::kValidationError, report.violations.front().reason);
  }

  StagewiseResult result;
  std::vector<double> lambda(p.num_rows, 0.0);

  result.g0_zero = eval_g0(p, lambda).value;
  const double anchor = std::abs(result.g0_zero);
  double g_drop;
  if (anchor < 1e-14) {
    result.degenerate_anchor = true;
    g_drop = 1.0;
  } else {
    g_drop = cfg.tau * anchor;
  }

  const double psi_bound = psi_tilde(p.num_rows, delta_equivalent(p));
  double eps = 1e-1;
  double gamma = std::max(0.5 * eps * (result.degenerate_anchor ? 1.0 : anchor) / psi_bound,
                          cfg.gamma_floor);

  double g0_incumbent = result.g0_zero;

  OptimizerConfig inner = cfg.optimizer;
  inner.max_iters = cfg.inner_iters;

  for (int t = 1; t < cfg.stages; ++t) {
    StageRecord stage;
    stage.stage = t;
    stage.eps = eps;
    stage.gamma = gamma;
    stage.g0_entry = g0_incumbent;
    stage.g_drop = g_drop;

    double g0_bar = g0_incumbent;
    while (stage.repeats < cfg.max_repeats) {
      ++stage.repeats;
      IterationObserver wrapped;
      if (observer) {
        wrapped = [&](const IterationRecord& rec, std::span<const double> l) {
          observer(t, gamma, eps, rec, l);
        };
      }
      OptimizerResult run = maximize_dual(p, gamma, lambda, inner, wrapped);
      lambda = std::move(run.lambda);
      result.evals += run.evals;

      g0_bar = eval_g0(p, lambda).value;
      if (g0_bar - g0_incumbent <= 0.5 * eps * g_drop) {
        stage.converged = true;
        break;
      }
      g0_incumbent = g0_bar;
    }
    stage.g0_exit = g0_bar;
    g0_incumbent = g0_bar;  // the incumbent follows the latest iterate

    if (!stage.converged) {
      result.stages.push_back(stage);
      result.stalled = true;
      break;
    }

    // Stage transition: measure psi at the current smoothed projection and
    // re-derive eps, g_drop and gamma.
    const DualEvaluation smoothed = eval_dual(p, lambda, gamma, {cfg.optimizer.threads, true});
    ++result.evals;
    stage.psi_a = psi_gamma(p, smoothed.x_star);
    result.stages.push_back(stage);

    const double new_drop = g0_bar - result.g0_zero;
    if (new_drop < 0.0) {
      result.stalled = true;
      break;
    }
    eps = std::pow(10.0, -(t + 1));
    g_drop = new_drop;
    gamma = std::max(0.5 * eps * g_drop / std::max(stage.psi_a, 1e-12), cfg.gamma_floor);
  }

  result.lambda = std::move(lambda);
  result.g0_final = g0_incumbent;
  return result;
}

}  // namespace dualproj
