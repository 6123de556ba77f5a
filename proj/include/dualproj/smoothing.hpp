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

#ifndef DUALPROJ_SMOOTHING_HPP
#define DUALPROJ_SMOOTHING_HPP

#include <functional>
#include <span>
#include <vector>

#include "dualproj/optimizers.hpp"
#include "dualproj/problem.hpp"

namespace dualproj {

/// A-priori smoothing bound m * delta / 2.
double psi_tilde(int num_rows, double delta);

/// Largest squared-norm budget of a block's polytope, doubled: the "delta
/// equivalent" used for the a-priori bound on mixed problems.
double delta_equivalent(const Problem& p);

/// psi(gamma) = sum_i max_{x in C_i} ||x||^2/2 - ||x0||^2/2 at the supplied
/// projection x0.
double psi_gamma(const Problem& p, const PrimalPoint& x0);

/// Both halves of the practical stage-exit test: optimizer progress and the
/// smoothing term each within (eps/2) * g_drop.
bool sufficient_convergence(double g0_bar, double g0_tilde, double gamma, double psi_a,
                            double eps, double g_drop);

struct Lemma1Check {
  double lhs = 0.0;            // g0(lambda0) - g0(lambda_tilde)
  double rhs = 0.0;            // (g0(lambda_gamma) - g0(lambda_tilde)) + gamma psi
  bool holds = false;
  double gamma_psi = 0.0;
  double smoothing_gap = 0.0;  // g0(lambda0) - g0(lambda_gamma)
  bool smoothing_gap_holds = false;
};

Lemma1Check check_lemma1(const Problem& p, double gamma, std::span<const double> lambda0,
                         std::span<const double> lambda_gamma,
                         std::span<const double> lambda_tilde);

/// Q = (g0_lambda - g0_zero) / (g0_best - g0_zero). Throws DegenerateAnchor
/// when the anchor gap vanishes.
double quality_score(double g0_lambda, double g0_zero, double g0_best);

struct StageConfig {
  int stages = 4;        // T; gamma is adapted over stages 1..T-1
  int inner_iters = 50;  // R optimizer iterations per convergence check
  double tau = 1.0;      // user opportunity fraction for the first g_drop
  double gamma_floor = 1e-8;
  int max_repeats = 100;
  OptimizerConfig optimizer;
};

struct StageRecord {
  int stage = 0;
  double eps = 0.0;
  double gamma = 0.0;
  double g0_entry = 0.0;  // incumbent value entering the stage
  double g0_exit = 0.0;   // value at the stage's final iterate
  double psi_a = 0.0;
  double g_drop = 0.0;    // value used inside the stage
  int repeats = 0;
  bool converged = false;
};

using StagewiseObserver = std::function<void(int stage, double gamma, double eps,
                                             const IterationRecord&, std::span<const double>)>;

struct StagewiseResult {
  std::vector<double> lambda;
  std::vector<StageRecord> stages;
  bool stalled = false;          // repeat cap hit or negative g_drop
  bool degenerate_anchor = false;  // g0(0) = 0 fallback applied
  double g0_zero = 0.0;
  double g0_final = 0.0;
  long evals = 0;
};

/// Stage-wise smoothing adaptation: run R-iteration bursts of the configured
/// optimizer on g_gamma until the stage criterion holds, then shrink eps
/// tenfold and re-derive gamma from the measured psi and g_drop.
StagewiseResult stagewise_solve(const Problem& p, const StageConfig& cfg,
                                const StagewiseObserver& observer = {});

}  // namespace dualproj

#endif  // DUALPROJ_SMOOTHING_HPP
