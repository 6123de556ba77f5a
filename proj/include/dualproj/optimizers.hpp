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

#ifndef DUALPROJ_OPTIMIZERS_HPP
#define DUALPROJ_OPTIMIZERS_HPP

#include <deque>
#include <functional>
#include <limits>
#include <optional>
#include <span>
#include <vector>

#include "dualproj/dual.hpp"
#include "dualproj/problem.hpp"

namespace dualproj {

enum class OptimMethod { kPga, kAgd, kLbfgsb };

OptimMethod optim_method_from_name(const std::string& name);
const char* optim_method_name(OptimMethod method);

struct OptimizerConfig {
  OptimMethod method = OptimMethod::kLbfgsb;
  int max_iters = 1000;
  int history = 10;       // H, gradient pairs kept for L estimation
  double eta_min = 1e-6;
  double eta_max = 1.0;
  double wolfe_c1 = 1e-4;
  double wolfe_c2 = 0.9;
  int lbfgs_memory = 10;
  double tol_grad = 0.0;  // <= 0 resolves to 1e-8 * (1 + ||b||)
  int threads = 1;
  bool adaptive_agd = false;  // dynamic AGD step from gradient history
  int max_bisections = 50;
  // Early stop once g exceeds this value (infeasibility detection runs).
  double stop_above = std::numeric_limits<double>::infinity();
};

/// Ring buffer of (lambda, grad) pairs for the difference-quotient
/// Lipschitz estimate. Consecutive duplicates in lambda are not stored.
class IterateHistory {
 public:
  explicit IterateHistory(int capacity) : capacity_(capacity) {}

  void push(std::span<const double> lambda, std::span<const double> grad);
  int size() const { return static_cast<int>(entries_.size()); }
  const std::vector<double>& lambda_at(int i) const { return entries_[i].lambda; }
  const std::vector<double>& grad_at(int i) const { return entries_[i].grad; }

 private:
  struct Entry {
    std::vector<double> lambda;
    std::vector<double> grad;
  };
  int capacity_;
  std::deque<Entry> entries_;
};

/// L_t = max_s ||grad_s - grad_{s-1}|| / ||lambda_s - lambda_{s-1}|| over the
/// stored window; throws InsufficientHistory with fewer than two entries.
double estimate_L(const IterateHistory& history);

/// eta_min while the history is filling, min(1/L_t, eta_max) afterwards.
double initial_step(int iter, const OptimizerConfig& cfg, std::optional<double> lipschitz);

/// Componentwise max(lambda + eta * d, 0).
std::vector<double> pga_step(std::span<const double> lambda, std::span<const double> d,
                             double eta);

struct LineSearchResult {
  double eta = 0.0;
  bool success = false;         // both weak Wolfe conditions hold
  bool early_termination = false;  // bracket exhausted, best sufficient-increase step
  bool no_improvement = false;  // no step improved phi at all
  int evals = 0;
};

/// Weak Wolfe bisection in ascent form: sufficient increase
/// phi(eta) >= phi(0) + c1 eta phi'(0) and curvature phi'(eta) <= c2 phi'(0).
/// `phi` returns (value, derivative) at the queried step.
LineSearchResult weak_wolfe_bisection(
    const std::function<std::pair<double, double>(double)>& phi, double phi0, double dphi0,
    double eta0, double c1, double c2, int max_bisections = 50);

struct IterationRecord {
  int iter = 0;
  double g = 0.0;
  double grad_norm = 0.0;  // projected-gradient norm
  double step = 0.0;
  long evals = 0;          // cumulative dual evaluations
  double wall_ms = 0.0;
  CorralStats stats;
};

using IterationObserver =
    std::function<void(const IterationRecord&, std::span<const double>)>;

struct OptimizerResult {
  std::vector<double> lambda;
  std::vector<IterationRecord> trace;
  bool converged = false;
  bool line_search_warning = false;  // NoImprovement surfaced as converged-with-warning
  bool hit_stop_above = false;
  long evals = 0;
  double g = 0.0;  // g_gamma at the returned lambda
};

/// Maximize g_gamma over lambda >= 0 with the configured method. Stops on the
/// projected-gradient criterion ||lambda - max(lambda + grad, 0)|| <= tol.
OptimizerResult maximize_dual(const Problem& p, double gamma, std::span<const double> lambda0,
                              const OptimizerConfig& cfg,
                              const IterationObserver& observer = {});

/// sigma_max(A)^2 via power iteration on A^T A (20 iterations, 1e-6).
double power_iteration_sigma_sq(const Problem& p);

}  // namespace dualproj

#endif  // DUALPROJ_OPTIMIZERS_HPP
