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

#include "dualproj/optimizers.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>

#include "dualproj/error.hpp"

namespace dualproj {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();

double norm2(std::span<const double> v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}
}  // namespace

OptimMethod optim_method_from_name(const std::string& name) {
  if (name == "pga") return OptimMethod::kPga;
  if (name == "agd") return OptimMethod::kAgd;
  if (name == "lbfgsb") return OptimMethod::kLbfgsb;
  throw Error(ErrorCode::kInvalidSpec, "unknown optimizer '" + name + "'");
}

const char* optim_method_name(OptimMethod method) {
  switch (method) {
    case OptimMethod::kPga: return "pga";
    case OptimMethod::kAgd: return "agd";
    case OptimMethod::kLbfgsb: return "lbfgsb";
  }
  return "unknown";
}

void IterateHistory::push(std::span<const double> lambda, std::span<const double> grad) {
  if (!entries_.empty()) {
    const std::vector<double>& last = entries_.back().lambda;
    if (std::equal(last.begin(), last.end(), lambda.begin(), lambda.end())) return;
  }
  entries_.push_back({{lambda.begin(), lambda.end()}, {grad.begin(), grad.end()}});
  while (static_cast<int>(entries_.size()) > capacity_) entries_.pop_front();
}

double estimate_L(const IterateHistory& history) {
  if (history.size() < 2) {
    throw Error(ErrorCode::kInsufficientHistory, "need at least two iterates");
  }
  double best = 0.0;
  for (int s = 1; s < history.size(); ++s) {
    const std::vector<double>& l0 = history.lambda_at(s - 1);
    const std::vector<double>& l1 = history.lambda_at(s);
    const std::vector<double>& g0 = history.grad_at(s - 1);
    const std::vector<double>& g1 = history.grad_at(s);
    double dl = 0.0;
    double dg = 0.0;
    for (size_t j = 0; j < l0.size(); ++j) {
      dl += (l1[j] - l0[j]) * (l1[j] - l0[j]);
      dg += (g1[j] - g0[j]) * (g1[j] - g0[j]);
    }
    dl = std::sqrt(dl);
    if (dl < 1e-15) continue;
    best = std::max(best, std::sqrt(dg) / dl);
  }
  return best;
}

double initial_step(int iter, const OptimizerConfig& cfg, std::optional<double> lipschitz) {
  if (iter <= cfg.history || !lipschitz.has_value()) return cfg.eta_min;
  const double l = *lipschitz;
  if (l <= 0.0) return cfg.eta_max;
  return std::min(1.0 / l, cfg.eta_max);
}

std::vector<double> pga_step(std::span<const double> lambda, std::span<const double> d,
                             double eta) {
  std::vector<double> out(lambda.size());
  for (size_t j = 0; j < lambda.size(); ++j) out[j] = std::max(lambda[j] + eta * d[j], 0.0);
  return out;
}

LineSearchResult weak_wolfe_bisection(
    const std::function<std::pair<double, double>(double)>& phi, double phi0, double dphi0,
    double eta0, double c1, double c2, int max_bisections) {
  LineSearchResult result;
  double lo = 0.0;
  double hi = kInf;
  double eta = eta0;
  double best_sufficient = -1.0;
  double best_improve = -1.0;

  for (int it = 0; it < max_bisections; ++it) {
    const auto [value, deriv] = phi(eta);
    ++result.evals;
    if (value > phi0 && eta > best_improve) best_improve = eta;

    if (value < phi0 + c1 * eta * dphi0) {
      hi = eta;
    } else if (deriv > c2 * dphi0) {
      lo = eta;
      best_sufficient = std::max(best_sufficient, eta);
    } else {
      result.eta = eta;
      result.success = true;
      return result;
    }
    eta = (hi < kInf) ? 0.5 * (lo + hi) : 2.0 * eta;
  }

  if (best_sufficient > 0.0) {
    result.eta = best_sufficient;
    result.success = true;
    result.early_termination = true;
    return result;
  }
  if (best_improve > 0.0) {
    result.eta = best_improve;
    result.success = true;
    result.early_termination = true;
    return result;
  }
  result.no_improvement = true;
  return result;
}

double power_iteration_sigma_sq(const Problem& p) {
  const int n = p.total_dim();
  const std::vector<int> offsets = p.block_offsets();
  std::vector<double> u(n, 1.0 / std::sqrt(static_cast<double>(n)));
  std::vector<double> au(p.num_rows);
  std::vector<double> atau(n);

  double sigma_sq = 0.0;
  for (int it = 0; it < 20; ++it) {
    std::fill(au.begin(), au.end(), 0.0);
    for (int i = 0; i < p.num_blocks(); ++i) {
      const double* ui = u.data() + offsets[i];
      for (const Triplet& t : p.blocks[i].coupling) au[t.row] += t.value * ui[t.col];
    }
    std::fill(atau.begin(), atau.end(), 0.0);
    for (int i = 0; i < p.num_blocks(); ++i) {
      double* vi = atau.data() + offsets[i];
      for (const Triplet& t : p.blocks[i].coupling) vi[t.col] += t.value * au[t.row];
    }
    const double next = norm2(atau);
    if (next <= 0.0) return 0.0;
    const double rel = std::abs(next - sigma_sq) / std::max(next, 1e-30);
    sigma_sq = next;
    for (int k = 0; k < n; ++k) u[k] = atau[k] / next;
    if (it > 0 && rel < 1e-6) break;
  }
  return sigma_sq;
}

namespace {

double projected_grad_norm(std::span<const double> lambda, std::span<const double> grad) {
  double s = 0.0;
  for (size_t j = 0; j < lambda.size(); ++j) {
    const double moved = std::max(lambda[j] + grad[j], 0.0);
    s += (lambda[j] - moved) * (lambda[j] - moved);
  }
  return std::sqrt(s);
}

double resolve_tol(const Problem& p, const OptimizerConfig& cfg) {
  if (cfg.tol_grad > 0.0) return cfg.tol_grad;
  return 1e-8 * (1.0 + norm2(p.budget));
}

// Coordinates allowed to move along the projected path at lambda + eta d.
double path_derivative(std::span<const double> lambda, std::span<const double> d,
                       std::span<const double> grad, double eta) {
  double s = 0.0;
  for (size_t j = 0; j < lambda.size(); ++j) {
    const double pos = lambda[j] + eta * d[j];
    if (pos > 0.0 || (pos == 0.0 && d[j] > 0.0)) s += grad[j] * d[j];
  }
  return s;
}

struct LbfgsPair {
  std::vector<double> s;
  std::vector<double> y;  // minimization convention: y = -(grad_new - grad_old)
};

// Two-loop recursion restricted to the free set; returns an ascent direction
// for g (zero on the active set). Falls back to the projected gradient when
// no curvature pair is usable.
std::vector<double> lbfgs_direction(std::span<const double> grad,
                                    const std::deque<LbfgsPair>& pairs,
                                    const std::vector<bool>& free_set, bool& used_memory) {
  const size_t m = grad.size();
  auto masked_dot = [&](std::span<const double> a, std::span<const double> b) {
    double s = 0.0;
    for (size_t j = 0; j < m; ++j) {
      if (free_set[j]) s += a[j] * b[j];
    }
    return s;
  };

  std::vector<double> q(m, 0.0);
  for (size_t j = 0; j < m; ++j) {
    if (free_set[j]) q[j] = -grad[j];
  }

  std::vector<double> alpha(pairs.size(), 0.0);
  std::vector<double> rho(pairs.size(), 0.0);
  std::vector<bool> usable(pairs.size(), false);
  used_memory = false;
  for (int i = static_cast<int>(pairs.size()) - 1; i >= 0; --i) {
    const double sy = masked_dot(pairs[i].s, pairs[i].y);
    if (sy <= 1e-12) continue;
    usable[i] = true;
    used_memory = true;
    rho[i] = 1.0 / sy;
    alpha[i] = rho[i] * masked_dot(pairs[i].s, q);
    for (size_t j = 0; j < m; ++j) {
      if (free_set[j]) q[j] -= alpha[i] * pairs[i].y[j];
    }
  }
  if (!used_memory) {
    for (size_t j = 0; j < m; ++j) q[j] = free_set[j] ? grad[j] : 0.0;
    return q;
  }
  // H0 scaling from the newest usable pair.
  for (int i = static_cast<int>(pairs.size()) - 1; i >= 0; --i) {
    if (!usable[i]) continue;
    const double yy = masked_dot(pairs[i].y, pairs[i].y);
    if (yy > 0.0) {
      const double scale = masked_dot(pairs[i].s, pairs[i].y) / yy;
      for (size_t j = 0; j < m; ++j) q[j] *= scale;
    }
    break;
  }
  for (size_t i = 0; i < pairs.size(); ++i) {
    if (!usable[i]) continue;
    const double beta = rho[i] * masked_dot(pairs[i].y, q);
    for (size_t j = 0; j < m; ++j) {
      if (free_set[j]) q[j] += (alpha[i] - beta) * pairs[i].s[j];
    }
  }
  // q approximates H^{-1} (-grad) for f = -g; negate for ascent on g.
  for (size_t j = 0; j < m; ++j) q[j] = free_set[j] ? -q[j] : 0.0;
  return q;
}

class WallTimer {
 public:
  WallTimer() : start_(std::chrono::steady_clock::now()) {}
  double ms() const {
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start_)
        .count();
  }

 private:
  std::chrono::steady_clock::time_point start_;
};

OptimizerResult run_line_search_method(const Problem& p, double gamma,
                                       std::span<const double> lambda0,
                                       const OptimizerConfig& cfg,
                                       const IterationObserver& observer) {
  const double tol = resolve_tol(p, cfg);
  const DualEvalOptions eval_opts{cfg.threads, false};
  WallTimer timer;

  OptimizerResult result;
  std::vector<double> lambda(lambda0.begin(), lambda0.end());
  for (double& v : lambda) v = std::max(v, 0.0);

  DualEvaluation eval = eval_dual(p, lambda, gamma, eval_opts);
  result.evals = 1;

  IterateHistory history(std::max(cfg.history, 2));
  history.push(lambda, eval.grad);

  std::deque<LbfgsPair> pairs;

  auto record = [&](int iter, double step) {
    IterationRecord rec;
    rec.iter = iter;
    rec.g = eval.g;
    rec.grad_norm = projected_grad_norm(lambda, eval.grad);
    rec.step = step;
    rec.evals = result.evals;
    rec.wall_ms = timer.ms();
    rec.stats = eval.stats;
    result.trace.push_back(rec);
    if (observer) observer(rec, lambda);
  };
  record(0, 0.0);

  for (int t = 1; t <= cfg.max_iters; ++t) {
    const double pg = projected_grad_norm(lambda, eval.grad);
    if (pg <= tol) {
      result.converged = true;
      break;
    }
    if (eval.g > cfg.stop_above) {
      result.hit_stop_above = true;
      break;
    }

    std::vector<double> direction;
    bool used_memory = false;
    if (cfg.method == OptimMethod::kLbfgsb) {
      std::vector<bool> free_set(lambda.size());
      for (size_t j = 0; j < lambda.size(); ++j) {
        free_set[j] = lambda[j] > 0.0 || eval.grad[j] > 0.0;
      }
      std::deque<LbfgsPair> window = pairs;
      while (static_cast<int>(window.size()) > cfg.lbfgs_memory) window.pop_front();
      direction = lbfgs_direction(eval.grad, window, free_set, used_memory);
      if (path_derivative(lambda, direction, eval.grad, 0.0) <= 0.0) {
        // Quasi-Newton direction unusable; retreat to the projected gradient.
        for (size_t j = 0; j < lambda.size(); ++j) {
          direction[j] = free_set[j] ? eval.grad[j] : 0.0;
        }
        used_memory = false;
      }
    } else {
      direction.assign(eval.grad.begin(), eval.grad.end());
    }

    const double dphi0 = path_derivative(lambda, direction, eval.grad, 0.0);
    if (dphi0 <= 0.0) {
      result.converged = true;  // stationary along every admissible direction
      break;
    }

    double eta0;
    if (used_memory) {
      eta0 = std::min(1.0, cfg.eta_max);
    } else {
      std::optional<double> lipschitz;
      if (t > cfg.history && history.size() >= 2) lipschitz = estimate_L(history);
      eta0 = initial_step(t, cfg, lipschitz);
    }

    // phi(eta) caches its last evaluation so the accepted step reuses it.
    double cached_eta = -1.0;
    DualEvaluation cached_eval;
    std::vector<double> cached_lambda;
    auto phi = [&](double eta) {
      cached_lambda = pga_step(lambda, direction, eta);
      cached_eval = eval_dual(p, cached_lambda, gamma, eval_opts);
      ++result.evals;
      cached_eta = eta;
      const double deriv = path_derivative(lambda, direction, cached_eval.grad, eta);
      return std::pair<double, double>(cached_eval.g, deriv);
    };

    const LineSearchResult ls =
        weak_wolfe_bisection(phi, eval.g, dphi0, eta0, cfg.wolfe_c1, cfg.wolfe_c2,
                             cfg.max_bisections);
    if (ls.no_improvement) {
      result.converged = true;
      result.line_search_warning = true;
      break;
    }

    std::vector<double> next_lambda;
    DualEvaluation next_eval;
    if (cached_eta == ls.eta) {
      next_lambda = std::move(cached_lambda);
      next_eval = std::move(cached_eval);
    } else {
      next_lambda = pga_step(lambda, direction, ls.eta);
      next_eval = eval_dual(p, next_lambda, gamma, eval_opts);
      ++result.evals;
    }

    if (cfg.method == OptimMethod::kLbfgsb) {
      LbfgsPair pair;
      pair.s.resize(lambda.size());
      pair.y.resize(lambda.size());
      for (size_t j = 0; j < lambda.size(); ++j) {
        pair.s[j] = next_lambda[j] - lambda[j];
        pair.y[j] = -(next_eval.grad[j] - eval.grad[j]);
      }
      pairs.push_back(std::move(pair));
      while (static_cast<int>(pairs.size()) > std::max(cfg.lbfgs_memory, 1)) pairs.pop_front();
    }

    lambda = std::move(next_lambda);
    eval = std::move(next_eval);
    history.push(lambda, eval.grad);
    record(t, ls.eta);
  }

  result.lambda = std::move(lambda);
  result.g = eval.g;
  return result;
}

OptimizerResult run_agd(const Problem& p, double gamma, std::span<const double> lambda0,
                        const OptimizerConfig& cfg, const IterationObserver& observer) {
  const double tol = resolve_tol(p, cfg);
  const DualEvalOptions eval_opts{cfg.threads, false};
  WallTimer timer;

  const double sigma_sq = power_iteration_sigma_sq(p);
  const double lipschitz = sigma_sq / gamma;
  const double base_step = lipschitz > 0.0 ? 1.0 / lipschitz : cfg.eta_max;

  OptimizerResult result;
  std::vector<double> y(lambda0.begin(), lambda0.end());
  for (double& v : y) v = std::max(v, 0.0);
  std::vector<double> prev = y;

  IterateHistory history(std::max(cfg.history, 2));
  double best_g = -kInf;
  std::vector<double> best_lambda = y;

  for (int t = 1; t <= cfg.max_iters; ++t) {
    DualEvaluation eval = eval_dual(p, y, gamma, eval_opts);
    ++result.evals;
    history.push(y, eval.grad);
    if (eval.g > best_g) {
      best_g = eval.g;
      best_lambda = y;
    }

    const double pg = projected_grad_norm(y, eval.grad);
    IterationRecord rec;
    rec.iter = t - 1;
    rec.g = eval.g;
    rec.grad_norm = pg;
    rec.evals = result.evals;
    rec.wall_ms = timer.ms();
    rec.stats = eval.stats;

    if (pg <= tol) {
      rec.step = 0.0;
      result.trace.push_back(rec);
      if (observer) observer(rec, y);
      result.converged = true;
      break;
    }
    if (eval.g > cfg.stop_above) {
      rec.step = 0.0;
      result.trace.push_back(rec);
      if (observer) observer(rec, y);
      result.hit_stop_above = true;
      break;
    }

    double step = base_step;
    if (cfg.adaptive_agd && t > cfg.history && history.size() >= 2) {
      const double lt = estimate_L(history);
      if (lt > 0.0) step = std::min(1.0 / lt, cfg.eta_max);
    }
    rec.step = step;
    result.trace.push_back(rec);
    if (observer) observer(rec, y);

    std::vector<double> next = pga_step(y, eval.grad, step);
    const double momentum = static_cast<double>(t - 1) / static_cast<double>(t + 2);
    for (size_t j = 0; j < y.size(); ++j) {
      y[j] = std::max(next[j] + momentum * (next[j] - prev[j]), 0.0);
    }
    prev = std::move(next);
  }

  result.lambda = std::move(best_lambda);
  result.g = best_g;
  return result;
}

}  // namespace

OptimizerResult maximize_dual(const Problem& p, double gamma, std::span<const double> lambda0,
                              const OptimizerConfig& cfg, const IterationObserver& observer) {
  if (!(gamma > 0.0)) throw Error(ErrorCode::kInvalidGamma, "gamma must be positive");
  if (static_cast<int>(lambda0.size()) != p.num_rows) {
    throw Error(ErrorCode::kDimensionMismatch, "lambda0 length does not match row count");
  }
  if (!(cfg.wolfe_c1 > 0.0 && cfg.wolfe_c1 < cfg.wolfe_c2 && cfg.wolfe_c2 < 1.0)) {
    throw Error(ErrorCode::kInvalidSpec, "need 0 < c1 < c2 < 1");
  }
  if (cfg.eta_min > cfg.eta_max || cfg.history < 1 || cfg.lbfgs_memory < 0) {
    throw Error(ErrorCode::kInvalidSpec, "bad step or history configuration");
  }
  if (cfg.method == OptimMethod::kAgd) return run_agd(p, gamma, lambda0, cfg, observer);
  return run_line_search_method(p, gamma, lambda0, cfg, observer);
}

}  // namespace dualproj
