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

#include "dualproj/wolfe.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "dualproj/error.hpp"

namespace dualproj {

VertexId BoxCutVertexOracle::nearest_vertex(std::span<const double> xhat) const {
  // ||v - xhat||^2 = delta + ||xhat||^2 - 2 xhat^T v, so the nearest vertex
  // maximizes xhat^T v.
  return boxcut_vertex_oracle(xhat, delta_);
}

VertexId BoxCutVertexOracle::linmin(std::span<const double> eta) const {
  std::vector<double> neg(eta.begin(), eta.end());
  for (double& s : neg) s = -s;
  return boxcut_vertex_oracle(neg, delta_);
}

void BoxCutVertexOracle::materialize(const VertexId& id, std::span<double> out) const {
  std::fill(out.begin(), out.end(), 0.0);
  for (int k : id.ones) out[k] = 1.0;
}

VertexId ParityVertexOracleSurface::nearest_vertex(std::span<const double> xhat) const {
  return parity_nearest_vertex(xhat);
}

VertexId ParityVertexOracleSurface::linmin(std::span<const double> eta) const {
  std::vector<double> neg(eta.begin(), eta.end());
  for (double& s : neg) s = -s;
  return parity_vertex_oracle(neg);
}

void ParityVertexOracleSurface::materialize(const VertexId& id, std::span<double> out) const {
  std::fill(out.begin(), out.end(), 0.0);
  for (int k : id.ones) out[k] = 1.0;
}

VertexId GeneralVertexOracle::nearest_vertex(std::span<const double> xhat) const {
  int best = 0;
  double best_dist = 0.0;
  for (size_t r = 0; r < vertices_->size(); ++r) {
    const std::vector<double>& v = (*vertices_)[r];
    double dist = 0.0;
    for (size_t k = 0; k < v.size(); ++k) dist += (v[k] - xhat[k]) * (v[k] - xhat[k]);
    if (r == 0 || dist < best_dist) {
      best_dist = dist;
      best = static_cast<int>(r);
    }
  }
  VertexId id;
  id.list_index = best;
  return id;
}

VertexId GeneralVertexOracle::linmin(std::span<const double> eta) const {
  int best = 0;
  double best_value = 0.0;
  for (size_t r = 0; r < vertices_->size(); ++r) {
    const double value = detail::dot(eta, (*vertices_)[r]);
    if (r == 0 || value < best_value) {
      best_value = value;
      best = static_cast<int>(r);
    }
  }
  VertexId id;
  id.list_index = best;
  return id;
}

void GeneralVertexOracle::materialize(const VertexId& id, std::span<double> out) const {
  const std::vector<double>& v = (*vertices_)[static_cast<size_t>(id.list_index)];
  std::copy(v.begin(), v.end(), out.begin());
}

namespace {

// Gaussian elimination with partial pivoting. Returns false on a pivot
// smaller than tol relative to the matrix scale.
bool solve_dense(std::vector<double> m, std::vector<double> rhs, int n,
                 std::vector<double>& out) {
  double scale = 0.0;
  for (double v : m) scale = std::max(scale, std::abs(v));
  const double tol = 1e-13 * std::max(scale, 1.0);

  std::vector<int> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  for (int c = 0; c < n; ++c) {
    int pivot = c;
    for (int r = c + 1; r < n; ++r) {
      if (std::abs(m[r * n + c]) > std::abs(m[pivot * n + c])) pivot = r;
    }
    if (std::abs(m[pivot * n + c]) < tol) return false;
    if (pivot != c) {
      for (int j = 0; j < n; ++j) std::swap(m[c * n + j], m[pivot * n + j]);
      std::swap(rhs[c], rhs[pivot]);
    }
    for (int r = c + 1; r < n; ++r) {
      const double f = m[r * n + c] / m[c * n + c];
      if (f == 0.0) continue;
      for (int j = c; j < n; ++j) m[r * n + j] -= f * m[c * n + j];
      rhs[r] -= f * rhs[c];
    }
  }
  out.assign(n, 0.0);
  for (int r = n - 1; r >= 0; --r) {
    double v = rhs[r];
    for (int j = r + 1; j < n; ++j) v -= m[r * n + j] * out[j];
    out[r] = v / m[r * n + r];
  }
  return true;
}

}  // namespace

AffineMinimizer affine_minimizer(const std::vector<std::vector<double>>& vertices,
                                 std::span<const double> xhat) {
  const int s = static_cast<int>(vertices.size());
  if (s == 0) throw Error(ErrorCode::kEmptyInput, "affine minimizer needs at least one vertex");
  const int dim = static_cast<int>(xhat.size());

  if (s == 1) {
    AffineMinimizer am;
    am.point = vertices[0];
    am.coefficients = {1.0};
    return am;
  }

  // Bordered Gram system: [G 1; 1^T 0] [alpha; nu] = [V^T xhat; 1].
  const int n = s + 1;
  std::vector<double> m(static_cast<size_t>(n) * n, 0.0);
  std::vector<double> rhs(n, 0.0);
  for (int a = 0; a < s; ++a) {
    for (int b = a; b < s; ++b) {
      const double g = detail::dot(vertices[a], vertices[b]);
      m[a * n + b] = g;
      m[b * n + a] = g;
    }
    m[a * n + s] = 1.0;
    m[s * n + a] = 1.0;
    rhs[a] = detail::dot(vertices[a], xhat);
  }
  rhs[s] = 1.0;

  std::vector<double> sol;
  if (!solve_dense(m, rhs, n, sol)) {
    // Ridge fallback; flag a degenerate corral only if the original system
    // is not actually satisfied.
    std::vector<double> ridged = m;
    for (int a = 0; a < s; ++a) ridged[a * n + a] += 1e-12;
    if (!solve_dense(ridged, rhs, n, sol)) {
      throw Error(ErrorCode::kDegenerateCorral, "singular affine system");
    }
    double max_resid = 0.0;
    for (int r = 0; r < n; ++r) {
      double v = -rhs[r];
      for (int j = 0; j < n; ++j) v += m[r * n + j] * sol[j];
      max_resid = std::max(max_resid, std::abs(v));
    }
    if (max_resid > 1e-8) {
      throw Error(ErrorCode::kDegenerateCorral, "affine system residual " +
                                                    std::to_string(max_resid));
    }
  }

  AffineMinimizer am;
  am.coefficients.assign(sol.begin(), sol.begin() + s);
  am.point.assign(dim, 0.0);
  for (int a = 0; a < s; ++a) {
    for (int k = 0; k < dim; ++k) am.point[k] += am.coefficients[a] * vertices[a][k];
  }
  return am;
}

OptimalityCheck optimality_check(std::span<const double> x, std::span<const double> xhat,
                                 const VertexOracle& oracle, double eps_opt) {
  const int dim = static_cast<int>(x.size());
  std::vector<double> eta(dim);
  double dist_sq = 0.0;
  for (int k = 0; k < dim; ++k) {
    eta[k] = x[k] - xhat[k];
    dist_sq += eta[k] * eta[k];
  }
  OptimalityCheck check;
  check.violator = oracle.linmin(eta);

  std::vector<double> v(dim);
  oracle.materialize(check.violator, v);
  const double at_vertex = detail::dot(eta, v);
  const double at_x = detail::dot(eta, x);
  check.optimal = at_vertex >= at_x - eps_opt * (1.0 + dist_sq);
  return check;
}

MinorCycleState minor_cycle_step(std::span<const double> x, std::span<const double> weights,
                                 std::span<const double> y, std::span<const double> alpha,
                                 double eps_drop) {
  const int s = static_cast<int>(weights.size());
  double theta = 1.0;
  int theta_arg = -1;
  for (int r = 0; r < s; ++r) {
    if (alpha[r] < 0.0) {
      const double t = weights[r] / (weights[r] - alpha[r]);
      if (theta_arg < 0 || t < theta) {
        theta = t;
        theta_arg = r;
      }
    }
  }

  MinorCycleState state;
  state.x.resize(x.size());
  for (size_t k = 0; k < x.size(); ++k) state.x[k] = theta * y[k] + (1.0 - theta) * x[k];

  std::vector<double> blended(s);
  for (int r = 0; r < s; ++r) blended[r] = theta * alpha[r] + (1.0 - theta) * weights[r];
  if (theta_arg >= 0) blended[theta_arg] = 0.0;  // exact by construction of theta

  double kept_sum = 0.0;
  for (int r = 0; r < s; ++r) {
    if (blended[r] > eps_drop) {
      state.kept.push_back(r);
      state.weights.push_back(blended[r]);
      kept_sum += blended[r];
    }
  }
  if (kept_sum > 0.0) {
    for (double& w : state.weights) w /= kept_sum;
  }
  return state;
}

WolfeResult wolfe_project(const VertexOracle& oracle, std::span<const double> xhat,
                          const WolfeConfig& cfg) {
  const int dim = oracle.dim();
  const int max_major = cfg.max_major > 0 ? cfg.max_major : 10 * dim + 100;

  std::vector<VertexId> support;
  std::vector<std::vector<double>> vertices;
  std::vector<double> weights;

  support.push_back(oracle.nearest_vertex(xhat));
  vertices.emplace_back(dim);
  oracle.materialize(support[0], vertices[0]);
  weights.push_back(1.0);
  std::vector<double> x = vertices[0];

  WolfeResult result;
  int major = 0;
  while (true) {
    OptimalityCheck check = optimality_check(x, xhat, oracle, cfg.eps_opt);
    if (!check.optimal) {
      // A violator already in the corral means the violation is below
      // representable progress; accept the current point.
      if (std::find(support.begin(), support.end(), check.violator) != support.end()) {
        check.optimal = true;
      }
    }
    if (check.optimal) {
      result.status = WolfeStatus::kConverged;
      break;
    }
    if (major >= max_major) {
      result.status = WolfeStatus::kMaxIterations;
      break;
    }
    ++major;

    support.push_back(check.violator);
    vertices.emplace_back(dim);
    oracle.materialize(support.back(), vertices.back());
    weights.push_back(0.0);

    while (true) {
      const AffineMinimizer am = affine_minimizer(vertices, xhat);
      ++result.projection.affine_solves;
      const bool inside = std::all_of(am.coefficients.begin(), am.coefficients.end(),
                                      [](double a) { return a >= 0.0; });
      if (inside) {
        x = am.point;
        weights = am.coefficients;
        break;
      }
      ++result.projection.minor_iters;
      MinorCycleState state = minor_cycle_step(x, weights, am.point, am.coefficients,
                                               cfg.eps_drop);
      x = std::move(state.x);
      weights = std::move(state.weights);
      std::vector<VertexId> kept_support;
      std::vector<std::vector<double>> kept_vertices;
      kept_support.reserve(state.kept.size());
      kept_vertices.reserve(state.kept.size());
      for (int r : state.kept) {
        kept_support.push_back(std::move(support[r]));
        kept_vertices.push_back(std::move(vertices[r]));
      }
      support = std::move(kept_support);
      vertices = std::move(kept_vertices);
    }

    // Drop exact zeros that survived the affine solve.
    for (int r = static_cast<int>(weights.size()) - 1; r >= 0; --r) {
      if (weights[r] <= cfg.eps_drop) {
        weights.erase(weights.begin() + r);
        support.erase(support.begin() + r);
        vertices.erase(vertices.begin() + r);
      }
    }
    double total = 0.0;
    for (double w : weights) total += w;
    if (total > 0.0) {
      for (double& w : weights) w /= total;
    }
  }

  result.projection.x = std::move(x);
  result.projection.support = std::move(support);
  result.projection.weights = std::move(weights);
  result.projection.corral_dim = static_cast<int>(result.projection.support.size()) - 1;
  result.projection.major_iters = major;
  return result;
}

}  // namespace dualproj
