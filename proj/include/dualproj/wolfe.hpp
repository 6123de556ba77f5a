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

#ifndef DUALPROJ_WOLFE_HPP
#define DUALPROJ_WOLFE_HPP

#include <span>
#include <vector>

#include "dualproj/projection.hpp"

namespace dualproj {

/// Linear-minimization surface over a vertex set. `linmin` receives
/// eta = x - xhat and must return a vertex attaining min eta^T v.
class VertexOracle {
 public:
  virtual ~VertexOracle() = default;
  virtual int dim() const = 0;
  virtual VertexId nearest_vertex(std::span<const double> xhat) const = 0;
  virtual VertexId linmin(std::span<const double> eta) const = 0;
  virtual void materialize(const VertexId& id, std::span<double> out) const = 0;
};

class BoxCutVertexOracle final : public VertexOracle {
 public:
  BoxCutVertexOracle(int dim, int delta) : dim_(dim), delta_(delta) {}
  int dim() const override { return dim_; }
  VertexId nearest_vertex(std::span<const double> xhat) const override;
  VertexId linmin(std::span<const double> eta) const override;
  void materialize(const VertexId& id, std::span<double> out) const override;

 private:
  int dim_;
  int delta_;
};

class ParityVertexOracleSurface final : public VertexOracle {
 public:
  explicit ParityVertexOracleSurface(int dim) : dim_(dim) {}
  int dim() const override { return dim_; }
  VertexId nearest_vertex(std::span<const double> xhat) const override;
  VertexId linmin(std::span<const double> eta) const override;
  void materialize(const VertexId& id, std::span<double> out) const override;

 private:
  int dim_;
};

/// Explicit vertex list; scans linearly, ties toward the smaller index.
class GeneralVertexOracle final : public VertexOracle {
 public:
  explicit GeneralVertexOracle(const std::vector<std::vector<double>>* vertices)
      : vertices_(vertices) {}
  int dim() const override { return static_cast<int>((*vertices_)[0].size()); }
  VertexId nearest_vertex(std::span<const double> xhat) const override;
  VertexId linmin(std::span<const double> eta) const override;
  void materialize(const VertexId& id, std::span<double> out) const override;

 private:
  const std::vector<std::vector<double>>* vertices_;
};

struct WolfeConfig {
  int max_major = 0;          // 0 -> 10*K + 100
  double eps_opt = 1e-10;     // relative optimality slack
  double eps_drop = 1e-12;    // weight deletion threshold
};

struct OptimalityCheck {
  bool optimal = false;
  VertexId violator;  // meaningful when !optimal
};

/// Stopping test (min_v (x-xhat)^T v >= (x-xhat)^T x, relative slack).
OptimalityCheck optimality_check(std::span<const double> x, std::span<const double> xhat,
                                 const VertexOracle& oracle, double eps_opt = 1e-10);

struct AffineMinimizer {
  std::vector<double> point;         // projection of xhat onto aff(S)
  std::vector<double> coefficients;  // affine coefficients, sum to 1
};

/// Solve min ||sum_r alpha_r v_r - xhat||^2 over sum alpha = 1 via the
/// bordered Gram system; ridge fallback on singularity.
AffineMinimizer affine_minimizer(const std::vector<std::vector<double>>& vertices,
                                 std::span<const double> xhat);

struct MinorCycleState {
  std::vector<double> x;
  std::vector<double> weights;
  std::vector<int> kept;  // indices surviving the deletion, ascending
};

/// One boundary step of the minor cycle: theta = min rho/(rho - alpha) over
/// alpha < 0, blend, and delete weights below eps_drop.
MinorCycleState minor_cycle_step(std::span<const double> x, std::span<const double> weights,
                                 std::span<const double> y, std::span<const double> alpha,
                                 double eps_drop = 1e-12);

enum class WolfeStatus { kConverged, kMaxIterations };

struct WolfeResult {
  ProjectionResult projection;
  WolfeStatus status = WolfeStatus::kConverged;
};

/// Minimum-norm-point projection of xhat onto the oracle's hull,
/// initialized at the nearest vertex. A vertex that passes the first
/// optimality check is returned without any affine solve.
WolfeResult wolfe_project(const VertexOracle& oracle, std::span<const double> xhat,
                          const WolfeConfig& cfg = {});

}  // namespace dualproj

#endif  // DUALPROJ_WOLFE_HPP
