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

#ifndef DUALPROJ_PROJECTION_HPP
#define DUALPROJ_PROJECTION_HPP

#include <span>
#include <vector>

#include "dualproj/problem.hpp"

namespace dualproj {

/// Compact identifier of a polytope vertex.
///
/// Interpretation follows the polytope kind:
///   Box / BoxCut / Parity : `ones` lists the coordinates equal to 1
///                           (ascending), all others are 0.
///   SimplexEq             : `ones` holds the single unit-coordinate index.
///   SimplexIq             : as SimplexEq, or empty for the origin.
///   General               : `list_index` points into the vertex list.
struct VertexId {
  std::vector<int> ones;
  int list_index = -1;

  bool operator==(const VertexId& other) const = default;
};

/// Materialize a vertex as a dense K-vector.
void materialize_vertex(const PolytopeSpec& spec, const VertexId& id, std::span<double> out);

struct ProjectionResult {
  std::vector<double> x;
  /// Corral vertices. May be empty for non-vertex Box results, where no
  /// vertex support is materialized (see corral_dim).
  std::vector<VertexId> support;
  /// Convex coefficients over `support`, strictly positive.
  std::vector<double> weights;
  /// Dimension of the minimal face containing x. For Box this is the
  /// count of coordinates strictly inside (0, 1).
  int corral_dim = 0;

  // Work counters, filled by the kernels that use them.
  int heap_pops = 0;
  int major_iters = 0;
  int minor_iters = 0;
  int affine_solves = 0;
};

/// Clamp to the unit box.
ProjectionResult project_box(std::span<const double> xhat);

/// Incremental next-best-vertex projection onto {x >= 0, sum x = 1}.
/// Extracts at most |support| + 1 heap elements.
ProjectionResult project_simplex_eq(std::span<const double> xhat);

/// Box projection if it lands below the cut, simplex-eq projection otherwise.
ProjectionResult project_simplex_iq(std::span<const double> xhat);

/// Top-delta coordinates of eta, ties toward the smaller index.
/// Expected O(K) via partial selection.
VertexId boxcut_vertex_oracle(std::span<const double> eta, int delta);

ProjectionResult project_boxcut_eq(std::span<const double> xhat, int delta);
ProjectionResult project_boxcut_iq(std::span<const double> xhat, int delta);

/// argmax eta^T v over binary vectors with an even number of ones.
/// Single linear scan.
VertexId parity_vertex_oracle(std::span<const double> eta);

/// Nearest even-parity vertex: oracle at eta = xhat - 0.5 e.
VertexId parity_nearest_vertex(std::span<const double> xhat);

ProjectionResult project_parity(std::span<const double> xhat);

ProjectionResult project_general(const std::vector<std::vector<double>>& vertices,
                                 std::span<const double> xhat);

/// Dispatch on the spec kind.
ProjectionResult project_polytope(const PolytopeSpec& spec, std::span<const double> xhat);

/// Vertex minimizing score^T v over the spec's polytope, plus the attained
/// value. Used for g_0 evaluation and greedy scans.
struct LinMinResult {
  VertexId vertex;
  double value = 0.0;
};
LinMinResult polytope_linmin(const PolytopeSpec& spec, std::span<const double> score, int dim);

}  // namespace dualproj

#endif  // DUALPROJ_PROJECTION_HPP
