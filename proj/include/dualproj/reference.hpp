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
//
// Desk-scale exact reference solvers. These back the test oracles and the
// known-solution generators; they deliberately avoid the vertex-oriented
// projection path used by the production kernels.

#ifndef DUALPROJ_REFERENCE_HPP
#define DUALPROJ_REFERENCE_HPP

#include <span>
#include <vector>

#include "dualproj/problem.hpp"

namespace dualproj {

struct LpSolution {
  bool feasible = false;
  PrimalPoint x;
  double objective = 0.0;
  std::vector<double> duals;  // coupling-row duals, >= 0
};

/// Dense two-phase simplex on the block-expanded LP. General and Parity
/// blocks are expanded over their vertices via convex-multiplier variables.
/// Throws ScaleExceeded beyond desk scale.
LpSolution reference_lp_solve(const Problem& p);

/// Exact Euclidean projection by exhaustive active-set / face enumeration
/// (closed-form facet search for Parity). K <= 10.
std::vector<double> reference_qp_project(const PolytopeSpec& spec, std::span<const double> xhat);

}  // namespace dualproj

#endif  // DUALPROJ_REFERENCE_HPP
