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

#ifndef DUALPROJ_DIAGNOSTICS_HPP
#define DUALPROJ_DIAGNOSTICS_HPP

#include <optional>
#include <span>
#include <vector>

#include "dualproj/optimizers.hpp"
#include "dualproj/problem.hpp"

namespace dualproj {

/// Sum over blocks of max_{x_i in C_i} (c_i^T x_i + (gamma/2) x_i^T x_i),
/// each block maximized exactly over its vertices. Any dual value above this
/// proves primal infeasibility.
double infeasibility_bound(const Problem& p, double gamma);

enum class InfeasibilityStatus { kProvenInfeasible, kSuspectedInfeasible, kNoEvidence };

const char* infeasibility_status_name(InfeasibilityStatus status);

struct InfeasibilityVerdict {
  InfeasibilityStatus status = InfeasibilityStatus::kNoEvidence;
  double bound = 0.0;
  double max_g_seen = 0.0;
  std::optional<double> relaxed_reference;
};

struct InfeasibilityConfig {
  double suspect_factor = 2.0;
};

/// Classify a dual trace against the proof bound and, when supplied, the
/// relaxed-problem reference G.
InfeasibilityVerdict check_infeasible(std::span<const double> g_trace, double bound,
                                      std::optional<double> relaxed_reference = {},
                                      const InfeasibilityConfig& cfg = {});

/// Eq blocks relaxed to their Iq counterparts; other blocks pass through.
Problem relax_to_iq(const Problem& p);

/// Maximum dual value G of the Eq->Iq relaxation.
double relaxation_reference(const Problem& p, double gamma, const OptimizerConfig& cfg);

/// Uniform shrink repair for nonnegative-(A, b) problems whose blocks are
/// closed under componentwise shrinkage (Box, SimplexIq, BoxCutIq).
PrimalPoint repair_to_feasible(const Problem& p, const PrimalPoint& x);

/// c^T x plus the sum of positive coupling violations.
double penalized_objective(const Problem& p, const PrimalPoint& x);

struct GapReport {
  double gap = 0.0;     // c^T x_tilde - g0(lambda)
  double primal = 0.0;  // c^T x_tilde
  double dual = 0.0;    // g0(lambda)
};

/// Requires x_tilde feasible at 1e-9; throws InfeasibleCandidate otherwise.
GapReport weak_duality_gap(const Problem& p, const PrimalPoint& x_tilde,
                           std::span<const double> lambda);

struct GreedyResult {
  PrimalPoint x;
  double objective = 0.0;
};

/// Block-by-block greedy allocation under the running budget.
GreedyResult greedy_baseline(const Problem& p);

}  // namespace dualproj

#endif  // DUALPROJ_DIAGNOSTICS_HPP
