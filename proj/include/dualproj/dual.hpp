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

#ifndef DUALPROJ_DUAL_HPP
#define DUALPROJ_DUAL_HPP

#include <span>
#include <vector>

#include "dualproj/problem.hpp"
#include "dualproj/projection.hpp"

namespace dualproj {

struct CorralStats {
  double mean_dim = 0.0;          // mu = sum mu_i / I
  long vertex_blocks = 0;         // number of blocks with mu_i = 0
  long total_blocks = 0;
  std::vector<long> histogram;    // histogram[d] = #blocks with mu_i = d

  double vertex_fraction() const {
    return total_blocks > 0 ? static_cast<double>(vertex_blocks) / total_blocks : 0.0;
  }
};

CorralStats corral_stats(std::span<const int> corral_dims);
CorralStats corral_stats(const std::vector<ProjectionResult>& results);

/// x_i* = Pi_{C_i}[-(A_i^T lambda + c_i) / gamma].
ProjectionResult block_argmin(const Block& block, std::span<const double> lambda, double gamma);

struct DualEvalOptions {
  int threads = 1;
  bool retain_x = false;
};

struct DualEvaluation {
  double g = 0.0;               // g_gamma(lambda)
  std::vector<double> grad;     // A x* - b
  CorralStats stats;
  bool has_x = false;
  PrimalPoint x_star;           // filled when retain_x
};

/// Smoothed dual value, gradient and corral statistics. Deterministic
/// block-order reduction regardless of thread count.
DualEvaluation eval_dual(const Problem& p, std::span<const double> lambda, double gamma,
                         const DualEvalOptions& opts = {});

struct G0Evaluation {
  double value = 0.0;
  PrimalPoint x_bar;  // per-block linear minimizer
};

/// Unsmoothed dual g_0(lambda) via the per-block linear-minimization
/// oracles; the -lambda^T b term enters once.
G0Evaluation eval_g0(const Problem& p, std::span<const double> lambda);

}  // namespace dualproj

#endif  // DUALPROJ_DUAL_HPP
