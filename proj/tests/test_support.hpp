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

#ifndef DUALPROJ_TESTS_TEST_SUPPORT_HPP
#define DUALPROJ_TESTS_TEST_SUPPORT_HPP

#include <algorithm>
#include <cmath>
#include <random>
#include <span>
#include <vector>

#include "dualproj/problem.hpp"

namespace dualproj::testing {

class TestRng {
 public:
  explicit TestRng(uint64_t seed) : engine_(seed) {}

  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  int uniform_int(int lo, int hi) {  // inclusive bounds
    return lo + static_cast<int>(engine_() % static_cast<uint64_t>(hi - lo + 1));
  }
  std::vector<double> vector(int n, double lo, double hi) {
    std::vector<double> v(n);
    for (double& x : v) x = uniform(lo, hi);
    return v;
  }

 private:
  std::mt19937_64 engine_;
};

inline double dist2(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (size_t i = 0; i < a.size(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
  return std::sqrt(s);
}

inline double norm2(std::span<const double> a) {
  double s = 0.0;
  for (double v : a) s += v * v;
  return std::sqrt(s);
}

/// Random feasible-by-construction problem over simplex/box-cut/box blocks:
/// budgets sit between a guaranteed feasible allocation and the unconstrained
/// optimum, mirroring the production generator but with independent code.
inline Problem random_small_problem(TestRng& rng, int num_blocks, int block_dim, int num_rows,
                                    bool simplex_only = false, double tightness = 0.5) {
  Problem p;
  p.num_rows = num_rows;
  std::vector<double> anchor_row(num_rows, 0.0);
  std::vector<double> greedy_row(num_rows, 0.0);

  for (int i = 0; i < num_blocks; ++i) {
    Block b;
    b.id = i;
    b.dim = block_dim;
    const int pick = simplex_only ? 0 : rng.uniform_int(0, 2);
    if (pick == 0) {
      b.spec = PolytopeSpec::simplex_eq();
    } else if (pick == 1 && block_dim >= 3) {
      b.spec = PolytopeSpec::boxcut_iq(2);
    } else {
      b.spec = PolytopeSpec::box();
    }
    b.cost = rng.vector(block_dim, -1.0, 0.0);
    for (int j = 0; j < num_rows; ++j) {
      for (int k = 0; k < block_dim; ++k) {
        if (rng.uniform() < 0.6) b.coupling.push_back({j, k, rng.uniform(0.0, 1.0)});
      }
    }
    b.sort_coupling();

    // Feasible anchor: simplex barycenter / small interior point.
    std::vector<double> anchor(block_dim, 0.0);
    std::vector<double> greedy(block_dim, 0.0);
    switch (b.spec.kind) {
      case PolytopeKind::kSimplexEq: {
        std::fill(anchor.begin(), anchor.end(), 1.0 / block_dim);
        int best = 0;
        for (int k = 1; k < block_dim; ++k) {
          if (b.cost[k] < b.cost[best]) best = k;
        }
        greedy[best] = 1.0;
        break;
      }
      case PolytopeKind::kBoxCutIq: {
        std::fill(anchor.begin(), anchor.end(), 1.0 / block_dim);
        std::vector<int> order(block_dim);
        for (int k = 0; k < block_dim; ++k) order[k] = k;
        std::sort(order.begin(), order.end(),
                  [&](int a, int c) { return b.cost[a] < b.cost[c]; });
        for (int t = 0; t < b.spec.delta; ++t) {
          if (b.cost[order[t]] < 0.0) greedy[order[t]] = 1.0;
        }
        break;
      }
      default: {
        std::fill(anchor.begin(), anchor.end(), 0.2);
        for (int k = 0; k < block_dim; ++k) {
          if (b.cost[k] < 0.0) greedy[k] = 1.0;
        }
        break;
      }
    }
    for (const Triplet& t : b.coupling) {
      anchor_row[t.row] += t.value * anchor[t.col];
      greedy_row[t.row] += t.value * greedy[t.col];
    }
    p.blocks.push_back(std::move(b));
  }

  p.budget.resize(num_rows);
  for (int j = 0; j < num_rows; ++j) {
    const double slack = std::max(0.0, greedy_row[j] - anchor_row[j]);
    p.budget[j] = anchor_row[j] + tightness * slack;
  }
  return p;
}

}  // namespace dualproj::testing

#endif  // DUALPROJ_TESTS_TEST_SUPPORT_HPP
