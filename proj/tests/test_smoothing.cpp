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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "dualproj/dual.hpp"
#include "dualproj/error.hpp"
#include "dualproj/reference.hpp"
#include "dualproj/smoothing.hpp"
#include "test_support.hpp"

using namespace dualproj;
using dualproj::testing::TestRng;

namespace {

// High-precision maximizer of g_gamma warm-started at lambda0; monotone
// ascent keeps g_gamma(result) >= g_gamma(lambda0).
std::vector<double> tight_dual_max(const Problem& p, double gamma,
                                   std::span<const double> lambda0) {
  OptimizerConfig cfg;
  cfg.method = OptimMethod::kLbfgsb;
  cfg.max_iters = 3000;
  cfg.tol_grad = 1e-11;
  return maximize_dual(p, gamma, lambda0, cfg).lambda;
}

}  // namespace

TEST_CASE("psi_tilde products") {
  CHECK(psi_tilde(3, 1.0) == doctest::Approx(1.5));
  CHECK(psi_tilde(1, 1.0) == doctest::Approx(0.5));
  CHECK(psi_tilde(4, 3.0) == doctest::Approx(6.0));
}

TEST_CASE("psi_gamma per-block maxima") {
  Problem p;
  p.num_rows = 1;
  p.budget = {1.0};
  Block b;
  b.id = 0;
  b.dim = 2;
  b.cost = {0.0, 0.0};
  b.spec = PolytopeSpec::simplex_eq();
  p.blocks = {b};

  CHECK(psi_gamma(p, PrimalPoint{{1.0, 0.0}}) == doctest::Approx(0.0));
  CHECK(psi_gamma(p, PrimalPoint{{0.5, 0.5}}) == doctest::Approx(0.25));
}

TEST_CASE("psi stays below the a-priori bound when most blocks are vertices") {
  TestRng rng(71);
  for (int trial = 0; trial < 60; ++trial) {
    const Problem p = testing::random_small_problem(rng, 10, 3, 2, /*simplex_only=*/true);
    const std::vector<double> lambda = rng.vector(p.num_rows, 0.0, 1.0);
    const DualEvaluation eval = eval_dual(p, lambda, 0.01, {1, true});
    const double psi = psi_gamma(p, eval.x_star);
    CHECK(psi >= -1e-9);
    if (eval.stats.vertex_blocks >= eval.stats.total_blocks - p.num_rows) {
      CHECK(psi <= psi_tilde(p.num_rows, delta_equivalent(p)) + 1e-9);
    }
  }
}

TEST_CASE("sufficient convergence criterion arithmetic") {
  CHECK(sufficient_convergence(0.0, 0.0, 0.5, 0.0, 0.1, 1.0));
  CHECK_FALSE(sufficient_convergence(0.06, 0.0, 1.0, 0.04, 0.1, 1.0));
  CHECK(sufficient_convergence(0.04, 0.0, 1.0, 0.04, 0.1, 1.0));
}

TEST_CASE("quality score ratios") {
  CHECK(quality_score(-10.0, -5.0, -10.0) == doctest::Approx(1.0));
  CHECK(quality_score(-5.0, -5.0, -10.0) == doctest::Approx(0.0));
  CHECK(quality_score(-9.0, -5.0, -10.0) == doctest::Approx(0.8));
  CHECK_THROWS_AS(quality_score(1.0, 2.0, 2.0), Error);
}

TEST_CASE("lemma-1 bound holds for coincident arguments") {
  TestRng rng(72);
  const Problem p = testing::random_small_problem(rng, 6, 3, 2);
  const std::vector<double> lambda = rng.vector(p.num_rows, 0.0, 1.0);
  const Lemma1Check check = check_lemma1(p, 0.5, lambda, lambda, lambda);
  CHECK(check.lhs == doctest::Approx(0.0));
  CHECK(check.gamma_psi >= -1e-12);
  CHECK(check.holds);
}

TEST_CASE("lemma-1 bound holds with reference-solver arguments") {
  TestRng rng(73);
  int trials = 0;
  for (int attempt = 0; attempt < 30 && trials < 20; ++attempt) {
    const Problem p = testing::random_small_problem(rng, 6, 3, 2, /*simplex_only=*/true);
    const LpSolution lp = reference_lp_solve(p);
    if (!lp.feasible) continue;
    ++trials;
    const double gamma = attempt % 2 == 0 ? 0.5 : 0.1;
    const std::vector<double> lambda_gamma = tight_dual_max(p, gamma, lp.duals);
    // Crude approximate solution: a short run from zero.
    OptimizerConfig rough;
    rough.max_iters = 5;
    const std::vector<double> zero(p.num_rows, 0.0);
    const std::vector<double> lambda_tilde = maximize_dual(p, gamma, zero, rough).lambda;

    const Lemma1Check check = check_lemma1(p, gamma, lp.duals, lambda_gamma, lambda_tilde);
    CHECK(check.holds);
    CHECK(check.smoothing_gap_holds);
  }
  CHECK(trials == 20);
}

TEST_CASE("lemma-1 gap shrinks as gamma shrinks") {
  TestRng rng(74);
  const Problem p = testing::random_small_problem(rng, 8, 3, 2, /*simplex_only=*/true);
  const LpSolution lp = reference_lp_solve(p);
  REQUIRE(lp.feasible);
  double previous_slack = 1e300;
  for (double gamma : {1.0, 0.1, 0.01}) {
    const std::vector<double> lambda_gamma = tight_dual_max(p, gamma, lp.duals);
    const Lemma1Check check = check_lemma1(p, gamma, lp.duals, lambda_gamma, lambda_gamma);
    const double slack = check.gamma_psi - check.smoothing_gap;
    CHECK(check.smoothing_gap_holds);
    CHECK(slack <= previous_slack + 1e-9);
    previous_slack = slack;
  }
}

TEST_CASE("stagewise gamma-1 formula") {
  // |g0(0)| = 10 and psi_tilde = 1.5 give gamma_1 = 1/3: engineered problem
  // with a single simplex block, m = 3, c = (-10, 0).
  Problem p;
  p.num_rows = 3;
  p.budget = {5.0, 5.0, 5.0};
  Block b;
  b.id = 0;
  b.dim = 2;
  b.cost = {-10.0, 0.0};
  b.spec = PolytopeSpec::simplex_eq();
  b.coupling = {{0, 0, 1.0}, {1, 0, 1.0}, {2, 0, 1.0}};
  b.sort_coupling();
  p.blocks = {b};

  StageConfig cfg;
  cfg.inner_iters = 5;
  const StagewiseResult run = stagewise_solve(p, cfg);
  REQUIRE_FALSE(run.stages.empty());
  CHECK(run.stages[0].gamma == doctest::Approx(1.0 / 3.0));
  CHECK(run.g0_zero == doctest::Approx(-10.0));
}

TEST_CASE("slack problem stays at lambda zero through every stage") {
  // Budgets far above anything reachable: the unconstrained optimum is
  // feasible and lambda never moves.
  TestRng rng(75);
  Problem p = testing::random_small_problem(rng, 5, 3, 2);
  for (double& bj : p.budget) bj += 100.0;

  StageConfig cfg;
  cfg.inner_iters = 10;
  const StagewiseResult run = stagewise_solve(p, cfg);
  CHECK_FALSE(run.stalled);
  for (double v : run.lambda) CHECK(v == 0.0);
  CHECK(run.stages.size() == 3);
  for (const StageRecord& s : run.stages) CHECK(s.converged);
}

TEST_CASE("gamma decreases across stages and the incumbent never degrades") {
  TestRng rng(76);
  for (int trial = 0; trial < 5; ++trial) {
    const Problem p = testing::random_small_problem(rng, 15, 4, 3);
    StageConfig cfg;
    cfg.inner_iters = 40;
    const StagewiseResult run = stagewise_solve(p, cfg);
    CHECK_FALSE(run.stalled);
    REQUIRE(run.stages.size() == 3);
    for (size_t t = 1; t < run.stages.size(); ++t) {
      CHECK(run.stages[t].gamma < run.stages[t - 1].gamma);
      CHECK(run.stages[t].g0_exit >=
            run.stages[t - 1].g0_exit - 1e-7 * (1.0 + std::abs(run.g0_zero)));
    }
  }
}

TEST_CASE("stagewise reaches high quality against a long reference run") {
  TestRng rng(77);
  const Problem p = testing::random_small_problem(rng, 40, 5, 3, /*simplex_only=*/true);

  StageConfig cfg;
  cfg.inner_iters = 60;
  const StagewiseResult run = stagewise_solve(p, cfg);
  CHECK_FALSE(run.stalled);

  // Reference: ten-fold budget.
  StageConfig big = cfg;
  big.inner_iters = 600;
  const StagewiseResult reference = stagewise_solve(p, big);
  const double g0_best = std::max(reference.g0_final, run.g0_final);
  if (std::abs(g0_best - run.g0_zero) > 1e-12) {
    CHECK(quality_score(run.g0_final, run.g0_zero, g0_best) > 0.999);
  }
}

TEST_CASE("stage trace is emitted through the observer") {
  TestRng rng(78);
  const Problem p = testing::random_small_problem(rng, 8, 3, 2);
  StageConfig cfg;
  cfg.inner_iters = 15;
  int rows = 0;
  int max_stage = 0;
  const StagewiseResult run = stagewise_solve(
      p, cfg, [&](int stage, double gamma, double eps, const IterationRecord&, auto) {
        ++rows;
        max_stage = std::max(max_stage, stage);
        CHECK(gamma > 0.0);
        CHECK(eps > 0.0);
      });
  CHECK(rows > 0);
  CHECK(max_stage == static_cast<int>(run.stages.size()));
}
