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

#include "dualproj/error.hpp"
#include "dualproj/problem.hpp"
#include "test_support.hpp"

using namespace dualproj;
using dualproj::testing::TestRng;

namespace {

Problem two_block_problem() {
  Problem p;
  p.num_rows = 2;
  p.budget = {1.0, 1.0};
  Block b0;
  b0.id = 0;
  b0.dim = 2;
  b0.cost = {1.0, 2.0};
  b0.spec = PolytopeSpec::simplex_eq();
  b0.coupling = {{0, 0, 1.0}};
  b0.sort_coupling();
  Block b1;
  b1.id = 1;
  b1.dim = 2;
  b1.cost = {0.5, -0.5};
  b1.spec = PolytopeSpec::box();
  b1.coupling = {{1, 1, 2.0}};
  b1.sort_coupling();
  p.blocks = {b0, b1};
  return p;
}

}  // namespace

TEST_CASE("validate accepts a well-formed two-block problem") {
  const Problem p = two_block_problem();
  CHECK(validate_problem(p).ok());
}

TEST_CASE("validate flags delta at the block dimension") {
  Problem p = two_block_problem();
  p.blocks[0].dim = 3;
  p.blocks[0].cost = {1.0, 2.0, 3.0};
  p.blocks[0].spec = PolytopeSpec::boxcut_eq(3);
  const ValidationReport report = validate_problem(p);
  REQUIRE_FALSE(report.ok());
  bool found = false;
  for (const Violation& v : report.violations) {
    if (v.block_id == 0 && v.reason.find("delta out of range") != std::string::npos) found = true;
  }
  CHECK(found);
}

TEST_CASE("validate flags coupling columns beyond the block dimension") {
  Problem p = two_block_problem();
  p.blocks[1].coupling.push_back({0, 2, 1.0});  // dim is 2
  const ValidationReport report = validate_problem(p);
  REQUIRE_FALSE(report.ok());
  bool found = false;
  for (const Violation& v : report.violations) {
    if (v.block_id == 1 && v.reason.find("dimension mismatch") != std::string::npos) found = true;
  }
  CHECK(found);
}

TEST_CASE("validate flags an empty block list") {
  Problem p;
  p.num_rows = 0;
  CHECK_FALSE(validate_problem(p).ok());
}

TEST_CASE("residual on a scalar block") {
  Problem p;
  p.num_rows = 1;
  p.budget = {0.5};
  Block b;
  b.id = 0;
  b.dim = 1;
  b.cost = {-1.0};
  b.spec = PolytopeSpec::box();
  b.coupling = {{0, 0, 1.0}};
  p.blocks = {b};

  const std::vector<double> r = residual(p, PrimalPoint{{1.0}});
  REQUIRE(r.size() == 1);
  CHECK(r[0] == doctest::Approx(0.5).epsilon(1e-15));
}

TEST_CASE("residual of the zero point is minus the budget") {
  TestRng rng(7);
  const Problem p = testing::random_small_problem(rng, 6, 3, 3);
  const PrimalPoint zero{std::vector<double>(p.total_dim(), 0.0)};
  const std::vector<double> r = residual(p, zero);
  for (int j = 0; j < p.num_rows; ++j) CHECK(r[j] == -p.budget[j]);
}

TEST_CASE("residual matches a hand-accumulated two-block instance") {
  Problem p;
  p.num_rows = 2;
  p.budget = {1.0, 1.0};
  Block b0;
  b0.id = 0;
  b0.dim = 2;
  b0.cost = {0.0, 0.0};
  b0.spec = PolytopeSpec::box();
  b0.coupling = {{0, 0, 1.0}};  // A_1 = [1 0; 0 0]
  Block b1;
  b1.id = 1;
  b1.dim = 2;
  b1.cost = {0.0, 0.0};
  b1.spec = PolytopeSpec::box();
  b1.coupling = {{1, 1, 2.0}};  // A_2 = [0 0; 0 2]
  p.blocks = {b0, b1};

  const std::vector<double> r = residual(p, PrimalPoint{{1.0, 0.0, 0.0, 0.5}});
  CHECK(r[0] == doctest::Approx(0.0));
  CHECK(r[1] == doctest::Approx(0.0));

  // Dense oracle over the same data.
  TestRng rng(3);
  for (int trial = 0; trial < 50; ++trial) {
    const std::vector<double> x = rng.vector(4, -1.0, 1.0);
    const std::vector<double> got = residual(p, PrimalPoint{x});
    const double dense0 = 1.0 * x[0] - p.budget[0];
    const double dense1 = 2.0 * x[3] - p.budget[1];
    CHECK(got[0] == doctest::Approx(dense0).epsilon(1e-14));
    CHECK(got[1] == doctest::Approx(dense1).epsilon(1e-14));
  }
}

TEST_CASE("residual rejects dimension mismatches") {
  const Problem p = two_block_problem();
  CHECK_THROWS_AS(residual(p, PrimalPoint{{1.0, 2.0}}), Error);
}

TEST_CASE("objective examples") {
  Problem p;
  p.num_rows = 0;
  Block b;
  b.id = 0;
  b.dim = 1;
  b.cost = {-1.0};
  b.spec = PolytopeSpec::box();
  p.blocks = {b};
  CHECK(objective(p, PrimalPoint{{1.0}}, 1.0) == doctest::Approx(-0.5));
  CHECK(objective(p, PrimalPoint{{0.0}}, 3.0) == 0.0);

  Problem q;
  q.num_rows = 0;
  Block c;
  c.id = 0;
  c.dim = 2;
  c.cost = {1.0, 2.0};
  c.spec = PolytopeSpec::box();
  q.blocks = {c};
  CHECK(objective(q, PrimalPoint{{0.5, 0.5}}, 0.2) == doctest::Approx(1.55).epsilon(1e-14));
}

TEST_CASE("objective splits into linear part plus gamma halves norm") {
  TestRng rng(11);
  const Problem p = testing::random_small_problem(rng, 5, 4, 2);
  for (int trial = 0; trial < 100; ++trial) {
    const std::vector<double> x = rng.vector(p.total_dim(), -2.0, 2.0);
    const double gamma = rng.uniform(0.0, 3.0);
    const PrimalPoint point{x};
    const double base = objective(p, point, 0.0);
    const double norm_sq = dualproj::testing::norm2(x) * dualproj::testing::norm2(x);
    CHECK(objective(p, point, gamma) ==
          doctest::Approx(base + 0.5 * gamma * norm_sq).epsilon(1e-12));
  }
}

TEST_CASE("feasibility examples") {
  Problem p;
  p.num_rows = 1;
  p.budget = {1.0};
  Block b;
  b.id = 0;
  b.dim = 2;
  b.cost = {0.0, 0.0};
  b.spec = PolytopeSpec::simplex_eq();
  b.coupling = {{0, 0, 1.0}};
  p.blocks = {b};

  const FeasibilityReport at_vertex = is_feasible(p, PrimalPoint{{1.0, 0.0}}, 1e-12);
  CHECK(at_vertex.feasible);
  CHECK(at_vertex.max_violation == doctest::Approx(0.0));

  const FeasibilityReport off_simplex = is_feasible(p, PrimalPoint{{0.6, 0.6}}, 1e-9);
  CHECK_FALSE(off_simplex.feasible);
  CHECK(off_simplex.max_violation == doctest::Approx(0.2));
}

TEST_CASE("box-cut equality membership check") {
  Problem p;
  p.num_rows = 1;
  p.budget = {10.0};
  Block b;
  b.id = 0;
  b.dim = 3;
  b.cost = {0.0, 0.0, 0.0};
  b.spec = PolytopeSpec::boxcut_eq(2);
  b.coupling = {{0, 0, 1.0}};
  p.blocks = {b};
  CHECK(is_feasible(p, PrimalPoint{{1.0, 1.0, 0.0}}, 1e-12).feasible);
  CHECK_FALSE(is_feasible(p, PrimalPoint{{1.0, 0.5, 0.0}}, 1e-9).feasible);
}

TEST_CASE("feasibility is monotone in the tolerance") {
  TestRng rng(23);
  const Problem p = testing::random_small_problem(rng, 4, 3, 2);
  for (int trial = 0; trial < 60; ++trial) {
    const std::vector<double> x = rng.vector(p.total_dim(), -0.5, 1.5);
    const double tol1 = rng.uniform(0.0, 0.5);
    const double tol2 = tol1 + rng.uniform(0.0, 0.5);
    const PrimalPoint point{x};
    if (is_feasible(p, point, tol1).feasible) {
      CHECK(is_feasible(p, point, tol2).feasible);
    }
  }
}
