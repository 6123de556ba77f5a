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

#include <algorithm>
#include <numeric>

#include "dualproj/error.hpp"
#include "dualproj/projection.hpp"
#include "dualproj/reference.hpp"
#include "test_support.hpp"

using namespace dualproj;
using dualproj::testing::TestRng;
using dualproj::testing::dist2;

namespace {

std::vector<double> reconstruct(const PolytopeSpec& spec, const ProjectionResult& r, int dim) {
  std::vector<double> x(dim, 0.0);
  std::vector<double> v(dim);
  for (size_t s = 0; s < r.support.size(); ++s) {
    materialize_vertex(spec, r.support[s], v);
    for (int k = 0; k < dim; ++k) x[k] += r.weights[s] * v[k];
  }
  return x;
}

void check_support_invariants(const PolytopeSpec& spec, const ProjectionResult& r, int dim) {
  if (r.support.empty()) return;  // Box convention: support may be omitted
  double total = 0.0;
  for (double w : r.weights) {
    CHECK(w >= 0.0);
    total += w;
  }
  CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
  const std::vector<double> rebuilt = reconstruct(spec, r, dim);
  CHECK(dist2(rebuilt, r.x) < 1e-10);
}

// All even-parity binary vectors in dimension K.
std::vector<std::vector<double>> even_vertices(int dim) {
  std::vector<std::vector<double>> out;
  for (unsigned mask = 0; mask < (1u << dim); ++mask) {
    if (__builtin_popcount(mask) % 2 != 0) continue;
    std::vector<double> v(dim, 0.0);
    for (int k = 0; k < dim; ++k) {
      if (mask & (1u << k)) v[k] = 1.0;
    }
    out.push_back(std::move(v));
  }
  return out;
}

std::vector<std::vector<double>> boxcut_vertices(int dim, int delta) {
  std::vector<std::vector<double>> out;
  for (unsigned mask = 0; mask < (1u << dim); ++mask) {
    if (__builtin_popcount(mask) != delta) continue;
    std::vector<double> v(dim, 0.0);
    for (int k = 0; k < dim; ++k) {
      if (mask & (1u << k)) v[k] = 1.0;
    }
    out.push_back(std::move(v));
  }
  return out;
}

}  // namespace

TEST_CASE("box projection clamps componentwise") {
  const ProjectionResult r = project_box(std::vector<double>{1.5, -0.2, 0.3});
  CHECK(r.x == std::vector<double>{1.0, 0.0, 0.3});
  CHECK(r.support.empty());
  CHECK(r.corral_dim == 1);

  const ProjectionResult interior = project_box(std::vector<double>{0.5});
  CHECK(interior.x == std::vector<double>{0.5});
  CHECK(interior.corral_dim == 1);

  const ProjectionResult vertex = project_box(std::vector<double>{2.0, 3.0});
  CHECK(vertex.x == std::vector<double>{1.0, 1.0});
  CHECK(vertex.corral_dim == 0);
  REQUIRE(vertex.support.size() == 1);
  CHECK(vertex.support[0].ones == std::vector<int>{0, 1});
}

TEST_CASE("simplex-eq projection examples") {
  const ProjectionResult vertex = project_simplex_eq(std::vector<double>{5.0, 1.0, 0.0});
  CHECK(dist2(vertex.x, std::vector<double>{1.0, 0.0, 0.0}) < 1e-15);
  CHECK(vertex.corral_dim == 0);
  CHECK(vertex.heap_pops == 2);  // accepted argmax plus one rejected candidate

  const ProjectionResult edge = project_simplex_eq(std::vector<double>{0.9, 0.4});
  CHECK(dist2(edge.x, std::vector<double>{0.75, 0.25}) < 1e-15);
  CHECK(edge.corral_dim == 1);

  const std::vector<double> uniform(5, 0.2);
  const ProjectionResult center = project_simplex_eq(uniform);
  CHECK(dist2(center.x, uniform) < 1e-12);
  CHECK(center.support.size() == 5);

  CHECK_THROWS_AS(project_simplex_eq(std::vector<double>{}), Error);
}

TEST_CASE("simplex-eq support is the top-|K| prefix of a full sort") {
  TestRng rng(101);
  for (int trial = 0; trial < 300; ++trial) {
    const int dim = rng.uniform_int(1, 8);
    const std::vector<double> xhat = rng.vector(dim, -2.0, 2.0);
    const ProjectionResult r = project_simplex_eq(xhat);
    CHECK(r.heap_pops <= static_cast<int>(r.support.size()) + 1);

    std::vector<int> order(dim);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](int a, int b) {
      if (xhat[a] != xhat[b]) return xhat[a] > xhat[b];
      return a < b;
    });
    std::vector<int> expected(order.begin(), order.begin() + r.support.size());
    std::sort(expected.begin(), expected.end());
    std::vector<int> got;
    for (const VertexId& id : r.support) got.push_back(id.ones[0]);
    std::sort(got.begin(), got.end());
    CHECK(got == expected);
  }
}

TEST_CASE("large scale forces the simplex projection onto a vertex") {
  TestRng rng(102);
  for (int trial = 0; trial < 50; ++trial) {
    const int dim = rng.uniform_int(2, 6);
    std::vector<double> xhat = rng.vector(dim, 0.0, 1.0);
    // Force a unique maximum with a clear margin.
    const int top = rng.uniform_int(0, dim - 1);
    xhat[top] += 0.5;
    std::vector<double> sorted = xhat;
    std::sort(sorted.begin(), sorted.end(), std::greater<double>());
    const double t0 = 1.0 / (sorted[0] - sorted[1]);

    for (double t : {t0 * 1.01, t0 * 10.0}) {
      std::vector<double> scaled(dim);
      for (int k = 0; k < dim; ++k) scaled[k] = t * xhat[k];
      CHECK(project_simplex_eq(scaled).corral_dim == 0);
    }
    std::vector<double> below(dim);
    for (int k = 0; k < dim; ++k) below[k] = 0.9 * t0 * xhat[k];
    CHECK(project_simplex_eq(below).corral_dim >= 1);
  }
}

TEST_CASE("simplex-iq projection examples") {
  const ProjectionResult inside = project_simplex_iq(std::vector<double>{0.2, 0.3});
  CHECK(dist2(inside.x, std::vector<double>{0.2, 0.3}) == 0.0);

  const ProjectionResult origin = project_simplex_iq(std::vector<double>{-1.0, -2.0});
  CHECK(origin.x == std::vector<double>{0.0, 0.0});
  CHECK(origin.corral_dim == 0);

  const ProjectionResult eq = project_simplex_iq(std::vector<double>{0.9, 0.4});
  CHECK(dist2(eq.x, std::vector<double>{0.75, 0.25}) < 1e-15);
}

TEST_CASE("boxcut vertex oracle picks the top-delta set") {
  CHECK(boxcut_vertex_oracle(std::vector<double>{0.9, 0.1, 0.5}, 2).ones ==
        std::vector<int>{0, 2});
  CHECK(boxcut_vertex_oracle(std::vector<double>{1.0, 1.0, 0.0}, 2).ones ==
        std::vector<int>{0, 1});
  CHECK(boxcut_vertex_oracle(std::vector<double>{-1.0, -2.0, -3.0}, 2).ones ==
        std::vector<int>{0, 1});
  CHECK_THROWS_AS(boxcut_vertex_oracle(std::vector<double>{1.0, 2.0}, 2), Error);
}

TEST_CASE("boxcut vertex oracle matches exhaustive enumeration") {
  TestRng rng(103);
  for (int trial = 0; trial < 200; ++trial) {
    const int dim = rng.uniform_int(3, 9);
    const int delta = rng.uniform_int(2, dim - 1);
    const std::vector<double> eta = rng.vector(dim, -1.0, 1.0);
    const VertexId got = boxcut_vertex_oracle(eta, delta);

    double best = -1e300;
    for (const auto& v : boxcut_vertices(dim, delta)) {
      double s = 0.0;
      for (int k = 0; k < dim; ++k) s += eta[k] * v[k];
      best = std::max(best, s);
    }
    double got_value = 0.0;
    for (int k : got.ones) got_value += eta[k];
    CHECK(got_value == doctest::Approx(best).epsilon(1e-12));
  }
}

TEST_CASE("boxcut-eq projection examples") {
  const ProjectionResult vertex = project_boxcut_eq(std::vector<double>{3.0, 2.0, -1.0}, 2);
  CHECK(dist2(vertex.x, std::vector<double>{1.0, 1.0, 0.0}) < 1e-12);
  CHECK(vertex.corral_dim == 0);
  CHECK(vertex.affine_solves == 0);  // vertex-first short circuit

  // Projection of a member vertex returns it.
  const ProjectionResult member = project_boxcut_eq(std::vector<double>{0.0, 1.0, 1.0}, 2);
  CHECK(dist2(member.x, std::vector<double>{0.0, 1.0, 1.0}) < 1e-12);

  const std::vector<double> xhat{0.8, 0.7, 0.5};
  const ProjectionResult face = project_boxcut_eq(xhat, 2);
  const std::vector<double> oracle = reference_qp_project(PolytopeSpec::boxcut_eq(2), xhat);
  CHECK(dist2(face.x, oracle) < 1e-8);
}

TEST_CASE("boxcut-iq projection examples") {
  const ProjectionResult inside = project_boxcut_iq(std::vector<double>{0.1, 0.2, 0.3}, 2);
  CHECK(dist2(inside.x, std::vector<double>{0.1, 0.2, 0.3}) == 0.0);

  const ProjectionResult eq_branch = project_boxcut_iq(std::vector<double>{3.0, 2.0, -1.0}, 2);
  CHECK(dist2(eq_branch.x, std::vector<double>{1.0, 1.0, 0.0}) < 1e-12);

  const ProjectionResult origin = project_boxcut_iq(std::vector<double>{-1.0, -1.0, -1.0}, 2);
  CHECK(origin.x == std::vector<double>{0.0, 0.0, 0.0});
  CHECK(origin.corral_dim == 0);
}

TEST_CASE("parity vertex oracle examples") {
  CHECK(parity_vertex_oracle(std::vector<double>{0.5, -0.2, 0.3}).ones ==
        std::vector<int>{0, 2});
  CHECK(parity_vertex_oracle(std::vector<double>{0.5, 0.4, 0.3}).ones ==
        std::vector<int>{0, 1});
  CHECK(parity_vertex_oracle(std::vector<double>{-1.0, -1.0}).ones.empty());
}

TEST_CASE("parity vertex oracle matches enumeration") {
  TestRng rng(104);
  for (int trial = 0; trial < 300; ++trial) {
    const int dim = rng.uniform_int(2, 10);
    const std::vector<double> eta = rng.vector(dim, -1.0, 1.0);
    const VertexId got = parity_vertex_oracle(eta);
    CHECK(got.ones.size() % 2 == 0);

    double best = -1e300;
    for (const auto& v : even_vertices(dim)) {
      double s = 0.0;
      for (int k = 0; k < dim; ++k) s += eta[k] * v[k];
      best = std::max(best, s);
    }
    double got_value = 0.0;
    for (int k : got.ones) got_value += eta[k];
    CHECK(got_value == doctest::Approx(best).epsilon(1e-12));
  }
}

TEST_CASE("parity nearest vertex examples") {
  CHECK(parity_nearest_vertex(std::vector<double>{0.9, 0.8, 0.1}).ones ==
        std::vector<int>{0, 1});
  CHECK(parity_nearest_vertex(std::vector<double>{0.0, 0.0}).ones.empty());
  CHECK(parity_nearest_vertex(std::vector<double>{1.0, 1.0}).ones == std::vector<int>{0, 1});
}

TEST_CASE("parity nearest vertex minimizes the distance over enumeration") {
  TestRng rng(105);
  for (int trial = 0; trial < 200; ++trial) {
    const int dim = rng.uniform_int(2, 9);
    const std::vector<double> xhat = rng.vector(dim, -1.0, 2.0);
    const VertexId got = parity_nearest_vertex(xhat);
    std::vector<double> gv(dim, 0.0);
    for (int k : got.ones) gv[k] = 1.0;
    const double got_dist = dist2(gv, xhat);
    for (const auto& v : even_vertices(dim)) {
      CHECK(got_dist <= dist2(v, xhat) + 1e-12);
    }
  }
}

TEST_CASE("parity projection examples") {
  const ProjectionResult member = project_parity(std::vector<double>{1.0, 1.0, 0.0});
  CHECK(dist2(member.x, std::vector<double>{1.0, 1.0, 0.0}) < 1e-12);
  CHECK(member.corral_dim == 0);

  const std::vector<double> a{0.9, 0.8, 0.1};
  const ProjectionResult inside = project_parity(a);
  CHECK(dist2(inside.x, reference_qp_project(PolytopeSpec::parity(), a)) < 1e-8);

  const std::vector<double> b{0.5, 0.5, 0.5, 0.5};
  const ProjectionResult mid = project_parity(b);
  CHECK(dist2(mid.x, reference_qp_project(PolytopeSpec::parity(), b)) < 1e-8);
}

TEST_CASE("projection kernels match the exact reference oracle") {
  TestRng rng(106);
  const int trials = 250;
  for (int trial = 0; trial < trials; ++trial) {
    const int dim = rng.uniform_int(2, 8);
    const std::vector<double> xhat = rng.vector(dim, -1.5, 2.5);

    PolytopeSpec specs[] = {
        PolytopeSpec::box(),
        PolytopeSpec::simplex_eq(),
        PolytopeSpec::simplex_iq(),
        PolytopeSpec::parity(),
    };
    for (const PolytopeSpec& spec : specs) {
      const ProjectionResult got = project_polytope(spec, xhat);
      const std::vector<double> expected = reference_qp_project(spec, xhat);
      CHECK(dist2(got.x, expected) < 1e-8);
      check_support_invariants(spec, got, dim);
    }
    if (dim >= 3) {
      const int delta = rng.uniform_int(2, dim - 1);
      for (PolytopeSpec spec : {PolytopeSpec::boxcut_eq(delta), PolytopeSpec::boxcut_iq(delta)}) {
        const ProjectionResult got = project_polytope(spec, xhat);
        const std::vector<double> expected = reference_qp_project(spec, xhat);
        CHECK(dist2(got.x, expected) < 1e-8);
        check_support_invariants(spec, got, dim);
      }
    }
  }
}

TEST_CASE("projections are idempotent and non-expansive") {
  TestRng rng(107);
  for (int trial = 0; trial < 150; ++trial) {
    const int dim = rng.uniform_int(2, 7);
    const int delta = dim >= 3 ? rng.uniform_int(2, dim - 1) : 0;
    std::vector<PolytopeSpec> specs = {PolytopeSpec::box(), PolytopeSpec::simplex_eq(),
                                       PolytopeSpec::simplex_iq(), PolytopeSpec::parity()};
    if (dim >= 3) {
      specs.push_back(PolytopeSpec::boxcut_eq(delta));
      specs.push_back(PolytopeSpec::boxcut_iq(delta));
    }
    const std::vector<double> a = rng.vector(dim, -2.0, 3.0);
    const std::vector<double> b = rng.vector(dim, -2.0, 3.0);
    for (const PolytopeSpec& spec : specs) {
      const ProjectionResult pa = project_polytope(spec, a);
      const ProjectionResult pb = project_polytope(spec, b);
      const ProjectionResult paa = project_polytope(spec, pa.x);
      CHECK(dist2(paa.x, pa.x) < 1e-10);
      CHECK(dist2(pa.x, pb.x) <= dist2(a, b) + 1e-10);
    }
  }
}

TEST_CASE("general polytope projection matches the hull oracle") {
  TestRng rng(108);
  for (int trial = 0; trial < 100; ++trial) {
    const int dim = rng.uniform_int(2, 5);
    const int count = rng.uniform_int(1, 7);
    std::vector<std::vector<double>> vertices;
    for (int r = 0; r < count; ++r) vertices.push_back(rng.vector(dim, -1.0, 1.0));
    const std::vector<double> xhat = rng.vector(dim, -2.0, 2.0);

    const PolytopeSpec spec = PolytopeSpec::general(vertices);
    const ProjectionResult got = project_general(vertices, xhat);
    const std::vector<double> expected = reference_qp_project(spec, xhat);
    CHECK(dist2(got.x, expected) < 1e-8);
    check_support_invariants(spec, got, dim);
  }
}

TEST_CASE("linmin oracles attain the enumerated optimum") {
  TestRng rng(109);
  for (int trial = 0; trial < 150; ++trial) {
    const int dim = rng.uniform_int(3, 8);
    const std::vector<double> score = rng.vector(dim, -1.0, 1.0);
    const int delta = rng.uniform_int(2, dim - 1);

    struct KindCase {
      PolytopeSpec spec;
      std::vector<std::vector<double>> vertices;
    };
    std::vector<KindCase> cases;
    cases.push_back({PolytopeSpec::simplex_eq(), {}});
    for (int k = 0; k < dim; ++k) {
      std::vector<double> v(dim, 0.0);
      v[k] = 1.0;
      cases.back().vertices.push_back(v);
    }
    cases.push_back({PolytopeSpec::simplex_iq(), cases[0].vertices});
    cases.back().vertices.push_back(std::vector<double>(dim, 0.0));
    cases.push_back({PolytopeSpec::boxcut_eq(delta), boxcut_vertices(dim, delta)});
    cases.push_back({PolytopeSpec::parity(), even_vertices(dim)});

    for (const KindCase& c : cases) {
      const LinMinResult got = polytope_linmin(c.spec, score, dim);
      double best = 1e300;
      for (const auto& v : c.vertices) {
        double s = 0.0;
        for (int k = 0; k < dim; ++k) s += score[k] * v[k];
        best = std::min(best, s);
      }
      CHECK(got.value == doctest::Approx(best).epsilon(1e-12));
    }
  }
}

TEST_CASE("of the g0 linmin examples") {
  const LinMinResult simplex =
      polytope_linmin(PolytopeSpec::simplex_eq(), std::vector<double>{3.0, 1.0, 2.0}, 3);
  CHECK(simplex.value == 1.0);
  CHECK(simplex.vertex.ones == std::vector<int>{1});

  const LinMinResult boxcut =
      polytope_linmin(PolytopeSpec::boxcut_eq(2), std::vector<double>{3.0, 1.0, 2.0}, 3);
  CHECK(boxcut.value == 3.0);
  CHECK(boxcut.vertex.ones == std::vector<int>{1, 2});
}
