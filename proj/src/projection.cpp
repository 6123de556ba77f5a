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

#include "dualproj/projection.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "dualproj/error.hpp"
#include "dualproj/wolfe.hpp"

namespace dualproj {

void materialize_vertex(const PolytopeSpec& spec, const VertexId& id, std::span<double> out) {
  if (spec.kind == PolytopeKind::kGeneral) {
    const std::vector<double>& v = spec.vertices.at(static_cast<size_t>(id.list_index));
    std::copy(v.begin(), v.end(), out.begin());
    return;
  }
  std::fill(out.begin(), out.end(), 0.0);
  for (int k : id.ones) out[k] = 1.0;
}

ProjectionResult project_box(std::span<const double> xhat) {
  const int dim = static_cast<int>(xhat.size());
  ProjectionResult result;
  result.x.resize(dim);
  bool is_vertex = true;
  int interior = 0;
  VertexId vertex;
  for (int k = 0; k < dim; ++k) {
    const double v = std::clamp(xhat[k], 0.0, 1.0);
    result.x[k] = v;
    if (v == 1.0) {
      vertex.ones.push_back(k);
    } else if (v != 0.0) {
      is_vertex = false;
      ++interior;
    }
  }
  if (is_vertex) {
    result.support.push_back(std::move(vertex));
    result.weights.push_back(1.0);
    result.corral_dim = 0;
  } else {
    result.corral_dim = interior;
  }
  return result;
}

ProjectionResult project_simplex_eq(std::span<const double> xhat) {
  const int dim = static_cast<int>(xhat.size());
  if (dim < 1) throw Error(ErrorCode::kEmptyInput, "simplex projection needs K >= 1");

  // Max-heap of indices, ties toward the smaller index.
  auto lower_priority = [&](int a, int b) {
    if (xhat[a] != xhat[b]) return xhat[a] < xhat[b];
    return a > b;
  };
  std::vector<int> heap(dim);
  std::iota(heap.begin(), heap.end(), 0);
  std::make_heap(heap.begin(), heap.end(), lower_priority);

  auto pop = [&]() {
    std::pop_heap(heap.begin(), heap.end(), lower_priority);
    const int k = heap.back();
    heap.pop_back();
    return k;
  };

  ProjectionResult result;
  std::vector<int> accepted;
  const int first = pop();
  result.heap_pops = 1;
  accepted.push_back(first);
  double accepted_sum = xhat[first];

  while (!heap.empty()) {
    const int candidate = pop();
    ++result.heap_pops;
    const double alpha =
        xhat[candidate] -
        (accepted_sum + xhat[candidate] - 1.0) / static_cast<double>(accepted.size() + 1);
    if (alpha <= 0.0) break;
    accepted.push_back(candidate);
    accepted_sum += xhat[candidate];
  }

  const double theta = (accepted_sum - 1.0) / static_cast<double>(accepted.size());
  std::sort(accepted.begin(), accepted.end());

  result.x.assign(dim, 0.0);
  result.support.reserve(accepted.size());
  result.weights.reserve(accepted.size());
  for (int k : accepted) {
    const double w = xhat[k] - theta;
    result.x[k] = w;
    result.support.push_back(VertexId{{k}, -1});
    result.weights.push_back(w);
  }
  result.corral_dim = static_cast<int>(accepted.size()) - 1;
  return result;
}

namespace {

// Box-convention support for the Iq fast paths: report the vertex when the
// point is binary, otherwise leave the support empty and count interior
// coordinates.
void fill_box_convention(ProjectionResult& result) {
  bool is_vertex = true;
  int interior = 0;
  VertexId vertex;
  for (size_t k = 0; k < result.x.size(); ++k) {
    if (result.x[k] == 1.0) {
      vertex.ones.push_back(static_cast<int>(k));
    } else if (result.x[k] != 0.0) {
      is_vertex = false;
      ++interior;
    }
  }
  if (is_vertex) {
    result.support.push_back(std::move(vertex));
    result.weights.push_back(1.0);
    result.corral_dim = 0;
  } else {
    result.corral_dim = interior;
  }
}

}  // namespace

ProjectionResult project_simplex_iq(std::span<const double> xhat) {
  const int dim = static_cast<int>(xhat.size());
  if (dim < 1) throw Error(ErrorCode::kEmptyInput, "simplex projection needs K >= 1");
  ProjectionResult result;
  result.x.resize(dim);
  double sum = 0.0;
  for (int k = 0; k < dim; ++k) {
    result.x[k] = std::clamp(xhat[k], 0.0, 1.0);
    sum += result.x[k];
  }
  if (sum <= 1.0) {
    fill_box_convention(result);
    return result;
  }
  return project_simplex_eq(xhat);
}

VertexId boxcut_vertex_oracle(std::span<const double> eta, int delta) {
  const int dim = static_cast<int>(eta.size());
  if (delta <= 1 || delta >= dim) {
    throw Error(ErrorCode::kInvalidDelta, "need 1 < delta < K");
  }
  std::vector<int> idx(dim);
  std::iota(idx.begin(), idx.end(), 0);
  auto better = [&](int a, int b) {
    if (eta[a] != eta[b]) return eta[a] > eta[b];
    return a < b;
  };
  std::nth_element(idx.begin(), idx.begin() + delta, idx.end(), better);
  VertexId v;
  v.ones.assign(idx.begin(), idx.begin() + delta);
  std::sort(v.ones.begin(), v.ones.end());
  return v;
}

ProjectionResult project_boxcut_eq(std::span<const double> xhat, int delta) {
  const int dim = static_cast<int>(xhat.size());
  if (delta <= 1 || delta >= dim) {
    throw Error(ErrorCode::kInvalidDelta, "need 1 < delta < K");
  }
  const BoxCutVertexOracle oracle(dim, delta);
  WolfeResult wr = wolfe_project(oracle, xhat);
  return std::move(wr.projection);
}

ProjectionResult project_boxcut_iq(std::span<const double> xhat, int delta) {
  const int dim = static_cast<int>(xhat.size());
  if (delta <= 1 || delta >= dim) {
    throw Error(ErrorCode::kInvalidDelta, "need 1 < delta < K");
  }
  ProjectionResult result;
  result.x.resize(dim);
  double sum = 0.0;
  for (int k = 0; k < dim; ++k) {
    result.x[k] = std::clamp(xhat[k], 0.0, 1.0);
    sum += result.x[k];
  }
  if (sum <= static_cast<double>(delta)) {
    fill_box_convention(result);
    return result;
  }
  return project_boxcut_eq(xhat, delta);
}

VertexId parity_vertex_oracle(std::span<const double> eta) {
  const int dim = static_cast<int>(eta.size());
  VertexId v;
  int worst_in = -1;   // smallest positive eta
  int best_out = -1;   // largest nonpositive eta
  for (int k = 0; k < dim; ++k) {
    if (eta[k] > 0.0) {
      v.ones.push_back(k);
      if (worst_in < 0 || eta[k] < eta[worst_in]) worst_in = k;
    } else {
      if (best_out < 0 || eta[k] > eta[best_out]) best_out = k;
    }
  }
  if (v.ones.size() % 2 == 0) return v;
  if (best_out >= 0 && eta[worst_in] + eta[best_out] > 0.0) {
    v.ones.insert(std::lower_bound(v.ones.begin(), v.ones.end(), best_out), best_out);
  } else {
    v.ones.erase(std::find(v.ones.begin(), v.ones.end(), worst_in));
  }
  return v;
}

VertexId parity_nearest_vertex(std::span<const double> xhat) {
  std::vector<double> eta(xhat.size());
  for (size_t k = 0; k < xhat.size(); ++k) eta[k] = xhat[k] - 0.5;
  return parity_vertex_oracle(eta);
}

ProjectionResult project_parity(std::span<const double> xhat) {
  const int dim = static_cast<int>(xhat.size());
  if (dim < 2) throw Error(ErrorCode::kEmptyInput, "parity projection needs K >= 2");
  const ParityVertexOracleSurface oracle(dim);
  WolfeResult wr = wolfe_project(oracle, xhat);
  return std::move(wr.projection);
}

ProjectionResult project_general(const std::vector<std::vector<double>>& vertices,
                                 std::span<const double> xhat) {
  if (vertices.empty()) throw Error(ErrorCode::kEmptyInput, "general polytope has no vertices");
  const GeneralVertexOracle oracle(&vertices);
  WolfeResult wr = wolfe_project(oracle, xhat);
  return std::move(wr.projection);
}

ProjectionResult project_polytope(const PolytopeSpec& spec, std::span<const double> xhat) {
  switch (spec.kind) {
    case PolytopeKind::kBox: return project_box(xhat);
    case PolytopeKind::kSimplexEq: return project_simplex_eq(xhat);
    case PolytopeKind::kSimplexIq: return project_simplex_iq(xhat);
    case PolytopeKind::kBoxCutEq: return project_boxcut_eq(xhat, spec.delta);
    case PolytopeKind::kBoxCutIq: return project_boxcut_iq(xhat, spec.delta);
    case PolytopeKind::kParity: return project_parity(xhat);
    case PolytopeKind::kGeneral: return project_general(spec.vertices, xhat);
  }
  throw Error(ErrorCode::kInvalidSpec, "unknown polytope kind");
}

LinMinResult polytope_linmin(const PolytopeSpec& spec, std::span<const double> score, int dim) {
  LinMinResult result;
  switch (spec.kind) {
    case PolytopeKind::kBox: {
      for (int k = 0; k < dim; ++k) {
        if (score[k] < 0.0) {
          result.vertex.ones.push_back(k);
          result.value += score[k];
        }
      }
      return result;
    }
    case PolytopeKind::kSimplexEq: {
      int best = 0;
      for (int k = 1; k < dim; ++k) {
        if (score[k] < score[best]) best = k;
      }
      result.vertex.ones.push_back(best);
      result.value = score[best];
      return result;
    }
    case PolytopeKind::kSimplexIq: {
      int best = 0;
      for (int k = 1; k < dim; ++k) {
        if (score[k] < score[best]) best = k;
      }
      if (score[best] < 0.0) {
        result.vertex.ones.push_back(best);
        result.value = score[best];
      }
      return result;
    }
    case PolytopeKind::kBoxCutEq: {
      std::vector<double> neg(score.begin(), score.end());
      for (double& s : neg) s = -s;
      result.vertex = boxcut_vertex_oracle(neg, spec.delta);
      for (int k : result.vertex.ones) result.value += score[k];
      return result;
    }
    case PolytopeKind::kBoxCutIq: {
      std::vector<int> negative;
      for (int k = 0; k < dim; ++k) {
        if (score[k] < 0.0) negative.push_back(k);
      }
      if (static_cast<int>(negative.size()) > spec.delta) {
        auto better = [&](int a, int b) {
          if (score[a] != score[b]) return score[a] < score[b];
          return a < b;
        };
        std::nth_element(negative.begin(), negative.begin() + spec.delta, negative.end(), better);
        negative.resize(spec.delta);
        std::sort(negative.begin(), negative.end());
      }
      result.vertex.ones = std::move(negative);
      for (int k : result.vertex.ones) result.value += score[k];
      return result;
    }
    case PolytopeKind::kParity: {
      std::vector<double> neg(score.begin(), score.end());
      for (double& s : neg) s = -s;
      result.vertex = parity_vertex_oracle(neg);
      for (int k : result.vertex.ones) result.value += score[k];
      return result;
    }
    case PolytopeKind::kGeneral: {
      int best = 0;
      double best_value = detail::dot(score, spec.vertices[0]);
      for (size_t r = 1; r < spec.vertices.size(); ++r) {
        const double value = detail::dot(score, spec.vertices[r]);
        if (value < best_value) {
          best_value = value;
          best = static_cast<int>(r);
        }
      }
      result.vertex.list_index = best;
      result.value = best_value;
      return result;
    }
  }
  throw Error(ErrorCode::kInvalidSpec, "unknown polytope kind");
}

}  // namespace dualproj
