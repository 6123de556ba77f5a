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

#include "dualproj/problem.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "dualproj/error.hpp"
#include "dualproj/projection.hpp"

namespace dualproj {

const char* error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::kDimensionMismatch: return "DimensionMismatch";
    case ErrorCode::kInvalidGamma: return "InvalidGamma";
    case ErrorCode::kInvalidDelta: return "InvalidDelta";
    case ErrorCode::kEmptyInput: return "EmptyInput";
    case ErrorCode::kDegenerateCorral: return "DegenerateCorral";
    case ErrorCode::kMaxIterationsExceeded: return "MaxIterationsExceeded";
    case ErrorCode::kInsufficientHistory: return "InsufficientHistory";
    case ErrorCode::kNoImprovement: return "NoImprovement";
    case ErrorCode::kDegenerateAnchor: return "DegenerateAnchor";
    case ErrorCode::kStageStall: return "StageStall";
    case ErrorCode::kRepairUnavailable: return "RepairUnavailable";
    case ErrorCode::kInfeasibleCandidate: return "InfeasibleCandidate";
    case ErrorCode::kBaselineInfeasible: return "BaselineInfeasible";
    case ErrorCode::kScaleExceeded: return "ScaleExceeded";
    case ErrorCode::kParseError: return "ParseError";
    case ErrorCode::kValidationError: return "ValidationError";
    case ErrorCode::kInvalidSpec: return "InvalidSpec";
  }
  return "UnknownError";
}

const char* polytope_kind_name(PolytopeKind kind) {
  switch (kind) {
    case PolytopeKind::kBox: return "box";
    case PolytopeKind::kSimplexEq: return "simplex_eq";
    case PolytopeKind::kSimplexIq: return "simplex_iq";
    case PolytopeKind::kBoxCutEq: return "boxcut_eq";
    case PolytopeKind::kBoxCutIq: return "boxcut_iq";
    case PolytopeKind::kParity: return "parity";
    case PolytopeKind::kGeneral: return "general";
  }
  return "unknown";
}

void Block::sort_coupling() {
  std::sort(coupling.begin(), coupling.end(), [](const Triplet& a, const Triplet& b) {
    if (a.col != b.col) return a.col < b.col;
    return a.row < b.row;
  });
}

int Problem::total_dim() const {
  int n = 0;
  for (const Block& b : blocks) n += b.dim;
  return n;
}

std::vector<int> Problem::block_offsets() const {
  std::vector<int> offsets(blocks.size() + 1, 0);
  for (size_t i = 0; i < blocks.size(); ++i) {
    offsets[i + 1] = offsets[i] + blocks[i].dim;
  }
  return offsets;
}

namespace detail {
double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}
}  // namespace detail

namespace {

bool all_finite(std::span<const double> v) {
  for (double x : v) {
    if (!std::isfinite(x)) return false;
  }
  return true;
}

void validate_block(const Block& b, int num_rows, ValidationReport& report) {
  auto add = [&](const std::string& reason) { report.violations.push_back({b.id, reason}); };

  if (b.dim < 1) add("block dimension must be positive");
  if (static_cast<int>(b.cost.size()) != b.dim) add("cost length does not match block dimension");
  if (!all_finite(b.cost)) add("cost has non-finite entries");

  for (const Triplet& t : b.coupling) {
    if (t.col < 0 || t.col >= b.dim) {
      add("dimension mismatch: coupling column " + std::to_string(t.col) +
          " outside [0, " + std::to_string(b.dim) + ")");
      break;
    }
  }
  for (const Triplet& t : b.coupling) {
    if (t.row < 0 || t.row >= num_rows) {
      add("coupling row " + std::to_string(t.row) + " outside [0, " +
          std::to_string(num_rows) + ")");
      break;
    }
  }
  for (const Triplet& t : b.coupling) {
    if (!std::isfinite(t.value)) {
      add("coupling has non-finite entries");
      break;
    }
  }

  switch (b.spec.kind) {
    case PolytopeKind::kBoxCutEq:
    case PolytopeKind::kBoxCutIq:
      if (!(b.spec.delta > 1 && b.spec.delta < b.dim)) {
        add("delta out of range: need 1 < delta < K, got delta=" +
            std::to_string(b.spec.delta) + ", K=" + std::to_string(b.dim));
      }
      break;
    case PolytopeKind::kParity:
      if (b.dim < 2) add("parity block needs K >= 2");
      break;
    case PolytopeKind::kGeneral: {
      if (b.spec.vertices.empty()) {
        add("general block has empty vertex list");
        break;
      }
      for (const auto& v : b.spec.vertices) {
        if (static_cast<int>(v.size()) != b.dim) {
          add("general vertex dimension does not match block dimension");
          break;
        }
        if (!all_finite(v)) {
          add("general vertex has non-finite entries");
          break;
        }
      }
      break;
    }
    default:
      break;
  }
}

}  // namespace

ValidationReport validate_problem(const Problem& p) {
  ValidationReport report;
  if (p.blocks.empty()) {
    report.violations.push_back({-1, "I=0: problem has no blocks"});
  }
  if (p.num_rows < 0) {
    report.violations.push_back({-1, "negative row count"});
  }
  if (static_cast<int>(p.budget.size()) != p.num_rows) {
    report.violations.push_back({-1, "budget length does not match row count"});
  }
  if (!all_finite(p.budget)) {
    report.violations.push_back({-1, "budget has non-finite entries"});
  }
  for (size_t i = 0; i < p.blocks.size(); ++i) {
    if (p.blocks[i].id != static_cast<int>(i)) {
      report.violations.push_back(
          {p.blocks[i].id, "block ids must be contiguous ascending from 0"});
      break;
    }
  }
  for (const Block& b : p.blocks) validate_block(b, p.num_rows, report);
  return report;
}

std::vector<double> residual(const Problem& p, const PrimalPoint& x) {
  if (static_cast<int>(x.x.size()) != p.total_dim()) {
    throw Error(ErrorCode::kDimensionMismatch,
                "primal point length " + std::to_string(x.x.size()) +
                    " does not match total dimension " + std::to_string(p.total_dim()));
  }
  const std::vector<int> offsets = p.block_offsets();
  const int num_blocks = p.num_blocks();
  const int num_chunks = (num_blocks + kBlockChunkSize - 1) / kBlockChunkSize;

  std::vector<double> r(p.num_rows, 0.0);
  std::vector<double> chunk_sum(p.num_rows);
  for (int c = 0; c < num_chunks; ++c) {
    std::fill(chunk_sum.begin(), chunk_sum.end(), 0.0);
    const int lo = c * kBlockChunkSize;
    const int hi = std::min(num_blocks, lo + kBlockChunkSize);
    for (int i = lo; i < hi; ++i) {
      const Block& b = p.blocks[i];
      const double* xi = x.x.data() + offsets[i];
      for (const Triplet& t : b.coupling) {
        chunk_sum[t.row] += t.value * xi[t.col];
      }
    }
    for (int j = 0; j < p.num_rows; ++j) r[j] += chunk_sum[j];
  }
  for (int j = 0; j < p.num_rows; ++j) r[j] -= p.budget[j];
  return r;
}

double objective(const Problem& p, const PrimalPoint& x, double gamma) {
  if (static_cast<int>(x.x.size()) != p.total_dim()) {
    throw Error(ErrorCode::kDimensionMismatch, "primal point length mismatch");
  }
  if (gamma < 0.0) {
    throw Error(ErrorCode::kInvalidGamma, "gamma must be nonnegative");
  }
  const std::vector<int> offsets = p.block_offsets();
  const int num_blocks = p.num_blocks();
  const int num_chunks = (num_blocks + kBlockChunkSize - 1) / kBlockChunkSize;

  double total = 0.0;
  for (int c = 0; c < num_chunks; ++c) {
    double chunk_sum = 0.0;
    const int lo = c * kBlockChunkSize;
    const int hi = std::min(num_blocks, lo + kBlockChunkSize);
    for (int i = lo; i < hi; ++i) {
      const Block& b = p.blocks[i];
      const double* xi = x.x.data() + offsets[i];
      double lin = 0.0;
      double sq = 0.0;
      for (int k = 0; k < b.dim; ++k) {
        lin += b.cost[k] * xi[k];
        sq += xi[k] * xi[k];
      }
      chunk_sum += lin + 0.5 * gamma * sq;
    }
    total += chunk_sum;
  }
  return total;
}

namespace {

// Distance-style violation of one block's membership constraints.
double block_violation(const Block& b, std::span<const double> xi) {
  switch (b.spec.kind) {
    case PolytopeKind::kBox: {
      double sq = 0.0;
      for (int k = 0; k < b.dim; ++k) {
        const double clamped = std::clamp(xi[k], 0.0, 1.0);
        sq += (xi[k] - clamped) * (xi[k] - clamped);
      }
      return std::sqrt(sq);
    }
    case PolytopeKind::kSimplexEq:
    case PolytopeKind::kSimplexIq: {
      double v = 0.0;
      double sum = 0.0;
      for (int k = 0; k < b.dim; ++k) {
        v = std::max(v, -xi[k]);
        sum += xi[k];
      }
      if (b.spec.kind == PolytopeKind::kSimplexEq) {
        v = std::max(v, std::abs(sum - 1.0));
      } else {
        v = std::max(v, sum - 1.0);
      }
      return v;
    }
    case PolytopeKind::kBoxCutEq:
    case PolytopeKind::kBoxCutIq: {
      double v = 0.0;
      double sum = 0.0;
      for (int k = 0; k < b.dim; ++k) {
        v = std::max(v, -xi[k]);
        v = std::max(v, xi[k] - 1.0);
        sum += xi[k];
      }
      const double delta = static_cast<double>(b.spec.delta);
      if (b.spec.kind == PolytopeKind::kBoxCutEq) {
        v = std::max(v, std::abs(sum - delta));
      } else {
        v = std::max(v, sum - delta);
      }
      return v;
    }
    case PolytopeKind::kParity:
    case PolytopeKind::kGeneral: {
      const ProjectionResult proj = project_polytope(b.spec, xi);
      double sq = 0.0;
      for (int k = 0; k < b.dim; ++k) {
        sq += (xi[k] - proj.x[k]) * (xi[k] - proj.x[k]);
      }
      return std::sqrt(sq);
    }
  }
  return 0.0;
}

}  // namespace

FeasibilityReport is_feasible(const Problem& p, const PrimalPoint& x, double tol) {
  FeasibilityReport report;
  const std::vector<double> r = residual(p, x);
  double worst = 0.0;
  for (double rj : r) worst = std::max(worst, rj);

  const std::vector<int> offsets = p.block_offsets();
  for (int i = 0; i < p.num_blocks(); ++i) {
    const std::span<const double> xi(x.x.data() + offsets[i], p.blocks[i].dim);
    worst = std::max(worst, block_violation(p.blocks[i], xi));
  }
  report.max_violation = worst;
  report.feasible = worst <= tol;
  return report;
}

}  // namespace dualproj
