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

#ifndef DUALPROJ_PROBLEM_HPP
#define DUALPROJ_PROBLEM_HPP

#include <span>
#include <string>
#include <vector>

namespace dualproj {

/// Block-level constraint set. Box-Cut kinds carry the cut level delta;
/// General carries an explicit vertex list.
enum class PolytopeKind {
  kBox,
  kSimplexEq,
  kSimplexIq,
  kBoxCutEq,
  kBoxCutIq,
  kParity,
  kGeneral,
};

const char* polytope_kind_name(PolytopeKind kind);

struct PolytopeSpec {
  PolytopeKind kind = PolytopeKind::kBox;
  int delta = 0;                              // Box-Cut only, 1 < delta < K
  std::vector<std::vector<double>> vertices;  // General only

  static PolytopeSpec box() { return {PolytopeKind::kBox, 0, {}}; }
  static PolytopeSpec simplex_eq() { return {PolytopeKind::kSimplexEq, 0, {}}; }
  static PolytopeSpec simplex_iq() { return {PolytopeKind::kSimplexIq, 0, {}}; }
  static PolytopeSpec boxcut_eq(int delta) { return {PolytopeKind::kBoxCutEq, delta, {}}; }
  static PolytopeSpec boxcut_iq(int delta) { return {PolytopeKind::kBoxCutIq, delta, {}}; }
  static PolytopeSpec parity() { return {PolytopeKind::kParity, 0, {}}; }
  static PolytopeSpec general(std::vector<std::vector<double>> vertices) {
    return {PolytopeKind::kGeneral, 0, std::move(vertices)};
  }
};

/// One nonzero of a block's coupling-constraint slice A_i.
struct Triplet {
  int row = 0;
  int col = 0;
  double value = 0.0;
};

/// One independent subproblem: its objective slice, coupling slice and
/// constraint polytope. Triplets are kept sorted by (col, row) since
/// column access (A_i^T lambda) dominates.
struct Block {
  int id = 0;
  int dim = 0;                    // K_i
  std::vector<double> cost;       // c_i, length dim
  std::vector<Triplet> coupling;  // A_i, m x dim, sorted by (col, row)
  PolytopeSpec spec;

  void sort_coupling();
};

struct Problem {
  std::vector<Block> blocks;
  std::vector<double> budget;  // b, length num_rows
  int num_rows = 0;            // m

  int num_blocks() const { return static_cast<int>(blocks.size()); }
  int total_dim() const;
  /// Offset of block i inside the flat primal vector.
  std::vector<int> block_offsets() const;
};

/// Flat primal vector partitioned by block dimensions.
struct PrimalPoint {
  std::vector<double> x;
};

struct Violation {
  int block_id = -1;  // -1 for problem-level violations
  std::string reason;
};

struct ValidationReport {
  std::vector<Violation> violations;
  bool ok() const { return violations.empty(); }
};

ValidationReport validate_problem(const Problem& p);

/// r = A x - b, accumulated in ascending block order with a fixed chunked
/// reduction so parallel and serial evaluation agree bit-exactly.
std::vector<double> residual(const Problem& p, const PrimalPoint& x);

/// c^T x + (gamma/2) x^T x; gamma = 0 gives the LP objective.
double objective(const Problem& p, const PrimalPoint& x, double gamma);

struct FeasibilityReport {
  bool feasible = false;
  double max_violation = 0.0;
};

/// Componentwise Ax <= b + tol plus per-block membership within tol.
/// Hull-membership kinds (Parity, General) are checked by projection
/// distance.
FeasibilityReport is_feasible(const Problem& p, const PrimalPoint& x, double tol);

/// Chunk width shared by every block-order reduction in the solver.
inline constexpr int kBlockChunkSize = 32;

namespace detail {
double dot(std::span<const double> a, std::span<const double> b);
}

}  // namespace dualproj

#endif  // DUALPROJ_PROBLEM_HPP
