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

#include "dualproj/reference.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "dualproj/error.hpp"

namespace dualproj {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// ---------------------------------------------------------------------------
// Dense two-phase tableau simplex.
// ---------------------------------------------------------------------------

struct StandardLp {
  int rows = 0;
  int cols = 0;                  // structural columns
  std::vector<double> a;         // rows x cols, row-major
  std::vector<double> rhs;       // >= 0 after sign normalization
  std::vector<double> cost;      // structural costs
  std::vector<int> row_sign;     // +1 if the row kept its sign, -1 if negated
};

struct SimplexOutcome {
  bool feasible = false;
  std::vector<double> x;      // structural values
  std::vector<double> duals;  // per row, in stored-row orientation
  double objective = 0.0;
};

class Tableau {
 public:
  Tableau(const StandardLp& lp)
      : rows_(lp.rows), structural_(lp.cols), total_cols_(lp.cols + lp.rows) {
    t_.assign(static_cast<size_t>(rows_) * total_cols_, 0.0);
    rhs_ = lp.rhs;
    basis_.resize(rows_);
    for (int i = 0; i < rows_; ++i) {
      for (int j = 0; j < structural_; ++j) t_[idx(i, j)] = lp.a[i * structural_ + j];
      t_[idx(i, structural_ + i)] = 1.0;  // artificial
      basis_[i] = structural_ + i;
    }
  }

  bool run_phase(const std::vector<double>& cost, bool allow_artificial_entering) {
    build_cost_row(cost);
    long iter = 0;
    const long bland_after = 5000;
    const long max_iter = 400000;
    while (true) {
      int entering = -1;
      if (iter < bland_after) {
        double best = -1e-9;
        const int limit = allow_artificial_entering ? total_cols_ : structural_;
        for (int j = 0; j < limit; ++j) {
          if (in_basis(j)) continue;
          if (cost_row_[j] < best) {
            best = cost_row_[j];
            entering = j;
          }
        }
      } else {
        const int limit = allow_artificial_entering ? total_cols_ : structural_;
        for (int j = 0; j < limit; ++j) {
          if (in_basis(j)) continue;
          if (cost_row_[j] < -1e-9) {
            entering = j;
            break;
          }
        }
      }
      if (entering < 0) return true;

      int leaving = -1;
      double best_ratio = kInf;
      for (int i = 0; i < rows_; ++i) {
        const double a = t_[idx(i, entering)];
        if (a > 1e-9) {
          const double ratio = rhs_[i] / a;
          if (ratio < best_ratio - 1e-12 ||
              (ratio < best_ratio + 1e-12 && (leaving < 0 || basis_[i] < basis_[leaving]))) {
            best_ratio = ratio;
            leaving = i;
          }
        }
      }
      if (leaving < 0) {
        throw Error(ErrorCode::kScaleExceeded, "simplex detected an unbounded direction");
      }
      pivot(leaving, entering);
      if (++iter > max_iter) {
        throw Error(ErrorCode::kScaleExceeded, "simplex iteration limit");
      }
    }
  }

  double objective_value(const std::vector<double>& cost) const {
    double v = 0.0;
    for (int i = 0; i < rows_; ++i) {
      if (basis_[i] < static_cast<int>(cost.size())) v += cost[basis_[i]] * rhs_[i];
    }
    return v;
  }

  std::vector<double> structural_values() const {
    std::vector<double> x(structural_, 0.0);
    for (int i = 0; i < rows_; ++i) {
      if (basis_[i] < structural_) x[basis_[i]] = rhs_[i];
    }
    return x;
  }

  // Row duals read off the artificial columns' reduced costs.
  std::vector<double> row_duals() const {
    std::vector<double> y(rows_);
    for (int i = 0; i < rows_; ++i) y[i] = -cost_row_[structural_ + i];
    return y;
  }

 private:
  size_t idx(int r, int c) const { return static_cast<size_t>(r) * total_cols_ + c; }

  bool in_basis(int j) const {
    return std::find(basis_.begin(), basis_.end(), j) != basis_.end();
  }

  void build_cost_row(const std::vector<double>& cost) {
    cost_row_.assign(total_cols_, 0.0);
    for (int j = 0; j < total_cols_; ++j) {
      cost_row_[j] = j < static_cast<int>(cost.size()) ? cost[j] : 0.0;
    }
    for (int i = 0; i < rows_; ++i) {
      const double cb = basis_[i] < static_cast<int>(cost.size()) ? cost[basis_[i]] : 0.0;
      if (cb == 0.0) continue;
      for (int j = 0; j < total_cols_; ++j) cost_row_[j] -= cb * t_[idx(i, j)];
    }
  }

  void pivot(int leaving, int entering) {
    const double p = t_[idx(leaving, entering)];
    for (int j = 0; j < total_cols_; ++j) t_[idx(leaving, j)] /= p;
    rhs_[leaving] /= p;
    for (int i = 0; i < rows_; ++i) {
      if (i == leaving) continue;
      const double f = t_[idx(i, entering)];
      if (f == 0.0) continue;
      for (int j = 0; j < total_cols_; ++j) t_[idx(i, j)] -= f * t_[idx(leaving, j)];
      rhs_[i] -= f * rhs_[leaving];
      if (std::abs(rhs_[i]) < 1e-12) rhs_[i] = 0.0;
    }
    const double cf = cost_row_[entering];
    if (cf != 0.0) {
      for (int j = 0; j < total_cols_; ++j) cost_row_[j] -= cf * t_[idx(leaving, j)];
    }
    basis_[leaving] = entering;
  }

  int rows_;
  int structural_;
  int total_cols_;
  std::vector<double> t_;
  std::vector<double> rhs_;
  std::vector<double> cost_row_;
  std::vector<int> basis_;
};

SimplexOutcome solve_standard(const StandardLp& lp) {
  Tableau tableau(lp);
  std::vector<double> phase1_cost(lp.cols, 0.0);
  // Artificial costs are implicit: minimize the sum of artificials.
  std::vector<double> full_phase1(lp.cols + lp.rows, 0.0);
  for (int i = 0; i < lp.rows; ++i) full_phase1[lp.cols + i] = 1.0;

  tableau.run_phase(full_phase1, true);
  SimplexOutcome outcome;
  if (tableau.objective_value(full_phase1) > 1e-7) {
    outcome.feasible = false;
    return outcome;
  }
  tableau.run_phase(lp.cost, false);
  outcome.feasible = true;
  outcome.x = tableau.structural_values();
  outcome.duals = tableau.row_duals();
  outcome.objective = tableau.objective_value(lp.cost);
  return outcome;
}

// ---------------------------------------------------------------------------
// Block expansion to standard form.
// ---------------------------------------------------------------------------

void enumerate_even_subsets(int dim, std::vector<std::vector<double>>& out) {
  for (unsigned mask = 0; mask < (1u << dim); ++mask) {
    if (__builtin_popcount(mask) % 2 != 0) continue;
    std::vector<double> v(dim, 0.0);
    for (int k = 0; k < dim; ++k) {
      if (mask & (1u << k)) v[k] = 1.0;
    }
    out.push_back(std::move(v));
  }
}

struct ExpandedBlock {
  PolytopeKind kind;           // after expansion: box, simplex or boxcut kinds
  int cols = 0;                // variables owned by the block
  int col_start = 0;           // first structural column
  std::vector<double> cost;
  std::vector<Triplet> coupling;
  int delta = 0;
  bool upper_bounded = false;  // x <= 1 rows needed
  // For vertex-expanded blocks: x_i = sum_r mu_r vertices[r].
  std::vector<std::vector<double>> recover_vertices;
};

}  // namespace

LpSolution reference_lp_solve(const Problem& p) {
  const ValidationReport validation = validate_problem(p);
  if (!validation.ok()) {
    throw Error(ErrorCode::kValidationError, validation.violations.front().reason);
  }

  std::vector<ExpandedBlock> expanded;
  expanded.reserve(p.blocks.size());
  int next_col = 0;
  for (const Block& b : p.blocks) {
    ExpandedBlock e;
    e.col_start = next_col;
    if (b.spec.kind == PolytopeKind::kGeneral || b.spec.kind == PolytopeKind::kParity) {
      std::vector<std::vector<double>> vertices;
      if (b.spec.kind == PolytopeKind::kGeneral) {
        vertices = b.spec.vertices;
      } else {
        if (b.dim > 14) throw Error(ErrorCode::kScaleExceeded, "parity block too large to expand");
        enumerate_even_subsets(b.dim, vertices);
      }
      e.kind = PolytopeKind::kSimplexEq;
      e.cols = static_cast<int>(vertices.size());
      e.cost.resize(e.cols);
      for (int r = 0; r < e.cols; ++r) {
        e.cost[r] = detail::dot(b.cost, vertices[r]);
      }
      // Coupling column r carries A_i v_r.
      std::vector<double> col(p.num_rows);
      for (int r = 0; r < e.cols; ++r) {
        std::fill(col.begin(), col.end(), 0.0);
        for (const Triplet& t : b.coupling) col[t.row] += t.value * vertices[r][t.col];
        for (int j = 0; j < p.num_rows; ++j) {
          if (col[j] != 0.0) e.coupling.push_back({j, r, col[j]});
        }
      }
      e.recover_vertices = std::move(vertices);
    } else {
      e.kind = b.spec.kind;
      e.cols = b.dim;
      e.cost = b.cost;
      e.coupling = b.coupling;
      e.delta = b.spec.delta;
      e.upper_bounded = (b.spec.kind == PolytopeKind::kBox ||
                         b.spec.kind == PolytopeKind::kBoxCutEq ||
                         b.spec.kind == PolytopeKind::kBoxCutIq);
    }
    next_col += e.cols;
    expanded.push_back(std::move(e));
  }

  // Count rows: coupling + per-block sum row + upper bounds; slacks become
  // extra structural columns.
  int sum_rows = 0;
  int upper_rows = 0;
  int slack_cols = 0;
  for (const ExpandedBlock& e : expanded) {
    switch (e.kind) {
      case PolytopeKind::kSimplexEq:
      case PolytopeKind::kBoxCutEq:
        ++sum_rows;
        break;
      case PolytopeKind::kSimplexIq:
      case PolytopeKind::kBoxCutIq:
        ++sum_rows;
        ++slack_cols;
        break;
      default:
        break;
    }
    if (e.upper_bounded) upper_rows += e.cols;
  }
  slack_cols += p.num_rows + upper_rows;

  const int rows = p.num_rows + sum_rows + upper_rows;
  const int cols = next_col + slack_cols;
  if (rows > 3000 || cols > 6000) {
    throw Error(ErrorCode::kScaleExceeded, "expanded LP too large for the dense simplex");
  }

  StandardLp lp;
  lp.rows = rows;
  lp.cols = cols;
  lp.a.assign(static_cast<size_t>(rows) * cols, 0.0);
  lp.rhs.assign(rows, 0.0);
  lp.cost.assign(cols, 0.0);
  lp.row_sign.assign(rows, 1);

  auto at = [&](int r, int c) -> double& { return lp.a[static_cast<size_t>(r) * cols + c]; };

  for (const ExpandedBlock& e : expanded) {
    for (int r = 0; r < e.cols; ++r) lp.cost[e.col_start + r] = e.cost[r];
    for (const Triplet& t : e.coupling) at(t.row, e.col_start + t.col) += t.value;
  }

  int next_row = p.num_rows;
  int next_slack = next_col;
  // Coupling rows: A x + s = b.
  for (int j = 0; j < p.num_rows; ++j) {
    at(j, next_slack) = 1.0;
    ++next_slack;
    lp.rhs[j] = p.budget[j];
  }
  // Block sum rows.
  for (const ExpandedBlock& e : expanded) {
    double target = 0.0;
    bool eq = false;
    switch (e.kind) {
      case PolytopeKind::kSimplexEq: target = 1.0; eq = true; break;
      case PolytopeKind::kSimplexIq: target = 1.0; break;
      case PolytopeKind::kBoxCutEq: target = e.delta; eq = true; break;
      case PolytopeKind::kBoxCutIq: target = e.delta; break;
      default: continue;
    }
    for (int r = 0; r < e.cols; ++r) at(next_row, e.col_start + r) = 1.0;
    if (!eq) {
      at(next_row, next_slack) = 1.0;
      ++next_slack;
    }
    lp.rhs[next_row] = target;
    ++next_row;
  }
  // Upper bound rows: x_k + u_k = 1.
  for (const ExpandedBlock& e : expanded) {
    if (!e.upper_bounded) continue;
    for (int r = 0; r < e.cols; ++r) {
      at(next_row, e.col_start + r) = 1.0;
      at(next_row, next_slack) = 1.0;
      ++next_slack;
      lp.rhs[next_row] = 1.0;
      ++next_row;
    }
  }

  // Normalize rhs signs for phase 1.
  for (int r = 0; r < rows; ++r) {
    if (lp.rhs[r] < 0.0) {
      lp.rhs[r] = -lp.rhs[r];
      lp.row_sign[r] = -1;
      for (int c = 0; c < cols; ++c) at(r, c) = -at(r, c);
    }
  }

  const SimplexOutcome outcome = solve_standard(lp);
  LpSolution solution;
  if (!outcome.feasible) return solution;

  solution.feasible = true;
  solution.x.x.assign(p.total_dim(), 0.0);
  const std::vector<int> offsets = p.block_offsets();
  for (size_t i = 0; i < expanded.size(); ++i) {
    const ExpandedBlock& e = expanded[i];
    double* xi = solution.x.x.data() + offsets[i];
    if (e.recover_vertices.empty()) {
      for (int r = 0; r < e.cols; ++r) xi[r] = outcome.x[e.col_start + r];
    } else {
      for (int r = 0; r < e.cols; ++r) {
        const double mu = outcome.x[e.col_start + r];
        if (mu == 0.0) continue;
        for (size_t k = 0; k < e.recover_vertices[r].size(); ++k) {
          xi[k] += mu * e.recover_vertices[r][k];
        }
      }
    }
  }
  solution.objective = objective(p, solution.x, 0.0);
  solution.duals.resize(p.num_rows);
  for (int j = 0; j < p.num_rows; ++j) {
    const double y = lp.row_sign[j] * outcome.duals[j];
    solution.duals[j] = std::max(0.0, -y);
  }
  return solution;
}

// ---------------------------------------------------------------------------
// Exact projection oracle.
// ---------------------------------------------------------------------------

namespace {

struct Candidate {
  bool valid = false;
  double dist_sq = kInf;
  std::vector<double> x;
};

void consider(Candidate& best, std::vector<double> x, std::span<const double> xhat) {
  double d = 0.0;
  for (size_t k = 0; k < x.size(); ++k) d += (x[k] - xhat[k]) * (x[k] - xhat[k]);
  if (!best.valid || d < best.dist_sq) {
    best.valid = true;
    best.dist_sq = d;
    best.x = std::move(x);
  }
}

constexpr double kFeasTol = 1e-10;

// Enumerate assignments of coordinates to {free, 0, 1} (ternary code) with an
// optional active sum constraint, project onto the resulting affine set and
// keep the feasible minimizer.
std::vector<double> project_box_family(std::span<const double> xhat, bool has_upper,
                                       bool has_sum, bool sum_eq, double sum_target) {
  const int dim = static_cast<int>(xhat.size());
  long combos = 1;
  for (int k = 0; k < dim; ++k) combos *= has_upper ? 3 : 2;

  Candidate best;
  std::vector<int> state(dim);  // 0 = free, 1 = at zero, 2 = at one
  for (long code = 0; code < combos; ++code) {
    long c = code;
    int free_count = 0;
    double fixed_sum = 0.0;
    double free_xhat_sum = 0.0;
    for (int k = 0; k < dim; ++k) {
      state[k] = static_cast<int>(c % (has_upper ? 3 : 2));
      c /= has_upper ? 3 : 2;
      if (state[k] == 0) {
        ++free_count;
        free_xhat_sum += xhat[k];
      } else if (state[k] == 2) {
        fixed_sum += 1.0;
      }
    }

    const int sum_modes = has_sum ? (sum_eq ? 1 : 2) : 1;
    for (int mode = 0; mode < sum_modes; ++mode) {
      const bool sum_active = has_sum && (sum_eq || mode == 1);
      double shift = 0.0;
      if (sum_active) {
        if (free_count == 0) {
          if (std::abs(fixed_sum - sum_target) > kFeasTol) continue;
        } else {
          shift = (free_xhat_sum + fixed_sum - sum_target) / free_count;
        }
      }
      std::vector<double> x(dim);
      bool ok = true;
      double total = 0.0;
      for (int k = 0; k < dim; ++k) {
        if (state[k] == 0) {
          x[k] = xhat[k] - shift;
          if (x[k] < -kFeasTol || (has_upper && x[k] > 1.0 + kFeasTol)) {
            ok = false;
            break;
          }
          x[k] = std::clamp(x[k], 0.0, has_upper ? 1.0 : kInf);
        } else {
          x[k] = state[k] == 2 ? 1.0 : 0.0;
        }
        total += x[k];
      }
      if (!ok) continue;
      if (has_sum && !sum_active && total > sum_target + kFeasTol) continue;
      if (has_sum && sum_active && free_count == 0 &&
          std::abs(total - sum_target) > kFeasTol) {
        continue;
      }
      consider(best, std::move(x), xhat);
    }
  }
  if (!best.valid) {
    throw Error(ErrorCode::kScaleExceeded, "face enumeration found no feasible candidate");
  }
  return best.x;
}

// Projection of u onto {w in [0,1]^K : sum w = target} via the exact
// breakpoint scan of h(nu) = sum clamp(u - nu, 0, 1).
std::vector<double> project_box_slab(const std::vector<double>& u, double target) {
  const int dim = static_cast<int>(u.size());
  std::vector<double> breakpoints;
  breakpoints.reserve(2 * dim);
  for (double v : u) {
    breakpoints.push_back(v - 1.0);  // below: coordinate pinned at 1
    breakpoints.push_back(v);        // above: coordinate pinned at 0
  }
  std::sort(breakpoints.begin(), breakpoints.end());

  auto h = [&](double nu) {
    double s = 0.0;
    for (double v : u) s += std::clamp(v - nu, 0.0, 1.0);
    return s;
  };

  double nu = breakpoints.front();
  if (h(nu) < target) {
    nu = breakpoints.front();  // target >= K impossible for our callers
  } else {
    for (size_t i = 0; i + 1 < breakpoints.size(); ++i) {
      const double lo = breakpoints[i];
      const double hi = breakpoints[i + 1];
      const double h_lo = h(lo);
      const double h_hi = h(hi);
      if (h_lo >= target && target >= h_hi) {
        nu = (h_lo == h_hi) ? lo : lo + (h_lo - target) * (hi - lo) / (h_lo - h_hi);
        break;
      }
      nu = hi;
    }
  }
  std::vector<double> w(dim);
  for (int k = 0; k < dim; ++k) w[k] = std::clamp(u[k] - nu, 0.0, 1.0);
  return w;
}

std::vector<double> project_parity_reference(std::span<const double> xhat) {
  const int dim = static_cast<int>(xhat.size());
  std::vector<double> z(dim);
  for (int k = 0; k < dim; ++k) z[k] = std::clamp(xhat[k], 0.0, 1.0);

  // Most-violated odd-set candidate: round z, then force odd cardinality by
  // flipping the coordinate nearest 1/2.
  std::vector<bool> in_set(dim);
  int cardinality = 0;
  for (int k = 0; k < dim; ++k) {
    in_set[k] = z[k] > 0.5;
    cardinality += in_set[k] ? 1 : 0;
  }
  if (cardinality % 2 == 0) {
    int flip = 0;
    double flip_cost = kInf;
    for (int k = 0; k < dim; ++k) {
      const double cost = std::abs(2.0 * z[k] - 1.0);
      if (cost < flip_cost) {
        flip_cost = cost;
        flip = k;
      }
    }
    in_set[flip] = !in_set[flip];
    cardinality += in_set[flip] ? 1 : -1;
  }

  double facet_value = 0.0;
  for (int k = 0; k < dim; ++k) facet_value += in_set[k] ? z[k] : -z[k];
  if (facet_value <= cardinality - 1.0) return z;

  // Mirror the complement, project onto the box slab {sum w = K - 1},
  // mirror back.
  std::vector<double> u(dim);
  for (int k = 0; k < dim; ++k) u[k] = in_set[k] ? xhat[k] : 1.0 - xhat[k];
  const std::vector<double> w = project_box_slab(u, dim - 1.0);
  std::vector<double> x(dim);
  for (int k = 0; k < dim; ++k) x[k] = in_set[k] ? w[k] : 1.0 - w[k];
  return x;
}

// Local least-squares affine fit used only by the vertex-hull oracle.
bool affine_fit(const std::vector<const std::vector<double>*>& subset,
                std::span<const double> xhat, std::vector<double>& coeffs) {
  const int s = static_cast<int>(subset.size());
  const int n = s + 1;
  std::vector<double> m(static_cast<size_t>(n) * n, 0.0);
  std::vector<double> rhs(n, 0.0);
  for (int a = 0; a < s; ++a) {
    for (int b = a; b < s; ++b) {
      double g = 0.0;
      for (size_t k = 0; k < xhat.size(); ++k) g += (*subset[a])[k] * (*subset[b])[k];
      m[a * n + b] = g;
      m[b * n + a] = g;
    }
    m[a * n + s] = 1.0;
    m[s * n + a] = 1.0;
    double d = 0.0;
    for (size_t k = 0; k < xhat.size(); ++k) d += (*subset[a])[k] * xhat[k];
    rhs[a] = d;
  }
  rhs[s] = 1.0;

  // Gaussian elimination, failing on tiny pivots (dependent subsets are
  // skipped by the caller).
  for (int c = 0; c < n; ++c) {
    int pivot = c;
    for (int r = c + 1; r < n; ++r) {
      if (std::abs(m[r * n + c]) > std::abs(m[pivot * n + c])) pivot = r;
    }
    if (std::abs(m[pivot * n + c]) < 1e-11) return false;
    if (pivot != c) {
      for (int j = 0; j < n; ++j) std::swap(m[c * n + j], m[pivot * n + j]);
      std::swap(rhs[c], rhs[pivot]);
    }
    for (int r = c + 1; r < n; ++r) {
      const double f = m[r * n + c] / m[c * n + c];
      if (f == 0.0) continue;
      for (int j = c; j < n; ++j) m[r * n + j] -= f * m[c * n + j];
      rhs[r] -= f * rhs[c];
    }
  }
  coeffs.assign(n, 0.0);
  for (int r = n - 1; r >= 0; --r) {
    double v = rhs[r];
    for (int j = r + 1; j < n; ++j) v -= m[r * n + j] * coeffs[j];
    coeffs[r] = v / m[r * n + r];
  }
  coeffs.resize(s);
  return true;
}

std::vector<double> project_hull_reference(const std::vector<std::vector<double>>& vertices,
                                           std::span<const double> xhat) {
  const int dim = static_cast<int>(xhat.size());
  const int count = static_cast<int>(vertices.size());
  if (count > 16) {
    throw Error(ErrorCode::kScaleExceeded, "vertex-hull oracle limited to 16 vertices");
  }
  const int max_size = std::min(count, dim + 1);

  Candidate best;
  std::vector<int> pick;
  std::vector<const std::vector<double>*> subset;
  std::vector<double> coeffs;

  // Enumerate all vertex subsets up to dim + 1 and keep the feasible
  // simplicial least-squares minimizer.
  auto recurse = [&](auto&& self, int start) -> void {
    if (!pick.empty()) {
      subset.clear();
      for (int r : pick) subset.push_back(&vertices[r]);
      if (subset.size() == 1) {
        consider(best, *subset[0], xhat);
      } else if (affine_fit(subset, xhat, coeffs)) {
        bool feasible = true;
        for (double a : coeffs) {
          if (a < -1e-10) {
            feasible = false;
            break;
          }
        }
        if (feasible) {
          std::vector<double> x(dim, 0.0);
          for (size_t a = 0; a < subset.size(); ++a) {
            for (int k = 0; k < dim; ++k) x[k] += coeffs[a] * (*subset[a])[k];
          }
          consider(best, std::move(x), xhat);
        }
      }
    }
    if (static_cast<int>(pick.size()) == max_size) return;
    for (int r = start; r < count; ++r) {
      pick.push_back(r);
      self(self, r + 1);
      pick.pop_back();
    }
  };
  recurse(recurse, 0);

  if (!best.valid) {
    throw Error(ErrorCode::kScaleExceeded, "hull enumeration found no candidate");
  }
  return best.x;
}

}  // namespace

std::vector<double> reference_qp_project(const PolytopeSpec& spec,
                                         std::span<const double> xhat) {
  const int dim = static_cast<int>(xhat.size());
  if (dim > 10 && spec.kind != PolytopeKind::kParity) {
    throw Error(ErrorCode::kScaleExceeded, "reference projection limited to K <= 10");
  }
  switch (spec.kind) {
    case PolytopeKind::kBox:
      return project_box_family(xhat, true, false, false, 0.0);
    case PolytopeKind::kSimplexEq:
      return project_box_family(xhat, false, true, true, 1.0);
    case PolytopeKind::kSimplexIq:
      return project_box_family(xhat, false, true, false, 1.0);
    case PolytopeKind::kBoxCutEq:
      return project_box_family(xhat, true, true, true, spec.delta);
    case PolytopeKind::kBoxCutIq:
      return project_box_family(xhat, true, true, false, spec.delta);
    case PolytopeKind::kParity:
      return project_parity_reference(xhat);
    case PolytopeKind::kGeneral:
      return project_hull_reference(spec.vertices, xhat);
  }
  throw Error(ErrorCode::kInvalidSpec, "unknown polytope kind");
}

}  // namespace dualproj
