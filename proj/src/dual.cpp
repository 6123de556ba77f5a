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

#include "dualproj/dual.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <thread>

#include "dualproj/error.hpp"

namespace dualproj {

CorralStats corral_stats(std::span<const int> corral_dims) {
  CorralStats stats;
  stats.total_blocks = static_cast<long>(corral_dims.size());
  long sum = 0;
  for (int d : corral_dims) {
    sum += d;
    if (d == 0) ++stats.vertex_blocks;
    if (d >= static_cast<int>(stats.histogram.size())) stats.histogram.resize(d + 1, 0);
    ++stats.histogram[d];
  }
  stats.mean_dim = stats.total_blocks > 0 ? static_cast<double>(sum) / stats.total_blocks : 0.0;
  return stats;
}

CorralStats corral_stats(const std::vector<ProjectionResult>& results) {
  std::vector<int> dims(results.size());
  for (size_t i = 0; i < results.size(); ++i) dims[i] = results[i].corral_dim;
  return corral_stats(dims);
}

namespace {

// xhat_i = -(A_i^T lambda + c_i) / gamma
void block_target(const Block& block, std::span<const double> lambda, double gamma,
                  std::vector<double>& xhat) {
  xhat.assign(block.dim, 0.0);
  for (const Triplet& t : block.coupling) {
    xhat[t.col] += t.value * lambda[t.row];
  }
  for (int k = 0; k < block.dim; ++k) {
    xhat[k] = -(xhat[k] + block.cost[k]) / gamma;
  }
}

struct ChunkPartial {
  double primal = 0.0;  // sum of c_i^T x_i + (gamma/2) ||x_i||^2
  std::vector<double> ax;
  long corral_sum = 0;
  long vertex_blocks = 0;
  std::vector<long> histogram;
};

}  // namespace

ProjectionResult block_argmin(const Block& block, std::span<const double> lambda, double gamma) {
  if (!(gamma > 0.0)) throw Error(ErrorCode::kInvalidGamma, "gamma must be positive");
  std::vector<double> xhat;
  block_target(block, lambda, gamma, xhat);
  return project_polytope(block.spec, xhat);
}

DualEvaluation eval_dual(const Problem& p, std::span<const double> lambda, double gamma,
                         const DualEvalOptions& opts) {
  if (!(gamma > 0.0)) throw Error(ErrorCode::kInvalidGamma, "gamma must be positive");
  if (static_cast<int>(lambda.size()) != p.num_rows) {
    throw Error(ErrorCode::kDimensionMismatch, "lambda length does not match row count");
  }

  const int num_blocks = p.num_blocks();
  const int num_chunks = (num_blocks + kBlockChunkSize - 1) / kBlockChunkSize;
  const std::vector<int> offsets = p.block_offsets();

  DualEvaluation out;
  if (opts.retain_x) {
    out.has_x = true;
    out.x_star.x.assign(p.total_dim(), 0.0);
  }

  std::vector<ChunkPartial> partials(num_chunks);
  auto run_chunk = [&](int c) {
    ChunkPartial& part = partials[c];
    part.ax.assign(p.num_rows, 0.0);
    std::vector<double> xhat;
    const int lo = c * kBlockChunkSize;
    const int hi = std::min(num_blocks, lo + kBlockChunkSize);
    for (int i = lo; i < hi; ++i) {
      const Block& b = p.blocks[i];
      block_target(b, lambda, gamma, xhat);
      ProjectionResult proj = project_polytope(b.spec, xhat);

      double lin = 0.0;
      double sq = 0.0;
      for (int k = 0; k < b.dim; ++k) {
        lin += b.cost[k] * proj.x[k];
        sq += proj.x[k] * proj.x[k];
      }
      part.primal += lin + 0.5 * gamma * sq;
      for (const Triplet& t : b.coupling) part.ax[t.row] += t.value * proj.x[t.col];

      part.corral_sum += proj.corral_dim;
      if (proj.corral_dim == 0) ++part.vertex_blocks;
      if (proj.corral_dim >= static_cast<int>(part.histogram.size())) {
        part.histogram.resize(proj.corral_dim + 1, 0);
      }
      ++part.histogram[proj.corral_dim];

      if (opts.retain_x) {
        std::copy(proj.x.begin(), proj.x.end(), out.x_star.x.begin() + offsets[i]);
      }
    }
  };

  const int workers = std::max(1, opts.threads);
  if (workers == 1 || num_chunks <= 1) {
    for (int c = 0; c < num_chunks; ++c) run_chunk(c);
  } else {
    std::atomic<int> next{0};
    std::vector<std::thread> pool;
    const int spawn = std::min(workers, num_chunks);
    pool.reserve(spawn);
    for (int w = 0; w < spawn; ++w) {
      pool.emplace_back([&]() {
        while (true) {
          const int c = next.fetch_add(1);
          if (c >= num_chunks) break;
          run_chunk(c);
        }
      });
    }
    for (std::thread& t : pool) t.join();
  }

  // Reduce in chunk order; this fixes the floating-point summation order
  // independently of the worker count.
  out.grad.assign(p.num_rows, 0.0);
  double primal = 0.0;
  long corral_sum = 0;
  for (const ChunkPartial& part : partials) {
    primal += part.primal;
    for (int j = 0; j < p.num_rows; ++j) out.grad[j] += part.ax[j];
    corral_sum += part.corral_sum;
    out.stats.vertex_blocks += part.vertex_blocks;
    if (part.histogram.size() > out.stats.histogram.size()) {
      out.stats.histogram.resize(part.histogram.size(), 0);
    }
    for (size_t d = 0; d < part.histogram.size(); ++d) out.stats.histogram[d] += part.histogram[d];
  }
  for (int j = 0; j < p.num_rows; ++j) out.grad[j] -= p.budget[j];
  out.stats.total_blocks = num_blocks;
  out.stats.mean_dim = num_blocks > 0 ? static_cast<double>(corral_sum) / num_blocks : 0.0;
  out.g = primal + detail::dot(lambda, out.grad);
  return out;
}

G0Evaluation eval_g0(const Problem& p, std::span<const double> lambda) {
  if (static_cast<int>(lambda.size()) != p.num_rows) {
    throw Error(ErrorCode::kDimensionMismatch, "lambda length does not match row count");
  }
  const int num_blocks = p.num_blocks();
  const int num_chunks = (num_blocks + kBlockChunkSize - 1) / kBlockChunkSize;
  const std::vector<int> offsets = p.block_offsets();

  G0Evaluation out;
  out.x_bar.x.assign(p.total_dim(), 0.0);
  double total = 0.0;
  std::vector<double> score;
  for (int c = 0; c < num_chunks; ++c) {
    double chunk_sum = 0.0;
    const int lo = c * kBlockChunkSize;
    const int hi = std::min(num_blocks, lo + kBlockChunkSize);
    for (int i = lo; i < hi; ++i) {
      const Block& b = p.blocks[i];
      score.assign(b.cost.begin(), b.cost.end());
      for (const Triplet& t : b.coupling) score[t.col] += t.value * lambda[t.row];
      const LinMinResult lm = polytope_linmin(b.spec, score, b.dim);
      chunk_sum += lm.value;
      materialize_vertex(b.spec, lm.vertex,
                         std::span<double>(out.x_bar.x.data() + offsets[i], b.dim));
    }
    total += chunk_sum;
  }
  out.value = total - detail::dot(lambda, p.budget);
  return out;
}

}  // namespace dualproj
