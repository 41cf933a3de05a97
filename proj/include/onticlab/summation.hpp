#pragma once

#include <algorithm>
#include <cstddef>
#include <functional>
#include <span>
#include <thread>
#include <vector>

namespace onticlab {

/// Pairwise (cascade) summation. The recursion tree depends only on the
/// length of the input, so the result is reproducible bit for bit.
inline double pairwise_sum(std::span<const double> xs) {
  constexpr std::size_t kLeaf = 32;
  if (xs.size() <= kLeaf) {
    double s = 0.0;
    for (double x : xs) s += x;
    return s;
  }
  const std::size_t half = xs.size() / 2;
  return pairwise_sum(xs.first(half)) + pairwise_sum(xs.subspan(half));
}

/// Elements per block in the deterministic parallel reduction. Fixed, so the
/// block partition (and the result) never depends on the worker count.
inline constexpr std::size_t kReductionBlock = 4096;

/// Sum term(i) for i in [0, n) using fixed-size blocks, each reduced
/// pairwise, and the block partials reduced pairwise in index order.
/// `workers` only changes who computes each block.
inline double deterministic_sum(std::size_t n,
                                const std::function<double(std::size_t)>& term,
                                unsigned workers = 1) {
  const std::size_t blocks = (n + kReductionBlock - 1) / kReductionBlock;
  std::vector<double> partial(blocks, 0.0);

  auto reduce_block = [&](std::size_t b) {
    const std::size_t lo = b * kReductionBlock;
    const std::size_t hi = std::min(n, lo + kReductionBlock);
    std::vector<double> buf(hi - lo);
    for (std::size_t i = lo; i < hi; ++i) buf[i - lo] = term(i);
    partial[b] = pairwise_sum(buf);
  };

  workers = std::max(1u, workers);
  if (workers == 1 || blocks < 2) {
    for (std::size_t b = 0; b < blocks; ++b) reduce_block(b);
  } else {
    const unsigned used = static_cast<unsigned>(std::min<std::size_t>(workers, blocks));
    std::vector<std::jthread> pool;
    pool.reserve(used);
    for (unsigned w = 0; w < used; ++w) {
      pool.emplace_back([&, w] {
        for (std::size_t b = w; b < blocks; b += used) reduce_block(b);
      });
    }
  }
  return pairwise_sum(partial);
}

} // namespace onticlab
