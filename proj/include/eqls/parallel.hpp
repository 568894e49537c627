#pragma once

#include <cstdlib>
#include <functional>
#include <thread>
#include <vector>

#include "matrix.hpp"

namespace eqls {

/// Worker count for data-parallel sections; EQLS_WORKERS overrides.
inline int default_workers() {
  if (const char* env = std::getenv("EQLS_WORKERS")) {
    int n = std::atoi(env);
    if (n > 0) return n;
  }
  return 1;
}

/// Runs fn(i) for i in [0, n) on `workers` threads over contiguous index
/// ranges. fn must not touch shared mutable state except its own slot.
inline void parallel_for(std::size_t n, int workers,
                         const std::function<void(std::size_t)>& fn) {
  if (workers <= 1 || n <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  const std::size_t nw = std::min<std::size_t>(workers, n);
  std::vector<std::thread> pool;
  pool.reserve(nw);
  for (std::size_t w = 0; w < nw; ++w) {
    const std::size_t lo = n * w / nw;
    const std::size_t hi = n * (w + 1) / nw;
    pool.emplace_back([lo, hi, &fn] {
      for (std::size_t i = lo; i < hi; ++i) fn(i);
    });
  }
  for (auto& t : pool) t.join();
}

/// Row-partitioned matmul. Identical output for any worker count: each row's
/// summation order is fixed inside matmul's inner loop.
inline ComplexMatrix matmul_parallel(const ComplexMatrix& a,
                                     const ComplexMatrix& b, int workers) {
  if (a.cols() != b.rows())
    throw std::invalid_argument("matmul_parallel: shape mismatch");
  ComplexMatrix out(a.rows(), b.cols());
  parallel_for(a.rows(), workers, [&](std::size_t i) {
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const cplx aik = a(i, k);
      if (aik == cplx{}) continue;
      for (std::size_t j = 0; j < b.cols(); ++j) out(i, j) += aik * b(k, j);
    }
  });
  return out;
}

}  // namespace eqls
