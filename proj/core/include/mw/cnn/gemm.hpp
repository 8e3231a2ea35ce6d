#pragma once

#include <algorithm>
#include <cstddef>

namespace mw::cnn {

// C[M,N] += A[M,K] * B[K,N], all row-major. Small row blocks of A with the
// k loop in the middle keep eight output rows hot while the inner j loop
// runs as vectorizable axpy updates; accumulation order is fixed, so results
// are bit-reproducible run to run.
template <typename T>
void gemm(int m, int n, int k, const T* a, const T* b, T* c) {
  constexpr int kRowBlock = 8;
  for (int i0 = 0; i0 < m; i0 += kRowBlock) {
    int i1 = std::min(m, i0 + kRowBlock);
    for (int kk = 0; kk < k; ++kk) {
      const T* brow = b + static_cast<std::size_t>(kk) * n;
      for (int i = i0; i < i1; ++i) {
        T av = a[static_cast<std::size_t>(i) * k + kk];
        T* crow = c + static_cast<std::size_t>(i) * n;
        for (int j = 0; j < n; ++j) {
          crow[j] += av * brow[j];
        }
      }
    }
  }
}

// out[N,M] = in[M,N] transposed, blocked for cache friendliness.
template <typename T>
void transpose(int m, int n, const T* in, T* out) {
  constexpr int kTile = 32;
  for (int i0 = 0; i0 < m; i0 += kTile) {
    int i1 = std::min(m, i0 + kTile);
    for (int j0 = 0; j0 < n; j0 += kTile) {
      int j1 = std::min(n, j0 + kTile);
      for (int i = i0; i < i1; ++i) {
        for (int j = j0; j < j1; ++j) {
          out[static_cast<std::size_t>(j) * m + i] = in[static_cast<std::size_t>(i) * n + j];
        }
      }
    }
  }
}

// Dot product with four independent accumulator chains. The fixed
// re-association lets the compiler vectorize the reduction without
// fast-math while keeping results deterministic.
template <typename T>
T dot(const T* a, const T* b, int n) {
  T s0{}, s1{}, s2{}, s3{};
  int i = 0;
  for (; i + 4 <= n; i += 4) {
    s0 += a[i] * b[i];
    s1 += a[i + 1] * b[i + 1];
    s2 += a[i + 2] * b[i + 2];
    s3 += a[i + 3] * b[i + 3];
  }
  for (; i < n; ++i) {
    s0 += a[i] * b[i];
  }
  return ((s0 + s1) + (s2 + s3));
}

// y[n] += alpha * x[n]
template <typename T>
void axpy(int n, T alpha, const T* x, T* y) {
  for (int i = 0; i < n; ++i) {
    y[i] += alpha * x[i];
  }
}

}  // namespace mw::cnn
