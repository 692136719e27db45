#pragma once

#include <cstddef>
#include <string>

namespace windml::nn::detail {

// C(m x n) = beta C + op(A)(m x k) op(B)(k x n), dense row-major.
void gemm(bool trans_a, bool trans_b, std::size_t m, std::size_t n, std::size_t k, const double* a, const double* b,
          double beta, double* c);
/// Same with explicit leading dimensions (row strides).
void gemm(bool trans_a, bool trans_b, std::size_t m, std::size_t n, std::size_t k, const double* a, std::size_t lda,
          const double* b, std::size_t ldb, double beta, double* c, std::size_t ldc);

/// "openblas" or "eigen", resolved on first use.
std::string gemm_backend();
void gemm_set_threads(int n);

}  // namespace windml::nn::detail
