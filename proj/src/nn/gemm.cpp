#include "gemm.hpp"

#include <dlfcn.h>

#include <Eigen/Core>
#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <mutex>
#include <vector>

#ifndef WINDML_OPENBLAS_SONAME
#define WINDML_OPENBLAS_SONAME "libopenblas.so.0"
#endif

namespace windml::nn::detail {

namespace {

// cblas enum values, so no BLAS header is needed.
constexpr int kRowMajor = 101;
constexpr int kNoTrans = 111;
constexpr int kTrans = 112;

using DgemmFn = void (*)(int, int, int, int, int, int, double, const double*, int, const double*, int, double,
                         double*, int);
using ThreadsFn = void (*)(int);

struct Backend {
  DgemmFn dgemm = nullptr;
  ThreadsFn set_threads = nullptr;
};

using RowMat = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using Stride = Eigen::OuterStride<>;
using MapC = Eigen::Map<const RowMat, 0, Stride>;

void eigen_gemm(bool ta, bool tb, std::size_t m, std::size_t n, std::size_t k, const double* a, std::size_t lda,
                const double* b, std::size_t ldb, double beta, double* c, std::size_t ldc) {
  const auto mi = static_cast<Eigen::Index>(m), ni = static_cast<Eigen::Index>(n), ki = static_cast<Eigen::Index>(k);
  Eigen::Map<RowMat, 0, Stride> cm(c, mi, ni, Stride(static_cast<Eigen::Index>(ldc)));
  if (beta == 0.0) cm.setZero();
  const MapC am(a, ta ? ki : mi, ta ? mi : ki, Stride(static_cast<Eigen::Index>(lda)));
  const MapC bm(b, tb ? ni : ki, tb ? ki : ni, Stride(static_cast<Eigen::Index>(ldb)));
  if (!ta && !tb) cm.noalias() += am * bm;
  else if (ta && !tb) cm.noalias() += am.transpose() * bm;
  else if (!ta && tb) cm.noalias() += am * bm.transpose();
  else cm.noalias() += am.transpose() * bm.transpose();
}

// OpenBLAS 0.3.20 selects a Cooperlake dgemm kernel on recent Xeons that
// returns wrong products; its SkylakeX kernel is correct on the same parts.
// The core type is read once when the library initializes, hence dlopen.
bool self_test(DgemmFn fn) {
  constexpr int m = 32, n = 96, k = 288;
  std::vector<double> a(m * k), b(k * n), c(m * n, 0.0);
  std::uint64_t s = 0x9E3779B97F4A7C15ULL;
  auto next = [&] {
    s ^= s << 13;
    s ^= s >> 7;
    s ^= s << 17;
    return static_cast<double>(s >> 11) * 0x1.0p-53 - 0.5;
  };
  for (auto& v : a) v = next();
  for (auto& v : b) v = next();
  for (const bool tb : {false, true}) {
    fn(kRowMajor, kNoTrans, tb ? kTrans : kNoTrans, m, n, k, 1.0, a.data(), k, b.data(), tb ? k : n, 0.0, c.data(),
       n);
    for (int i = 0; i < m; ++i) {
      for (int j = 0; j < n; ++j) {
        double ref = 0.0;
        for (int l = 0; l < k; ++l) ref += a[i * k + l] * (tb ? b[j * k + l] : b[l * n + j]);
        if (std::abs(ref - c[i * n + j]) > 1e-10) return false;
      }
    }
  }
  return true;
}

Backend load_backend() {
  Backend be;
  if (std::getenv("WINDML_NO_OPENBLAS")) return be;
  __builtin_cpu_init();
  if (!std::getenv("OPENBLAS_CORETYPE") && __builtin_cpu_supports("avx512f")) {
    setenv("OPENBLAS_CORETYPE", "SkylakeX", 0);
  }
  void* lib = dlopen(WINDML_OPENBLAS_SONAME, RTLD_NOW | RTLD_LOCAL);
  if (!lib) return be;
  auto dgemm = reinterpret_cast<DgemmFn>(dlsym(lib, "cblas_dgemm"));
  auto threads = reinterpret_cast<ThreadsFn>(dlsym(lib, "openblas_set_num_threads"));
  if (!dgemm) return be;
  if (threads) threads(1);
  if (!self_test(dgemm)) return be;
  be.dgemm = dgemm;
  be.set_threads = threads;
  return be;
}

const Backend& backend() {
  static const Backend be = load_backend();
  return be;
}

}  // namespace

void gemm(bool ta, bool tb, std::size_t m, std::size_t n, std::size_t k, const double* a, std::size_t lda,
          const double* b, std::size_t ldb, double beta, double* c, std::size_t ldc) {
  if (m == 0 || n == 0) return;
  if (k == 0) {
    if (beta == 0.0) {
      for (std::size_t i = 0; i < m; ++i) std::fill(c + i * ldc, c + i * ldc + n, 0.0);
    }
    return;
  }
  const Backend& be = backend();
  if (!be.dgemm) {
    eigen_gemm(ta, tb, m, n, k, a, lda, b, ldb, beta, c, ldc);
    return;
  }
  auto i32 = [](std::size_t v) { return static_cast<int>(v); };
  be.dgemm(kRowMajor, ta ? kTrans : kNoTrans, tb ? kTrans : kNoTrans, i32(m), i32(n), i32(k), 1.0, a, i32(lda), b,
           i32(ldb), beta, c, i32(ldc));
}

void gemm(bool ta, bool tb, std::size_t m, std::size_t n, std::size_t k, const double* a, const double* b, double beta,
          double* c) {
  gemm(ta, tb, m, n, k, a, ta ? m : k, b, tb ? k : n, beta, c, n);
}

std::string gemm_backend() { return backend().dgemm ? "openblas" : "eigen"; }

void gemm_set_threads(int n) {
  const Backend& be = backend();
  if (be.set_threads) be.set_threads(std::max(1, n));
}

}  // namespace windml::nn::detail
