#include "kernels/kernels_impl.hpp"

#if defined(SIRMETA_HAVE_AVX2_KERNELS)

#include <immintrin.h>

#include <vector>

namespace sirmeta::kernels::avx2 {

__attribute__((target("avx2"))) void eta_deficit_orders(double s, const double* p, const double* gl,
                                                        const double* gn, std::size_t n,
                                                        std::size_t orders, double* out) {
  const __m256d one = _mm256_set1_pd(1.0);
  const __m256d sv = _mm256_set1_pd(s);
  alignas(32) double lane[4];
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d pv = _mm256_loadu_pd(p + i);
    const __m256d xl = _mm256_mul_pd(sv, _mm256_loadu_pd(gl + i));
    const __m256d xn = _mm256_mul_pd(sv, _mm256_loadu_pd(gn + i));
    const __m256d ql = _mm256_div_pd(one, _mm256_add_pd(one, xl));
    const __m256d qn = _mm256_div_pd(one, _mm256_add_pd(one, xn));
    const __m256d dl = _mm256_mul_pd(xl, ql);
    const __m256d dn = _mm256_mul_pd(xn, qn);
    const __m256d pn = _mm256_sub_pd(one, pv);
    __m256d pow_l = one;
    __m256d pow_n = one;
    __m256d acc_l = _mm256_setzero_pd();
    __m256d acc_n = _mm256_setzero_pd();
    for (std::size_t m = 0; m < orders; ++m) {
      acc_l = _mm256_add_pd(acc_l, _mm256_mul_pd(pow_l, dl));
      acc_n = _mm256_add_pd(acc_n, _mm256_mul_pd(pow_n, dn));
      pow_l = _mm256_mul_pd(pow_l, ql);
      pow_n = _mm256_mul_pd(pow_n, qn);
      _mm256_store_pd(lane, _mm256_add_pd(_mm256_mul_pd(pv, acc_l), _mm256_mul_pd(pn, acc_n)));
      for (std::size_t j = 0; j < 4; ++j) out[(i + j) * orders + m] = lane[j];
    }
  }
  for (; i < n; ++i) eta_deficit_orders_one(s, p[i], gl[i], gn[i], orders, out + i * orders);
}

__attribute__((target("avx2"))) double success_product(double s, const double* gains,
                                                       std::size_t n) {
  const __m256d one = _mm256_set1_pd(1.0);
  const __m256d sv = _mm256_set1_pd(s);
  __m256d prod = one;
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d g = _mm256_loadu_pd(gains + i);
    prod = _mm256_mul_pd(prod, _mm256_div_pd(one, _mm256_add_pd(one, _mm256_mul_pd(sv, g))));
  }
  alignas(32) double lane[4];
  _mm256_store_pd(lane, prod);
  double result = (lane[0] * lane[1]) * (lane[2] * lane[3]);
  for (; i < n; ++i) result *= 1.0 / (1.0 + s * gains[i]);
  return result;
}

__attribute__((target("avx2"))) void power_sums(const double* v, std::size_t n, std::size_t orders,
                                                double* sums) {
  std::vector<double> acc(4 * orders, 0.0);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d x = _mm256_loadu_pd(v + i);
    __m256d pw = _mm256_set1_pd(1.0);
    for (std::size_t k = 0; k < orders; ++k) {
      pw = _mm256_mul_pd(pw, x);
      _mm256_storeu_pd(&acc[4 * k], _mm256_add_pd(_mm256_loadu_pd(&acc[4 * k]), pw));
    }
  }
  for (std::size_t k = 0; k < orders; ++k) {
    const double* lane = &acc[4 * k];
    sums[k] = (lane[0] + lane[1]) + (lane[2] + lane[3]);
  }
  for (; i < n; ++i) {
    double pw = 1.0;
    for (std::size_t k = 0; k < orders; ++k) {
      pw *= v[i];
      sums[k] += pw;
    }
  }
}

}  // namespace sirmeta::kernels::avx2

#endif
