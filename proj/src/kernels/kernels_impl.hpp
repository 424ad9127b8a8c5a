#pragma once

#include <cstddef>

#include "sirmeta/kernels.hpp"

namespace sirmeta::kernels {

// One node of eta_deficit_orders. 1 - q^m is accumulated as
// sum_{j<m} q^j (1 - q) so no cancellation occurs when s g is small.
// The AVX2 variant performs the same operations lane-wise and uses this for
// its remainder, so both variants agree bit for bit.
inline void eta_deficit_orders_one(double s, double p, double gl, double gn, std::size_t orders,
                                   double* out) {
  const double xl = s * gl;
  const double xn = s * gn;
  const double ql = 1.0 / (1.0 + xl);
  const double qn = 1.0 / (1.0 + xn);
  const double dl = xl * ql;
  const double dn = xn * qn;
  const double pn = 1.0 - p;
  double pow_l = 1.0;
  double pow_n = 1.0;
  double acc_l = 0.0;
  double acc_n = 0.0;
  for (std::size_t m = 0; m < orders; ++m) {
    acc_l = acc_l + pow_l * dl;
    acc_n = acc_n + pow_n * dn;
    pow_l = pow_l * ql;
    pow_n = pow_n * qn;
    out[m] = p * acc_l + pn * acc_n;
  }
}

namespace scalar {
void eta_deficit_orders(double s, const double* p, const double* gl, const double* gn,
                        std::size_t n, std::size_t orders, double* out);
double success_product(double s, const double* gains, std::size_t n);
void power_sums(const double* v, std::size_t n, std::size_t orders, double* sums);
}  // namespace scalar

#if defined(__x86_64__) || defined(_M_X64)
#define SIRMETA_HAVE_AVX2_KERNELS 1
namespace avx2 {
void eta_deficit_orders(double s, const double* p, const double* gl, const double* gn,
                        std::size_t n, std::size_t orders, double* out);
double success_product(double s, const double* gains, std::size_t n);
void power_sums(const double* v, std::size_t n, std::size_t orders, double* sums);
}  // namespace avx2
#endif

}  // namespace sirmeta::kernels
