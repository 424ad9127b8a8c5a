#include "kernels/kernels_impl.hpp"

namespace sirmeta::kernels::scalar {

void eta_deficit_orders(double s, const double* p, const double* gl, const double* gn,
                        std::size_t n, std::size_t orders, double* out) {
  for (std::size_t i = 0; i < n; ++i) {
    eta_deficit_orders_one(s, p[i], gl[i], gn[i], orders, out + i * orders);
  }
}

double success_product(double s, const double* gains, std::size_t n) {
  double prod = 1.0;
  for (std::size_t i = 0; i < n; ++i) prod *= 1.0 / (1.0 + s * gains[i]);
  return prod;
}

void power_sums(const double* v, std::size_t n, std::size_t orders, double* sums) {
  for (std::size_t k = 0; k < orders; ++k) sums[k] = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double pw = 1.0;
    for (std::size_t k = 0; k < orders; ++k) {
      pw *= v[i];
      sums[k] += pw;
    }
  }
}

}  // namespace sirmeta::kernels::scalar
