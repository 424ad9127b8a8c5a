#pragma once

#include <cstddef>
#include <span>
#include <string_view>

// Data-parallel inner loops. Each kernel has a portable scalar reference and
// an AVX2 variant; the variant is picked at runtime from CPU support and can
// be forced with SIRMETA_SIMD=scalar|avx2.
namespace sirmeta::kernels {

enum class SimdLevel { scalar, avx2 };

std::string_view to_string(SimdLevel level);

struct KernelSet {
  // out[i * orders + (m - 1)] = 1 - eta_m(s, r_i) for m = 1..orders, where
  // eta_m = p (1 + s gl)^-m + (1 - p) (1 + s gn)^-m.
  void (*eta_deficit_orders)(double s, const double* p, const double* gl, const double* gn,
                             std::size_t n, std::size_t orders, double* out);
  // prod_i 1 / (1 + s g_i)
  double (*success_product)(double s, const double* gains, std::size_t n);
  // sums[k - 1] = sum_i v_i^k for k = 1..orders
  void (*power_sums)(const double* v, std::size_t n, std::size_t orders, double* sums);
};

const KernelSet& scalar_kernels();
/// Null when the build or the CPU lacks AVX2.
const KernelSet* avx2_kernels();

bool supported(SimdLevel level) noexcept;
SimdLevel detected_level() noexcept;

/// Level used by the span wrappers below. Starts at SIRMETA_SIMD if set,
/// otherwise the detected level.
SimdLevel active_level() noexcept;
/// Throws InputError when the CPU does not support the level.
void set_active_level(SimdLevel level);
const KernelSet& kernel_set(SimdLevel level);

void eta_deficit_orders(double s, std::span<const double> p, std::span<const double> gl,
                        std::span<const double> gn, std::size_t orders, std::span<double> out);
double success_product(double s, std::span<const double> gains);
void power_sums(std::span<const double> values, std::span<double> sums);

}  // namespace sirmeta::kernels
