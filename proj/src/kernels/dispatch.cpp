#include <atomic>
#include <cstdlib>
#include <string>

#include "kernels/kernels_impl.hpp"
#include "sirmeta/error.hpp"

namespace sirmeta::kernels {

namespace {

bool cpu_has_avx2() noexcept {
#if defined(SIRMETA_HAVE_AVX2_KERNELS) && (defined(__GNUC__) || defined(__clang__))
  return __builtin_cpu_supports("avx2");
#else
  return false;
#endif
}

SimdLevel initial_level() noexcept {
  if (const char* env = std::getenv("SIRMETA_SIMD")) {
    const std::string v(env);
    if (v == "scalar") return SimdLevel::scalar;
    if (v == "avx2" && cpu_has_avx2()) return SimdLevel::avx2;
  }
  return detected_level();
}

std::atomic<SimdLevel>& level_slot() noexcept {
  static std::atomic<SimdLevel> level{initial_level()};
  return level;
}

}  // namespace

std::string_view to_string(SimdLevel level) {
  return level == SimdLevel::avx2 ? "avx2" : "scalar";
}

const KernelSet& scalar_kernels() {
  static const KernelSet set{scalar::eta_deficit_orders, scalar::success_product, scalar::power_sums};
  return set;
}

const KernelSet* avx2_kernels() {
#if defined(SIRMETA_HAVE_AVX2_KERNELS)
  static const KernelSet set{avx2::eta_deficit_orders, avx2::success_product, avx2::power_sums};
  return cpu_has_avx2() ? &set : nullptr;
#else
  return nullptr;
#endif
}

bool supported(SimdLevel level) noexcept {
  return level == SimdLevel::scalar || cpu_has_avx2();
}

SimdLevel detected_level() noexcept {
  return cpu_has_avx2() ? SimdLevel::avx2 : SimdLevel::scalar;
}

SimdLevel active_level() noexcept { return level_slot().load(std::memory_order_relaxed); }

void set_active_level(SimdLevel level) {
  if (!supported(level)) {
    throw InputError("SIMD level " + std::string(to_string(level)) + " is not supported on this CPU");
  }
  level_slot().store(level, std::memory_order_relaxed);
}

const KernelSet& kernel_set(SimdLevel level) {
  if (level == SimdLevel::avx2) {
    if (const KernelSet* set = avx2_kernels()) return *set;
    throw InputError("AVX2 kernels are not available");
  }
  return scalar_kernels();
}

void eta_deficit_orders(double s, std::span<const double> p, std::span<const double> gl,
                        std::span<const double> gn, std::size_t orders, std::span<double> out) {
  kernel_set(active_level())
      .eta_deficit_orders(s, p.data(), gl.data(), gn.data(), p.size(), orders, out.data());
}

double success_product(double s, std::span<const double> gains) {
  return kernel_set(active_level()).success_product(s, gains.data(), gains.size());
}

void power_sums(std::span<const double> values, std::span<double> sums) {
  kernel_set(active_level()).power_sums(values.data(), values.size(), sums.size(), sums.data());
}

}  // namespace sirmeta::kernels
