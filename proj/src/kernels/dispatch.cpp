#include <atomic>
#include <cstdlib>
#include <string>

#include "oufa/errors.hpp"
#include "oufa/kernels.hpp"

namespace oufa::kernels {

namespace {

struct Table {
  ItoSums (*ito_sums)(std::span<const double>);
  double (*sum)(std::span<const double>);
  double (*sum_squares)(std::span<const double>);
  double (*max_abs)(std::span<const double>);
};

constexpr Table kScalarTable{scalar::ito_sums, scalar::sum, scalar::sum_squares,
                             scalar::max_abs};
#if defined(OUFA_HAVE_AVX2_KERNELS)
constexpr Table kAvx2Table{avx2::ito_sums, avx2::sum, avx2::sum_squares,
                           avx2::max_abs};
#endif

bool cpu_has_avx2() {
#if defined(OUFA_HAVE_AVX2_KERNELS) && (defined(__GNUC__) || defined(__clang__))
  __builtin_cpu_init();
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

Level detect() {
  if (const char* env = std::getenv("OUFA_KERNELS")) {
    const std::string choice(env);
    if (choice == "scalar") return Level::kScalar;
    if (choice == "avx2" && cpu_has_avx2()) return Level::kAvx2;
  }
  return cpu_has_avx2() ? Level::kAvx2 : Level::kScalar;
}

std::atomic<Level>& current() {
  static std::atomic<Level> level{detect()};
  return level;
}

const Table& table() {
#if defined(OUFA_HAVE_AVX2_KERNELS)
  if (current().load(std::memory_order_relaxed) == Level::kAvx2) return kAvx2Table;
#endif
  return kScalarTable;
}

}  // namespace

ItoSums ito_sums(std::span<const double> x) { return table().ito_sums(x); }
double sum(std::span<const double> x) { return table().sum(x); }
double sum_squares(std::span<const double> x) { return table().sum_squares(x); }
double max_abs(std::span<const double> x) { return table().max_abs(x); }

Level active_level() { return current().load(std::memory_order_relaxed); }

bool level_supported(Level level) {
  return level == Level::kScalar || cpu_has_avx2();
}

void set_level(Level level) {
  if (!level_supported(level)) {
    throw DomainError("kernel level " + std::string(level_name(level)) +
                      " is not available on this CPU/build");
  }
  current().store(level, std::memory_order_relaxed);
}

std::string_view level_name(Level level) {
  switch (level) {
    case Level::kScalar:
      return "scalar";
    case Level::kAvx2:
      return "avx2";
  }
  return "unknown";
}

}  // namespace oufa::kernels
