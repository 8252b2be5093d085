#pragma once

// Reduction kernels behind the estimator sums and the segment norms.
//
// Each kernel has a scalar reference implementation and, on x86-64, an AVX2
// variant compiled in its own translation unit. The variant is picked once at
// first use from the CPU feature bits; OUFA_KERNELS=scalar|avx2 in the
// environment overrides the choice. Vector variants reassociate the sums, so
// they agree with the scalar reference to rounding, not bit for bit; max_abs
// is exact in both.

#include <span>
#include <string_view>

namespace oufa::kernels {

enum class Level { kScalar, kAvx2 };

struct ItoSums {
  double cross = 0.0;    // Σ_{i<n} x_i (x_{i+1} - x_i)
  double squares = 0.0;  // Σ_{i<n} x_i²
};

/// Left-endpoint sums over i = 0..size-2. Empty for size < 2.
ItoSums ito_sums(std::span<const double> x);
double sum(std::span<const double> x);
double sum_squares(std::span<const double> x);
double max_abs(std::span<const double> x);

Level active_level();
/// Forces a level. Throws oufa::DomainError if the CPU or build lacks it.
void set_level(Level level);
bool level_supported(Level level);
std::string_view level_name(Level level);

namespace scalar {
ItoSums ito_sums(std::span<const double> x);
double sum(std::span<const double> x);
double sum_squares(std::span<const double> x);
double max_abs(std::span<const double> x);
}  // namespace scalar

#if defined(OUFA_HAVE_AVX2_KERNELS)
namespace avx2 {
ItoSums ito_sums(std::span<const double> x);
double sum(std::span<const double> x);
double sum_squares(std::span<const double> x);
double max_abs(std::span<const double> x);
}  // namespace avx2
#endif

}  // namespace oufa::kernels
