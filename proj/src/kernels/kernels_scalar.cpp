#include <cmath>

#include "oufa/kernels.hpp"

namespace oufa::kernels::scalar {

ItoSums ito_sums(std::span<const double> x) {
  ItoSums out;
  if (x.size() < 2) return out;
  for (std::size_t i = 0; i + 1 < x.size(); ++i) {
    out.cross += x[i] * (x[i + 1] - x[i]);
    out.squares += x[i] * x[i];
  }
  return out;
}

double sum(std::span<const double> x) {
  double acc = 0.0;
  for (double v : x) acc += v;
  return acc;
}

double sum_squares(std::span<const double> x) {
  double acc = 0.0;
  for (double v : x) acc += v * v;
  return acc;
}

double max_abs(std::span<const double> x) {
  double m = 0.0;
  for (double v : x) m = std::fmax(m, std::fabs(v));
  return m;
}

}  // namespace oufa::kernels::scalar
