#include "oufa/functional_frame.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "oufa/errors.hpp"
#include "oufa/kernels.hpp"

namespace oufa {

namespace {

void require_rate(double theta, const char* name) {
  if (!(theta > 0.0) || !std::isfinite(theta)) {
    throw DomainError(std::string(name) + " must be > 0, got " + std::to_string(theta));
  }
}

void require_h(double h) {
  if (!(h > 0.0) || !std::isfinite(h)) throw DomainError("segment length h must be > 0");
}

void require_power(int k) {
  if (k < 1) throw DomainError("operator power k must be >= 1");
}

void require_same_grid(const SegmentGrid& a, const SegmentGrid& b) {
  if (!(a == b)) throw GridMismatch("segment grids differ");
}

// Cancellation in the closed form costs about log10(3/(|θ̂−θ|h)²) digits;
// below this the series is used instead.
constexpr double kSeriesSwitch = 0.5;

}  // namespace

SegmentGrid::SegmentGrid(double h, std::size_t m) : h_(h), m_(m) {
  require_h(h);
  if (m < 1) throw DomainError("segment grid needs m >= 1");
}

double SegmentGrid::node(std::size_t j) const noexcept {
  if (j >= m_) return h_;
  return h_ * static_cast<double>(j) / static_cast<double>(m_);
}

RhoOperator::RhoOperator(double theta, SegmentGrid grid) : theta_(theta), grid_(grid) {
  require_rate(theta, "theta");
}

std::vector<FunctionalSegment> segment_path(const SamplePath& path, double h) {
  return segment_path(path.grid, path.values, h);
}

std::vector<FunctionalSegment> segment_path(const TimeGrid& grid,
                                            std::span<const double> values, double h) {
  require_h(h);
  if (values.size() != grid.n_points()) throw GridMismatch("path length does not match grid");
  const double ratio = h / grid.dt();
  const double m_real = std::round(ratio);
  if (m_real < 1.0 || std::fabs(m_real * grid.dt() - h) > 1e-9 * h) {
    throw GridMismatch("segment length h = " + std::to_string(h) +
                       " is not a multiple of dt = " + std::to_string(grid.dt()));
  }
  const auto m = static_cast<std::size_t>(m_real);
  const std::size_t count = grid.n_steps() / m;
  if (count < 1) throw GridMismatch("segment length exceeds the path horizon");

  const SegmentGrid seg_grid(h, m);
  std::vector<FunctionalSegment> out;
  out.reserve(count);
  for (std::size_t n = 0; n < count; ++n) {
    const auto first = values.begin() + static_cast<std::ptrdiff_t>(n * m);
    out.push_back({seg_grid, std::vector<double>(first, first + static_cast<std::ptrdiff_t>(m + 1))});
  }
  return out;
}

double trapezoid(const SegmentGrid& grid, std::span<const double> f) {
  if (f.size() != grid.n_nodes()) throw GridMismatch("values do not match segment grid");
  const double interior = kernels::sum(f) - 0.5 * (f.front() + f.back());
  return grid.spacing() * interior;
}

double h_norm(const FunctionalSegment& f, AtomMode mode) {
  const auto& v = f.values;
  if (v.size() != f.grid.n_nodes()) throw GridMismatch("values do not match segment grid");
  const double atom = v.back() * v.back();
  if (mode == AtomMode::kAtomExact &&
      std::all_of(v.begin(), v.end() - 1, [](double x) { return x == 0.0; })) {
    return std::fabs(v.back());
  }
  const double interior =
      kernels::sum_squares(v) - 0.5 * (v.front() * v.front() + atom);
  return std::sqrt(f.grid.spacing() * interior + atom);
}

double b_norm(const FunctionalSegment& f) { return kernels::max_abs(f.values); }

FunctionalSegment subtract(const FunctionalSegment& a, const FunctionalSegment& b) {
  require_same_grid(a.grid, b.grid);
  FunctionalSegment out{a.grid, a.values};
  for (std::size_t j = 0; j < out.values.size(); ++j) out.values[j] -= b.values[j];
  return out;
}

FunctionalSegment apply_rho(const RhoOperator& op, const FunctionalSegment& x) {
  return apply_rho_power(op, 1, x);
}

FunctionalSegment apply_rho_power(const RhoOperator& op, int k, const FunctionalSegment& x) {
  require_power(k);
  require_same_grid(op.grid(), x.grid);
  const double theta = op.theta();
  const double carried =
      k == 1 ? x.at_h() : std::exp(-theta * (k - 1) * op.grid().h()) * x.at_h();
  return sample_segment(op.grid(), [&](double t) { return std::exp(-theta * t) * carried; });
}

double rho_norm_H(double theta, int k, double h) {
  require_rate(theta, "theta");
  require_power(k);
  require_h(h);
  // (1 + e^{−2θh}(2θ−1))/(2θ) rewritten as 1 − (2θ−1)(1 − e^{−2θh})/(2θ):
  // exact 1 at θ = 1/2 and well conditioned as θ → 0.
  const double alpha = 1.0 - (2.0 * theta - 1.0) * -std::expm1(-2.0 * theta * h) / (2.0 * theta);
  return std::exp(-theta * (k - 1) * h) * std::sqrt(alpha);
}

double rho_norm_H_discrete_oracle(double theta, int k, const SegmentGrid& grid) {
  require_rate(theta, "theta");
  require_power(k);
  const auto decay = [theta](double t) { return std::exp(-2.0 * theta * t); };
  const FunctionalSegment fine = sample_segment(grid, decay);
  double integral = trapezoid(grid, fine.values);
  if (grid.m() % 2 == 0 && grid.m() >= 2) {
    const SegmentGrid coarse_grid(grid.h(), grid.m() / 2);
    std::vector<double> coarse(coarse_grid.n_nodes());
    for (std::size_t j = 0; j < coarse.size(); ++j) coarse[j] = fine.values[2 * j];
    const double coarse_integral = trapezoid(coarse_grid, coarse);
    integral = (4.0 * integral - coarse_integral) / 3.0;
  }
  const double h = grid.h();
  return std::sqrt(integral + decay(h)) * std::exp(-theta * (k - 1) * h);
}

double rho_norm_B(double theta, int k, double h) {
  require_rate(theta, "theta");
  require_power(k);
  require_h(h);
  return std::exp(-theta * (k - 1) * h);
}

int k0(double theta) {
  require_rate(theta, "theta");
  return static_cast<int>(std::ceil(1.0 / theta + 1.0));
}

namespace detail {

double exp_moment(int n, double x) {
  if (n < 0 || x < 0.0) throw DomainError("exp_moment needs n >= 0 and x >= 0");
  if (x >= std::max(30.0, static_cast<double>(n))) {
    // Upward recursion m_j = (j m_{j−1} − e^{−x})/x damps errors while j ≤ x.
    const double ex = std::exp(-x);
    double m = -std::expm1(-x) / x;
    for (int j = 1; j <= n; ++j) m = (j * m - ex) / x;
    return m;
  }
  // e^{−x} Σ_k x^k / ((n+1)(n+2)...(n+1+k)), all terms positive.
  double term = 1.0 / (n + 1);
  double total = term;
  for (int k = 1; k < 2000; ++k) {
    term *= x / (n + 1 + k);
    total += term;
    if (term < 1e-17 * total) break;
  }
  return std::exp(-x) * total;
}

double squared_gap_integral_closed(double theta, double theta_hat, double h) {
  // F(s) = ∫₀^h e^{−st} dt = (1 − e^{−sh})/s.
  const auto F = [h](double s) { return -std::expm1(-s * h) / s; };
  return F(2.0 * theta) - 2.0 * F(theta + theta_hat) + F(2.0 * theta_hat);
}

double squared_gap_integral_series(double theta, double theta_hat, double h) {
  // With c = θ + θ̂ and d = θ̂ − θ the integral is the second central
  // difference F(c−d) − 2F(c) + F(c+d) = Σ_{j≥1} 2 d^{2j}/(2j)! ∫ t^{2j} e^{−ct}.
  const double c = theta + theta_hat;
  const double dh = (theta_hat - theta) * h;
  const double dh2 = dh * dh;
  double power = 1.0;  // (dh)^{2j}/(2j)!
  double total = 0.0;
  for (int j = 1; j < 60; ++j) {
    power *= dh2 / ((2.0 * j - 1.0) * (2.0 * j));
    const double term = 2.0 * power * h * exp_moment(2 * j, c * h);
    total += term;
    if (term <= 1e-18 * total) break;
  }
  return total;
}

}  // namespace detail

double operator_distance_H(double theta, double theta_hat, double h) {
  require_rate(theta, "theta");
  require_rate(theta_hat, "theta_hat");
  require_h(h);
  if (theta == theta_hat) return 0.0;
  const double integral = std::fabs(theta_hat - theta) * h < kSeriesSwitch
                              ? detail::squared_gap_integral_series(theta, theta_hat, h)
                              : detail::squared_gap_integral_closed(theta, theta_hat, h);
  // e^{−θh} − e^{−θ̂h} = e^{−θh}(1 − e^{−(θ̂−θ)h})
  const double atom = std::exp(-theta * h) * -std::expm1(-(theta_hat - theta) * h);
  return std::sqrt(std::max(integral, 0.0) + atom * atom);
}

double operator_distance_H_bound(double theta, double theta_hat, double h) {
  require_h(h);
  return std::fabs(theta - theta_hat) * h * std::sqrt(h / 3.0 + 1.0);
}

double operator_distance_B(double theta, double theta_hat, double h) {
  require_rate(theta, "theta");
  require_rate(theta_hat, "theta_hat");
  require_h(h);
  if (theta == theta_hat) return 0.0;
  const double slow = std::min(theta, theta_hat);
  const double fast = std::max(theta, theta_hat);
  const double gap = fast - slow;
  // g(t) = e^{−slow·t} − e^{−fast·t} is unimodal with its peak at
  // t* = ln(fast/slow)/(fast − slow); on [0,h] the sup sits at min(t*, h).
  const double t_star = std::log1p(gap / slow) / gap;
  const double t = std::min(t_star, h);
  return std::exp(-slow * t) * -std::expm1(-gap * t);
}

FunctionalSegment innovation(const FunctionalSegment& x_n, const FunctionalSegment& x_prev,
                             double theta) {
  require_same_grid(x_n.grid, x_prev.grid);
  const RhoOperator op(theta, x_prev.grid);
  return subtract(x_n, apply_rho(op, x_prev));
}

}  // namespace oufa
