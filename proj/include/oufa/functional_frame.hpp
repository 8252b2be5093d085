#pragma once

/**
 * @file functional_frame.hpp
 * @brief The O.U. process cut into segments of length h and viewed as an
 *        autoregressive process of order one in a function space.
 *
 * Segment n is X_n(t) = ξ_{nh+t}, t ∈ [0, h], and consecutive segments obey
 *
 *   X_n = ρ_θ(X_{n−1}) + ε_n,   (ρ_θ x)(t) = e^{−θt} x(h).
 *
 * Two norms are carried on segments:
 *  - H: L²([0,h], λ + δ_h), ‖f‖² = ∫₀^h f² dt + f(h)². The Dirac atom at h is
 *    held by the last node and added outside the quadrature.
 *  - B: C([0,h]) with the sup norm, taken over nodes.
 *
 * Integrals on a segment use the composite trapezoid rule on the uniform
 * node grid everywhere in the library, so norms from different call sites are
 * directly comparable.
 *
 * ρ_θ is rank one: its output depends on x only through x(h). That makes the
 * operator norms and the operator distances closed-form. The exact B-norm
 * ‖ρ_θ^k‖ = e^{−θ(k−1)h} is derived here from the witness x ≡ 1; only the
 * bound ≤ 1 is the classical statement.
 */

#include <cstddef>
#include <span>
#include <vector>

#include "oufa/ou_process.hpp"

namespace oufa {

class SegmentGrid {
 public:
  /// h > 0, m ≥ 1 interior subdivisions; nodes t_j = jh/m, j = 0..m.
  SegmentGrid(double h, std::size_t m);

  double h() const noexcept { return h_; }
  std::size_t m() const noexcept { return m_; }
  std::size_t n_nodes() const noexcept { return m_ + 1; }
  double spacing() const noexcept { return h_ / static_cast<double>(m_); }
  /// Node j; the last node is exactly h.
  double node(std::size_t j) const noexcept;

  bool operator==(const SegmentGrid&) const = default;

 private:
  double h_;
  std::size_t m_;
};

struct FunctionalSegment {
  SegmentGrid grid;
  std::vector<double> values;  ///< m+1 entries, last is f(h)

  double at_h() const { return values.back(); }
};

/// Builds a segment by evaluating `f` at each node.
template <typename Fn>
FunctionalSegment sample_segment(const SegmentGrid& grid, Fn&& f) {
  FunctionalSegment seg{grid, std::vector<double>(grid.n_nodes())};
  for (std::size_t j = 0; j < grid.n_nodes(); ++j) seg.values[j] = f(grid.node(j));
  return seg;
}

class RhoOperator {
 public:
  /// Throws DomainError for θ ≤ 0 (including a nonpositive θ̂).
  RhoOperator(double theta, SegmentGrid grid);

  double theta() const noexcept { return theta_; }
  const SegmentGrid& grid() const noexcept { return grid_; }

 private:
  double theta_;
  SegmentGrid grid_;
};

/// Segments X_n, n = 0..floor(T/h)−1. Node spacing equals the path step, and
/// X_n(0) and X_{n−1}(h) are the same sample. Throws GridMismatch when h is
/// not a multiple of Δt (1e-9 relative) or exceeds T.
std::vector<FunctionalSegment> segment_path(const SamplePath& path, double h);
std::vector<FunctionalSegment> segment_path(const TimeGrid& grid,
                                            std::span<const double> values, double h);

/// Composite trapezoid ∫₀^h f dt on the segment nodes.
double trapezoid(const SegmentGrid& grid, std::span<const double> f);

enum class AtomMode {
  kTrapezoid,  ///< always integrate the interior with the trapezoid rule
  /// Functions that vanish at every node before h are treated as supported
  /// on the atom alone, so their interior integral is exactly 0.
  kAtomExact,
};

double h_norm(const FunctionalSegment& f, AtomMode mode = AtomMode::kTrapezoid);
double b_norm(const FunctionalSegment& f);

/// a − b, nodewise. Throws GridMismatch on different grids.
FunctionalSegment subtract(const FunctionalSegment& a, const FunctionalSegment& b);

/// (ρ_θ x)(t) = e^{−θt} x(h).
FunctionalSegment apply_rho(const RhoOperator& op, const FunctionalSegment& x);
/// (ρ_θ^k x)(t) = e^{−θt} e^{−θ(k−1)h} x(h), k ≥ 1.
FunctionalSegment apply_rho_power(const RhoOperator& op, int k, const FunctionalSegment& x);

/// Exact ‖ρ_θ^k‖ on H: e^{−θ(k−1)h} √((1 + e^{−2θh}(2θ−1))/(2θ)).
double rho_norm_H(double theta, int k, double h);

/// Discrete counterpart of rho_norm_H: the norm ratio attained by the atom
/// witness, with ∫ e^{−2θt} evaluated by Richardson-extrapolated trapezoid
/// sums on `grid` (plain trapezoid when m is odd).
double rho_norm_H_discrete_oracle(double theta, int k, const SegmentGrid& grid);

/// Exact ‖ρ_θ^k‖ on B = C([0,h]): e^{−θ(k−1)h}.
double rho_norm_B(double theta, int k, double h);

/// ⌈1/θ + 1⌉: ‖ρ_θ^k‖_H < 1 for all k ≥ k0(θ).
int k0(double theta);

/// ‖ρ_θ − ρ_θ̂‖ on H, √(∫₀^h (e^{−θt} − e^{−θ̂t})² dt + (e^{−θh} − e^{−θ̂h})²).
double operator_distance_H(double theta, double theta_hat, double h);
/// |θ − θ̂| h √(h/3 + 1).
double operator_distance_H_bound(double theta, double theta_hat, double h);
/// ‖ρ_θ − ρ_θ̂‖ on B, sup_{0≤t≤h} |e^{−θt} − e^{−θ̂t}|.
double operator_distance_B(double theta, double theta_hat, double h);

/// ε_n = X_n − ρ_θ(X_{n−1}).
FunctionalSegment innovation(const FunctionalSegment& x_n, const FunctionalSegment& x_prev,
                             double theta);

namespace detail {
/// ∫₀¹ uⁿ e^{−xu} du for x ≥ 0.
double exp_moment(int n, double x);
/// ∫₀^h (e^{−θt} − e^{−θ̂t})² dt as the difference of three exponential
/// integrals.
double squared_gap_integral_closed(double theta, double theta_hat, double h);
/// Same integral as a positive series in (θ̂ − θ); no cancellation.
double squared_gap_integral_series(double theta, double theta_hat, double h);
}  // namespace detail

}  // namespace oufa
