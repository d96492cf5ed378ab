#pragma once

// Upper half-space model of hyperbolic 3-space and the Picard fundamental
// domain {|Re z| <= 1/2, 0 <= Im z <= 1/2, |z|^2 + r^2 >= 1}.

#include <complex>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "kzeta/gaussian.hpp"

namespace kz {

using cplx = std::complex<double>;

/// P = z + r j with r > 0.
struct H3Point {
  cplx z{};
  double r = 1.0;

  H3Point() = default;
  H3Point(cplx z_, double r_);
};

struct ReductionError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct TilingError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// cosh of the hyperbolic distance: (|z-z'|^2 + r^2 + r'^2) / (2 r r').
double delta(const H3Point& p, const H3Point& q);

/// Action of an SL(2, C) matrix on upper half-space.
H3Point mobius_apply(const GMat2& g, const H3Point& p);
H3Point mobius_apply(cplx a, cplx b, cplx c, cplx d, const H3Point& p);

/// The classical Picard domain, optionally truncated at height A (F_A).
struct FundamentalDomain {
  static constexpr double kBoundaryTol = 1e-9;
  double cusp_height = 0;  // A; 0 means untruncated

  bool contains(const H3Point& p, double tol = kBoundaryTol) const;
  /// Portion of the domain below height A (compact part F_A) when A > 0.
  bool in_compact_part(const H3Point& p, double tol = kBoundaryTol) const;
  /// Lowest admissible height above (x, y): sqrt(1 - x^2 - y^2).
  static double floor_height(double x, double y);
};

struct Reduction {
  GMat2 gamma;     // reduced = gamma * P
  H3Point point;   // lies in the Picard domain
  int steps = 0;
};

/// Map P into the Picard domain with translations, the order-two rotation
/// z -> -z and the inversion [[0,-1],[1,0]]. Throws ReductionError after
/// max_steps.
Reduction reduce_to_domain(const H3Point& p, int max_steps = 10000);

/// Index i such that cosets[i]^{-1} P lies in the Picard domain. Ties go to
/// the smallest index. Throws TilingError when no tile claims P.
std::size_t tile_index(const H3Point& p, std::span<const GMat2> cosets,
                       double tol = FundamentalDomain::kBoundaryTol);

/// Monte Carlo plan over F_A: x uniform on [-1/2, 1/2], y on [0, 1/2], r with
/// density proportional to r^{-3} on [floor_height(x, y), A].
struct SamplePlan {
  std::uint64_t seed = 1;
  std::uint64_t count = 0;
  double cusp_height = 8.0;  // A
  std::uint64_t first = 0;   // starting counter (for partitioning)
  std::string scheme = "uniform-xy/inverse-cdf-r3";
};

struct WeightedPoint {
  H3Point point;
  double weight;  // sum_k weight_k f(P_k) / count estimates the integral over F_A
};

/// k-th sample of the plan (counter = plan.first + k); pure function.
WeightedPoint sample_point(const SamplePlan& plan, std::uint64_t k);
std::vector<WeightedPoint> sample_domain(const SamplePlan& plan);

/// Hyperbolic volume of F_A by 30-point tensor Gauss-Legendre quadrature in (x, y)
/// with the r-integral done in closed form. A <= 0 means A = infinity.
double picard_volume_quadrature(double cusp_height);

}  // namespace kz
