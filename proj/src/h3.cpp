#include "kzeta/h3.hpp"

#include <boost/math/quadrature/gauss.hpp>
#include <cmath>
#include <sstream>

#include "kzeta/rng.hpp"

namespace kz {

H3Point::H3Point(cplx z_, double r_) : z(z_), r(r_) {
  if (!(r_ > 0.0)) throw std::domain_error("H3Point: height must be positive");
}

double delta(const H3Point& p, const H3Point& q) {
  if (!(p.r > 0.0) || !(q.r > 0.0)) throw std::domain_error("delta: nonpositive height");
  return (std::norm(p.z - q.z) + p.r * p.r + q.r * q.r) / (2.0 * p.r * q.r);
}

H3Point mobius_apply(cplx a, cplx b, cplx c, cplx d, const H3Point& p) {
  const cplx cz_d = c * p.z + d;
  const double r2 = p.r * p.r;
  const double denom = std::norm(cz_d) + std::norm(c) * r2;
  const cplx z = ((a * p.z + b) * std::conj(cz_d) + a * std::conj(c) * r2) / denom;
  return {z, p.r / denom};
}

H3Point mobius_apply(const GMat2& g, const H3Point& p) {
  return mobius_apply(g.a.to_complex(), g.b.to_complex(), g.c.to_complex(), g.d.to_complex(), p);
}

double FundamentalDomain::floor_height(double x, double y) { return std::sqrt(1.0 - x * x - y * y); }

bool FundamentalDomain::contains(const H3Point& p, double tol) const {
  const double x = p.z.real(), y = p.z.imag();
  if (std::abs(x) > 0.5 + tol) return false;
  if (y < -tol || y > 0.5 + tol) return false;
  if (std::norm(p.z) + p.r * p.r < 1.0 - tol) return false;
  if (cusp_height > 0 && p.r > cusp_height + tol) return false;
  return true;
}

bool FundamentalDomain::in_compact_part(const H3Point& p, double tol) const {
  return contains(p, tol) && (cusp_height <= 0 || p.r <= cusp_height + tol);
}

Reduction reduce_to_domain(const H3Point& p, int max_steps) {
  static const GMat2 kRotation{GaussianInt{0, 1}, GaussianInt{0}, GaussianInt{0}, GaussianInt{0, -1}};
  static const GMat2 kInversion{GaussianInt{0}, GaussianInt{-1}, GaussianInt{1}, GaussianInt{0}};
  constexpr double kSphereTol = 1e-13;

  Reduction out{GMat2::identity(), p, 0};
  for (int step = 0; step < max_steps; ++step) {
    H3Point& q = out.point;
    const auto bx = static_cast<std::int64_t>(std::floor(q.z.real() + 0.5));
    const auto by = static_cast<std::int64_t>(std::floor(q.z.imag() + 0.5));
    if (bx != 0 || by != 0) {
      const GMat2 shift{GaussianInt{1}, GaussianInt{-bx, -by}, GaussianInt{0}, GaussianInt{1}};
      out.gamma = shift * out.gamma;
      q.z -= cplx(double(bx), double(by));
    }
    if (q.z.imag() < 0) {
      out.gamma = kRotation * out.gamma;
      q.z = -q.z;
    }
    if (std::norm(q.z) + q.r * q.r < 1.0 - kSphereTol) {
      out.gamma = kInversion * out.gamma;
      q = mobius_apply(kInversion, q);
      out.steps = step + 1;
      continue;
    }
    out.gamma = canonical(out.gamma);
    out.steps = step;
    return out;
  }
  std::ostringstream os;
  os.precision(17);
  os << "reduce_to_domain: no convergence after " << max_steps << " steps from z=" << p.z << " r=" << p.r
     << ", last z=" << out.point.z << " r=" << out.point.r;
  throw ReductionError(os.str());
}

std::size_t tile_index(const H3Point& p, std::span<const GMat2> cosets, double tol) {
  const FundamentalDomain dom;
  for (std::size_t i = 0; i < cosets.size(); ++i) {
    if (dom.contains(mobius_apply(cosets[i].inverse_unimodular(), p), tol)) return i;
  }
  std::ostringstream os;
  os << "tile_index: no tile contains z=" << p.z << " r=" << p.r << " among " << cosets.size() << " cosets";
  throw TilingError(os.str());
}

WeightedPoint sample_point(const SamplePlan& plan, std::uint64_t k) {
  const CounterRng rng(plan.seed);
  const std::uint64_t counter = plan.first + k;
  const double x = rng.uniform(counter, 0) - 0.5;
  const double y = 0.5 * rng.uniform(counter, 1);
  const double rmin = FundamentalDomain::floor_height(x, y);
  const double lo = 1.0 / (rmin * rmin);
  const double hi = 1.0 / (plan.cusp_height * plan.cusp_height);
  const double u = rng.uniform(counter, 2);
  const double r = 1.0 / std::sqrt(lo - u * (lo - hi));
  // area of the (x, y) rectangle times the r-mass of dr / r^3
  const double weight = 0.5 * 0.5 * (lo - hi);
  return {H3Point{cplx(x, y), r}, weight};
}

std::vector<WeightedPoint> sample_domain(const SamplePlan& plan) {
  if (plan.count > 0 && !(plan.cusp_height > 1.0)) {
    throw std::invalid_argument("sample_domain: cusp height must exceed 1");
  }
  std::vector<WeightedPoint> out;
  out.reserve(plan.count);
  for (std::uint64_t k = 0; k < plan.count; ++k) out.push_back(sample_point(plan, k));
  return out;
}

double picard_volume_quadrature(double cusp_height) {
  using boost::math::quadrature::gauss;
  const double inv_a2 = cusp_height > 0 ? 1.0 / (cusp_height * cusp_height) : 0.0;
  auto inner = [&](double x) {
    auto f = [&](double y) { return 0.5 * (1.0 / (1.0 - x * x - y * y) - inv_a2); };
    return gauss<double, 30>::integrate(f, 0.0, 0.5);
  };
  return gauss<double, 30>::integrate(inner, -0.5, 0.5);
}

}  // namespace kz
