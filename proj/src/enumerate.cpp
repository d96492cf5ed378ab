#include "kzeta/enumerate.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "kzeta/elements.hpp"

namespace kz {

bool pool_less(const GMat2& x, const GMat2& y) {
  const auto hx = x.height(), hy = y.height();
  if (hx != hy) return hx < hy;
  const double fx = x.frobenius2(), fy = y.frobenius2();
  if (fx != fy) return fx < fy;
  return x < y;
}

std::vector<GaussianInt> gaussian_box(std::int64_t height) {
  std::vector<GaussianInt> out;
  out.reserve(static_cast<std::size_t>((2 * height + 1) * (2 * height + 1)));
  for (std::int64_t re = -height; re <= height; ++re) {
    for (std::int64_t im = -height; im <= height; ++im) out.push_back({re, im});
  }
  return out;
}

namespace {

bool in_box(const GaussianInt& z, std::int64_t h) {
  return z.re >= -h && z.re <= h && z.im >= -h && z.im <= h;
}

}  // namespace

std::vector<GMat2> enumerate(std::int64_t height) {
  if (height < 0) throw std::invalid_argument("enumerate: negative height");
  if (height == 0) return {GMat2::identity()};
  const auto box = gaussian_box(height);
  const GaussianInt one{1};
  std::vector<GMat2> out;
  for (const auto& a : box) {
    if (a.is_zero()) {
      // b c = -1: b a unit, d free
      for (const auto& b : box) {
        if (!b.is_unit()) continue;
        const GaussianInt c = exact_div(GaussianInt{-1}, b);
        for (const auto& d : box) {
          const GMat2 m{a, b, c, d};
          if (is_canonical(m)) out.push_back(m);
        }
      }
      continue;
    }
    for (const auto& b : box) {
      for (const auto& c : box) {
        const GaussianInt num = one + b * c;
        const DivMod qr = divmod(num, a);
        if (!qr.rem.is_zero() || !in_box(qr.quot, height)) continue;
        const GMat2 m{a, b, c, qr.quot};
        if (is_canonical(m)) out.push_back(m);
      }
    }
  }
  std::sort(out.begin(), out.end(), pool_less);
  return out;
}

std::vector<GMat2> enumerate_loxodromic(std::int64_t height, double cutoff) {
  if (height < 0) throw std::invalid_argument("enumerate_loxodromic: negative height");
  if (!(cutoff >= 1.0)) throw std::invalid_argument("enumerate_loxodromic: cutoff must be >= 1");
  // |trace| <= sqrt(N) + 1/sqrt(N) <= sqrt(X) + 1
  const auto tbound = static_cast<std::int64_t>(std::ceil(std::sqrt(cutoff) + 1.0));
  std::vector<GaussianInt> traces;
  for (const auto& t : gaussian_box(std::min(tbound, 2 * height))) {
    const GMat2 probe{t, GaussianInt{-1}, GaussianInt{1}, GaussianInt{0}};  // trace t, det 1
    if (!is_loxodromic(probe)) continue;
    if (norm_from_trace(t) <= cutoff) traces.push_back(t);
  }
  const auto box = gaussian_box(height);
  std::vector<GMat2> out;
  for (const auto& a : box) {
    for (const auto& t : traces) {
      const GaussianInt d = t - a;
      if (!in_box(d, height)) continue;
      const GaussianInt num = a * d - GaussianInt{1};  // = b c
      for (const auto& c : box) {
        if (c.is_zero()) continue;  // upper triangular elements are never loxodromic
        const DivMod qr = divmod(num, c);
        if (!qr.rem.is_zero() || !in_box(qr.quot, height)) continue;
        const GMat2 m{a, qr.quot, c, d};
        if (is_canonical(m)) out.push_back(m);
      }
    }
  }
  std::sort(out.begin(), out.end(), pool_less);
  return out;
}

}  // namespace kz

namespace kz {

namespace {

constexpr double kDomainRadius = 0.70710678118654757;  // sup |z| = inf r = sqrt(1/2)

struct DisplacementBounds {
  double s;  // sqrt(2 delta_max); |c| r, |cz + d|, |a - cz| are all <= s
  double c;  // bound on |c| from r >= sqrt(1/2)
};

DisplacementBounds displacement_bounds(double delta_max) {
  const double s = std::sqrt(2.0 * delta_max);
  return {s, s / kDomainRadius};
}

double abs_of(GaussianInt x) { return std::sqrt(static_cast<double>(x.norm())); }

}  // namespace

bool may_displace_within(const GMat2& g, double delta_max) {
  const auto bd = displacement_bounds(delta_max);
  const double c = abs_of(g.c);
  constexpr double slack = 1e-9;
  if (c == 0) return true;  // parabolic or elliptic about infinity; not bounded here
  if (c > bd.c + slack) return false;
  const double ad = bd.s + c * kDomainRadius;
  const double a = abs_of(g.a);
  if (a > ad + slack || abs_of(g.d) > ad + slack) return false;
  // r <= s / |c| on the support
  return abs_of(g.b) <= bd.s * bd.s / c + (a + bd.s) * kDomainRadius + slack;
}

std::vector<GMat2> enumerate_loxodromic_near(double cutoff, double delta_max) {
  if (!(cutoff >= 1.0)) throw std::invalid_argument("enumerate_loxodromic_near: cutoff must be >= 1");
  if (!(delta_max > 1.0)) throw std::invalid_argument("enumerate_loxodromic_near: delta_max must exceed 1");
  const auto bd = displacement_bounds(delta_max);
  const auto tbound = static_cast<std::int64_t>(std::ceil(std::sqrt(cutoff) + 1.0));
  std::vector<GaussianInt> traces;
  for (const auto& t : gaussian_box(tbound)) {
    const GMat2 probe{t, GaussianInt{-1}, GaussianInt{1}, GaussianInt{0}};
    if (is_loxodromic(probe) && norm_from_trace(t) <= cutoff) traces.push_back(t);
  }
  const auto cmax = static_cast<std::int64_t>(std::ceil(bd.c));
  const auto admax = static_cast<std::int64_t>(std::ceil(bd.s + bd.c * kDomainRadius));
  const auto cbox = gaussian_box(cmax);
  const auto dbox = gaussian_box(admax);
  std::vector<GMat2> out;
  for (const auto& c : cbox) {
    if (c.is_zero() || abs_of(c) > bd.c + 1e-9) continue;
    for (const auto& d : dbox) {
      for (const auto& t : traces) {
        const GaussianInt a = t - d;
        const DivMod qr = divmod(a * d - GaussianInt{1}, c);
        if (!qr.rem.is_zero()) continue;
        const GMat2 m{a, qr.quot, c, d};
        if (is_canonical(m) && may_displace_within(m, delta_max)) out.push_back(m);
      }
    }
  }
  std::sort(out.begin(), out.end(), pool_less);
  return out;
}

}  // namespace kz
