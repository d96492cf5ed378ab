#include "kzeta/gaussian.hpp"

#include <cmath>
#include <numeric>
#include <ostream>
#include <sstream>

namespace kz {

namespace {

std::int64_t floor_div(std::int64_t a, std::int64_t b) {
  std::int64_t q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

std::int64_t floor_mod(std::int64_t a, std::int64_t b) { return a - floor_div(a, b) * b; }

// Round a/b to the nearest integer (ties toward -inf), b > 0.
std::int64_t round_div(std::int64_t a, std::int64_t b) {
  return floor_div(checked::add(checked::mul(2, a), b), checked::mul(2, b));
}

std::int64_t isqrt(std::int64_t n) {
  if (n < 0) return -1;
  auto r = static_cast<std::int64_t>(std::sqrt(static_cast<long double>(n)));
  while (r > 0 && r * r > n) --r;
  while ((r + 1) * (r + 1) <= n) ++r;
  return r;
}

struct IntBezout {
  std::int64_t g, x, y;
};

IntBezout int_ext_gcd(std::int64_t a, std::int64_t b) {
  std::int64_t old_r = a, r = b, old_s = 1, s = 0, old_t = 0, t = 1;
  while (r != 0) {
    std::int64_t q = old_r / r;
    std::int64_t tmp = old_r - q * r;
    old_r = r;
    r = tmp;
    tmp = old_s - q * s;
    old_s = s;
    s = tmp;
    tmp = old_t - q * t;
    old_t = t;
    t = tmp;
  }
  if (old_r < 0) return {-old_r, -old_s, -old_t};
  return {old_r, old_s, old_t};
}

}  // namespace

std::ostream& operator<<(std::ostream& os, const GaussianInt& z) { return os << to_string(z); }

std::string to_string(const GaussianInt& z) {
  std::ostringstream os;
  if (z.im == 0) {
    os << z.re;
  } else if (z.re == 0) {
    if (z.im == 1) os << "i";
    else if (z.im == -1) os << "-i";
    else os << z.im << "i";
  } else {
    os << z.re << (z.im < 0 ? "-" : "+");
    auto a = z.im < 0 ? -z.im : z.im;
    if (a != 1) os << a;
    os << "i";
  }
  return os.str();
}

DivMod divmod(GaussianInt a, GaussianInt b) {
  if (b.is_zero()) throw std::domain_error("Gaussian division by zero");
  // a / b = a * conj(b) / N(b)
  const GaussianInt num = a * b.conj();
  const std::int64_t n = b.norm();
  GaussianInt q{round_div(num.re, n), round_div(num.im, n)};
  return {q, a - q * b};
}

bool divides(GaussianInt b, GaussianInt a) {
  if (b.is_zero()) return a.is_zero();
  return divmod(a, b).rem.is_zero();
}

GaussianInt exact_div(GaussianInt a, GaussianInt b) {
  auto [q, r] = divmod(a, b);
  if (!r.is_zero()) throw std::domain_error("inexact Gaussian division " + to_string(a) + " / " + to_string(b));
  return q;
}

GaussianInt normalize_associate(GaussianInt a) {
  if (a.is_zero()) return a;
  for (int k = 0; k < 4; ++k) {
    if (a.re > 0 && a.im >= 0) return a;
    a = a * kI;
  }
  return a;
}

GaussianInt gcd(GaussianInt a, GaussianInt b) {
  while (!b.is_zero()) {
    GaussianInt r = divmod(a, b).rem;
    a = b;
    b = r;
  }
  return normalize_associate(a);
}

Bezout extended_gcd(GaussianInt a, GaussianInt b) {
  GaussianInt old_r = a, r = b, old_s{1}, s{0}, old_t{0}, t{1};
  while (!r.is_zero()) {
    GaussianInt q = divmod(old_r, r).quot;
    GaussianInt tmp = old_r - q * r;
    old_r = r;
    r = tmp;
    tmp = old_s - q * s;
    old_s = s;
    s = tmp;
    tmp = old_t - q * t;
    old_t = t;
    t = tmp;
  }
  return {old_r, old_s, old_t};
}

bool exact_sqrt(GaussianInt d, GaussianInt& root) {
  // (u + vi)^2 = (u^2 - v^2) + 2uv i
  const std::int64_t n2 = d.norm();
  const std::int64_t n = isqrt(n2);
  if (n * n != n2) return false;
  const std::int64_t u2x2 = n + d.re, v2x2 = n - d.re;
  if (u2x2 % 2 != 0 || v2x2 % 2 != 0) return false;
  const std::int64_t u = isqrt(u2x2 / 2), v = isqrt(v2x2 / 2);
  if (u * u != u2x2 / 2 || v * v != v2x2 / 2) return false;
  for (GaussianInt cand : {GaussianInt{u, v}, GaussianInt{u, -v}}) {
    if (cand * cand == d) {
      root = cand;
      return true;
    }
  }
  return false;
}

bool positive_sign(GaussianInt z) { return z.re > 0 || (z.re == 0 && z.im > 0); }

std::int64_t GMat2::height() const {
  std::int64_t h = 0;
  for (const auto& z : entries()) {
    h = std::max({h, z.re < 0 ? -z.re : z.re, z.im < 0 ? -z.im : z.im});
  }
  return h;
}

double GMat2::frobenius2() const {
  double s = 0;
  for (const auto& z : entries()) s += double(z.re) * double(z.re) + double(z.im) * double(z.im);
  return s;
}

GMat2 mat_mul(const GMat2& x, const GMat2& y) {
  return {x.a * y.a + x.b * y.c, x.a * y.b + x.b * y.d, x.c * y.a + x.d * y.c, x.c * y.b + x.d * y.d};
}

GMat2 canonical(const GMat2& m) {
  for (const auto& z : m.entries()) {
    if (z.is_zero()) continue;
    return positive_sign(z) ? m : -m;
  }
  return m;
}

bool is_canonical(const GMat2& m) { return canonical(m) == m; }

bool projective_equal(const GMat2& m, const GMat2& n) { return m == n || m == -n; }

bool is_projective_identity(const GMat2& m) { return projective_equal(m, GMat2::identity()); }

GMat2 conjugate(const GMat2& g, const GMat2& m) { return canonical(g * m * g.inverse_unimodular()); }

GMat2 mat_pow(const GMat2& m, int k) {
  if (k < 0) throw std::invalid_argument("mat_pow: negative exponent");
  GMat2 result = GMat2::identity(), base = m;
  while (k > 0) {
    if (k & 1) result = result * base;
    base = base * base;
    k >>= 1;
  }
  return result;
}

std::ostream& operator<<(std::ostream& os, const GMat2& m) { return os << to_string(m); }

std::string to_string(const GMat2& m) {
  return "[[" + to_string(m.a) + "," + to_string(m.b) + "],[" + to_string(m.c) + "," + to_string(m.d) + "]]";
}

std::size_t GMat2Hash::operator()(const GMat2& m) const noexcept {
  std::uint64_t h = 1469598103934665603ULL;
  for (const auto& z : m.entries()) {
    for (std::int64_t v : {z.re, z.im}) {
      h ^= static_cast<std::uint64_t>(v) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
    }
  }
  return static_cast<std::size_t>(h);
}

ResidueRing::ResidueRing(GaussianInt modulus) : modulus_(modulus) {
  if (modulus.is_zero()) throw std::invalid_argument("residue ring modulus must be nonzero");
  order_ = modulus.norm();
  // lattice spanned by (a, b) and (-b, a)
  const std::int64_t a = modulus.re, b = modulus.im;
  const IntBezout bz = int_ext_gcd(b, a);  // bz.g = x*b + y*a
  ydiv_ = bz.g;
  xshift_ = bz.x * a - bz.y * b;
  xdiv_ = order_ / ydiv_;
}

std::int64_t ResidueRing::index(GaussianInt z) const {
  const std::int64_t k = floor_div(z.im, ydiv_);
  const std::int64_t y = z.im - k * ydiv_;
  const std::int64_t x = floor_mod(checked::sub(z.re, checked::mul(k, xshift_)), xdiv_);
  return y * xdiv_ + x;
}

GaussianInt ResidueRing::element(std::int64_t idx) const {
  if (idx < 0 || idx >= order_) throw std::out_of_range("residue index out of range");
  return {idx % xdiv_, idx / xdiv_};
}

bool residue_is_unit(std::int64_t x, const ResidueRing& ring) {
  // x is a unit iff gcd(x, pi) is a unit in Z[i]
  return gcd(ring.element(x), ring.modulus()).norm() == 1;
}

ResidueMat2 reduce_mod_unchecked(const GMat2& x, const ResidueRing& ring) {
  return {{ring.index(x.a), ring.index(x.b), ring.index(x.c), ring.index(x.d)}};
}

ResidueMat2 reduce_mod(const GMat2& x, const ResidueRing& ring) {
  ResidueMat2 r = reduce_mod_unchecked(x, ring);
  const std::int64_t det = ring.index(x.det());
  if (!residue_is_unit(det, ring)) {
    throw std::domain_error("matrix " + to_string(x) + " is not invertible modulo " + to_string(ring.modulus()));
  }
  return r;
}

ResidueMat2 residue_mul(const ResidueMat2& x, const ResidueMat2& y, const ResidueRing& ring) {
  auto m = [&](int i, int j) { return ring.mul(x.e[i], y.e[j]); };
  return {{ring.add(m(0, 0), m(1, 2)), ring.add(m(0, 1), m(1, 3)), ring.add(m(2, 0), m(3, 2)),
           ring.add(m(2, 1), m(3, 3))}};
}

}  // namespace kz
