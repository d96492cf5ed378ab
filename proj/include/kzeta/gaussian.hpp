#pragma once

// Exact arithmetic over the Gaussian integers Z[i], their residue rings and
// 2x2 matrices. All operations are checked: overflow throws OverflowError.

#include <array>
#include <complex>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

namespace kz {

struct OverflowError : std::overflow_error {
  using std::overflow_error::overflow_error;
};

namespace checked {
inline std::int64_t add(std::int64_t a, std::int64_t b) {
  std::int64_t r;
  if (__builtin_add_overflow(a, b, &r)) throw OverflowError("int64 overflow in addition");
  return r;
}
inline std::int64_t sub(std::int64_t a, std::int64_t b) {
  std::int64_t r;
  if (__builtin_sub_overflow(a, b, &r)) throw OverflowError("int64 overflow in subtraction");
  return r;
}
inline std::int64_t mul(std::int64_t a, std::int64_t b) {
  std::int64_t r;
  if (__builtin_mul_overflow(a, b, &r)) throw OverflowError("int64 overflow in multiplication");
  return r;
}
}  // namespace checked

/// a + bi with a, b in Z.
struct GaussianInt {
  std::int64_t re = 0;
  std::int64_t im = 0;

  constexpr GaussianInt() = default;
  constexpr GaussianInt(std::int64_t r, std::int64_t i = 0) : re(r), im(i) {}

  std::int64_t norm() const { return checked::add(checked::mul(re, re), checked::mul(im, im)); }
  GaussianInt conj() const { return {re, checked::sub(0, im)}; }
  bool is_zero() const { return re == 0 && im == 0; }
  bool is_unit() const { return (re == 0 && (im == 1 || im == -1)) || (im == 0 && (re == 1 || re == -1)); }
  std::complex<double> to_complex() const { return {double(re), double(im)}; }

  friend bool operator==(const GaussianInt&, const GaussianInt&) = default;
  friend auto operator<=>(const GaussianInt&, const GaussianInt&) = default;

  friend GaussianInt operator+(GaussianInt a, GaussianInt b) {
    return {checked::add(a.re, b.re), checked::add(a.im, b.im)};
  }
  friend GaussianInt operator-(GaussianInt a, GaussianInt b) {
    return {checked::sub(a.re, b.re), checked::sub(a.im, b.im)};
  }
  friend GaussianInt operator-(GaussianInt a) { return {checked::sub(0, a.re), checked::sub(0, a.im)}; }
  friend GaussianInt operator*(GaussianInt a, GaussianInt b) {
    return {checked::sub(checked::mul(a.re, b.re), checked::mul(a.im, b.im)),
            checked::add(checked::mul(a.re, b.im), checked::mul(a.im, b.re))};
  }
  GaussianInt& operator+=(GaussianInt o) { return *this = *this + o; }
  GaussianInt& operator-=(GaussianInt o) { return *this = *this - o; }
  GaussianInt& operator*=(GaussianInt o) { return *this = *this * o; }
};

inline constexpr GaussianInt kI{0, 1};

std::ostream& operator<<(std::ostream& os, const GaussianInt& z);
std::string to_string(const GaussianInt& z);

/// Division with remainder: a = q*b + r with norm(r) <= norm(b)/2.
/// Throws std::domain_error on b == 0.
struct DivMod {
  GaussianInt quot;
  GaussianInt rem;
};
DivMod divmod(GaussianInt a, GaussianInt b);

/// Exact division; throws std::domain_error when b does not divide a.
GaussianInt exact_div(GaussianInt a, GaussianInt b);
bool divides(GaussianInt b, GaussianInt a);

/// gcd normalized to the associate with re > 0, im >= 0 (or 0).
GaussianInt gcd(GaussianInt a, GaussianInt b);

/// Extended Euclid: g = x*a + y*b with g = gcd(a, b) (not normalized).
struct Bezout {
  GaussianInt g, x, y;
};
Bezout extended_gcd(GaussianInt a, GaussianInt b);

/// Associate with re > 0, im >= 0 (unit-normalized); 0 maps to 0.
GaussianInt normalize_associate(GaussianInt a);

/// Exact square root in Z[i], if one exists.
bool exact_sqrt(GaussianInt d, GaussianInt& root);

/// Lexicographic sign canonicalization: first nonzero of (re, im) positive.
bool positive_sign(GaussianInt z);

/// 2x2 matrix [[a, b], [c, d]] over Z[i].
struct GMat2 {
  GaussianInt a{1}, b{0}, c{0}, d{1};

  static GMat2 identity() { return {}; }
  GaussianInt det() const { return a * d - b * c; }
  GaussianInt trace() const { return a + d; }
  /// Inverse of a determinant-one matrix (adjugate).
  GMat2 inverse_unimodular() const { return {d, -b, -c, a}; }
  GMat2 operator-() const { return {-a, -b, -c, -d}; }
  /// max(|re|, |im|) over all entries.
  std::int64_t height() const;
  /// Squared Frobenius norm sum |entry|^2 (as double; used only for ordering/bounds).
  double frobenius2() const;
  std::array<GaussianInt, 4> entries() const { return {a, b, c, d}; }

  friend bool operator==(const GMat2&, const GMat2&) = default;
  friend auto operator<=>(const GMat2&, const GMat2&) = default;
};

GMat2 mat_mul(const GMat2& x, const GMat2& y);
inline GMat2 operator*(const GMat2& x, const GMat2& y) { return mat_mul(x, y); }

/// Canonical projective sign: first nonzero entry in reading order (a, b, c, d)
/// has re > 0, or re == 0 and im > 0.
GMat2 canonical(const GMat2& m);
bool is_canonical(const GMat2& m);
/// Equality in PSL: m == n or m == -n.
bool projective_equal(const GMat2& m, const GMat2& n);
/// m == +-I.
bool is_projective_identity(const GMat2& m);
/// Canonical conjugate g m g^{-1} (g of determinant one).
GMat2 conjugate(const GMat2& g, const GMat2& m);
/// m^k for k >= 0 (projective class not canonicalized).
GMat2 mat_pow(const GMat2& m, int k);

std::ostream& operator<<(std::ostream& os, const GMat2& m);
std::string to_string(const GMat2& m);

struct GMat2Hash {
  std::size_t operator()(const GMat2& m) const noexcept;
};

/// The residue ring Z[i]/(pi). Residues are indexed 0..order()-1; the
/// reduction map is a ring homomorphism onto this finite ring.
class ResidueRing {
 public:
  explicit ResidueRing(GaussianInt modulus);

  GaussianInt modulus() const { return modulus_; }
  std::int64_t order() const { return order_; }

  /// Index of the residue class of z.
  std::int64_t index(GaussianInt z) const;
  /// Canonical representative of a residue index.
  GaussianInt element(std::int64_t idx) const;
  GaussianInt reduce(GaussianInt z) const { return element(index(z)); }

  std::int64_t add(std::int64_t x, std::int64_t y) const { return index(element(x) + element(y)); }
  std::int64_t mul(std::int64_t x, std::int64_t y) const { return index(element(x) * element(y)); }
  std::int64_t neg(std::int64_t x) const { return index(-element(x)); }

 private:
  GaussianInt modulus_;
  std::int64_t order_;
  // Z^2 / L with L = span{(xdiv, 0), (xshift, ydiv)}.
  std::int64_t xdiv_, xshift_, ydiv_;
};

/// A 2x2 matrix over a residue ring, entries given by residue indices.
struct ResidueMat2 {
  std::array<std::int64_t, 4> e{};  // a, b, c, d
  friend bool operator==(const ResidueMat2&, const ResidueMat2&) = default;
  friend auto operator<=>(const ResidueMat2&, const ResidueMat2&) = default;
};

/// Entrywise reduction. Throws std::domain_error when the reduced determinant
/// is not a unit of the residue ring (the matrix is not invertible there).
ResidueMat2 reduce_mod(const GMat2& x, const ResidueRing& ring);
/// Entrywise reduction without the invertibility check.
ResidueMat2 reduce_mod_unchecked(const GMat2& x, const ResidueRing& ring);
ResidueMat2 residue_mul(const ResidueMat2& x, const ResidueMat2& y, const ResidueRing& ring);
bool residue_is_unit(std::int64_t x, const ResidueRing& ring);

}  // namespace kz
