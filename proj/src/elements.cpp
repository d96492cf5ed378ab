#include "kzeta/elements.hpp"

#include <algorithm>
#include <cmath>
#include <set>

namespace kz {

std::string to_string(Kind k) {
  switch (k) {
    case Kind::Identity: return "identity";
    case Kind::Parabolic: return "parabolic";
    case Kind::Elliptic: return "elliptic";
    case Kind::Loxodromic: return "loxodromic";
  }
  return "?";
}

std::string to_string(Completeness c) { return c == Completeness::Complete ? "complete" : "search-bounded"; }

ElementKind classify(const GMat2& t) {
  if (is_projective_identity(t)) return {Kind::Identity, 1};
  const GaussianInt tr = t.trace();
  if (tr.im == 0) {
    if (tr.re == 2 || tr.re == -2) return {Kind::Parabolic, 1};
    if (tr.re == 0) return {Kind::Elliptic, 2};
    if (tr.re == 1 || tr.re == -1) return {Kind::Elliptic, 3};
  }
  return {Kind::Loxodromic, 1};
}

double norm_from_trace(GaussianInt trace) {
  const std::complex<double> t = trace.to_complex();
  const std::complex<double> root = std::sqrt(t * t - 4.0);
  std::complex<double> a = 0.5 * (t + root);
  if (std::abs(a) < 1.0) a = 0.5 * (t - root);
  return std::norm(a);
}

LoxodromicData loxodromic_data(const GMat2& t) {
  if (!is_loxodromic(t)) throw KindError("loxodromic_data: " + to_string(t) + " is " + to_string(classify(t).kind));
  GaussianInt tr = t.trace();
  if (!positive_sign(tr)) tr = -tr;
  const std::complex<double> c = tr.to_complex();
  const std::complex<double> root = std::sqrt(c * c - 4.0);
  std::complex<double> a = 0.5 * (c + root);
  std::complex<double> b = 0.5 * (c - root);
  if (std::abs(b) > std::abs(a)) std::swap(a, b);
  return {a, std::norm(a), tr};
}

std::complex<double> eigenvalue_on_axis(const GMat2& t, const GMat2& x) {
  using C = std::complex<double>;
  const C a = t.a.to_complex(), b = t.b.to_complex(), c = t.c.to_complex(), d = t.d.to_complex();
  const C tr = a + d;
  const C root = std::sqrt(tr * tr - 4.0);
  C lam = 0.5 * (tr + root);
  if (std::abs(lam) < 1.0) lam = 0.5 * (tr - root);
  C v0, v1;
  if (std::abs(c) > 0.5) {
    v0 = lam - d;
    v1 = c;
  } else if (std::abs(b) > 0.5) {
    v0 = b;
    v1 = lam - a;
  } else {
    // diagonal
    if (std::abs(lam - a) < std::abs(lam - d)) {
      v0 = 1.0;
      v1 = 0.0;
    } else {
      v0 = 0.0;
      v1 = 1.0;
    }
  }
  const C xa = x.a.to_complex(), xb = x.b.to_complex(), xc = x.c.to_complex(), xd = x.d.to_complex();
  const C w0 = xa * v0 + xb * v1, w1 = xc * v0 + xd * v1;
  return std::abs(v0) >= std::abs(v1) ? w0 / v0 : w1 / v1;
}

std::vector<GMat2> centralizer_elements(const GMat2& t, const MembershipFn& member) {
  if (!is_loxodromic(t)) throw KindError("centralizer_elements: input is not loxodromic");
  const GaussianInt g = gcd(gcd(t.b, t.c), t.a - t.d);
  const GaussianInt beta = exact_div(t.b, g), gam = exact_div(t.c, g), del = exact_div(t.a - t.d, g);
  const GaussianInt disc_unit = del * del + GaussianInt{4} * beta * gam;  // (tr^2 - 4) / g^2

  const double nt = norm_from_trace(t.trace());
  const std::complex<double> tr = t.trace().to_complex();
  const double spread = std::sqrt(std::abs(tr * tr - 4.0));  // |a - 1/a|
  const double wmax = std::sqrt(double(g.norm())) * (std::sqrt(nt) + 1.0) / spread + 1e-9;
  const auto wbox = static_cast<std::int64_t>(std::ceil(wmax));

  std::set<GMat2> found;
  for (std::int64_t wr = -wbox; wr <= wbox; ++wr) {
    for (std::int64_t wi = -wbox; wi <= wbox; ++wi) {
      if (double(wr * wr + wi * wi) > wmax * wmax) continue;
      const GaussianInt w{wr, wi};
      const GaussianInt disc = w * w * disc_unit + GaussianInt{4};
      GaussianInt root;
      if (!exact_sqrt(disc, root)) continue;
      for (const GaussianInt s : {root, -root}) {
        const GaussianInt twice_x = w * del + s;
        if (twice_x.re % 2 != 0 || twice_x.im % 2 != 0) continue;
        const GaussianInt x{twice_x.re / 2, twice_x.im / 2};
        const GMat2 cand{x, w * beta, w * gam, x - w * del};
        if (cand.det() != GaussianInt{1}) continue;
        const ElementKind kind = classify(cand);
        if (kind.kind == Kind::Parabolic) continue;  // cannot commute with a loxodromic
        if (kind.kind == Kind::Loxodromic && norm_from_trace(cand.trace()) > nt * (1.0 + 1e-9)) continue;
        const GMat2 c = canonical(cand);
        if (member && !member(c)) continue;
        found.insert(c);
      }
    }
  }
  return {found.begin(), found.end()};
}

namespace {

bool in_torsion(const GMat2& x, const std::vector<GMat2>& torsion) {
  for (const auto& e : torsion) {
    if (projective_equal(x, e)) return true;
  }
  return false;
}

std::complex<double> normalized_zeta(const GMat2& t, const std::optional<GMat2>& gen, int m) {
  if (!gen) return {-1.0, 0.0};
  std::complex<double> z = eigenvalue_on_axis(t, *gen);
  // choose the sign making z a primitive 2m-th root: z^m = -1
  if (std::abs(std::pow(z, m) + 1.0) > std::abs(std::pow(-z, m) + 1.0)) z = -z;
  return z;
}

// Shared tail of both analyses: given the commuting torsion (including the
// identity) and loxodromic candidates, pick T0 with minimal norm and the
// orientation making T = T0^n E^j with n > 0.
CentralizerData finish(const GMat2& t, std::vector<GMat2> torsion, const std::vector<GMat2>& lox, int k_cap,
                       Completeness completeness) {
  CentralizerData out;
  out.completeness = completeness;
  const double nt = norm_from_trace(t.trace());

  out.torsion_order = static_cast<int>(torsion.size());
  for (const auto& e : torsion) {
    const ElementKind k = classify(e);
    if (k.kind == Kind::Elliptic && k.order == out.torsion_order) {
      out.torsion_generator = e;
      break;
    }
  }
  if (out.torsion_order > 1 && !out.torsion_generator) {
    // non-cyclic commuting torsion cannot occur for a loxodromic centralizer
    throw std::logic_error("centralizer torsion is not cyclic for " + to_string(t));
  }
  out.zeta = normalized_zeta(t, out.torsion_generator, out.torsion_order);

  double nmin = nt;
  for (const auto& x : lox) nmin = std::min(nmin, norm_from_trace(x.trace()));

  std::vector<GMat2> cands;
  for (const auto& x : lox) {
    if (std::abs(norm_from_trace(x.trace()) - nmin) <= 1e-9 * nmin) cands.push_back(x);
  }
  const int kmax = std::max(1, std::min(k_cap, static_cast<int>(std::ceil(std::log(nt) / std::log(nmin) - 1e-9)) + 1));
  std::optional<GMat2> best;
  int best_power = 0;
  for (const auto& p : cands) {
    const int n = static_cast<int>(std::lround(std::log(nt) / std::log(nmin)));
    if (n < 1 || n > kmax) continue;
    const GMat2 pn = mat_pow(p, n);
    // T * P^{-n} must be torsion (or +-I)
    const GMat2 rest = t * pn.inverse_unimodular();
    if (!in_torsion(rest, torsion)) continue;
    if (!best || p < *best) {
      best = p;
      best_power = n;
    }
  }
  if (!best) {
    out.primitive = canonical(t);
    out.power = 1;
  } else {
    out.primitive = *best;
    out.power = best_power;
  }
  out.primitive_norm = norm_from_trace(out.primitive.trace());
  return out;
}

}  // namespace

CentralizerData centralizer_exact(const GMat2& t, const MembershipFn& member) {
  const auto elems = centralizer_elements(t, member);
  std::vector<GMat2> torsion, lox;
  for (const auto& x : elems) {
    const Kind k = classify(x).kind;
    if (k == Kind::Loxodromic) lox.push_back(x);
    else torsion.push_back(x);
  }
  // orientation: T0 ranges over both P and P^{-1}; both are enumerated
  return finish(t, std::move(torsion), lox, 1 << 20, Completeness::Complete);
}

CentralizerData centralizer_analyze(const GMat2& t, std::span<const GMat2> pool) {
  if (!is_loxodromic(t)) throw KindError("centralizer_analyze: input is not loxodromic");
  const double nt = norm_from_trace(t.trace());
  std::vector<GMat2> torsion{GMat2::identity()}, lox;
  double nmin = nt;
  for (const auto& x : pool) {
    const GMat2 xt = x * t, tx = t * x;
    if (!(xt == tx || xt == -tx)) continue;
    const ElementKind k = classify(x);
    if (k.kind == Kind::Identity) continue;
    if (k.kind == Kind::Elliptic) {
      torsion.push_back(canonical(x));
    } else if (k.kind == Kind::Loxodromic) {
      const double nx = norm_from_trace(x.trace());
      if (nx <= nt * (1.0 + 1e-9)) {
        lox.push_back(canonical(x));
        nmin = std::min(nmin, nx);
      }
    }
  }
  std::sort(torsion.begin(), torsion.end());
  torsion.erase(std::unique(torsion.begin(), torsion.end()), torsion.end());
  // the pool may contain only one orientation; add inverses
  const std::size_t nl = lox.size();
  for (std::size_t i = 0; i < nl; ++i) lox.push_back(canonical(lox[i].inverse_unimodular()));
  std::sort(lox.begin(), lox.end());
  lox.erase(std::unique(lox.begin(), lox.end()), lox.end());
  const int kmax = static_cast<int>(std::ceil(std::log(nt) / std::log(nmin) - 1e-9));
  return finish(t, std::move(torsion), lox, std::max(kmax, 1), Completeness::SearchBounded);
}

}  // namespace kz
