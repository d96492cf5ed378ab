#include "kzeta/cusps.hpp"

#include <Eigen/SVD>
#include <algorithm>
#include <optional>
#include <sstream>

namespace kz {

namespace {

const GaussianInt kUnitI{0, 1};

GMat2 translation(GaussianInt b) { return {GaussianInt{1}, b, GaussianInt{0}, GaussianInt{1}}; }
GMat2 rotation(GaussianInt b) { return {kUnitI, b, GaussianInt{0}, -kUnitI}; }

std::int64_t cross(GaussianInt u, GaussianInt v) { return u.re * v.im - u.im * v.re; }

// Reduced basis of {b : translation(b) in sub}. Z[i] / Lambda embeds in the
// quotient, so n Z[i] lies in Lambda and both successive minima have
// coordinates bounded by n.
std::array<GaussianInt, 2> translation_lattice(const SubgroupDescriptor& sub) {
  const auto n = static_cast<std::int64_t>(sub.index());
  std::vector<GaussianInt> pts;
  for (std::int64_t x = -n; x <= n; ++x) {
    for (std::int64_t y = -n; y <= n; ++y) {
      if ((x == 0 && y == 0) || !sub.contains(translation({x, y}))) continue;
      pts.push_back({x, y});
    }
  }
  auto better = [](GaussianInt u, GaussianInt v) {
    if (u.norm() != v.norm()) return u.norm() < v.norm();
    return std::make_pair(-u.re, -u.im) < std::make_pair(-v.re, -v.im);
  };
  GaussianInt w1 = pts.front();
  for (const auto& v : pts) {
    if (better(v, w1)) w1 = v;
  }
  std::optional<GaussianInt> w2;
  for (const auto& v : pts) {
    if (cross(w1, v) <= 0) continue;
    if (!w2 || better(v, *w2)) w2 = v;
  }
  if (!w2) throw CuspError("translation lattice of " + sub.describe() + " is degenerate");
  return {w1, *w2};
}

bool in_lattice(GaussianInt b, const std::array<GaussianInt, 2>& l) {
  // b = m l0 + k l1 by Cramer's rule
  const std::int64_t det = cross(l[0], l[1]);
  const std::int64_t m = cross(b, l[1]), k = cross(l[0], b);
  return m % det == 0 && k % det == 0;
}

std::optional<GaussianInt> rotation_offset(const SubgroupDescriptor& sub) {
  const auto n = static_cast<std::int64_t>(sub.index());
  for (std::int64_t x = 0; x < n; ++x) {
    for (std::int64_t y = 0; y < n; ++y) {
      if (sub.contains(rotation({x, y}))) return GaussianInt{x, y};
    }
  }
  return std::nullopt;
}

bool fixes(const GMat2& s, GaussianInt p, GaussianInt q) {
  return (s.a * p + s.b * q) * q == (s.c * p + s.d * q) * p;
}

// (p : q) with the unit chosen so that q (or p when q = 0) is normalized.
std::pair<GaussianInt, GaussianInt> normalize_point(GaussianInt p, GaussianInt q) {
  const GaussianInt lead = q.is_zero() ? p : q;
  for (const GaussianInt u : {GaussianInt{1}, GaussianInt{-1}, kUnitI, -kUnitI}) {
    if (lead * u == normalize_associate(lead)) return {p * u, q * u};
  }
  return {p, q};
}

void fail(const CuspData& c, const std::string& what) {
  std::ostringstream os;
  os << "cusp " << to_string(c.p) << " : " << to_string(c.q) << ": " << what;
  throw CuspError(os.str());
}

}  // namespace

std::vector<CuspData> cusp_classes(const SubgroupDescriptor& sub) {
  const FiniteGroup g = quotient_group(sub);
  const std::vector<std::size_t> gens{sub.coset_label(translation(GaussianInt{1})), sub.coset_label(translation(kUnitI)),
                                      sub.coset_label(rotation(GaussianInt{0}))};
  const auto h = g.generated_subgroup(gens);
  const auto lattice = translation_lattice(sub);
  const auto rot = rotation_offset(sub);

  std::vector<bool> seen(g.order, false);
  std::vector<CuspData> out;
  for (std::size_t x = 0; x < g.order; ++x) {
    if (seen[x]) continue;
    for (auto y : h) seen[g.mul(x, y)] = true;
    CuspData c;
    c.alpha = sub.cosets()[x];
    std::tie(c.p, c.q) = normalize_point(c.alpha.a, c.alpha.c);
    const Bezout bz = extended_gcd(c.p, c.q);
    if (!bz.g.is_unit()) fail(c, "representative is not coprime");
    const GaussianInt x0 = exact_div(bz.x, bz.g), y0 = exact_div(bz.y, bz.g);
    c.conjugator = GMat2{x0, y0, -c.q, c.p};
    c.lattice = lattice;
    c.tau = lattice[1].to_complex() / lattice[0].to_complex();
    const GMat2 inv = c.alpha.inverse_unimodular();
    for (const auto& w : lattice) c.parabolic.push_back(c.alpha * translation(w) * inv);
    c.stabilizer = c.parabolic;
    if (rot) {
      c.stabilizer.push_back(c.alpha * rotation(*rot) * inv);
      c.parabolic_index = 2;
    }

    // B zeta = infinity; conjugated generators upper triangular, the parabolic
    // ones unipotent with translation in Lambda
    // B (p, q) = (x0 p + y0 q, 0) = (1, 0)
    if (c.conjugator.det() != GaussianInt{1}) fail(c, "B does not send the cusp to infinity");
    const GMat2 binv = c.conjugator.inverse_unimodular();
    for (std::size_t k = 0; k < c.stabilizer.size(); ++k) {
      const GMat2& s = c.stabilizer[k];
      if (!sub.contains(s)) fail(c, "stabilizer generator outside the group");
      if (!fixes(s, c.p, c.q)) fail(c, "stabilizer generator moves the cusp");
      const GMat2 t = c.conjugator * s * binv;
      if (!t.c.is_zero()) fail(c, "conjugated generator is not upper triangular");
      if (k < c.parabolic.size()) {
        if (t.a != t.d || !(t.a == GaussianInt{1} || t.a == GaussianInt{-1})) fail(c, "parabolic generator is not unipotent");
        if (!in_lattice(t.b, lattice)) fail(c, "translation outside the lattice");
      } else {
        c.epsilon = t.a.to_complex();
        if (c.epsilon.imag() < 0) c.epsilon = -c.epsilon;
        c.epsilon_order = 4;
      }
    }
    out.push_back(std::move(c));
  }
  return out;
}

SingularSpace fixed_space(const UnitaryRep& chi, const std::vector<GMat2>& gens) {
  if (!chi.has_matrices()) throw std::invalid_argument("fixed_space: " + chi.name + " has no matrices");
  const Eigen::Index d = chi.dim;
  SingularSpace out;
  if (gens.empty()) {
    out.basis = CMatrix::Identity(d, d);
    out.dim = static_cast<int>(d);
    return out;
  }
  CMatrix stacked(d * static_cast<Eigen::Index>(gens.size()), d);
  for (std::size_t k = 0; k < gens.size(); ++k) {
    stacked.block(static_cast<Eigen::Index>(k) * d, 0, d, d) = chi.matrix(gens[k]) - CMatrix::Identity(d, d);
  }
  Eigen::JacobiSVD<CMatrix> svd(stacked, Eigen::ComputeFullV);
  const auto& sv = svd.singularValues();
  // unitary chi: |chi(g) - I| <= 2, so a scale below 1 only means chi(g) = I
  const double scale = std::max(sv.size() ? sv(0) : 0.0, 1.0);
  auto rank_at = [&](double rel) {
    Eigen::Index r = 0;
    for (Eigen::Index k = 0; k < sv.size(); ++k) r += sv(k) > rel * scale;
    return r;
  };
  const Eigen::Index rank = rank_at(1e-8);
  for (Eigen::Index k = 0; k < sv.size(); ++k) {
    if (sv(k) > 1e-10 && sv(k) < 1e-6) out.well_separated = false;
  }
  if (rank_at(1e-7) != rank || rank_at(1e-9) != rank) out.well_separated = false;
  out.dim = static_cast<int>(d - rank);
  out.basis = svd.matrixV().rightCols(d - rank);
  return out;
}

SingularityReport singularity(const std::vector<CuspData>& cusps, const UnitaryRep& chi, const std::string& group) {
  SingularityReport rep;
  rep.group = group;
  rep.dim = chi.dim;
  rep.kappa = static_cast<int>(cusps.size());
  for (const auto& c : cusps) {
    const SingularSpace v = fixed_space(chi, c.stabilizer);
    const SingularSpace vp = fixed_space(chi, c.parabolic);
    CuspSingularity s;
    s.k = v.dim;
    s.k_prime = vp.dim;
    s.well_separated = v.well_separated && vp.well_separated;
    if (v.dim > 0) {
      const CMatrix resid = v.basis - vp.basis * (vp.basis.adjoint() * v.basis);
      s.contained = resid.norm() < 1e-8;
    }
    rep.total += s.k;
    rep.clean = rep.clean && s.well_separated && s.contained;
    rep.cusps.push_back(s);
  }
  return rep;
}

KInvariantReport verify_k_invariant(const SubgroupDescriptor& sub, const UnitaryRep& chi) {
  if (!chi.has_matrices()) throw std::invalid_argument("verify_k_invariant: " + chi.name + " has no matrices");
  KInvariantReport out;
  out.sub_side = singularity(cusp_classes(sub), chi, sub.describe());
  const UnitaryRep induced = induce(chi, sub).as_rep();
  out.induced_side = singularity(cusp_classes(SubgroupDescriptor::full()), induced, "PSL(2, Z[i])");
  out.equal = out.sub_side.total == out.induced_side.total;
  return out;
}

}  // namespace kz
