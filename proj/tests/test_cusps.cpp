#include <algorithm>
#include <set>

#include "doctest.h"
#include "kzeta/cusps.hpp"
#include "kzeta/enumerate.hpp"

using namespace kz;

namespace {

GaussianInt gi(std::int64_t re, std::int64_t im = 0) { return GaussianInt{re, im}; }

SubgroupDescriptor group_for(GaussianInt pi) {
  return pi == gi(1) ? SubgroupDescriptor::full() : SubgroupDescriptor::principal_congruence(pi);
}

// Gamma(pi) preserves (p, q) mod pi and the units act by scaling, so the
// cusps are the primitive residue vectors modulo the unit images.
std::size_t cusp_count_oracle(GaussianInt pi) {
  const ResidueRing ring(pi);
  const std::int64_t n = ring.order();
  std::set<std::int64_t> units;
  for (const auto u : {gi(1), gi(-1), gi(0, 1), gi(0, -1)}) units.insert(ring.index(u));
  std::size_t primitive = 0;
  for (std::int64_t a = 0; a < n; ++a) {
    for (std::int64_t b = 0; b < n; ++b) {
      // Z[i]/pi is local for the moduli used here: primitive iff one entry is a unit
      primitive += residue_is_unit(a, ring) || residue_is_unit(b, ring);
    }
  }
  return primitive / units.size();
}

std::pair<std::int64_t, std::int64_t> residue_class(GaussianInt p, GaussianInt q, const ResidueRing& ring) {
  std::pair<std::int64_t, std::int64_t> best{-1, -1};
  for (const auto u : {gi(1), gi(-1), gi(0, 1), gi(0, -1)}) {
    const std::pair<std::int64_t, std::int64_t> r{ring.index(p * u), ring.index(q * u)};
    if (best.first < 0 || r < best) best = r;
  }
  return best;
}

std::int64_t cross(GaussianInt u, GaussianInt v) { return u.re * v.im - u.im * v.re; }

}  // namespace

TEST_CASE("cusp counts match the residue vector count") {
  CHECK(cusp_classes(SubgroupDescriptor::full()).size() == 1);
  for (const auto pi : {gi(1, 1), gi(2), gi(2, 1)}) {
    CAPTURE(to_string(pi));
    const auto sub = group_for(pi);
    const auto cusps = cusp_classes(sub);
    CHECK(cusps.size() == cusp_count_oracle(pi));
    // representatives occupy distinct residue classes
    const ResidueRing ring(pi);
    std::set<std::pair<std::int64_t, std::int64_t>> seen;
    for (const auto& c : cusps) seen.insert(residue_class(c.p, c.q, ring));
    CHECK(seen.size() == cusps.size());
  }
  CHECK(cusp_classes(group_for(gi(1, 1))).size() == 3);
}

TEST_CASE("conjugators send each cusp to infinity") {
  for (const auto pi : {gi(1), gi(1, 1), gi(2, 1)}) {
    const auto sub = group_for(pi);
    for (const auto& c : cusp_classes(sub)) {
      CHECK(c.alpha.a * c.q == c.alpha.c * c.p);
      CHECK(c.conjugator.det() == gi(1));
      CHECK(c.conjugator.c * c.p + c.conjugator.d * c.q == gi(0));
      const GMat2 binv = c.conjugator.inverse_unimodular();
      for (const auto& s : c.stabilizer) {
        CHECK(sub.contains(s));
        CHECK((c.conjugator * s * binv).c == gi(0));
      }
      CHECK(c.tau.imag() > 0);
    }
  }
}

TEST_CASE("stabilizer of infinity against a scan of upper triangular elements") {
  for (const auto pi : {gi(1), gi(1, 1), gi(2, 1)}) {
    CAPTURE(to_string(pi));
    const auto sub = group_for(pi);
    const auto cusps = cusp_classes(sub);
    const auto& inf = *std::find_if(cusps.begin(), cusps.end(), [](const CuspData& c) { return c.q.is_zero(); });
    const auto& l = inf.lattice;
    const std::int64_t covolume = cross(l[0], l[1]);
    CHECK(covolume == pi.norm());
    CHECK(divides(pi, l[0]));
    CHECK(divides(pi, l[1]));
    bool rotation = false;
    for (const auto& g : enumerate(3)) {
      if (!g.c.is_zero() || !sub.contains(g)) continue;
      if (g.a == gi(1) || g.a == gi(-1)) {
        const GaussianInt b = g.a == gi(1) ? g.b : -g.b;
        CHECK(cross(b, l[1]) % covolume == 0);
        CHECK(cross(l[0], b) % covolume == 0);
      } else {
        rotation = true;
      }
    }
    CHECK(rotation == (inf.epsilon_order == 4));
    CHECK(inf.parabolic_index == (rotation ? 2u : 1u));
  }
  const auto full = cusp_classes(SubgroupDescriptor::full());
  CHECK(full[0].lattice[0] == gi(1));
  CHECK(full[0].lattice[1] == gi(0, 1));
  CHECK(full[0].epsilon_order == 4);
}

TEST_CASE("trivial representation is unramified at every cusp") {
  for (const auto pi : {gi(1), gi(1, 1), gi(2, 1)}) {
    const auto cusps = cusp_classes(group_for(pi));
    const auto r = singularity(cusps, trivial_rep(3), "x");
    CHECK(r.total == 3 * static_cast<int>(cusps.size()));
    CHECK(r.clean);
    for (const auto& c : r.cusps) CHECK(c.k_prime == 3);
  }
}

TEST_CASE("singular dimension against the projector average") {
  // dim V = (1/|H|) sum_{h in H} tr theta(h), H the image of Gamma_infinity
  for (const auto pi : {gi(1, 1), gi(2, 1)}) {
    const auto sub = group_for(pi);
    const auto g = quotient_group(sub);
    const auto t = character_table(g);
    const std::vector<std::size_t> gens{sub.coset_label(GMat2{gi(1), gi(1), gi(0), gi(1)}),
                                        sub.coset_label(GMat2{gi(1), gi(0, 1), gi(0), gi(1)}),
                                        sub.coset_label(GMat2{gi(0, 1), gi(0), gi(0), gi(0, -1)})};
    const auto h = g.generated_subgroup(gens);
    const auto cusps = cusp_classes(SubgroupDescriptor::full());
    for (const auto& chi : t.irreducibles) {
      const auto mats = irrep_matrices(g, chi);
      CMatrix avg = CMatrix::Zero(chi.degree, chi.degree);
      for (auto x : h) avg += mats[x];
      avg /= static_cast<double>(h.size());
      CHECK((avg * avg - avg).norm() < 1e-10);
      const int expect = static_cast<int>(std::lround(avg.trace().real()));
      const auto r = singularity(cusps, pullback_irrep(sub, g, chi, mats, "theta"), "PSL");
      CHECK(r.total == expect);
      CHECK(r.cusps[0].contained);
      CHECK(r.clean);
    }
  }
}

TEST_CASE("singular dimension is an invariant of induction") {
  for (const auto pi : {gi(1, 1), gi(2, 1)}) {
    const auto sub = group_for(pi);
    const auto g = quotient_group(sub);
    const auto t = character_table(g);
    std::vector<UnitaryRep> chis{trivial_rep(1, RepDomain::Gamma1)};
    for (const auto& c : t.irreducibles) {
      if (c.degree >= 2 && c.degree <= 3) chis.push_back(restrict_rep(pullback_irrep(sub, g, c, irrep_matrices(g, c), "r")));
    }
    for (const auto& chi : chis) {
      const auto r = verify_k_invariant(sub, chi);
      CAPTURE(chi.dim);
      CHECK(r.equal);
      CHECK(r.sub_side.total == chi.dim * r.sub_side.kappa);
      CHECK(r.sub_side.clean);
      CHECK(r.induced_side.clean);
    }
  }
  // trivial on Gamma(1+i): k(Gamma, U) = kappa(Gamma(1+i)) = 3
  const auto r = verify_k_invariant(group_for(gi(1, 1)), trivial_rep(1, RepDomain::Gamma1));
  CHECK(r.induced_side.total == 3);
}

TEST_CASE("fixed space rejects a character without matrices") {
  const auto sub = group_for(gi(1, 1));
  const auto g = quotient_group(sub);
  const auto t = character_table(g);
  const auto bare = pullback_irrep(sub, g, t.irreducibles.back(), std::nullopt, "bare");
  CHECK_THROWS_AS(fixed_space(bare, {GMat2::identity()}), std::invalid_argument);
  const auto none = fixed_space(trivial_rep(2), {});
  CHECK(none.dim == 2);
}
