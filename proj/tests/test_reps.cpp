#include <algorithm>
#include <cmath>

#include "doctest.h"
#include "kzeta/enumerate.hpp"
#include "kzeta/reps.hpp"
#include "kzeta/rng.hpp"

using namespace kz;

namespace {

GaussianInt gi(std::int64_t re, std::int64_t im = 0) { return GaussianInt{re, im}; }

// Left regular representation L(x) e_y = e_{xy} as a permutation matrix.
CMatrix regular(const FiniteGroup& g, std::size_t x) {
  const auto n = static_cast<Eigen::Index>(g.order);
  CMatrix m = CMatrix::Zero(n, n);
  for (std::size_t y = 0; y < g.order; ++y) m(static_cast<Eigen::Index>(g.mul(x, y)), static_cast<Eigen::Index>(y)) = 1;
  return m;
}

struct Quotient {
  SubgroupDescriptor sub;
  FiniteGroup g;
  CharacterTable t;
};

const Quotient& quotient(GaussianInt pi) {
  static std::vector<std::pair<GaussianInt, Quotient>> cache;
  for (const auto& [k, q] : cache) {
    if (k == pi) return q;
  }
  auto sub = SubgroupDescriptor::principal_congruence(pi);
  auto g = quotient_group(sub);
  auto t = character_table(g);
  cache.emplace_back(pi, Quotient{std::move(sub), std::move(g), std::move(t)});
  return cache.back().second;
}

std::vector<int> degrees(const CharacterTable& t) {
  std::vector<int> d;
  for (const auto& c : t.irreducibles) d.push_back(c.degree);
  std::sort(d.begin(), d.end());
  return d;
}

}  // namespace

TEST_CASE("quotient by Gamma(1+i) is S3") {
  const auto& q = quotient(gi(1, 1));
  CHECK(q.g.order == 6);
  CHECK(q.g.verify_axioms());
  CHECK_FALSE(q.g.is_abelian());
  auto orders = q.g.element_order;
  std::sort(orders.begin(), orders.end());
  CHECK(orders == std::vector<std::size_t>{1, 2, 2, 2, 3, 3});
  CHECK(q.g.classes.size() == 3);
  CHECK(degrees(q.t) == std::vector<int>{1, 1, 2});
}

TEST_CASE("character tables of the order 6 and 60 quotients") {
  for (const auto pi : {gi(1, 1), gi(2, 1)}) {
    const auto& q = quotient(pi);
    CAPTURE(pi.re);
    CHECK(q.g.order == (pi == gi(1, 1) ? 6u : 60u));
    CHECK(q.t.irreducibles.size() == q.g.classes.size());
    CHECK(q.t.max_orthogonality_error <= 1e-10);
    int sum_sq = 0;
    for (const auto& c : q.t.irreducibles) sum_sq += c.degree * c.degree;
    CHECK(sum_sq == static_cast<int>(q.g.order));

    // row orthogonality recomputed here
    double worst = 0;
    for (std::size_t a = 0; a < q.t.irreducibles.size(); ++a) {
      for (std::size_t b = 0; b < q.t.irreducibles.size(); ++b) {
        cplx ip = 0;
        for (std::size_t k = 0; k < q.g.classes.size(); ++k) {
          ip += static_cast<double>(q.g.classes[k].size()) * q.t.irreducibles[a].values[k] *
                std::conj(q.t.irreducibles[b].values[k]);
        }
        ip /= static_cast<double>(q.g.order);
        worst = std::max(worst, std::abs(ip - (a == b ? 1.0 : 0.0)));
      }
    }
    CHECK(worst <= 1e-10);
  }
  CHECK(degrees(quotient(gi(2, 1)).t) == std::vector<int>{1, 3, 3, 4, 5});
}

TEST_CASE("degrees against the regular representation") {
  // The isotypic projector (d/|G|) sum conj(chi(g)) L(g) has trace d^2.
  for (const auto pi : {gi(1, 1), gi(2, 1)}) {
    const auto& q = quotient(pi);
    const auto n = static_cast<Eigen::Index>(q.g.order);
    std::vector<CMatrix> reg;
    for (std::size_t x = 0; x < q.g.order; ++x) reg.push_back(regular(q.g, x));
    for (const auto& chi : q.t.irreducibles) {
      CMatrix p = CMatrix::Zero(n, n);
      for (std::size_t x = 0; x < q.g.order; ++x) p += std::conj(chi.values[q.g.class_of[x]]) * reg[x];
      p *= static_cast<double>(chi.degree) / static_cast<double>(q.g.order);
      CHECK(std::abs(p.trace() - cplx(chi.degree * chi.degree)) < 1e-9);
      CHECK((p * p - p).norm() < 1e-9);
    }
  }
}

TEST_CASE("irreducible matrices realize their characters") {
  for (const auto pi : {gi(1, 1), gi(2, 1)}) {
    const auto& q = quotient(pi);
    for (const auto& chi : q.t.irreducibles) {
      const auto mats = irrep_matrices(q.g, chi);
      REQUIRE(mats.size() == q.g.order);
      double worst = 0;
      for (std::size_t x = 0; x < q.g.order; ++x) {
        const auto& m = mats[x];
        worst = std::max(worst, std::abs(m.trace() - chi.values[q.g.class_of[x]]));
        worst = std::max(worst, (m * m.adjoint() - CMatrix::Identity(m.rows(), m.cols())).norm());
        for (std::size_t y = 0; y < q.g.order; y += 7) worst = std::max(worst, (m * mats[y] - mats[q.g.mul(x, y)]).norm());
      }
      CHECK(worst < 1e-10);
    }
  }
}

TEST_CASE("finite group from a non-group table is rejected") {
  // Z/3 with a broken row
  std::vector<std::size_t> t{0, 1, 2, 1, 2, 0, 2, 2, 1};
  CHECK_THROWS(FiniteGroup::from_table(3, t));
  const auto ok = FiniteGroup::from_table(3, {0, 1, 2, 1, 2, 0, 2, 0, 1});
  CHECK(ok.is_abelian());
  CHECK(ok.classes.size() == 3);
}

TEST_CASE("pullback and restriction are class functions on Gamma") {
  const auto& q = quotient(gi(1, 1));
  const auto& chi2 = *std::find_if(q.t.irreducibles.begin(), q.t.irreducibles.end(),
                                   [](const Character& c) { return c.degree == 2; });
  const auto rep = pullback_irrep(q.sub, q.g, chi2, irrep_matrices(q.g, chi2), "theta2");
  CHECK(rep.dim == 2);
  CHECK(rep.has_matrices());
  const auto pool = enumerate(1);
  const auto res = restrict_rep(rep);
  CHECK(res.domain == RepDomain::Gamma1);
  for (std::size_t k = 0; k < pool.size(); k += 3) {
    const GMat2& g = pool[k];
    CHECK(std::abs(rep.character(g) - rep.matrix(g).trace()) < 1e-10);
    CHECK(std::abs(res.character(g) - rep.character(g)) < 1e-14);
    // -g is the same element of PSL
    CHECK(std::abs(rep.character(g) - rep.character(GMat2{-g.a, -g.b, -g.c, -g.d})) < 1e-14);
  }
  // restriction to Gamma(1+i) is dim * trivial
  for (const auto& g : pool) {
    if (q.sub.contains(g)) CHECK(std::abs(res.character(g) - 2.0) < 1e-10);
  }
}

TEST_CASE("direct sum adds characters") {
  const auto& q = quotient(gi(1, 1));
  std::vector<UnitaryRep> parts;
  for (const auto& c : q.t.irreducibles) parts.push_back(pullback_irrep(q.sub, q.g, c, irrep_matrices(q.g, c), "x"));
  const auto sum = rep_direct_sum(parts);
  CHECK(sum.dim == 4);
  for (const auto& g : enumerate(1)) {
    cplx expect = 0;
    for (const auto& p : parts) expect += p.character(g);
    CHECK(std::abs(sum.character(g) - expect) < 1e-12);
    CHECK(std::abs(sum.matrix(g).trace() - expect) < 1e-10);
  }
}

TEST_CASE("induced representation is a unitary homomorphism") {
  const auto& q = quotient(gi(1, 1));
  const auto& chi2 = *std::find_if(q.t.irreducibles.begin(), q.t.irreducibles.end(),
                                   [](const Character& c) { return c.degree == 2; });
  const auto base = restrict_rep(pullback_irrep(q.sub, q.g, chi2, irrep_matrices(q.g, chi2), "theta2"));
  for (const auto& chi : {trivial_rep(1, RepDomain::Gamma1), base}) {
    const auto u = induce(chi, q.sub);
    CHECK(u.dim() == chi.dim * 6);
    const auto pool = enumerate(2);
    const CounterRng rng(99);
    double worst = 0;
    for (std::uint64_t k = 0; k < 1000; ++k) {
      const GMat2& x = pool[rng.bits(k, 0) % pool.size()];
      const GMat2& y = pool[rng.bits(k, 1) % pool.size()];
      const CMatrix ux = u.evaluate(x), uy = u.evaluate(y);
      worst = std::max(worst, (ux * uy - u.evaluate(x * y)).norm());
      worst = std::max(worst, (ux * ux.adjoint() - CMatrix::Identity(ux.rows(), ux.cols())).norm());
      worst = std::max(worst, std::abs(ux.trace() - induced_trace(chi, q.sub, x)));
      // a block permutation: one nonzero block per block row and column
      const auto blocks = u.support(x);
      REQUIRE(blocks.size() == 6);
      std::vector<int> rows(6), cols(6);
      for (const auto& [i, j] : blocks) {
        ++rows[i];
        ++cols[j];
      }
      REQUIRE(std::all_of(rows.begin(), rows.end(), [](int v) { return v == 1; }));
      REQUIRE(std::all_of(cols.begin(), cols.end(), [](int v) { return v == 1; }));
    }
    CHECK(worst < 1e-10);
  }
}

TEST_CASE("induced trivial character is n on Gamma_1 and 0 elsewhere") {
  for (const auto pi : {gi(1, 1), gi(2, 1)}) {
    const auto& q = quotient(pi);
    const auto one = trivial_rep(1, RepDomain::Gamma1);
    const double n = static_cast<double>(q.sub.index());
    std::size_t inside = 0;
    for (const auto& g : enumerate(3)) {
      const bool in = q.sub.contains(g);
      inside += in;
      REQUIRE(std::abs(induced_trace(one, q.sub, g) - (in ? n : 0.0)) < 1e-12);
    }
    CHECK(inside > 1);
  }
}

TEST_CASE("induced trivial character is the sum of degree-weighted irreducibles") {
  const auto& q = quotient(gi(1, 1));
  const auto one = trivial_rep(1, RepDomain::Gamma1);
  std::vector<UnitaryRep> irr;
  for (const auto& c : q.t.irreducibles) irr.push_back(pullback_irrep(q.sub, q.g, c, std::nullopt, "x"));
  for (const auto& g : enumerate(2)) {
    cplx s = 0;
    for (std::size_t k = 0; k < irr.size(); ++k) s += static_cast<double>(q.t.irreducibles[k].degree) * irr[k].character(g);
    REQUIRE(std::abs(s - induced_trace(one, q.sub, g)) < 1e-12);
  }
}

TEST_CASE("character table csv") {
  const auto& q = quotient(gi(1, 1));
  const auto csv = character_table_csv(q.g, q.t);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 4);
  CHECK(csv.rfind("degree,", 0) == 0);
}
