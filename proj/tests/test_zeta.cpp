#include <algorithm>
#include <cmath>
#include <numbers>
#include <unordered_set>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "doctest.h"
#include "kzeta/enumerate.hpp"
#include "kzeta/rng.hpp"
#include "kzeta/zeta.hpp"

using namespace kz;

namespace {

constexpr double kPi = std::numbers::pi;

GaussianInt gi(std::int64_t re, std::int64_t im = 0) { return GaussianInt{re, im}; }

const ClassTable& table20() {
  static const ClassTable t = build_stable_table(20, 2, 8);
  return t;
}

struct S3 {
  SubgroupDescriptor sub = SubgroupDescriptor::principal_congruence(gi(1, 1));
  FiniteGroup g = quotient_group(sub);
  CharacterTable t = character_table(g);
  std::vector<UnitaryRep> irreps;
  S3() {
    for (std::size_t k = 0; k < t.irreducibles.size(); ++k) {
      irreps.push_back(pullback_irrep(sub, g, t.irreducibles[k], irrep_matrices(g, t.irreducibles[k]),
                                      "theta" + std::to_string(k)));
    }
  }
  const UnitaryRep& degree2() const {
    return *std::find_if(irreps.begin(), irreps.end(), [](const UnitaryRep& r) { return r.dim == 2; });
  }
};

const S3& s3() {
  static const S3 q;
  return q;
}

const std::vector<cplx> kPoints{cplx(2), cplx(3), cplx(2, 1)};

}  // namespace

TEST_CASE("W of an empty table vanishes") {
  ClassTable empty;
  empty.cutoff = 20;
  const auto one = trivial_rep();
  for (const auto s : kPoints) {
    CHECK(W(s, empty, one).value == cplx(0));
    CHECK(log_Z_euler(s, empty, one) == cplx(0));
  }
  CHECK_THROWS_AS(W(cplx(1), empty, one), std::domain_error);
  CHECK_THROWS_AS(W(cplx(0.5, 3), empty, one), std::domain_error);
}

TEST_CASE("W of a single class by hand") {
  const GMat2 t{gi(3), gi(1), gi(2), gi(1)};
  const std::vector<GMat2> pool{t};
  const auto table = build_class_table(pool, 20, 3);
  REQUIRE(table.classes.size() == 1);
  const auto& c = table.classes[0].centralizer;
  REQUIRE(c.power == 1);
  REQUIRE(c.torsion_order == 1);
  // trace 4: N = (2 + sqrt 3)^2, |t^2 - 4| = 12
  const double n = std::pow(2 + std::sqrt(3.0), 2);
  const auto w = W(cplx(2), table, trivial_rep());
  CHECK(std::abs(w.value - std::log(n) / 12.0 / (n * n)) < 1e-15);
  const auto w3 = W(cplx(2, 1), table, trivial_rep(3));
  CHECK(std::abs(w3.value - 3.0 * std::log(n) / 12.0 * std::exp(-cplx(2, 1) * std::log(n))) < 1e-15);
}

TEST_CASE("W is additive in the representation") {
  const auto& q = s3();
  const auto sum = rep_direct_sum(q.irreps);
  for (const auto s : kPoints) {
    cplx parts = 0;
    for (const auto& r : q.irreps) parts += W(s, table20(), r).value;
    CHECK(std::abs(W(s, table20(), sum).value - parts) < 1e-12);
  }
}

TEST_CASE("W of the induced trivial representation is the degree-weighted sum") {
  const auto& q = s3();
  const auto u1 = induce(trivial_rep(1, RepDomain::Gamma1), q.sub).as_rep();
  for (const auto s : kPoints) {
    cplx weighted = 0;
    for (std::size_t k = 0; k < q.irreps.size(); ++k) weighted += double(q.irreps[k].dim) * W(s, table20(), q.irreps[k]).value;
    CHECK(std::abs(W(s, table20(), u1).value - weighted) < 1e-12);
  }
}

TEST_CASE("split table W equals induced W") {
  const auto& q = s3();
  const auto split = split_classes(table20(), q.sub);
  const auto restricted = restrict_rep(q.degree2());
  const auto u1 = induce(trivial_rep(1, RepDomain::Gamma1), q.sub).as_rep();
  const auto u2 = induce(restricted, q.sub).as_rep();
  for (const auto s : kPoints) {
    CHECK(std::abs(W(s, split, trivial_rep(1, RepDomain::Gamma1)).value - W(s, table20(), u1).value) < 1e-9);
    CHECK(std::abs(W(s, split, restricted).value - W(s, table20(), u2).value) < 1e-9);
  }
}

TEST_CASE("Euler product against the integrated logarithmic derivative") {
  const auto& q = s3();
  std::vector<UnitaryRep> reps{trivial_rep()};
  reps.insert(reps.end(), q.irreps.begin(), q.irreps.end());
  for (const auto& chi : reps) {
    const auto w = w_series(table20(), chi, WMode::PrimitivePowers);
    CHECK(w.terms.size() > table20().classes.size());
    for (const auto s : kPoints) {
      const auto zw = Z_from_W(s, w);
      CHECK(std::abs(log_Z_euler(s, table20(), chi) - zw.log_value) < 1e-9);
    }
  }
}

TEST_CASE("Euler product at s = 10 to first order") {
  // log(1 - x) ~ -x: sum over k, l of a^-2k conj(a)^-2l N^-11 = N^-10 / |t^2 - 4|
  // for m = 1; only k = l = 0 is kept for torsion classes.
  const auto& t = table20();
  double first = 0;
  for (const auto& r : t.classes) {
    if (r.centralizer.power != 1) continue;
    const GaussianInt tr = r.rep.trace();
    const double spread = std::sqrt(static_cast<double>((tr * tr - gi(4)).norm()));
    const int m = r.centralizer.torsion_order;
    first -= m == 1 ? std::pow(r.norm, -10) / spread : std::pow(r.norm, -11) / m;
  }
  const cplx z10 = log_Z_euler(cplx(10), t, trivial_rep());
  CHECK(std::abs(z10.imag()) < 1e-15);
  CHECK(std::abs(z10.real() - first) < 0.02 * std::abs(first));
  // dominated by the two classes of trace i, N = golden ratio squared
  CHECK(first < -2e-5);
}

TEST_CASE("Z_from_W of a short series matches the closed form") {
  WSeries w;
  w.terms.push_back({0, 1, 0, std::log(5.0), cplx(0.3, 0.1)});
  w.terms.push_back({1, 1, 0, std::log(9.0), cplx(-0.2)});
  for (const auto s : kPoints) {
    cplx closed = 0;
    for (const auto& t : w.terms) closed -= t.coef * std::exp(-s * t.log_norm) / t.log_norm;
    CHECK(std::abs(Z_from_W(s, w).log_value - closed) < 1e-12);
  }
  CHECK_THROWS_AS(Z_from_W(cplx(1), w), std::domain_error);
}

TEST_CASE("Euler product needs matrices") {
  const auto& q = s3();
  const auto chars_only = pullback_irrep(q.sub, q.g, q.t.irreducibles.back(), std::nullopt, "chars");
  CHECK_THROWS_AS(log_Z_euler(cplx(3), table20(), chars_only), CapabilityError);
  CHECK_NOTHROW(W(cplx(3), table20(), chars_only));
}

TEST_CASE("tail estimate bounds the change from a larger cutoff") {
  const auto small = build_class_table(enumerate_loxodromic(4, 12), 12, 4);
  const auto one = trivial_rep();
  const auto ws = w_series(small, one);
  CHECK(ws.count_constant > 0);
  for (const double sigma : {2.0, 3.0}) {
    const cplx diff = W(cplx(sigma), table20(), one).value - W(cplx(sigma), small, one).value;
    CHECK(std::abs(diff) <= ws.tail_estimate(sigma));
  }
}

TEST_CASE("resolvent kernel") {
  CHECK(std::abs(kernel_ks(cplx(2), 1.25) - 1.0 / (12.0 * kPi)) < 1e-15);
  CHECK_THROWS_AS(kernel_ks(cplx(2), 1.0), SingularityError);
  CHECK_THROWS_AS(kernel_ks(cplx(2), 0.5), SingularityError);
  // decreasing in delta for real s
  CHECK(kernel_ks(cplx(2), 2.0).real() > kernel_ks(cplx(2), 3.0).real());
}

TEST_CASE("kernel sum over a small set") {
  const H3Point p{cplx(0.1, 0.2), 1.3};
  const std::vector<GMat2> theta{GMat2{gi(1), gi(1), gi(0), gi(1)}, GMat2::identity(), GMat2{gi(2), gi(1), gi(1), gi(1)}};
  const auto sum = kernel_sum(p, theta, [](const GMat2&) { return cplx(1); }, cplx(2));
  CHECK(sum.excluded == 1);
  CHECK(sum.terms == 2);
  const cplx expect = kernel_ks(cplx(2), delta(p, mobius_apply(theta[0], p))) +
                      kernel_ks(cplx(2), delta(p, mobius_apply(theta[2], p)));
  CHECK(std::abs(sum.value - expect) < 1e-15);
}

TEST_CASE("Selberg / Harish-Chandra transform of the resolvent kernel") {
  double worst = 0;
  for (const double s0 : {1.5, 2.0, 2.5, 3.0, 4.0}) {
    const PointPairFn k = [s0](double d) { return kernel_ks(cplx(s0), d); };
    for (const double t : {0.0, 0.5, 1.0, 2.0, 4.0}) {
      const auto h = shc_transform(k, cplx(1 + t * t));
      worst = std::max(worst, std::abs(h.value - 1.0 / (s0 * s0 + t * t)));
    }
  }
  CHECK(worst < 1e-8);
  // linearity, and lambda < 1 (real s) against 1 / (s0^2 - s^2)
  const PointPairFn k2 = [](double d) { return kernel_ks(cplx(2), d); };
  const PointPairFn k6 = [](double d) { return 3.0 * kernel_ks(cplx(2), d); };
  CHECK(std::abs(shc_transform(k6, cplx(2)).value - 3.0 * shc_transform(k2, cplx(2)).value) < 1e-10);
  CHECK(std::abs(shc_transform(k2, cplx(0.75)).value - 1.0 / (4.0 - 0.25)) < 1e-8);
}

TEST_CASE("Gaussian pair") {
  for (const double r : {0.5, 1.0, 2.0}) {
    const auto pair = gaussian_pair(r);
    CHECK(pair.g(0) == doctest::Approx(std::exp(-r) / std::sqrt(4 * kPi * r)).epsilon(1e-15));
    double err = 0;
    const double total = boost::math::quadrature::gauss_kronrod<double, 61>::integrate(
        pair.g, -std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity(), 15, 1e-14, &err);
    CHECK(std::abs(total - pair.h(cplx(1)).real()) < 1e-10);
    for (const double x : {0.0, 1.0, 2.0}) CHECK(std::abs(fourier_partner(pair, x).value - pair.g(x)) < 1e-8);
    // the point-pair function transforms back to h
    const PointPairFn k = [&](double d) { return cplx(pair.k(d)); };
    for (const double t : {0.0, 1.0, 2.5}) {
      CHECK(std::abs(shc_transform(k, cplx(1 + t * t)).value - pair.h(cplx(1 + t * t))) < 1e-8);
    }
    CHECK_FALSE(pair.convention.empty());
  }
  CHECK_THROWS_AS(gaussian_pair(0), std::domain_error);
}

TEST_CASE("unfolding integrands agree pointwise") {
  const auto& q = s3();
  const auto theta = enumerate_loxodromic_near(20, 6);
  SamplePlan plan;
  plan.seed = 17;
  plan.count = 40;
  for (const auto& chi : {trivial_rep(1, RepDomain::Gamma1), restrict_rep(q.degree2())}) {
    double worst = 0, scale = 0;
    for (std::uint64_t k = 0; k < plan.count; ++k) {
      const auto p = sample_point(plan, k).point;
      const auto [lhs, rhs] = unfolding_integrands(p, theta, chi, q.sub, cplx(2), 6);
      worst = std::max(worst, std::abs(lhs - rhs));
      scale = std::max(scale, std::abs(lhs));
    }
    CHECK(scale > 0);
    CHECK(worst <= 1e-12 * scale);
  }
}

TEST_CASE("unfolding degenerate cases") {
  const auto& q = s3();
  SamplePlan a, b;
  a.seed = 1;
  b.seed = 2;
  a.count = b.count = 2000;
  const std::vector<GMat2> none;
  const auto empty = verify_unfolding(none, 20, trivial_rep(1, RepDomain::Gamma1), q.sub, a, b, cplx(2), 6);
  CHECK(empty.lhs == cplx(0));
  CHECK(empty.rhs == cplx(0));

  // Gamma_1 = Gamma with one plan: the same integrand and the same points
  const auto theta = enumerate_loxodromic_near(20, 6);
  const auto same = verify_unfolding(theta, 20, trivial_rep(), SubgroupDescriptor::full(), a, a, cplx(2), 6);
  CHECK(same.lhs == same.rhs);
  CHECK(same.lhs.real() > 0);

  const auto small = verify_unfolding(theta, 20, trivial_rep(1, RepDomain::Gamma1), q.sub, a, b, cplx(2), 6);
  CHECK(small.lhs_stderr > 0);
  CHECK(small.z < 5);
  CHECK(small.theta1 > 0);
}

TEST_CASE("near-identity enumeration is complete on sampled points") {
  const double dmax = 5;
  const auto near = enumerate_loxodromic_near(20, dmax);
  std::unordered_set<GMat2, GMat2Hash> set(near.begin(), near.end());
  std::int64_t h = 0;
  for (const auto& g : near) h = std::max(h, g.height());
  const auto pool = enumerate_loxodromic(h + 2, 20);
  SamplePlan plan;
  plan.seed = 23;
  plan.count = 60;
  std::size_t hits = 0;
  for (std::uint64_t k = 0; k < plan.count; ++k) {
    const auto p = sample_point(plan, k).point;
    for (const auto& g : pool) {
      if (delta(p, mobius_apply(g, p)) > dmax) continue;
      ++hits;
      REQUIRE(set.count(g) == 1);
    }
  }
  CHECK(hits > 0);
  for (const auto& g : near) CHECK(may_displace_within(g, dmax));
}
