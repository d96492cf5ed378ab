#include "kzeta/zeta.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <limits>
#include <numbers>
#include <unordered_set>

#include "kzeta/enumerate.hpp"

namespace kz {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kTermFloor = 1e-20;

void require_half_plane(cplx s, const char* what) {
  if (!(s.real() > 1.0)) throw std::domain_error(std::string(what) + ": requires Re s > 1");
}

// |a - 1/a|^2 = |t^2 - 4|, exact in the trace
double spread2(const GMat2& m) {
  const GaussianInt t = m.trace();
  return std::sqrt(static_cast<double>((t * t - GaussianInt{4}).norm()));
}

// Pairwise summation over a fixed order; the result does not depend on how
// the caller would split the range.
template <class T>
T pairwise_sum(const std::vector<T>& v, std::size_t lo, std::size_t hi) {
  if (hi - lo <= 8) {
    T s{};
    for (std::size_t i = lo; i < hi; ++i) s += v[i];
    return s;
  }
  const std::size_t mid = lo + (hi - lo) / 2;
  return pairwise_sum(v, lo, mid) + pairwise_sum(v, mid, hi);
}

double fit_count_constant(std::vector<double> norms, double cutoff) {
  if (norms.empty()) return 0;
  std::sort(norms.begin(), norms.end());
  double c = 0;
  for (std::size_t k = 0; k < norms.size(); ++k) {
    const double x = norms[k];
    if (x < 0.5 * cutoff || x <= 1.0) continue;
    c = std::max(c, static_cast<double>(k + 1) * std::log(x) / (x * x));
  }
  if (c == 0) {
    const double x = norms.back();
    c = static_cast<double>(norms.size()) * std::log(std::max(x, 2.0)) / (x * x);
  }
  return c;
}

}  // namespace

std::string to_string(WMode m) { return m == WMode::Truncated ? "truncated" : "primitive-powers"; }

cplx WSeries::operator()(cplx s) const {
  std::vector<cplx> parts(terms.size());
  for (std::size_t k = 0; k < terms.size(); ++k) parts[k] = terms[k].coef * std::exp(-s * terms[k].log_norm);
  return parts.empty() ? cplx{} : pairwise_sum(parts, 0, parts.size());
}

double WSeries::tail_estimate(double sigma) const {
  if (!(sigma > 1.0)) return std::numeric_limits<double>::infinity();
  return static_cast<double>(dim) * 2.0 * count_constant * std::pow(cutoff, 1.0 - sigma) / (sigma - 1.0);
}

WSeries w_series(const ClassTable& table, const UnitaryRep& chi, WMode mode, double sigma_min) {
  if (!chi.character) throw std::invalid_argument("w_series: representation without a character");
  WSeries w;
  w.mode = mode;
  w.cutoff = table.cutoff;
  w.dim = chi.dim;
  w.sigma_min = sigma_min;
  std::vector<double> counted;
  for (std::size_t r = 0; r < table.classes.size(); ++r) {
    const ClassRecord& rec = table.classes[r];
    const auto& c = rec.centralizer;
    const double log_n0 = std::log(c.primitive_norm);
    const double m = c.torsion_order;
    const bool flagged = rec.has_flag("unresolved-conjugacy");
    if (mode == WMode::Truncated) {
      WTerm t;
      t.record = r;
      t.power = c.power;
      t.log_norm = std::log(rec.norm);
      t.coef = chi.character(rec.rep) * log_n0 / (m * spread2(rec.rep));
      w.terms.push_back(t);
      w.flagged += flagged;
      counted.push_back(rec.norm);
      continue;
    }
    if (c.power != 1) continue;
    counted.push_back(rec.norm);
    // T0 = rep; the m torsion variants of each primitive class are separate
    // records, hence the extra 1/m
    const GMat2 e = c.torsion_generator.value_or(GMat2::identity());
    GMat2 p = GMat2::identity();
    try {
      for (int n = 1;; ++n) {
        p = p * rec.rep;
        GMat2 x = p;
        double largest = 0;
        for (int j = 0; j < c.torsion_order; ++j) {
          if (j > 0) x = x * e;
          WTerm t;
          t.record = r;
          t.power = n;
          t.twist = j;
          t.log_norm = n * log_n0;
          t.coef = chi.character(x) * log_n0 / (m * m * spread2(x));
          largest = std::max(largest, std::abs(t.coef));
          w.terms.push_back(t);
          w.flagged += flagged;
        }
        const double bound = std::max(largest, static_cast<double>(chi.dim) * log_n0) * std::exp(-n * log_n0 * sigma_min);
        if (bound < kTermFloor) break;
      }
    } catch (const OverflowError&) {
      ++w.overflow_stops;
    }
  }
  w.count_constant = fit_count_constant(counted, table.cutoff);
  return w;
}

WEvaluation W(cplx s, const ClassTable& table, const UnitaryRep& chi, WMode mode, bool with_terms) {
  require_half_plane(s, "W");
  const WSeries w = w_series(table, chi, mode, std::min(1.5, s.real()));
  WEvaluation out;
  out.s = s;
  out.value = w(s);
  out.cutoff = table.cutoff;
  out.tail_estimate = w.tail_estimate(s.real());
  out.mode = mode;
  out.flagged = w.flagged;
  if (with_terms) {
    out.terms = w.terms;
    for (auto& t : out.terms) t.coef *= std::exp(-s * t.log_norm);
  }
  return out;
}

cplx log_Z_euler(cplx s, const ClassTable& table, const UnitaryRep& chi) {
  require_half_plane(s, "Z_euler");
  if (!chi.has_matrices()) {
    throw CapabilityError("Z_euler needs matrices of the representation (" + chi.name + " is character-only)");
  }
  std::vector<cplx> parts;
  for (const auto& rec : table.classes) {
    const auto& c = rec.centralizer;
    if (c.power != 1) continue;
    const GMat2& t0 = rec.rep;
    const cplx a = loxodromic_data(t0).a;
    const double n0 = rec.norm;
    const int m = c.torsion_order;
    cplx zeta2 = 1.0;
    CMatrix x = chi.matrix(t0);
    CMatrix y = CMatrix::Identity(chi.dim, chi.dim);
    if (c.torsion_generator) {
      const cplx z = eigenvalue_on_axis(t0, *c.torsion_generator);
      zeta2 = z * z;
      y = chi.matrix(*c.torsion_generator);
    }
    // joint eigenvectors of the commuting unitaries chi(T0), chi(E)
    const CMatrix comb = x + cplx(0.7548776662466927, 0.5698402909980532) * y;
    Eigen::ComplexEigenSolver<CMatrix> es(comb);
    const double log_n0 = std::log(n0);
    const int lk_max = static_cast<int>(std::ceil(-std::log(kTermFloor) / log_n0));
    cplx rec_sum = 0;
    for (Eigen::Index j = 0; j < chi.dim; ++j) {
      const Eigen::VectorXcd v = es.eigenvectors().col(j);
      const double vv = v.squaredNorm();
      const cplx tj = v.dot(x * v) / vv;   // dot conjugates its first argument
      const cplx tpj = v.dot(y * v) / vv;
      for (int l = 0; l <= lk_max; ++l) {
        for (int k = 0; l + k <= lk_max; ++k) {
          const cplx cval = tpj * std::pow(zeta2, l - k);
          if (std::abs(cval - 1.0) > 1e-8) continue;
          const cplx factor = tj * std::pow(a, -2 * k) * std::conj(std::pow(a, -2 * l)) * std::exp(-(s + 1.0) * log_n0);
          rec_sum += std::log(1.0 - factor);
        }
      }
    }
    parts.push_back(rec_sum / static_cast<double>(m));
  }
  return parts.empty() ? cplx{} : pairwise_sum(parts, 0, parts.size());
}

cplx Z_euler(cplx s, const ClassTable& table, const UnitaryRep& chi) { return std::exp(log_Z_euler(s, table, chi)); }

ZFromW Z_from_W(cplx s, const WSeries& w, double sigma0) {
  require_half_plane(s, "Z_from_W");
  if (!(sigma0 > 1.0)) throw std::domain_error("Z_from_W: base point must satisfy Re > 1");
  using boost::math::quadrature::gauss_kronrod;
  ZFromW out;
  out.sigma0 = sigma0;
  cplx base = 0;
  for (const auto& t : w.terms) base -= t.coef * std::exp(-sigma0 * t.log_norm) / t.log_norm;
  out.base_correction = base;

  const cplx delta = s - sigma0;
  auto integrand = [&](double tau) { return w(sigma0 + tau * delta) * delta; };
  double err_re = 0, err_im = 0;
  const double re = gauss_kronrod<double, 61>::integrate([&](double t) { return integrand(t).real(); }, 0.0, 1.0, 20,
                                                         1e-14, &err_re);
  const double im = gauss_kronrod<double, 61>::integrate([&](double t) { return integrand(t).imag(); }, 0.0, 1.0, 20,
                                                         1e-14, &err_im);
  out.log_value = base + cplx(re, im);
  out.value = std::exp(out.log_value);
  out.quadrature_error = std::hypot(err_re * std::max(1.0, std::abs(re)), err_im * std::max(1.0, std::abs(im)));
  return out;
}

cplx kernel_ks(cplx s, double delta) {
  if (!(delta > 1.0)) throw SingularityError("kernel_ks: delta must exceed 1");
  const double root = std::sqrt((delta - 1.0) * (delta + 1.0));
  return std::exp(-s * std::log(delta + root)) / (4.0 * kPi * root);
}

KernelSum kernel_sum(const H3Point& p, std::span<const GMat2> theta, const std::function<cplx(const GMat2&)>& weight,
                     cplx s) {
  KernelSum out;
  std::vector<cplx> parts;
  parts.reserve(theta.size());
  for (const auto& g : theta) {
    const double d = delta(p, mobius_apply(g, p));
    if (d - 1.0 <= 1e-14) {
      ++out.excluded;
      continue;
    }
    parts.push_back(weight(g) * kernel_ks(s, d));
    ++out.terms;
  }
  if (!parts.empty()) out.value = pairwise_sum(parts, 0, parts.size());
  return out;
}

Transform shc_transform(const PointPairFn& k, cplx lambda) {
  using boost::math::quadrature::gauss_kronrod;
  const cplx s = std::sqrt(1.0 - lambda);
  const bool small = std::abs(s) < 1e-10;
  auto f = [&](double u) -> cplx {
    if (u <= 0.0 || u > 700.0) return 0.0;
    const cplx radial = small ? cplx(u) : std::sinh(s * u) / s;
    return 4.0 * kPi * k(std::cosh(u)) * radial * std::sinh(u);
  };
  const double inf = std::numeric_limits<double>::infinity();
  double err_re = 0, err_im = 0;
  const double re = gauss_kronrod<double, 61>::integrate([&](double u) { return f(u).real(); }, 0.0, inf, 25, 1e-13,
                                                         &err_re);
  const double im = gauss_kronrod<double, 61>::integrate([&](double u) { return f(u).imag(); }, 0.0, inf, 25, 1e-13,
                                                         &err_im);
  if (!std::isfinite(re) || !std::isfinite(im)) {
    throw QuadratureError("shc_transform: integral did not converge at lambda = " + std::to_string(lambda.real()) +
                          (lambda.imag() < 0 ? "" : "+") + std::to_string(lambda.imag()) + "i");
  }
  return {cplx(re, im), std::hypot(err_re * std::max(1.0, std::abs(re)), err_im * std::max(1.0, std::abs(im)))};
}

SHCPair gaussian_pair(double r) {
  if (!(r > 0)) throw std::domain_error("gaussian_pair: r must be positive");
  SHCPair p;
  p.r = r;
  p.h = [r](cplx lambda) { return std::exp(-r * lambda); };
  p.g = [r](double x) { return std::exp(-r) / std::sqrt(4.0 * kPi * r) * std::exp(-x * x / (4.0 * r)); };
  // k(cosh u) = -g'(u) / (2 pi sinh u) = u g(u) / (4 pi r sinh u)
  p.k = [g = p.g, r](double delta) {
    const double u = std::acosh(std::max(delta, 1.0));
    const double ratio = u < 1e-8 ? 1.0 : u / std::sinh(u);
    return ratio * g(u) / (4.0 * kPi * r);
  };
  p.convention =
      "h is a function of lambda = 1 + t^2 with h(lambda) = exp(-r lambda); its Fourier partner is "
      "g(x) = exp(-r) / sqrt(4 pi r) exp(-x^2 / (4 r)). Reading the exponent as -r lambda^2 gives a different partner.";
  return p;
}

Transform fourier_partner(const SHCPair& pair, double x) {
  using boost::math::quadrature::gauss_kronrod;
  const double inf = std::numeric_limits<double>::infinity();
  double err = 0;
  // h(1 + t^2) is even in t
  const double v = gauss_kronrod<double, 61>::integrate(
      [&](double t) { return pair.h(1.0 + t * t).real() * std::cos(t * x); }, 0.0, inf, 25, 1e-14, &err);
  return {cplx(v / kPi), err * std::abs(v) / kPi};
}

// ---- Monte Carlo unfolding ----

namespace {

struct FastElement {
  cplx a, b, c, d;
  cplx w;
  double c_abs;
};

FastElement fast(const GMat2& g, cplx w) {
  const cplx c = g.c.to_complex();
  return {g.a.to_complex(), g.b.to_complex(), c, g.d.to_complex(), w, std::abs(c)};
}

// Kernel k_s(delta) [delta <= delta_max] summed over a weighted element list
// sorted by |c|.
struct Integrand {
  std::vector<FastElement> elems;
  cplx s;
  double delta_max = 8;
  std::size_t excluded = 0;

  void sort_by_c() {
    std::sort(elems.begin(), elems.end(), [](const FastElement& x, const FastElement& y) { return x.c_abs < y.c_abs; });
  }

  cplx operator()(const H3Point& p) {
    const double r2 = p.r * p.r;
    const double two_d = 2.0 * delta_max;
    const cplx z = p.z;
    const bool real_s = s.imag() == 0.0;
    cplx acc = 0;
    for (const auto& e : elems) {
      if (e.c_abs * e.c_abs * r2 > two_d) break;  // |c|^2 r^2 <= 2 delta
      const cplx czd = e.c * z + e.d;
      double twice = std::norm(czd) + e.c_abs * e.c_abs * r2;
      if (twice > two_d) continue;
      twice += std::norm(e.a - e.c * z);
      if (twice > two_d) continue;
      twice += std::norm(e.a * z + e.b - z * czd) / r2;
      const double d = 0.5 * twice;
      if (d > delta_max) continue;
      if (d - 1.0 <= 1e-14) {
        ++excluded;
        continue;
      }
      const double root = std::sqrt((d - 1.0) * (d + 1.0));
      const double q = d + root;
      const cplx ks = real_s ? cplx(std::pow(q, -s.real())) : std::exp(-s * std::log(q));
      acc += e.w * ks / (4.0 * kPi * root);
    }
    return acc;
  }
};

std::pair<Integrand, Integrand> build_integrands(std::span<const GMat2> theta, const UnitaryRep& chi,
                                                 const SubgroupDescriptor& sub, cplx s, double delta_max,
                                                 std::size_t* theta1) {
  if (!(delta_max > 1.0)) throw std::domain_error("unfolding: delta_max must exceed 1");
  Integrand lhs{{}, s, delta_max}, rhs{{}, s, delta_max};
  for (const auto& g : theta) {
    const cplx w = induced_trace(chi, sub, g);
    if (std::abs(w) > 1e-13) lhs.elems.push_back(fast(g, w));
  }
  // Theta cap Gamma_1 restricted to elements that reach some tile alpha_i F:
  // beta with alpha_i^-1 beta alpha_i in theta for some i
  const auto& cosets = sub.cosets();
  std::unordered_set<GMat2, GMat2Hash> beta_set;
  for (const auto& g : theta) {
    if (!sub.contains(g)) continue;
    for (const auto& a : cosets) beta_set.insert(canonical(a * g * a.inverse_unimodular()));
  }
  std::vector<GMat2> betas(beta_set.begin(), beta_set.end());
  std::sort(betas.begin(), betas.end(), pool_less);
  if (theta1) *theta1 = betas.size();
  for (const auto& b : betas) {
    const cplx c = chi.character(b);
    // delta(alpha P, beta alpha P) = delta(P, alpha^-1 beta alpha P)
    for (const auto& a : cosets) {
      const GMat2 pulled = a.inverse_unimodular() * b * a;
      if (may_displace_within(pulled, delta_max)) rhs.elems.push_back(fast(pulled, c));
    }
  }
  lhs.sort_by_c();
  rhs.sort_by_c();
  return {std::move(lhs), std::move(rhs)};
}

struct Estimate {
  cplx mean;
  double stderr_ = 0;
};

Estimate integrate(Integrand& f, const SamplePlan& plan) {
  constexpr std::uint64_t kBlock = 4096;
  std::vector<cplx> sums;
  std::vector<double> sq;
  for (std::uint64_t start = 0; start < plan.count; start += kBlock) {
    const std::uint64_t stop = std::min(plan.count, start + kBlock);
    cplx s = 0;
    double q = 0;
    for (std::uint64_t k = start; k < stop; ++k) {
      const WeightedPoint wp = sample_point(plan, k);
      const cplx v = wp.weight * f(wp.point);
      s += v;
      q += std::norm(v);
    }
    sums.push_back(s);
    sq.push_back(q);
  }
  Estimate e;
  if (sums.empty()) return e;
  const double n = static_cast<double>(plan.count);
  e.mean = pairwise_sum(sums, 0, sums.size()) / n;
  const double var = std::max(0.0, pairwise_sum(sq, 0, sq.size()) / n - std::norm(e.mean));
  e.stderr_ = n > 1 ? std::sqrt(var / (n - 1)) : 0.0;
  return e;
}

}  // namespace

std::pair<cplx, cplx> unfolding_integrands(const H3Point& p, std::span<const GMat2> theta, const UnitaryRep& chi,
                                           const SubgroupDescriptor& sub, cplx s, double delta_max) {
  auto [lhs, rhs] = build_integrands(theta, chi, sub, s, delta_max, nullptr);
  return {lhs(p), rhs(p)};
}

UnfoldingReport verify_unfolding(std::span<const GMat2> theta, double cutoff, const UnitaryRep& chi,
                                 const SubgroupDescriptor& sub, const SamplePlan& lhs_plan,
                                 const SamplePlan& rhs_plan, cplx s, double delta_max) {
  UnfoldingReport rep;
  rep.cutoff = cutoff;
  rep.delta_max = delta_max;
  rep.samples = lhs_plan.count;
  rep.theta = theta.size();
  rep.s = s;
  auto [lhs, rhs] = build_integrands(theta, chi, sub, s, delta_max, &rep.theta1);
  rep.lhs_terms = lhs.elems.size();
  rep.rhs_terms = rhs.elems.size();
  if (theta.empty() || lhs_plan.count == 0) return rep;
  const Estimate l = integrate(lhs, lhs_plan);
  const Estimate r = integrate(rhs, rhs_plan);
  rep.lhs = l.mean;
  rep.rhs = r.mean;
  rep.lhs_stderr = l.stderr_;
  rep.rhs_stderr = r.stderr_;
  rep.excluded = lhs.excluded + rhs.excluded;
  const double diff = std::abs(l.mean - r.mean);
  const double se = std::hypot(l.stderr_, r.stderr_);
  rep.z = se > 0 ? diff / se : (diff == 0 ? 0.0 : std::numeric_limits<double>::infinity());
  const double scale = std::max(std::abs(l.mean), std::abs(r.mean));
  rep.relative_difference = scale > 0 ? diff / scale : 0.0;
  return rep;
}

}  // namespace kz
