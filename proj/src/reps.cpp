#include "kzeta/reps.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <iomanip>
#include <memory>
#include <numeric>
#include <sstream>

#include "kzeta/enumerate.hpp"
#include "kzeta/rng.hpp"

namespace kz {

namespace {

constexpr std::size_t kExhaustiveAssociativity = 1000;
constexpr std::size_t kMaxRegularRep = 2000;
constexpr double kSeparationTol = 1e-8;
constexpr int kMaxRetries = 16;

}  // namespace

bool FiniteGroup::is_abelian() const {
  for (std::size_t x = 0; x < order; ++x) {
    for (std::size_t y = x + 1; y < order; ++y) {
      if (mul(x, y) != mul(y, x)) return false;
    }
  }
  return true;
}

bool FiniteGroup::verify_axioms() const {
  const std::size_t n = order;
  if (table.size() != n * n) return false;
  for (std::size_t x = 0; x < n; ++x) {
    if (mul(0, x) != x || mul(x, 0) != x) return false;
    if (mul(x, inverse[x]) != 0 || mul(inverse[x], x) != 0) return false;
    std::vector<bool> row(n, false);
    for (std::size_t y = 0; y < n; ++y) {
      const std::size_t v = mul(x, y);
      if (v >= n || row[v]) return false;
      row[v] = true;
    }
  }
  if (n <= kExhaustiveAssociativity) {
    for (std::size_t x = 0; x < n; ++x)
      for (std::size_t y = 0; y < n; ++y)
        for (std::size_t z = 0; z < n; ++z)
          if (mul(mul(x, y), z) != mul(x, mul(y, z))) return false;
  } else {
    const CounterRng rng(0x5eed);
    for (std::uint64_t k = 0; k < 1000000; ++k) {
      const std::size_t x = rng.bits(k, 0) % n, y = rng.bits(k, 1) % n, z = rng.bits(k, 2) % n;
      if (mul(mul(x, y), z) != mul(x, mul(y, z))) return false;
    }
  }
  return true;
}

std::vector<std::size_t> FiniteGroup::generated_subgroup(std::span<const std::size_t> gens) const {
  std::vector<bool> in(order, false);
  std::vector<std::size_t> out{0};
  in[0] = true;
  for (std::size_t k = 0; k < out.size(); ++k) {
    for (const std::size_t g : gens) {
      const std::size_t v = mul(out[k], g);
      if (!in[v]) {
        in[v] = true;
        out.push_back(v);
      }
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

FiniteGroup FiniteGroup::from_table(std::size_t order, std::vector<std::size_t> table) {
  if (order == 0 || table.size() != order * order) throw std::invalid_argument("group table has wrong size");
  FiniteGroup g;
  g.order = order;
  g.table = std::move(table);
  g.inverse.assign(order, order);
  for (std::size_t x = 0; x < order; ++x) {
    for (std::size_t y = 0; y < order; ++y) {
      if (g.mul(x, y) == 0) {
        g.inverse[x] = y;
        break;
      }
    }
    if (g.inverse[x] == order) throw std::domain_error("group table: element without inverse");
  }
  if (!g.verify_axioms()) throw std::domain_error("group table fails the group axioms");

  g.class_of.assign(order, order);
  g.classes.clear();
  for (std::size_t x = 0; x < order; ++x) {
    if (g.class_of[x] != order) continue;
    std::vector<std::size_t> cls;
    for (std::size_t h = 0; h < order; ++h) {
      const std::size_t y = g.mul(g.mul(h, x), g.inverse[h]);
      if (g.class_of[y] == order) {
        g.class_of[y] = g.classes.size();
        cls.push_back(y);
      }
    }
    std::sort(cls.begin(), cls.end());
    g.classes.push_back(std::move(cls));
  }

  g.element_order.assign(order, 0);
  for (std::size_t x = 0; x < order; ++x) {
    std::size_t k = 1, p = x;
    while (p != 0) {
      p = g.mul(p, x);
      ++k;
    }
    g.element_order[x] = k;
  }
  return g;
}

FiniteGroup quotient_group(const SubgroupDescriptor& sub) {
  const auto& cos = sub.cosets();
  const std::size_t n = cos.size();
  std::vector<std::size_t> table(n * n);
  for (std::size_t x = 0; x < n; ++x)
    for (std::size_t y = 0; y < n; ++y) table[x * n + y] = sub.coset_label(cos[x] * cos[y]);

  if (n > 1) {
    // Products must not depend on the chosen representatives, and Gamma_1
    // must be stable under conjugation.
    std::vector<GMat2> kernel;
    for (const auto& g : enumerate(2)) {
      if (sub.contains(g) && !is_projective_identity(g)) kernel.push_back(g);
      if (kernel.size() >= 8) break;
    }
    for (const auto& h : kernel) {
      for (std::size_t x = 0; x < n; ++x) {
        if (!sub.contains(cos[x] * h * cos[x].inverse_unimodular()))
          throw NonNormalError("subgroup is not normal: conjugate of " + to_string(h) + " leaves it");
        for (std::size_t y = 0; y < n; ++y) {
          if (sub.coset_label(cos[x] * h * cos[y]) != table[x * n + y])
            throw NonNormalError("coset products are not well defined");
        }
      }
    }
  }
  return FiniteGroup::from_table(n, std::move(table));
}

namespace {

// a[j][k][l] = number of (x, y) in C_j x C_k with x y = z_l (fixed z_l in C_l)
std::vector<Eigen::MatrixXd> class_multiplication(const FiniteGroup& g) {
  const std::size_t r = g.classes.size();
  std::vector<Eigen::MatrixXd> b(r, Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(r)));
  for (std::size_t l = 0; l < r; ++l) {
    const std::size_t z = g.classes[l].front();
    for (std::size_t j = 0; j < r; ++j) {
      for (const std::size_t x : g.classes[j]) {
        const std::size_t y = g.mul(g.inverse[x], z);
        b[j](static_cast<Eigen::Index>(g.class_of[y]), static_cast<Eigen::Index>(l)) += 1.0;
      }
    }
  }
  return b;
}

bool chars_less(const Character& x, const Character& y) {
  if (x.degree != y.degree) return x.degree < y.degree;
  for (std::size_t k = 0; k < x.values.size(); ++k) {
    const double xr = std::round(x.values[k].real() * 1e6), yr = std::round(y.values[k].real() * 1e6);
    if (xr != yr) return xr > yr;
    const double xi = std::round(x.values[k].imag() * 1e6), yi = std::round(y.values[k].imag() * 1e6);
    if (xi != yi) return xi > yi;
  }
  return false;
}

cplx class_inner(const FiniteGroup& g, const Character& x, const Character& y) {
  cplx s = 0;
  for (std::size_t k = 0; k < g.classes.size(); ++k)
    s += static_cast<double>(g.classes[k].size()) * x.values[k] * std::conj(y.values[k]);
  return s / static_cast<double>(g.order);
}

}  // namespace

CharacterTable character_table(const FiniteGroup& g, std::uint64_t seed) {
  const std::size_t r = g.classes.size();
  const auto ri = static_cast<Eigen::Index>(r);
  const auto b = class_multiplication(g);
  const CounterRng rng(seed);
  std::string last_failure = "no attempt";

  for (int attempt = 0; attempt < kMaxRetries; ++attempt) {
    // B_j v = omega_j v with v_l = omega(C_l)
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(ri, ri);
    for (std::size_t j = 0; j < r; ++j) {
      const double c = rng.uniform(static_cast<std::uint64_t>(attempt), static_cast<std::uint32_t>(j)) - 0.5;
      m += c * b[j].cast<cplx>();
    }
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(m);
    if (es.info() != Eigen::Success) {
      last_failure = "eigen solver did not converge";
      continue;
    }
    const auto& ev = es.eigenvalues();
    double scale = 1.0;
    for (Eigen::Index k = 0; k < ri; ++k) scale = std::max(scale, std::abs(ev(k)));
    bool separated = true;
    for (Eigen::Index p = 0; p < ri && separated; ++p)
      for (Eigen::Index q = p + 1; q < ri; ++q)
        if (std::abs(ev(p) - ev(q)) < kSeparationTol * scale) {
          separated = false;
          break;
        }
    if (!separated) {
      last_failure = "eigenvalue collision";
      continue;
    }

    CharacterTable out;
    bool ok = true;
    for (Eigen::Index k = 0; k < ri && ok; ++k) {
      Eigen::VectorXcd v = es.eigenvectors().col(k);
      if (std::abs(v(0)) < 1e-12) {
        ok = false;
        break;
      }
      v /= v(0);
      // refine omega by applying each class matrix
      double denom = 0;
      std::vector<cplx> omega(r);
      for (std::size_t j = 0; j < r; ++j) {
        omega[j] = (b[j].cast<cplx>() * v)(0);
        denom += std::norm(omega[j]) / static_cast<double>(g.classes[j].size());
      }
      const double deg = std::sqrt(static_cast<double>(g.order) / denom);
      const double rounded = std::round(deg);
      if (std::abs(deg - rounded) > 1e-6 || rounded < 1) {
        ok = false;
        last_failure = "non-integral degree " + std::to_string(deg);
        break;
      }
      Character chi;
      chi.degree = static_cast<int>(rounded);
      chi.values.resize(r);
      for (std::size_t j = 0; j < r; ++j)
        chi.values[j] = rounded * omega[j] / static_cast<double>(g.classes[j].size());
      out.irreducibles.push_back(std::move(chi));
    }
    if (!ok) continue;

    std::sort(out.irreducibles.begin(), out.irreducibles.end(), chars_less);
    std::size_t sumsq = 0;
    for (const auto& c : out.irreducibles) sumsq += static_cast<std::size_t>(c.degree * c.degree);
    if (sumsq != g.order) {
      last_failure = "sum of squared degrees " + std::to_string(sumsq) + " != |G|";
      continue;
    }
    for (std::size_t p = 0; p < r; ++p)
      for (std::size_t q = 0; q < r; ++q) {
        const cplx ip = class_inner(g, out.irreducibles[p], out.irreducibles[q]);
        out.max_orthogonality_error = std::max(out.max_orthogonality_error, std::abs(ip - cplx(p == q ? 1.0 : 0.0)));
      }
    if (out.max_orthogonality_error > 1e-8) {
      last_failure = "orthogonality error " + std::to_string(out.max_orthogonality_error);
      continue;
    }
    return out;
  }
  throw EigenSeparationError("character table: " + last_failure +
                             " after repeated random class-sum combinations; try another seed");
}

std::vector<CMatrix> irrep_matrices(const FiniteGroup& g, const Character& chi, std::uint64_t seed) {
  const std::size_t n = g.order;
  const int d = chi.degree;
  auto value = [&](std::size_t x) { return chi.values[g.class_of[x]]; };
  std::vector<CMatrix> out(n);
  if (d == 1) {
    for (std::size_t x = 0; x < n; ++x) out[x] = CMatrix::Constant(1, 1, value(x));
    return out;
  }
  if (n > kMaxRegularRep) throw std::domain_error("irrep_matrices: group too large for the regular representation");
  const auto ni = static_cast<Eigen::Index>(n);

  // isotypic projector of the left regular representation
  CMatrix proj(ni, ni);
  for (std::size_t y = 0; y < n; ++y)
    for (std::size_t x = 0; x < n; ++x)
      proj(static_cast<Eigen::Index>(y), static_cast<Eigen::Index>(x)) =
          static_cast<double>(d) / static_cast<double>(n) * std::conj(value(g.mul(y, g.inverse[x])));
  Eigen::SelfAdjointEigenSolver<CMatrix> ps(proj);
  const Eigen::Index dd = static_cast<Eigen::Index>(d) * d;
  const CMatrix basis = ps.eigenvectors().rightCols(dd);

  const CounterRng rng(seed);
  for (int attempt = 0; attempt < kMaxRetries; ++attempt) {
    // random hermitian element of the right-regular algebra
    CMatrix h = CMatrix::Zero(ni, ni);
    for (std::size_t k = 0; k < n; ++k) {
      const double c = rng.uniform(static_cast<std::uint64_t>(attempt), static_cast<std::uint32_t>(k)) - 0.5;
      for (std::size_t x = 0; x < n; ++x) {
        const auto to = static_cast<Eigen::Index>(g.mul(x, g.inverse[k]));
        const auto from = static_cast<Eigen::Index>(x);
        h(to, from) += c;
        h(from, to) += c;
      }
    }
    const CMatrix hb = basis.adjoint() * h * basis;
    Eigen::SelfAdjointEigenSolver<CMatrix> hs(hb);
    const auto& ev = hs.eigenvalues();
    const double spread = ev(d - 1) - ev(0);
    const double gap = ev(d) - ev(d - 1);
    if (spread > 1e-8 || gap < 1e-6) continue;
    const CMatrix q = basis * hs.eigenvectors().leftCols(d);

    bool ok = true;
    for (std::size_t x = 0; x < n && ok; ++x) {
      // Q* L(x) Q with L(x) e_y = e_{x y}
      CMatrix lq(ni, d);
      for (std::size_t y = 0; y < n; ++y) lq.row(static_cast<Eigen::Index>(g.mul(x, y))) = q.row(static_cast<Eigen::Index>(y));
      out[x] = q.adjoint() * lq;
      if (std::abs(out[x].trace() - value(x)) > 1e-9) ok = false;
    }
    if (ok) return out;
  }
  throw EigenSeparationError("irrep_matrices: could not isolate an irreducible subspace; try another seed");
}

UnitaryRep trivial_rep(int dim, RepDomain domain) {
  UnitaryRep r;
  r.name = dim == 1 ? "trivial" : std::to_string(dim) + "x trivial";
  r.dim = dim;
  r.domain = domain;
  r.matrix = [dim](const GMat2&) { return CMatrix::Identity(dim, dim); };
  r.character = [dim](const GMat2&) { return cplx(dim); };
  return r;
}

UnitaryRep pullback_irrep(const SubgroupDescriptor& sub, const FiniteGroup& g, const Character& chi,
                          std::optional<std::vector<CMatrix>> matrices, std::string name) {
  UnitaryRep r;
  r.name = std::move(name);
  r.dim = chi.degree;
  r.domain = RepDomain::Gamma;
  auto s = std::make_shared<const SubgroupDescriptor>(sub);
  std::vector<cplx> by_label(g.order);
  for (std::size_t x = 0; x < g.order; ++x) by_label[x] = chi.values[g.class_of[x]];
  auto values = std::make_shared<const std::vector<cplx>>(std::move(by_label));
  r.character = [s, values](const GMat2& m) { return (*values)[s->coset_label(m)]; };
  if (matrices) {
    auto mats = std::make_shared<const std::vector<CMatrix>>(std::move(*matrices));
    r.matrix = [s, mats](const GMat2& m) { return (*mats)[s->coset_label(m)]; };
  }
  return r;
}

UnitaryRep restrict_rep(const UnitaryRep& rep) {
  UnitaryRep r = rep;
  r.domain = RepDomain::Gamma1;
  r.name = "res " + rep.name;
  return r;
}

UnitaryRep rep_direct_sum(std::span<const UnitaryRep> reps) {
  if (reps.empty()) throw std::invalid_argument("rep_direct_sum: empty list");
  if (reps.size() == 1) return reps.front();
  auto parts = std::make_shared<const std::vector<UnitaryRep>>(reps.begin(), reps.end());
  UnitaryRep r;
  r.domain = reps.front().domain;
  r.dim = 0;
  bool all_matrices = true;
  for (const auto& p : reps) {
    r.dim += p.dim;
    r.name += (r.name.empty() ? "" : " + ") + p.name;
    all_matrices = all_matrices && p.has_matrices();
  }
  r.character = [parts](const GMat2& m) {
    cplx s = 0;
    for (const auto& p : *parts) s += p.character(m);
    return s;
  };
  if (all_matrices) {
    const int dim = r.dim;
    r.matrix = [parts, dim](const GMat2& m) {
      CMatrix out = CMatrix::Zero(dim, dim);
      Eigen::Index off = 0;
      for (const auto& p : *parts) {
        out.block(off, off, p.dim, p.dim) = p.matrix(m);
        off += p.dim;
      }
      return out;
    };
  }
  return r;
}

std::vector<std::pair<std::size_t, std::size_t>> InducedRep::support(const GMat2& gamma) const {
  const auto& cos = sub.cosets();
  std::vector<std::pair<std::size_t, std::size_t>> out;
  for (std::size_t i = 0; i < cos.size(); ++i) {
    const GMat2 left = cos[i] * gamma;
    for (std::size_t j = 0; j < cos.size(); ++j) {
      if (sub.contains(left * cos[j].inverse_unimodular())) out.emplace_back(i, j);
    }
  }
  return out;
}

CMatrix InducedRep::evaluate(const GMat2& gamma) const {
  if (!base.has_matrices()) throw std::domain_error("induced matrices need a base representation with matrices");
  const auto& cos = sub.cosets();
  const int d = base.dim;
  CMatrix out = CMatrix::Zero(dim(), dim());
  for (const auto& [i, j] : support(gamma)) {
    const GMat2 inner = cos[i] * gamma * cos[j].inverse_unimodular();
    out.block(static_cast<Eigen::Index>(i) * d, static_cast<Eigen::Index>(j) * d, d, d) = base.matrix(inner);
  }
  return out;
}

UnitaryRep InducedRep::as_rep() const {
  auto self = std::make_shared<const InducedRep>(*this);
  UnitaryRep r;
  r.name = "Ind " + base.name;
  r.dim = dim();
  r.domain = RepDomain::Gamma;
  r.character = [self](const GMat2& m) { return induced_trace(self->base, self->sub, m); };
  if (base.has_matrices()) r.matrix = [self](const GMat2& m) { return self->evaluate(m); };
  return r;
}

InducedRep induce(const UnitaryRep& chi, const SubgroupDescriptor& sub) {
  UnitaryRep base = chi;
  base.domain = RepDomain::Gamma1;
  return InducedRep{std::move(base), sub};
}

cplx induced_trace(const UnitaryRep& chi, const SubgroupDescriptor& sub, const GMat2& gamma) {
  cplx s = 0;
  for (const auto& a : sub.cosets()) {
    const GMat2 c = a * gamma * a.inverse_unimodular();
    if (sub.contains(c)) s += chi.character(c);
  }
  return s;
}

std::string character_table_csv(const FiniteGroup& g, const CharacterTable& t) {
  std::ostringstream os;
  os << std::setprecision(12);
  os << "degree";
  for (std::size_t k = 0; k < g.classes.size(); ++k) os << ",class" << k << "(size " << g.classes[k].size() << ")";
  os << '\n';
  for (const auto& chi : t.irreducibles) {
    os << chi.degree;
    for (const auto& v : chi.values) {
      const double re = std::abs(v.real()) < 1e-12 ? 0.0 : v.real();
      const double im = std::abs(v.imag()) < 1e-12 ? 0.0 : v.imag();
      os << ',' << re << (im < 0 ? "" : "+") << im << 'i';
    }
    os << '\n';
  }
  return os.str();
}

}  // namespace kz
