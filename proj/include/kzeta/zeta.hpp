#pragma once

// Logarithmic derivative W(s) of the Selberg zeta function over a class
// table, the Euler product, Z from W by contour integration, the resolvent
// point-pair kernel, the Selberg / Harish-Chandra transform and the Monte
// Carlo unfolding check.

#include <complex>
#include <cstdint>
#include <functional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "kzeta/classes.hpp"
#include "kzeta/h3.hpp"
#include "kzeta/reps.hpp"

namespace kz {

struct CapabilityError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct SingularityError : std::domain_error {
  using std::domain_error::domain_error;
};

struct QuadratureError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum class WMode {
  Truncated,        // every table class {T}, N(T) <= cutoff
  PrimitivePowers,  // every T0^n E^j over the primitive classes, all n
};

std::string to_string(WMode m);

/// coef * N^{-s}, one term of the Dirichlet series of W.
struct WTerm {
  std::size_t record = 0;  // table index
  int power = 1;           // n for T0^n E^j (PrimitivePowers); record power otherwise
  int twist = 0;           // j
  double log_norm = 0;     // log N(T)
  cplx coef;
};

/// W as a finite Dirichlet series; evaluation at any s with Re s > 1.
struct WSeries {
  WMode mode = WMode::Truncated;
  double cutoff = 1;
  int dim = 1;
  std::vector<WTerm> terms;
  std::size_t flagged = 0;         // terms built from flagged class records
  std::size_t overflow_stops = 0;  // power loops stopped by integer overflow
  double count_constant = 0;       // c in #{N <= x} ~ c x^2 / log x (max over the fit range)
  double sigma_min = 1.5;          // PrimitivePowers: powers kept while |coef| N^{-n sigma_min} >= 1e-20

  cplx operator()(cplx s) const;
  /// sum dim * log x / (m |a - 1/a|^2) x^{-sigma} over the classes beyond the
  /// cutoff, integrated against the fitted counting function.
  double tail_estimate(double sigma) const;
};

WSeries w_series(const ClassTable& table, const UnitaryRep& chi, WMode mode = WMode::Truncated,
                 double sigma_min = 1.5);

struct WEvaluation {
  cplx s;
  cplx value;
  double cutoff = 1;
  double tail_estimate = 0;
  WMode mode = WMode::Truncated;
  std::size_t flagged = 0;
  std::vector<WTerm> terms;  // filled on request, coef multiplied by N^{-s}
};

/// W(s, Gamma, chi). Throws std::domain_error for Re s <= 1.
WEvaluation W(cplx s, const ClassTable& table, const UnitaryRep& chi, WMode mode = WMode::Truncated,
              bool with_terms = false);

/// log Z_euler(s) over the primitive records of the table; throws
/// CapabilityError when chi has no matrix realization.
cplx log_Z_euler(cplx s, const ClassTable& table, const UnitaryRep& chi);
cplx Z_euler(cplx s, const ClassTable& table, const UnitaryRep& chi);

struct ZFromW {
  cplx log_value;
  cplx value;
  double quadrature_error = 0;
  cplx base_correction;  // log Z(sigma0)
  double sigma0 = 40;
};

/// log Z(s) = log Z(sigma0) + integral of W along the segment sigma0 -> s.
/// log Z(sigma0) is the closed form of the same Dirichlet series.
ZFromW Z_from_W(cplx s, const WSeries& w, double sigma0 = 40.0);

/// (1/4pi) (delta + sqrt(delta^2 - 1))^{-s} / sqrt(delta^2 - 1).
cplx kernel_ks(cplx s, double delta);

struct KernelSum {
  cplx value;
  std::size_t terms = 0;
  std::size_t excluded = 0;  // delta == 1 collisions
};

/// sum over gamma in theta of weight(gamma) * k_s(delta(P, gamma P)).
KernelSum kernel_sum(const H3Point& p, std::span<const GMat2> theta, const std::function<cplx(const GMat2&)>& weight,
                     cplx s);

/// Point-pair function as a function of delta.
using PointPairFn = std::function<cplx(double)>;

struct Transform {
  cplx value;
  double error = 0;
};

/// h(lambda) = (4 pi / s) int_0^inf k(cosh u) sinh(s u) sinh(u) du with
/// s = sqrt(1 - lambda) (the substitution t = e^u of the radial integral).
Transform shc_transform(const PointPairFn& k, cplx lambda);

struct SHCPair {
  double r = 1;
  std::function<cplx(cplx)> h;        // h(lambda) = exp(-r lambda)
  std::function<double(double)> g;    // exp(-r) / sqrt(4 pi r) exp(-x^2 / (4 r))
  std::function<double(double)> k;    // point-pair function of delta
  bool admissible = true;
  std::string convention;
};

SHCPair gaussian_pair(double r);

/// (1 / 2pi) int h(1 + t^2) e^{-itx} dt by quadrature.
Transform fourier_partner(const SHCPair& pair, double x);

struct UnfoldingReport {
  double cutoff = 0;
  double delta_max = 0;
  std::uint64_t samples = 0;
  std::size_t theta = 0;    // |Theta|
  std::size_t theta1 = 0;   // Gamma_1 elements conjugate into Theta by some alpha_i
  std::size_t lhs_terms = 0, rhs_terms = 0;
  cplx s;
  cplx lhs, rhs;
  double lhs_stderr = 0, rhs_stderr = 0;
  double z = 0;
  double relative_difference = 0;
  std::size_t excluded = 0;
};

/// Both sides of the unfolding identity on F_A for the kernel
/// k_s(delta) [delta <= delta_max], a point-pair invariant of compact support.
/// Theta stands for the normal set {loxodromic, N <= cutoff}; the span must
/// contain every element of it that may_displace_within(., delta_max), e.g.
/// enumerate_loxodromic_near(cutoff, delta_max). The Gamma side integrates
/// sum_gamma tr U^chi(gamma) k(delta(P, gamma P)); the Gamma_1 side integrates
/// sum_i sum_beta tr chi(beta) k(delta(alpha_i P, beta alpha_i P)) with beta
/// over Gamma_1 elements of the normal set reaching the tiles. The sides use
/// their own sample plans.
UnfoldingReport verify_unfolding(std::span<const GMat2> theta, double cutoff, const UnitaryRep& chi,
                                 const SubgroupDescriptor& sub, const SamplePlan& lhs_plan,
                                 const SamplePlan& rhs_plan, cplx s, double delta_max = 8.0);

/// Pointwise integrands of both sides at P (Gamma side, Gamma_1 side).
std::pair<cplx, cplx> unfolding_integrands(const H3Point& p, std::span<const GMat2> theta, const UnitaryRep& chi,
                                           const SubgroupDescriptor& sub, cplx s, double delta_max = 8.0);

}  // namespace kz
