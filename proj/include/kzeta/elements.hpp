#pragma once

#include <complex>
#include <functional>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "kzeta/gaussian.hpp"

namespace kz {

enum class Kind { Identity, Parabolic, Elliptic, Loxodromic };

struct ElementKind {
  Kind kind = Kind::Identity;
  int order = 1;  // elliptic order in PSL; 1 otherwise

  friend bool operator==(const ElementKind&, const ElementKind&) = default;
};

std::string to_string(Kind k);

struct KindError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

/// Exact classification from the trace; no floating point involved.
ElementKind classify(const GMat2& t);
inline bool is_loxodromic(const GMat2& t) { return classify(t).kind == Kind::Loxodromic; }

/// a(T) with |a| > 1, N(T) = |a|^2, and the trace in canonical sign.
struct LoxodromicData {
  std::complex<double> a;
  double norm = 0;
  GaussianInt trace;
};

LoxodromicData loxodromic_data(const GMat2& t);
/// Norm from an exact trace alone.
double norm_from_trace(GaussianInt trace);

enum class Completeness { Complete, SearchBounded };
std::string to_string(Completeness c);

/// C(T) = <T0> x E, with T = T0^power * E_T^j for some j.
struct CentralizerData {
  GMat2 primitive;                        // T0, oriented so power > 0
  int power = 1;
  int torsion_order = 1;                  // m(T)
  std::optional<GMat2> torsion_generator; // E_T when m(T) > 1
  std::complex<double> zeta{-1.0, 0.0};   // primitive 2m-th root, E_T ~ diag(zeta, 1/zeta)
  Completeness completeness = Completeness::SearchBounded;
  double primitive_norm = 0;              // N(T0)
};

using MembershipFn = std::function<bool(const GMat2&)>;

/// All centralizer elements X of a loxodromic T with N(X) <= N(T), found by
/// solving det(x I + w T') = 1 over the commutant lattice of T. Elements are
/// canonical and sorted. An optional predicate restricts to a subgroup.
std::vector<GMat2> centralizer_elements(const GMat2& t, const MembershipFn& member = nullptr);

/// Exact centralizer analysis (completeness = Complete).
CentralizerData centralizer_exact(const GMat2& t, const MembershipFn& member = nullptr);

/// Pool-bounded centralizer analysis: commuting elements are searched only in
/// the given pool and powers only up to k_max = ceil(log N(T) / log N_min).
/// The result is flagged SearchBounded.
CentralizerData centralizer_analyze(const GMat2& t, std::span<const GMat2> pool);

/// Eigenvalue of x on the expanding eigenvector of the loxodromic t.
std::complex<double> eigenvalue_on_axis(const GMat2& t, const GMat2& x);

}  // namespace kz
