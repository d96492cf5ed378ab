#pragma once

// Finite quotients Gamma / Gamma_1, their character tables, unitary
// representations of the Picard group and its subgroups, and induction.

#include <Eigen/Dense>
#include <complex>
#include <functional>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "kzeta/gaussian.hpp"
#include "kzeta/subgroup.hpp"

namespace kz {

using CMatrix = Eigen::MatrixXcd;
using cplx = std::complex<double>;

/// Finite group by multiplication table; element 0 is the identity.
struct FiniteGroup {
  std::size_t order = 1;
  std::vector<std::size_t> table{0};  // table[x * order + y] = x y
  std::vector<std::size_t> inverse{0};
  std::vector<std::vector<std::size_t>> classes{{0}};  // conjugacy classes, class 0 = {e}
  std::vector<std::size_t> class_of{0};
  std::vector<std::size_t> element_order{1};

  std::size_t mul(std::size_t x, std::size_t y) const { return table[x * order + y]; }
  bool is_abelian() const;
  /// Exhaustive check of the group axioms on the table.
  bool verify_axioms() const;
  /// Subgroup generated by the given elements (sorted element list).
  std::vector<std::size_t> generated_subgroup(std::span<const std::size_t> gens) const;

  /// Build from a table; fills inverse, classes, orders. Throws on failure of
  /// the group axioms.
  static FiniteGroup from_table(std::size_t order, std::vector<std::size_t> table);
};

struct NonNormalError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Gamma / Gamma_1 with labels = coset labels of the descriptor.
/// Normality is checked on products of coset representatives with a sample
/// of subgroup elements; a failure throws NonNormalError.
FiniteGroup quotient_group(const SubgroupDescriptor& sub);

struct Character {
  int degree = 1;
  std::vector<cplx> values;  // one per conjugacy class
};

struct CharacterTable {
  std::vector<Character> irreducibles;
  double max_orthogonality_error = 0;
};

struct EigenSeparationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Irreducible characters by diagonalizing a random combination of class-sum
/// matrices; retries with fresh combinations on eigenvalue collisions.
CharacterTable character_table(const FiniteGroup& g, std::uint64_t seed = 7);

/// Matrix realization of the irreducible with the given character, carved
/// out of the regular representation. Returns one unitary matrix per element.
std::vector<CMatrix> irrep_matrices(const FiniteGroup& g, const Character& chi, std::uint64_t seed = 11);

enum class RepDomain { Gamma, Gamma1, Quotient };

/// A finite-dimensional unitary representation evaluated on group elements.
/// Character-only representations leave `matrix` empty.
struct UnitaryRep {
  std::string name;
  int dim = 1;
  RepDomain domain = RepDomain::Gamma;
  std::function<CMatrix(const GMat2&)> matrix;
  std::function<cplx(const GMat2&)> character;

  bool has_matrices() const { return static_cast<bool>(matrix); }
};

UnitaryRep trivial_rep(int dim = 1, RepDomain domain = RepDomain::Gamma);

/// theta composed with the coset label map of `sub`.
UnitaryRep pullback_irrep(const SubgroupDescriptor& sub, const FiniteGroup& g, const Character& chi,
                          std::optional<std::vector<CMatrix>> matrices, std::string name);

/// Same evaluation maps, tagged as a representation of Gamma_1.
UnitaryRep restrict_rep(const UnitaryRep& rep);

UnitaryRep rep_direct_sum(std::span<const UnitaryRep> reps);

/// U^chi for chi a representation of sub.
struct InducedRep {
  UnitaryRep base;
  SubgroupDescriptor sub;

  int dim() const { return base.dim * static_cast<int>(sub.index()); }
  /// Block matrix with (i, j) block chi(alpha_i gamma alpha_j^{-1}), zero unless
  /// that product lies in sub.
  CMatrix evaluate(const GMat2& gamma) const;
  /// Block positions (i, j) that are nonzero for gamma.
  std::vector<std::pair<std::size_t, std::size_t>> support(const GMat2& gamma) const;
  UnitaryRep as_rep() const;
};

InducedRep induce(const UnitaryRep& chi, const SubgroupDescriptor& sub);

/// sum_i tr chi(alpha_i gamma alpha_i^{-1}) over the i with the product in sub,
/// without building blocks.
cplx induced_trace(const UnitaryRep& chi, const SubgroupDescriptor& sub, const GMat2& gamma);

/// CSV: rows = irreducibles, columns = classes, entries "re+imi".
std::string character_table_csv(const FiniteGroup& g, const CharacterTable& t);

}  // namespace kz
