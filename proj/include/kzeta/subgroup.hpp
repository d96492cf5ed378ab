#pragma once

#include <array>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "kzeta/gaussian.hpp"

namespace kz {

/// A finite-index normal subgroup of the Picard group PSL(2, Z[i]): either
/// the whole group or a principal congruence subgroup Gamma(pi).
///
/// Coset labels are the elements of SL(2, Z[i]/pi) / {+-1}; label 0 is the
/// subgroup itself and cosets()[label] is the preimage of smallest
/// (height, Frobenius norm, lexicographic) order.
class SubgroupDescriptor {
 public:
  enum class Kind { Full, PrincipalCongruence };

  static SubgroupDescriptor full();
  static SubgroupDescriptor principal_congruence(GaussianInt pi);

  Kind kind() const { return kind_; }
  GaussianInt modulus() const { return modulus_; }
  std::size_t index() const { return cosets_.size(); }
  const std::vector<GMat2>& cosets() const { return cosets_; }

  bool contains(const GMat2& g) const { return coset_label(g) == 0; }
  /// Label of the coset containing g.
  std::size_t coset_label(const GMat2& g) const;

  std::string describe() const;

  /// Number of elements of SL(2, Z[i]/pi) / {+-1}, by direct enumeration of
  /// the residue ring. Independent of the coset search.
  static std::size_t quotient_order_by_enumeration(GaussianInt pi);

 private:
  using Key = std::array<std::int64_t, 4>;
  Key key_of(const GMat2& g) const;

  Kind kind_ = Kind::Full;
  GaussianInt modulus_{1};
  std::shared_ptr<const ResidueRing> ring_;
  std::vector<GMat2> cosets_{GMat2::identity()};
  std::map<Key, std::size_t> label_of_key_;
};

/// Standard generators of the Picard group: translations by 1 and i, the
/// rotation diag(i, -i) and the inversion [[0,-1],[1,0]].
std::vector<GMat2> picard_generators();

}  // namespace kz
