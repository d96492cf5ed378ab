#pragma once

// Cusps of the Picard group and its normal subgroups: representatives,
// parabolic stabilizers, lattices and singular spaces of representations.

#include <array>
#include <stdexcept>
#include <string>
#include <vector>

#include "kzeta/reps.hpp"
#include "kzeta/subgroup.hpp"

namespace kz {

struct CuspError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// One cusp class zeta = p / q of a group.
struct CuspData {
  GaussianInt p{1}, q{0};           // coprime; (1 : 0) is infinity
  GMat2 alpha;                      // group element of Gamma with alpha infinity = zeta
  GMat2 conjugator;                 // B with B zeta = infinity, det 1
  std::vector<GMat2> stabilizer;    // generators of Gamma_zeta
  std::vector<GMat2> parabolic;     // generators of Gamma'_zeta (translations after conjugation)
  std::array<GaussianInt, 2> lattice{GaussianInt{1}, GaussianInt{0, 1}};  // reduced basis of Lambda
  cplx tau{0, 1};                   // lattice[1] / lattice[0], Im tau > 0
  cplx epsilon{1};                  // root of unity of the torsion part
  int epsilon_order = 1;
  std::size_t parabolic_index = 1;  // [Gamma_zeta : Gamma'_zeta]
};

/// Cusp classes of `sub` (the whole group when sub is full). The Picard group
/// has one class, infinity; the classes of a normal subgroup are the left
/// cosets of the image of Gamma_infinity in Gamma / sub, represented by
/// alpha infinity with alpha the coset representative of smallest label.
/// Conditions on the conjugated generators are checked exactly; a violation
/// throws CuspError.
std::vector<CuspData> cusp_classes(const SubgroupDescriptor& sub);

/// Fixed space of chi on a set of group elements: kernel of the stacked
/// chi(g) - I, with rank tolerance 1e-8 relative to max(1, largest singular value).
struct SingularSpace {
  CMatrix basis;              // orthonormal columns
  int dim = 0;
  bool well_separated = true; // no singular value in (1e-10, 1e-6), rank stable under tolerance x10 and /10
};

SingularSpace fixed_space(const UnitaryRep& chi, const std::vector<GMat2>& gens);

struct CuspSingularity {
  int k = 0;        // dim V_alpha (stabilizer)
  int k_prime = 0;  // dim V'_alpha (parabolic part)
  bool contained = true;       // V_alpha inside V'_alpha
  bool well_separated = true;
};

struct SingularityReport {
  std::string group;
  int dim = 1;
  std::vector<CuspSingularity> cusps;
  int total = 0;     // k(Gamma, chi)
  int kappa = 0;     // number of cusp classes
  bool clean = true; // every cusp well separated and contained
};

SingularityReport singularity(const std::vector<CuspData>& cusps, const UnitaryRep& chi, const std::string& group);

struct KInvariantReport {
  SingularityReport sub_side;     // k(Gamma_1, chi)
  SingularityReport induced_side; // k(Gamma, U^chi)
  bool equal = false;
};

/// k(Gamma_1, chi) from the cusps of sub, k(Gamma, U^chi) from the cusps of
/// the Picard group with the induced representation. chi must carry matrices.
KInvariantReport verify_k_invariant(const SubgroupDescriptor& sub, const UnitaryRep& chi);

}  // namespace kz
