#pragma once

// Loxodromic conjugacy classes below a norm cutoff, their splitting into
// classes of a normal subgroup, and JSON persistence.

#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "kzeta/elements.hpp"
#include "kzeta/gaussian.hpp"
#include "kzeta/subgroup.hpp"

namespace kz {

inline constexpr int kClassTableVersion = 1;

/// One conjugacy class {T} of loxodromic elements with N(T) <= cutoff.
struct ClassRecord {
  GMat2 rep;                 // smallest element of the class found (pool order)
  double norm = 0;           // N(T)
  GaussianInt trace;         // canonical sign
  CentralizerData centralizer;
  std::size_t class_size = 0;  // elements of the class seen in the search box
  std::size_t parent = 0;      // index of the parent class (split tables)
  std::size_t coset = 0;       // rep = cosets[coset] * parent rep * cosets[coset]^-1 (split tables)
  std::vector<std::string> flags;

  bool has_flag(const std::string& f) const;
};

struct GroupInfo {
  std::string kind = "full";  // "full" | "principal-congruence"
  GaussianInt modulus{1};
  std::size_t index = 1;
};

struct TableDiagnostics {
  std::size_t elements = 0;         // loxodromic elements examined
  std::size_t unresolved = 0;       // classes flagged unresolved-conjugacy
  std::vector<std::pair<std::int64_t, std::size_t>> count_by_height;
  bool stable = false;              // class count equal for two consecutive heights
};

struct ClassTable {
  GroupInfo group;
  std::int64_t height = 0;
  double cutoff = 1;
  std::vector<ClassRecord> classes;
  TableDiagnostics diagnostics;

  bool operator==(const ClassTable& o) const;
};

struct TableParseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct TableIOError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct SchemaVersionError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Group the loxodromic elements of `pool` with N <= cutoff into
/// PSL(2, Z[i])-conjugacy classes. Conjugators are taken from the height-1
/// pool (union-find), then from the height-2 pool between classes of equal
/// trace. Classes that still share a trace are kept apart and flagged
/// "shares-trace", plus "unresolved-conjugacy" unless separating_modulus
/// certifies every pair distinct.
ClassTable build_class_table(std::span<const GMat2> pool, double cutoff, std::int64_t height);

/// A modulus pi in a fixed list of small Gaussian integers such that x and y
/// are not conjugate in PSL(2, Z[i]/pi); such a pi certifies that x and y are
/// not conjugate in PSL(2, Z[i]). nullopt when every listed quotient fails to
/// separate them.
std::optional<GaussianInt> separating_modulus(const GMat2& x, const GMat2& y);

/// build_class_table over enumerate_loxodromic(H, cutoff) for H = h_start,
/// h_start + 1, ... until the class count is equal for two consecutive H or
/// h_max is reached (diagnostics.stable records which).
ClassTable build_stable_table(double cutoff, std::int64_t h_start = 2, std::int64_t h_max = 14);

/// Split the classes of a full-group table into classes of the normal
/// subgroup `sub`. A class {T} with T in sub splits into [G : H_T] classes,
/// G = Gamma / sub and H_T the image of the centralizer of T; the
/// representatives are alpha_k T alpha_k^-1 with k the smallest label of each
/// left coset of H_T. Centralizer data is recomputed inside sub.
ClassTable split_classes(const ClassTable& table, const SubgroupDescriptor& sub);

/// Re-derive the Gamma_1-conjugacy grouping of split representatives by
/// searching conjugators in sub among pool elements: reps r, r' are merged
/// when g r g^-1 = r' for some pool g in sub. Returns the number of groups.
std::size_t count_split_classes_by_search(const ClassTable& split, const SubgroupDescriptor& sub,
                                          std::int64_t pool_height);

std::string table_to_json(const ClassTable& t);
ClassTable table_from_json(const std::string& text);
void write_table(const ClassTable& t, const std::string& path);
ClassTable read_table(const std::string& path);

}  // namespace kz
