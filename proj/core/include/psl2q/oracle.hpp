#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <unordered_map>
#include <vector>

#include "psl2q/products.hpp"

namespace psl2q {

/// Every element of PSL2(q), enumerated in the deterministic scan order of
/// unimodular matrices (first row by enc, second row solved from det = 1),
/// with a lookup index and the partition into conjugacy classes.
struct GroupTable {
  Group group;
  std::vector<PElem> elements;
  std::unordered_map<uint64_t, uint32_t> index;  // packed entry codes -> position
  std::map<ClassId, std::vector<uint32_t>> class_partition;

  uint64_t pack(const PElem& x) const;
  uint32_t index_of(const PElem& x) const;
};

/// Full enumeration; throws when q(q^2-1)/d exceeds the 10^7 element budget.
GroupTable enumerate_group(const Group& g);

/// The set of classes met by C^2, computed as {class(x0 * b) : b in C} for a
/// fixed representative x0. C^2 is closed under conjugation, so products from
/// one fixed left factor meet every class of C^2.
std::set<ClassId> class_square_brute(const GroupTable& table, const ClassId& id);

/// Same, with a caller-chosen left factor (representative independence checks).
std::set<ClassId> class_square_brute_from(const GroupTable& table, const ClassId& id,
                                          const PElem& left);

/// Element count of C^2 (sum of the sizes of the classes it meets).
uint64_t class_square_cardinality(const GroupTable& table, const ClassId& id);

/// Indices of the subgroup generated by x and y, ascending.
std::vector<uint32_t> closure(const GroupTable& table, const PElem& x, const PElem& y);

/// Brute SL2-conjugacy partition of the trace-2 non-identity matrices:
/// orbit id per matrix, orbits numbered by first appearance. Odd q.
struct UnipotentOrbits {
  std::vector<Mat2> matrices;
  std::vector<uint32_t> orbit;
  uint32_t orbit_count = 0;
};
UnipotentOrbits sl2_trace2_orbits(const Field& field);

struct ClassSquareCheck {
  ClassId id;
  std::string selector;
  bool match = false;
  std::string closed_form;
  uint64_t brute_cardinality = 0;
  std::vector<std::string> missing;  // closed form predicts, brute disagrees
  std::vector<std::string> extra;
};

struct GenerationCheck {
  ClassId id;
  std::string selector;
  bool pair_expected = false, pair_found = false, pair_ok = false;
  bool triple_expected = false, triple_found = false, triple_ok = false;
  std::string witness;  // first discrepancy, if any
};

/// Per-q reconciliation of every closed-form claim against the enumerated
/// group. Deterministic for a fixed seed; any mismatch names its witness.
struct VerifyReport {
  uint64_t q = 0;
  uint64_t seed = 1;
  uint64_t group_order = 0;
  bool enumerated_order_ok = false;
  bool table1_ok = false;
  bool trace_sets_ok = false;
  std::string trace_sets_witness;
  bool trace_counts_ok = false;
  bool element_counts_ok = false;
  std::string counts_witness;
  bool good_residue_ok = true;  // odd q only
  std::string good_residue_witness;
  std::vector<ClassSquareCheck> squares;  // q >= 4 only
  bool squares_ok = true;
  bool square_cardinalities_ok = true;
  std::string cardinality_witness;
  std::string epsilon_observed;  // which epsilon convention the data supports
  std::vector<GenerationCheck> generation;  // q > 3; brute absence up to q <= 17
  bool generation_ok = true;

  bool all_ok() const;
  std::string to_text() const;
};

VerifyReport verify_all(uint64_t q, uint64_t seed = 1);

/// Deterministic selector string for a class: "id", "unip" (even q),
/// "unip:sq" / "unip:nonsq" (odd q), or "tr:<enc>" with the orbit key.
std::string class_selector(const Group& g, const ClassId& id);

}  // namespace psl2q
