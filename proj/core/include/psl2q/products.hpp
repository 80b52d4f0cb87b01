#pragma once

#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "psl2q/classify.hpp"
#include "psl2q/group.hpp"

namespace psl2q {

/// True iff a^2 + b^2 + g^2 - a b g - 4 = 0. Trace triples on this locus are
/// exactly the ones whose realizations generate structural subgroups.
bool is_singular(FieldElem alpha, FieldElem beta, FieldElem gamma);

struct TraceTriple {
  Mat2 a, b, c;  // tr(a) = alpha, tr(b) = beta, tr(c) = gamma, a*b*c = I
};

/// Matrices (A, B, C) in SL2(q) with the prescribed traces and ABC = I.
/// Deterministic: A = companion(alpha), B found by an enc-ordered sweep of its
/// first entry with a quadratic solve, C = (AB)^-1; a central-A fallback
/// covers the trace patterns the sweep cannot reach. The contract is asserted
/// on every call.
TraceTriple realize_trace_triple(const Group& g, FieldElem alpha, FieldElem beta,
                                 FieldElem gamma);

enum class SubgroupTag { Structural, Small, SubfieldPSL, SubfieldPGL, Full };

struct SubgroupKind {
  SubgroupTag tag = SubgroupTag::Structural;
  uint64_t order = 0;        // order of <x, y>
  uint64_t subfield_q = 0;   // subfield kinds only
  std::string detail;        // cyclic / borel / dihedral / a4 / s4 / a5 / ...
};

/// Classify <x, y> by breadth-first closure: Full when it is the whole group;
/// Structural when cyclic or contained in a Borel (common fixed point on the
/// projective line); subfield PSL/PGL by order match over a subfield;
/// A4/S4/A5/dihedral otherwise, told apart by the element-order multiset.
SubgroupKind subgroup_kind(const Group& g, const PElem& x, const PElem& y);

/// The subgroup generated by x and y, as deterministically ordered elements.
std::vector<PElem> generated_subgroup(const Group& g, const PElem& x, const PElem& y);

enum class SetTag {
  WholeGroup,
  AllMinusUnipotents,
  UnipotentsPlusGoodSS,
  UnipotentsPlusGoodSSPlusIdentity,
};

std::string to_string(SetTag tag);

/// Closed form for the square C^2 of a non-identity class, as a symbolic set:
/// even q: split -> G, nonsplit -> G minus unipotents, unipotent -> G;
/// odd q: semisimple of order > 2 -> G; order 2 -> G when q = 1 mod 4, else
/// G minus unipotents; unipotent -> unipotents plus the semisimple classes of
/// q-good order, plus the identity exactly when q = 1 mod 4.
/// Requires q > 3 for odd q and q > 2 for even q.
SetTag class_square_closed(const Group& g, const ClassId& id);

/// Expand a symbolic set to the explicit classes it contains.
std::set<ClassId> expand_set_descr(const Group& g, SetTag tag);

enum class CertRelation { Pair, TripleProductOne };

struct GenCertificate {
  std::vector<PElem> elements;  // two or three members of one class
  CertRelation relation = CertRelation::Pair;
  uint64_t closure_order = 0;   // order of <elements[0], elements[1]>
};

/// A pair x, y in the class with <x, y> = G. Absent exactly for order-2
/// classes and for the unipotent classes of PSL2(9). Requires q > 3.
std::optional<GenCertificate> generating_pair_in_class(const Group& g, const ClassId& id,
                                                       uint64_t seed = 1);

/// A triple x, y, z in the class with xyz = 1 and <x, y> = G. Present exactly
/// for semisimple classes of q-minimal order > 3 and, when q > 3 is prime,
/// the unipotent classes. Requires q > 3.
std::optional<GenCertificate> generating_triple_in_class(const Group& g, const ClassId& id,
                                                         uint64_t seed = 1);

/// Factor z as x*y with x, y conjugate elements generating G. By default the
/// factors are semisimple whenever such a factorization exists (falling back
/// to conjugate unipotent factors for the handful of small odd q where it
/// does not); with unipotent_factors the factors are required unipotent,
/// which for semisimple z exists iff its order is q-minimal and q-good and
/// q != 9, and for unipotent z iff q > 3 is prime.
std::optional<GenCertificate> product_of_conjugate_generators(const Group& g, const PElem& z,
                                                              bool unipotent_factors = false,
                                                              uint64_t seed = 1);

/// h in SL2 with h W h^-1 = Z, when the matrices are SL2-conjugate.
std::optional<Mat2> sl2_conjugating_matrix(const Mat2& w, const Mat2& z);

/// Conjugation by diag(x, 1/x) with x the extension generator (x^2 = nu, the
/// canonical non-square): b -> b nu, c -> c / nu. Maps SL2(q) to itself and
/// swaps the two unipotent classes; a group automorphism of PSL2(q). Odd q.
Mat2 conjugate_by_extension_generator(const Group& g, const Mat2& m);

/// Re-check a certificate: all members share the stated class, the relation
/// holds, and the closure of the first two members has the stated order.
bool certificate_valid(const Group& g, const GenCertificate& cert, const ClassId& id);

}  // namespace psl2q
