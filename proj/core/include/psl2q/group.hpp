#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "psl2q/field.hpp"

namespace psl2q {

/// Unimodular 2x2 matrix over a finite field, row-major. Determinant 1 is
/// checked by the factories; the arithmetic below preserves it.
struct Mat2 {
  FieldElem a, b, c, d;

  const Field& field() const { return *a.field; }

  /// Checked constructor; throws std::invalid_argument unless det = 1.
  static Mat2 from(FieldElem a, FieldElem b, FieldElem c, FieldElem d);
  static Mat2 identity(const Field& f);
  /// [[alpha, -1], [1, 0]]: the trace-alpha companion matrix.
  static Mat2 companion(FieldElem alpha);
  /// [[1, u], [0, 1]].
  static Mat2 upper_unipotent(FieldElem u);

  FieldElem trace() const { return a + d; }
  FieldElem det() const { return a * d - b * c; }
  Mat2 inverse() const { return {d, -b, -c, a}; }  // adjugate of a det-1 matrix
  Mat2 negated() const { return {-a, -b, -c, -d}; }

  friend Mat2 operator*(const Mat2& x, const Mat2& y) {
    return {x.a * y.a + x.b * y.c, x.a * y.b + x.b * y.d,
            x.c * y.a + x.d * y.c, x.c * y.b + x.d * y.d};
  }
  friend bool operator==(const Mat2& x, const Mat2& y) {
    return x.a == y.a && x.b == y.b && x.c == y.c && x.d == y.d;
  }

  Mat2 conjugated_by(const Mat2& g) const { return g * (*this) * g.inverse(); }

  std::array<uint64_t, 4> codes() const { return {a.code, b.code, c.code, d.code}; }
  /// enc-lexicographic comparison of the entry tuple (a, b, c, d).
  bool lex_less(const Mat2& other) const { return codes() < other.codes(); }
};

/// Element of PSL2(q) as a canonical representative of the coset {A, -A}:
/// for odd q the enc-lexicographically smaller of the two lifts, for even q
/// the lift itself.
struct PElem {
  Mat2 rep;

  const Field& field() const { return rep.field(); }
  friend bool operator==(const PElem& x, const PElem& y) { return x.rep == y.rep; }
  friend bool operator<(const PElem& x, const PElem& y) { return x.rep.lex_less(y.rep); }
  std::array<uint64_t, 4> key() const { return rep.codes(); }
};

/// The group PSL2(q) over a fixed field: d = gcd(2, q-1) and the group order
/// q(q^2-1)/d, plus cached divisor tables for element-order computation.
struct Group {
  const Field* field = nullptr;
  uint64_t d = 0;
  uint64_t order = 0;
  std::vector<uint64_t> split_order_divisors;     // divisors > 1 of (q-1)/d, ascending
  std::vector<uint64_t> nonsplit_order_divisors;  // divisors > 1 of (q+1)/d, ascending

  const Field& F() const { return *field; }
  uint64_t q() const { return field->q(); }
  uint64_t p() const { return field->p(); }
  bool even() const { return field->even_char(); }
  uint64_t split_torus_order() const { return (q() - 1) / d; }
  uint64_t nonsplit_torus_order() const { return (q() + 1) / d; }
};

Group group_ctx(const Field& field);

PElem canon(const Mat2& m);
PElem pelem_identity(const Group& g);
PElem mul(const PElem& x, const PElem& y);
PElem inv(const PElem& x);
PElem conjugate(const PElem& x, const PElem& g);
bool is_identity(const PElem& x);

/// Least n >= 1 with x^n = 1, found among the divisors of p, (q-1)/d, (q+1)/d.
uint64_t order(const Group& g, const PElem& x);

enum class ElemType { Identity, Unipotent, Split, Nonsplit };

/// Type from the root count of the characteristic polynomial z^2 - tr z + 1
/// of the lift: one double root = unipotent, two roots = split, none = nonsplit.
ElemType elem_type(const Group& g, const PElem& x);

enum class UnipClass : uint8_t { None, SquareClass, NonsquareClass };

/// Conjugacy-class label. Semisimple classes carry the trace orbit {t, -t}
/// stored as the enc-smaller member; for odd q the two unipotent classes are
/// told apart by the square class of det[Nv | v] on the trace-normalized
/// lift A = I + N, an SL2-invariant of the class.
struct ClassId {
  ElemType kind = ElemType::Identity;
  uint64_t trace_key = 0;  // semisimple kinds only
  UnipClass unip = UnipClass::None;

  friend auto operator<=>(const ClassId&, const ClassId&) = default;
};

ClassId class_id(const Group& g, const PElem& x);
/// Table size of the class: (q^2-1)/d for unipotent, q(q+-1)/kappa for
/// semisimple with kappa(0) = 2. Throws if the label is not realizable.
uint64_t class_size(const Group& g, const ClassId& id);
/// Every class exactly once, in the deterministic enumeration order
/// (identity, unipotent classes, semisimple by ascending trace key).
/// Sizes sum to the group order.
std::vector<std::pair<ClassId, uint64_t>> all_class_ids(const Group& g);
PElem class_representative(const Group& g, const ClassId& id);
uint64_t class_order(const Group& g, const ClassId& id);

/// Trace of the canonical lift.
FieldElem trace(const PElem& x);

}  // namespace psl2q
