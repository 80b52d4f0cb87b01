#pragma once

#include <cassert>
#include <compare>
#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

namespace psl2q {

class Field;

/// Element of a finite field, identified by its integer encoding
/// enc(a) = sum coeffs[i] * p^i over the polynomial basis (low degree first).
/// The encoding is the canonical total order used for every tie-break.
struct FieldElem {
  const Field* field = nullptr;
  uint64_t code = 0;

  friend bool operator==(FieldElem x, FieldElem y) {
    assert(x.field == y.field);
    return x.code == y.code;
  }
  friend std::strong_ordering operator<=>(FieldElem x, FieldElem y) {
    assert(x.field == y.field);
    return x.code <=> y.code;
  }
};

FieldElem operator+(FieldElem x, FieldElem y);
FieldElem operator-(FieldElem x, FieldElem y);
FieldElem operator-(FieldElem x);
FieldElem operator*(FieldElem x, FieldElem y);
FieldElem operator/(FieldElem x, FieldElem y);

/// A finite field F_{p^e}, either a base field in the polynomial basis over
/// F_p (defining polynomial: the lexicographically smallest monic irreducible,
/// coefficients compared low-degree-first), or the quadratic extension of a
/// base field, represented as pairs over it with z^2 = s*z + t.
///
/// Contexts are interned and live for the whole program, so FieldElem handles
/// never dangle. Everything is immutable after construction; all operations
/// are pure.
class Field {
 public:
  /// F_{p^e}. Throws std::invalid_argument for non-prime p or p^e > 2^20.
  static const Field& make(uint64_t p, uint32_t e);

  /// F_{q^2} layered over this field. For odd q the defining quadratic is
  /// z^2 - nu with nu the enc-smallest non-square; for even q it is
  /// z^2 + z + nu with nu the enc-smallest element of absolute trace 1.
  const Field& quad_ext() const;

  uint64_t p() const { return p_; }
  uint32_t e() const { return e_; }
  uint64_t q() const { return q_; }
  bool even_char() const { return p_ == 2; }
  bool is_extension() const { return base_ != nullptr; }
  const Field* base() const { return base_; }

  /// Base field: monic defining polynomial as e+1 residues, low degree first.
  /// Extension: the pair {t, s} of base-field codes with z^2 = s*z + t.
  const std::vector<uint64_t>& defining_poly() const { return poly_; }

  FieldElem zero() const { return {this, 0}; }
  FieldElem one() const { return {this, 1}; }
  FieldElem from_code(uint64_t c) const {
    assert(c < q_);
    return {this, c};
  }
  FieldElem from_int(int64_t v) const;

  FieldElem add(FieldElem x, FieldElem y) const;
  FieldElem sub(FieldElem x, FieldElem y) const;
  FieldElem neg(FieldElem x) const;
  FieldElem mul(FieldElem x, FieldElem y) const;
  FieldElem inv(FieldElem x) const;  // throws std::domain_error on zero
  FieldElem pow(FieldElem x, uint64_t n) const;

  // Quadratic-extension plumbing. embed/frobenius_q/in_base/to_base are only
  // meaningful on extension contexts.
  FieldElem embed(FieldElem base_elem) const;
  FieldElem frobenius_q(FieldElem x) const;  // b -> b^q, fixes the base field
  bool in_base(FieldElem x) const;
  FieldElem to_base(FieldElem x) const;

  bool is_square(FieldElem a) const;
  /// enc-smaller square root when one exists.
  std::optional<FieldElem> sqrt(FieldElem a) const;
  /// All roots in this field of z^2 + b z + c, sorted by enc.
  std::vector<FieldElem> solve_monic_quadratic(FieldElem b, FieldElem c) const;
  /// Elements of multiplicative order exactly n, sorted by enc.
  /// Empty when n does not divide q-1.
  std::vector<FieldElem> primitive_roots(uint64_t n) const;

  /// enc-smallest non-square; odd characteristic only.
  FieldElem nonsquare() const;

 private:
  Field() = default;
  Field(const Field&) = delete;
  Field& operator=(const Field&) = delete;

  void init_base(uint64_t p, uint32_t e);
  void init_ext(const Field& base);
  void init_mult_structure();

  // base-field digit arithmetic
  void decode(uint64_t code, uint64_t* digits) const;
  uint64_t encode(const uint64_t* digits) const;
  uint64_t mul_base(uint64_t x, uint64_t y) const;

  uint64_t p_ = 0;
  uint32_t e_ = 0;
  uint64_t q_ = 0;
  const Field* base_ = nullptr;       // null for base fields
  std::vector<uint64_t> poly_;        // see defining_poly()
  uint64_t ext_s_ = 0, ext_t_ = 0;    // extension: z^2 = s z + t (base codes)

  std::vector<std::pair<uint64_t, uint32_t>> unit_group_factors_;  // of q-1
  uint64_t generator_code_ = 1;  // enc-smallest generator of F_q*
  uint64_t nonsquare_code_ = 0;  // odd characteristic only

  mutable const Field* ext_ = nullptr;  // interned on first quad_ext()

  friend struct FieldRegistry;
};

inline FieldElem operator+(FieldElem x, FieldElem y) { return x.field->add(x, y); }
inline FieldElem operator-(FieldElem x, FieldElem y) { return x.field->sub(x, y); }
inline FieldElem operator-(FieldElem x) { return x.field->neg(x); }
inline FieldElem operator*(FieldElem x, FieldElem y) { return x.field->mul(x, y); }
inline FieldElem operator/(FieldElem x, FieldElem y) { return x.field->mul(x, x.field->inv(y)); }

/// F_{p^e} with the lexicographically smallest monic irreducible defining
/// polynomial. Deterministic across runs.
inline const Field& make_field(uint64_t p, uint32_t e) { return Field::make(p, e); }

/// The quadratic extension F_{q^2} of ctx.
inline const Field& quad_ext(const Field& ctx) { return ctx.quad_ext(); }

}  // namespace psl2q
