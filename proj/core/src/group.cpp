#include "psl2q/group.hpp"

#include <algorithm>
#include <stdexcept>

namespace psl2q {

namespace {

std::vector<uint64_t> divisors_above_one(uint64_t n) {
  std::vector<uint64_t> out;
  for (uint64_t d = 2; d <= n; ++d)
    if (n % d == 0) out.push_back(d);
  return out;
}

Mat2 mat_pow(const Mat2& m, uint64_t n) {
  Mat2 acc = Mat2::identity(m.field()), base = m;
  while (n) {
    if (n & 1) acc = acc * base;
    base = base * base;
    n >>= 1;
  }
  return acc;
}

}  // namespace

Mat2 Mat2::from(FieldElem a, FieldElem b, FieldElem c, FieldElem d) {
  Mat2 m{a, b, c, d};
  if (!(m.det() == a.field->one()))
    throw std::invalid_argument("matrix is not unimodular");
  return m;
}

Mat2 Mat2::identity(const Field& f) {
  return {f.one(), f.zero(), f.zero(), f.one()};
}

Mat2 Mat2::companion(FieldElem alpha) {
  const Field& f = *alpha.field;
  return {alpha, f.from_int(-1), f.one(), f.zero()};
}

Mat2 Mat2::upper_unipotent(FieldElem u) {
  const Field& f = *u.field;
  return {f.one(), u, f.zero(), f.one()};
}

Group group_ctx(const Field& field) {
  Group g;
  g.field = &field;
  uint64_t q = field.q();
  g.d = field.even_char() ? 1 : 2;
  g.order = q * (q * q - 1) / g.d;
  g.split_order_divisors = divisors_above_one((q - 1) / g.d);
  g.nonsplit_order_divisors = divisors_above_one((q + 1) / g.d);
  return g;
}

PElem canon(const Mat2& m) {
  if (m.field().even_char()) return {m};
  Mat2 n = m.negated();
  return {n.lex_less(m) ? n : m};
}

PElem pelem_identity(const Group& g) { return canon(Mat2::identity(g.F())); }

PElem mul(const PElem& x, const PElem& y) {
  if (&x.field() != &y.field())
    throw std::invalid_argument("elements of different groups cannot be multiplied");
  return canon(x.rep * y.rep);
}

PElem inv(const PElem& x) { return canon(x.rep.inverse()); }

PElem conjugate(const PElem& x, const PElem& g) {
  if (&x.field() != &g.field())
    throw std::invalid_argument("elements of different groups cannot be conjugated");
  return canon(x.rep.conjugated_by(g.rep));
}

bool is_identity(const PElem& x) { return x.rep == Mat2::identity(x.field()); }

FieldElem trace(const PElem& x) { return x.rep.trace(); }

uint64_t order(const Group& g, const PElem& x) {
  if (is_identity(x)) return 1;
  ElemType t = elem_type(g, x);
  if (t == ElemType::Unipotent) return g.p();
  const auto& divisors =
      t == ElemType::Split ? g.split_order_divisors : g.nonsplit_order_divisors;
  for (uint64_t n : divisors)
    if (is_identity(canon(mat_pow(x.rep, n)))) return n;
  throw std::logic_error("element order not found among admissible divisors");
}

ElemType elem_type(const Group& g, const PElem& x) {
  if (is_identity(x)) return ElemType::Identity;
  const Field& F = g.F();
  FieldElem tr = x.rep.trace();
  auto roots = F.solve_monic_quadratic(-tr, F.one());
  if (roots.size() == 1) return ElemType::Unipotent;
  return roots.empty() ? ElemType::Nonsplit : ElemType::Split;
}

namespace {

uint64_t trace_orbit_key(FieldElem t) {
  FieldElem m = -t;
  return std::min(t.code, m.code);
}

UnipClass unipotent_square_class(const Group& g, const Mat2& rep) {
  const Field& F = g.F();
  if (g.even()) return UnipClass::None;
  FieldElem two = F.from_int(2);
  Mat2 lift = rep.trace() == two ? rep : rep.negated();  // unique trace-2 lift
  // lift = I + N with N nonzero nilpotent; det[Nv | v] for any v with Nv != 0
  // lands in a single square class.
  FieldElem nb = lift.b, nc = lift.c;
  // nc != 0: v = e1, Nv = (na, nc), det[Nv | v] = -nc.
  // nc == 0: nilpotency forces N = [[0, nb], [0, 0]]; v = e2 gives det = nb.
  FieldElem w = nc.code != 0 ? -nc : nb;
  return F.is_square(w) ? UnipClass::SquareClass : UnipClass::NonsquareClass;
}

}  // namespace

ClassId class_id(const Group& g, const PElem& x) {
  ElemType t = elem_type(g, x);
  switch (t) {
    case ElemType::Identity:
      return {ElemType::Identity, 0, UnipClass::None};
    case ElemType::Unipotent:
      return {ElemType::Unipotent, 0, unipotent_square_class(g, x.rep)};
    default:
      return {t, trace_orbit_key(x.rep.trace()), UnipClass::None};
  }
}

uint64_t class_size(const Group& g, const ClassId& id) {
  uint64_t q = g.q();
  const Field& F = g.F();
  switch (id.kind) {
    case ElemType::Identity:
      return 1;
    case ElemType::Unipotent:
      if (g.even() && id.unip != UnipClass::None)
        throw std::invalid_argument("even q has a single unipotent class");
      if (!g.even() && id.unip == UnipClass::None)
        throw std::invalid_argument("odd q unipotent classes carry a square-class flag");
      return (q * q - 1) / g.d;
    default: {
      FieldElem t = F.from_code(id.trace_key);
      ClassId check = class_id(g, canon(Mat2::companion(t)));
      if (check != id) throw std::invalid_argument("class label is not realizable for this q");
      uint64_t kappa = (id.trace_key == 0 && !g.even()) ? 2 : 1;
      return id.kind == ElemType::Split ? q * (q + 1) / kappa : q * (q - 1) / kappa;
    }
  }
}

std::vector<std::pair<ClassId, uint64_t>> all_class_ids(const Group& g) {
  std::vector<std::pair<ClassId, uint64_t>> out;
  const Field& F = g.F();
  out.push_back({{ElemType::Identity, 0, UnipClass::None}, 1});
  if (g.even()) {
    ClassId u{ElemType::Unipotent, 0, UnipClass::None};
    out.push_back({u, class_size(g, u)});
  } else {
    ClassId us{ElemType::Unipotent, 0, UnipClass::SquareClass};
    ClassId un{ElemType::Unipotent, 0, UnipClass::NonsquareClass};
    out.push_back({us, class_size(g, us)});
    out.push_back({un, class_size(g, un)});
  }
  FieldElem two = F.from_int(2), mtwo = F.from_int(-2);
  for (uint64_t code = 0; code < g.q(); ++code) {
    FieldElem t = F.from_code(code);
    if (t == two || t == mtwo) continue;
    if (trace_orbit_key(t) != code) continue;  // one label per orbit
    auto roots = F.solve_monic_quadratic(-t, F.one());
    ClassId id{roots.empty() ? ElemType::Nonsplit : ElemType::Split, code, UnipClass::None};
    out.push_back({id, class_size(g, id)});
  }
  return out;
}

PElem class_representative(const Group& g, const ClassId& id) {
  const Field& F = g.F();
  switch (id.kind) {
    case ElemType::Identity:
      return pelem_identity(g);
    case ElemType::Unipotent: {
      FieldElem u = id.unip == UnipClass::NonsquareClass ? F.nonsquare() : F.one();
      PElem x = canon(Mat2::upper_unipotent(u));
      return x;
    }
    default: {
      PElem x = canon(Mat2::companion(F.from_code(id.trace_key)));
      if (class_id(g, x) != id) throw std::invalid_argument("class label is not realizable for this q");
      return x;
    }
  }
}

uint64_t class_order(const Group& g, const ClassId& id) {
  return order(g, class_representative(g, id));
}

}  // namespace psl2q
