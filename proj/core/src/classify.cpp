#include "psl2q/classify.hpp"

#include <algorithm>
#include <cassert>
#include <stdexcept>

namespace psl2q {

std::pair<uint64_t, uint32_t> prime_power(uint64_t q) {
  if (q < 2) throw std::invalid_argument("not a prime power");
  for (uint64_t p = 2; p * p <= q; ++p) {
    if (q % p == 0) {
      uint32_t e = 0;
      uint64_t r = q;
      while (r % p == 0) r /= p, ++e;
      if (r != 1) throw std::invalid_argument("not a prime power");
      return {p, e};
    }
  }
  return {q, 1};
}

std::vector<FieldElem> trace_set(const Group& g, uint64_t n) {
  if (n <= 1) throw std::invalid_argument("trace sets are defined for n > 1");
  const Field& F = g.F();
  uint64_t q = g.q();
  std::vector<FieldElem> out;

  auto push_signed = [&](FieldElem t) {
    out.push_back(t);
    if (!g.even()) out.push_back(-t);
  };

  if (g.even()) {
    if (n == 2) {
      out.push_back(F.zero());
    } else if ((q - 1) % n == 0) {
      for (FieldElem a : F.primitive_roots(n)) out.push_back(a + F.inv(a));
    } else if ((q + 1) % n == 0) {
      const Field& E = F.quad_ext();
      for (FieldElem b : E.primitive_roots(n)) {
        FieldElem t = b + E.frobenius_q(b);
        assert(E.in_base(t));  // Frobenius-fixed by construction
        out.push_back(E.to_base(t));
      }
    }
  } else {
    if (n == g.p()) {
      push_signed(F.from_int(2));
    } else if (((q - 1) / 2) % n == 0) {
      for (FieldElem a : F.primitive_roots(2 * n)) push_signed(a + F.inv(a));
    } else if (((q + 1) / 2) % n == 0) {
      const Field& E = F.quad_ext();
      for (FieldElem b : E.primitive_roots(2 * n)) {
        FieldElem t = b + E.frobenius_q(b);
        assert(E.in_base(t));
        push_signed(E.to_base(t));
      }
    }
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

namespace {

bool order_realized(uint64_t p, uint64_t q, uint64_t d, uint64_t n) {
  if (n <= 1) return false;
  return n == p || ((q - 1) / d) % n == 0 || ((q + 1) / d) % n == 0;
}

}  // namespace

bool is_q_minimal(uint64_t q, uint64_t n) {
  auto [p, e] = prime_power(q);
  uint64_t d = p == 2 ? 1 : 2;
  if (!order_realized(p, q, d, n))
    throw std::invalid_argument("PSL2(q) has no element of this order");
  if (n == p) return e == 1;  // the unipotent order already occurs over the prime field
  uint64_t m = (n % 2 == 0 ? 2 : 1) * n;
  uint64_t pf = 1;
  for (uint32_t f = 1; f <= e; ++f) {
    pf = pf * p % m;
    if (pf == 1 || pf == m - 1) return f == e;
  }
  throw std::logic_error("realized order admits no f <= e with p^f = +-1");
}

bool is_q_good(uint64_t q, uint64_t n) {
  if (n <= 1) return false;
  if (n % 2 == 1) return (q - 1) % n == 0 || (q + 1) % n == 0;
  return (q - 1) % (4 * n) == 0 || (q + 1) % (4 * n) == 0;
}

TraceKind trace_kind(const Group& g, FieldElem alpha) {
  const Field& F = g.F();
  FieldElem two = F.from_int(2);
  if (alpha == two || alpha == -two) return {ElemType::Unipotent, TraceQuality::NotApplicable};
  auto roots = F.solve_monic_quadratic(-alpha, F.one());
  ElemType structural = roots.empty() ? ElemType::Nonsplit : ElemType::Split;
  if (g.even()) return {structural, TraceQuality::NotApplicable};
  bool good = F.is_square(two + alpha) || F.is_square(two - alpha);
  return {structural, good ? TraceQuality::Good : TraceQuality::Bad};
}

TraceCounts trace_counts(const Group& g) {
  TraceCounts counts;
  if (!g.even()) counts.bad = 0;
  for (uint64_t code = 0; code < g.q(); ++code) {
    TraceKind k = trace_kind(g, g.F().from_code(code));
    switch (k.structural) {
      case ElemType::Unipotent: ++counts.unipotent; break;
      case ElemType::Split: ++counts.split; break;
      default: ++counts.nonsplit; break;
    }
    if (k.quality == TraceQuality::Bad) ++*counts.bad;
  }
  return counts;
}

ElementCounts element_counts(const Group& g) {
  uint64_t q = g.q();
  ElementCounts counts;
  counts.unipotent = q * q - 1;
  if (g.even()) {
    counts.split_ss = q * (q + 1) * (q - 2) / 2;
    counts.nonsplit_ss = q * q * (q - 1) / 2;
  } else {
    counts.split_ss = q * (q + 1) * (q - 3) / 4;
    counts.nonsplit_ss = q * (q - 1) * (q - 1) / 4;
    counts.non_q_good_ss = q * (q * q - 1) / 8;  // = |G|/4
  }
  return counts;
}

OrdersRow orders_table(uint64_t q) {
  auto [p, e] = prime_power(q);
  (void)e;
  OrdersRow row;
  row.q = q;
  row.unipotent_order = p;
  uint64_t d = p == 2 ? 1 : 2;
  std::vector<uint64_t> semisimple_orders;
  for (uint64_t torus : {(q - 1) / d, (q + 1) / d})
    for (uint64_t n = 2; n <= torus; ++n)
      if (torus % n == 0) semisimple_orders.push_back(n);
  std::sort(semisimple_orders.begin(), semisimple_orders.end());
  for (uint64_t n : semisimple_orders) {
    if (!is_q_minimal(q, n)) continue;
    (is_q_good(q, n) ? row.minimal_good : row.minimal_not_good).push_back(n);
  }
  return row;
}

}  // namespace psl2q
