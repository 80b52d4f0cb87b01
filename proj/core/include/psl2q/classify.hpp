#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "psl2q/group.hpp"

namespace psl2q {

/// T_q(n): traces of lifts of the order-n elements, sorted by enc.
/// Empty exactly when no element of order n exists. Requires n > 1.
std::vector<FieldElem> trace_set(const Group& g, uint64_t n);

/// n > 1 is q-minimal when PSL2(p^e) contains an element of order n but no
/// PSL2(p^f), f < e, does; for semisimple orders this is
/// e = min{f > 0 : p^f = +-1 mod (gcd(2,n) n)}, for n = p it is e = 1.
/// Throws std::invalid_argument when PSL2(q) has no element of order n.
bool is_q_minimal(uint64_t q, uint64_t n);

/// n > 1 is q-good when n is odd and divides q-1 or q+1, or n is even and 4n
/// divides q-1 or q+1. Total: unrealized orders simply come out false.
bool is_q_good(uint64_t q, uint64_t n);

enum class TraceQuality { Good, Bad, NotApplicable };

struct TraceKind {
  ElemType structural;  // Unipotent / Split / Nonsplit
  TraceQuality quality;  // odd q and trace != +-2 only, else NotApplicable
};

TraceKind trace_kind(const Group& g, FieldElem alpha);

struct TraceCounts {
  uint64_t unipotent = 0;
  uint64_t split = 0;
  uint64_t nonsplit = 0;
  std::optional<uint64_t> bad;  // odd q only
};

/// Direct classification of all q traces.
TraceCounts trace_counts(const Group& g);

struct ElementCounts {
  uint64_t unipotent = 0;
  uint64_t split_ss = 0;
  uint64_t nonsplit_ss = 0;
  std::optional<uint64_t> non_q_good_ss;  // odd q only; equals |G|/4
};

/// Closed-form element counts by type.
ElementCounts element_counts(const Group& g);

struct OrdersRow {
  uint64_t q = 0;
  uint64_t unipotent_order = 0;          // p
  std::vector<uint64_t> minimal_good;     // q-minimal semisimple orders, q-good
  std::vector<uint64_t> minimal_not_good; // q-minimal semisimple orders, not q-good
};

/// One table row for PSL2(q): the unipotent order and the q-minimal
/// semisimple orders split by q-goodness, both ascending.
OrdersRow orders_table(uint64_t q);

/// Decompose a prime power as (p, e); throws for 0, 1 and non prime powers.
std::pair<uint64_t, uint32_t> prime_power(uint64_t q);

}  // namespace psl2q
