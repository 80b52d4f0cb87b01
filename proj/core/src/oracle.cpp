#include "psl2q/oracle.hpp"

#include <algorithm>
#include <deque>
#include <sstream>
#include <stdexcept>

namespace psl2q {

namespace {

constexpr uint64_t kEnumerationBudget = 10'000'000;

uint64_t checked_pack(const std::array<uint64_t, 4>& k, uint64_t q) {
  return ((k[0] * q + k[1]) * q + k[2]) * q + k[3];
}

}  // namespace

uint64_t GroupTable::pack(const PElem& x) const {
  return checked_pack(x.key(), group.q());
}

uint32_t GroupTable::index_of(const PElem& x) const {
  auto it = index.find(pack(x));
  if (it == index.end()) throw std::logic_error("element missing from group table");
  return it->second;
}

GroupTable enumerate_group(const Group& g) {
  if (g.order > kEnumerationBudget)
    throw std::invalid_argument("group exceeds the enumeration budget");
  const Field& F = g.F();
  const uint64_t q = F.q();

  GroupTable table;
  table.group = g;
  table.elements.reserve(g.order);
  table.index.reserve(g.order * 2);

  auto insert = [&](const Mat2& m) {
    PElem x = canon(m);
    uint64_t key = checked_pack(x.key(), q);
    if (table.index.emplace(key, (uint32_t)table.elements.size()).second)
      table.elements.push_back(x);
  };

  // First row (a, b) != (0, 0) by ascending enc; second row solved from
  // ad - bc = 1.
  for (uint64_t ac = 0; ac < q; ++ac) {
    FieldElem a = F.from_code(ac);
    for (uint64_t bc = 0; bc < q; ++bc) {
      FieldElem b = F.from_code(bc);
      if (ac == 0 && bc == 0) continue;
      if (ac != 0) {
        for (uint64_t cc = 0; cc < q; ++cc) {
          FieldElem c = F.from_code(cc);
          FieldElem d = (F.one() + b * c) / a;
          insert({a, b, c, d});
        }
      } else {
        FieldElem c = -F.inv(b);
        for (uint64_t dc = 0; dc < q; ++dc) insert({a, b, c, F.from_code(dc)});
      }
    }
  }
  if (table.elements.size() != g.order)
    throw std::logic_error("enumeration does not match the group order formula");

  for (uint32_t i = 0; i < table.elements.size(); ++i)
    table.class_partition[class_id(g, table.elements[i])].push_back(i);
  return table;
}

std::set<ClassId> class_square_brute_from(const GroupTable& table, const ClassId& id,
                                          const PElem& left) {
  auto it = table.class_partition.find(id);
  if (it == table.class_partition.end())
    throw std::invalid_argument("class not present in the table");
  std::set<ClassId> out;
  for (uint32_t idx : it->second)
    out.insert(class_id(table.group, mul(left, table.elements[idx])));
  return out;
}

std::set<ClassId> class_square_brute(const GroupTable& table, const ClassId& id) {
  auto it = table.class_partition.find(id);
  if (it == table.class_partition.end())
    throw std::invalid_argument("class not present in the table");
  return class_square_brute_from(table, id, table.elements[it->second.front()]);
}

uint64_t class_square_cardinality(const GroupTable& table, const ClassId& id) {
  uint64_t total = 0;
  for (const ClassId& c : class_square_brute(table, id))
    total += class_size(table.group, c);
  return total;
}

std::vector<uint32_t> closure(const GroupTable& table, const PElem& x, const PElem& y) {
  const Group& g = table.group;
  std::vector<char> seen(table.elements.size(), 0);
  std::vector<uint32_t> out;
  std::deque<uint32_t> frontier;
  uint32_t id0 = table.index_of(pelem_identity(g));
  seen[id0] = 1;
  out.push_back(id0);
  frontier.push_back(id0);
  const PElem gens[2] = {x, y};
  while (!frontier.empty()) {
    uint32_t cur = frontier.front();
    frontier.pop_front();
    for (const PElem& s : gens) {
      uint32_t nxt = table.index_of(mul(table.elements[cur], s));
      if (!seen[nxt]) {
        seen[nxt] = 1;
        out.push_back(nxt);
        frontier.push_back(nxt);
      }
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

UnipotentOrbits sl2_trace2_orbits(const Field& field) {
  if (field.even_char()) throw std::invalid_argument("square classes concern odd q");
  const Field& F = field;
  const uint64_t q = F.q();
  FieldElem two = F.from_int(2);

  // All of SL2(q), and the trace-2 non-identity matrices among them.
  std::vector<Mat2> sl2;
  sl2.reserve(q * (q * q - 1));
  for (uint64_t ac = 0; ac < q; ++ac) {
    FieldElem a = F.from_code(ac);
    for (uint64_t bc = 0; bc < q; ++bc) {
      FieldElem b = F.from_code(bc);
      if (ac == 0 && bc == 0) continue;
      if (ac != 0) {
        for (uint64_t cc = 0; cc < q; ++cc) {
          FieldElem c = F.from_code(cc);
          sl2.push_back({a, b, c, (F.one() + b * c) / a});
        }
      } else {
        FieldElem c = -F.inv(b);
        for (uint64_t dc = 0; dc < q; ++dc) sl2.push_back({a, b, c, F.from_code(dc)});
      }
    }
  }

  UnipotentOrbits res;
  std::unordered_map<uint64_t, uint32_t> pos;
  for (const Mat2& m : sl2) {
    if (!(m.trace() == two) || m == Mat2::identity(F)) continue;
    pos.emplace(checked_pack({m.a.code, m.b.code, m.c.code, m.d.code}, q),
                (uint32_t)res.matrices.size());
    res.matrices.push_back(m);
  }
  res.orbit.assign(res.matrices.size(), UINT32_MAX);
  for (uint32_t i = 0; i < res.matrices.size(); ++i) {
    if (res.orbit[i] != UINT32_MAX) continue;
    uint32_t tag = res.orbit_count++;
    for (const Mat2& h : sl2) {
      Mat2 c = res.matrices[i].conjugated_by(h);
      res.orbit[pos.at(checked_pack({c.a.code, c.b.code, c.c.code, c.d.code}, q))] = tag;
    }
  }
  return res;
}

std::string class_selector(const Group& g, const ClassId& id) {
  switch (id.kind) {
    case ElemType::Identity:
      return "id";
    case ElemType::Unipotent:
      if (g.even()) return "unip";
      return id.unip == UnipClass::SquareClass ? "unip:sq" : "unip:nonsq";
    default:
      return "tr:" + std::to_string(id.trace_key);
  }
}

// ---------------------------------------------------------------------------
// verify_all

namespace {

uint64_t trace_orbit_key_of(FieldElem t) {
  FieldElem m = -t;
  return std::min(t.code, m.code);
}

std::set<uint64_t> realized_orders(const GroupTable& table) {
  std::set<uint64_t> out;
  for (auto& [id, members] : table.class_partition) {
    (void)members;
    out.insert(class_order(table.group, id));
  }
  return out;
}

bool check_table1_row(const GroupTable& table, std::string* witness) {
  const Group& g = table.group;
  auto [p, e] = prime_power(g.q());
  OrdersRow row = orders_table(g.q());
  if (row.unipotent_order != p) {
    *witness = "unipotent order";
    return false;
  }
  // realized orders per subfield level, by enumeration
  std::set<uint64_t> here = realized_orders(table);
  std::vector<std::set<uint64_t>> below;
  uint64_t pf = 1;
  for (uint32_t f = 1; f < e; ++f) {
    pf *= p;
    below.push_back(realized_orders(enumerate_group(group_ctx(make_field(p, f)))));
  }
  std::vector<uint64_t> good, notgood;
  for (uint64_t n : here) {
    if (n == 1 || n == p) continue;
    bool minimal = true;
    for (auto& s : below)
      if (s.count(n)) minimal = false;
    if (!minimal) continue;
    (is_q_good(g.q(), n) ? good : notgood).push_back(n);
  }
  if (good != row.minimal_good || notgood != row.minimal_not_good) {
    *witness = "q-minimal order lists";
    return false;
  }
  return true;
}

bool check_trace_sets(const GroupTable& table, std::string* witness) {
  const Group& g = table.group;
  // collected orbit keys of lift traces, per element order
  std::map<uint64_t, std::set<uint64_t>> collected;
  for (auto& [id, members] : table.class_partition) {
    if (id.kind == ElemType::Identity) continue;
    uint64_t n = class_order(g, id);
    for (uint32_t idx : members)
      collected[n].insert(trace_orbit_key_of(trace(table.elements[idx])));
  }
  for (uint64_t n = 2; n <= g.q() + 2; ++n) {
    std::set<uint64_t> formula;
    for (FieldElem t : trace_set(g, n)) formula.insert(trace_orbit_key_of(t));
    auto it = collected.find(n);
    std::set<uint64_t> seen = it == collected.end() ? std::set<uint64_t>{} : it->second;
    if (formula != seen) {
      *witness = "n=" + std::to_string(n);
      return false;
    }
  }
  return true;
}

bool check_trace_counts(const Group& g) {
  TraceCounts c = trace_counts(g);
  uint64_t q = g.q();
  if (g.even())
    return c.unipotent == 1 && c.split == (q - 2) / 2 && c.nonsplit == q / 2 && !c.bad;
  uint64_t bad_expected = q % 4 == 1 ? (q - 1) / 4 : (q + 1) / 4;
  return c.unipotent == 2 && c.split == (q - 3) / 2 && c.nonsplit == (q - 1) / 2 &&
         c.bad && *c.bad == bad_expected;
}

bool check_element_counts(const GroupTable& table, std::string* witness) {
  const Group& g = table.group;
  ElementCounts closed = element_counts(g);
  uint64_t unip = 0, split = 0, nonsplit = 0, notgood = 0;
  for (auto& [id, members] : table.class_partition) {
    uint64_t n = members.size();
    switch (id.kind) {
      case ElemType::Identity: break;
      case ElemType::Unipotent: unip += n; break;
      case ElemType::Split:
      case ElemType::Nonsplit: {
        (id.kind == ElemType::Split ? split : nonsplit) += n;
        if (!is_q_good(g.q(), class_order(g, id))) notgood += n;
        break;
      }
    }
  }
  if (closed.unipotent != unip) { *witness = "unipotent count"; return false; }
  if (closed.split_ss != split) { *witness = "split count"; return false; }
  if (closed.nonsplit_ss != nonsplit) { *witness = "nonsplit count"; return false; }
  if (!g.even()) {
    if (!closed.non_q_good_ss || *closed.non_q_good_ss != notgood || notgood != g.order / 4) {
      *witness = "non-q-good count";
      return false;
    }
  }
  return true;
}

bool check_good_residue(const GroupTable& table, std::string* witness) {
  const Group& g = table.group;
  if (g.even()) return true;
  const Field& F = g.F();
  FieldElem two = F.from_int(2);
  for (uint64_t t : realized_orders(table)) {
    if (t == 1 || t == g.p()) continue;
    for (FieldElem gamma : trace_set(g, t)) {
      bool residue = F.is_square(two + gamma) || F.is_square(two - gamma);
      if (residue != is_q_good(g.q(), t)) {
        *witness = "order " + std::to_string(t);
        return false;
      }
    }
  }
  return true;
}

}  // namespace

bool VerifyReport::all_ok() const {
  if (!(enumerated_order_ok && table1_ok && trace_sets_ok && trace_counts_ok &&
        element_counts_ok && good_residue_ok && squares_ok && square_cardinalities_ok &&
        generation_ok))
    return false;
  return true;
}

VerifyReport verify_all(uint64_t q, uint64_t seed) {
  auto [p, e] = prime_power(q);
  const Field& F = make_field(p, e);
  Group g = group_ctx(F);
  GroupTable table = enumerate_group(g);

  VerifyReport rep;
  rep.q = q;
  rep.seed = seed;
  rep.group_order = g.order;
  rep.enumerated_order_ok = table.elements.size() == g.order;

  std::string w;
  rep.table1_ok = check_table1_row(table, &w);
  rep.trace_sets_ok = check_trace_sets(table, &rep.trace_sets_witness);
  rep.trace_counts_ok = check_trace_counts(g);
  rep.element_counts_ok = check_element_counts(table, &rep.counts_witness);
  rep.good_residue_ok = check_good_residue(table, &rep.good_residue_witness);

  bool closed_forms_apply = g.even() ? q > 2 : q > 3;
  if (closed_forms_apply) {
    for (auto& [id, members] : table.class_partition) {
      (void)members;
      if (id.kind == ElemType::Identity) continue;
      ClassSquareCheck check;
      check.id = id;
      check.selector = class_selector(g, id);
      SetTag tag = class_square_closed(g, id);
      check.closed_form = to_string(tag);
      std::set<ClassId> closed = expand_set_descr(g, tag);
      std::set<ClassId> brute = class_square_brute(table, id);
      check.match = closed == brute;
      for (const ClassId& c : closed)
        if (!brute.count(c)) check.missing.push_back(class_selector(g, c));
      for (const ClassId& c : brute)
        if (!closed.count(c)) check.extra.push_back(class_selector(g, c));
      check.brute_cardinality = class_square_cardinality(table, id);
      if (!check.match) rep.squares_ok = false;
      rep.squares.push_back(std::move(check));
    }

    // exact cardinalities from the closed forms
    if (!g.even()) {
      uint64_t formula = 3 * q * (q * q - 1) / 8;
      bool eps_is_q3 = true, eps_is_q1 = true;
      for (const auto& check : rep.squares) {
        if (check.id.kind != ElemType::Unipotent) continue;
        uint64_t eps_q3 = q % 4 == 3 ? 1 : 0;
        if (check.brute_cardinality != formula - eps_q3) eps_is_q3 = false;
        if (check.brute_cardinality != formula - (1 - eps_q3)) eps_is_q1 = false;
      }
      if (eps_is_q3) {
        rep.epsilon_observed = "epsilon=1 iff q=3 mod 4";
      } else if (eps_is_q1) {
        rep.epsilon_observed = "epsilon=1 iff q=1 mod 4";
        rep.square_cardinalities_ok = false;  // pinned convention is q=3 mod 4
        rep.cardinality_witness = "unipotent cardinality matches the opposite convention";
      } else {
        rep.epsilon_observed = "no epsilon convention fits";
        rep.square_cardinalities_ok = false;
        rep.cardinality_witness = "unipotent |C^2| off the 3q(q^2-1)/8 form";
      }
    } else {
      rep.epsilon_observed = "n/a (even q)";
      for (const auto& check : rep.squares) {
        if (check.id.kind != ElemType::Nonsplit) continue;
        if (check.brute_cardinality != (q - 1) * (q * q - 1)) {
          rep.square_cardinalities_ok = false;
          rep.cardinality_witness = check.selector;
        }
      }
    }
  }

  if (q > 3) {
    bool brute_absence = q <= 17;
    for (auto& [id, members] : table.class_partition) {
      if (id.kind == ElemType::Identity) continue;
      GenerationCheck check;
      check.id = id;
      check.selector = class_selector(g, id);
      uint64_t n = class_order(g, id);

      check.pair_expected = !(n == 2 || (q == 9 && id.kind == ElemType::Unipotent));
      check.triple_expected = id.kind == ElemType::Unipotent
                                  ? e == 1
                                  : (n > 3 && is_q_minimal(q, n));

      std::optional<GenCertificate> pair;
      try {
        pair = generating_pair_in_class(g, id, seed);
      } catch (const std::logic_error& ex) {
        check.witness = ex.what();
      }
      check.pair_found = pair.has_value();
      check.pair_ok = check.pair_found == check.pair_expected;
      if (pair) {
        check.pair_ok = check.pair_ok && certificate_valid(g, *pair, id) &&
                        closure(table, pair->elements[0], pair->elements[1]).size() == g.order;
        if (!check.pair_ok) check.witness = "pair certificate failed validation";
      } else if (brute_absence && !check.pair_expected) {
        PElem rep0 = table.elements[members.front()];
        for (uint32_t idx : members) {
          if (closure(table, rep0, table.elements[idx]).size() == g.order) {
            check.pair_ok = false;
            check.witness = "brute search found a generating pair";
            break;
          }
        }
      }

      std::optional<GenCertificate> triple;
      try {
        triple = generating_triple_in_class(g, id, seed);
      } catch (const std::logic_error& ex) {
        if (check.witness.empty()) check.witness = ex.what();
      }
      check.triple_found = triple.has_value();
      check.triple_ok = check.triple_found == check.triple_expected;
      if (triple) {
        check.triple_ok = check.triple_ok && certificate_valid(g, *triple, id) &&
                          closure(table, triple->elements[0], triple->elements[1]).size() ==
                              g.order;
        if (!check.triple_ok && check.witness.empty())
          check.witness = "triple certificate failed validation";
      } else if (brute_absence && !check.triple_expected) {
        PElem rep0 = table.elements[members.front()];
        for (uint32_t idx : members) {
          PElem y = table.elements[idx];
          PElem z = inv(mul(rep0, y));
          if (class_id(g, z) != id) continue;
          if (closure(table, rep0, y).size() == g.order) {
            check.triple_ok = false;
            check.witness = "brute search found a generating triple";
            break;
          }
        }
      }

      if (!check.pair_ok || !check.triple_ok) rep.generation_ok = false;
      rep.generation.push_back(std::move(check));
    }
  }

  return rep;
}

std::string VerifyReport::to_text() const {
  std::ostringstream os;
  auto flag = [](bool b) { return b ? "ok" : "MISMATCH"; };
  os << "verify q=" << q << " seed=" << seed << "\n";
  os << "  group order " << group_order << ": " << flag(enumerated_order_ok) << "\n";
  os << "  orders table row: " << flag(table1_ok) << "\n";
  os << "  trace sets: " << flag(trace_sets_ok);
  if (!trace_sets_ok) os << " at " << trace_sets_witness;
  os << "\n";
  os << "  trace counts: " << flag(trace_counts_ok) << "\n";
  os << "  element counts: " << flag(element_counts_ok);
  if (!element_counts_ok) os << " at " << counts_witness;
  os << "\n";
  os << "  q-good residue equivalence: " << flag(good_residue_ok);
  if (!good_residue_ok) os << " at " << good_residue_witness;
  os << "\n";
  if (!squares.empty()) {
    os << "  class squares (" << squares.size() << " classes): " << flag(squares_ok) << "\n";
    for (const auto& s : squares) {
      os << "    " << s.selector << " -> " << s.closed_form << " ["
         << s.brute_cardinality << " elements]: " << flag(s.match);
      if (!s.match) {
        os << " missing:";
        for (const auto& m : s.missing) os << " " << m;
        os << " extra:";
        for (const auto& m : s.extra) os << " " << m;
      }
      os << "\n";
    }
    os << "  square cardinalities: " << flag(square_cardinalities_ok);
    if (!square_cardinalities_ok) os << " at " << cardinality_witness;
    os << "\n";
    os << "  epsilon convention: " << epsilon_observed << "\n";
  }
  if (!generation.empty()) {
    os << "  generation (" << generation.size() << " classes): " << flag(generation_ok) << "\n";
    for (const auto& c : generation) {
      os << "    " << c.selector << " pair " << (c.pair_found ? "present" : "absent") << "/"
         << (c.pair_expected ? "expected" : "excluded") << ": " << flag(c.pair_ok)
         << "; triple " << (c.triple_found ? "present" : "absent") << "/"
         << (c.triple_expected ? "expected" : "excluded") << ": " << flag(c.triple_ok);
      if (!c.witness.empty()) os << " (" << c.witness << ")";
      os << "\n";
    }
  }
  os << "  result: " << (all_ok() ? "ALL OK" : "MISMATCH") << "\n";
  return os.str();
}

}  // namespace psl2q
