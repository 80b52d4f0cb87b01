#include <doctest.h>

#include <random>
#include <stdexcept>

#include "psl2q/oracle.hpp"

using namespace psl2q;

namespace {

Group make_group(uint64_t q) {
  auto [p, e] = prime_power(q);
  return group_ctx(make_field(p, e));
}

ClassId find_class(const Group& g, ElemType kind, uint64_t order_wanted) {
  for (auto& [id, size] : all_class_ids(g)) {
    (void)size;
    if (id.kind == kind && class_order(g, id) == order_wanted) return id;
  }
  throw std::logic_error("no such class in this test");
}

}  // namespace

TEST_CASE("group enumeration") {
  CHECK(enumerate_group(make_group(4)).elements.size() == 60);
  CHECK(enumerate_group(make_group(9)).elements.size() == 360);

  Group g7 = make_group(7);
  GroupTable t = enumerate_group(g7);
  CHECK(t.elements.size() == 168);
  CHECK(t.class_partition.size() == 6);
  for (auto& [id, members] : t.class_partition)
    CHECK(members.size() == class_size(g7, id));
}

TEST_CASE("brute class squares") {
  Group g5 = make_group(5);
  GroupTable t5 = enumerate_group(g5);
  ClassId u5 = find_class(g5, ElemType::Unipotent, 5);
  auto sq5 = class_square_brute(t5, u5);
  CHECK(sq5.size() == 4);  // both unipotent classes, the order-3 class, identity
  CHECK(sq5.count(ClassId{ElemType::Identity, 0, UnipClass::None}) == 1);
  CHECK(class_square_cardinality(t5, u5) == 45);

  Group g7 = make_group(7);
  GroupTable t7 = enumerate_group(g7);
  ClassId u7 = find_class(g7, ElemType::Unipotent, 7);
  auto sq7 = class_square_brute(t7, u7);
  CHECK(sq7.count(ClassId{ElemType::Identity, 0, UnipClass::None}) == 0);
  CHECK(class_square_cardinality(t7, u7) == 125);

  Group g8 = make_group(8);
  GroupTable t8 = enumerate_group(g8);
  ClassId n8 = find_class(g8, ElemType::Nonsplit, 9);
  auto sq8 = class_square_brute(t8, n8);
  for (auto& [id, size] : all_class_ids(g8)) {
    (void)size;
    CHECK(sq8.count(id) == (id.kind != ElemType::Unipotent ? 1 : 0));
  }
}

TEST_CASE("brute squares do not depend on the representative") {
  std::mt19937_64 rng(17);
  for (uint64_t q : {5ull, 7ull, 8ull, 9ull}) {
    Group g = make_group(q);
    GroupTable t = enumerate_group(g);
    for (auto& [id, members] : t.class_partition) {
      auto reference = class_square_brute(t, id);
      for (int i = 0; i < 3; ++i) {
        const PElem& left = t.elements[members[rng() % members.size()]];
        CHECK(class_square_brute_from(t, id, left) == reference);
      }
    }
  }
}

TEST_CASE("closures") {
  Group g5 = make_group(5);
  GroupTable t5 = enumerate_group(g5);
  const Field& F5 = g5.F();

  for (uint64_t c = 1; c < 5; ++c) {
    PElem x = canon(Mat2::companion(F5.from_code(c)));
    CHECK(closure(t5, x, x).size() == order(g5, x));
  }

  {
    FieldElem one = F5.one(), two = F5.from_int(2), half = F5.inv(two);
    Mat2 A{-one, one, F5.zero(), -one};
    Mat2 M{one + one, -half - one, two, -one};
    CHECK(closure(t5, canon(A), canon(A.conjugated_by(M))).size() == 60);
  }

  // two distinct commuting involutions close into the dihedral bound
  Group g7 = make_group(7);
  GroupTable t7 = enumerate_group(g7);
  ClassId inv7 = find_class(g7, ElemType::Nonsplit, 2);
  const auto& members = t7.class_partition.at(inv7);
  PElem x = t7.elements[members.front()];
  bool checked = false;
  for (uint32_t idx : members) {
    PElem y = t7.elements[idx];
    if (y == x || !(mul(x, y) == mul(y, x))) continue;
    CHECK(closure(t7, x, y).size() <= 2 * (7 + 1) / 2);
    checked = true;
  }
  CHECK(checked);
}

TEST_CASE("square containment facts") {
  for (uint64_t q : {5ull, 7ull, 8ull, 9ull, 13ull}) {
    Group g = make_group(q);
    GroupTable t = enumerate_group(g);
    ClassId identity{ElemType::Identity, 0, UnipClass::None};
    for (auto& [id, members] : t.class_partition) {
      (void)members;
      if (id.kind == ElemType::Identity) continue;
      auto sq = class_square_brute(t, id);
      if (id.kind == ElemType::Split || id.kind == ElemType::Nonsplit) {
        CHECK(sq.count(identity) == 1);  // x and x^-1 share a class
        if (id.kind == ElemType::Split)
          for (auto& [other, om] : t.class_partition) {
            (void)om;
            if (other.kind == ElemType::Unipotent) CHECK(sq.count(other) == 1);
          }
        if (class_order(g, id) == 2)
          for (auto& [other, om] : t.class_partition) {
            (void)om;
            if (other.kind == ElemType::Unipotent)
              CHECK(sq.count(other) == (g.even() || q % 4 == 1 ? 1 : 0));
          }
      } else if (!g.even()) {
        // odd-q unipotent squares contain every unipotent class, and the
        // identity exactly when q = 1 mod 4
        for (auto& [other, om] : t.class_partition) {
          (void)om;
          if (other.kind == ElemType::Unipotent) CHECK(sq.count(other) == 1);
        }
        CHECK(sq.count(identity) == (q % 4 == 1 ? 1 : 0));
      }
      if (g.even() && id.kind == ElemType::Nonsplit)
        for (auto& [other, om] : t.class_partition) {
          (void)om;
          if (other.kind == ElemType::Unipotent) CHECK(sq.count(other) == 0);
        }
    }
  }
}

TEST_CASE("brute unipotent orbits split in two") {
  for (uint64_t q : {5ull, 7ull, 9ull}) {
    auto [p, e] = prime_power(q);
    const Field& F = make_field(p, e);
    Group g = group_ctx(F);
    UnipotentOrbits orbits = sl2_trace2_orbits(F);
    CHECK(orbits.matrices.size() == q * q - 1);
    CHECK(orbits.orbit_count == 2);
    // the closed-form label agrees with the brute orbit on every matrix
    std::map<uint32_t, UnipClass> orbit_label;
    for (size_t i = 0; i < orbits.matrices.size(); ++i) {
      UnipClass label = class_id(g, canon(orbits.matrices[i])).unip;
      auto [it, inserted] = orbit_label.emplace(orbits.orbit[i], label);
      CHECK(it->second == label);
      (void)inserted;
    }
    CHECK(orbit_label.size() == 2);
  }
}

TEST_CASE("verification reports") {
  VerifyReport r7 = verify_all(7, 1);
  CHECK(r7.all_ok());
  CHECK(r7.epsilon_observed == "epsilon=1 iff q=3 mod 4");
  CHECK(r7.squares.size() == 5);

  VerifyReport r9 = verify_all(9, 1);
  CHECK(r9.all_ok());
  int unip_checks = 0;
  for (const auto& c : r9.generation)
    if (c.id.kind == ElemType::Unipotent) {
      ++unip_checks;
      CHECK_FALSE(c.pair_found);
      CHECK_FALSE(c.triple_found);
      CHECK(c.pair_ok);
      CHECK(c.triple_ok);
    }
  CHECK(unip_checks == 2);

  VerifyReport r13 = verify_all(13, 1);
  CHECK(r13.all_ok());
  for (const auto& s : r13.squares)
    if (s.id.kind == ElemType::Unipotent)
      CHECK(s.closed_form == "unipotents+good-semisimple+identity");
}
