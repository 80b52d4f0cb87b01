#include "psl2q/products.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <random>
#include <stdexcept>
#include <unordered_set>

namespace psl2q {

namespace {

constexpr uint64_t kClosureBudget = 10'000'000;
constexpr int kRetryBudget = 64;

struct KeyHash {
  size_t operator()(const std::array<uint64_t, 4>& k) const {
    uint64_t h = 0x9e3779b97f4a7c15ull;
    for (uint64_t v : k) {
      h ^= v + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
    }
    return (size_t)h;
  }
};

void check_triple_contract(const TraceTriple& t, FieldElem alpha, FieldElem beta,
                           FieldElem gamma) {
  const Field& F = *alpha.field;
  if (!(t.a.trace() == alpha && t.b.trace() == beta && t.c.trace() == gamma) ||
      !(t.a * t.b * t.c == Mat2::identity(F)))
    throw std::logic_error("trace-triple realization violated its contract");
}

uint64_t ipow(uint64_t b, uint32_t e) {
  uint64_t r = 1;
  while (e--) r *= b;
  return r;
}

Mat2 random_sl2(const Group& g, std::mt19937_64& rng) {
  const Field& F = g.F();
  uint64_t q = F.q();
  for (;;) {
    uint64_t ac = rng() % q, cc = rng() % q;
    if (ac == 0 && cc == 0) continue;
    FieldElem a = F.from_code(ac), c = F.from_code(cc);
    if (ac != 0) {
      FieldElem b = F.from_code(rng() % q);
      FieldElem d = (F.one() + b * c) / a;
      return {a, b, c, d};
    }
    FieldElem b = -F.inv(c);
    FieldElem d = F.from_code(rng() % q);
    return {a, b, c, d};
  }
}

// Fixed points of m on the projective line, encoded as t < q for [1 : t] and
// q for [0 : 1]; a central m fixes everything.
std::vector<uint64_t> fixed_points(const Mat2& m) {
  const Field& F = m.field();
  uint64_t q = F.q();
  std::vector<uint64_t> pts;
  bool central = m.b.code == 0 && m.c.code == 0 && m.a == m.d;
  if (central) {
    for (uint64_t t = 0; t <= q; ++t) pts.push_back(t);
    return pts;
  }
  if (m.b.code == 0) pts.push_back(q);
  // [1 : t] fixed iff b t^2 - (d - a) t - c = 0
  FieldElem diff = m.d - m.a;
  if (m.b.code != 0) {
    for (FieldElem t : F.solve_monic_quadratic(-(diff / m.b), -(m.c / m.b)))
      pts.push_back(t.code);
  } else if (!(diff.code == 0)) {
    pts.push_back((-(m.c / diff)).code);
  }
  std::sort(pts.begin(), pts.end());
  return pts;
}

bool have_common_fixed_point(const PElem& x, const PElem& y) {
  auto px = fixed_points(x.rep), py = fixed_points(y.rep);
  std::vector<uint64_t> common;
  std::set_intersection(px.begin(), px.end(), py.begin(), py.end(),
                        std::back_inserter(common));
  return !common.empty();
}

std::vector<uint64_t> semisimple_orders_desc(const Group& g) {
  std::vector<uint64_t> orders = g.nonsplit_order_divisors;
  std::sort(orders.rbegin(), orders.rend());
  std::vector<uint64_t> split = g.split_order_divisors;
  std::sort(split.rbegin(), split.rend());
  orders.insert(orders.end(), split.begin(), split.end());
  return orders;
}

}  // namespace

bool is_singular(FieldElem alpha, FieldElem beta, FieldElem gamma) {
  const Field& F = *alpha.field;
  FieldElem v = alpha * alpha + beta * beta + gamma * gamma -
                alpha * beta * gamma - F.from_int(4);
  return v.code == 0;
}

TraceTriple realize_trace_triple(const Group& g, FieldElem alpha, FieldElem beta,
                                 FieldElem gamma) {
  const Field& F = g.F();
  Mat2 A = Mat2::companion(alpha);

  // Sweep the first entry u of B = [[u, v], [w, beta-u]]. The constraints
  // tr(AB) = gamma and det B = 1 pin v - w = gamma - alpha u and
  // v w = u(beta-u) - 1, so v is a root of y^2 - s y - t.
  for (uint64_t uc = 0; uc < F.q(); ++uc) {
    FieldElem u = F.from_code(uc);
    FieldElem s = gamma - alpha * u;
    FieldElem t = u * (beta - u) - F.one();
    auto roots = F.solve_monic_quadratic(-s, -t);
    if (roots.empty()) continue;
    FieldElem v = roots.front();
    Mat2 B{u, v, v - s, beta - u};
    TraceTriple out{A, B, (A * B).inverse()};
    check_triple_contract(out, alpha, beta, gamma);
    return out;
  }

  // The sweep only reaches triples realizable with a non-central A; the
  // leftover patterns have A = +-I, which forces gamma = (alpha/2) beta.
  for (int sign : {1, -1}) {
    FieldElem eps = F.from_int(sign);
    if (!(eps + eps == alpha)) continue;
    if (!(eps * beta == gamma)) continue;
    Mat2 Ac{eps, F.zero(), F.zero(), eps};
    Mat2 B = Mat2::companion(beta);
    TraceTriple out{Ac, B, (Ac * B).inverse()};
    check_triple_contract(out, alpha, beta, gamma);
    return out;
  }

  // Exhaustive scan of trace-beta unimodular B for tiny fields.
  if (F.q() <= 9) {
    for (uint64_t uc = 0; uc < F.q(); ++uc) {
      for (uint64_t vc = 0; vc < F.q(); ++vc) {
        FieldElem u = F.from_code(uc), v = F.from_code(vc);
        FieldElem rest = u * (beta - u) - F.one();  // must equal v w
        std::vector<FieldElem> ws;
        if (vc != 0) {
          ws.push_back(rest / v);
        } else if (rest.code == 0) {
          for (uint64_t wc = 0; wc < F.q(); ++wc) ws.push_back(F.from_code(wc));
        }
        for (FieldElem w : ws) {
          Mat2 B{u, v, w, beta - u};
          if (!((A * B).trace() == gamma)) continue;
          TraceTriple out{A, B, (A * B).inverse()};
          check_triple_contract(out, alpha, beta, gamma);
          return out;
        }
      }
    }
  }
  throw std::logic_error("no trace-triple realization found");
}

std::vector<PElem> generated_subgroup(const Group& g, const PElem& x, const PElem& y) {
  if (g.order > kClosureBudget)
    throw std::invalid_argument("group too large for closure enumeration");
  std::vector<PElem> out;
  std::unordered_set<std::array<uint64_t, 4>, KeyHash> seen;
  std::deque<PElem> frontier;
  PElem id = pelem_identity(g);
  seen.insert(id.key());
  out.push_back(id);
  frontier.push_back(id);
  const PElem gens[2] = {x, y};
  while (!frontier.empty()) {
    PElem cur = frontier.front();
    frontier.pop_front();
    for (const PElem& s : gens) {
      PElem nxt = mul(cur, s);
      if (seen.insert(nxt.key()).second) {
        out.push_back(nxt);
        frontier.push_back(nxt);
      }
    }
  }
  return out;
}

namespace {

std::map<uint64_t, uint64_t> order_multiset(const Group& g, const std::vector<PElem>& H) {
  std::map<uint64_t, uint64_t> m;
  for (const PElem& h : H) ++m[order(g, h)];
  return m;
}

}  // namespace

SubgroupKind subgroup_kind(const Group& g, const PElem& x, const PElem& y) {
  auto H = generated_subgroup(g, x, y);
  uint64_t n = H.size();
  if (n == g.order) return {SubgroupTag::Full, n, 0, "whole group"};
  if (have_common_fixed_point(x, y)) return {SubgroupTag::Structural, n, 0, "borel"};

  auto orders = order_multiset(g, H);
  uint64_t max_order = orders.rbegin()->first;
  if (max_order == n) return {SubgroupTag::Structural, n, 0, "cyclic"};

  // subfield subgroups, matched by order over each proper subfield
  const uint64_t p = g.p();
  const uint32_t e = g.F().e();
  for (uint32_t f = 1; f < e; ++f) {
    if (e % f != 0) continue;
    uint64_t q1 = ipow(p, f);
    uint64_t d1 = p == 2 ? 1 : 2;
    if (n == q1 * (q1 * q1 - 1) / d1)
      return {SubgroupTag::SubfieldPSL, n, q1, "psl2 over subfield"};
    if (!g.even() && (e / f) % 2 == 0 && n == q1 * (q1 * q1 - 1))
      return {SubgroupTag::SubfieldPGL, n, q1, "pgl2 over subfield"};
  }

  auto matches = [&](std::initializer_list<std::pair<uint64_t, uint64_t>> sig) {
    std::map<uint64_t, uint64_t> want(sig.begin(), sig.end());
    return orders == want;
  };
  if (n == 12 && matches({{1, 1}, {2, 3}, {3, 8}}))
    return {SubgroupTag::Small, n, 0, "a4"};
  if (n == 24 && matches({{1, 1}, {2, 9}, {3, 8}, {4, 6}}))
    return {SubgroupTag::Small, n, 0, "s4"};
  if (n == 60 && matches({{1, 1}, {2, 15}, {3, 20}, {5, 24}}))
    return {SubgroupTag::Small, n, 0, "a5"};
  if (n % 2 == 0 && max_order == n / 2 && orders[2] >= n / 2)
    return {SubgroupTag::Small, n, 0, "dihedral"};
  throw std::logic_error("two-generator subgroup escaped the classification");
}

std::string to_string(SetTag tag) {
  switch (tag) {
    case SetTag::WholeGroup: return "whole-group";
    case SetTag::AllMinusUnipotents: return "all-minus-unipotents";
    case SetTag::UnipotentsPlusGoodSS: return "unipotents+good-semisimple";
    case SetTag::UnipotentsPlusGoodSSPlusIdentity: return "unipotents+good-semisimple+identity";
  }
  return "?";
}

SetTag class_square_closed(const Group& g, const ClassId& id) {
  if (id.kind == ElemType::Identity)
    throw std::invalid_argument("class squares are stated for non-identity classes");
  uint64_t q = g.q();
  if (g.even()) {
    if (q <= 2) throw std::invalid_argument("closed forms require q > 2 for even q");
    if (id.kind == ElemType::Unipotent || id.kind == ElemType::Split)
      return SetTag::WholeGroup;
    return SetTag::AllMinusUnipotents;
  }
  if (q <= 3) throw std::invalid_argument("closed forms require q > 3 for odd q");
  if (id.kind == ElemType::Unipotent)
    return q % 4 == 1 ? SetTag::UnipotentsPlusGoodSSPlusIdentity
                      : SetTag::UnipotentsPlusGoodSS;
  if (class_order(g, id) == 2)
    return q % 4 == 1 ? SetTag::WholeGroup : SetTag::AllMinusUnipotents;
  return SetTag::WholeGroup;
}

std::set<ClassId> expand_set_descr(const Group& g, SetTag tag) {
  std::set<ClassId> out;
  for (auto& [id, size] : all_class_ids(g)) {
    (void)size;
    switch (tag) {
      case SetTag::WholeGroup:
        out.insert(id);
        break;
      case SetTag::AllMinusUnipotents:
        if (id.kind != ElemType::Unipotent) out.insert(id);
        break;
      case SetTag::UnipotentsPlusGoodSS:
      case SetTag::UnipotentsPlusGoodSSPlusIdentity:
        if (id.kind == ElemType::Unipotent) {
          out.insert(id);
        } else if (id.kind == ElemType::Identity) {
          if (tag == SetTag::UnipotentsPlusGoodSSPlusIdentity) out.insert(id);
        } else if (is_q_good(g.q(), class_order(g, id))) {
          out.insert(id);
        }
        break;
    }
  }
  return out;
}

std::optional<Mat2> sl2_conjugating_matrix(const Mat2& w, const Mat2& z) {
  const Field& F = w.field();
  bool w_central = w.b.code == 0 && w.c.code == 0 && w.a == w.d;
  bool z_central = z.b.code == 0 && z.c.code == 0 && z.a == z.d;
  if (w_central || z_central) {
    if (w == z) return Mat2::identity(F);
    return std::nullopt;
  }

  // h W = Z h as four linear equations in the entries of h.
  FieldElem O = F.zero();
  FieldElem rows[4][4] = {
      {w.a - z.a, w.c, -z.b, O},
      {w.b, w.d - z.a, O, -z.b},
      {-z.c, O, w.a - z.d, w.c},
      {O, -z.c, w.b, w.d - z.d},
  };

  // Gaussian elimination to a reduced form; collect the kernel basis.
  int pivot_col_of_row[4] = {-1, -1, -1, -1};
  bool is_pivot_col[4] = {false, false, false, false};
  int rank = 0;
  for (int col = 0; col < 4 && rank < 4; ++col) {
    int pr = -1;
    for (int r = rank; r < 4; ++r)
      if (rows[r][col].code != 0) {
        pr = r;
        break;
      }
    if (pr < 0) continue;
    std::swap(rows[rank], rows[pr]);
    FieldElem piv_inv = F.inv(rows[rank][col]);
    for (int c2 = 0; c2 < 4; ++c2) rows[rank][c2] = rows[rank][c2] * piv_inv;
    for (int r = 0; r < 4; ++r) {
      if (r == rank || rows[r][col].code == 0) continue;
      FieldElem factor = rows[r][col];
      for (int c2 = 0; c2 < 4; ++c2)
        rows[r][c2] = rows[r][c2] - factor * rows[rank][c2];
    }
    pivot_col_of_row[rank] = col;
    is_pivot_col[col] = true;
    ++rank;
  }
  std::vector<std::array<FieldElem, 4>> kernel;
  for (int free_col = 0; free_col < 4; ++free_col) {
    if (is_pivot_col[free_col]) continue;
    std::array<FieldElem, 4> v{O, O, O, O};
    v[free_col] = F.one();
    for (int r = 0; r < rank; ++r) v[pivot_col_of_row[r]] = -rows[r][free_col];
    kernel.push_back(v);
  }
  if (kernel.empty()) return std::nullopt;

  auto det_of = [&](const std::array<FieldElem, 4>& v) {
    return v[0] * v[3] - v[1] * v[2];
  };
  auto as_mat = [&](const std::array<FieldElem, 4>& v) {
    return Mat2{v[0], v[1], v[2], v[3]};
  };

  if (kernel.size() == 1) {
    // det(s v) = s^2 det v
    FieldElem D = det_of(kernel[0]);
    if (D.code == 0) return std::nullopt;
    auto s = F.sqrt(F.inv(D));
    if (!s) return std::nullopt;
    auto v = kernel[0];
    for (auto& c : v) c = c * *s;
    return as_mat(v);
  }

  // Two-dimensional solution space: det(s v1 + t v2) is a quadratic form;
  // sweep s and solve for t.
  const auto &v1 = kernel[0], &v2 = kernel[1];
  FieldElem D1 = det_of(v1), D2 = det_of(v2);
  std::array<FieldElem, 4> v12;
  for (int i = 0; i < 4; ++i) v12[i] = v1[i] + v2[i];
  FieldElem B = det_of(v12) - D1 - D2;
  for (uint64_t sc = 0; sc < F.q(); ++sc) {
    FieldElem s = F.from_code(sc);
    // D2 t^2 + B s t + (D1 s^2 - 1) = 0
    FieldElem c0 = D1 * s * s - F.one();
    std::vector<FieldElem> ts;
    if (D2.code != 0) {
      ts = F.solve_monic_quadratic(B * s / D2, c0 / D2);
    } else if (!((B * s).code == 0)) {
      ts.push_back(-c0 / (B * s));
    } else if (c0.code == 0) {
      ts.push_back(F.zero());
    }
    for (FieldElem t : ts) {
      std::array<FieldElem, 4> v;
      for (int i = 0; i < 4; ++i) v[i] = s * v1[i] + t * v2[i];
      if (det_of(v) == F.one()) return as_mat(v);
    }
  }
  return std::nullopt;
}

Mat2 conjugate_by_extension_generator(const Group& g, const Mat2& m) {
  if (g.even()) throw std::invalid_argument("the square-class twist exists for odd q only");
  FieldElem nu = g.F().nonsquare();
  return {m.a, m.b * nu, m.c / nu, m.d};
}

bool certificate_valid(const Group& g, const GenCertificate& cert, const ClassId& id) {
  if (cert.elements.size() != (cert.relation == CertRelation::Pair ? 2u : 3u)) return false;
  for (const PElem& x : cert.elements)
    if (class_id(g, x) != id) return false;
  if (cert.relation == CertRelation::TripleProductOne) {
    PElem prod = mul(mul(cert.elements[0], cert.elements[1]), cert.elements[2]);
    if (!is_identity(prod)) return false;
  }
  auto H = generated_subgroup(g, cert.elements[0], cert.elements[1]);
  return H.size() == cert.closure_order && cert.closure_order == g.order;
}

namespace {

std::optional<GenCertificate> try_pair(const Group& g, const ClassId& id, const PElem& x,
                                       const PElem& y) {
  if (class_id(g, x) != id || class_id(g, y) != id) return std::nullopt;
  auto H = generated_subgroup(g, x, y);
  if (H.size() != g.order) return std::nullopt;
  return GenCertificate{{x, y}, CertRelation::Pair, H.size()};
}

void require_generation_domain(const Group& g, const ClassId& id) {
  if (g.q() <= 3) throw std::invalid_argument("generation statements require q > 3");
  if (id.kind == ElemType::Identity)
    throw std::invalid_argument("generation statements concern non-identity classes");
}

}  // namespace

std::optional<GenCertificate> generating_pair_in_class(const Group& g, const ClassId& id,
                                                       uint64_t seed) {
  require_generation_domain(g, id);
  const Field& F = g.F();
  if (class_order(g, id) == 2) return std::nullopt;  // two involutions only span a dihedral group
  if (g.q() == 9 && id.kind == ElemType::Unipotent) return std::nullopt;

  // product-trace candidates: semisimple orders from the largest down, then
  // the unipotent traces
  std::vector<FieldElem> gammas;
  for (uint64_t t : semisimple_orders_desc(g))
    for (FieldElem c : trace_set(g, t)) gammas.push_back(c);
  gammas.push_back(F.from_int(-2));
  gammas.push_back(F.from_int(2));

  if (id.kind != ElemType::Unipotent) {
    FieldElem alpha = F.from_code(id.trace_key);
    for (FieldElem gamma : gammas) {
      if (is_singular(alpha, alpha, gamma)) continue;
      TraceTriple t = realize_trace_triple(g, alpha, alpha, gamma);
      if (auto c = try_pair(g, id, canon(t.a), canon(t.b))) return c;
    }
  } else {
    FieldElem two = F.from_int(2);
    for (FieldElem gamma : gammas) {
      if (is_singular(two, two, gamma)) continue;
      if (!F.is_square(two - gamma)) continue;  // factors must land in one class
      TraceTriple t = realize_trace_triple(g, two, two, gamma);
      PElem x = canon(t.a), y = canon(t.b);
      if (is_identity(x) || is_identity(y)) continue;
      if (class_id(g, x) != id) {
        x = canon(conjugate_by_extension_generator(g, t.a));
        y = canon(conjugate_by_extension_generator(g, t.b));
      }
      if (auto c = try_pair(g, id, x, y)) return c;
    }
  }

  std::mt19937_64 rng(seed);
  PElem rep = class_representative(g, id);
  for (int i = 0; i < kRetryBudget; ++i) {
    Mat2 h = random_sl2(g, rng);
    PElem y = canon(rep.rep.conjugated_by(h));
    if (y == rep) continue;
    if (auto c = try_pair(g, id, rep, y)) return c;
  }
  throw std::logic_error("retry budget exhausted while constructing a generating pair");
}

std::optional<GenCertificate> generating_triple_in_class(const Group& g, const ClassId& id,
                                                         uint64_t seed) {
  require_generation_domain(g, id);
  const Field& F = g.F();

  auto try_triple = [&](PElem x, PElem y, PElem z) -> std::optional<GenCertificate> {
    if (class_id(g, x) != id || class_id(g, y) != id || class_id(g, z) != id)
      return std::nullopt;
    if (!is_identity(mul(mul(x, y), z))) return std::nullopt;
    auto H = generated_subgroup(g, x, y);
    if (H.size() != g.order) return std::nullopt;
    return GenCertificate{{x, y, z}, CertRelation::TripleProductOne, H.size()};
  };

  if (id.kind == ElemType::Unipotent) {
    if (F.e() != 1) return std::nullopt;  // order-p triples live inside PSL2(p)
    // A = U_{-1}, B = M A M^-1, C = K A K^-1 with the parametrized M, K below
    // satisfy ABC = I for any a outside {0, +-2}.
    FieldElem one = F.one(), two = F.from_int(2);
    Mat2 A{-one, one, F.zero(), -one};
    for (uint64_t ac = 1; ac < F.q(); ++ac) {
      FieldElem a = F.from_code(ac);
      if (a == two || a == -two) continue;
      FieldElem half = F.inv(two);
      Mat2 M{a + one, -(a * half) - one, two, -one};
      Mat2 K{a, -half, two, F.zero()};
      Mat2 B = A.conjugated_by(M), C = A.conjugated_by(K);
      if (!(A * B * C == Mat2::identity(F))) continue;
      PElem x = canon(A), y = canon(B), z = canon(C);
      if (class_id(g, x) != id) {
        x = canon(conjugate_by_extension_generator(g, A));
        y = canon(conjugate_by_extension_generator(g, B));
        z = canon(conjugate_by_extension_generator(g, C));
      }
      if (auto c = try_triple(x, y, z)) return c;
    }
  } else {
    uint64_t n = class_order(g, id);
    if (!(n > 3 && is_q_minimal(g.q(), n))) return std::nullopt;
    FieldElem alpha = F.from_code(id.trace_key);
    for (int mask = 0; mask < 8; ++mask) {
      FieldElem t0 = (mask & 1) ? -alpha : alpha;
      FieldElem t1 = (mask & 2) ? -alpha : alpha;
      FieldElem t2 = (mask & 4) ? -alpha : alpha;
      if (is_singular(t0, t1, t2)) continue;
      TraceTriple t = realize_trace_triple(g, t0, t1, t2);
      if (auto c = try_triple(canon(t.a), canon(t.b), canon(t.c))) return c;
    }
    std::mt19937_64 rng(seed);
    PElem rep = class_representative(g, id);
    for (int i = 0; i < kRetryBudget; ++i) {
      Mat2 h = random_sl2(g, rng);
      PElem y = canon(rep.rep.conjugated_by(h));
      PElem z = inv(mul(rep, y));
      if (auto c = try_triple(rep, y, z)) return c;
    }
  }
  throw std::logic_error("retry budget exhausted while constructing a generating triple");
}

namespace {

// Conjugate the pair so that x*y becomes exactly target; the pair members
// stay within their own classes.
std::optional<std::pair<PElem, PElem>> place_product(const Group& g, PElem x, PElem y,
                                                     const PElem& target) {
  PElem w = mul(x, y);
  if (class_id(g, w) != class_id(g, target)) return std::nullopt;
  auto h = sl2_conjugating_matrix(w.rep, target.rep);
  if (!h && !g.even()) h = sl2_conjugating_matrix(w.rep, target.rep.negated());
  if (!h) return std::nullopt;
  PElem xc = canon(x.rep.conjugated_by(*h)), yc = canon(y.rep.conjugated_by(*h));
  if (!(mul(xc, yc) == target)) return std::nullopt;
  return std::make_pair(xc, yc);
}

}  // namespace

std::optional<GenCertificate> product_of_conjugate_generators(const Group& g, const PElem& z,
                                                              bool unipotent_factors,
                                                              uint64_t seed) {
  if (is_identity(z)) throw std::invalid_argument("only non-trivial elements factor");
  if (g.q() <= 3) throw std::invalid_argument("factorizations require q > 3");
  const Field& F = g.F();
  FieldElem gamma = trace(z);
  FieldElem two = F.from_int(2);

  auto finish = [&](PElem x, PElem y) -> std::optional<GenCertificate> {
    // twist between the two unipotent product classes when needed
    for (int twist = 0; twist < 2; ++twist) {
      auto placed = place_product(g, x, y, z);
      if (placed) {
        auto H = generated_subgroup(g, placed->first, placed->second);
        if (H.size() == g.order)
          return GenCertificate{{placed->first, placed->second}, CertRelation::Pair, H.size()};
        return std::nullopt;
      }
      if (g.even()) break;
      x = canon(conjugate_by_extension_generator(g, x.rep));
      y = canon(conjugate_by_extension_generator(g, y.rep));
    }
    return std::nullopt;
  };

  if (unipotent_factors) {
    if (g.even()) return std::nullopt;  // even-q unipotents are involutions
    if (elem_type(g, z) == ElemType::Unipotent) {
      if (F.e() != 1) return std::nullopt;
      auto triple = generating_triple_in_class(g, class_id(g, inv(z)), seed);
      if (!triple) return std::nullopt;
      // x y z' = 1 with z' in the class of z^-1, so x y = z'^-1 ~ z
      return finish(triple->elements[0], triple->elements[1]);
    }
    uint64_t n = order(g, z);
    if (g.q() == 9) return std::nullopt;
    if (!(is_q_good(g.q(), n) && is_q_minimal(g.q(), n))) return std::nullopt;
    for (FieldElem gp : {gamma, -gamma}) {
      if (!F.is_square(two - gp)) continue;  // conjugate unipotent factors force 2 - tr square
      if (is_singular(two, two, gp)) continue;
      TraceTriple t = realize_trace_triple(g, two, two, gp);
      PElem x = canon(t.a), y = canon(t.b);
      if (is_identity(x) || is_identity(y)) continue;
      if (class_id(g, x) != class_id(g, y)) continue;
      if (auto c = finish(x, y)) return c;
    }
    return std::nullopt;
  }

  // Semisimple conjugate factors whenever they exist; conjugate unipotent
  // factors as the fallback for the small odd q where they do not.
  std::vector<FieldElem> alphas;
  for (uint64_t t : semisimple_orders_desc(g)) {
    if (t == 2) continue;  // involution pairs only span dihedral groups
    for (FieldElem a : trace_set(g, t)) alphas.push_back(a);
  }
  if (!g.even()) {
    alphas.push_back(two);
    alphas.push_back(-two);
  }
  for (FieldElem alpha : alphas) {
    for (FieldElem gp : {gamma, -gamma}) {
      if (is_singular(alpha, alpha, gp)) continue;
      TraceTriple t = realize_trace_triple(g, alpha, alpha, gp);
      PElem x = canon(t.a), y = canon(t.b);
      if (is_identity(x) || is_identity(y)) continue;
      if (class_id(g, x) != class_id(g, y)) continue;
      if (auto c = finish(x, y)) return c;
      if (gp == -gp) break;
    }
  }
  return std::nullopt;
}

}  // namespace psl2q
