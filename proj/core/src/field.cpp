#include "psl2q/field.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <map>
#include <memory>
#include <mutex>
#include <numeric>
#include <stdexcept>

namespace psl2q {

namespace {

constexpr uint64_t kMaxQ = uint64_t{1} << 20;
constexpr uint32_t kMaxDigits = 24;  // enough for e <= 20 plus slack

bool is_prime_u64(uint64_t n) {
  if (n < 2) return false;
  for (uint64_t d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

std::vector<std::pair<uint64_t, uint32_t>> factorize(uint64_t n) {
  std::vector<std::pair<uint64_t, uint32_t>> out;
  for (uint64_t d = 2; d * d <= n; ++d) {
    if (n % d == 0) {
      uint32_t m = 0;
      while (n % d == 0) n /= d, ++m;
      out.emplace_back(d, m);
    }
  }
  if (n > 1) out.emplace_back(n, 1);
  return out;
}

// --- dense polynomial arithmetic over F_p, used only while searching for the
// --- defining polynomial of a base field.

using Poly = std::vector<uint64_t>;  // low degree first, no trailing zeros

void trim(Poly& a) {
  while (!a.empty() && a.back() == 0) a.pop_back();
}

Poly poly_mulmod(const Poly& a, const Poly& b, const Poly& f, uint64_t p) {
  if (a.empty() || b.empty()) return {};
  Poly acc(a.size() + b.size() - 1, 0);
  for (size_t i = 0; i < a.size(); ++i) {
    if (!a[i]) continue;
    for (size_t j = 0; j < b.size(); ++j)
      acc[i + j] = (acc[i + j] + a[i] * b[j]) % p;
  }
  const size_t e = f.size() - 1;  // f monic of degree e
  for (size_t i = acc.size(); i-- > e;) {
    uint64_t t = acc[i];
    if (!t) continue;
    acc[i] = 0;
    for (size_t j = 0; j < e; ++j)
      acc[i - e + j] = (acc[i - e + j] + t * (p - f[j])) % p;
  }
  acc.resize(e);
  trim(acc);
  return acc;
}

Poly poly_powmod(Poly base, uint64_t n, const Poly& f, uint64_t p) {
  Poly r{1};
  while (n) {
    if (n & 1) r = poly_mulmod(r, base, f, p);
    base = poly_mulmod(base, base, f, p);
    n >>= 1;
  }
  return r;
}

Poly poly_gcd(Poly a, Poly b, uint64_t p) {
  auto inv_mod_p = [p](uint64_t x) {
    // extended Euclid in Z
    int64_t t = 0, nt = 1, r = (int64_t)p, nr = (int64_t)x;
    while (nr) {
      int64_t qq = r / nr;
      std::swap(t -= qq * nt, nt);
      std::swap(r -= qq * nr, nr);
    }
    return (uint64_t)((t % (int64_t)p + (int64_t)p) % (int64_t)p);
  };
  while (!b.empty()) {
    // a mod b with b made monic first
    uint64_t lead_inv = inv_mod_p(b.back());
    Poly bm = b;
    for (auto& c : bm) c = c * lead_inv % p;
    // long division remainder of a by bm
    Poly r = a;
    while (r.size() >= bm.size() && !r.empty()) {
      uint64_t t = r.back();
      size_t shift = r.size() - bm.size();
      if (t) {
        for (size_t j = 0; j < bm.size(); ++j)
          r[shift + j] = (r[shift + j] + t * (p - bm[j])) % p;
      }
      r.pop_back();
      trim(r);
      if (r.size() < bm.size()) break;
    }
    a = std::move(b);
    b = std::move(r);
  }
  return a;
}

// x^(p^k) mod f, by k-fold Frobenius powering.
Poly poly_frobenius_iter(const Poly& f, uint64_t p, uint32_t k) {
  Poly r{0, 1};  // x
  for (uint32_t i = 0; i < k; ++i) r = poly_powmod(r, p, f, p);
  return r;
}

// Monic f of degree e >= 2 over F_p: irreducible iff x^(p^e) == x (mod f) and
// gcd(x^(p^(e/l)) - x, f) = 1 for every prime l dividing e.
bool poly_irreducible(const Poly& f, uint64_t p) {
  const uint32_t e = (uint32_t)f.size() - 1;
  Poly xe = poly_frobenius_iter(f, p, e);
  Poly x{0, 1};
  if (xe != x) return false;
  for (auto [l, m] : factorize(e)) {
    (void)m;
    Poly xk = poly_frobenius_iter(f, p, e / (uint32_t)l);
    // xk - x
    Poly diff = xk;
    if (diff.size() < 2) diff.resize(2, 0);
    diff[1] = (diff[1] + p - 1) % p;
    trim(diff);
    Poly g = poly_gcd(diff, f, p);
    if (!(g.size() == 1)) return false;
  }
  return true;
}

}  // namespace

// ---------------------------------------------------------------------------
// construction and interning

struct FieldRegistry {
  std::mutex mu;
  std::map<std::pair<uint64_t, uint32_t>, std::unique_ptr<Field>> base_fields;
  std::vector<std::unique_ptr<Field>> extensions;

  static FieldRegistry& instance() {
    static FieldRegistry r;
    return r;
  }

  const Field& get_base(uint64_t p, uint32_t e) {
    std::lock_guard<std::mutex> lock(mu);
    auto key = std::make_pair(p, e);
    auto it = base_fields.find(key);
    if (it != base_fields.end()) return *it->second;
    auto f = std::unique_ptr<Field>(new Field());
    f->init_base(p, e);
    return *(base_fields[key] = std::move(f));
  }

  const Field& get_ext(const Field& base) {
    std::lock_guard<std::mutex> lock(mu);
    if (base.ext_) return *base.ext_;
    auto f = std::unique_ptr<Field>(new Field());
    f->init_ext(base);
    base.ext_ = f.get();
    extensions.push_back(std::move(f));
    return *base.ext_;
  }
};

const Field& Field::make(uint64_t p, uint32_t e) {
  if (!is_prime_u64(p)) throw std::invalid_argument("field characteristic must be prime");
  if (e == 0) throw std::invalid_argument("extension degree must be >= 1");
  uint64_t q = 1;
  for (uint32_t i = 0; i < e; ++i) {
    q *= p;
    if (q > kMaxQ) throw std::invalid_argument("field size exceeds the supported 2^20 bound");
  }
  return FieldRegistry::instance().get_base(p, e);
}

const Field& Field::quad_ext() const {
  if (is_extension()) throw std::invalid_argument("extensions beyond F_{q^2} are not supported");
  return FieldRegistry::instance().get_ext(*this);
}

void Field::init_base(uint64_t p, uint32_t e) {
  p_ = p;
  e_ = e;
  q_ = 1;
  for (uint32_t i = 0; i < e; ++i) q_ *= p;

  if (e == 1) {
    poly_ = {0, 1};  // x
  } else {
    // Scan monic candidates by ascending integer encoding of the coefficient
    // vector (sum c_i p^i) and keep the first irreducible.
    poly_.assign(e + 1, 0);
    poly_[e] = 1;
    bool found = false;
    for (uint64_t t = 0; t < q_ && !found; ++t) {
      uint64_t v = t;
      for (uint32_t i = 0; i < e; ++i) {
        poly_[i] = v % p;
        v /= p;
      }
      if (poly_irreducible(poly_, p)) found = true;
    }
    if (!found) throw std::logic_error("no irreducible polynomial found");  // cannot happen
  }
  init_mult_structure();
}

void Field::init_ext(const Field& base) {
  base_ = &base;
  p_ = base.p_;
  e_ = 2 * base.e_;
  q_ = base.q_ * base.q_;
  if (base.even_char()) {
    // z^2 + z + nu, nu the enc-smallest element of absolute trace 1
    uint64_t nu = 0;
    for (uint64_t c = 0; c < base.q_; ++c) {
      FieldElem a = base.from_code(c);
      FieldElem acc = a, sq = a;  // absolute trace: sum of a^(2^i)
      for (uint32_t i = 1; i < base.e_; ++i) {
        sq = base.mul(sq, sq);
        acc = base.add(acc, sq);
      }
      if (acc == base.one()) {
        nu = c;
        break;
      }
    }
    ext_s_ = 1;  // z^2 = z + nu
    ext_t_ = nu;
  } else {
    ext_s_ = 0;  // z^2 = nu
    ext_t_ = base.nonsquare_code_;
  }
  poly_ = {ext_t_, ext_s_};
  init_mult_structure();
}

void Field::init_mult_structure() {
  unit_group_factors_ = factorize(q_ - 1);
  if (p_ != 2) {
    for (uint64_t c = 1; c < q_; ++c) {
      if (!is_square(FieldElem{this, c})) {
        nonsquare_code_ = c;
        break;
      }
    }
  }
  for (uint64_t c = 1; c < q_; ++c) {
    FieldElem g{this, c};
    bool ok = true;
    for (auto [l, m] : unit_group_factors_) {
      (void)m;
      if (pow(g, (q_ - 1) / l) == one()) {
        ok = false;
        break;
      }
    }
    if (ok) {
      generator_code_ = c;
      break;
    }
  }
}

// ---------------------------------------------------------------------------
// base-field digit arithmetic

void Field::decode(uint64_t code, uint64_t* digits) const {
  for (uint32_t i = 0; i < e_; ++i) {
    digits[i] = code % p_;
    code /= p_;
  }
}

uint64_t Field::encode(const uint64_t* digits) const {
  uint64_t code = 0;
  for (uint32_t i = e_; i-- > 0;) code = code * p_ + digits[i];
  return code;
}

uint64_t Field::mul_base(uint64_t x, uint64_t y) const {
  if (e_ == 1) return x * y % p_;
  std::array<uint64_t, kMaxDigits> a{}, b{};
  std::array<uint64_t, 2 * kMaxDigits> acc{};
  decode(x, a.data());
  decode(y, b.data());
  for (uint32_t i = 0; i < e_; ++i) {
    if (!a[i]) continue;
    for (uint32_t j = 0; j < e_; ++j) acc[i + j] = (acc[i + j] + a[i] * b[j]) % p_;
  }
  for (uint32_t i = 2 * e_ - 1; i-- > e_;) {
    uint64_t t = acc[i];
    if (!t) continue;
    acc[i] = 0;
    for (uint32_t j = 0; j < e_; ++j)
      acc[i - e_ + j] = (acc[i - e_ + j] + t * (p_ - poly_[j])) % p_;
  }
  return encode(acc.data());
}

// ---------------------------------------------------------------------------
// ring operations

FieldElem Field::from_int(int64_t v) const {
  if (is_extension()) return embed(base_->from_int(v));
  int64_t r = v % (int64_t)p_;
  if (r < 0) r += (int64_t)p_;
  return {this, (uint64_t)r};
}

FieldElem Field::add(FieldElem x, FieldElem y) const {
  assert(x.field == this && y.field == this);
  if (is_extension()) {
    uint64_t bq = base_->q_;
    FieldElem lo = base_->add({base_, x.code % bq}, {base_, y.code % bq});
    FieldElem hi = base_->add({base_, x.code / bq}, {base_, y.code / bq});
    return {this, lo.code + bq * hi.code};
  }
  if (e_ == 1) return {this, (x.code + y.code) % p_};
  std::array<uint64_t, kMaxDigits> a{}, b{};
  decode(x.code, a.data());
  decode(y.code, b.data());
  for (uint32_t i = 0; i < e_; ++i) a[i] = (a[i] + b[i]) % p_;
  return {this, encode(a.data())};
}

FieldElem Field::neg(FieldElem x) const {
  assert(x.field == this);
  if (is_extension()) {
    uint64_t bq = base_->q_;
    FieldElem lo = base_->neg({base_, x.code % bq});
    FieldElem hi = base_->neg({base_, x.code / bq});
    return {this, lo.code + bq * hi.code};
  }
  if (e_ == 1) return {this, x.code ? p_ - x.code : 0};
  std::array<uint64_t, kMaxDigits> a{};
  decode(x.code, a.data());
  for (uint32_t i = 0; i < e_; ++i) a[i] = a[i] ? p_ - a[i] : 0;
  return {this, encode(a.data())};
}

FieldElem Field::sub(FieldElem x, FieldElem y) const { return add(x, neg(y)); }

FieldElem Field::mul(FieldElem x, FieldElem y) const {
  assert(x.field == this && y.field == this);
  if (!is_extension()) return {this, mul_base(x.code, y.code)};
  const Field& K = *base_;
  uint64_t bq = K.q_;
  FieldElem a0{&K, x.code % bq}, a1{&K, x.code / bq};
  FieldElem b0{&K, y.code % bq}, b1{&K, y.code / bq};
  FieldElem s{&K, ext_s_}, t{&K, ext_t_};
  FieldElem cross = K.mul(a1, b1);
  FieldElem lo = K.add(K.mul(a0, b0), K.mul(t, cross));
  FieldElem hi = K.add(K.add(K.mul(a0, b1), K.mul(a1, b0)), K.mul(s, cross));
  return {this, lo.code + bq * hi.code};
}

FieldElem Field::pow(FieldElem x, uint64_t n) const {
  FieldElem r = one(), b = x;
  while (n) {
    if (n & 1) r = mul(r, b);
    b = mul(b, b);
    n >>= 1;
  }
  return r;
}

FieldElem Field::inv(FieldElem x) const {
  if (x.code == 0) throw std::domain_error("division by zero in finite field");
  if (!is_extension()) return pow(x, q_ - 2);
  // conj(x) / norm(x), with the norm landing in the base field
  FieldElem cx = frobenius_q(x);
  FieldElem n = mul(x, cx);
  assert(in_base(n));
  FieldElem nb = to_base(n);
  return mul(cx, embed(base_->inv(nb)));
}

// ---------------------------------------------------------------------------
// extension plumbing

FieldElem Field::embed(FieldElem base_elem) const {
  assert(is_extension() && base_elem.field == base_);
  return {this, base_elem.code};
}

FieldElem Field::frobenius_q(FieldElem x) const {
  // conjugate a0 + a1 z -> (a0 + s a1) - a1 z, the other root of the quadratic
  assert(is_extension() && x.field == this);
  const Field& K = *base_;
  uint64_t bq = K.q_;
  FieldElem a0{&K, x.code % bq}, a1{&K, x.code / bq};
  FieldElem s{&K, ext_s_};
  FieldElem lo = K.add(a0, K.mul(s, a1));
  FieldElem hi = K.neg(a1);
  return {this, lo.code + bq * hi.code};
}

bool Field::in_base(FieldElem x) const {
  assert(is_extension() && x.field == this);
  return x.code / base_->q_ == 0;
}

FieldElem Field::to_base(FieldElem x) const {
  assert(in_base(x));
  return {base_, x.code};
}

// ---------------------------------------------------------------------------
// squares, roots, quadratics

bool Field::is_square(FieldElem a) const {
  assert(a.field == this);
  if (even_char() || a.code == 0) return true;
  return pow(a, (q_ - 1) / 2) == one();
}

FieldElem Field::nonsquare() const {
  if (even_char()) throw std::domain_error("every element is a square in characteristic 2");
  return {this, nonsquare_code_};
}

std::optional<FieldElem> Field::sqrt(FieldElem a) const {
  assert(a.field == this);
  if (a.code == 0) return zero();
  if (even_char()) return pow(a, q_ / 2);  // Frobenius squaring is bijective
  if (!is_square(a)) return std::nullopt;

  // Tonelli-Shanks with the cached non-square as the 2-group seed.
  uint64_t m = q_ - 1;
  uint32_t s = 0;
  while ((m & 1) == 0) m >>= 1, ++s;
  FieldElem z = pow(nonsquare(), m);
  FieldElem r = pow(a, (m + 1) / 2);
  FieldElem t = pow(a, m);
  while (!(t == one())) {
    uint32_t i = 0;
    FieldElem t2 = t;
    while (!(t2 == one())) {
      t2 = mul(t2, t2);
      ++i;
    }
    FieldElem b = z;
    for (uint32_t j = 0; j + i + 1 < s; ++j) b = mul(b, b);
    r = mul(r, b);
    FieldElem b2 = mul(b, b);
    t = mul(t, b2);
    z = b2;
    s = i;
  }
  FieldElem other = neg(r);
  return std::min(r, other);
}

std::vector<FieldElem> Field::solve_monic_quadratic(FieldElem b, FieldElem c) const {
  assert(b.field == this && c.field == this);
  std::vector<FieldElem> roots;
  if (!even_char()) {
    FieldElem disc = sub(mul(b, b), mul(from_int(4), c));
    auto d = sqrt(disc);
    if (!d) return roots;
    FieldElem inv2 = inv(from_int(2));
    if (d->code == 0) {
      roots.push_back(mul(neg(b), inv2));
    } else {
      roots.push_back(mul(sub(*d, b), inv2));
      roots.push_back(mul(sub(neg(*d), b), inv2));
    }
  } else {
    if (b.code == 0) {
      roots.push_back(*sqrt(c));  // double root
    } else {
      // substitute z = b w:  w^2 + w = c / b^2, an F_2-linear equation in the
      // code bits (codes are coordinates over F_2 for char-2 towers).
      FieldElem u = mul(c, inv(mul(b, b)));
      uint32_t m = (uint32_t)std::countr_zero(q_);
      std::vector<uint64_t> rows(m, 0);
      for (uint32_t j = 0; j < m; ++j) {
        FieldElem bj{this, uint64_t{1} << j};
        FieldElem im = add(mul(bj, bj), bj);
        for (uint32_t i = 0; i < m; ++i)
          if ((im.code >> i) & 1) rows[i] |= uint64_t{1} << j;
      }
      for (uint32_t i = 0; i < m; ++i) rows[i] |= ((u.code >> i) & 1) << m;
      // Gaussian elimination over F_2
      std::vector<int> pivot_of_col(m, -1);
      uint32_t rank = 0;
      for (uint32_t col = 0; col < m && rank < m; ++col) {
        uint32_t pr = rank;
        while (pr < m && !((rows[pr] >> col) & 1)) ++pr;
        if (pr == m) continue;
        std::swap(rows[rank], rows[pr]);
        for (uint32_t i = 0; i < m; ++i)
          if (i != rank && ((rows[i] >> col) & 1)) rows[i] ^= rows[rank];
        pivot_of_col[col] = (int)rank;
        ++rank;
      }
      for (uint32_t i = rank; i < m; ++i)
        if ((rows[i] >> m) & 1) return roots;  // inconsistent: no solution
      uint64_t w = 0;
      for (uint32_t col = 0; col < m; ++col)
        if (pivot_of_col[col] >= 0 && ((rows[pivot_of_col[col]] >> m) & 1))
          w |= uint64_t{1} << col;
      FieldElem w0{this, w};
      roots.push_back(mul(b, w0));
      roots.push_back(add(mul(b, w0), b));
    }
  }
  std::sort(roots.begin(), roots.end());
  roots.erase(std::unique(roots.begin(), roots.end()), roots.end());
  return roots;
}

std::vector<FieldElem> Field::primitive_roots(uint64_t n) const {
  if (n == 0) throw std::invalid_argument("order must be positive");
  std::vector<FieldElem> out;
  if ((q_ - 1) % n != 0) return out;
  FieldElem h = pow(FieldElem{this, generator_code_}, (q_ - 1) / n);
  FieldElem cur = one();
  for (uint64_t k = 1; k <= n; ++k) {
    cur = mul(cur, h);
    if (std::gcd(k, n) == 1) out.push_back(cur);
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace psl2q
