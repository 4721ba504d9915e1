#include "colorquant/scalars.hpp"

#include <algorithm>
#include <map>
#include <sstream>

namespace cq {

namespace {

using Poly = std::vector<Rational>;  // coefficient i belongs to x^i, trimmed

void trim(Poly& p) {
  while (!p.empty() && p.back() == 0) p.pop_back();
}

Poly poly_mul(const Poly& a, const Poly& b) {
  if (a.empty() || b.empty()) return {};
  Poly r(a.size() + b.size() - 1, Rational(0));
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) r[i + j] += a[i] * b[j];
  trim(r);
  return r;
}

// Division with remainder; divisor must be nonzero.
void poly_divmod(const Poly& a, const Poly& b, Poly& q, Poly& r) {
  r = a;
  trim(r);
  q.clear();
  if (b.empty()) throw DivisionByZero("polynomial division by zero");
  if (r.size() >= b.size()) q.assign(r.size() - b.size() + 1, Rational(0));
  const Rational& lead = b.back();
  while (r.size() >= b.size()) {
    std::size_t shift = r.size() - b.size();
    Rational c = r.back() / lead;
    q[shift] = c;
    for (std::size_t i = 0; i < b.size(); ++i) r[shift + i] -= c * b[i];
    trim(r);
    if (!r.empty() && r.size() >= b.size() + shift + 1)
      throw Error("polynomial division failed to reduce degree");
  }
}

// m-th cyclotomic polynomial: (x^m - 1) divided by the product of all proper
// cyclotomic divisors. Exact division over Q, memoized.
const Poly& cyclotomic(std::uint32_t m) {
  static std::map<std::uint32_t, Poly> cache;
  auto it = cache.find(m);
  if (it != cache.end()) return it->second;
  Poly num(m + 1, Rational(0));
  num[0] = -1;
  num[m] = 1;
  Poly den{Rational(1)};
  for (std::uint32_t d = 1; d < m; ++d)
    if (m % d == 0) den = poly_mul(den, cyclotomic(d));
  Poly q, r;
  poly_divmod(num, den, q, r);
  if (!r.empty()) throw Error("cyclotomic division left a remainder");
  return cache.emplace(m, std::move(q)).first->second;
}

// u*a + v*b == g (v is not needed by callers).
void ext_gcd(Poly a, Poly b, Poly& g, Poly& u) {
  Poly s0{Rational(1)}, s1;
  trim(a);
  trim(b);
  while (!b.empty()) {
    Poly q, r;
    poly_divmod(a, b, q, r);
    Poly s2 = s0;
    Poly qs = poly_mul(q, s1);
    if (s2.size() < qs.size()) s2.resize(qs.size(), Rational(0));
    for (std::size_t i = 0; i < qs.size(); ++i) s2[i] -= qs[i];
    trim(s2);
    a = std::move(b);
    b = std::move(r);
    s0 = std::move(s1);
    s1 = std::move(s2);
  }
  g = std::move(a);
  u = std::move(s0);
}

}  // namespace

void Scalar::reduce_tail(std::vector<Rational>& raw) const {
  const Poly& phi_poly = cyclotomic(m_);
  std::size_t deg = phi_poly.size() - 1;  // monic of this degree
  while (raw.size() > deg) {
    Rational top = raw.back();
    raw.pop_back();
    if (top == 0) continue;
    std::size_t shift = raw.size() - deg;
    for (std::size_t i = 0; i < deg; ++i) raw[shift + i] -= top * phi_poly[i];
  }
  raw.resize(deg, Rational(0));
}

Scalar Scalar::from_coeffs(std::uint32_t m, std::vector<Rational> coeffs) {
  if (m == 0) throw DomainError("conductor must be positive");
  Scalar s;
  if (m <= 2) {
    // Both collapse into Q: z = 1 for m = 1, z = -1 for m = 2.
    Rational v(0), p(1);
    for (auto& c : coeffs) {
      v += c * p;
      if (m == 2) p = -p;
    }
    s.m_ = 1;
    s.c_ = {v};
    return s;
  }
  s.m_ = m;
  s.reduce_tail(coeffs);
  s.c_ = std::move(coeffs);
  return s;
}

Scalar Scalar::integer(long n) { return rational(Rational(n)); }

Scalar Scalar::rational(const Rational& q) {
  Scalar s;
  s.c_[0] = q;
  return s;
}

Scalar Scalar::rational(long num, long den) {
  if (den == 0) throw DivisionByZero("rational with zero denominator");
  Rational q(num, den);
  q.canonicalize();
  return rational(q);
}

Scalar Scalar::zeta(std::uint32_t m) { return zeta_pow(m, 1); }

Scalar Scalar::zeta_pow(std::uint32_t m, std::int64_t k) {
  if (m == 0) throw DomainError("conductor must be positive");
  std::int64_t r = k % static_cast<std::int64_t>(m);
  if (r < 0) r += m;
  std::vector<Rational> raw(static_cast<std::size_t>(r) + 1, Rational(0));
  raw.back() = 1;
  return from_coeffs(m, std::move(raw));
}

bool Scalar::is_zero() const {
  for (const auto& c : c_)
    if (c != 0) return false;
  return true;
}

bool Scalar::is_rational() const {
  for (std::size_t i = 1; i < c_.size(); ++i)
    if (c_[i] != 0) return false;
  return true;
}

Rational Scalar::rational_value() const {
  if (!is_rational()) throw DomainError("scalar is not rational");
  return c_[0];
}

void Scalar::align(Scalar& a, Scalar& b) {
  if (a.m_ == b.m_) return;
  if (a.m_ == 1) {
    Rational v = a.c_[0];
    a.m_ = b.m_;
    a.c_.assign(b.c_.size(), Rational(0));
    a.c_[0] = v;
    return;
  }
  if (b.m_ == 1) {
    align(b, a);
    return;
  }
  throw ConductorMismatch("conductor mismatch: " + std::to_string(a.m_) +
                          " vs " + std::to_string(b.m_));
}

Scalar Scalar::operator-() const {
  Scalar r = *this;
  for (auto& c : r.c_) c = -c;
  return r;
}

Scalar& Scalar::operator+=(const Scalar& o) {
  Scalar rhs = o;
  align(*this, rhs);
  for (std::size_t i = 0; i < c_.size(); ++i) c_[i] += rhs.c_[i];
  return *this;
}

Scalar& Scalar::operator-=(const Scalar& o) {
  Scalar rhs = o;
  align(*this, rhs);
  for (std::size_t i = 0; i < c_.size(); ++i) c_[i] -= rhs.c_[i];
  return *this;
}

Scalar& Scalar::operator*=(const Scalar& o) {
  Scalar rhs = o;
  align(*this, rhs);
  if (m_ == 1) {
    c_[0] *= rhs.c_[0];
    return *this;
  }
  std::vector<Rational> raw(2 * c_.size() - 1, Rational(0));
  for (std::size_t i = 0; i < c_.size(); ++i) {
    if (c_[i] == 0) continue;
    for (std::size_t j = 0; j < rhs.c_.size(); ++j)
      raw[i + j] += c_[i] * rhs.c_[j];
  }
  reduce_tail(raw);
  c_ = std::move(raw);
  return *this;
}

Scalar Scalar::inverse() const {
  if (is_zero()) throw DivisionByZero("inverse of zero scalar");
  if (m_ == 1) {
    Scalar r;
    r.c_[0] = 1 / c_[0];
    return r;
  }
  Poly a(c_.begin(), c_.end());
  trim(a);
  Poly g, u;
  ext_gcd(a, cyclotomic(m_), g, u);
  if (g.size() != 1)
    throw Error("scalar inverse: nonconstant gcd with cyclotomic modulus");
  std::vector<Rational> raw(u.begin(), u.end());
  for (auto& c : raw) c /= g[0];
  raw.resize(std::max(raw.size(), c_.size()), Rational(0));
  Scalar r;
  r.m_ = m_;
  r.reduce_tail(raw);
  r.c_ = std::move(raw);
  return r;
}

Scalar Scalar::pow(std::int64_t e) const {
  if (e < 0) return inverse().pow(-e);
  Scalar base = *this, acc = Scalar::integer(1);
  std::uint64_t n = static_cast<std::uint64_t>(e);
  while (n > 0) {
    if (n & 1) acc *= base;
    base *= base;
    n >>= 1;
  }
  return acc;
}

bool Scalar::operator==(const Scalar& o) const {
  Scalar a = *this, b = o;
  align(a, b);
  return a.c_ == b.c_;
}

std::string Scalar::str() const {
  if (is_zero()) return "0";
  std::string out;
  for (std::size_t i = 0; i < c_.size(); ++i) {
    const Rational& q = c_[i];
    if (q == 0) continue;
    Rational mag = q < 0 ? Rational(-q) : q;
    if (out.empty()) {
      if (q < 0) out += "-";
    } else {
      out += q < 0 ? "-" : "+";
    }
    bool unit = (mag == 1);
    if (i == 0) {
      out += rational_str(mag);
    } else {
      if (!unit) {
        out += rational_str(mag);
        out += "*";
      }
      out += "z";
      if (i > 1) out += "^" + std::to_string(i);
    }
  }
  return out;
}

Rational parse_rational(std::string_view text) {
  std::string s(text);
  if (s.empty()) throw ParseError("empty rational literal");
  mpq_t tmp;
  mpq_init(tmp);
  if (mpq_set_str(tmp, s.c_str(), 10) != 0) {
    mpq_clear(tmp);
    throw ParseError("bad rational literal: " + s);
  }
  if (mpz_sgn(mpq_denref(tmp)) == 0) {
    mpq_clear(tmp);
    throw DivisionByZero("rational with zero denominator: " + s);
  }
  mpq_canonicalize(tmp);
  Rational q(tmp);
  mpq_clear(tmp);
  return q;
}

std::string rational_str(const Rational& q) { return q.get_str(); }

Scalar Scalar::parse(std::string_view text, std::uint32_t conductor) {
  std::string s;
  s.reserve(text.size());
  for (char ch : text)
    if (!std::isspace(static_cast<unsigned char>(ch))) s.push_back(ch);
  if (s.empty()) throw ParseError("empty scalar literal");

  Scalar total = Scalar::integer(0);
  std::size_t pos = 0;
  while (pos < s.size()) {
    bool negative = false;
    if (s[pos] == '+' || s[pos] == '-') {
      negative = (s[pos] == '-');
      ++pos;
      if (pos == s.size()) throw ParseError("dangling sign in scalar: " + s);
    }
    Rational coeff(1);
    bool saw_number = false;
    if (std::isdigit(static_cast<unsigned char>(s[pos]))) {
      std::size_t start = pos;
      while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) ++pos;
      if (pos < s.size() && s[pos] == '/') {
        ++pos;
        if (pos == s.size() || !std::isdigit(static_cast<unsigned char>(s[pos])))
          throw ParseError("bad denominator in scalar: " + s);
        while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) ++pos;
      }
      coeff = parse_rational(s.substr(start, pos - start));
      saw_number = true;
      if (pos < s.size() && s[pos] == '*') ++pos;
    }
    std::int64_t zpow = 0;
    bool saw_z = false;
    if (pos < s.size() && s[pos] == 'z') {
      saw_z = true;
      zpow = 1;
      ++pos;
      if (pos < s.size() && s[pos] == '^') {
        ++pos;
        std::size_t start = pos;
        if (pos < s.size() && s[pos] == '-') ++pos;
        while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) ++pos;
        if (pos == start) throw ParseError("bad exponent in scalar: " + s);
        try {
          zpow = std::stoll(std::string(s.substr(start, pos - start)));
        } catch (const std::exception&) {
          throw ParseError("exponent out of range in scalar: " + s);
        }
      }
    }
    if (!saw_number && !saw_z)
      throw ParseError("expected term at position " + std::to_string(pos) +
                       " in scalar: " + s);
    if (negative) coeff = -coeff;
    Scalar term = saw_z ? Scalar::zeta_pow(conductor, zpow) : Scalar::integer(1);
    total += term * Scalar::rational(coeff);
    if (pos < s.size() && s[pos] != '+' && s[pos] != '-')
      throw ParseError("unexpected character '" + std::string(1, s[pos]) +
                       "' in scalar: " + s);
  }
  return total;
}

TruncSeries TruncSeries::constant(std::uint32_t order, Scalar s) {
  TruncSeries t(order);
  t.c_[0] = std::move(s);
  return t;
}

TruncSeries TruncSeries::lambda(std::uint32_t order, std::uint32_t power) {
  TruncSeries t(order);
  if (power < order) t.c_[power] = Scalar::integer(1);
  return t;
}

const Scalar& TruncSeries::coeff(std::uint32_t k) const {
  if (k >= c_.size()) throw DomainError("series coefficient out of range");
  return c_[k];
}

void TruncSeries::set_coeff(std::uint32_t k, Scalar s) {
  if (k >= c_.size()) throw DomainError("series coefficient out of range");
  c_[k] = std::move(s);
}

bool TruncSeries::is_zero() const {
  for (const auto& c : c_)
    if (!c.is_zero()) return false;
  return true;
}

bool TruncSeries::is_one() const {
  if (c_[0] != Scalar::integer(1)) return false;
  for (std::size_t i = 1; i < c_.size(); ++i)
    if (!c_[i].is_zero()) return false;
  return true;
}

void TruncSeries::check_same_order(const TruncSeries& o) const {
  if (c_.size() != o.c_.size())
    throw OrderMismatch("series order mismatch: " + std::to_string(c_.size()) +
                        " vs " + std::to_string(o.c_.size()));
}

TruncSeries TruncSeries::operator-() const {
  TruncSeries r = *this;
  for (auto& c : r.c_) c = -c;
  return r;
}

TruncSeries& TruncSeries::operator+=(const TruncSeries& o) {
  check_same_order(o);
  for (std::size_t i = 0; i < c_.size(); ++i) c_[i] += o.c_[i];
  return *this;
}

TruncSeries& TruncSeries::operator-=(const TruncSeries& o) {
  check_same_order(o);
  for (std::size_t i = 0; i < c_.size(); ++i) c_[i] -= o.c_[i];
  return *this;
}

TruncSeries operator*(const TruncSeries& a, const TruncSeries& b) {
  a.check_same_order(b);
  TruncSeries r(a.order());
  for (std::size_t i = 0; i < a.c_.size(); ++i) {
    if (a.c_[i].is_zero()) continue;
    for (std::size_t j = 0; i + j < b.c_.size(); ++j)
      r.c_[i + j] += a.c_[i] * b.c_[j];
  }
  return r;
}

TruncSeries TruncSeries::scaled(const Scalar& s) const {
  TruncSeries r = *this;
  for (auto& c : r.c_) c *= s;
  return r;
}

TruncSeries TruncSeries::inverse() const {
  if (c_[0].is_zero())
    throw DomainError("series inverse requires invertible constant term");
  Scalar lead_inv = c_[0].inverse();
  TruncSeries r(order());
  r.c_[0] = lead_inv;
  for (std::size_t k = 1; k < c_.size(); ++k) {
    Scalar acc = Scalar::integer(0);
    for (std::size_t i = 1; i <= k; ++i) acc += c_[i] * r.c_[k - i];
    r.c_[k] = -(lead_inv * acc);
  }
  return r;
}

TruncSeries TruncSeries::exp() const {
  if (!c_[0].is_zero())
    throw DomainError("series exp requires zero constant term");
  TruncSeries result = TruncSeries::constant(order(), Scalar::integer(1));
  TruncSeries term = result;
  for (std::uint32_t n = 1; n < order(); ++n) {
    term = term * *this;
    term = term.scaled(Scalar::rational(1, static_cast<long>(n)));
    result += term;
  }
  return result;
}

TruncSeries TruncSeries::lambda_shift_down() const {
  if (order() < 2) throw DomainError("series too short to shift down");
  if (!c_[0].is_zero())
    throw DomainError("series shift requires zero constant term");
  TruncSeries r(order() - 1);
  for (std::size_t k = 0; k + 1 < c_.size(); ++k) r.c_[k] = c_[k + 1];
  return r;
}

TruncSeries TruncSeries::truncated(std::uint32_t new_order) const {
  if (new_order == 0 || new_order > order())
    throw DomainError("bad truncation order");
  TruncSeries r(new_order);
  for (std::uint32_t k = 0; k < new_order; ++k) r.c_[k] = c_[k];
  return r;
}

TruncSeries TruncSeries::resized(std::uint32_t new_order) const {
  if (new_order == 0) throw DomainError("bad series order");
  TruncSeries r(new_order);
  for (std::uint32_t k = 0; k < std::min(new_order, order()); ++k)
    r.c_[k] = c_[k];
  return r;
}

bool TruncSeries::operator==(const TruncSeries& o) const {
  check_same_order(o);
  for (std::size_t i = 0; i < c_.size(); ++i)
    if (c_[i] != o.c_[i]) return false;
  return true;
}

std::string TruncSeries::str() const {
  if (is_zero()) return "0";
  std::string out;
  for (std::size_t k = 0; k < c_.size(); ++k) {
    if (c_[k].is_zero()) continue;
    if (!out.empty()) out += " + ";
    out += "(" + c_[k].str() + ")";
    if (k == 1) out += "*l";
    if (k > 1) out += "*l^" + std::to_string(k);
  }
  return out;
}

}  // namespace cq
