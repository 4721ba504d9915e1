#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <gmpxx.h>

namespace cq {

using Rational = mpq_class;

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct DivisionByZero : Error {
  using Error::Error;
};
struct ConductorMismatch : Error {
  using Error::Error;
};
struct OrderMismatch : Error {
  using Error::Error;
};
struct DomainError : Error {
  using Error::Error;
};
struct ParseError : Error {
  using Error::Error;
};

// Element of Q(zeta_m) in the power basis 1, z, ..., z^(phi(m)-1), reduced mod
// the m-th cyclotomic polynomial. Conductors 1 and 2 canonicalize to m = 1, so
// rationals are always stored with m = 1 and lift implicitly into larger fields.
class Scalar {
 public:
  Scalar() : m_(1), c_(1, Rational(0)) {}

  static Scalar integer(long n);
  static Scalar rational(const Rational& q);
  static Scalar rational(long num, long den);
  static Scalar zeta(std::uint32_t m);
  static Scalar zeta_pow(std::uint32_t m, std::int64_t k);
  static Scalar from_coeffs(std::uint32_t m, std::vector<Rational> coeffs);

  std::uint32_t conductor() const { return m_; }
  bool is_zero() const;
  bool is_rational() const;
  // Requires is_rational().
  Rational rational_value() const;
  const std::vector<Rational>& coeffs() const { return c_; }

  Scalar operator-() const;
  Scalar& operator+=(const Scalar& o);
  Scalar& operator-=(const Scalar& o);
  Scalar& operator*=(const Scalar& o);
  friend Scalar operator+(Scalar a, const Scalar& b) { return a += b; }
  friend Scalar operator-(Scalar a, const Scalar& b) { return a -= b; }
  friend Scalar operator*(Scalar a, const Scalar& b) { return a *= b; }
  Scalar inverse() const;
  Scalar pow(std::int64_t e) const;

  bool operator==(const Scalar& o) const;
  bool operator!=(const Scalar& o) const { return !(*this == o); }

  std::string str() const;
  // Accepts sums of terms `r`, `r*z^k`, `z^k` with exact rational r.
  static Scalar parse(std::string_view text, std::uint32_t conductor);

 private:
  std::uint32_t m_;
  std::vector<Rational> c_;  // size = phi(m_)

  static void align(Scalar& a, Scalar& b);
  void reduce_tail(std::vector<Rational>& raw) const;
};

// Truncated power series K[lambda]/(lambda^order) with cyclotomic coefficients.
class TruncSeries {
 public:
  TruncSeries() : c_(1) {}
  explicit TruncSeries(std::uint32_t order) : c_(order) {
    if (order == 0) throw DomainError("series order must be positive");
  }
  static TruncSeries constant(std::uint32_t order, Scalar s);
  static TruncSeries lambda(std::uint32_t order, std::uint32_t power = 1);

  std::uint32_t order() const { return static_cast<std::uint32_t>(c_.size()); }
  const Scalar& coeff(std::uint32_t k) const;
  void set_coeff(std::uint32_t k, Scalar s);
  bool is_zero() const;
  bool is_one() const;

  TruncSeries operator-() const;
  TruncSeries& operator+=(const TruncSeries& o);
  TruncSeries& operator-=(const TruncSeries& o);
  friend TruncSeries operator+(TruncSeries a, const TruncSeries& b) { return a += b; }
  friend TruncSeries operator-(TruncSeries a, const TruncSeries& b) { return a -= b; }
  friend TruncSeries operator*(const TruncSeries& a, const TruncSeries& b);
  TruncSeries& operator*=(const TruncSeries& o) { return *this = *this * o; }
  TruncSeries scaled(const Scalar& s) const;

  // Requires coeff(0) != 0.
  TruncSeries inverse() const;
  // Requires coeff(0) == 0.
  TruncSeries exp() const;
  // Requires coeff(0) == 0 and order() >= 2. Divides by lambda:
  // result.order() == order() - 1 and result.coeff(k) == coeff(k + 1).
  TruncSeries lambda_shift_down() const;
  TruncSeries truncated(std::uint32_t new_order) const;
  // Truncates or zero-extends to the requested order.
  TruncSeries resized(std::uint32_t new_order) const;

  bool operator==(const TruncSeries& o) const;
  bool operator!=(const TruncSeries& o) const { return !(*this == o); }

  std::string str() const;

 private:
  std::vector<Scalar> c_;
  void check_same_order(const TruncSeries& o) const;
};

Rational parse_rational(std::string_view text);
std::string rational_str(const Rational& q);

}  // namespace cq
