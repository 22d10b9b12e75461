#pragma once

#include <gmpxx.h>

#include <iosfwd>
#include <string>
#include <string_view>

namespace ordkit {

using Rational = mpq_class;

Rational parse_rational(std::string_view text);
std::string format_rational(const Rational& q);

/// Exact element a + b*sqrt(d) of the real quadratic field Q(sqrt d), with d a
/// square-free integer >= 2. Rationals embed with b = 0 and carry the radicand
/// of whatever they are combined with.
class QuadraticNumber {
 public:
  QuadraticNumber() = default;
  QuadraticNumber(Rational a, Rational b = 0, long radicand = 2);
  QuadraticNumber(long a) : QuadraticNumber(Rational(a)) {}  // NOLINT

  static QuadraticNumber sqrt(long radicand);
  /// Accepts sums of terms like "1/2", "-sqrt2", "3sqrt2", "2/3*sqrt5".
  static QuadraticNumber parse(std::string_view text);

  const Rational& rational_part() const { return a_; }
  const Rational& radical_part() const { return b_; }
  long radicand() const { return d_; }
  bool is_rational() const { return b_ == 0; }

  /// -1, 0 or +1, computed exactly.
  int sign() const;
  QuadraticNumber conjugate() const { return {a_, -b_, d_}; }
  /// Largest integer not exceeding the value.
  mpz_class floor() const;
  double to_double() const;
  std::string to_string() const;

  QuadraticNumber operator-() const { return {-a_, -b_, d_}; }
  QuadraticNumber& operator+=(const QuadraticNumber& o);
  QuadraticNumber& operator-=(const QuadraticNumber& o);
  QuadraticNumber& operator*=(const QuadraticNumber& o);
  QuadraticNumber& operator/=(const QuadraticNumber& o);

  friend QuadraticNumber operator+(QuadraticNumber x, const QuadraticNumber& y) { return x += y; }
  friend QuadraticNumber operator-(QuadraticNumber x, const QuadraticNumber& y) { return x -= y; }
  friend QuadraticNumber operator*(QuadraticNumber x, const QuadraticNumber& y) { return x *= y; }
  friend QuadraticNumber operator/(QuadraticNumber x, const QuadraticNumber& y) { return x /= y; }

  friend bool operator==(const QuadraticNumber& x, const QuadraticNumber& y);
  friend int compare(const QuadraticNumber& x, const QuadraticNumber& y);
  friend bool operator<(const QuadraticNumber& x, const QuadraticNumber& y) { return compare(x, y) < 0; }
  friend bool operator>(const QuadraticNumber& x, const QuadraticNumber& y) { return compare(x, y) > 0; }
  friend bool operator<=(const QuadraticNumber& x, const QuadraticNumber& y) { return compare(x, y) <= 0; }
  friend bool operator>=(const QuadraticNumber& x, const QuadraticNumber& y) { return compare(x, y) >= 0; }

 private:
  void adopt_radicand(const QuadraticNumber& o);

  Rational a_{0};
  Rational b_{0};
  long d_{2};
};

std::ostream& operator<<(std::ostream& os, const QuadraticNumber& x);

}  // namespace ordkit
