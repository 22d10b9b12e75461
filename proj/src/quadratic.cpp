#include "ordkit/quadratic.hpp"

#include <cctype>
#include <cmath>
#include <ostream>
#include <sstream>

#include "ordkit/errors.hpp"

namespace ordkit {

namespace {

int sgn(const Rational& q) { return sgn(q.get_num()); }

bool is_square_free(long d) {
  if (d < 2) return false;
  for (long p = 2; p * p <= d; ++p) {
    if (d % (p * p) == 0) return false;
  }
  return true;
}

std::string trim(std::string_view s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return std::string(s.substr(b, e - b));
}

}  // namespace

Rational parse_rational(std::string_view text) {
  std::string s = trim(text);
  if (s.empty()) throw ParseError("empty rational");
  std::size_t i = (s[0] == '-' || s[0] == '+') ? 1 : 0;
  bool slash = false;
  bool digits = false;
  for (std::size_t k = i; k < s.size(); ++k) {
    if (std::isdigit(static_cast<unsigned char>(s[k]))) {
      digits = true;
    } else if (s[k] == '/' && !slash && digits) {
      slash = true;
      digits = false;
    } else {
      throw ParseError("malformed rational '" + s + "'");
    }
  }
  if (!digits) throw ParseError("malformed rational '" + s + "'");
  if (s[0] == '+') s.erase(0, 1);
  Rational q;
  if (q.set_str(s, 10) != 0) throw ParseError("malformed rational '" + s + "'");
  if (q.get_den() == 0) throw ParseError("zero denominator in '" + s + "'");
  q.canonicalize();
  return q;
}

std::string format_rational(const Rational& q) { return q.get_str(); }

QuadraticNumber::QuadraticNumber(Rational a, Rational b, long radicand)
    : a_(std::move(a)), b_(std::move(b)), d_(radicand) {
  if (!is_square_free(d_)) {
    throw DomainError("radicand must be a square-free integer >= 2, got " + std::to_string(d_));
  }
}

QuadraticNumber QuadraticNumber::sqrt(long radicand) { return {0, 1, radicand}; }

QuadraticNumber QuadraticNumber::parse(std::string_view text) {
  std::string s;
  for (char c : text) {
    if (!std::isspace(static_cast<unsigned char>(c))) s.push_back(c);
  }
  if (s.empty()) throw ParseError("empty quadratic number");
  Rational a = 0, b = 0;
  long d = 0;
  std::size_t pos = 0;
  while (pos < s.size()) {
    int term_sign = 1;
    if (s[pos] == '+' || s[pos] == '-') {
      term_sign = s[pos] == '-' ? -1 : 1;
      ++pos;
    } else if (pos != 0) {
      throw ParseError("malformed quadratic number '" + s + "'");
    }
    std::size_t end = pos;
    while (end < s.size() && s[end] != '+' && s[end] != '-') ++end;
    std::string term = s.substr(pos, end - pos);
    pos = end;
    auto root = term.find("sqrt");
    if (root == std::string::npos) {
      a += term_sign * parse_rational(term);
      continue;
    }
    std::string coeff = term.substr(0, root);
    if (!coeff.empty() && coeff.back() == '*') coeff.pop_back();
    std::string rad = term.substr(root + 4);
    if (rad.empty()) throw ParseError("missing radicand in '" + s + "'");
    long this_d = 0;
    try {
      std::size_t used = 0;
      this_d = std::stol(rad, &used);
      if (used != rad.size()) throw ParseError("malformed radicand in '" + s + "'");
    } catch (const std::logic_error&) {
      throw ParseError("malformed radicand in '" + s + "'");
    }
    if (d != 0 && d != this_d) throw ParseError("mixed radicands in '" + s + "'");
    d = this_d;
    b += term_sign * (coeff.empty() ? Rational(1) : parse_rational(coeff));
  }
  return {a, b, d == 0 ? 2 : d};
}

int QuadraticNumber::sign() const {
  int sa = sgn(a_);
  int sb = sgn(b_);
  if (sb == 0) return sa;
  if (sa == 0 || sa == sb) return sb;
  // Opposite signs: compare a^2 with b^2 d; equality is impossible for square-free d.
  Rational lhs = a_ * a_;
  Rational rhs = b_ * b_ * d_;
  return lhs > rhs ? sa : sb;
}

mpz_class QuadraticNumber::floor() const {
  mpz_class guess(std::floor(to_double()));
  while (compare(*this, QuadraticNumber(Rational(guess), 0, d_)) < 0) guess -= 1;
  while (compare(*this, QuadraticNumber(Rational(guess + 1), 0, d_)) >= 0) guess += 1;
  return guess;
}

double QuadraticNumber::to_double() const {
  return a_.get_d() + b_.get_d() * std::sqrt(static_cast<double>(d_));
}

std::string QuadraticNumber::to_string() const {
  if (b_ == 0) return a_.get_str();
  std::ostringstream os;
  if (a_ != 0) os << a_.get_str() << (b_ > 0 ? "+" : "-");
  else if (b_ < 0) os << "-";
  Rational mag = abs(b_);
  if (mag != 1) os << mag.get_str() << "*";
  os << "sqrt" << d_;
  return os.str();
}

void QuadraticNumber::adopt_radicand(const QuadraticNumber& o) {
  if (o.b_ == 0 || d_ == o.d_) return;
  if (b_ == 0) {
    d_ = o.d_;
    return;
  }
  throw DomainError("arithmetic across different quadratic fields: sqrt" + std::to_string(d_) +
                    " vs sqrt" + std::to_string(o.d_));
}

QuadraticNumber& QuadraticNumber::operator+=(const QuadraticNumber& o) {
  adopt_radicand(o);
  a_ += o.a_;
  b_ += o.b_;
  return *this;
}

QuadraticNumber& QuadraticNumber::operator-=(const QuadraticNumber& o) {
  adopt_radicand(o);
  a_ -= o.a_;
  b_ -= o.b_;
  return *this;
}

QuadraticNumber& QuadraticNumber::operator*=(const QuadraticNumber& o) {
  adopt_radicand(o);
  Rational a = a_ * o.a_ + b_ * o.b_ * d_;
  Rational b = a_ * o.b_ + b_ * o.a_;
  a_ = std::move(a);
  b_ = std::move(b);
  return *this;
}

QuadraticNumber& QuadraticNumber::operator/=(const QuadraticNumber& o) {
  adopt_radicand(o);
  Rational norm = o.a_ * o.a_ - o.b_ * o.b_ * d_;
  if (norm == 0) throw DomainError("division by zero in Q(sqrt" + std::to_string(d_) + ")");
  *this *= QuadraticNumber(o.a_, -o.b_, d_);
  a_ /= norm;
  b_ /= norm;
  return *this;
}

bool operator==(const QuadraticNumber& x, const QuadraticNumber& y) {
  return x.a_ == y.a_ && x.b_ == y.b_ && (x.b_ == 0 || x.d_ == y.d_);
}

int compare(const QuadraticNumber& x, const QuadraticNumber& y) { return (x - y).sign(); }

std::ostream& operator<<(std::ostream& os, const QuadraticNumber& x) { return os << x.to_string(); }

}  // namespace ordkit
