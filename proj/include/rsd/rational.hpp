#ifndef RSD_RATIONAL_HPP
#define RSD_RATIONAL_HPP

#include <gmpxx.h>

#include <compare>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>

namespace rsd {

// Exact rational scalar backed by GMP. Always held in lowest terms with a
// positive denominator; every operation is exact, no rounding ever.
class Rational {
 public:
  Rational() : v_(0) {}
  Rational(long n) : v_(n) {}  // NOLINT: implicit for integer literals
  Rational(int n) : v_(n) {}   // NOLINT
  Rational(long num, long den);
  explicit Rational(mpq_class v);

  // Exact value of a finite double (every finite double is p/2^k).
  static Rational from_double(double x);

  // Nearest double (round to nearest, ties to even).
  double to_double() const;

  // "p/q" in lowest terms, or "p" when q = 1. Also the wire format.
  std::string str() const;

  // Accepts exactly the str() grammar: optional '-', digits, optional
  // "/digits" with a positive denominator.
  static std::optional<Rational> parse(std::string_view text);

  // Accepts the parse() grammar plus decimal and scientific forms
  // ("0.25", "1e-9", "2.5e3"); the result is exact.
  static std::optional<Rational> parse_number(std::string_view text);

  int sign() const { return sgn(v_); }
  bool is_zero() const { return sgn(v_) == 0; }
  bool is_integer() const { return v_.get_den() == 1; }
  Rational abs() const { return Rational(mpq_class(::abs(v_))); }

  mpz_class numerator() const { return v_.get_num(); }
  mpz_class denominator() const { return v_.get_den(); }

  Rational operator-() const { return Rational(mpq_class(-v_)); }

  Rational& operator+=(const Rational& o) { v_ += o.v_; return *this; }
  Rational& operator-=(const Rational& o) { v_ -= o.v_; return *this; }
  Rational& operator*=(const Rational& o) { v_ *= o.v_; return *this; }
  Rational& operator/=(const Rational& o);

  friend Rational operator+(Rational a, const Rational& b) { return a += b; }
  friend Rational operator-(Rational a, const Rational& b) { return a -= b; }
  friend Rational operator*(Rational a, const Rational& b) { return a *= b; }
  friend Rational operator/(Rational a, const Rational& b) { return a /= b; }

  friend bool operator==(const Rational& a, const Rational& b) {
    return mpq_equal(a.v_.get_mpq_t(), b.v_.get_mpq_t()) != 0;
  }
  friend std::strong_ordering operator<=>(const Rational& a,
                                          const Rational& b) {
    const int c = mpq_cmp(a.v_.get_mpq_t(), b.v_.get_mpq_t());
    if (c < 0) return std::strong_ordering::less;
    if (c > 0) return std::strong_ordering::greater;
    return std::strong_ordering::equal;
  }

 private:
  mpq_class v_;
};

std::ostream& operator<<(std::ostream& os, const Rational& r);

inline Rational min(const Rational& a, const Rational& b) {
  return a < b ? a : b;
}
inline Rational max(const Rational& a, const Rational& b) {
  return a < b ? b : a;
}

}  // namespace rsd

#endif
