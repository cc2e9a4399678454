#include "rsd/rational.hpp"

#include <mpfr.h>

#include <cctype>
#include <cmath>
#include <ostream>

#include "rsd/errors.hpp"

namespace rsd {

Rational::Rational(long num, long den) {
  if (den == 0) fail(Errc::precondition, "rational with zero denominator");
  v_ = mpq_class(num, den);
  v_.canonicalize();
}

Rational::Rational(mpq_class v) : v_(std::move(v)) { v_.canonicalize(); }

Rational& Rational::operator/=(const Rational& o) {
  if (o.is_zero()) fail(Errc::precondition, "rational division by zero");
  v_ /= o.v_;
  return *this;
}

Rational Rational::from_double(double x) {
  if (!std::isfinite(x)) {
    fail(Errc::precondition, "cannot convert non-finite double to rational");
  }
  return Rational(mpq_class(x));
}

double Rational::to_double() const {
  // Round through a 53-bit mpfr value so the result is the nearest double.
  mpfr_t t;
  mpfr_init2(t, 53);
  mpfr_set_q(t, v_.get_mpq_t(), MPFR_RNDN);
  const double d = mpfr_get_d(t, MPFR_RNDN);
  mpfr_clear(t);
  return d;
}

std::string Rational::str() const {
  if (v_.get_den() == 1) return v_.get_num().get_str();
  return v_.get_num().get_str() + "/" + v_.get_den().get_str();
}

namespace {

bool all_digits(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s) {
    if (!std::isdigit(static_cast<unsigned char>(c))) return false;
  }
  return true;
}

std::optional<mpz_class> parse_int(std::string_view s) {
  bool neg = false;
  if (!s.empty() && (s[0] == '-' || s[0] == '+')) {
    neg = s[0] == '-';
    s.remove_prefix(1);
  }
  if (!all_digits(s)) return std::nullopt;
  mpz_class z(std::string(s), 10);
  return neg ? mpz_class(-z) : z;
}

}  // namespace

std::optional<Rational> Rational::parse(std::string_view text) {
  const auto slash = text.find('/');
  if (slash == std::string_view::npos) {
    auto num = parse_int(text);
    if (!num) return std::nullopt;
    return Rational(mpq_class(*num));
  }
  auto num = parse_int(text.substr(0, slash));
  std::string_view den_text = text.substr(slash + 1);
  if (!num || !all_digits(den_text)) return std::nullopt;
  mpz_class den(std::string(den_text), 10);
  if (den == 0) return std::nullopt;
  mpq_class q(*num, den);
  q.canonicalize();
  return Rational(std::move(q));
}

std::optional<Rational> Rational::parse_number(std::string_view text) {
  if (auto r = parse(text)) return r;

  // Decimal / scientific form: sign, digits, optional fraction, optional
  // exponent. The value digits.frac * 10^exp is represented exactly.
  std::string_view s = text;
  bool neg = false;
  if (!s.empty() && (s[0] == '-' || s[0] == '+')) {
    neg = s[0] == '-';
    s.remove_prefix(1);
  }

  long exp10 = 0;
  if (auto e = s.find_first_of("eE"); e != std::string_view::npos) {
    auto ev = parse_int(s.substr(e + 1));
    if (!ev || !ev->fits_slong_p()) return std::nullopt;
    exp10 = ev->get_si();
    s = s.substr(0, e);
  }

  std::string digits;
  if (auto dot = s.find('.'); dot != std::string_view::npos) {
    std::string_view ip = s.substr(0, dot);
    std::string_view fp = s.substr(dot + 1);
    if (ip.empty() && fp.empty()) return std::nullopt;
    if (!ip.empty() && !all_digits(ip)) return std::nullopt;
    if (!fp.empty() && !all_digits(fp)) return std::nullopt;
    digits = std::string(ip) + std::string(fp);
    exp10 -= static_cast<long>(fp.size());
  } else {
    if (!all_digits(s)) return std::nullopt;
    digits = std::string(s);
  }
  if (digits.empty()) return std::nullopt;

  mpz_class mant(digits, 10);
  if (neg) mant = -mant;
  mpz_class pow10;
  mpz_ui_pow_ui(pow10.get_mpz_t(), 10,
                static_cast<unsigned long>(exp10 < 0 ? -exp10 : exp10));
  mpq_class q = exp10 < 0 ? mpq_class(mant, pow10)
                          : mpq_class(mant * pow10);
  q.canonicalize();
  return Rational(std::move(q));
}

std::ostream& operator<<(std::ostream& os, const Rational& r) {
  return os << r.str();
}

}  // namespace rsd
