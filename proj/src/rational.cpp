#include "qflab/rational.hpp"

#include <cmath>
#include <cstdlib>
#include <limits>

namespace qflab {

namespace {

constexpr __int128 kMinI64 = std::numeric_limits<std::int64_t>::min();
constexpr __int128 kMaxI64 = std::numeric_limits<std::int64_t>::max();

__int128 gcd128(__int128 a, __int128 b) {
  if (a < 0) a = -a;
  if (b < 0) b = -b;
  while (b != 0) {
    __int128 t = a % b;
    a = b;
    b = t;
  }
  return a;
}

}  // namespace

Rational Rational::make_checked(__int128 n, __int128 d) {
  if (d == 0) throw std::domain_error("rational with zero denominator");
  if (d < 0) {
    n = -n;
    d = -d;
  }
  __int128 g = gcd128(n, d);
  if (g > 1) {
    n /= g;
    d /= g;
  }
  if (n < kMinI64 || n > kMaxI64 || d > kMaxI64) {
    throw RationalOverflow("rational arithmetic exceeded 64-bit range");
  }
  Rational r;
  r.num_ = static_cast<std::int64_t>(n);
  r.den_ = static_cast<std::int64_t>(d);
  return r;
}

void Rational::normalize() {
  *this = make_checked(num_, den_);
}

Rational Rational::parse(const std::string& text) {
  std::size_t slash = text.find('/');
  auto to_i64 = [](const std::string& s) {
    if (s.empty()) throw std::invalid_argument("empty rational component");
    std::size_t pos = 0;
    long long v = std::stoll(s, &pos);
    if (pos != s.size()) throw std::invalid_argument("bad rational literal: " + s);
    return static_cast<std::int64_t>(v);
  };
  if (slash == std::string::npos) return Rational(to_i64(text));
  return Rational(to_i64(text.substr(0, slash)), to_i64(text.substr(slash + 1)));
}

Rational Rational::from_double_exact(double x) {
  if (!std::isfinite(x)) throw std::invalid_argument("non-finite value is not rational");
  if (x == 0.0) return Rational(0);
  int exp = 0;
  double mant = std::frexp(x, &exp);  // x = mant * 2^exp, |mant| in [0.5, 1)
  // 53 doublings make the mantissa integral.
  for (int i = 0; i < 53 && mant != std::floor(mant); ++i) {
    mant *= 2.0;
    --exp;
  }
  auto num = static_cast<std::int64_t>(mant);
  Rational r(num);
  Rational two(2);
  for (int i = 0; i < exp; ++i) r *= two;
  for (int i = 0; i < -exp; ++i) r /= two;
  return r;
}

}  // namespace qflab
