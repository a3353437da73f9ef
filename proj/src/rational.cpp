#include "sforest/rational.hpp"

#include <algorithm>
#include <cctype>

namespace sforest {

namespace {

bool all_digits(std::string_view s) {
  if (s.empty()) return false;
  return std::all_of(s.begin(), s.end(), [](unsigned char c) { return std::isdigit(c); });
}

BigInt pow10(std::size_t k) {
  BigInt p = 1;
  for (std::size_t i = 0; i < k; ++i) p *= 10;
  return p;
}

// cpp_int would read a leading zero as an octal prefix
BigInt from_digits(std::string_view digits) {
  std::size_t i = 0;
  while (i + 1 < digits.size() && digits[i] == '0') ++i;
  return BigInt{std::string(digits.substr(i))};
}

}  // namespace

Rational parse_rational(std::string_view text) {
  std::string_view s = text;
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  if (s.empty()) throw std::invalid_argument("empty rational literal");

  bool negative = false;
  if (s.front() == '+' || s.front() == '-') {
    negative = s.front() == '-';
    s.remove_prefix(1);
  }
  if (s.empty()) throw std::invalid_argument("sign without digits in rational literal");

  Rational value;
  auto slash = s.find('/');
  auto dot = s.find('.');
  if (slash != std::string_view::npos) {
    std::string_view num = s.substr(0, slash);
    std::string_view den = s.substr(slash + 1);
    if (!all_digits(num) || !all_digits(den))
      throw std::invalid_argument("malformed fraction '" + std::string(text) + "'");
    BigInt q = from_digits(den);
    if (q == 0) throw std::invalid_argument("zero denominator in '" + std::string(text) + "'");
    BigInt p = from_digits(num);
    value = Rational(p, q);
  } else if (dot != std::string_view::npos) {
    std::string_view whole = s.substr(0, dot);
    std::string_view frac = s.substr(dot + 1);
    if (whole.empty() && frac.empty())
      throw std::invalid_argument("malformed decimal '" + std::string(text) + "'");
    if (!whole.empty() && !all_digits(whole))
      throw std::invalid_argument("malformed decimal '" + std::string(text) + "'");
    if (!frac.empty() && !all_digits(frac))
      throw std::invalid_argument("malformed decimal '" + std::string(text) + "'");
    BigInt w = whole.empty() ? BigInt(0) : from_digits(whole);
    BigInt f = frac.empty() ? BigInt(0) : from_digits(frac);
    BigInt scale = pow10(frac.size());
    value = Rational(w * scale + f, scale);
  } else {
    if (!all_digits(s)) throw std::invalid_argument("malformed integer '" + std::string(text) + "'");
    value = Rational(from_digits(s));
  }
  if (negative) value = -value;
  return value;
}

std::string fraction_str(const Rational& r) {
  std::string s = numer(r).str();
  if (denom(r) != 1) {
    s += '/';
    s += denom(r).str();
  }
  return s;
}

std::string decimal_str(const Rational& r, int sig) {
  if (sig < 1) sig = 1;
  if (r == 0) return "0";
  BigInt a = numer(r);
  bool neg = a < 0;
  if (neg) a = -a;
  BigInt b = denom(r);

  // Decimal exponent e with 10^e <= a/b < 10^(e+1).
  long e = static_cast<long>(a.str().size()) - static_cast<long>(b.str().size());
  auto cmp_pow = [&](long k) {
    // sign of a/b - 10^k
    if (k >= 0) return a.compare(b * pow10(static_cast<std::size_t>(k)));
    return (a * pow10(static_cast<std::size_t>(-k))).compare(b);
  };
  while (cmp_pow(e) < 0) --e;
  while (cmp_pow(e + 1) >= 0) ++e;

  // Round a/b * 10^(sig-1-e) half-up to an integer with `sig` digits.
  long shift = sig - 1 - e;
  BigInt num = a, den = b;
  if (shift >= 0)
    num *= pow10(static_cast<std::size_t>(shift));
  else
    den *= pow10(static_cast<std::size_t>(-shift));
  BigInt scaled = (2 * num + den) / (2 * den);
  std::string digits = scaled.str();
  if (static_cast<int>(digits.size()) > sig) {  // rounding overflowed, e.g. 999.9 -> 1000
    ++e;
    digits.resize(static_cast<std::size_t>(sig));
  }

  std::string out;
  if (e >= sig || e < -4) {
    out += digits[0];
    std::string rest = digits.substr(1);
    while (!rest.empty() && rest.back() == '0') rest.pop_back();
    if (!rest.empty()) out += "." + rest;
    out += "e" + std::string(e >= 0 ? "+" : "-") + std::to_string(e >= 0 ? e : -e);
  } else if (e >= 0) {
    out = digits.substr(0, static_cast<std::size_t>(e) + 1);
    std::string rest = digits.substr(static_cast<std::size_t>(e) + 1);
    while (!rest.empty() && rest.back() == '0') rest.pop_back();
    if (!rest.empty()) out += "." + rest;
  } else {
    out = "0.";
    for (long i = 0; i < -e - 1; ++i) out += '0';
    std::string rest = digits;
    while (rest.size() > 1 && rest.back() == '0') rest.pop_back();
    out += rest;
  }
  return (neg ? "-" : "") + out;
}

}  // namespace sforest
