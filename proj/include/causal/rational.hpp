#pragma once

#include <gmpxx.h>

#include <cctype>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

namespace causal {

using Rational = mpq_class;

/// Base class for every error raised by the toolkit.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Raised when an input (formula, model, graph, program, proof) is ill-formed.
class InputError : public Error {
 public:
  using Error::Error;
};

/// Raised when a configured enumeration or size guard would be exceeded.
class GuardError : public Error {
 public:
  using Error::Error;
};

inline Rational make_rational(long num, long den = 1) {
  Rational q(num, den);
  q.canonicalize();
  return q;
}

/// Parses `a`, `-a`, `a/b` or a finite decimal `a.bc` into an exact rational.
inline Rational parse_rational(std::string_view text) {
  std::string s(text);
  auto bad = [&] { return InputError("malformed rational '" + s + "'"); };
  if (s.empty()) throw bad();
  std::size_t i = 0;
  bool neg = false;
  if (s[0] == '-' || s[0] == '+') {
    neg = s[0] == '-';
    i = 1;
  }
  auto digits = [&](std::size_t from, std::size_t to) {
    if (from >= to) return false;
    for (std::size_t k = from; k < to; ++k)
      if (!std::isdigit(static_cast<unsigned char>(s[k]))) return false;
    return true;
  };
  Rational q;
  if (auto slash = s.find('/'); slash != std::string::npos) {
    if (!digits(i, slash) || !digits(slash + 1, s.size())) throw bad();
    mpz_class num(s.substr(i, slash - i)), den(s.substr(slash + 1));
    if (den == 0) throw InputError("zero denominator in '" + s + "'");
    q = Rational(num, den);
  } else if (auto dot = s.find('.'); dot != std::string::npos) {
    if (!digits(i, dot) || !digits(dot + 1, s.size())) throw bad();
    std::string frac = s.substr(dot + 1);
    mpz_class whole(s.substr(i, dot - i)), part(frac), scale;
    mpz_ui_pow_ui(scale.get_mpz_t(), 10, frac.size());
    q = Rational(whole * scale + part, scale);
  } else {
    if (!digits(i, s.size())) throw bad();
    q = Rational(mpz_class(s.substr(i)));
  }
  q.canonicalize();
  return neg ? Rational(-q) : q;
}

/// Renders `n` for integers and `a/b` otherwise.
inline std::string to_string(const Rational& q) {
  if (q.get_den() == 1) return q.get_num().get_str();
  return q.get_num().get_str() + "/" + q.get_den().get_str();
}

inline bool is_power_of_two(const mpz_class& n) {
  return n > 0 && mpz_popcount(n.get_mpz_t()) == 1;
}

}  // namespace causal
