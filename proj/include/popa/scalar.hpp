#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cmath>
#include <cstdio>
#include <string>

#include "popa/errors.hpp"

namespace popa {

/// Exact scalar kind: arbitrary-precision rationals. Group laws are tested
/// on the nose in this kind; `double` is the numeric kind everywhere else.
using Rational = boost::multiprecision::cpp_rational;

template <class S>
struct scalar_traits;

template <>
struct scalar_traits<double> {
  static constexpr bool exact = false;
  // Membership guard keeps inverses away from the boundary hyperplane
  // eta = 0 where they blow up.
  static double membership_guard() { return 1e-12; }
  static double abs(double x) { return std::fabs(x); }
  static bool finite(double x) { return std::isfinite(x); }
  static double to_double(double x) { return x; }
  static std::string str(double x) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
  }
};

template <>
struct scalar_traits<Rational> {
  static constexpr bool exact = true;
  static Rational membership_guard() { return Rational(0); }
  static Rational abs(const Rational& x) { return x < 0 ? Rational(-x) : x; }
  static bool finite(const Rational&) { return true; }
  static double to_double(const Rational& x) { return x.convert_to<double>(); }
  static std::string str(const Rational& x) { return x.str(); }
};

/// Parses "p/q", plain integers, and decimal literals ("-3/4", "7", "0.25").
inline Rational parse_rational(const std::string& text) {
  if (text.empty()) throw ParseError("empty rational literal");
  const auto slash = text.find('/');
  try {
    if (slash != std::string::npos) {
      Rational num(text.substr(0, slash));
      Rational den(text.substr(slash + 1));
      if (den == 0) throw ParseError("zero denominator in '" + text + "'");
      return num / den;
    }
    const auto dot = text.find('.');
    if (dot == std::string::npos) return Rational(text);
    const std::string head = text.substr(0, dot);
    const std::string frac = text.substr(dot + 1);
    if (frac.empty()) return Rational(head);
    Rational den(1);
    for (std::size_t i = 0; i < frac.size(); ++i) den *= 10;
    Rational num((head.empty() || head == "-" ? head + "0" : head) + frac);
    return num / den;
  } catch (const std::exception&) {
    throw ParseError("bad rational literal '" + text + "'");
  }
}

}  // namespace popa
