#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "popa/errors.hpp"
#include "popa/scalar.hpp"

namespace popa {

template <class S>
using Vec = std::vector<S>;

/// A continuous linear functional represented by its coefficient vector:
/// apply(x) = sum_i coeffs[i]*x[i].
template <class S>
struct LinFunc {
  std::vector<S> coeffs;

  LinFunc() = default;
  explicit LinFunc(std::vector<S> c) : coeffs(std::move(c)) {}

  std::size_t dim() const { return coeffs.size(); }

  S operator()(const Vec<S>& x) const {
    if (x.size() != coeffs.size())
      throw DimensionMismatch("linear functional applied to vector of length " +
                              std::to_string(x.size()) + ", expected " +
                              std::to_string(coeffs.size()));
    S acc{};
    for (std::size_t i = 0; i < x.size(); ++i) acc += coeffs[i] * x[i];
    return acc;
  }

  bool is_zero() const {
    for (const S& c : coeffs)
      if (!(c == S{})) return false;
    return true;
  }
};

template <class S>
Vec<S> vzero(std::size_t d) {
  return Vec<S>(d, S{});
}

template <class S>
Vec<S> vbasis(std::size_t d, std::size_t j) {
  Vec<S> e(d, S{});
  e[j] = S(1);
  return e;
}

template <class S>
void check_same_dim(const Vec<S>& a, const Vec<S>& b) {
  if (a.size() != b.size())
    throw DimensionMismatch("vector lengths differ: " + std::to_string(a.size()) +
                            " vs " + std::to_string(b.size()));
}

template <class S>
Vec<S> vadd(const Vec<S>& a, const Vec<S>& b) {
  check_same_dim(a, b);
  Vec<S> r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] + b[i];
  return r;
}

template <class S>
Vec<S> vsub(const Vec<S>& a, const Vec<S>& b) {
  check_same_dim(a, b);
  Vec<S> r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] - b[i];
  return r;
}

template <class S>
Vec<S> vscale(const S& s, const Vec<S>& a) {
  Vec<S> r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = s * a[i];
  return r;
}

/// a + s*b
template <class S>
Vec<S> vaxpy(const Vec<S>& a, const S& s, const Vec<S>& b) {
  check_same_dim(a, b);
  Vec<S> r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] + s * b[i];
  return r;
}

template <class S>
bool vis_zero(const Vec<S>& a) {
  for (const S& c : a)
    if (!(c == S{})) return false;
  return true;
}

template <class S>
S vnorm_inf(const Vec<S>& a) {
  S m{};
  for (const S& c : a) {
    S v = scalar_traits<S>::abs(c);
    if (m < v) m = v;
  }
  return m;
}

inline double vdot(const Vec<double>& a, const Vec<double>& b) {
  check_same_dim(a, b);
  double acc = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) acc += a[i] * b[i];
  return acc;
}

/// Componentwise gap |a-b| scaled by max(1, |a|, |b|) over the whole vector.
inline double vrel_gap(const Vec<double>& a, const Vec<double>& b) {
  check_same_dim(a, b);
  double scale = 1.0;
  for (std::size_t i = 0; i < a.size(); ++i)
    scale = std::max({scale, std::fabs(a[i]), std::fabs(b[i])});
  double gap = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i)
    gap = std::max(gap, std::fabs(a[i] - b[i]));
  return gap / scale;
}

template <class S>
bool vfinite(const Vec<S>& a) {
  for (const S& c : a)
    if (!scalar_traits<S>::finite(c)) return false;
  return true;
}

}  // namespace popa
