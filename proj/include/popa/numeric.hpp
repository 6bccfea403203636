#pragma once

#include <cmath>

namespace popa {

/// (e^w - 1)/w, continuous through w = 0. Series branch below 1e-8 keeps
/// the parameter-zero limits of the homomorphism tables seamless.
inline double expm1_over(double w) {
  if (std::fabs(w) < 1e-8) return 1.0 + w / 2.0 + w * w / 6.0;
  return std::expm1(w) / w;
}

/// (e^{s*z} - 1)/s evaluated as z*expm1_over(s*z): tends to z as s -> 0.
inline double scaled_expm1(double z, double s) { return z * expm1_over(s * z); }

/// (1+x)^p via exp(p*log1p(x)); requires 1+x > 0.
inline double pow1p(double x, double p) { return std::exp(p * std::log1p(x)); }

/// ((1+x)^p - 1) without cancellation near p*log1p(x) = 0.
inline double pow1p_m1(double x, double p) { return std::expm1(p * std::log1p(x)); }

inline double rel_gap(double a, double b) {
  const double scale = std::max({1.0, std::fabs(a), std::fabs(b)});
  return std::fabs(a - b) / scale;
}

}  // namespace popa
