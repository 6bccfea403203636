#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "popa/errors.hpp"
#include "popa/vec.hpp"

namespace popa {

/// Dense row-major matrix. Everything here is desk scale (d <= 16), so the
/// implementations favour clarity over blocking.
struct Matrix {
  std::size_t rows = 0, cols = 0;
  std::vector<double> a;

  Matrix() = default;
  Matrix(std::size_t r, std::size_t c) : rows(r), cols(c), a(r * c, 0.0) {}

  static Matrix identity(std::size_t n) {
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
  }

  double& operator()(std::size_t i, std::size_t j) { return a[i * cols + j]; }
  double operator()(std::size_t i, std::size_t j) const { return a[i * cols + j]; }

  bool is_zero(double tol = 0.0) const {
    for (double x : a)
      if (std::fabs(x) > tol) return false;
    return true;
  }
};

inline Vec<double> matvec(const Matrix& m, const Vec<double>& x) {
  if (x.size() != m.cols) throw DimensionMismatch("matvec size mismatch");
  Vec<double> y(m.rows, 0.0);
  for (std::size_t i = 0; i < m.rows; ++i)
    for (std::size_t j = 0; j < m.cols; ++j) y[i] += m(i, j) * x[j];
  return y;
}

inline Matrix matmul(const Matrix& a, const Matrix& b) {
  if (a.cols != b.rows) throw DimensionMismatch("matmul size mismatch");
  Matrix c(a.rows, b.cols);
  for (std::size_t i = 0; i < a.rows; ++i)
    for (std::size_t k = 0; k < a.cols; ++k) {
      const double aik = a(i, k);
      if (aik == 0.0) continue;
      for (std::size_t j = 0; j < b.cols; ++j) c(i, j) += aik * b(k, j);
    }
  return c;
}

inline Matrix transpose(const Matrix& m) {
  Matrix t(m.cols, m.rows);
  for (std::size_t i = 0; i < m.rows; ++i)
    for (std::size_t j = 0; j < m.cols; ++j) t(j, i) = m(i, j);
  return t;
}

inline Matrix outer(const Vec<double>& u, const Vec<double>& v) {
  Matrix m(u.size(), v.size());
  for (std::size_t i = 0; i < u.size(); ++i)
    for (std::size_t j = 0; j < v.size(); ++j) m(i, j) = u[i] * v[j];
  return m;
}

struct Svd {
  Matrix u;                // rows x k, orthonormal columns
  std::vector<double> s;   // k singular values, descending
  Matrix v;                // cols x k
};

/// One-sided Jacobi SVD for rows >= cols: rotates column pairs until they
/// are mutually orthogonal. Accurate and dependency-free at this scale.
inline Svd svd_tall(Matrix m) {
  const std::size_t rows = m.rows, cols = m.cols;
  Matrix v = Matrix::identity(cols);
  for (int sweep = 0; sweep < 100; ++sweep) {
    bool rotated = false;
    for (std::size_t p = 0; p + 1 < cols; ++p)
      for (std::size_t q = p + 1; q < cols; ++q) {
        double app = 0, aqq = 0, apq = 0;
        for (std::size_t i = 0; i < rows; ++i) {
          app += m(i, p) * m(i, p);
          aqq += m(i, q) * m(i, q);
          apq += m(i, p) * m(i, q);
        }
        if (std::fabs(apq) <= 1e-30 ||
            std::fabs(apq) <= 1e-16 * std::sqrt(app * aqq))
          continue;
        rotated = true;
        const double zeta = (aqq - app) / (2.0 * apq);
        const double t = (zeta >= 0 ? 1.0 : -1.0) /
                         (std::fabs(zeta) + std::sqrt(1.0 + zeta * zeta));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = c * t;
        for (std::size_t i = 0; i < rows; ++i) {
          const double mp = m(i, p), mq = m(i, q);
          m(i, p) = c * mp - s * mq;
          m(i, q) = s * mp + c * mq;
        }
        for (std::size_t i = 0; i < cols; ++i) {
          const double vp = v(i, p), vq = v(i, q);
          v(i, p) = c * vp - s * vq;
          v(i, q) = s * vp + c * vq;
        }
      }
    if (!rotated) break;
  }

  Svd out;
  out.s.resize(cols);
  out.u = Matrix(rows, cols);
  for (std::size_t j = 0; j < cols; ++j) {
    double norm = 0;
    for (std::size_t i = 0; i < rows; ++i) norm += m(i, j) * m(i, j);
    norm = std::sqrt(norm);
    out.s[j] = norm;
    if (norm > 0)
      for (std::size_t i = 0; i < rows; ++i) out.u(i, j) = m(i, j) / norm;
  }
  out.v = v;

  // Sort singular triples descending.
  std::vector<std::size_t> order(cols);
  for (std::size_t j = 0; j < cols; ++j) order[j] = j;
  std::sort(order.begin(), order.end(),
            [&](std::size_t x, std::size_t y) { return out.s[x] > out.s[y]; });
  Svd sorted;
  sorted.s.resize(cols);
  sorted.u = Matrix(rows, cols);
  sorted.v = Matrix(cols, cols);
  for (std::size_t j = 0; j < cols; ++j) {
    sorted.s[j] = out.s[order[j]];
    for (std::size_t i = 0; i < rows; ++i) sorted.u(i, j) = out.u(i, order[j]);
    for (std::size_t i = 0; i < cols; ++i) sorted.v(i, j) = out.v(i, order[j]);
  }
  return sorted;
}

struct LstsqResult {
  Vec<double> x;
  std::size_t rank = 0;
  double residual_norm = 0.0;
};

/// Minimum-norm least squares via the pseudoinverse; rank counts singular
/// values above rcond * s_max.
inline LstsqResult lstsq(const Matrix& a, const Vec<double>& b, double rcond = 1e-12) {
  if (b.size() != a.rows) throw DimensionMismatch("lstsq rhs size mismatch");
  const bool wide = a.rows < a.cols;
  const Svd dec = wide ? svd_tall(transpose(a)) : svd_tall(a);
  // tall: a = U S V^T, x = V S+ U^T b.  wide: a^T = U S V^T, x = U S+ V^T b.
  const Matrix& left = wide ? dec.v : dec.u;    // multiplies b
  const Matrix& right = wide ? dec.u : dec.v;   // carries x
  const std::size_t k = dec.s.size();
  const double cutoff = dec.s.empty() ? 0.0 : rcond * dec.s[0];

  LstsqResult res;
  res.x.assign(a.cols, 0.0);
  for (std::size_t j = 0; j < k; ++j) {
    if (dec.s[j] <= cutoff || dec.s[j] == 0.0) continue;
    ++res.rank;
    double coef = 0;
    for (std::size_t i = 0; i < a.rows; ++i) coef += left(i, j) * b[i];
    coef /= dec.s[j];
    for (std::size_t i = 0; i < a.cols; ++i) res.x[i] += right(i, j) * coef;
  }
  const Vec<double> fit = matvec(a, res.x);
  double rss = 0;
  for (std::size_t i = 0; i < b.size(); ++i) rss += (b[i] - fit[i]) * (b[i] - fit[i]);
  res.residual_norm = std::sqrt(rss);
  return res;
}

/// Gauss-Jordan inverse with partial pivoting; throws on singular input.
inline Matrix inverse(Matrix m) {
  if (m.rows != m.cols) throw DimensionMismatch("inverse of non-square matrix");
  const std::size_t n = m.rows;
  Matrix inv = Matrix::identity(n);
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t piv = col;
    for (std::size_t r = col + 1; r < n; ++r)
      if (std::fabs(m(r, col)) > std::fabs(m(piv, col))) piv = r;
    if (std::fabs(m(piv, col)) < 1e-300) throw Error("singular matrix");
    if (piv != col)
      for (std::size_t j = 0; j < n; ++j) {
        std::swap(m(piv, j), m(col, j));
        std::swap(inv(piv, j), inv(col, j));
      }
    const double d = m(col, col);
    for (std::size_t j = 0; j < n; ++j) {
      m(col, j) /= d;
      inv(col, j) /= d;
    }
    for (std::size_t r = 0; r < n; ++r) {
      if (r == col) continue;
      const double f = m(r, col);
      if (f == 0.0) continue;
      for (std::size_t j = 0; j < n; ++j) {
        m(r, j) -= f * m(col, j);
        inv(r, j) -= f * inv(col, j);
      }
    }
  }
  return inv;
}

/// Basis of the hyperplane {x : rho(x) = 0}: d vectors when rho == 0, else
/// d-1 vectors e_j - (rho_j/rho_p) e_p built around the largest pivot.
inline std::vector<Vec<double>> nullspace_of_functional(const LinFunc<double>& rho) {
  const std::size_t d = rho.dim();
  std::vector<Vec<double>> basis;
  std::size_t pivot = 0;
  double best = 0;
  for (std::size_t j = 0; j < d; ++j)
    if (std::fabs(rho.coeffs[j]) > best) {
      best = std::fabs(rho.coeffs[j]);
      pivot = j;
    }
  if (best == 0.0) {
    for (std::size_t j = 0; j < d; ++j) basis.push_back(vbasis<double>(d, j));
    return basis;
  }
  for (std::size_t j = 0; j < d; ++j) {
    if (j == pivot) continue;
    Vec<double> v = vbasis<double>(d, j);
    v[pivot] = -rho.coeffs[j] / rho.coeffs[pivot];
    basis.push_back(v);
  }
  return basis;
}

}  // namespace popa
