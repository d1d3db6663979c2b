#pragma once

// Test-only eigenvalue oracle for small symmetric matrices, independent of
// the Jacobi solver: characteristic polynomial coefficients via the
// Faddeev-LeVerrier recursion, then real-rooted root finding by bisection
// between critical points. A root of multiplicity m is a critical point of
// multiplicity m-1, which is how repeated eigenvalues are counted; whether
// a critical value is "zero" is decided against a running Horner error
// bound so tight-but-simple eigenvalue clusters are not merged.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <vector>

namespace charpoly_oracle {

// Monic coefficients c with p(x) = x^n + c[0] x^{n-1} + ... + c[n-1].
inline std::vector<double> characteristic_polynomial(const Eigen::MatrixXd& a) {
  const int n = static_cast<int>(a.rows());
  std::vector<double> c(n);
  Eigen::MatrixXd m = a;
  for (int k = 1; k <= n; ++k) {
    c[k - 1] = -m.trace() / k;
    if (k < n) m = a * (m + c[k - 1] * Eigen::MatrixXd::Identity(n, n));
  }
  return c;
}

inline double eval_monic(const std::vector<double>& c, double x) {
  double p = 1.0;
  for (double coef : c) p = p * x + coef;
  return p;
}

// Horner evaluation with a running bound on its own rounding error.
inline double eval_monic_bound(const std::vector<double>& c, double x,
                               double* err) {
  constexpr double kUnit = 1.1e-16;
  const double ax = std::abs(x);
  double p = 1.0;
  double e = 0.0;
  for (double coef : c) {
    const double pnew = p * x + coef;
    e = e * ax + kUnit * (std::abs(p) * ax + std::abs(pnew));
    p = pnew;
  }
  *err = e;
  return p;
}

inline std::vector<double> derivative_monic(const std::vector<double>& c) {
  const int n = static_cast<int>(c.size());
  std::vector<double> d(n - 1);
  for (int k = 0; k + 1 < n; ++k)
    d[k] = c[k] * static_cast<double>(n - 1 - k) / static_cast<double>(n);
  return d;
}

inline double bisect_root(const std::vector<double>& c, double lo, double hi) {
  double flo = eval_monic(c, lo);
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    const double fmid = eval_monic(c, mid);
    if (fmid == 0.0) return mid;
    if ((flo < 0.0) == (fmid < 0.0)) {
      lo = mid;
      flo = fmid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

// Root test: the value is zero within evaluation noise plus an allowance
// for roundoff in the coefficients themselves (relative to their scale, so
// all-tiny-coefficient polynomials keep their resolution).
inline bool is_root_value(const std::vector<double>& c, double x) {
  double scale = 0.0;
  for (double coef : c) scale = std::max(scale, std::abs(coef));
  double err = 0.0;
  const double p = eval_monic_bound(c, x, &err);
  return std::abs(p) <= 32.0 * err + 1e-14 * scale;
}

// All real roots with multiplicity, ascending; valid for real-rooted monic
// polynomials. bound must enclose every root (interlacing covers the
// derivatives).
inline std::vector<double> real_roots(const std::vector<double>& c, double bound) {
  const int degree = static_cast<int>(c.size());
  if (degree == 0) return {};
  if (degree == 1) return {-c[0]};

  const std::vector<double> crits_all = real_roots(derivative_monic(c), bound);
  const double same_tol = 1e-8 * std::max(1.0, bound);

  std::vector<double> crits_unique;
  for (double cr : crits_all)
    if (crits_unique.empty() || cr - crits_unique.back() > same_tol)
      crits_unique.push_back(cr);

  std::vector<double> roots;
  for (double cr : crits_unique) {
    if (!is_root_value(c, cr)) continue;
    int mult = 1;  // itself, plus its multiplicity among the critical points
    for (double other : crits_all)
      if (std::abs(other - cr) <= same_tol) ++mult;
    for (int k = 0; k < mult; ++k) roots.push_back(cr);
  }

  // p is strictly monotone between consecutive critical points, so each
  // remaining root shows up as one sign change over an interval whose
  // endpoints are not roots.
  std::vector<double> candidates;
  candidates.push_back(-bound);
  candidates.insert(candidates.end(), crits_unique.begin(), crits_unique.end());
  candidates.push_back(bound);
  for (size_t k = 0; k + 1 < candidates.size(); ++k) {
    if (is_root_value(c, candidates[k]) || is_root_value(c, candidates[k + 1]))
      continue;
    const double fa = eval_monic(c, candidates[k]);
    const double fb = eval_monic(c, candidates[k + 1]);
    if ((fa < 0.0) != (fb < 0.0))
      roots.push_back(bisect_root(c, candidates[k], candidates[k + 1]));
  }

  std::sort(roots.begin(), roots.end());
  return roots;
}

// Eigenvalues of a symmetric matrix, ascending with multiplicity.
inline std::vector<double> symmetric_eigenvalues(const Eigen::MatrixXd& a) {
  double bound = 0.0;
  for (int i = 0; i < a.rows(); ++i)
    bound = std::max(bound, a.row(i).cwiseAbs().sum());
  return real_roots(characteristic_polynomial(a), bound + 1.0);
}

}  // namespace charpoly_oracle
