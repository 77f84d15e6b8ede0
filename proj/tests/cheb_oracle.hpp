#pragma once

// Test-only independent oracle for the iterated simplex time integrals:
// adaptive Chebyshev (Clenshaw-Curtis style) quadrature, entirely separate
// from the exponential-polynomial path in wkdiag/exppoly.hpp.

#include <cmath>
#include <complex>
#include <vector>

#include "wkdiag/exppoly.hpp"

namespace cheb {

using cplx = std::complex<double>;

struct Series {
  double tmax;
  std::vector<cplx> coeff;  // Chebyshev coefficients on [0, tmax]

  cplx eval(double t) const {
    double x = 2.0 * t / tmax - 1.0;
    // Clenshaw
    cplx b1 = 0.0, b2 = 0.0;
    for (int k = (int)coeff.size() - 1; k >= 1; --k) {
      cplx b0 = coeff[k] + 2.0 * x * b1 - b2;
      b2 = b1;
      b1 = b0;
    }
    return coeff[0] + x * b1 - b2;
  }
};

inline std::vector<cplx> vals_to_coeffs(const std::vector<cplx>& v) {
  // Chebyshev-Gauss-Lobatto points x_j = cos(pi j / N), j = 0..N
  int N = (int)v.size() - 1;
  std::vector<cplx> a(N + 1, 0.0);
  const double pi = 3.14159265358979323846;
  for (int k = 0; k <= N; ++k) {
    cplx s = 0.0;
    for (int j = 0; j <= N; ++j) {
      double w = (j == 0 || j == N) ? 0.5 : 1.0;
      s += w * v[j] * std::cos(pi * k * j / N);
    }
    a[k] = s * (2.0 / N);
    if (k == 0 || k == N) a[k] *= 0.5;
  }
  return a;
}

// Antiderivative with F(0) = 0 on [0, tmax].
inline Series antiderivative(const Series& f) {
  int N = (int)f.coeff.size() - 1;
  std::vector<cplx> A(N + 2, 0.0);
  auto c = [&](int k) { return k <= N ? f.coeff[k] : cplx(0.0); };
  double h = f.tmax / 2.0;  // dx -> dt scale
  for (int k = 1; k <= N + 1; ++k) A[k] = h * (c(k - 1) - c(k + 1)) / (2.0 * k);
  A[1] += h * c(0) / 2.0;  // A_1 = a_0 - a_2/2 in total
  // anchor: F(t=0) means x=-1: sum A_k (-1)^k = 0
  cplx at0 = 0.0;
  double sgn = -1.0;
  for (int k = 1; k <= N + 1; ++k) {
    at0 += sgn * A[k];
    sgn = -sgn;
  }
  A[0] = -at0;
  return Series{f.tmax, A};
}

// I_n(T) = int_0^T e^{i pi zeta alpha u} prod_children I_c(u) du, with all
// functions tabulated at N+1 CGL points.
inline Series node_series(const wkdiag::TimeForest& f, int n, double tmax, int N) {
  const double pi = 3.14159265358979323846;
  std::vector<cplx> vals(N + 1);
  std::vector<Series> kids;
  for (int c : f.nodes[n].children) kids.push_back(node_series(f, c, tmax, N));
  for (int j = 0; j <= N; ++j) {
    double x = std::cos(pi * j / N);
    double u = (x + 1.0) * tmax / 2.0;
    cplx g = std::exp(cplx(0.0, pi * f.nodes[n].zeta * f.nodes[n].alpha * u));
    for (auto& kd : kids) g *= kd.eval(u);
    vals[j] = g;
  }
  Series s{tmax, vals_to_coeffs(vals)};
  return antiderivative(s);
}

// Adaptive in N: doubles the grid until two resolutions agree.
inline cplx forest_integral(const wkdiag::TimeForest& f, double t, double s, double tol = 1e-11) {
  double tmax = std::max({t, s, 1e-6});
  for (int N = 256; N <= 4096; N *= 2) {
    auto value = [&](int NN) {
      cplx v = 1.0;
      for (int r : f.plus_roots) v *= node_series(f, r, tmax, NN).eval(t);
      for (int r : f.minus_roots) v *= node_series(f, r, tmax, NN).eval(s);
      return v;
    };
    cplx a = value(N), b = value(2 * N);
    if (std::abs(a - b) < tol) return b;
  }
  return forest_integral(f, t, s, tol * 10);
}

}  // namespace cheb
