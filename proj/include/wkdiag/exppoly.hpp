#pragma once

#include <complex>
#include <vector>

namespace wkdiag {

using cplx = std::complex<double>;

// Exact exponential-polynomial Sum c * t^p * e^{i pi f t}. Closed under
// products and definite integration from 0, which is all the iterated
// simplex time integrals need. Terms with |f - f'| <= freq_tol and equal
// power are merged; frequencies below near_zero are integrated by a 6-term
// series to avoid catastrophic cancellation.
struct ExpPoly {
  struct Term {
    cplx coeff;
    double freq = 0.0;
    int tpow = 0;
  };
  std::vector<Term> terms;

  static constexpr double freq_tol = 1e-9;
  static constexpr double near_zero = 1e-8;

  static ExpPoly one() { return constant(1.0); }
  static ExpPoly constant(cplx c);
  static ExpPoly exponential(cplx c, double freq, int tpow = 0);

  cplx eval(double t) const;
  ExpPoly& add_term(cplx c, double f, int p);
  void merge();

  friend ExpPoly operator+(const ExpPoly& a, const ExpPoly& b);
  friend ExpPoly operator*(const ExpPoly& a, const ExpPoly& b);
  ExpPoly scaled(cplx c) const;

  // T |-> integral_0^T of this; exact antiderivative per term.
  ExpPoly integrate() const;
};

// A forest of time-integration nodes: value(T) of node n is
//   I_n(T) = int_0^T e^{zeta_n i pi alpha_n u} prod_children I_c(u) du.
// Roots attached to the plus tree integrate up to t, minus roots up to s.
struct TimeForest {
  struct Node {
    double alpha = 0.0;
    int zeta = +1;
    std::vector<int> children;
  };
  std::vector<Node> nodes;
  std::vector<int> plus_roots, minus_roots;
};

// Exact recursive integration; returns the full value
//   prod_{r in plus} I_r(t) * prod_{r in minus} I_r(s).
cplx time_integral(const TimeForest& f, double t, double s);
// The per-root ExpPoly (in the upper limit) for callers that reuse it.
ExpPoly time_integral_poly(const TimeForest& f, int root);

}  // namespace wkdiag
