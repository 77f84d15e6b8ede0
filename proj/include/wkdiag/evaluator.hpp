#pragma once

#include <complex>
#include <cstdint>
#include <vector>

#include "wkdiag/couple.hpp"
#include "wkdiag/exppoly.hpp"
#include "wkdiag/spectral.hpp"

namespace wkdiag {

struct KqValue {
  cplx value = 0.0;
  long long decorations_visited = 0;  // decorations with nonzero epsilon
};

// Exact lattice sum over truncated k-decorations of the couple (defkq):
//   (delta/2L^{d-gamma})^n zeta(Q) sum_E eps_E B(t,s) prod^{(+)} n_in(k_l).
// Throws when (#ball)^(free pairs) exceeds the budget.
KqValue eval_Kq(const Couple& c, const GlobalParams& p, const IVec& k, double t, double s,
                long long budget = 100000000);

// Sum of K_Q(t, t, k) over all couples with n(T+) = n1, n(T-) = n2.
cplx eval_Kq_order_sum(const GlobalParams& p, int n1, int n2, const IVec& k, double t,
                       long long budget = 100000000);

// Per-sample J_T for one tree (defjt), with the Gaussians given per mode of
// the grid. Exact lattice sum; budget-checked.
cplx eval_Jc_tree(const Tree& tree, const GlobalParams& p, const ModeGrid& grid,
                  const CVec& gauss, double t, const IVec& k, long long budget = 100000000);

// J_n grids (n = 0, 1, 2) for one sample of Gaussians, via the Duhamel
// recursion J_n' = sum_{n1+n2+n3=n-1} C_+(J_{n1}, conj J_{n2}, J_{n3})
// integrated with composite Gauss-Legendre panels (exact to quadrature
// accuracy ~1e-12 at desk phase rates).
struct JGrids {
  CVec j0, j1, j2;
};
JGrids eval_J_grids(const GlobalParams& p, const ModeGrid& grid, ConvolutionEngine* eng,
                    const CVec& gauss, double t, int panels = 8);

struct McCorrelation {
  std::vector<cplx> mean;       // per mode: MC estimate of E(J_{n1} conj J_{n2})
  std::vector<double> stderr_;  // batch-means standard error (complex modulus)
  std::vector<cplx> exact;      // sum over couples of K_Q(t,t,k)
  std::vector<double> z;        // |mean-exact| / stderr
  int samples = 0;
};

// Monte-Carlo cross-check of the Isserlis identity (correlation): E(J_{n1}
// conj J_{n2}) vs the exact couple sum, every mode of the grid. Batched in
// 20 fixed index ranges; deterministic for fixed seed independent of the
// thread count.
McCorrelation mc_correlation(const GlobalParams& p, int n1, int n2, int samples, double t,
                             uint64_t seed, int threads = 2);

// Time integral factor of (defkq) for integer resonances, memoizable by the
// Omega tuple. Exposed for tests.
cplx couple_time_integral(const Couple& c, const GlobalParams& p,
                          const std::vector<std::pair<NodeRef, int64_t>>& omegas, double t,
                          double s);

}  // namespace wkdiag
