#pragma once

#include <optional>
#include <string>
#include <vector>

#include "wkdiag/molecule.hpp"
#include "wkdiag/spectral.hpp"
#include "wkdiag/vine.hpp"

namespace wkdiag {

// Counting problem of the appendix: a set of tuples, each imposing
//   sum_i eps_i k_{j_i} = k  and  |sum_i eps_i |k_{j_i}|^2 - beta| <= delta^{-1} L^{-2gamma},
// over variables restricted to unit balls |k_j - c_j| <= 1.
struct CountQuery {
  struct Tuple {
    std::vector<std::pair<int, int>> elems;  // (variable, sign)
    IVec k;       // integer units (vector equation times L)
    double beta;  // physical units
  };
  int n_vars = 0;
  std::vector<Tuple> tuples;
  std::vector<IVec> centers;  // integer units
};

struct CountResult {
  long long count = 0;
  double bound = 0.0;  // the stated bound of the cited clause
  double ratio = 0.0;  // count / bound
  std::string clause;
};

// Exact count by full enumeration (tuple-wise elimination with pruning).
long long count_solutions(const CountQuery& q, const GlobalParams& p,
                          long long budget = 2000000000);

// Stated bound values. gap is the dyadic R or P parameter when the clause
// uses one (pass 0 when the clause's P = 0 branch applies).
double bound_basiccount(const GlobalParams& p, int clause, double gap);
double bound_c1(const GlobalParams& p, double gap);  // (countc1-1)
double bound_c2(const GlobalParams& p);              // (countc2-1)

CountResult count_oracle(const CountQuery& q, const GlobalParams& p, int clause, double gap,
                         long long budget = 2000000000);

// The two-variable and three-variable systems of the gap counting lemma:
//   c1: |x.y - alpha| <= w, |r.xi - beta| <= w, xi in {x, y, x+y}
//   c2: |x.y - alpha| <= w, |zeta.z - beta| <= w, zeta in {x-v, x+y-v, x+y-v-z}
// with w = delta^{-1} L^{-2gamma}; variables in unit balls around centers.
long long count_c1(const GlobalParams& p, double alpha, double beta, const IVec& r, int xi_choice,
                   const std::array<IVec, 2>& centers);
long long count_c2(const GlobalParams& p, double alpha, double beta, const IVec& v,
                   int zeta_choice, const std::array<IVec, 3>& centers);

// ----- molecule decoration counting (the quantity A) -----

struct Restriction {
  std::vector<IVec> c_v;           // per atom (integer units); empty = all zero
  std::vector<double> beta;        // per atom; empty = no Gamma restriction
  std::vector<IVec> window;        // per bond k_l^0 (integer units); required
  // optional dyadic gap buckets: (atom, bonds, dyadic exponent) constraints
  struct GapBucket {
    int atom, l1, l2, dyadic;
  };
  std::vector<GapBucket> gaps;
};

struct CountSummary {
  long long c_exact = 0;    // brute-force decoration count (sup over restrictions)
  double a_value = 0.0;     // the A quantity
  double p_factor = 1.0;    // product of X_j^{z_j} over maximal ladders
  int rho = 0, q = 0, m_prime = 0;
  int chi = 0;
  int sg_atoms = 0;
};

// A = c * L^{-(d-gamma) chi} * (Cplus delta^{-1/2})^{-chi} * P * (log L)^{C p};
// c by exhaustive enumeration over the restriction sets (supremum).
CountSummary compute_A(const Molecule& m, const GlobalParams& p,
                       const std::vector<Restriction>& restrictions, double c_plus = 2.0,
                       double log_exponent = 1.0, long long budget = 100000000);

}  // namespace wkdiag
