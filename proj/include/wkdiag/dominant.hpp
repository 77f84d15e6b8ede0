#pragma once

#include <complex>
#include <map>
#include <string>
#include <vector>

#include "wkdiag/couple.hpp"
#include "wkdiag/exppoly.hpp"

namespace wkdiag {

// Real polynomial in one variable, ascending coefficients.
using Poly = std::vector<double>;
Poly poly_mul(const Poly& a, const Poly& b);
Poly poly_integrate(const Poly& a);     // antiderivative vanishing at 0
double poly_eval(const Poly& a, double t);

// One enhanced dominant couple (Q, Z), realized: the couple, the class key
// of its equivalence class, the product over Z of 1/(zeta_n pi i), |Z|, and
// the diagonal coefficient polynomial JB~(t, t).
struct EnhancedDominant {
  std::string couple_key;  // Couple::serialize()
  std::string class_key;
  cplx z_factor;
  int z_size = 0;
  Poly jb_tt;
};

// All enhanced dominant couples of order <= max_order (max_order <= 6 at
// desk scale). Couples are enumerated by their unique derivations.
std::vector<EnhancedDominant> enumerate_enhanced_dominant(int max_order);

// Group by class key.
std::map<std::string, std::vector<EnhancedDominant>> dominant_classes(int max_order);

// G_X(t) = sum over class members of (prod_Z 1/(zeta pi i)) JB~(t,t).
cplx class_sum(const std::vector<EnhancedDominant>& members, double t);

// Classification of an arbitrary couple: nullopt-like empty result when not
// dominant; otherwise the (class_key, |Z|) of every special subset.
struct DominantInfo {
  bool dominant = false;
  std::vector<std::pair<std::string, int>> enhanced;  // (class key, |Z|)
};
DominantInfo dominant_classify(const Couple& c, int cap = 4);

// JB~(t,s) for a dominant couple (exact: piecewise-polynomial evaluation).
double dominant_JB(const Couple& c, double t, double s, int cap = 4);

// JB~*(t,s) for a dominant tree given by its chain-step polynomials: the
// ordered integral over t > t_1 > ... > t_m > s.
double dominant_JB_tree(const std::vector<Poly>& step_polys, double t, double s);

}  // namespace wkdiag
