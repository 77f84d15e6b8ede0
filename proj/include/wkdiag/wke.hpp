#pragma once

#include <vector>

#include "wkdiag/spectral.hpp"

namespace wkdiag {

// Real spectrum values per mode of a grid.
using McGrid = std::vector<double>;

McGrid profile_grid(const GlobalParams& p, const ModeGrid& grid);

// Collision operator on the truncated lattice, exact-resonance mode: sums
// over lattice triples k1 - k2 + k3 = k with <k1-k, k-k3> = 0 in integer
// arithmetic, with the bracket
//   { f1(k1) f2(k2) f3(k3) - f1(k) f2(k2) f3(k3)
//     + f1(k1) f2(k) f3(k3) - f1(k1) f2(k2) f3(k) }.
McGrid wke_collision_exact(const ModeGrid& grid, const McGrid& f1, const McGrid& f2,
                           const McGrid& f3);

// Independent brute-force route (triple loop with the integer resonance
// check); used as the oracle.
McGrid wke_collision_reference(const ModeGrid& grid, const McGrid& f1, const McGrid& f2,
                               const McGrid& f3);
double wke_collision_reference_at(const ModeGrid& grid, const McGrid& f1, const McGrid& f2,
                                  const McGrid& f3, const IVec& k);

// Mollified mode: delta(Omega) replaced by a Gaussian of the given width in
// physical resonance units.
McGrid wke_collision_mollified(const ModeGrid& grid, const McGrid& f1, const McGrid& f2,
                               const McGrid& f3, double width);

// Taylor iterates of the kinetic equation: Mc_0 = n_in and
//   Mc_n(t) = delta sum_{n1+n2+n3=n-1} int_0^t K(Mc_{n1}, Mc_{n2}, Mc_{n3}) dt'.
// Each iterate is a polynomial in t: coefficient grids per power.
struct McPoly {
  std::vector<McGrid> coeff;  // coeff[p] multiplies t^p
  McGrid eval(double t) const;
};

std::vector<McPoly> wke_taylor(const GlobalParams& p, const ModeGrid& grid, int n_max);

}  // namespace wkdiag
