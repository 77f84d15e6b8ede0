#include "wkdiag/wke.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>

namespace wkdiag {

McGrid profile_grid(const GlobalParams& p, const ModeGrid& grid) {
  McGrid g(grid.size());
  for (int i = 0; i < grid.size(); ++i) g[i] = p.n_in(grid.modes[i]);
  return g;
}

namespace {

inline double bracket(const McGrid& f1, const McGrid& f2, const McGrid& f3, int i1, int i2,
                      int i3, int ik) {
  return f1[i1] * f2[i2] * f3[i3] - f1[ik] * f2[i2] * f3[i3] + f1[i1] * f2[ik] * f3[i3] -
         f1[i1] * f2[i2] * f3[ik];
}

int64_t gcd64(int64_t a, int64_t b) {
  a = std::abs(a);
  b = std::abs(b);
  while (b) {
    a %= b;
    std::swap(a, b);
  }
  return a;
}

}  // namespace

McGrid wke_collision_exact(const ModeGrid& grid, const McGrid& f1, const McGrid& f2,
                           const McGrid& f3) {
  const auto& M = grid.modes;
  int n = grid.size();
  McGrid out(n, 0.0);
  if (grid.p.d == 1) {
    // <a, b> = 0 in d=1 means a = 0 or b = 0
    for (int ik = 0; ik < n; ++ik)
      for (int i1 = 0; i1 < n; ++i1) {
        IVec a = M[i1] - M[ik];
        if (a.is_zero()) {
          for (int i3 = 0; i3 < n; ++i3) {
            int i2 = grid.idx(M[i1] + M[i3] - M[ik]);
            if (i2 >= 0) out[ik] += bracket(f1, f2, f3, i1, i2, i3, ik);
          }
        } else {
          int i3 = ik, i2 = i1;
          out[ik] += bracket(f1, f2, f3, i1, i2, i3, ik);
        }
      }
    return out;
  }
  if (grid.p.d == 2) {
    for (int ik = 0; ik < n; ++ik)
      for (int i1 = 0; i1 < n; ++i1) {
        IVec a = M[i1] - M[ik];
        if (a.is_zero()) {
          for (int i3 = 0; i3 < n; ++i3) {
            int i2 = grid.idx(M[i1] + M[i3] - M[ik]);
            if (i2 >= 0) out[ik] += bracket(f1, f2, f3, i1, i2, i3, ik);
          }
          continue;
        }
        // k - k3 = j * perp(a) / g: walk the perpendicular lattice line
        int64_t g = gcd64(a[0], a[1]);
        IVec step;
        step.c = {-a[1] / g, a[0] / g, 0};
        for (int64_t j = -2 * grid.radius; j <= 2 * grid.radius; ++j) {
          IVec k3 = M[ik];
          k3.c[0] -= j * step[0];
          k3.c[1] -= j * step[1];
          int i3 = grid.idx(k3);
          if (i3 < 0) continue;
          int i2 = grid.idx(M[i1] + k3 - M[ik]);
          if (i2 >= 0) out[ik] += bracket(f1, f2, f3, i1, i2, i3, ik);
        }
      }
    return out;
  }
  // d = 3: direct scan of k3 with the integer check (budgeted use)
  for (int ik = 0; ik < n; ++ik)
    for (int i1 = 0; i1 < n; ++i1) {
      IVec a = M[i1] - M[ik];
      for (int i3 = 0; i3 < n; ++i3) {
        if (dot(a, M[ik] - M[i3]) != 0) continue;
        int i2 = grid.idx(M[i1] + M[i3] - M[ik]);
        if (i2 >= 0) out[ik] += bracket(f1, f2, f3, i1, i2, i3, ik);
      }
    }
  return out;
}

double wke_collision_reference_at(const ModeGrid& grid, const McGrid& f1, const McGrid& f2,
                                  const McGrid& f3, const IVec& k) {
  const auto& M = grid.modes;
  int ik = grid.idx(k);
  if (ik < 0) throw std::invalid_argument("reference_at: k outside the grid");
  double acc = 0.0;
  for (int i1 = 0; i1 < grid.size(); ++i1)
    for (int i3 = 0; i3 < grid.size(); ++i3) {
      if (dot(M[i1] - k, k - M[i3]) != 0) continue;
      int i2 = grid.idx(M[i1] + M[i3] - k);
      if (i2 >= 0) acc += bracket(f1, f2, f3, i1, i2, i3, ik);
    }
  return acc;
}

McGrid wke_collision_reference(const ModeGrid& grid, const McGrid& f1, const McGrid& f2,
                               const McGrid& f3) {
  McGrid out(grid.size(), 0.0);
  for (int ik = 0; ik < grid.size(); ++ik)
    out[ik] = wke_collision_reference_at(grid, f1, f2, f3, grid.modes[ik]);
  return out;
}

McGrid wke_collision_mollified(const ModeGrid& grid, const McGrid& f1, const McGrid& f2,
                               const McGrid& f3, double width) {
  const auto& M = grid.modes;
  int n = grid.size();
  McGrid out(n, 0.0);
  double L2 = grid.p.L * grid.p.L;
  for (int ik = 0; ik < n; ++ik)
    for (int i1 = 0; i1 < n; ++i1)
      for (int i3 = 0; i3 < n; ++i3) {
        int i2 = grid.idx(M[i1] + M[i3] - M[ik]);
        if (i2 < 0) continue;
        double om = 2.0 * (double)dot(M[i1] - M[ik], M[ik] - M[i3]) / L2;
        double moll = std::exp(-om * om / (2.0 * width * width)) /
                      (width * std::sqrt(2.0 * M_PI));
        out[ik] += moll * bracket(f1, f2, f3, i1, i2, i3, ik);
      }
  return out;
}

McGrid McPoly::eval(double t) const {
  McGrid out(coeff.empty() ? 0 : coeff[0].size(), 0.0);
  double tp = 1.0;
  for (const McGrid& c : coeff) {
    for (size_t i = 0; i < c.size(); ++i) out[i] += tp * c[i];
    tp *= t;
  }
  return out;
}

std::vector<McPoly> wke_taylor(const GlobalParams& p, const ModeGrid& grid, int n_max) {
  if (n_max > 4) throw std::invalid_argument("wke_taylor: n_max cap is 4");
  std::vector<McPoly> mc(n_max + 1);
  mc[0].coeff = {profile_grid(p, grid)};
  for (int n = 1; n <= n_max; ++n) {
    // integrand coefficients: sum over n1+n2+n3 = n-1 of K applied per power
    std::vector<McGrid> integrand(n, McGrid(grid.size(), 0.0));  // powers 0..n-1
    for (int n1 = 0; n1 < n; ++n1)
      for (int n2 = 0; n1 + n2 < n; ++n2) {
        int n3 = n - 1 - n1 - n2;
        for (int a = 0; a < (int)mc[n1].coeff.size(); ++a)
          for (int b = 0; b < (int)mc[n2].coeff.size(); ++b)
            for (int c = 0; c < (int)mc[n3].coeff.size(); ++c) {
              McGrid k = wke_collision_exact(grid, mc[n1].coeff[a], mc[n2].coeff[b],
                                             mc[n3].coeff[c]);
              int pw = a + b + c;
              for (int i = 0; i < grid.size(); ++i) integrand[pw][i] += k[i];
            }
      }
    mc[n].coeff.assign(n + 1, McGrid(grid.size(), 0.0));
    for (int pw = 0; pw < n; ++pw)
      for (int i = 0; i < grid.size(); ++i)
        mc[n].coeff[pw + 1][i] = p.delta * integrand[pw][i] / double(pw + 1);
  }
  return mc;
}

}  // namespace wkdiag
