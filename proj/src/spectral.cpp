#include "wkdiag/spectral.hpp"

#include <cmath>
#include <stdexcept>

namespace wkdiag {

ModeGrid ModeGrid::make(const GlobalParams& p) {
  ModeGrid g;
  g.p = p;
  g.radius = p.ball_radius_int();
  g.side = (int)(2 * g.radius + 1);
  g.modes = ball_points(p.d, g.radius);
  int box_size = 1;
  for (int i = 0; i < p.d; ++i) box_size *= g.side;
  g.box.assign(box_size, -1);
  g.norm2.resize(g.modes.size());
  for (int i = 0; i < (int)g.modes.size(); ++i) {
    g.norm2[i] = g.modes[i].norm2();
    int id = 0;
    for (int c = p.d - 1; c >= 0; --c) id = id * g.side + (int)(g.modes[i][c] + g.radius);
    g.box[id] = i;
  }
  return g;
}

int ModeGrid::idx(const IVec& m) const {
  int id = 0;
  for (int c = p.d - 1; c >= 0; --c) {
    int64_t x = m[c] + radius;
    if (x < 0 || x >= side) return -1;
    id = id * side + (int)x;
  }
  return box[id];
}

ConvolutionEngine::ConvolutionEngine(const ModeGrid& g) : grid(&g) {
  wside = 2 * g.side - 1;
  int wsize = 1;
  for (int i = 0; i < g.p.d; ++i) wsize *= wside;
  w.resize(wsize);
  int n = g.size();
  xf.resize(n);
  yf.resize(n);
  zf.resize(n);
  phase.resize(n);
  sum_idx.resize((size_t)n * n);
  int64_t R = g.radius;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      IVec q = g.modes[i] + g.modes[j];
      int id = 0;
      for (int c = g.p.d - 1; c >= 0; --c) id = id * wside + (int)(q[c] + 2 * R);
      sum_idx[(size_t)i * n + j] = id;
    }
}

void ConvolutionEngine::apply(const CVec& f, const CVec& g, const CVec& h, double theta,
                              int zeta, CVec& out) {
  const ModeGrid& G = *grid;
  int n = G.size();
  double th = zeta * theta;
  for (int i = 0; i < n; ++i) phase[i] = std::exp(cplx(0.0, th * (double)G.norm2[i]));
  for (int i = 0; i < n; ++i) {
    xf[i] = phase[i] * f[i];
    yf[i] = std::conj(phase[i]) * g[i];
    zf[i] = phase[i] * h[i];
  }
  // W(q) = sum_{m1+m3=q} X(m1) Z(m3) on the doubled box
  std::fill(w.begin(), w.end(), cplx(0.0));
  for (int i = 0; i < n; ++i) {
    const cplx xi = xf[i];
    if (xi == cplx(0.0)) continue;
    const int* row = &sum_idx[(size_t)i * n];
    for (int j = 0; j < n; ++j) w[row[j]] += xi * zf[j];
  }
  // out_k = conj(phase_k) * [ sum_{m2} W(k+m2) Y(m2) - corrections ]
  cplx sxy = 0.0, syz = 0.0;
  for (int i = 0; i < n; ++i) {
    sxy += xf[i] * yf[i];
    syz += yf[i] * zf[i];
  }
  out.assign(n, cplx(0.0));
  for (int k = 0; k < n; ++k) {
    cplx acc = 0.0;
    const int* row = &sum_idx[(size_t)k * n];
    for (int j = 0; j < n; ++j) acc += w[row[j]] * yf[j];
    // remove k2 = k1 (k3 = k) and k2 = k3 (k1 = k) terms; the all-equal term
    // then enters with the required -1 weight
    acc -= (sxy - xf[k] * yf[k]) * zf[k] + xf[k] * (syz - yf[k] * zf[k]) +
           2.0 * xf[k] * yf[k] * zf[k];
    out[k] = std::conj(phase[k]) * acc;
  }
}

uint64_t GaussianSource::next_u64() {
  state += 0x9e3779b97f4a7c15ull;
  uint64_t z = state;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

double GaussianSource::next_uniform() {
  return (next_u64() >> 11) * 0x1.0p-53 + 0x1.0p-54;
}

cplx GaussianSource::next_complex_gaussian() {
  // E|g|^2 = 1: both components N(0, 1/2)
  double u1 = next_uniform(), u2 = next_uniform();
  double r = std::sqrt(-std::log(u1));  // sqrt of Exp(1), scaled for 1/2 var
  return cplx(r * std::cos(2 * M_PI * u2), r * std::sin(2 * M_PI * u2));
}

}  // namespace wkdiag
