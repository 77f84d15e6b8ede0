#pragma once

#include <cstdint>
#include <vector>

#include "wkdiag/spectral.hpp"

namespace wkdiag {

// Spectral state of the reduced system: complex amplitude per grid mode at
// time t, evolved in the interaction picture (phases in the coefficients).
struct ModeState {
  double t = 0.0;
  CVec a;
};

// a_k(0) = sqrt(n_in(k)) g_k with i.i.d. standard complex Gaussians.
ModeState sample_data(const GlobalParams& p, const ModeGrid& grid, uint64_t seed);

// d/dt a = C_+(a, conj a, a) per the reduced equation; exact convolution sum
// with the epsilon coefficient and the interaction phases.
CVec rhs(const GlobalParams& p, const ModeGrid& grid, ConvolutionEngine& eng,
         const ModeState& s, double nonlinearity_scale = 1.0);

// RK4 up to time T; dt is clamped so dt * delta L^{2gamma} * maxOmega <= 0.1.
ModeState integrate(const GlobalParams& p, const ModeGrid& grid, ConvolutionEngine& eng,
                    ModeState s0, double T, double dt, double nonlinearity_scale = 1.0);

double mass(const ModeState& s);  // sum_k |a_k|^2

struct EnsembleStats {
  std::vector<double> mean_spectrum;  // E|a_k(t)|^2 per mode
  std::vector<double> stderr_;
  int samples = 0;
  uint64_t seed = 0;
};

EnsembleStats ensemble_spectrum(const GlobalParams& p, int samples, double t, double dt,
                                uint64_t seed, int threads = 2);

// Expansion residual report: E || a(t) - sum_{n<=N} Jc_n(t) ||^2 for
// N = 0, 1, 2, with the same Gaussians the trajectory used. The norm is
// L^{-d} sum_k |.|^2.
struct ResidualReport {
  std::array<double, 3> residual{};  // per N
  std::array<double, 3> stderr_{};
  int samples = 0;
};

ResidualReport compare_expansion(const GlobalParams& p, int samples, double t, double dt,
                                 uint64_t seed, int threads = 2);

}  // namespace wkdiag
