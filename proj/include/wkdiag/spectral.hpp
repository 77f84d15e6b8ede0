#pragma once

#include <complex>
#include <vector>

#include "wkdiag/lattice.hpp"

namespace wkdiag {

using cplx = std::complex<double>;
using CVec = std::vector<cplx>;

// Truncated mode set |m| <= L*trunc with a dense box index for O(1) lookup.
struct ModeGrid {
  GlobalParams p;
  std::vector<IVec> modes;
  std::vector<int64_t> norm2;  // |m|^2 per mode
  int64_t radius = 0;
  int side = 0;                // 2*radius+1
  std::vector<int> box;        // dense box -> mode id or -1

  static ModeGrid make(const GlobalParams& p);
  int size() const { return (int)modes.size(); }
  int idx(const IVec& m) const;
};

// Convolution pipeline for the cubic nonlinearity:
//   out_k = sum_{k1-k2+k3=k} eps_{k1k2k3} e^{i zeta theta Omega} f_{k1} g_{k2} h_{k3}
// with theta the per-integer-Omega phase (theta = pi delta L^{2 gamma} t / L^2)
// and Omega in integer units. The prefactor (delta/2L^{d-gamma}) (i zeta) is
// NOT applied. g enters as given (callers conjugate when needed).
struct ConvolutionEngine {
  const ModeGrid* grid;
  int wside = 0;
  CVec w;            // workspace on the doubled box
  CVec xf, yf, zf;   // phased copies
  std::vector<cplx> phase;  // e^{i theta |m|^2} per mode, rebuilt per call
  std::vector<int> sum_idx;  // mode pair (i, j) -> w index of modes[i]+modes[j]

  explicit ConvolutionEngine(const ModeGrid& g);
  void apply(const CVec& f, const CVec& g, const CVec& h, double theta, int zeta, CVec& out);
};

// Deterministic splitmix64-based complex Gaussians (Box-Muller on uniforms).
struct GaussianSource {
  uint64_t state;
  explicit GaussianSource(uint64_t seed) : state(seed) {}
  uint64_t next_u64();
  double next_uniform();       // (0,1)
  cplx next_complex_gaussian();  // E|g|^2 = 1
};

}  // namespace wkdiag
