#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

namespace wkdiag {

// Lattice vectors k in Z_L^d are stored as integer coordinate tuples m with
// k = m / L. All decoration arithmetic stays in integers; the scale 1/L is
// applied only when a real value is needed.
struct IVec {
  std::array<int64_t, 3> c{0, 0, 0};

  int64_t& operator[](int i) { return c[i]; }
  int64_t operator[](int i) const { return c[i]; }
  friend IVec operator+(IVec a, const IVec& b) {
    for (int i = 0; i < 3; ++i) a.c[i] += b.c[i];
    return a;
  }
  friend IVec operator-(IVec a, const IVec& b) {
    for (int i = 0; i < 3; ++i) a.c[i] -= b.c[i];
    return a;
  }
  friend IVec operator-(IVec a) {
    for (int i = 0; i < 3; ++i) a.c[i] = -a.c[i];
    return a;
  }
  friend bool operator==(const IVec& a, const IVec& b) { return a.c == b.c; }
  friend bool operator!=(const IVec& a, const IVec& b) { return !(a == b); }
  friend bool operator<(const IVec& a, const IVec& b) { return a.c < b.c; }
  int64_t norm2() const { return c[0] * c[0] + c[1] * c[1] + c[2] * c[2]; }
  bool is_zero() const { return c[0] == 0 && c[1] == 0 && c[2] == 0; }
};

inline int64_t dot(const IVec& a, const IVec& b) {
  return a.c[0] * b.c[0] + a.c[1] * b.c[1] + a.c[2] * b.c[2];
}

struct IVecHash {
  size_t operator()(const IVec& v) const {
    uint64_t h = 1469598103934665603ull;
    for (int i = 0; i < 3; ++i) {
      h ^= static_cast<uint64_t>(v.c[i]) + 0x9e3779b97f4a7c15ull;
      h *= 1099511628211ull;
    }
    return static_cast<size_t>(h);
  }
};

// Reference initial spectrum n_in; must be nonnegative and decaying.
using Profile = std::function<double(const std::array<double, 3>&)>;

inline Profile gaussian_profile(double amp = 1.0, double width = 1.0) {
  return [amp, width](const std::array<double, 3>& k) {
    double r2 = k[0] * k[0] + k[1] * k[1] + k[2] * k[2];
    return amp * std::exp(-r2 / (width * width));
  };
}

// Global model parameters. alpha = L^{-gamma} and T_kin = L^{2 gamma}/2 are
// derived, as are gamma0 = min(gamma, 1-gamma) and
// gamma1 = min(2 gamma, 1, 2(d-1)(1-gamma)).
struct GlobalParams {
  int d = 2;
  double L = 3.0;
  double gamma = 0.5;
  double delta = 0.05;
  double trunc = 2.0;
  double eta = 0.01;
  Profile profile = gaussian_profile();

  void validate() const {
    if (d < 1 || d > 3) throw std::invalid_argument("d must be in {1,2,3}");
    if (L <= 1.0) throw std::invalid_argument("L must be > 1");
    if (gamma <= 0.0 || gamma >= 1.0) throw std::invalid_argument("gamma must be in (0,1)");
    if (delta <= 0.0 || delta >= 1.0) throw std::invalid_argument("delta must be in (0,1)");
    if (trunc <= 0.0) throw std::invalid_argument("trunc must be > 0");
  }

  double alpha() const { return std::pow(L, -gamma); }
  double t_kin() const { return 0.5 * std::pow(L, 2.0 * gamma); }
  double gamma0() const { return std::min(gamma, 1.0 - gamma); }
  double gamma1() const {
    return std::min({2.0 * gamma, 1.0, 2.0 * (d - 1) * (1.0 - gamma)});
  }
  // Resonance phase scale: the exponent in e^{zeta pi i delta L^{2gamma} Omega t}.
  double omega_scale() const { return delta * std::pow(L, 2.0 * gamma); }
  // SG/LG threshold L^{-gamma+eta} in physical units.
  double sg_threshold() const { return std::pow(L, -gamma + eta); }

  std::array<double, 3> phys(const IVec& m) const {
    return {m[0] / L, m[1] / L, m[2] / L};
  }
  double n_in(const IVec& m) const { return profile(phys(m)); }

  // Integer radius of the truncation ball: |m| <= L*trunc.
  int64_t ball_radius_int() const {
    return static_cast<int64_t>(std::floor(L * trunc + 1e-9));
  }
  bool in_ball(const IVec& m) const {
    int64_t r = ball_radius_int();
    return m.norm2() <= r * r;
  }
};

// All lattice points m with |m| <= radius (integer radius), d-dimensional.
inline std::vector<IVec> ball_points(int d, int64_t radius) {
  std::vector<IVec> pts;
  int64_t r2 = radius * radius;
  auto push = [&](int64_t x, int64_t y, int64_t z) {
    IVec v;
    v.c = {x, y, z};
    if (v.norm2() <= r2) pts.push_back(v);
  };
  if (d == 1) {
    for (int64_t x = -radius; x <= radius; ++x) push(x, 0, 0);
  } else if (d == 2) {
    for (int64_t x = -radius; x <= radius; ++x)
      for (int64_t y = -radius; y <= radius; ++y) push(x, y, 0);
  } else {
    for (int64_t x = -radius; x <= radius; ++x)
      for (int64_t y = -radius; y <= radius; ++y)
        for (int64_t z = -radius; z <= radius; ++z) push(x, y, z);
  }
  return pts;
}

}  // namespace wkdiag
