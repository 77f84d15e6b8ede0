#include "doctest.h"
#include "wkdiag/nls_lab.hpp"
#include "wkdiag/wke.hpp"

using namespace wkdiag;

TEST_SUITE_BEGIN("wke_nls");

namespace {
GlobalParams lab_params() {
  GlobalParams p;
  p.d = 2;
  p.L = 3.0;
  p.gamma = 0.5;
  p.delta = 0.05;
  p.trunc = 2.0;
  return p;
}
}  // namespace

TEST_CASE("constant profile: collision vanishes identically") {
  GlobalParams p = lab_params();
  ModeGrid grid = ModeGrid::make(p);
  McGrid c(grid.size(), 0.7);
  McGrid out = wke_collision_exact(grid, c, c, c);
  for (double x : out) CHECK(std::abs(x) <= 1e-12);
}

TEST_CASE("single-point support: collision vanishes") {
  GlobalParams p = lab_params();
  ModeGrid grid = ModeGrid::make(p);
  McGrid f(grid.size(), 0.0);
  f[grid.idx(IVec{{1, 1, 0}})] = 1.0;
  McGrid out = wke_collision_exact(grid, f, f, f);
  for (double x : out) CHECK(std::abs(x) <= 1e-12);
}

TEST_CASE("exact-resonance operator matches the brute-force reference") {
  GlobalParams p = lab_params();
  p.L = 8.0;
  p.trunc = 1.0;  // Z^2_8 with |k| <= 1: keeps the reference loop cheap here
  ModeGrid grid = ModeGrid::make(p);
  McGrid f = profile_grid(p, grid);
  McGrid a = wke_collision_exact(grid, f, f, f);
  McGrid b = wke_collision_reference(grid, f, f, f);
  for (int i = 0; i < grid.size(); ++i) CHECK(std::abs(a[i] - b[i]) <= 1e-10);
}

TEST_CASE("mass and energy conservation of the exact-resonance collision") {
  GlobalParams p = lab_params();
  ModeGrid grid = ModeGrid::make(p);
  McGrid f = profile_grid(p, grid);
  // break symmetry a little
  for (int i = 0; i < grid.size(); ++i) f[i] *= 1.0 + 0.1 * (i % 3);
  McGrid out = wke_collision_exact(grid, f, f, f);
  double mass = 0.0, energy = 0.0, scale = 0.0;
  for (int i = 0; i < grid.size(); ++i) {
    mass += out[i];
    energy += (double)grid.norm2[i] * out[i];
    scale += std::abs(out[i]) * (1.0 + (double)grid.norm2[i]);
  }
  CHECK(std::abs(mass) <= 1e-10 * std::max(1.0, scale));
  CHECK(std::abs(energy) <= 1e-10 * std::max(1.0, scale));
}

TEST_CASE("Taylor iterates: Mc_0 = n_in, constant profile freezes, Mc_1 = delta t K") {
  GlobalParams p = lab_params();
  ModeGrid grid = ModeGrid::make(p);
  auto mc = wke_taylor(p, grid, 2);
  McGrid nin = profile_grid(p, grid);
  for (int i = 0; i < grid.size(); ++i) CHECK(mc[0].eval(0.37)[i] == nin[i]);
  // Mc_1(t) = delta t K(n_in,n_in,n_in)
  McGrid K = wke_collision_exact(grid, nin, nin, nin);
  auto m1 = mc[1].eval(0.37);
  for (int i = 0; i < grid.size(); ++i)
    CHECK(std::abs(m1[i] - p.delta * 0.37 * K[i]) <= 1e-12 * std::max(1.0, std::abs(K[i])));
  // constant profile: all higher iterates vanish
  GlobalParams pc = p;
  pc.profile = [](const std::array<double, 3>&) { return 0.4; };
  auto mcc = wke_taylor(pc, grid, 2);
  for (int n = 1; n <= 2; ++n)
    for (double x : mcc[n].eval(1.0)) CHECK(std::abs(x) <= 1e-12);
}

TEST_CASE("sample_data moments and determinism") {
  GlobalParams p = lab_params();
  ModeGrid grid = ModeGrid::make(p);
  int M = 4000;
  std::vector<double> mean2(grid.size(), 0.0);
  cplx mean1 = 0.0;
  for (int s = 0; s < M; ++s) {
    ModeState st = sample_data(p, grid, 1000 + s);
    for (int i = 0; i < grid.size(); ++i) mean2[i] += std::norm(st.a[i]);
    mean1 += st.a[0];
  }
  int i0 = grid.idx(IVec{{0, 0, 0}});
  CHECK(std::abs(mean2[i0] / M - p.n_in(grid.modes[i0])) < 0.1);
  CHECK(std::abs(mean1) / M < 0.05);
  ModeState a = sample_data(p, grid, 7), b = sample_data(p, grid, 7);
  for (int i = 0; i < grid.size(); ++i) CHECK(a.a[i] == b.a[i]);
}

TEST_CASE("rhs: single occupied mode gives the epsilon = -1 self-triple") {
  GlobalParams p = lab_params();
  ModeGrid grid = ModeGrid::make(p);
  ConvolutionEngine eng(grid);
  ModeState s;
  s.t = 0.3;
  s.a.assign(grid.size(), 0.0);
  int i0 = grid.idx(IVec{{1, 0, 0}});
  s.a[i0] = cplx(0.4, -0.2);
  CVec d = rhs(p, grid, eng, s);
  cplx expect = -cplx(0, 1) * p.delta / (2.0 * std::pow(p.L, p.d - p.gamma)) *
                std::norm(s.a[i0]) * s.a[i0];
  for (int i = 0; i < grid.size(); ++i) {
    if (i == i0) CHECK(std::abs(d[i] - expect) < 1e-15);
    else CHECK(std::abs(d[i]) < 1e-15);
  }
  // zero state -> zero
  ModeState z;
  z.t = 0.0;
  z.a.assign(grid.size(), 0.0);
  for (auto& x : rhs(p, grid, eng, z)) CHECK(std::abs(x) == 0.0);
}

TEST_CASE("rhs matches a finite difference of integrate") {
  GlobalParams p = lab_params();
  ModeGrid grid = ModeGrid::make(p);
  ConvolutionEngine eng(grid);
  ModeState s0 = sample_data(p, grid, 3);
  s0.t = 0.2;
  CVec d = rhs(p, grid, eng, s0);
  double h = 1e-6;
  ModeState s1 = integrate(p, grid, eng, s0, s0.t + h, h / 8);
  for (int i = 0; i < grid.size(); i += 7) {
    cplx fd = (s1.a[i] - s0.a[i]) / h;
    CHECK(std::abs(fd - d[i]) < 1e-7);
  }
}

TEST_CASE("linear regime: zero nonlinearity keeps a constant") {
  GlobalParams p = lab_params();
  ModeGrid grid = ModeGrid::make(p);
  ConvolutionEngine eng(grid);
  ModeState s0 = sample_data(p, grid, 11);
  ModeState s1 = integrate(p, grid, eng, s0, 0.5, 0.01, 0.0);
  for (int i = 0; i < grid.size(); ++i) CHECK(s1.a[i] == s0.a[i]);
}

TEST_CASE("mass conservation and RK4 order-4 convergence") {
  GlobalParams p = lab_params();
  ModeGrid grid = ModeGrid::make(p);
  ConvolutionEngine eng(grid);
  ModeState s0 = sample_data(p, grid, 13);
  double m0 = mass(s0);
  ModeState s1 = integrate(p, grid, eng, s0, 1.0, 0.005);
  CHECK(std::abs(mass(s1) - m0) <= 1e-8 * m0);
  // Richardson: dt and dt/2 give 4th-order decay
  // stay under the phase-resolution clamp so the step sizes are honoured
  ModeState a = integrate(p, grid, eng, s0, 0.5, 0.02);
  ModeState b = integrate(p, grid, eng, s0, 0.5, 0.01);
  ModeState r = integrate(p, grid, eng, s0, 0.5, 0.005);
  double ea = 0, eb = 0;
  for (int i = 0; i < grid.size(); ++i) {
    ea += std::abs(a.a[i] - r.a[i]);
    eb += std::abs(b.a[i] - r.a[i]);
  }
  double order = std::log2(ea / eb);
  CHECK(order > 3.3);  // 4th order up to the Richardson-reference bias
}

TEST_CASE("expansion residual: N=0 positive, nonincreasing over N") {
  GlobalParams p = lab_params();
  p.delta = 0.01;
  auto rep = compare_expansion(p, 160, 0.5, 0.01, 2024, 2);
  CHECK(rep.residual[0] > 0.0);
  CHECK(rep.residual[1] <= rep.residual[0] + 2 * (rep.stderr_[0] + rep.stderr_[1]));
  CHECK(rep.residual[2] <= rep.residual[1] + 2 * (rep.stderr_[1] + rep.stderr_[2]));
}

TEST_SUITE_END();
