#include "wkdiag/nls_lab.hpp"

#include <atomic>
#include <cmath>
#include <future>
#include <stdexcept>

#include "wkdiag/evaluator.hpp"

namespace wkdiag {

ModeState sample_data(const GlobalParams& p, const ModeGrid& grid, uint64_t seed) {
  ModeState s;
  s.t = 0.0;
  s.a.resize(grid.size());
  GaussianSource src(seed);
  for (int i = 0; i < grid.size(); ++i)
    s.a[i] = std::sqrt(p.n_in(grid.modes[i])) * src.next_complex_gaussian();
  return s;
}

CVec rhs(const GlobalParams& p, const ModeGrid& grid, ConvolutionEngine& eng,
         const ModeState& s, double scale) {
  CVec out(grid.size()), ac(grid.size());
  for (int i = 0; i < grid.size(); ++i) ac[i] = std::conj(s.a[i]);
  double theta = M_PI * p.omega_scale() / (p.L * p.L);
  eng.apply(s.a, ac, s.a, theta * s.t, +1, out);
  cplx pref = scale * p.delta / (2.0 * std::pow(p.L, p.d - p.gamma)) * cplx(0, 1);
  for (auto& x : out) x *= pref;
  return out;
}

ModeState integrate(const GlobalParams& p, const ModeGrid& grid, ConvolutionEngine& eng,
                    ModeState s, double T, double dt, double scale) {
  double max_omega = 4.0 * (double)(grid.radius * grid.radius) / (p.L * p.L);
  double cap = 0.1 / std::max(1e-12, p.omega_scale() * max_omega);
  dt = std::min(dt, cap);
  int n = grid.size();
  CVec k1, k2, k3, k4;
  ModeState tmp;
  tmp.a.resize(n);
  while (s.t < T - 1e-12) {
    double h = std::min(dt, T - s.t);
    k1 = rhs(p, grid, eng, s, scale);
    tmp.t = s.t + h / 2;
    for (int i = 0; i < n; ++i) tmp.a[i] = s.a[i] + 0.5 * h * k1[i];
    k2 = rhs(p, grid, eng, tmp, scale);
    for (int i = 0; i < n; ++i) tmp.a[i] = s.a[i] + 0.5 * h * k2[i];
    k3 = rhs(p, grid, eng, tmp, scale);
    tmp.t = s.t + h;
    for (int i = 0; i < n; ++i) tmp.a[i] = s.a[i] + h * k3[i];
    k4 = rhs(p, grid, eng, tmp, scale);
    for (int i = 0; i < n; ++i)
      s.a[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
    s.t += h;
  }
  return s;
}

double mass(const ModeState& s) {
  double m = 0.0;
  for (auto& x : s.a) m += std::norm(x);
  return m;
}

namespace {

template <typename Fn>
void run_batches(int samples, int threads, Fn&& per_batch) {
  constexpr int kBatches = 20;
  if (threads <= 1) {
    for (int b = 0; b < kBatches; ++b) per_batch(b);
    return;
  }
  std::atomic<int> next{0};
  std::vector<std::future<void>> fut;
  for (int th = 0; th < threads; ++th)
    fut.push_back(std::async(std::launch::async, [&]() {
      for (;;) {
        int b = next.fetch_add(1);
        if (b >= 20) return;
        per_batch(b);
      }
    }));
  for (auto& f : fut) f.get();
}

uint64_t sample_seed(uint64_t seed, int s) {
  return seed * 0x9e3779b97f4a7c15ull + (uint64_t)s * 2654435761ull + 1;
}

}  // namespace

EnsembleStats ensemble_spectrum(const GlobalParams& p, int samples, double t, double dt,
                                uint64_t seed, int threads) {
  ModeGrid grid = ModeGrid::make(p);
  int n = grid.size();
  constexpr int kBatches = 20;
  std::vector<std::vector<double>> bsum(kBatches, std::vector<double>(n, 0.0));
  std::vector<int> bcount(kBatches, 0);
  run_batches(samples, threads, [&](int b) {
    ConvolutionEngine eng(grid);
    int lo = (int)((long long)samples * b / kBatches);
    int hi = (int)((long long)samples * (b + 1) / kBatches);
    for (int s = lo; s < hi; ++s) {
      ModeState st = sample_data(p, grid, sample_seed(seed, s));
      st = integrate(p, grid, eng, st, t, dt);
      for (int i = 0; i < n; ++i) bsum[b][i] += std::norm(st.a[i]);
    }
    bcount[b] = hi - lo;
  });
  EnsembleStats out;
  out.samples = samples;
  out.seed = seed;
  out.mean_spectrum.assign(n, 0.0);
  out.stderr_.assign(n, 0.0);
  for (int i = 0; i < n; ++i) {
    double total = 0.0;
    for (int b = 0; b < kBatches; ++b) total += bsum[b][i];
    out.mean_spectrum[i] = total / samples;
    double var = 0.0;
    for (int b = 0; b < kBatches; ++b) {
      double bm = bsum[b][i] / bcount[b];
      var += (bm - out.mean_spectrum[i]) * (bm - out.mean_spectrum[i]);
    }
    out.stderr_[i] = std::sqrt(var / (kBatches * (kBatches - 1)));
  }
  return out;
}

ResidualReport compare_expansion(const GlobalParams& p, int samples, double t, double dt,
                                 uint64_t seed, int threads) {
  ModeGrid grid = ModeGrid::make(p);
  int n = grid.size();
  constexpr int kBatches = 20;
  std::vector<std::array<double, 3>> bsum(kBatches, {0.0, 0.0, 0.0});
  std::vector<int> bcount(kBatches, 0);
  double norm_scale = std::pow(p.L, -p.d);
  run_batches(samples, threads, [&](int b) {
    ConvolutionEngine eng(grid);
    int lo = (int)((long long)samples * b / kBatches);
    int hi = (int)((long long)samples * (b + 1) / kBatches);
    CVec gauss(n);
    for (int s = lo; s < hi; ++s) {
      GaussianSource src(sample_seed(seed, s));
      for (int i = 0; i < n; ++i) gauss[i] = src.next_complex_gaussian();
      ModeState st;
      st.t = 0.0;
      st.a.resize(n);
      for (int i = 0; i < n; ++i) st.a[i] = std::sqrt(p.n_in(grid.modes[i])) * gauss[i];
      st = integrate(p, grid, eng, st, t, dt);
      JGrids J = eval_J_grids(p, grid, &eng, gauss, t);
      for (int N = 0; N < 3; ++N) {
        double r = 0.0;
        for (int i = 0; i < n; ++i) {
          cplx br = st.a[i] - J.j0[i];
          if (N >= 1) br -= J.j1[i];
          if (N >= 2) br -= J.j2[i];
          r += std::norm(br);
        }
        bsum[b][N] += norm_scale * r;
      }
    }
    bcount[b] = hi - lo;
  });
  ResidualReport out;
  out.samples = samples;
  for (int N = 0; N < 3; ++N) {
    double total = 0.0;
    for (int b = 0; b < kBatches; ++b) total += bsum[b][N];
    out.residual[N] = total / samples;
    double var = 0.0;
    for (int b = 0; b < kBatches; ++b) {
      double bm = bsum[b][N] / bcount[b];
      var += (bm - out.residual[N]) * (bm - out.residual[N]);
    }
    out.stderr_[N] = std::sqrt(var / (kBatches * (kBatches - 1)));
  }
  return out;
}

}  // namespace wkdiag
