#include "wkdiag/evaluator.hpp"

#include <algorithm>
#include <cmath>
#include <atomic>
#include <future>
#include <stdexcept>
#include <unordered_map>

namespace wkdiag {

namespace {

// i^p as a complex unit
cplx i_power(int p) {
  switch (((p % 4) + 4) % 4) {
    case 0: return {1, 0};
    case 1: return {0, 1};
    case 2: return {-1, 0};
    default: return {0, -1};
  }
}

struct OmegaKeyHash {
  size_t operator()(const std::vector<int64_t>& v) const {
    uint64_t h = 1469598103934665603ull;
    for (int64_t x : v) {
      h ^= (uint64_t)x + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
    }
    return (size_t)h;
  }
};

// time-forest for a couple: nodes = branching nodes, parent order from the
// trees, alpha = delta L^{2 gamma} Omega_int / L^2
TimeForest couple_forest(const Couple& c, const GlobalParams& p,
                         const std::vector<std::vector<int64_t>>& omega_int) {
  TimeForest f;
  std::array<std::vector<int>, 2> id;
  for (int ti = 0; ti < 2; ++ti) {
    const Tree& t = c.tree(ti);
    id[ti].assign(t.nodes.size(), -1);
    for (int x = 0; x < (int)t.nodes.size(); ++x) {
      if (t.nodes[x].is_leaf()) continue;
      id[ti][x] = (int)f.nodes.size();
      f.nodes.push_back({p.omega_scale() * (double)omega_int[ti][x] / (p.L * p.L),
                         t.nodes[x].sign, {}});
    }
    for (int x = 0; x < (int)t.nodes.size(); ++x) {
      if (t.nodes[x].is_leaf()) continue;
      int par = t.nodes[x].parent;
      if (par < 0) (ti == 0 ? f.plus_roots : f.minus_roots).push_back(id[ti][x]);
      else f.nodes[id[ti][par]].children.push_back(id[ti][x]);
    }
  }
  return f;
}

}  // namespace

cplx couple_time_integral(const Couple& c, const GlobalParams& p,
                          const std::vector<std::pair<NodeRef, int64_t>>& omegas, double t,
                          double s) {
  std::vector<std::vector<int64_t>> om(2);
  om[0].assign(c.plus.nodes.size(), 0);
  om[1].assign(c.minus.nodes.size(), 0);
  for (auto& [r, v] : omegas) om[r.tree][r.node] = v;
  return time_integral(couple_forest(c, p, om), t, s);
}

KqValue eval_Kq(const Couple& c, const GlobalParams& p, const IVec& k, double t, double s,
                long long budget) {
  KqValue out;
  int n = c.order();
  int P = (int)c.pairs.size();
  auto pts = ball_points(p.d, p.ball_radius_int());
  // choose a cross pair (one leaf per tree) to solve from the constraint
  int solve_pair = -1;
  for (int q = 0; q < P; ++q)
    if (c.pairs[q].first.tree != c.pairs[q].second.tree) solve_pair = q;
  if (solve_pair < 0) throw std::logic_error("eval_Kq: no cross pair");
  // budget
  double cost = 1;
  for (int q = 0; q < P; ++q)
    if (q != solve_pair) cost *= (double)pts.size();
  if (cost > (double)budget) throw std::invalid_argument("eval_Kq: budget exceeded");

  // coefficients: sum over cross pairs of zeta_(plus member) * v = k
  std::vector<int> cross_sign(P, 0);
  for (int q = 0; q < P; ++q) {
    auto [a, b] = c.pairs[q];
    if (a.tree == b.tree) continue;
    NodeRef plus_member = a.tree == 0 ? a : b;
    cross_sign[q] = c.sign_of(plus_member);
  }

  std::vector<int> free_pairs;
  for (int q = 0; q < P; ++q)
    if (q != solve_pair) free_pairs.push_back(q);

  // memoized time integral per integer Omega tuple
  std::unordered_map<std::vector<int64_t>, cplx, OmegaKeyHash> memo;
  std::vector<std::vector<int64_t>> om(2);
  om[0].assign(c.plus.nodes.size(), 0);
  om[1].assign(c.minus.nodes.size(), 0);

  std::vector<IVec> val(P);
  std::vector<size_t> odo(free_pairs.size(), 0);
  Decoration dec;
  dec.plus.resize(c.plus.nodes.size());
  dec.minus.resize(c.minus.nodes.size());
  int64_t r2 = p.ball_radius_int() * p.ball_radius_int();
  cplx acc = 0.0;
  std::vector<int64_t> key;
  for (;;) {
    for (size_t i = 0; i < free_pairs.size(); ++i) val[free_pairs[i]] = pts[odo[i]];
    // solve the cross-pair value
    IVec rhs = k;
    for (int q = 0; q < P; ++q) {
      if (q == solve_pair || cross_sign[q] == 0) continue;
      IVec x = val[q];
      if (cross_sign[q] < 0) x = -x;
      rhs = rhs - x;
    }
    if (cross_sign[solve_pair] < 0) rhs = -rhs;
    val[solve_pair] = rhs;
    if (rhs.norm2() <= r2) {
      // decorate
      for (int q = 0; q < P; ++q) {
        dec.at(c.pairs[q].first) = val[q];
        dec.at(c.pairs[q].second) = val[q];
      }
      double nin_prod = 1.0;
      int eps = 1;
      for (int ti = 0; ti < 2 && eps; ++ti) {
        const Tree& tr = c.tree(ti);
        auto& dv = ti == 0 ? dec.plus : dec.minus;
        for (int x = (int)tr.nodes.size() - 1; x >= 0; --x) {
          const auto& nd = tr.nodes[x];
          if (nd.is_leaf()) continue;
          dv[x] = dv[nd.child[0]] - dv[nd.child[1]] + dv[nd.child[2]];
          // truncation applies to every node momentum: the expansion then
          // matches the truncated system's Duhamel iterates exactly
          if (dv[x].norm2() > r2) {
            eps = 0;
            break;
          }
          eps *= epsilon_coef(dv[nd.child[0]], dv[nd.child[1]], dv[nd.child[2]]);
          if (!eps) break;
        }
      }
      if (eps) {
        key.clear();
        for (int ti = 0; ti < 2; ++ti) {
          const Tree& tr = c.tree(ti);
          auto& dv = ti == 0 ? dec.plus : dec.minus;
          for (int x = 0; x < (int)tr.nodes.size(); ++x) {
            if (tr.nodes[x].is_leaf()) continue;
            int64_t o = dv[tr.nodes[x].child[0]].norm2() - dv[tr.nodes[x].child[1]].norm2() +
                        dv[tr.nodes[x].child[2]].norm2() - dv[x].norm2();
            om[ti][x] = o;
            key.push_back(o);
          }
        }
        auto it = memo.find(key);
        cplx B;
        if (it != memo.end()) B = it->second;
        else {
          B = time_integral(couple_forest(c, p, om), t, s);
          memo.emplace(key, B);
        }
        for (int ti = 0; ti < 2; ++ti) {
          const Tree& tr = c.tree(ti);
          auto& dv = ti == 0 ? dec.plus : dec.minus;
          for (int l : tr.leaves())
            if (tr.nodes[l].sign > 0) nin_prod *= p.n_in(dv[l]);
        }
        acc += (double)eps * nin_prod * B;
        ++out.decorations_visited;
      }
    }
    // odometer
    size_t q = 0;
    while (q < odo.size() && ++odo[q] == pts.size()) odo[q++] = 0;
    if (q == odo.size()) break;
    if (odo.empty()) break;
  }
  double pref = std::pow(p.delta / (2.0 * std::pow(p.L, p.d - p.gamma)), n);
  out.value = acc * pref * i_power(c.zeta_i_power());
  return out;
}

cplx eval_Kq_order_sum(const GlobalParams& p, int n1, int n2, const IVec& k, double t,
                       long long budget) {
  cplx s = 0.0;
  for (auto& c : enumerate_couples_split(n1, n2, std::max(4, n1 + n2)))
    s += eval_Kq(c, p, k, t, t, budget).value;
  return s;
}

cplx eval_Jc_tree(const Tree& tree, const GlobalParams& p, const ModeGrid& grid,
                  const CVec& gauss, double t, const IVec& k, long long budget) {
  int n = tree.order();
  auto leaves = tree.leaves();
  int L = (int)leaves.size();
  const auto& pts = grid.modes;
  double cost = std::pow((double)pts.size(), L - 1);
  if (cost > (double)budget) throw std::invalid_argument("eval_Jc_tree: budget exceeded");
  // solve the last leaf from sum zeta_l k_l = zeta_root k
  std::vector<int> zl(L);
  for (int i = 0; i < L; ++i) zl[i] = tree.nodes[leaves[i]].sign;
  int64_t r2 = grid.radius * grid.radius;

  std::vector<IVec> dec(tree.nodes.size());
  std::vector<size_t> odo(L - 1, 0);
  cplx acc = 0.0;
  for (;;) {
    IVec rhs = k;
    if (tree.sign < 0) rhs = -rhs;
    for (int i = 0; i + 1 < L; ++i) {
      IVec x = pts[odo[i]];
      dec[leaves[i]] = x;
      if (zl[i] < 0) x = -x;
      rhs = rhs - x;
    }
    if (zl[L - 1] < 0) rhs = -rhs;
    dec[leaves[L - 1]] = rhs;
    if (rhs.norm2() <= r2) {
      int eps = 1;
      for (int x = (int)tree.nodes.size() - 1; x >= 0 && eps; --x) {
        const auto& nd = tree.nodes[x];
        if (nd.is_leaf()) continue;
        dec[x] = dec[nd.child[0]] - dec[nd.child[1]] + dec[nd.child[2]];
        if (dec[x].norm2() > r2) eps = 0;
        else eps *= epsilon_coef(dec[nd.child[0]], dec[nd.child[1]], dec[nd.child[2]]);
      }
      if (eps) {
        // time integral over the single tree
        TimeForest f;
        std::vector<int> id(tree.nodes.size(), -1);
        for (int x = 0; x < (int)tree.nodes.size(); ++x) {
          if (tree.nodes[x].is_leaf()) continue;
          id[x] = (int)f.nodes.size();
          int64_t o = dec[tree.nodes[x].child[0]].norm2() - dec[tree.nodes[x].child[1]].norm2() +
                      dec[tree.nodes[x].child[2]].norm2() - dec[x].norm2();
          f.nodes.push_back(
              {p.omega_scale() * (double)o / (p.L * p.L), tree.nodes[x].sign, {}});
        }
        for (int x = 0; x < (int)tree.nodes.size(); ++x) {
          if (tree.nodes[x].is_leaf()) continue;
          int par = tree.nodes[x].parent;
          if (par < 0) f.plus_roots.push_back(id[x]);
          else f.nodes[id[par]].children.push_back(id[x]);
        }
        cplx B = time_integral(f, t, 0.0);
        cplx amp = 1.0;
        for (int i = 0; i < L; ++i) {
          int mi = grid.idx(dec[leaves[i]]);
          if (mi < 0) {
            amp = 0.0;
            break;
          }
          cplx g = gauss[mi];
          amp *= std::sqrt(p.n_in(dec[leaves[i]])) * (zl[i] > 0 ? g : std::conj(g));
        }
        acc += B * amp * (double)eps;
      }
    }
    size_t q = 0;
    while (q < odo.size() && ++odo[q] == pts.size()) odo[q++] = 0;
    if (q == odo.size() || odo.empty()) break;
  }
  int n_neg = 0;
  for (auto& nd : tree.nodes)
    if (!nd.is_leaf() && nd.sign < 0) ++n_neg;
  cplx zeta_t = i_power(((n + 2 * n_neg) % 4 + 4) % 4);
  return acc * std::pow(p.delta / (2.0 * std::pow(p.L, p.d - p.gamma)), n) * zeta_t;
}

// ----- sample evolution -----

namespace {

// Gauss-Legendre nodes/weights on [-1, 1], n = 4
constexpr double GLX[4] = {-0.8611363115940526, -0.3399810435848563, 0.3399810435848563,
                           0.8611363115940526};
constexpr double GLW[4] = {0.3478548451374538, 0.6521451548625461, 0.6521451548625461,
                           0.3478548451374538};

struct Evolver {
  const GlobalParams* p;
  const ModeGrid* grid;
  ConvolutionEngine* eng;
  double pref;   // delta / (2 L^{d-gamma})
  double theta;  // pi delta L^{2gamma} / L^2 (per unit time, integer Omega)

  CVec j0, j0c;
  CVec tmp, tmp2, f1buf;

  void init(const CVec& gauss) {
    int n = grid->size();
    j0.resize(n);
    for (int i = 0; i < n; ++i)
      j0[i] = std::sqrt(p->n_in(grid->modes[i])) * gauss[i];
    j0c.resize(n);
    for (int i = 0; i < n; ++i) j0c[i] = std::conj(j0[i]);
  }

  // F1(u) = C_+(J0, conj J0, J0)(u)
  void f1(double u, CVec& out) {
    eng->apply(j0, j0c, j0, theta * u, +1, out);
    for (auto& x : out) x *= pref * cplx(0, 1);
  }

  // F2(u) = C(J1,cJ0,J0) + C(J0,cJ1,J0) + C(J0,cJ0,J1) at time u
  void f2(double u, const CVec& j1u, CVec& out) {
    int n = grid->size();
    CVec j1c(n);
    for (int i = 0; i < n; ++i) j1c[i] = std::conj(j1u[i]);
    eng->apply(j1u, j0c, j0, theta * u, +1, out);
    eng->apply(j0, j1c, j0, theta * u, +1, tmp);
    for (int i = 0; i < n; ++i) out[i] += tmp[i];
    eng->apply(j0, j0c, j1u, theta * u, +1, tmp);
    for (int i = 0; i < n; ++i) out[i] = (out[i] + tmp[i]) * pref * cplx(0, 1);
  }
};

}  // namespace

JGrids eval_J_grids(const GlobalParams& p, const ModeGrid& grid, ConvolutionEngine* eng,
                    const CVec& gauss, double t, int panels) {
  ConvolutionEngine local(grid);
  if (!eng) eng = &local;
  Evolver ev;
  ev.p = &p;
  ev.grid = &grid;
  ev.eng = eng;
  ev.pref = p.delta / (2.0 * std::pow(p.L, p.d - p.gamma));
  ev.theta = M_PI * p.omega_scale() / (p.L * p.L);
  ev.init(gauss);
  int n = grid.size();
  JGrids out;
  out.j0 = ev.j0;
  out.j1.assign(n, 0.0);
  out.j2.assign(n, 0.0);
  CVec j1_panel = out.j1;  // J1 at the current panel start
  CVec node_j1(n), fbuf(n), f2buf(n);
  double h = t / panels;
  for (int pn = 0; pn < panels; ++pn) {
    double a = pn * h;
    // panel contribution to J1 and J2
    CVec j1_next = j1_panel;
    for (int q = 0; q < 4; ++q) {
      double u = a + 0.5 * h * (GLX[q] + 1.0);
      ev.f1(u, fbuf);
      for (int i = 0; i < n; ++i) j1_next[i] += 0.5 * h * GLW[q] * fbuf[i];
    }
    for (int q = 0; q < 4; ++q) {
      double s = a + 0.5 * h * (GLX[q] + 1.0);
      // J1(s) = J1(a) + int_a^s F1
      node_j1 = j1_panel;
      double hs = s - a;
      for (int r = 0; r < 4; ++r) {
        double u = a + 0.5 * hs * (GLX[r] + 1.0);
        ev.f1(u, fbuf);
        for (int i = 0; i < n; ++i) node_j1[i] += 0.5 * hs * GLW[r] * fbuf[i];
      }
      ev.f2(s, node_j1, f2buf);
      for (int i = 0; i < n; ++i) out.j2[i] += 0.5 * h * GLW[q] * f2buf[i];
    }
    j1_panel = j1_next;
  }
  out.j1 = j1_panel;
  return out;
}

McCorrelation mc_correlation(const GlobalParams& p, int n1, int n2, int samples, double t,
                             uint64_t seed, int threads) {
  if (n1 > 2 || n2 > 2) throw std::invalid_argument("mc_correlation: n1, n2 <= 2");
  ModeGrid grid = ModeGrid::make(p);
  int n = grid.size();
  constexpr int kBatches = 20;
  std::vector<std::vector<cplx>> batch_sum(kBatches, std::vector<cplx>(n, 0.0));
  std::vector<int> batch_count(kBatches, 0);

  auto run_batch = [&](int b) {
    ConvolutionEngine eng(grid);
    int lo = (int)((long long)samples * b / kBatches);
    int hi = (int)((long long)samples * (b + 1) / kBatches);
    CVec gauss(n);
    for (int s = lo; s < hi; ++s) {
      GaussianSource src(seed * 0x9e3779b97f4a7c15ull + (uint64_t)s * 2654435761ull + 1);
      for (int i = 0; i < n; ++i) gauss[i] = src.next_complex_gaussian();
      JGrids J = eval_J_grids(p, grid, &eng, gauss, t);
      auto pick = [&](int which) -> const CVec& {
        return which == 0 ? J.j0 : which == 1 ? J.j1 : J.j2;
      };
      const CVec& A = pick(n1);
      const CVec& B = pick(n2);
      for (int i = 0; i < n; ++i) batch_sum[b][i] += A[i] * std::conj(B[i]);
    }
    batch_count[b] = hi - lo;
  };
  if (threads <= 1) {
    for (int b = 0; b < kBatches; ++b) run_batch(b);
  } else {
    std::vector<std::future<void>> fut;
    std::atomic<int> next{0};
    for (int th = 0; th < threads; ++th)
      fut.push_back(std::async(std::launch::async, [&]() {
        for (;;) {
          int b = next.fetch_add(1);
          if (b >= kBatches) return;
          run_batch(b);
        }
      }));
    for (auto& f : fut) f.get();
  }

  McCorrelation out;
  out.samples = samples;
  out.mean.assign(n, 0.0);
  out.stderr_.assign(n, 0.0);
  for (int i = 0; i < n; ++i) {
    cplx total = 0.0;
    for (int b = 0; b < kBatches; ++b) total += batch_sum[b][i];
    out.mean[i] = total / (double)samples;
    double var = 0.0;
    for (int b = 0; b < kBatches; ++b) {
      cplx bm = batch_sum[b][i] / (double)batch_count[b];
      var += std::norm(bm - out.mean[i]);
    }
    var /= kBatches * (kBatches - 1);
    out.stderr_[i] = std::sqrt(var);
  }
  out.exact.assign(n, 0.0);
  for (int i = 0; i < n; ++i) out.exact[i] = eval_Kq_order_sum(p, n1, n2, grid.modes[i], t);
  out.z.assign(n, 0.0);
  for (int i = 0; i < n; ++i)
    out.z[i] = std::abs(out.mean[i] - out.exact[i]) / std::max(out.stderr_[i], 1e-300);
  return out;
}

}  // namespace wkdiag
