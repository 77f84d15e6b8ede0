#include "doctest.h"
#include "fixtures.hpp"
#include "wkdiag/counting.hpp"

using namespace wkdiag;

TEST_SUITE_BEGIN("counting");

namespace {
GlobalParams count_params(int d, double L) {
  GlobalParams p;
  p.d = d;
  p.L = L;
  p.gamma = 0.5;
  p.delta = 0.2;
  p.eta = 0.05;
  return p;
}
}  // namespace

TEST_CASE("two-vector counting {(1+,2-)} against the stated bound") {
  GlobalParams p = count_params(2, 4.0);
  CountQuery q;
  q.n_vars = 2;
  q.centers = {IVec{{4, 0, 0}}, IVec{{0, 4, 0}}};
  CountQuery::Tuple t;
  t.elems = {{0, +1}, {1, -1}};
  t.k = q.centers[0] - q.centers[1];
  t.beta = (double)(q.centers[0].norm2() - q.centers[1].norm2()) / (p.L * p.L);
  q.tuples = {t};
  double R = 1.0;  // |k1 - k2| ~ R with the chosen centers
  auto r = count_oracle(q, p, -1, R);
  CHECK(r.count > 0);
  CHECK((double)r.count <= 64.0 * r.bound);
}

TEST_CASE("empty window gives zero") {
  GlobalParams p = count_params(2, 4.0);
  CountQuery q;
  q.n_vars = 2;
  q.centers = {IVec{{0, 0, 0}}, IVec{{40, 0, 0}}};  // unsatisfiable k
  CountQuery::Tuple t;
  t.elems = {{0, +1}, {1, +1}};
  t.k = IVec{{0, 0, 0}};
  t.beta = 0.0;
  q.tuples = {t};
  CHECK(count_solutions(q, p) == 0);
}

TEST_CASE("three-vector {(1,2,3)} within its bound") {
  GlobalParams p = count_params(2, 4.0);
  CountQuery q;
  q.n_vars = 3;
  q.centers = {IVec{{2, 1, 0}}, IVec{{0, 3, 0}}, IVec{{1, 0, 0}}};
  CountQuery::Tuple t;
  t.elems = {{0, +1}, {1, -1}, {2, +1}};
  t.k = q.centers[0] - q.centers[1] + q.centers[2];
  t.beta =
      (double)(q.centers[0].norm2() - q.centers[1].norm2() + q.centers[2].norm2()) / (p.L * p.L);
  q.tuples = {t};
  auto r = count_oracle(q, p, 2, 0.0);
  CHECK(r.count > 0);
  CHECK((double)r.count <= 64.0 * r.bound);
}

TEST_CASE("c1 system with P = 0 against the first branch of its bound") {
  GlobalParams p = count_params(2, 4.0);
  IVec r{{0, 0, 0}};
  long long c = count_c1(p, 0.1, 0.0, r, 0, {IVec{{3, 0, 0}}, IVec{{0, 3, 0}}});
  double bound = bound_c1(p, 0.0);
  CHECK(c > 0);
  CHECK((double)c <= 64.0 * bound);
}

TEST_CASE("compute_A: empty molecule and triple bond vs a two-constraint scan") {
  GlobalParams p = count_params(2, 4.0);
  // empty molecule: c = 1, A = 1
  Molecule empty;
  CountSummary s0 = compute_A(empty, p, {Restriction{{}, {}, {}, {}}});
  CHECK(s0.c_exact == 1);
  CHECK(s0.a_value == doctest::Approx(1.0));

  // triple bond molecule
  Molecule m;
  m.add_atom();
  m.add_atom();
  m.add_bond(0, 1);
  m.add_bond(1, 0);
  m.add_bond(0, 1);
  Restriction R;
  R.window = {IVec{{2, 0, 0}}, IVec{{1, 1, 0}}, IVec{{0, 1, 0}}};
  R.c_v = {IVec{{2, 0, 0}} - IVec{{1, 1, 0}} + IVec{{0, 1, 0}}, {}};
  R.c_v[1] = -R.c_v[0];
  R.beta = {0.0, 0.0};
  R.beta[0] = (double)(R.window[0].norm2() - R.window[1].norm2() + R.window[2].norm2()) /
              (p.L * p.L);
  R.beta[1] = -R.beta[0];
  CountSummary s1 = compute_A(m, p, {R});
  // independent two-constraint scan: k1 free over window 0+1, k3 solved
  long long direct = 0;
  int64_t W = (int64_t)std::llround(p.L);
  auto win = ball_points(2, W);
  double wq = 1.0 / (p.delta * std::pow(p.L, 2.0 * p.gamma));
  for (auto& d1 : win)
    for (auto& d2 : win) {
      IVec k1 = R.window[0] + d1, k2 = R.window[1] + d2;
      IVec k3 = R.c_v[0] - k1 + k2;
      if ((k3 - R.window[2]).norm2() > W * W) continue;
      double g = (double)(k1.norm2() - k2.norm2() + k3.norm2()) / (p.L * p.L);
      if (std::abs(g - R.beta[0]) > wq) continue;
      ++direct;
    }
  CHECK(s1.c_exact == direct);
  CHECK(s1.chi == 2);
}

TEST_CASE("deviation ratio A_pre / A_pos is finite on a cut fixture") {
  GlobalParams p = count_params(2, 3.0);
  // single LG double bond between two degree-2 atoms inside a 4-atom cycle
  Molecule m;
  int a = m.add_atom(), b = m.add_atom(), c = m.add_atom(), d = m.add_atom();
  m.add_bond(a, b);
  m.add_bond(b, a);
  m.add_bond(b, c);
  m.add_bond(c, d);
  m.add_bond(d, a);
  m.add_bond(c, d);
  Restriction R;
  R.window.assign(m.bonds.size(), IVec{{3, 0, 0}});
  R.window[1] = IVec{{0, 3, 0}};
  R.window[2] = IVec{{3, -1, 0}};
  R.window[4] = IVec{{1, 2, 0}};
  CountSummary pre = compute_A(m, p, {R});
  Molecule pos = m;
  pos.remove_atom(a);
  Restriction R2 = R;
  CountSummary post = compute_A(pos, p, {R2});
  if (post.c_exact > 0) {
    double ratio = pre.a_value / post.a_value;
    CHECK(std::isfinite(ratio));
  }
  CHECK(pre.rho >= 1);
}

TEST_SUITE_END();
