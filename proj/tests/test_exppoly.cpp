#include <random>

#include "cheb_oracle.hpp"
#include "doctest.h"
#include "wkdiag/exppoly.hpp"

using namespace wkdiag;

TEST_SUITE_BEGIN("exppoly");

TEST_CASE("trivial cases") {
  TimeForest f;  // no nodes
  CHECK(time_integral(f, 0.7, 0.3) == cplx(1.0, 0.0));

  // one node, alpha = 0, upper limit t -> t
  TimeForest f1;
  f1.nodes.push_back({0.0, +1, {}});
  f1.plus_roots = {0};
  CHECK(std::abs(time_integral(f1, 0.7, 0.0) - cplx(0.7)) < 1e-14);

  // one node, alpha != 0 -> (e^{i pi a t}-1)/(i pi a)
  TimeForest f2;
  f2.nodes.push_back({3.5, +1, {}});
  f2.plus_roots = {0};
  double a = 3.5, t = 0.42;
  cplx expect = (std::exp(cplx(0, M_PI * a * t)) - 1.0) / cplx(0, M_PI * a);
  CHECK(std::abs(time_integral(f2, t, 0.0) - expect) < 1e-14);
}

TEST_CASE("near-zero frequency series limit is continuous") {
  TimeForest f;
  f.nodes.push_back({1e-9, -1, {}});
  f.plus_roots = {0};
  CHECK(std::abs(time_integral(f, 0.9, 0.0) - cplx(0.9)) < 1e-8);
}

TEST_CASE("evaluation matches termwise reconstruction") {
  ExpPoly p;
  p.add_term({1.5, -0.25}, 2.25, 1);
  p.add_term({0.0, 1.0}, -3.5, 0);
  p.add_term({2.0, 0.0}, 2.25 + 1e-10, 1);  // merges with first
  p.merge();
  CHECK(p.terms.size() == 2);
  double t = 0.37;
  cplx direct = cplx(3.5, -0.25) * t * std::exp(cplx(0, M_PI * 2.25 * t)) +
                cplx(0.0, 1.0) * std::exp(cplx(0, -M_PI * 3.5 * t));
  CHECK(std::abs(p.eval(t) - direct) < 1e-12);
}

namespace {

// Random forest with the nesting structure of a ternary-tree couple of
// total order <= 4 (here: random recursive forests of <= 4 nodes).
TimeForest random_forest(std::mt19937_64& rng, int n_nodes) {
  TimeForest f;
  std::uniform_real_distribution<double> ua(-50.0, 50.0);
  std::uniform_int_distribution<int> uz(0, 1);
  for (int i = 0; i < n_nodes; ++i) {
    f.nodes.push_back({ua(rng), uz(rng) ? +1 : -1, {}});
    if (i > 0) {
      std::uniform_int_distribution<int> up(0, i - 1);
      int p = up(rng);
      f.nodes[p].children.push_back(i);
    }
  }
  if (n_nodes > 0) f.plus_roots = {0};
  return f;
}

}  // namespace

TEST_CASE("recursion vs adaptive Chebyshev quadrature, 500 random instances") {
  std::mt19937_64 rng(20240817);
  std::uniform_int_distribution<int> un(1, 4);
  std::uniform_real_distribution<double> ut(0.1, 1.0);
  double max_err = 0.0;
  for (int trial = 0; trial < 500; ++trial) {
    TimeForest f = random_forest(rng, un(rng));
    double t = ut(rng);
    cplx mine = time_integral(f, t, 0.0);
    cplx oracle = cheb::forest_integral(f, t, 0.0);
    max_err = std::max(max_err, std::abs(mine - oracle));
  }
  CHECK(max_err <= 1e-8);
}

TEST_SUITE_END();
