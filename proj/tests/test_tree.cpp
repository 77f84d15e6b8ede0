#include <stdexcept>

#include "doctest.h"
#include "wkdiag/tree.hpp"

using namespace wkdiag;

TEST_SUITE_BEGIN("tree");

TEST_CASE("trivial and order-1 enumeration") {
  CHECK(enumerate_trees(0, +1).size() == 1);
  CHECK(enumerate_trees(0, +1)[0].trivial());
  CHECK(enumerate_trees(1, +1).size() == 1);
}

TEST_CASE("counts match Fuss-Catalan up to order 5") {
  // brute-force enumeration cross-checked against (1/(2n+1)) binom(3n,n)
  CHECK(fuss_catalan(2) == 3);
  CHECK(fuss_catalan(3) == 12);
  for (int n = 0; n <= 5; ++n) {
    auto ts = enumerate_trees(n, +1, 5);
    CHECK(ts.size() == fuss_catalan(n));
  }
}

TEST_CASE("leaf and node counts") {
  for (int n = 0; n <= 4; ++n)
    for (auto& t : enumerate_trees(n, +1)) {
      CHECK((int)t.leaves().size() == 2 * n + 1);
      CHECK((int)t.nodes.size() == 3 * n + 1);
      CHECK(t.order() == n);
    }
}

TEST_CASE("sign rule (zeta, -zeta, zeta)") {
  for (auto& t : enumerate_trees(3, -1)) {
    for (auto& nd : t.nodes) {
      if (nd.is_leaf()) continue;
      CHECK(t.nodes[nd.child[0]].sign == nd.sign);
      CHECK(t.nodes[nd.child[1]].sign == -nd.sign);
      CHECK(t.nodes[nd.child[2]].sign == nd.sign);
    }
    CHECK(t.nodes[0].sign == -1);
  }
}

TEST_CASE("cap produces size error") {
  CHECK_THROWS_AS(enumerate_trees(6, +1, 5), std::invalid_argument);
}

TEST_CASE("conjugation is an involution flipping signs") {
  for (auto& t : enumerate_trees(2, +1)) {
    Tree c = t.conjugate();
    CHECK(c.sign == -1);
    CHECK(c.shape() == t.shape());
    Tree cc = c.conjugate();
    CHECK(cc.shape() == t.shape());
    CHECK(cc.sign == +1);
  }
}

TEST_SUITE_END();
