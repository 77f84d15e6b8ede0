#include <set>

#include "doctest.h"
#include "wkdiag/couple.hpp"

using namespace wkdiag;

TEST_SUITE_BEGIN("couple");

static Couple trivial_couple() {
  Couple c;
  c.plus = Tree::trivial_tree(+1);
  c.minus = Tree::trivial_tree(-1);
  c.pairs = {{{0, 0}, {1, 0}}};
  return c;
}

TEST_CASE("enumeration counts") {
  CHECK(enumerate_couples(0).size() == 1);   // the trivial couple
  CHECK(enumerate_couples(1).size() == 4);   // 2 matchings x 2 splits
  // splits of order 1
  CHECK(enumerate_couples_split(1, 0).size() == 2);
  CHECK(enumerate_couples_split(0, 1).size() == 2);
  for (auto& c : enumerate_couples(2)) c.validate();
}

TEST_CASE("order-2 (1,1) split contains the mini couples") {
  auto cs = enumerate_couples_split(1, 1);
  CHECK(cs.size() == 6);
  int mini = 0;
  for (auto& c : cs)
    if (!c.has_sibling_pair()) ++mini;
  CHECK(mini == 2);  // the two (1,1)-mini couples
}

TEST_CASE("apply_A on the trivial couple gives a (1,1)-mini couple") {
  for (int v = 0; v < 2; ++v) {
    Couple c = apply_A(trivial_couple(), 0, v);
    c.validate();
    CHECK(c.order() == 2);
    CHECK(c.plus.order() == 1);
    CHECK(c.minus.order() == 1);
    CHECK(!c.has_sibling_pair());
    CHECK(is_regular(c));
  }
  CHECK(apply_A(trivial_couple(), 0, 0).serialize() != apply_A(trivial_couple(), 0, 1).serialize());
}

TEST_CASE("apply_B produces regular couples; invalid target errors") {
  Couple base = trivial_couple();
  for (int v = 0; v < 6; ++v) {
    Couple c = apply_B(base, {0, 0}, v);
    c.validate();
    CHECK(c.order() == 2);
    CHECK(is_regular(c));
    // grow further at a branching node
    Couple c2 = apply_B(c, {0, 0}, (v + 3) % 6);
    c2.validate();
    CHECK(c2.order() == 4);
    CHECK(is_regular(c2));
  }
  CHECK_THROWS_AS(apply_B(base, {0, 7}, 0), std::invalid_argument);
  CHECK_THROWS_AS(apply_A(trivial_couple(), 3, 0), std::invalid_argument);
}

TEST_CASE("six distinct mini trees") {
  std::set<std::string> keys;
  for (int v = 0; v < 6; ++v) keys.insert(apply_B(trivial_couple(), {0, 0}, v).serialize());
  CHECK(keys.size() == 6);
}

TEST_CASE("decorate: trivial couple") {
  Couple c = trivial_couple();
  IVec k{{2, 1, 0}};
  auto d = decorate(c, k, {{{0, 0}, k}});
  CHECK(d.plus[0] == k);
  CHECK(d.minus[0] == k);
}

TEST_CASE("decorate: mini couple by brute force and root mismatch error") {
  Couple c = apply_A(trivial_couple(), 0, 0);
  // leaves of the plus tree: nodes 1..3 with signs (+,-,+)
  IVec k{{0, 0, 0}};
  int valid = 0;
  auto pts = ball_points(2, 2);
  for (auto& a : pts)
    for (auto& b : pts) {
      // choose k1=a, k2=b, then k3 = k - a + b
      IVec k3 = k - a + b;
      if (k3.norm2() > 4) continue;
      std::vector<std::pair<NodeRef, IVec>> lv = {
          {{0, 1}, a}, {{0, 2}, b}, {{0, 3}, k3}};
      auto d = decorate(c, k, lv);
      CHECK(d.plus[0] == k);
      ++valid;
    }
  CHECK(valid > 0);
  // inconsistent values -> error
  CHECK_THROWS_AS(decorate(c, IVec{{1, 0, 0}},
                           {{{0, 1}, IVec{{0, 0, 0}}},
                            {{0, 2}, IVec{{0, 0, 0}}},
                            {{0, 3}, IVec{{0, 0, 0}}}}),
                  std::invalid_argument);
}

TEST_CASE("resonance factorization identity") {
  // Omega = |k1|^2-|k2|^2+|k3|^2-|k|^2 = 2<k1-k, k-k3> for k = k1-k2+k3
  auto pts = ball_points(2, 3);
  Couple c = apply_A(trivial_couple(), 0, 0);
  for (size_t i = 0; i < pts.size(); i += 7)
    for (size_t j = 0; j < pts.size(); j += 11) {
      IVec k1 = pts[i], k2 = pts[j], k3 = pts[(i + j) % pts.size()];
      IVec k = k1 - k2 + k3;
      int64_t om = k1.norm2() - k2.norm2() + k3.norm2() - k.norm2();
      CHECK(om == 2 * dot(k1 - k, k - k3));
    }
  // d=2 example: (1,0),(0,0),(0,1), k=(1,1) -> 0
  IVec k1{{1, 0, 0}}, k2{{0, 0, 0}}, k3{{0, 1, 0}}, k{{1, 1, 0}};
  CHECK(k1.norm2() - k2.norm2() + k3.norm2() - k.norm2() == 0);
}

TEST_CASE("epsilon coefficient") {
  IVec a{{1, 0, 0}}, b{{0, 1, 0}}, c{{0, 0, 0}};
  CHECK(epsilon_coef(a, b, c) == +1);
  CHECK(epsilon_coef(a, a, a) == -1);
  CHECK(epsilon_coef(a, a, c) == 0);
  CHECK(epsilon_coef(c, a, a) == 0);
}

TEST_CASE("skeleton of mini couple and trivial") {
  Couple mini = apply_A(trivial_couple(), 0, 1);
  auto sk = skeleton(mini);
  CHECK(sk.skeleton.trivial());
  CHECK(sk.events.size() == 1);
  CHECK(recompose(sk).serialize() == mini.serialize());

  auto sk0 = skeleton(trivial_couple());
  CHECK(sk0.skeleton.trivial());
  CHECK(sk0.events.empty());
  CHECK(is_prime(trivial_couple()));
}

TEST_CASE("skeleton round trip on exhaustive small corpus") {
  for (int n = 0; n <= 3; ++n)
    for (auto& c : enumerate_couples(n)) {
      auto sk = skeleton(c);
      CHECK(recompose(sk).serialize() == c.serialize());
      // idempotence: skeleton of the skeleton is itself
      auto sk2 = skeleton(sk.skeleton);
      CHECK(sk2.events.empty());
      CHECK(sk2.skeleton.serialize() == sk.skeleton.serialize());
    }
}

TEST_CASE("regular iff skeleton trivial; regular couples have even order") {
  int regular2 = 0;
  for (auto& c : enumerate_couples(2)) {
    if (is_regular(c)) ++regular2;
  }
  // order-2 regular couples: 2 mini couples (A on trivial) + 12 B-results
  // (6 variants on each root of the trivial couple), all distinct
  CHECK(regular2 == 14);
  for (auto& c : enumerate_couples(3)) CHECK(!is_regular(c));
}

TEST_CASE("conjugation is an involution commuting with decoration") {
  for (auto& c : enumerate_couples(2)) {
    Couple cc = c.conjugate();
    cc.validate();
    CHECK(cc.conjugate().serialize() == c.serialize());
    CHECK(cc.order() == c.order());
  }
}

TEST_CASE("random order-4 couple skeleton round trip") {
  auto cs = enumerate_couples_split(2, 2, 4);
  int step = (int)cs.size() / 17 + 1;
  for (size_t i = 0; i < cs.size(); i += step) {
    auto sk = skeleton(cs[i]);
    CHECK(recompose(sk).serialize() == cs[i].serialize());
  }
}

TEST_SUITE_END();
