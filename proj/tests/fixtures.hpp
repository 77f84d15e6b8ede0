#pragma once

// Shared fixture builders for tests: random couples and the bad-vine couple
// fixtures used by the twist machinery.

#include <random>

#include "wkdiag/couple.hpp"
#include "wkdiag/molecule.hpp"

namespace fixtures {

using namespace wkdiag;

inline Couple trivial_couple() {
  Couple c;
  c.plus = Tree::trivial_tree(+1);
  c.minus = Tree::trivial_tree(-1);
  c.pairs = {{{0, 0}, {1, 0}}};
  return c;
}

inline Tree random_tree(std::mt19937_64& rng, int order, int8_t sign) {
  Tree t = Tree::trivial_tree(sign);
  for (int i = 0; i < order; ++i) {
    auto ls = t.leaves();
    std::uniform_int_distribution<size_t> u(0, ls.size() - 1);
    t = t.grow_at((int)ls[u(rng)]);
  }
  return t;
}

inline Couple random_couple(std::mt19937_64& rng, int n_plus, int n_minus) {
  Couple c;
  c.plus = random_tree(rng, n_plus, +1);
  c.minus = random_tree(rng, n_minus, -1);
  std::vector<NodeRef> pos, neg;
  for (int ti = 0; ti < 2; ++ti)
    for (int l : c.tree(ti).leaves())
      (c.tree(ti).nodes[l].sign > 0 ? pos : neg).push_back({ti, l});
  std::shuffle(neg.begin(), neg.end(), rng);
  for (size_t i = 0; i < pos.size(); ++i) c.pairs.push_back({pos[i], neg[i]});
  c.sort_pairs();
  return c;
}

// Random nondegenerate prime couple (molecule: no triple bonds, two degree-3
// atoms) of order within [lo, hi]; rejection sampled.
inline Couple random_prime_couple(std::mt19937_64& rng, int lo, int hi) {
  for (;;) {
    std::uniform_int_distribution<int> uo(lo, hi);
    int n = uo(rng);
    std::uniform_int_distribution<int> us(0, n);
    int np = us(rng);
    Couple c = random_couple(rng, np, n - np);
    if (c.is_degenerate()) continue;
    if (!is_prime(c)) continue;
    return c;
  }
}

// ----- bad-vine couple fixtures -----
// Built by arena surgery; node ids below refer to construction order, the
// returned couples are preorder-normalized.

// helper: grow a leaf into a branching node, return the three children ids
inline std::array<int, 3> grow(Tree& t, int n) {
  int base = (int)t.nodes.size();
  t.nodes.resize(base + 3);
  for (int i = 0; i < 3; ++i) {
    t.nodes[n].child[i] = base + i;
    t.nodes[base + i].parent = n;
    t.nodes[base + i].which_child = i;
  }
  return {base, base + 1, base + 2};
}

// standard minus-side order-1 tree picking up (u11+, u21+, u22-)
inline void attach_minus_side(Couple& c, int u11, int u21, int u22) {
  c.minus = Tree::trivial_tree(-1);
  auto [a, b, d] = grow(c.minus, 0);
  c.minus.assign_signs();
  c.pairs.push_back({{0, u11}, {1, a}});
  c.pairs.push_back({{0, u21}, {1, d}});
  c.pairs.push_back({{0, u22}, {1, b}});
}

inline Couple normalize_fixture(Couple c) {
  std::vector<int> mp, mm;
  Couple out;
  out.plus = preorder_normalize(c.plus, 0, &mp);
  out.minus = preorder_normalize(c.minus, 0, &mm);
  out.pairs = c.pairs;
  for (auto& [x, y] : out.pairs) {
    x.node = (x.tree == 0 ? mp : mm)[x.node];
    y.node = (y.tree == 0 ? mp : mm)[y.node];
  }
  out.sort_pairs();
  out.validate();
  return out;
}

// Vine (I-a): u2 outer child of u1, u23 paired with the middle child u0.
inline Couple fixture_Ia() {
  Couple c;
  c.plus = Tree::trivial_tree(+1);
  auto [u2, u0, u11] = grow(c.plus, 0);
  auto [u23, u22, u21] = grow(c.plus, u2);  // u23 at slot 0 (+), u22 mid (-), u21 (+)
  c.plus.assign_signs();
  c.pairs.push_back({{0, u23}, {0, u0}});
  attach_minus_side(c, u11, u21, u22);
  return normalize_fixture(c);
}

// Vine (II-c): u4 left child of u3, u2 middle child of u4, u23 right child
// of u2 paired with u0 = right child of u3 (the drawn example).
inline Couple fixture_IIc() {
  Couple c;
  c.plus = Tree::trivial_tree(+1);
  auto [u3, x, u11] = grow(c.plus, 0);
  auto [u4, y, u0] = grow(c.plus, u3);
  auto [f, u2, w] = grow(c.plus, u4);
  auto [u22, u21, u23] = grow(c.plus, u2);
  c.plus.assign_signs();
  c.pairs.push_back({{0, y}, {0, w}});
  c.pairs.push_back({{0, u0}, {0, u23}});
  c.pairs.push_back({{0, x}, {0, f}});
  attach_minus_side(c, u11, u21, u22);
  return normalize_fixture(c);
}

// Vine (II-a/b): u3, u4 both children of u1 (incomparable), double bond of
// two leaf pairs between them, u2 a child of u4.
inline Couple fixture_IIa() {
  Couple c;
  c.plus = Tree::trivial_tree(+1);
  auto [u3, u4, u11] = grow(c.plus, 0);
  auto [a, b, u0] = grow(c.plus, u3);
  auto [u2, d, e] = grow(c.plus, u4);
  auto [u22, u21, u23] = grow(c.plus, u2);
  c.plus.assign_signs();
  c.pairs.push_back({{0, a}, {0, e}});
  c.pairs.push_back({{0, b}, {0, d}});
  c.pairs.push_back({{0, u0}, {0, u23}});
  attach_minus_side(c, u11, u21, u22);
  return normalize_fixture(c);
}

}  // namespace fixtures
