#pragma once

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "wkdiag/lattice.hpp"
#include "wkdiag/tree.hpp"

namespace wkdiag {

// Reference to a node inside a couple: tree 0 = plus, tree 1 = minus.
struct NodeRef {
  int tree = 0;
  int node = 0;
  friend bool operator==(const NodeRef& a, const NodeRef& b) {
    return a.tree == b.tree && a.node == b.node;
  }
  friend bool operator<(const NodeRef& a, const NodeRef& b) {
    return std::pair(a.tree, a.node) < std::pair(b.tree, b.node);
  }
};

// A couple: plus tree, minus tree, and a perfect matching of all leaves into
// opposite-sign pairs.
struct Couple {
  Tree plus;   // sign +
  Tree minus;  // sign -
  std::vector<std::pair<NodeRef, NodeRef>> pairs;  // canonical order: first < second

  int order() const { return plus.order() + minus.order(); }
  const Tree& tree(int i) const { return i == 0 ? plus : minus; }
  Tree& tree(int i) { return i == 0 ? plus : minus; }
  bool trivial() const { return plus.trivial() && minus.trivial(); }

  int8_t sign_of(const NodeRef& r) const { return tree(r.tree).nodes[r.node].sign; }

  // zeta(Q) = prod over branching nodes of (i * zeta_n); returns (re, im) as
  // an exact power of i with sign: value = i^a * s, encoded below.
  // net_i_power in 0..3 with value i^net_i_power.
  int zeta_i_power() const;

  std::optional<NodeRef> partner(const NodeRef& r) const {
    for (auto& [a, b] : pairs) {
      if (a == r) return b;
      if (b == r) return a;
    }
    return std::nullopt;
  }

  void sort_pairs();
  std::string serialize() const;  // stable exact serialization
  Couple conjugate() const;       // swap trees, flip signs, keep pairings
  // Lexicographically minimal serialization under identity and conjugation.
  std::string canonical_key() const;

  // A pair is "sibling-paired" if the two leaves share a parent; more
  // generally the couple is degenerate if two sibling nodes root completely
  // paired subtrees (Remark on degenerate cases). Molecule construction
  // rejects degenerate couples.
  bool has_sibling_pair() const;
  bool is_degenerate() const;

  void validate() const;  // invariant check: matching, signs
};

// ----- enumeration -----

// All couples of total order n, optionally restricted to a split (n+, n-).
// Exhaustive over tree shapes and opposite-sign perfect matchings.
std::vector<Couple> enumerate_couples(int order, int cap = 4);
std::vector<Couple> enumerate_couples_split(int n_plus, int n_minus, int cap = 4);

// ----- decorations -----

// Momentum assignment to every node of both trees. Determined by leaf values;
// interior nodes satisfy k_n = k_{n1} - k_{n2} + k_{n3}.
struct Decoration {
  std::vector<IVec> plus;   // per node id of plus tree
  std::vector<IVec> minus;  // per node id of minus tree

  const IVec& at(const NodeRef& r) const { return r.tree == 0 ? plus[r.node] : minus[r.node]; }
  IVec& at(const NodeRef& r) { return r.tree == 0 ? plus[r.node] : minus[r.node]; }
};

// Fill interior momenta bottom-up from leaf values; checks pairing equality
// and that both roots give momentum k. Throws on violation.
Decoration decorate(const Couple& c, const IVec& k,
                    const std::vector<std::pair<NodeRef, IVec>>& leaf_values);

// Decorate a single tree from per-leaf values (by leaf node id).
std::vector<IVec> decorate_tree(const Tree& t, const std::vector<IVec>& leaf_values);

// Resonance factor Omega_n at a branching node, in integer units m^2
// (physical Omega = value / L^2): |m1|^2 - |m2|^2 + |m3|^2 - |m|^2.
int64_t resonance_int(const Tree& t, const std::vector<IVec>& dec, int node);
inline int64_t resonance_int(const Couple& c, const Decoration& d, const NodeRef& r) {
  return resonance_int(c.tree(r.tree), r.tree == 0 ? d.plus : d.minus, r.node);
}
double resonance(const GlobalParams& p, const Couple& c, const Decoration& d, const NodeRef& r);

// epsilon_{k1 k2 k3}: +1 if k2 not in {k1,k3}; -1 if k1=k2=k3; 0 otherwise.
int epsilon_coef(const IVec& k1, const IVec& k2, const IVec& k3);
// Product over all branching nodes of both trees.
int epsilon_product(const Couple& c, const Decoration& d);
int epsilon_product_tree(const Tree& t, const std::vector<IVec>& dec);

// ----- regular structure -----

// Operation A: replace a leaf pair by a (1,1)-mini couple (variant in {0,1}
// selects the matching). Operation B: replace a node by a mini tree (variant
// in 0..5 selects one of the six mini trees). Node ids are re-normalized.
Couple apply_A(const Couple& c, int pair_index, int variant = 0);
Couple apply_B(const Couple& c, const NodeRef& node, int variant);

// Mini-tree shape catalogue: variant -> (branch position p in 0..2, pairing
// choice). Used by apply_B and the dominant-couple machinery.
struct MiniTreeShape {
  int branch_pos;    // which child of the root is branching
  int pairing;       // 0 or 1
  int code_first;    // first digit of the code: branch_pos + 1
};
MiniTreeShape mini_tree_shape(int variant);

// Variants of apply_A / apply_B that report node id maps (old -> new, per
// tree; -1 for removed ids).
Couple apply_A_mapped(const Couple& c, int pair_index, int variant,
                      std::array<std::vector<int>, 2>& maps);
Couple apply_B_mapped(const Couple& c, const NodeRef& node, int variant,
                      std::array<std::vector<int>, 2>& maps);

// Structure report of an apply_B call, in the ids of the resulting couple.
// pairs[0] is the internal pair containing the earlier root-level leaf
// (insert slot 1), pairs[1] the other (insert slot 2).
struct BInfo {
  NodeRef mini_root, lone;
  std::array<std::pair<NodeRef, NodeRef>, 2> pairs;
};
Couple apply_B_mapped(const Couple& c, const NodeRef& node, int variant,
                      std::array<std::vector<int>, 2>& maps, BInfo& info);

// ----- regular inserts -----

// A saturated paired tree: all leaves pairwise matched except the lone leaf.
struct PairedTree {
  Tree tree;
  std::vector<std::pair<int, int>> pairs;  // internal pairs, node ids
  int lone = 0;
  int order() const { return tree.order(); }
  std::string key() const;
};

// All regular trees of the given (even) order and sign, and all regular
// couples of the given order; duplicate-free.
std::vector<PairedTree> enumerate_regular_trees(int order, int8_t sign, int cap = 4);
std::vector<Couple> enumerate_regular_couples(int order, int cap = 4);

// Decomposition of a couple into its skeleton plus the regular tree insert
// at each skeleton branching node and the regular couple insert at each
// skeleton leaf pair (Prop. on skeletons, the collection A).
struct InsertDecomposition {
  Couple sk;
  std::map<std::pair<int, int>, PairedTree> tree_inserts;  // key: (tree, sk node)
  std::map<int, Couple> couple_inserts;                    // key: sk pair index
  int total_insert_order() const;
};

InsertDecomposition decompose_inserts(const Couple& c);
Couple recompose_inserts(const InsertDecomposition& d);

// ----- skeleton -----

struct ContractionEvent {
  enum Kind { MiniTree, MiniCouple } kind;
  // Serialized piece sufficient to replay in reverse; see skeleton.cpp.
  std::string data;
};

struct SkeletonDecomposition {
  Couple skeleton;
  std::vector<ContractionEvent> events;  // innermost-first order
  // Inserts grouped by final skeleton location:
  // for branching node m of the skeleton: regular tree order n(T^(m));
  // for a leaf pair: regular couple order. Orders only; full objects can be
  // rebuilt via recompose().
};

SkeletonDecomposition skeleton(const Couple& c);
Couple recompose(const SkeletonDecomposition& s);
bool is_regular(const Couple& c);
bool is_prime(const Couple& c);

// Total inserted order n(A) = n(Q) - n(Q_sk).
inline int insert_order(const SkeletonDecomposition& s, const Couple& c) {
  return c.order() - s.skeleton.order();
}

}  // namespace wkdiag
