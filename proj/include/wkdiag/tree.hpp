#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

namespace wkdiag {

// Signed ternary tree stored as an arena in preorder; node ids are preorder
// indices, which makes serializations stable. A node either has no children
// (leaf) or exactly three, ordered left/mid/right. If the tree sign is zeta,
// the children of a sign-zeta node carry signs (zeta, -zeta, zeta).
struct Tree {
  struct Node {
    std::array<int, 3> child{-1, -1, -1};
    int parent = -1;
    int which_child = -1;  // 0/1/2 slot in parent, -1 for root
    int8_t sign = +1;
    bool is_leaf() const { return child[0] < 0; }
  };

  std::vector<Node> nodes;
  int8_t sign = +1;

  int order() const { return (static_cast<int>(nodes.size()) - 1) / 3; }
  int root() const { return 0; }
  bool trivial() const { return nodes.size() == 1; }

  std::vector<int> leaves() const {
    std::vector<int> out;
    for (int i = 0; i < (int)nodes.size(); ++i)
      if (nodes[i].is_leaf()) out.push_back(i);
    return out;
  }
  std::vector<int> branching() const {
    std::vector<int> out;
    for (int i = 0; i < (int)nodes.size(); ++i)
      if (!nodes[i].is_leaf()) out.push_back(i);
    return out;
  }

  // Structure serialization: preorder "B"/"L" string, sign excluded.
  std::string shape() const {
    std::string s;
    s.reserve(nodes.size());
    shape_rec(0, s);
    return s;
  }

  static Tree trivial_tree(int8_t sign) {
    Tree t;
    t.sign = sign;
    t.nodes.resize(1);
    t.nodes[0].sign = sign;
    return t;
  }

  // Replace leaf `leaf` by a branching node with three fresh leaves.
  // Returns the tree re-normalized to preorder ids, and reports the id map
  // old-id -> new-id (grown leaves appear as children of map[leaf]).
  Tree grow_at(int leaf, std::vector<int>* id_map = nullptr) const;

  // Recompute signs from the tree sign (after structural surgery).
  void assign_signs();

  Tree conjugate() const {
    Tree t = *this;
    t.sign = static_cast<int8_t>(-t.sign);
    t.assign_signs();
    return t;
  }

 private:
  void shape_rec(int n, std::string& s) const {
    if (nodes[n].is_leaf()) {
      s.push_back('L');
      return;
    }
    s.push_back('B');
    for (int c : nodes[n].child) shape_rec(c, s);
  }
};

// Normalize an arbitrary arena tree (with valid child/parent links from
// `root`) into preorder layout. `map_out`, if given, receives old->new ids.
Tree preorder_normalize(const Tree& t, int root, std::vector<int>* map_out);

// Exhaustive, duplicate-free, deterministic enumeration of trees of the
// given order and sign. Throws on order > cap.
std::vector<Tree> enumerate_trees(int order, int8_t sign, int cap = 5);

// (1/(2n+1)) * binom(3n, n): number of ternary trees of order n.
uint64_t fuss_catalan(int n);

}  // namespace wkdiag
