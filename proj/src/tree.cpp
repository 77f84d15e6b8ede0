#include "wkdiag/tree.hpp"

#include <map>
#include <stdexcept>

namespace wkdiag {

void Tree::assign_signs() {
  nodes[root()].sign = sign;
  // preorder: parent precedes children not guaranteed after surgery, so walk.
  std::vector<int> stack{root()};
  while (!stack.empty()) {
    int n = stack.back();
    stack.pop_back();
    const Node& nd = nodes[n];
    if (nd.is_leaf()) continue;
    int8_t z = nd.sign;
    int8_t cs[3] = {z, static_cast<int8_t>(-z), z};
    for (int i = 0; i < 3; ++i) {
      nodes[nd.child[i]].sign = cs[i];
      stack.push_back(nd.child[i]);
    }
  }
}

Tree preorder_normalize(const Tree& t, int root, std::vector<int>* map_out) {
  Tree out;
  out.sign = t.sign;
  std::vector<int> map(t.nodes.size(), -1);
  // iterative preorder with explicit order left,mid,right
  std::vector<int> stack{root};
  std::vector<int> order;
  while (!stack.empty()) {
    int n = stack.back();
    stack.pop_back();
    order.push_back(n);
    const auto& nd = t.nodes[n];
    if (!nd.is_leaf())
      for (int i = 2; i >= 0; --i) stack.push_back(nd.child[i]);
  }
  out.nodes.resize(order.size());
  for (int i = 0; i < (int)order.size(); ++i) map[order[i]] = i;
  for (int i = 0; i < (int)order.size(); ++i) {
    const auto& src = t.nodes[order[i]];
    auto& dst = out.nodes[i];
    if (!src.is_leaf())
      for (int j = 0; j < 3; ++j) {
        dst.child[j] = map[src.child[j]];
        out.nodes[dst.child[j]].parent = i;
        out.nodes[dst.child[j]].which_child = j;
      }
  }
  out.nodes[0].parent = -1;
  out.nodes[0].which_child = -1;
  out.assign_signs();
  if (map_out) *map_out = map;
  return out;
}

Tree Tree::grow_at(int leaf, std::vector<int>* id_map) const {
  if (leaf < 0 || leaf >= (int)nodes.size() || !nodes[leaf].is_leaf())
    throw std::invalid_argument("grow_at: not a leaf");
  Tree t = *this;
  int base = static_cast<int>(t.nodes.size());
  t.nodes.resize(base + 3);
  for (int i = 0; i < 3; ++i) {
    t.nodes[leaf].child[i] = base + i;
    t.nodes[base + i].parent = leaf;
    t.nodes[base + i].which_child = i;
  }
  return preorder_normalize(t, 0, id_map);
}

std::vector<Tree> enumerate_trees(int order, int8_t sign, int cap) {
  if (order < 0 || order > cap)
    throw std::invalid_argument("enumerate_trees: order outside cap " + std::to_string(cap));
  std::vector<Tree> cur{Tree::trivial_tree(sign)};
  for (int n = 0; n < order; ++n) {
    std::map<std::string, Tree> next;
    for (const Tree& t : cur) {
      for (int leaf : t.leaves()) {
        Tree g = t.grow_at(leaf);
        next.emplace(g.shape(), g);
      }
    }
    cur.clear();
    for (auto& [k, v] : next) cur.push_back(std::move(v));
  }
  return cur;
}

uint64_t fuss_catalan(int n) {
  if (n == 0) return 1;
  // binom(3n, n) / (2n+1), exact in stages
  long double b = 1.0L;
  for (int i = 1; i <= n; ++i) b = b * (3.0L * n - n + i) / i;  // binom(3n,n)
  return static_cast<uint64_t>(b / (2 * n + 1) + 0.5L);
}

}  // namespace wkdiag
