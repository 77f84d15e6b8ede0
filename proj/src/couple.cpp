#include "wkdiag/couple.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>

namespace wkdiag {

int Couple::zeta_i_power() const {
  int n_branch = 0, n_neg = 0;
  for (int ti = 0; ti < 2; ++ti)
    for (const auto& nd : tree(ti).nodes)
      if (!nd.is_leaf()) {
        ++n_branch;
        if (nd.sign < 0) ++n_neg;
      }
  return ((n_branch + 2 * n_neg) % 4 + 4) % 4;
}

void Couple::sort_pairs() {
  for (auto& pr : pairs)
    if (!(pr.first < pr.second)) std::swap(pr.first, pr.second);
  std::sort(pairs.begin(), pairs.end());
}

std::string Couple::serialize() const {
  std::ostringstream os;
  os << plus.shape() << '|' << minus.shape() << '|';
  auto tmp = *this;
  tmp.sort_pairs();
  for (auto& [a, b] : tmp.pairs)
    os << a.tree << ':' << a.node << '-' << b.tree << ':' << b.node << ';';
  return os.str();
}

Couple Couple::conjugate() const {
  Couple c;
  c.plus = minus.conjugate();   // minus tree becomes the new plus tree
  c.minus = plus.conjugate();
  c.pairs = pairs;
  for (auto& [a, b] : c.pairs) {
    a.tree = 1 - a.tree;
    b.tree = 1 - b.tree;
  }
  c.sort_pairs();
  return c;
}

std::string Couple::canonical_key() const {
  std::string a = serialize(), b = conjugate().serialize();
  return a < b ? a : b;
}

bool Couple::has_sibling_pair() const {
  for (auto& [a, b] : pairs) {
    if (a.tree != b.tree) continue;
    const Tree& t = tree(a.tree);
    if (t.nodes[a.node].parent >= 0 && t.nodes[a.node].parent == t.nodes[b.node].parent)
      return true;
  }
  return false;
}

namespace {

// Set of leaves of the subtree rooted at n.
void collect_leaves(const Tree& t, int n, std::vector<int>& out) {
  if (t.nodes[n].is_leaf()) {
    out.push_back(n);
    return;
  }
  for (int c : t.nodes[n].child) collect_leaves(t, c, out);
}

}  // namespace

bool Couple::is_degenerate() const {
  // A trivial tree's root leaf paired with a child of the other root forces
  // epsilon-degenerate decorations (and a degree-2 atom in the molecule).
  if (!trivial())
    for (auto& [a, b] : pairs)
      for (auto r : {a, b}) {
        if (tree(r.tree).nodes[r.node].parent >= 0) continue;  // r is a trivial root
        NodeRef o = r == a ? b : a;
        if (tree(o.tree).nodes[o.node].parent == tree(o.tree).root()) return true;
      }
  // Two sibling nodes whose subtrees' leaves are completely paired with each
  // other (sibling-paired leaves are the order-0 case).
  for (int ti = 0; ti < 2; ++ti) {
    const Tree& t = tree(ti);
    for (const auto& nd : t.nodes) {
      if (nd.is_leaf()) continue;
      for (int i = 0; i < 3; ++i)
        for (int j = i + 1; j < 3; ++j) {
          std::vector<int> li, lj;
          collect_leaves(t, nd.child[i], li);
          collect_leaves(t, nd.child[j], lj);
          if (li.size() != lj.size()) continue;
          std::set<int> sj(lj.begin(), lj.end());
          bool all = true;
          for (int l : li) {
            auto p = partner(NodeRef{ti, l});
            if (!p || p->tree != ti || !sj.count(p->node)) {
              all = false;
              break;
            }
          }
          if (all) return true;
        }
    }
  }
  return false;
}

void Couple::validate() const {
  std::set<std::pair<int, int>> seen;
  int n_leaves = 0;
  for (int ti = 0; ti < 2; ++ti) n_leaves += 2 * tree(ti).order() + 1;
  if ((int)pairs.size() * 2 != n_leaves)
    throw std::logic_error("couple: pairing does not cover all leaves");
  for (auto& [a, b] : pairs) {
    for (auto r : {a, b}) {
      if (!tree(r.tree).nodes[r.node].is_leaf())
        throw std::logic_error("couple: paired node is not a leaf");
      if (!seen.insert({r.tree, r.node}).second)
        throw std::logic_error("couple: leaf in two pairs");
    }
    if (sign_of(a) == sign_of(b))
      throw std::logic_error("couple: paired leaves must have opposite signs");
  }
  if (plus.sign != +1 || minus.sign != -1)
    throw std::logic_error("couple: tree signs must be (+,-)");
}

// ----- enumeration -----

std::vector<Couple> enumerate_couples_split(int n_plus, int n_minus, int cap) {
  if (n_plus + n_minus > cap)
    throw std::invalid_argument("enumerate_couples: order outside cap");
  auto tp = enumerate_trees(n_plus, +1, cap);
  auto tm = enumerate_trees(n_minus, -1, cap);
  std::vector<Couple> out;
  for (const Tree& p : tp)
    for (const Tree& m : tm) {
      std::vector<NodeRef> pos_leaves, neg_leaves;
      for (int ti = 0; ti < 2; ++ti) {
        const Tree& t = ti == 0 ? p : m;
        for (int l : t.leaves())
          (t.nodes[l].sign > 0 ? pos_leaves : neg_leaves).push_back({ti, l});
      }
      // all bijections pos -> neg
      std::vector<int> perm(neg_leaves.size());
      for (size_t i = 0; i < perm.size(); ++i) perm[i] = (int)i;
      do {
        Couple c;
        c.plus = p;
        c.minus = m;
        for (size_t i = 0; i < pos_leaves.size(); ++i)
          c.pairs.push_back({pos_leaves[i], neg_leaves[perm[i]]});
        c.sort_pairs();
        out.push_back(std::move(c));
      } while (std::next_permutation(perm.begin(), perm.end()));
    }
  return out;
}

std::vector<Couple> enumerate_couples(int order, int cap) {
  std::vector<Couple> out;
  for (int np = 0; np <= order; ++np) {
    auto part = enumerate_couples_split(np, order - np, cap);
    out.insert(out.end(), part.begin(), part.end());
  }
  return out;
}

// ----- decorations -----

std::vector<IVec> decorate_tree(const Tree& t, const std::vector<IVec>& leaf_values) {
  std::vector<IVec> dec(t.nodes.size());
  auto leaves = t.leaves();
  if (leaf_values.size() != leaves.size())
    throw std::invalid_argument("decorate_tree: leaf count mismatch");
  for (size_t i = 0; i < leaves.size(); ++i) dec[leaves[i]] = leaf_values[i];
  // children have larger preorder ids than parents, so reverse scan fills
  // bottom-up
  for (int n = (int)t.nodes.size() - 1; n >= 0; --n) {
    const auto& nd = t.nodes[n];
    if (nd.is_leaf()) continue;
    dec[n] = dec[nd.child[0]] - dec[nd.child[1]] + dec[nd.child[2]];
  }
  return dec;
}

Decoration decorate(const Couple& c, const IVec& k,
                    const std::vector<std::pair<NodeRef, IVec>>& leaf_values) {
  Decoration d;
  d.plus.resize(c.plus.nodes.size());
  d.minus.resize(c.minus.nodes.size());
  std::vector<std::vector<bool>> set(2);
  set[0].assign(c.plus.nodes.size(), false);
  set[1].assign(c.minus.nodes.size(), false);
  auto put = [&](const NodeRef& r, const IVec& v) {
    if (!c.tree(r.tree).nodes[r.node].is_leaf())
      throw std::invalid_argument("decorate: value given for non-leaf");
    if (set[r.tree][r.node] && d.at(r) != v)
      throw std::invalid_argument("decorate: conflicting leaf values");
    d.at(r) = v;
    set[r.tree][r.node] = true;
  };
  for (auto& [r, v] : leaf_values) {
    put(r, v);
    if (auto p = c.partner(r)) put(*p, v);  // pairing equality
  }
  for (int ti = 0; ti < 2; ++ti)
    for (int l : c.tree(ti).leaves())
      if (!set[ti][l]) throw std::invalid_argument("decorate: missing leaf value");
  for (int ti = 0; ti < 2; ++ti) {
    const Tree& t = c.tree(ti);
    auto& dec = ti == 0 ? d.plus : d.minus;
    for (int n = (int)t.nodes.size() - 1; n >= 0; --n) {
      const auto& nd = t.nodes[n];
      if (nd.is_leaf()) continue;
      dec[n] = dec[nd.child[0]] - dec[nd.child[1]] + dec[nd.child[2]];
    }
    if (dec[t.root()] != k)
      throw std::invalid_argument("decorate: root momentum mismatch");
  }
  return d;
}

int64_t resonance_int(const Tree& t, const std::vector<IVec>& dec, int node) {
  const auto& nd = t.nodes[node];
  if (nd.is_leaf()) throw std::invalid_argument("resonance: node is a leaf");
  return dec[nd.child[0]].norm2() - dec[nd.child[1]].norm2() +
         dec[nd.child[2]].norm2() - dec[node].norm2();
}

double resonance(const GlobalParams& p, const Couple& c, const Decoration& d, const NodeRef& r) {
  return static_cast<double>(resonance_int(c, d, r)) / (p.L * p.L);
}

int epsilon_coef(const IVec& k1, const IVec& k2, const IVec& k3) {
  if (k2 != k1 && k2 != k3) return +1;
  if (k1 == k2 && k2 == k3) return -1;
  return 0;
}

int epsilon_product_tree(const Tree& t, const std::vector<IVec>& dec) {
  int prod = 1;
  for (int n = 0; n < (int)t.nodes.size(); ++n) {
    const auto& nd = t.nodes[n];
    if (nd.is_leaf()) continue;
    prod *= epsilon_coef(dec[nd.child[0]], dec[nd.child[1]], dec[nd.child[2]]);
    if (prod == 0) return 0;
  }
  return prod;
}

int epsilon_product(const Couple& c, const Decoration& d) {
  int e = epsilon_product_tree(c.plus, d.plus);
  if (e == 0) return 0;
  return e * epsilon_product_tree(c.minus, d.minus);
}

// ----- regular operations -----

namespace {

// Re-normalize both trees of a couple to preorder and remap pair refs.
Couple normalize(const Couple& c, std::array<std::vector<int>, 2>* maps = nullptr) {
  Couple out;
  std::vector<int> mp, mm;
  out.plus = preorder_normalize(c.plus, 0, &mp);
  out.minus = preorder_normalize(c.minus, 0, &mm);
  out.pairs = c.pairs;
  for (auto& [a, b] : out.pairs) {
    a.node = (a.tree == 0 ? mp : mm)[a.node];
    b.node = (b.tree == 0 ? mp : mm)[b.node];
  }
  out.sort_pairs();
  if (maps) *maps = {mp, mm};
  return out;
}

// Grow a leaf of one tree in place (no normalization); children get the next
// three arena slots.
void grow_leaf_raw(Tree& t, int leaf) {
  int base = (int)t.nodes.size();
  t.nodes.resize(base + 3);
  for (int i = 0; i < 3; ++i) {
    t.nodes[leaf].child[i] = base + i;
    t.nodes[base + i].parent = leaf;
    t.nodes[base + i].which_child = i;
  }
  t.assign_signs();
}

}  // namespace

Couple apply_A_mapped(const Couple& c, int pair_index, int variant,
                      std::array<std::vector<int>, 2>& maps) {
  if (pair_index < 0 || pair_index >= (int)c.pairs.size())
    throw std::invalid_argument("apply_A: invalid pair index");
  Couple w = c;
  auto [a, b] = w.pairs[pair_index];
  if (w.sign_of(a) < 0) std::swap(a, b);  // a has sign +
  w.pairs.erase(w.pairs.begin() + pair_index);
  grow_leaf_raw(w.tree(a.tree), a.node);
  grow_leaf_raw(w.tree(b.tree), b.node);
  auto ca = [&](int i) { return NodeRef{a.tree, w.tree(a.tree).nodes[a.node].child[i]}; };
  auto cb = [&](int i) { return NodeRef{b.tree, w.tree(b.tree).nodes[b.node].child[i]}; };
  // a's children signs (+,-,+); b's children signs (-,+,-). Mid pair forced,
  // outer pairs chosen by variant.
  w.pairs.push_back({ca(1), cb(1)});
  if (variant == 0) {
    w.pairs.push_back({ca(0), cb(0)});
    w.pairs.push_back({ca(2), cb(2)});
  } else {
    w.pairs.push_back({ca(0), cb(2)});
    w.pairs.push_back({ca(2), cb(0)});
  }
  return normalize(w, &maps);
}

Couple apply_A(const Couple& c, int pair_index, int variant) {
  std::array<std::vector<int>, 2> maps;
  return apply_A_mapped(c, pair_index, variant, maps);
}

MiniTreeShape mini_tree_shape(int variant) {
  if (variant < 0 || variant > 5) throw std::invalid_argument("mini tree variant in 0..5");
  MiniTreeShape s;
  s.branch_pos = variant / 2;
  s.pairing = variant % 2;
  s.code_first = s.branch_pos + 1;
  return s;
}

Couple apply_B_mapped(const Couple& c, const NodeRef& node, int variant,
                      std::array<std::vector<int>, 2>& maps) {
  BInfo info;
  return apply_B_mapped(c, node, variant, maps, info);
}

Couple apply_B_mapped(const Couple& c, const NodeRef& node, int variant,
                      std::array<std::vector<int>, 2>& maps, BInfo& info) {
  MiniTreeShape sh = mini_tree_shape(variant);
  Couple w = c;
  Tree& t = w.tree(node.tree);
  if (node.node < 0 || node.node >= (int)t.nodes.size())
    throw std::invalid_argument("apply_B: invalid node id");

  // Detach the subtree at `node` (remember it is identified by its root id;
  // arena slots of the subtree stay, we just splice a new mini tree above).
  int parent = t.nodes[node.node].parent;
  int slot = t.nodes[node.node].which_child;

  // create mini root r with children; branching child gets 3 leaf children
  int r = (int)t.nodes.size();
  t.nodes.resize(r + 4);  // r + its three children
  for (int i = 0; i < 3; ++i) {
    t.nodes[r].child[i] = r + 1 + i;
    t.nodes[r + 1 + i].parent = r;
    t.nodes[r + 1 + i].which_child = i;
  }
  int cnode = r + 1 + sh.branch_pos;
  int cbase = (int)t.nodes.size();
  t.nodes.resize(cbase + 3);
  for (int i = 0; i < 3; ++i) {
    t.nodes[cnode].child[i] = cbase + i;
    t.nodes[cbase + i].parent = cnode;
    t.nodes[cbase + i].which_child = i;
  }
  // hook r into node's old position
  if (parent < 0) {
    // node was the root: rebuild with r as root by swapping ids via parent
    // links; preorder_normalize(root=r) handles it.
    t.nodes[r].parent = -1;
    t.nodes[r].which_child = -1;
  } else {
    t.nodes[parent].child[slot] = r;
    t.nodes[r].parent = parent;
    t.nodes[r].which_child = slot;
  }

  // lone leaf position among c's children, and internal pairings
  int root_others[2], lower[3] = {cbase, cbase + 1, cbase + 2};
  {
    int j = 0;
    for (int i = 0; i < 3; ++i)
      if (i != sh.branch_pos) root_others[j++] = r + 1 + i;
  }
  int lone;
  std::pair<int, int> p1, p2;  // pairs (root-level leaf, lower leaf)
  if (sh.branch_pos == 1) {
    // c at mid: root others have sign zeta, lower signs (-z,+z,-z); lone = mid
    lone = lower[1];
    if (sh.pairing == 0) {
      p1 = {root_others[0], lower[0]};
      p2 = {root_others[1], lower[2]};
    } else {
      p1 = {root_others[0], lower[2]};
      p2 = {root_others[1], lower[0]};
    }
  } else {
    // c at left or right: root others are (mid: -z) and (outer: z);
    // lower signs (z,-z,z): mid pairs with lower-0 or lower-2, outer with
    // lower-1 (forced); lone = remaining outer lower leaf.
    int mid = r + 2;  // position 1 child of r
    int outer = root_others[0] == mid ? root_others[1] : root_others[0];
    if (sh.pairing == 0) {
      p1 = {mid, lower[0]};
      lone = lower[2];
    } else {
      p1 = {mid, lower[2]};
      lone = lower[0];
    }
    p2 = {outer, lower[1]};
  }

  // the old subtree hangs at the lone position
  t.nodes[lone] = t.nodes[node.node];
  t.nodes[lone].parent = cnode;
  t.nodes[lone].which_child = lone - cbase;
  if (!t.nodes[lone].is_leaf())
    for (int ch : t.nodes[lone].child) t.nodes[ch].parent = lone;

  w.pairs.push_back({{node.tree, p1.first}, {node.tree, p1.second}});
  w.pairs.push_back({{node.tree, p2.first}, {node.tree, p2.second}});
  // pairings of the old subtree: its root id changed node.node -> lone
  for (auto& [x, y] : w.pairs) {
    if (x.tree == node.tree && x.node == node.node) x.node = lone;
    if (y.tree == node.tree && y.node == node.node) y.node = lone;
  }

  // normalize from the correct root
  int root = parent < 0 ? r : 0;
  std::vector<int> map;
  Tree nt = preorder_normalize(t, root, &map);
  Couple out;
  out.plus = node.tree == 0 ? nt : w.plus;
  out.minus = node.tree == 1 ? nt : w.minus;
  if (node.tree == 0) out.minus = w.minus;
  if (node.tree == 1) out.plus = w.plus;
  out.pairs = w.pairs;
  for (auto& [x, y] : out.pairs) {
    if (x.tree == node.tree) x.node = map[x.node];
    if (y.tree == node.tree) y.node = map[y.node];
  }
  out.sort_pairs();
  // identity map for the untouched tree; surgery map for the other. The
  // spliced-in node keeps its role through `lone`.
  std::array<std::vector<int>, 2> mm;
  for (int ti = 0; ti < 2; ++ti) {
    if (ti != node.tree) {
      mm[ti].resize(c.tree(ti).nodes.size());
      for (size_t i = 0; i < mm[ti].size(); ++i) mm[ti][i] = (int)i;
    } else {
      mm[ti].assign(c.tree(ti).nodes.size(), -1);
      for (size_t i = 0; i < mm[ti].size(); ++i) {
        int cur = (int)i == node.node ? lone : (int)i;
        if (cur < (int)map.size()) mm[ti][i] = map[cur];
      }
    }
  }
  maps = mm;
  out.sort_pairs();
  // report the mini structure in normalized ids; order the two internal
  // pairs by the root-level member's slot
  info.mini_root = {node.tree, map[r]};
  info.lone = {node.tree, map[lone]};
  std::pair<NodeRef, NodeRef> q1{{node.tree, map[p1.first]}, {node.tree, map[p1.second]}};
  std::pair<NodeRef, NodeRef> q2{{node.tree, map[p2.first]}, {node.tree, map[p2.second]}};
  int s1 = t.nodes[p1.first].which_child, s2 = t.nodes[p2.first].which_child;
  if (s1 <= s2) info.pairs = {q1, q2};
  else info.pairs = {q2, q1};
  return out;
}

Couple apply_B(const Couple& c, const NodeRef& node, int variant) {
  std::array<std::vector<int>, 2> maps;
  return apply_B_mapped(c, node, variant, maps);
}

}  // namespace wkdiag
