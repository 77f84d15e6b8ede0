#include <algorithm>
#include <set>
#include <sstream>
#include <stdexcept>

#include "wkdiag/couple.hpp"

namespace wkdiag {

std::string PairedTree::key() const {
  std::ostringstream os;
  os << (tree.sign > 0 ? '+' : '-') << tree.shape() << '|' << lone << '|';
  auto ps = pairs;
  for (auto& p : ps)
    if (p.first > p.second) std::swap(p.first, p.second);
  std::sort(ps.begin(), ps.end());
  for (auto& [a, b] : ps) os << a << '-' << b << ';';
  return os.str();
}

int InsertDecomposition::total_insert_order() const {
  int n = 0;
  for (auto& [k, t] : tree_inserts) n += t.order();
  for (auto& [k, q] : couple_inserts) n += q.order();
  return n;
}

std::vector<PairedTree> enumerate_regular_trees(int order, int8_t sign, int cap) {
  if (order % 2) throw std::invalid_argument("regular trees have even order");
  std::vector<PairedTree> out;
  if (order == 0) {
    PairedTree t;
    t.tree = Tree::trivial_tree(sign);
    t.lone = 0;
    out.push_back(t);
    return out;
  }
  // saturated paired trees of sign + <-> regular couples {T, trivial}
  for (Couple& c : enumerate_couples_split(order, 0, cap)) {
    if (!is_regular(c)) continue;
    PairedTree t;
    t.tree = sign > 0 ? c.plus : c.plus.conjugate();
    for (auto& [a, b] : c.pairs) {
      if (a.tree == 1 || b.tree == 1) {
        t.lone = a.tree == 1 ? b.node : a.node;
      } else {
        t.pairs.push_back({a.node, b.node});
      }
    }
    out.push_back(t);
  }
  return out;
}

std::vector<Couple> enumerate_regular_couples(int order, int cap) {
  std::vector<Couple> out;
  for (Couple& c : enumerate_couples(order, cap))
    if (is_regular(c)) out.push_back(c);
  return out;
}

// ----- decomposition via tagged replay -----

namespace {

struct Tag {
  int kind = -1;  // 0 = skeleton node, 1 = tree insert, 2 = couple insert
  int a = 0, b = 0;  // kind 0/1: (tree, sk node); kind 2: (pair index, 0)
};

struct TaggedState {
  Couple cur;
  std::array<std::vector<Tag>, 2> tags;
};

void remap_tags(TaggedState& st, const std::array<std::vector<int>, 2>& maps,
                const Couple& next, const Tag& fresh) {
  std::array<std::vector<Tag>, 2> nt;
  for (int ti = 0; ti < 2; ++ti) {
    nt[ti].assign(next.tree(ti).nodes.size(), fresh);
    // map entries beyond the old arena belong to freshly added nodes
    size_t old_n = st.tags[ti].size();
    for (size_t i = 0; i < std::min(maps[ti].size(), old_n); ++i)
      if (maps[ti][i] >= 0) nt[ti][maps[ti][i]] = st.tags[ti][i];
  }
  st.tags = nt;
  st.cur = next;
}

NodeRef decode(const std::string& s) {
  auto p = s.find(':');
  return {std::stoi(s.substr(0, p)), std::stoi(s.substr(p + 1))};
}

}  // namespace

InsertDecomposition decompose_inserts(const Couple& c) {
  SkeletonDecomposition skd = skeleton(c);
  InsertDecomposition out;
  out.sk = skd.skeleton;

  TaggedState st;
  st.cur = skd.skeleton;
  for (int ti = 0; ti < 2; ++ti) {
    st.tags[ti].resize(st.cur.tree(ti).nodes.size());
    for (int x = 0; x < (int)st.tags[ti].size(); ++x) st.tags[ti][x] = Tag{0, ti, x};
  }

  for (auto it = skd.events.rbegin(); it != skd.events.rend(); ++it) {
    auto semi = it->data.find(';');
    int variant = std::stoi(it->data.substr(semi + 1));
    std::string loc = it->data.substr(0, semi);
    std::array<std::vector<int>, 2> maps;
    if (it->kind == ContractionEvent::MiniCouple) {
      auto comma = loc.find(',');
      NodeRef a = decode(loc.substr(0, comma)), b = decode(loc.substr(comma + 1));
      int idx = -1;
      for (int i = 0; i < (int)st.cur.pairs.size(); ++i) {
        auto& [x, y] = st.cur.pairs[i];
        if ((x == a && y == b) || (x == b && y == a)) idx = i;
      }
      if (idx < 0) throw std::logic_error("decompose_inserts: pair not found");
      Tag ta = st.tags[a.tree][a.node];
      Tag fresh;
      if (ta.kind == 0) {
        // both ends are skeleton leaves: locate the skeleton pair index
        int q = -1;
        for (int i = 0; i < (int)out.sk.pairs.size(); ++i)
          if ((out.sk.pairs[i].first == NodeRef{ta.a, ta.b}) ||
              (out.sk.pairs[i].second == NodeRef{ta.a, ta.b}))
            q = i;
        if (q < 0) throw std::logic_error("decompose_inserts: sk pair not found");
        fresh = Tag{2, q, 0};
      } else {
        fresh = ta;
      }
      Couple next = apply_A_mapped(st.cur, idx, variant, maps);
      remap_tags(st, maps, next, fresh);
    } else {
      NodeRef r = decode(loc);
      Tag tr = st.tags[r.tree][r.node];
      Tag fresh;
      if (tr.kind == 0) {
        const Tree& skt = out.sk.tree(tr.a);
        if (!skt.nodes[tr.b].is_leaf()) {
          fresh = Tag{1, tr.a, tr.b};
        } else {
          int q = -1;
          for (int i = 0; i < (int)out.sk.pairs.size(); ++i)
            if ((out.sk.pairs[i].first == NodeRef{tr.a, tr.b}) ||
                (out.sk.pairs[i].second == NodeRef{tr.a, tr.b}))
              q = i;
          if (q < 0) throw std::logic_error("decompose_inserts: sk pair not found (B)");
          fresh = Tag{2, q, 0};
        }
      } else {
        fresh = tr;
      }
      Couple next = apply_B_mapped(st.cur, r, variant, maps);
      remap_tags(st, maps, next, fresh);
    }
  }
  if (st.cur.serialize() != c.serialize())
    throw std::logic_error("decompose_inserts: replay mismatch");

  // ----- extract the insert objects -----
  // tree inserts: nodes tagged (1, tj, m) form a chunk whose unique untagged
  // child position holds the final position of sk node m (the lone slot)
  std::map<std::pair<int, int>, std::vector<int>> tree_nodes;   // key -> nodes (single tree)
  std::map<int, std::vector<NodeRef>> pair_nodes;
  std::array<std::vector<int>, 2> sk_final;  // sk node -> final node (per tree layout of sk)
  sk_final[0].assign(out.sk.plus.nodes.size(), -1);
  sk_final[1].assign(out.sk.minus.nodes.size(), -1);
  for (int ti = 0; ti < 2; ++ti)
    for (int x = 0; x < (int)st.tags[ti].size(); ++x) {
      const Tag& t = st.tags[ti][x];
      if (t.kind == 0) sk_final[t.a][t.b] = x;  // t.a == ti always for kind 0
      else if (t.kind == 1) tree_nodes[{t.a, t.b}].push_back(x);
      else if (t.kind == 2) pair_nodes[t.a].push_back({ti, x});
    }

  for (auto& [key, nodes] : tree_nodes) {
    auto [tj, mm] = key;
    const Tree& t = c.tree(tj);
    std::set<int> inset(nodes.begin(), nodes.end());
    int root = -1;
    for (int x : nodes)
      if (t.nodes[x].parent < 0 || !inset.count(t.nodes[x].parent)) root = x;
    // copy, pruning at the lone hole (the subtree not tagged to this insert)
    PairedTree pt;
    pt.tree.sign = t.nodes[root].sign;
    std::map<int, int> local;
    std::vector<int> order{root};
    std::vector<int> stack{root};
    order.clear();
    while (!stack.empty()) {
      int x = stack.back();
      stack.pop_back();
      order.push_back(x);
      if (inset.count(x) && !t.nodes[x].is_leaf())
        for (int i = 2; i >= 0; --i) stack.push_back(t.nodes[x].child[i]);
    }
    pt.tree.nodes.resize(order.size());
    for (int i = 0; i < (int)order.size(); ++i) local[order[i]] = i;
    for (int i = 0; i < (int)order.size(); ++i) {
      int x = order[i];
      if (inset.count(x) && !t.nodes[x].is_leaf())
        for (int j = 0; j < 3; ++j) {
          int ch = local[t.nodes[x].child[j]];
          pt.tree.nodes[i].child[j] = ch;
          pt.tree.nodes[ch].parent = i;
          pt.tree.nodes[ch].which_child = j;
        }
      if (!inset.count(x)) pt.lone = i;
    }
    pt.tree.assign_signs();
    for (auto& [x, y] : c.pairs)
      if (x.tree == tj && y.tree == tj && inset.count(x.node) && inset.count(y.node))
        pt.pairs.push_back({local[x.node], local[y.node]});
    out.tree_inserts[{tj, mm}] = pt;
  }

  for (auto& [q, nodes] : pair_nodes) {
    // couple insert: the tagged chunk plus the two sk leaves; its two trees
    // root at the chunk-topmost nodes (the original leaf positions)
    NodeRef l = out.sk.pairs[q].first, lp = out.sk.pairs[q].second;
    if (out.sk.sign_of(l) < 0) std::swap(l, lp);
    std::set<std::pair<int, int>> inset;
    for (auto& r : nodes) inset.insert({r.tree, r.node});
    inset.insert({l.tree, sk_final[l.tree][l.node]});
    inset.insert({lp.tree, sk_final[lp.tree][lp.node]});
    std::vector<NodeRef> roots;
    for (auto& [tj, x] : inset) {
      int par = c.tree(tj).nodes[x].parent;
      if (par < 0 || !inset.count({tj, par})) roots.push_back({tj, x});
    }
    if (roots.size() != 2) throw std::logic_error("decompose_inserts: pair insert roots");
    // the plus insert tree contains the + sk leaf
    auto contains = [&](const NodeRef& root, int tj, int node) {
      if (root.tree != tj) return false;
      int x = node;
      while (x >= 0) {
        if (x == root.node) return true;
        x = c.tree(tj).nodes[x].parent;
      }
      return false;
    };
    NodeRef rp = roots[0], rm = roots[1];
    if (!contains(rp, l.tree, sk_final[l.tree][l.node])) std::swap(rp, rm);
    int rplus = rp.node, rminus = rm.node;
    int tplus = rp.tree, tminus = rm.tree;
    Couple ins;
    std::map<std::pair<int, int>, NodeRef> local;  // (tree-of-c, node) -> insert ref
    auto copy_side = [&](int tj, int root, Tree& dst, int dst_tree) {
      const Tree& t = c.tree(tj);
      std::vector<int> order, stack{root};
      while (!stack.empty()) {
        int x = stack.back();
        stack.pop_back();
        order.push_back(x);
        if (!t.nodes[x].is_leaf())
          for (int i = 2; i >= 0; --i) stack.push_back(t.nodes[x].child[i]);
      }
      dst.nodes.resize(order.size());
      std::map<int, int> lmap;
      for (int i = 0; i < (int)order.size(); ++i) lmap[order[i]] = i;
      for (int i = 0; i < (int)order.size(); ++i) {
        int x = order[i];
        local[{tj, x}] = NodeRef{dst_tree, i};
        if (!t.nodes[x].is_leaf())
          for (int j = 0; j < 3; ++j) {
            int ch = lmap[t.nodes[x].child[j]];
            dst.nodes[i].child[j] = ch;
            dst.nodes[ch].parent = i;
            dst.nodes[ch].which_child = j;
          }
      }
    };
    ins.plus.sign = +1;
    ins.minus.sign = -1;
    copy_side(tplus, rplus, ins.plus, 0);
    copy_side(tminus, rminus, ins.minus, 1);
    ins.plus.assign_signs();
    ins.minus.assign_signs();
    for (auto& [x, y] : c.pairs) {
      auto ix = local.find({x.tree, x.node}), iy = local.find({y.tree, y.node});
      if (ix != local.end() && iy != local.end()) ins.pairs.push_back({ix->second, iy->second});
    }
    ins.sort_pairs();
    out.couple_inserts[q] = ins;
  }
  return out;
}

Couple recompose_inserts(const InsertDecomposition& d) {
  // raw grafting on the arena, one normalization at the end
  Couple w = d.sk;
  // tree inserts: plant above the sk node (which keeps its arena id)
  for (auto& [key, pt] : d.tree_inserts) {
    auto [tj, mm] = key;
    if (pt.tree.trivial()) continue;
    Tree& t = w.tree(tj);
    int parent = t.nodes[mm].parent, slot = t.nodes[mm].which_child;
    int base = (int)t.nodes.size();
    std::vector<int> loc(pt.tree.nodes.size());
    for (int i = 0; i < (int)pt.tree.nodes.size(); ++i) {
      loc[i] = base + i;
    }
    t.nodes.resize(base + pt.tree.nodes.size());
    for (int i = 0; i < (int)pt.tree.nodes.size(); ++i) t.nodes[loc[i]] = Tree::Node{};
    for (int i = 0; i < (int)pt.tree.nodes.size(); ++i) {
      const auto& src = pt.tree.nodes[i];
      if (src.is_leaf()) continue;
      for (int j = 0; j < 3; ++j) {
        t.nodes[loc[i]].child[j] = loc[src.child[j]];
        t.nodes[loc[src.child[j]]].parent = loc[i];
        t.nodes[loc[src.child[j]]].which_child = j;
      }
    }
    // hook the insert root into m's slot, re-hang m at the lone position
    int iroot = loc[pt.tree.root()];
    if (parent < 0) {
      // m was the tree root: the insert root becomes the new root; move it
      // into arena slot of the old root by swapping roles
      // (normalization at the end handles any root id)
      t.nodes[iroot].parent = -1;
      t.nodes[iroot].which_child = -1;
    } else {
      t.nodes[parent].child[slot] = iroot;
      t.nodes[iroot].parent = parent;
      t.nodes[iroot].which_child = slot;
    }
    int lone_arena = loc[pt.lone];
    int lpar = t.nodes[lone_arena].parent, lslot = t.nodes[lone_arena].which_child;
    t.nodes[lpar].child[lslot] = mm;
    t.nodes[mm].parent = lpar;
    t.nodes[mm].which_child = lslot;
    // internal pairs
    for (auto& [x, y] : pt.pairs) w.pairs.push_back({{tj, loc[x]}, {tj, loc[y]}});
    // if m was the root, remember the new root by storing it at position:
    if (parent < 0) {
      // swap arena entries so the root id stays 0 for normalization
      std::swap(t.nodes[0], t.nodes[iroot]);
      // fix links of swapped nodes
      auto fix = [&](int id) {
        auto& nd = t.nodes[id];
        if (!nd.is_leaf())
          for (int j = 0; j < 3; ++j) t.nodes[nd.child[j]].parent = id;
        if (nd.parent >= 0) t.nodes[nd.parent].child[nd.which_child] = id;
      };
      fix(0);
      fix(iroot);
      for (auto& [x, y] : w.pairs) {
        for (auto* r : {&x, &y}) {
          if (r->tree != tj) continue;
          if (r->node == 0) r->node = iroot;
          else if (r->node == iroot) r->node = 0;
        }
      }
    }
  }
  // couple inserts: the sk pair leaves become the insert roots
  for (auto& [q, ins] : d.couple_inserts) {
    if (ins.trivial()) continue;
    NodeRef l = d.sk.pairs[q].first, lp = d.sk.pairs[q].second;
    if (d.sk.sign_of(l) < 0) std::swap(l, lp);
    // remove the sk pair
    std::erase_if(w.pairs, [&](auto& pr) {
      return (pr.first == d.sk.pairs[q].first && pr.second == d.sk.pairs[q].second) ||
             (pr.first == d.sk.pairs[q].second && pr.second == d.sk.pairs[q].first);
    });
    std::map<std::pair<int, int>, NodeRef> local;  // insert (tree, node) -> w ref
    auto plant = [&](const Tree& src, int wtree, int at) {
      Tree& t = w.tree(wtree);
      int base = (int)t.nodes.size();
      std::vector<int> loc(src.nodes.size());
      for (int i = 0; i < (int)src.nodes.size(); ++i)
        loc[i] = i == src.root() ? at : base++;
      t.nodes.resize(base);
      for (int i = 0; i < (int)src.nodes.size(); ++i)
        if (i != src.root()) t.nodes[loc[i]] = Tree::Node{};
      for (int i = 0; i < (int)src.nodes.size(); ++i) {
        const auto& s = src.nodes[i];
        if (s.is_leaf()) continue;
        for (int j = 0; j < 3; ++j) {
          t.nodes[loc[i]].child[j] = loc[s.child[j]];
          t.nodes[loc[s.child[j]]].parent = loc[i];
          t.nodes[loc[s.child[j]]].which_child = j;
        }
      }
      for (int i = 0; i < (int)src.nodes.size(); ++i) local[{&src == &ins.plus ? 0 : 1, i}] =
          NodeRef{wtree, loc[i]};
    };
    plant(ins.plus, l.tree, l.node);
    plant(ins.minus, lp.tree, lp.node);
    for (auto& [x, y] : ins.pairs)
      w.pairs.push_back({local.at({x.tree, x.node}), local.at({y.tree, y.node})});
  }
  std::vector<int> mp, mm2;
  Couple out;
  out.plus = preorder_normalize(w.plus, 0, &mp);
  out.minus = preorder_normalize(w.minus, 0, &mm2);
  out.pairs = w.pairs;
  for (auto& [x, y] : out.pairs) {
    x.node = (x.tree == 0 ? mp : mm2)[x.node];
    y.node = (y.tree == 0 ? mp : mm2)[y.node];
  }
  out.sort_pairs();
  return out;
}

}  // namespace wkdiag
