#include <optional>
#include <sstream>

#include "wkdiag/couple.hpp"

namespace wkdiag {

namespace {

struct MiniCoupleHit {
  NodeRef a, b;  // a has sign +
  int variant;
};

struct MiniTreeHit {
  NodeRef m, c;
  int variant;
  int lone_child;  // which child of c carries the rest
};

bool all_leaf_children(const Tree& t, int n) {
  const auto& nd = t.nodes[n];
  if (nd.is_leaf()) return false;
  for (int c : nd.child)
    if (!t.nodes[c].is_leaf()) return false;
  return true;
}

std::optional<MiniCoupleHit> find_mini_couple(const Couple& q) {
  for (int ta = 0; ta < 2; ++ta) {
    const Tree& t1 = q.tree(ta);
    for (int a = 0; a < (int)t1.nodes.size(); ++a) {
      if (!all_leaf_children(t1, a) || t1.nodes[a].sign < 0) continue;
      // candidate partner: the pair partner of a's mid child must be the mid
      // child of b
      auto pm = q.partner(NodeRef{ta, t1.nodes[a].child[1]});
      if (!pm) continue;
      const Tree& t2 = q.tree(pm->tree);
      int b = t2.nodes[pm->node].parent;
      if (b < 0 || !all_leaf_children(t2, b)) continue;
      if (t2.nodes[b].sign > 0) continue;
      if (pm->node != t2.nodes[b].child[1]) continue;
      if (pm->tree == ta && b == a) continue;
      // outer children of a pair with outer children of b
      auto p0 = q.partner(NodeRef{ta, t1.nodes[a].child[0]});
      auto p2 = q.partner(NodeRef{ta, t1.nodes[a].child[2]});
      if (!p0 || !p2 || p0->tree != pm->tree || p2->tree != pm->tree) continue;
      int b0 = t2.nodes[b].child[0], b2 = t2.nodes[b].child[2];
      if (p0->node == b0 && p2->node == b2)
        return MiniCoupleHit{{ta, a}, {pm->tree, b}, 0};
      if (p0->node == b2 && p2->node == b0)
        return MiniCoupleHit{{ta, a}, {pm->tree, b}, 1};
    }
  }
  return std::nullopt;
}

std::optional<MiniTreeHit> find_mini_tree(const Couple& q) {
  for (int ti = 0; ti < 2; ++ti) {
    const Tree& t = q.tree(ti);
    for (int m = 0; m < (int)t.nodes.size(); ++m) {
      const auto& nd = t.nodes[m];
      if (nd.is_leaf()) continue;
      for (int pos = 0; pos < 3; ++pos) {
        int c = nd.child[pos];
        if (t.nodes[c].is_leaf()) continue;
        // the other two children of m must be leaves
        int ml[2], j = 0;
        bool ok = true;
        for (int i = 0; i < 3; ++i) {
          if (i == pos) continue;
          if (!t.nodes[nd.child[i]].is_leaf()) ok = false;
          else ml[j++] = nd.child[i];
        }
        if (!ok || j != 2) continue;
        // exactly two children of c are leaves paired with ml[0], ml[1]
        auto q0 = q.partner(NodeRef{ti, ml[0]});
        auto q1 = q.partner(NodeRef{ti, ml[1]});
        if (!q0 || !q1 || q0->tree != ti || q1->tree != ti) continue;
        int c0 = t.nodes[c].child[0], c1 = t.nodes[c].child[1], c2 = t.nodes[c].child[2];
        auto is_child_of_c = [&](int x) { return x == c0 || x == c1 || x == c2; };
        if (!is_child_of_c(q0->node) || !is_child_of_c(q1->node)) continue;
        if (q0->node == q1->node) continue;
        int lone = c0 + c1 + c2 - q0->node - q1->node;
        if (!t.nodes[q0->node].is_leaf() || !t.nodes[q1->node].is_leaf()) continue;
        // recover the variant matching apply_B's conventions
        int lone_slot = t.nodes[lone].which_child;
        int pairing;
        if (pos == 1) {
          if (lone_slot != 1) continue;
          // root_others in id order = (left child of m? ) apply_B uses
          // root_others[0] = first non-branch slot: slots 0 and 2.
          int r0 = nd.child[0], r2 = nd.child[2];
          auto pr0 = q.partner(NodeRef{ti, r0});
          if (!pr0 || pr0->tree != ti) continue;
          if (pr0->node == c0) pairing = 0;
          else if (pr0->node == c2) pairing = 1;
          else continue;
          (void)r2;
        } else {
          int mid = nd.child[1];
          auto prm = q.partner(NodeRef{ti, mid});
          if (!prm || prm->tree != ti) continue;
          if (lone_slot == 2 && prm->node == c0) pairing = 0;
          else if (lone_slot == 0 && prm->node == c2) pairing = 1;
          else continue;
        }
        return MiniTreeHit{{ti, m}, {ti, c}, 2 * pos + pairing, lone};
      }
    }
  }
  return std::nullopt;
}

// Contract helpers; both return the normalized couple and fill ref maps.
Couple contract_mini_couple(const Couple& q, const MiniCoupleHit& h, NodeRef& a_out, NodeRef& b_out) {
  Couple w = q;
  // delete the three internal pairs
  auto internal = [&](const NodeRef& r) {
    for (auto n : {h.a, h.b}) {
      const Tree& t = w.tree(n.tree);
      if (r.tree == n.tree)
        for (int c : t.nodes[n.node].child)
          if (r.node == c) return true;
    }
    return false;
  };
  std::erase_if(w.pairs, [&](auto& pr) { return internal(pr.first) && internal(pr.second); });
  // make a and b leaves
  w.tree(h.a.tree).nodes[h.a.node].child = {-1, -1, -1};
  w.tree(h.b.tree).nodes[h.b.node].child = {-1, -1, -1};
  w.pairs.push_back({h.a, h.b});
  // normalize both trees
  std::vector<int> mp, mm;
  Couple out;
  out.plus = preorder_normalize(w.plus, 0, &mp);
  out.minus = preorder_normalize(w.minus, 0, &mm);
  out.pairs = w.pairs;
  for (auto& [x, y] : out.pairs) {
    x.node = (x.tree == 0 ? mp : mm)[x.node];
    y.node = (y.tree == 0 ? mp : mm)[y.node];
  }
  out.sort_pairs();
  a_out = {h.a.tree, (h.a.tree == 0 ? mp : mm)[h.a.node]};
  b_out = {h.b.tree, (h.b.tree == 0 ? mp : mm)[h.b.node]};
  return out;
}

Couple contract_mini_tree(const Couple& q, const MiniTreeHit& h, NodeRef& s_out) {
  Couple w = q;
  Tree& t = w.tree(h.m.tree);
  int m = h.m.node, lone = h.lone_child;
  // delete the two internal pairs (between m's leaf children and c's)
  auto internal = [&](const NodeRef& r) {
    if (r.tree != h.m.tree) return false;
    for (int c : t.nodes[m].child)
      if (r.node == c && r.node != h.c.node) return true;
    for (int c : t.nodes[h.c.node].child)
      if (r.node == c && r.node != lone) return true;
    return false;
  };
  std::erase_if(w.pairs, [&](auto& pr) { return internal(pr.first) && internal(pr.second); });
  // splice: the lone subtree takes m's place
  int parent = t.nodes[m].parent, slot = t.nodes[m].which_child;
  t.nodes[lone].parent = parent;
  t.nodes[lone].which_child = slot;
  if (parent >= 0) t.nodes[parent].child[slot] = lone;
  int root = parent >= 0 ? 0 : lone;
  std::vector<int> map;
  Tree nt = preorder_normalize(t, root, &map);
  Couple out;
  out.plus = h.m.tree == 0 ? nt : w.plus;
  out.minus = h.m.tree == 1 ? nt : w.minus;
  out.pairs = w.pairs;
  for (auto& [x, y] : out.pairs) {
    if (x.tree == h.m.tree) x.node = map[x.node];
    if (y.tree == h.m.tree) y.node = map[y.node];
  }
  out.sort_pairs();
  s_out = {h.m.tree, map[lone]};
  return out;
}

std::string enc(const NodeRef& r) {
  return std::to_string(r.tree) + ":" + std::to_string(r.node);
}
NodeRef dec_ref(const std::string& s) {
  auto p = s.find(':');
  return {std::stoi(s.substr(0, p)), std::stoi(s.substr(p + 1))};
}

}  // namespace

SkeletonDecomposition skeleton(const Couple& c) {
  SkeletonDecomposition out;
  Couple cur = c;
  for (;;) {
    if (auto mt = find_mini_tree(cur)) {
      NodeRef s;
      cur = contract_mini_tree(cur, *mt, s);
      ContractionEvent ev;
      ev.kind = ContractionEvent::MiniTree;
      ev.data = enc(s) + ";" + std::to_string(mt->variant);
      out.events.push_back(ev);
      continue;
    }
    if (auto mc = find_mini_couple(cur)) {
      NodeRef a, b;
      cur = contract_mini_couple(cur, *mc, a, b);
      ContractionEvent ev;
      ev.kind = ContractionEvent::MiniCouple;
      ev.data = enc(a) + "," + enc(b) + ";" + std::to_string(mc->variant);
      out.events.push_back(ev);
      continue;
    }
    break;
  }
  out.skeleton = cur;
  return out;
}

Couple recompose(const SkeletonDecomposition& s) {
  Couple cur = s.skeleton;
  for (auto it = s.events.rbegin(); it != s.events.rend(); ++it) {
    auto semi = it->data.find(';');
    int variant = std::stoi(it->data.substr(semi + 1));
    std::string loc = it->data.substr(0, semi);
    if (it->kind == ContractionEvent::MiniCouple) {
      auto comma = loc.find(',');
      NodeRef a = dec_ref(loc.substr(0, comma)), b = dec_ref(loc.substr(comma + 1));
      int idx = -1;
      for (int i = 0; i < (int)cur.pairs.size(); ++i) {
        auto& [x, y] = cur.pairs[i];
        if ((x == a && y == b) || (x == b && y == a)) idx = i;
      }
      if (idx < 0) throw std::logic_error("recompose: pair not found");
      cur = apply_A(cur, idx, variant);
    } else {
      cur = apply_B(cur, dec_ref(loc), variant);
    }
  }
  return cur;
}

bool is_regular(const Couple& c) { return skeleton(c).skeleton.trivial(); }

bool is_prime(const Couple& c) { return skeleton(c).events.empty(); }

}  // namespace wkdiag
