#include "wkdiag/clcn.hpp"

#include <algorithm>
#include <set>
#include <sstream>
#include <stdexcept>

namespace wkdiag {

std::string subfamily_name(ClNodes::Subfamily s) {
  switch (s) {
    case ClNodes::None: return "none";
    case ClNodes::Ia: return "I-a";
    case ClNodes::Ib: return "I-b";
    case ClNodes::IIa: return "II-a";
    case ClNodes::IIb: return "II-b";
    case ClNodes::IIc: return "II-c";
    case ClNodes::IId: return "II-d";
    case ClNodes::IIe: return "II-e";
  }
  return "?";
}

namespace {

bool is_ancestor(const Tree& t, int anc, int node) {
  while (node >= 0) {
    if (node == anc) return true;
    node = t.nodes[node].parent;
  }
  return false;
}

bool is_ancestor(const Couple& c, const NodeRef& a, const NodeRef& n) {
  return a.tree == n.tree && is_ancestor(c.tree(a.tree), a.node, n.node);
}

struct JointInfo {
  NodeRef node;
  bool has_parent_bond = false;          // case (a): the parent PC bond lies in the block
  std::vector<NodeRef> used_children;    // children consumed by block bonds
  std::vector<int> block_bonds;
};

JointInfo analyze_joint(const Couple& c, const Molecule& m, const VineMatch& v, int joint) {
  JointInfo info;
  info.node = m.atoms[joint].origin;
  std::set<int> inside(v.atoms.begin(), v.atoms.end());
  const Tree& t = c.tree(info.node.tree);
  for (int b : m.bonds_at(joint)) {
    if (!inside.count(m.other_end(b, joint))) continue;
    info.block_bonds.push_back(b);
    const auto& bd = m.bonds[b];
    if (!bd.lp) {
      if (bd.parent_end == joint) {
        info.used_children.push_back(bd.origin);  // child branching node
      } else {
        info.has_parent_bond = true;
      }
    } else {
      // LP: the used child is the pair leaf whose parent is this joint node
      NodeRef leaf = bd.origin;
      auto partner = c.partner(leaf);
      if (leaf.tree == info.node.tree && t.nodes[leaf.node].parent == info.node.node)
        info.used_children.push_back(leaf);
      else if (partner && partner->tree == info.node.tree &&
               c.tree(partner->tree).nodes[partner->node].parent == info.node.node)
        info.used_children.push_back(*partner);
      else
        throw std::logic_error("classify_cl_cn: LP bond does not touch the joint node");
    }
  }
  if (info.block_bonds.size() != 2)
    throw std::logic_error("classify_cl_cn: joint does not have two block bonds");
  return info;
}

std::vector<NodeRef> unused_children(const Couple& c, const NodeRef& n,
                                     const std::vector<NodeRef>& used) {
  std::vector<NodeRef> out;
  const Tree& t = c.tree(n.tree);
  for (int ch : t.nodes[n.node].child) {
    NodeRef r{n.tree, ch};
    bool u = false;
    for (auto& x : used)
      if (x == r) u = true;
    if (!u) out.push_back(r);
  }
  return out;
}

}  // namespace

ClNodes classify_cl_cn(const Couple& c, const Molecule& m, const VineMatch& v) {
  JointInfo a = analyze_joint(c, m, v, v.j1);
  JointInfo b = analyze_joint(c, m, v, v.j2);
  if (a.has_parent_bond && b.has_parent_bond)
    throw std::logic_error("classify_cl_cn: both joints have parent bonds in the block");
  ClNodes out;
  if (a.has_parent_bond || b.has_parent_bond) {
    out.cl = true;
    JointInfo& lower = a.has_parent_bond ? a : b;  // u2
    JointInfo& upper = a.has_parent_bond ? b : a;  // u1
    out.u1 = upper.node;
    out.u2 = lower.node;
    if (!is_ancestor(c, out.u1, out.u2))
      throw std::logic_error("classify_cl_cn: u2 not a descendant of u1");
    auto u1_free = unused_children(c, out.u1, upper.used_children);
    if (u1_free.size() != 1) throw std::logic_error("classify_cl_cn: u1 free child count");
    out.u11 = u1_free[0];
    if (c.sign_of(out.u11) != c.sign_of(out.u1))
      throw std::logic_error("classify_cl_cn: u11 sign mismatch");
    // u2: one block bond is the parent bond; the other uses u23
    if (lower.used_children.size() != 1)
      throw std::logic_error("classify_cl_cn: u2 used child count");
    out.u23 = lower.used_children[0];
    auto u2_free = unused_children(c, out.u2, lower.used_children);
    if (u2_free.size() != 2) throw std::logic_error("classify_cl_cn: u2 free child count");
    for (auto& r : u2_free)
      (c.sign_of(r) > 0 ? out.u21 : out.u22) = r;
    if (c.sign_of(out.u21) != +1 || c.sign_of(out.u22) != -1)
      throw std::logic_error("classify_cl_cn: free children signs");

    if (v.family == VineFamily::I) {
      const Tree& t = c.tree(out.u2.tree);
      auto part = c.partner(out.u23);
      if (!part) throw std::logic_error("classify_cl_cn: u23 unpaired");
      out.u0 = *part;
      out.subfamily =
          t.nodes[out.u2.node].which_child == 1 ? ClNodes::Ib : ClNodes::Ia;
      out.core = true;
    } else if (v.family == VineFamily::II) {
      const Tree& t = c.tree(out.u2.tree);
      NodeRef uP{out.u2.tree, t.nodes[out.u2.node].parent};
      // the other atom of the bottom pair (via the joint's block bonds only)
      int v2_atom = m.atoms[v.j1].origin == out.u2 ? v.j1 : v.j2;
      std::set<int> inside(v.atoms.begin(), v.atoms.end());
      NodeRef uQ{-1, -1};
      for (int bb : m.bonds_at(v2_atom)) {
        int w = m.other_end(bb, v2_atom);
        if (!inside.count(w)) continue;
        NodeRef cand = m.atoms[w].origin;
        if (!(cand == uP)) uQ = cand;
      }
      if (uQ.tree < 0) throw std::logic_error("classify_cl_cn: vine II neighbours");
      if (!c.tree(out.u23.tree).nodes[out.u23.node].is_leaf()) {
        // (II-e): the used child of u2 is the branching node u4
        out.subfamily = ClNodes::IIe;
        out.u3 = uP;
        out.u4 = out.u23;
        out.core = false;
      } else {
        auto part = c.partner(out.u23);
        if (!part) throw std::logic_error("classify_cl_cn: u23 unpaired");
        out.u0 = *part;
        const Tree& tq = c.tree(uQ.tree);
        NodeRef u0_parent{out.u0.tree, c.tree(out.u0.tree).nodes[out.u0.node].parent};
        if (!(u0_parent == uQ)) throw std::logic_error("classify_cl_cn: u0 not a child of uQ");
        bool uP_child_of_uQ = uQ.tree == uP.tree && tq.nodes[uP.node].parent == uQ.node;
        bool uQ_child_of_uP = uQ.tree == uP.tree &&
                              c.tree(uP.tree).nodes[uQ.node].parent == uP.node;
        if (uP_child_of_uQ) {
          out.subfamily = ClNodes::IIc;  // u4 = uP is a child of u3 = uQ
          out.u3 = uQ;
          out.u4 = uP;
        } else if (uQ_child_of_uP) {
          out.subfamily = ClNodes::IId;  // u2 and u4 = uQ are children of u3 = uP
          out.u3 = uP;
          out.u4 = uQ;
        } else {
          // incomparable: pin u3 = canonically smaller node
          NodeRef lo = uP < uQ ? uP : uQ, hi = uP < uQ ? uQ : uP;
          out.u3 = lo;
          out.u4 = hi;
          out.subfamily = (hi == uP) ? ClNodes::IIa : ClNodes::IIb;
        }
        out.core = true;
      }
    }
  } else {
    out.cl = false;
    out.u1 = a.node;
    out.u2 = b.node;
    auto f1 = unused_children(c, out.u1, a.used_children);
    auto f2 = unused_children(c, out.u2, b.used_children);
    if (f1.size() != 1 || f2.size() != 1)
      throw std::logic_error("classify_cl_cn: CN free child count");
    out.u11 = f1[0];
    out.u21_cn = f2[0];
    if (c.sign_of(out.u11) != c.sign_of(out.u1) || c.sign_of(out.u21_cn) != c.sign_of(out.u2))
      throw std::logic_error("classify_cl_cn: CN free child signs");
  }
  return out;
}

std::vector<NodeRef> couple_block_nodes(const Couple& c, const ClNodes& n) {
  std::vector<NodeRef> out;
  const Tree& t = c.tree(n.u1.tree);
  std::vector<int> stack{n.u1.node};
  while (!stack.empty()) {
    int x = stack.back();
    stack.pop_back();
    NodeRef r{n.u1.tree, x};
    if (r == n.u11 || r == n.u21 || r == n.u22) continue;
    out.push_back(r);
    if (!t.nodes[x].is_leaf())
      for (int ch : t.nodes[x].child) stack.push_back(ch);
  }
  return out;
}

namespace {

TwistResult normalize_with_maps(Couple w, int changed_tree, int new_root) {
  TwistResult res;
  std::vector<int> map0, map1;
  if (changed_tree == 0) {
    w.plus = preorder_normalize(w.plus, new_root, &map0);
    map1.resize(w.minus.nodes.size());
    for (size_t i = 0; i < map1.size(); ++i) map1[i] = (int)i;
  } else {
    w.minus = preorder_normalize(w.minus, new_root, &map1);
    map0.resize(w.plus.nodes.size());
    for (size_t i = 0; i < map0.size(); ++i) map0[i] = (int)i;
  }
  for (auto& [x, y] : w.pairs) {
    x.node = (x.tree == 0 ? map0 : map1)[x.node];
    y.node = (y.tree == 0 ? map0 : map1)[y.node];
    if (x.node < 0 || y.node < 0) throw std::logic_error("normalize: pair into removed node");
  }
  w.sort_pairs();
  res.couple = w;
  res.node_map = {map0, map1};
  return res;
}

}  // namespace

TwistResult splice(const Couple& c, const Molecule& m, const VineMatch& v) {
  ClNodes n = classify_cl_cn(c, m, v);
  if (!n.cl) throw std::invalid_argument("splice: vine is CN");
  Couple w = c;
  int ti = n.u1.tree;
  Tree& t = w.tree(ti);
  // removed node set: Q[V] minus u1 (plus everything hanging below inside it)
  std::set<int> removed;
  for (auto& r : couple_block_nodes(c, n))
    if (!(r == n.u1)) removed.insert(r.node);
  // drop pairs with an end in the removed set
  std::erase_if(w.pairs, [&](auto& pr) {
    bool a = pr.first.tree == ti && removed.count(pr.first.node);
    bool b = pr.second.tree == ti && removed.count(pr.second.node);
    if (a != b) throw std::logic_error("splice: pairing leaves the block");
    return a && b;
  });
  // u11 keeps its slot; u21, u22 take the remaining slots by sign
  int slot11 = t.nodes[n.u11.node].which_child;
  int8_t z1 = t.nodes[n.u1.node].sign;
  int plus_slot = -1, minus_slot = -1;
  for (int s = 0; s < 3; ++s) {
    if (s == slot11) continue;
    int8_t sign = (s == 1) ? static_cast<int8_t>(-z1) : z1;
    (sign > 0 ? plus_slot : minus_slot) = s;
  }
  if (plus_slot < 0 || minus_slot < 0) throw std::logic_error("splice: slot assignment");
  auto hook = [&](int slot, int child) {
    t.nodes[n.u1.node].child[slot] = child;
    t.nodes[child].parent = n.u1.node;
    t.nodes[child].which_child = slot;
  };
  hook(slot11, n.u11.node);
  hook(plus_slot, n.u21.node);
  hook(minus_slot, n.u22.node);
  return normalize_with_maps(std::move(w), ti, 0);
}

TwistResult unit_twist(const Couple& c, const Molecule& m, const VineMatch& v) {
  ClNodes n = classify_cl_cn(c, m, v);
  if (!n.cl || !n.core) throw std::invalid_argument("unit_twist: vine is not core CL");
  Couple w = c;
  int ti = n.u2.tree;
  Tree& t = w.tree(ti);
  int u2 = n.u2.node, u0 = n.u0.node;
  int P = t.nodes[u2].parent, s2 = t.nodes[u2].which_child;
  int Pp = t.nodes[u0].parent, s0 = t.nodes[u0].which_child;
  // swap the subtree at u2 with the leaf u0
  t.nodes[P].child[s2] = u0;
  t.nodes[u0].parent = P;
  t.nodes[u0].which_child = s2;
  t.nodes[Pp].child[s0] = u2;
  t.nodes[u2].parent = Pp;
  t.nodes[u2].which_child = s0;
  // switch the two free-child subtrees of u2 (u23 keeps its slot)
  int s23 = t.nodes[n.u23.node].which_child;
  int sa = -1, sb = -1;
  for (int s = 0; s < 3; ++s) {
    if (s == s23) continue;
    (sa < 0 ? sa : sb) = s;
  }
  std::swap(t.nodes[u2].child[sa], t.nodes[u2].child[sb]);
  t.nodes[t.nodes[u2].child[sa]].which_child = sa;
  t.nodes[t.nodes[u2].child[sa]].parent = u2;
  t.nodes[t.nodes[u2].child[sb]].which_child = sb;
  t.nodes[t.nodes[u2].child[sb]].parent = u2;
  return normalize_with_maps(std::move(w), ti, 0);
}

// ----- pieces, flips, codes -----

std::string VinePiece::serialize() const {
  std::ostringstream os;
  os << (sgn > 0 ? '+' : '-') << '|';
  // preorder walk with stub markers
  std::vector<int> stack{tree.root()};
  std::string shape;
  while (!stack.empty()) {
    int x = stack.back();
    stack.pop_back();
    if (x == stubs[0]) shape.push_back('x');
    else if (x == stubs[1]) shape.push_back('y');
    else if (x == stubs[2]) shape.push_back('z');
    else if (tree.nodes[x].is_leaf()) shape.push_back('L');
    else shape.push_back('B');
    if (!tree.nodes[x].is_leaf())
      for (int i = 2; i >= 0; --i) stack.push_back(tree.nodes[x].child[i]);
  }
  os << shape << '|';
  auto ps = pairs;
  for (auto& p : ps)
    if (p.first > p.second) std::swap(p.first, p.second);
  std::sort(ps.begin(), ps.end());
  for (auto& [x, y] : ps) os << x << '-' << y << ';';
  os << '|' << u2;
  return os.str();
}

VinePiece extract_piece(const Couple& c, const ClNodes& n) {
  VinePiece p;
  const Tree& t = c.tree(n.u1.tree);
  p.sgn = t.nodes[n.u1.node].sign;
  // copy the subtree rooted at u1, pruning below stubs
  std::map<int, int> local;
  std::vector<int> order;
  std::vector<int> stack{n.u1.node};
  while (!stack.empty()) {
    int x = stack.back();
    stack.pop_back();
    order.push_back(x);
    NodeRef r{n.u1.tree, x};
    bool stub = r == n.u11 || r == n.u21 || r == n.u22;
    if (!stub && !t.nodes[x].is_leaf())
      for (int i = 2; i >= 0; --i) stack.push_back(t.nodes[x].child[i]);
  }
  p.tree.sign = p.sgn;
  p.tree.nodes.resize(order.size());
  for (int i = 0; i < (int)order.size(); ++i) local[order[i]] = i;
  for (int i = 0; i < (int)order.size(); ++i) {
    int x = order[i];
    NodeRef r{n.u1.tree, x};
    bool stub = r == n.u11 || r == n.u21 || r == n.u22;
    if (!stub && !t.nodes[x].is_leaf())
      for (int j = 0; j < 3; ++j) {
        int ch = local[t.nodes[x].child[j]];
        p.tree.nodes[i].child[j] = ch;
        p.tree.nodes[ch].parent = i;
        p.tree.nodes[ch].which_child = j;
      }
  }
  p.tree.assign_signs();
  p.stubs = {local[n.u11.node], local[n.u21.node], local[n.u22.node]};
  p.u2 = local[n.u2.node];
  for (auto& [x, y] : c.pairs) {
    if (x.tree != n.u1.tree || y.tree != n.u1.tree) continue;
    auto ix = local.find(x.node), iy = local.find(y.node);
    if (ix != local.end() && iy != local.end()) {
      // skip pairs involving stub leaves (they belong to the boundary)
      bool stub = false;
      for (int s : p.stubs)
        if (ix->second == s || iy->second == s) stub = true;
      if (!stub) p.pairs.push_back({ix->second, iy->second});
    }
  }
  return p;
}

VinePiece flip_piece(const VinePiece& p0) {
  VinePiece p = p0;
  // u11's stub keeps its slot; the other two child subtrees of the root swap
  int slot11 = p.tree.nodes[p.stubs[0]].which_child;
  if (p.tree.nodes[p.stubs[0]].parent != p.tree.root())
    throw std::logic_error("flip_piece: u11 stub is not a root child");
  int sa = -1, sb = -1;
  for (int s = 0; s < 3; ++s) {
    if (s == slot11) continue;
    (sa < 0 ? sa : sb) = s;
  }
  auto& root = p.tree.nodes[p.tree.root()];
  std::swap(root.child[sa], root.child[sb]);
  p.tree.nodes[root.child[sa]].which_child = sa;
  p.tree.nodes[root.child[sb]].which_child = sb;
  p.sgn = static_cast<int8_t>(-p.sgn);
  p.tree.sign = p.sgn;
  // re-normalize to preorder so serializations are comparable
  std::vector<int> map;
  p.tree = preorder_normalize(p.tree, p.tree.root(), &map);
  for (auto& [x, y] : p.pairs) {
    x = map[x];
    y = map[y];
  }
  for (auto& s : p.stubs) s = map[s];
  p.u2 = map[p.u2];
  return p;
}

namespace {

int8_t piece_ind(const VinePiece& p) { return p.tree.nodes[p.u2].sign; }

}  // namespace

FlipCode flip_and_code(const Couple& c, const Molecule& m, const VineMatch& v) {
  ClNodes n = classify_cl_cn(c, m, v);
  if (!n.cl) throw std::invalid_argument("flip_and_code: vine is CN");
  VinePiece p0 = extract_piece(c, n);
  FlipCode fc;
  fc.sgn = p0.sgn;
  fc.ind = piece_ind(p0);
  std::vector<std::string> members{p0.serialize(), flip_piece(p0).serialize()};
  if (n.core) {
    TwistResult tw = unit_twist(c, m, v);
    Molecule m2 = build_molecule(tw.couple);
    // the twisted vine occupies the same joints (as atoms of the new couple)
    auto vines2 = find_vines(m2);
    NodeRef ju1{n.u1.tree, tw.node_map[n.u1.tree][n.u1.node]};
    const VineMatch* match = nullptr;
    for (auto& vv : vines2) {
      ClNodes nn = classify_cl_cn(tw.couple, m2, vv);
      if (nn.cl && nn.u1 == ju1) match = &vv;
    }
    if (!match) throw std::logic_error("flip_and_code: twisted vine not found");
    VinePiece pt = extract_piece(tw.couple, classify_cl_cn(tw.couple, m2, *match));
    members.push_back(pt.serialize());
    members.push_back(flip_piece(pt).serialize());
  }
  std::sort(members.begin(), members.end());
  members.erase(std::unique(members.begin(), members.end()), members.end());
  fc.members = members;
  fc.cod = members.front();
  return fc;
}

namespace {

VinePiece deserialize_piece(const std::string& s) {
  VinePiece p;
  size_t b1 = s.find('|'), b2 = s.find('|', b1 + 1), b3 = s.find('|', b2 + 1);
  p.sgn = s[0] == '+' ? +1 : -1;
  std::string shape = s.substr(b1 + 1, b2 - b1 - 1);
  // rebuild the tree from the preorder shape
  p.tree.sign = p.sgn;
  p.tree.nodes.resize(shape.size());
  std::vector<int> stack;  // nodes awaiting children
  std::vector<int> need;
  for (int i = 0; i < (int)shape.size(); ++i) {
    if (i > 0) {
      int parent = stack.back();
      int slot = need.back();
      p.tree.nodes[parent].child[slot] = i;
      p.tree.nodes[i].parent = parent;
      p.tree.nodes[i].which_child = slot;
      if (++need.back() == 3) {
        stack.pop_back();
        need.pop_back();
      }
    }
    char ch = shape[i];
    if (ch == 'B') {
      stack.push_back(i);
      need.push_back(0);
    } else if (ch == 'x') p.stubs[0] = i;
    else if (ch == 'y') p.stubs[1] = i;
    else if (ch == 'z') p.stubs[2] = i;
  }
  p.tree.assign_signs();
  std::string prs = s.substr(b2 + 1, b3 - b2 - 1);
  size_t pos = 0;
  while (pos < prs.size()) {
    size_t dash = prs.find('-', pos), semi = prs.find(';', pos);
    p.pairs.push_back({std::stoi(prs.substr(pos, dash - pos)),
                       std::stoi(prs.substr(dash + 1, semi - dash - 1))});
    pos = semi + 1;
  }
  p.u2 = std::stoi(s.substr(b3 + 1));
  return p;
}

}  // namespace

Couple reconstruct_from_code(const Couple& spliced, const NodeRef& node, const FlipCode& code,
                             int8_t ind) {
  int8_t sgn = spliced.sign_of(node);
  for (const std::string& s : code.members) {
    VinePiece p = deserialize_piece(s);
    if (p.sgn != sgn || piece_ind(p) != ind) continue;
    // graft p in place of `node`
    Couple w = spliced;
    Tree& t = w.tree(node.tree);
    const Tree& spl = spliced.tree(node.tree);
    int8_t z = sgn;
    int slot11 = p.tree.nodes[p.stubs[0]].which_child;
    int plus_slot = -1, minus_slot = -1;
    for (int s2 = 0; s2 < 3; ++s2) {
      if (s2 == slot11) continue;
      int8_t sign = (s2 == 1) ? static_cast<int8_t>(-z) : z;
      (sign > 0 ? plus_slot : minus_slot) = s2;
    }
    int sub11 = spl.nodes[node.node].child[slot11];
    int sub21 = spl.nodes[node.node].child[plus_slot];
    int sub22 = spl.nodes[node.node].child[minus_slot];
    // plant piece nodes (root replaces `node`)
    int base = (int)t.nodes.size();
    std::vector<int> loc(p.tree.nodes.size(), -1);
    for (int i = 0; i < (int)p.tree.nodes.size(); ++i) {
      if (i == p.tree.root()) loc[i] = node.node;
      else {
        loc[i] = base;
        t.nodes.resize(++base);
      }
    }
    for (int i = 0; i < (int)p.tree.nodes.size(); ++i)
      if (i != p.tree.root()) t.nodes[loc[i]] = Tree::Node{};  // keep root's parent link
    t.nodes[loc[p.tree.root()]].child = {-1, -1, -1};
    for (int i = 0; i < (int)p.tree.nodes.size(); ++i) {
      const auto& src = p.tree.nodes[i];
      if (src.is_leaf()) continue;
      for (int j = 0; j < 3; ++j) {
        int ch = loc[src.child[j]];
        t.nodes[loc[i]].child[j] = ch;
        t.nodes[ch].parent = loc[i];
        t.nodes[ch].which_child = j;
      }
    }
    // attach boundary subtrees at the stubs
    auto attach = [&](int stub_local, int subtree_root) {
      int at = loc[stub_local];
      int par = t.nodes[at].parent, slot = t.nodes[at].which_child;
      t.nodes[par].child[slot] = subtree_root;
      t.nodes[subtree_root].parent = par;
      t.nodes[subtree_root].which_child = slot;
      // old stub arena node becomes unreachable
    };
    attach(p.stubs[0], sub11);
    attach(p.stubs[1], sub21);
    attach(p.stubs[2], sub22);
    // piece-internal pairs (stub pairs excluded by construction)
    for (auto& [x, y] : p.pairs)
      w.pairs.push_back({{node.tree, loc[x]}, {node.tree, loc[y]}});
    TwistResult res = normalize_with_maps(std::move(w), node.tree, 0);
    return res.couple;
  }
  throw std::invalid_argument("reconstruct_from_code: no member with requested sgn/ind");
}

}  // namespace wkdiag
