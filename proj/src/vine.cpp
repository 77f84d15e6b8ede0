#include "wkdiag/vine.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <stdexcept>

namespace wkdiag {

std::string family_name(VineFamily f) {
  switch (f) {
    case VineFamily::I: return "I";
    case VineFamily::II: return "II";
    case VineFamily::III: return "III";
    case VineFamily::IV: return "IV";
    case VineFamily::V: return "V";
    case VineFamily::VI: return "VI";
    case VineFamily::VII: return "VII";
    case VineFamily::VIII: return "VIII";
  }
  return "?";
}

namespace {

// ladder column of z rung pairs: descending side feeds `sink`, ascending
// side drains `source`; returns the attach stubs {top_in, top_out}: callers
// bond top_out -> ... -> top_in. For z = 0 returns {sink, source} so the
// caller wires directly.
struct ColumnEnds {
  int in_atom;   // atom expecting an incoming bond from above (descending side top)
  int out_atom;  // atom producing an outgoing bond upwards (ascending side top)
};

ColumnEnds build_column(Molecule& m, int sink, int source, int z) {
  if (z == 0) return {sink, source};
  std::vector<int> a(z), b(z);
  for (int i = 0; i < z; ++i) {
    a[i] = m.add_atom();
    b[i] = m.add_atom();
    m.add_bond(a[i], b[i]);
    m.add_bond(b[i], a[i]);
  }
  m.add_bond(a[0], sink);      // a-side descends into sink
  m.add_bond(source, b[0]);    // b-side ascends from source
  for (int i = 0; i + 1 < z; ++i) {
    m.add_bond(a[i + 1], a[i]);
    m.add_bond(b[i], b[i + 1]);
  }
  return {a[z - 1], b[z - 1]};
}

// joint chain spanning (from, to): from -> [x side up] -> j -> [y side down]
// -> to. z rung pairs; z = 0 is the bare joint.
int build_jchain(Molecule& m, int from, int to, int z) {
  int j = m.add_atom();
  if (z == 0) {
    m.add_bond(from, j);
    m.add_bond(j, to);
    return j;
  }
  std::vector<int> x(z), y(z);
  for (int i = 0; i < z; ++i) {
    x[i] = m.add_atom();
    y[i] = m.add_atom();
    m.add_bond(x[i], y[i]);
    m.add_bond(y[i], x[i]);
  }
  m.add_bond(from, x[0]);
  m.add_bond(y[0], to);
  for (int i = 0; i + 1 < z; ++i) {
    m.add_bond(x[i], x[i + 1]);
    m.add_bond(y[i + 1], y[i]);
  }
  m.add_bond(x[z - 1], j);
  m.add_bond(j, y[z - 1]);
  return j;
}

// the 2-double + 1-single triangle; external flow: in at w1, out at w3.
struct House {
  int w1, w2, w3;
};
House build_house(Molecule& m) {
  House h{m.add_atom(), m.add_atom(), m.add_atom()};
  m.add_bond(h.w1, h.w2);
  m.add_bond(h.w1, h.w2);
  m.add_bond(h.w2, h.w3);
  m.add_bond(h.w2, h.w3);
  m.add_bond(h.w3, h.w1);
  return h;
}

}  // namespace

VineTemplate instantiate_vine(VineFamily f, const VineParams& p) {
  VineTemplate t;
  t.family = f;
  t.params = p;
  Molecule& m = t.mol;
  switch (f) {
    case VineFamily::I: {
      t.j1 = m.add_atom();
      t.j2 = m.add_atom();
      m.add_bond(t.j1, t.j2);
      m.add_bond(t.j2, t.j1);
      break;
    }
    case VineFamily::II: {
      int z = p.z1;  // number of rung pairs, >= 1
      if (z < 1) throw std::invalid_argument("vine II needs >= 1 pair");
      t.j2 = m.add_atom();
      ColumnEnds e = build_column(m, t.j2, t.j2, z);
      t.j1 = m.add_atom();
      m.add_bond(e.out_atom, t.j1);
      m.add_bond(t.j1, e.in_atom);
      break;
    }
    case VineFamily::III: {
      int x = m.add_atom(), y = m.add_atom(), z = m.add_atom();
      m.add_bond(y, x);          // single x-y
      m.add_bond(z, y);          // single y-z
      m.add_bond(x, z);          // double z=x
      m.add_bond(z, x);
      t.j1 = build_jchain(m, x, y, p.z1);
      t.j2 = build_jchain(m, y, z, p.z2);
      break;
    }
    case VineFamily::IV: {
      int x = m.add_atom(), y = m.add_atom(), z = m.add_atom();
      m.add_bond(x, z);
      m.add_bond(z, x);
      m.add_bond(y, z);
      m.add_bond(z, y);
      t.j1 = build_jchain(m, x, y, p.z1);
      t.j2 = build_jchain(m, y, x, p.z2);
      break;
    }
    case VineFamily::V: {
      House h = build_house(m);
      ColumnEnds e = build_column(m, h.w1, h.w3, p.z1);
      t.j1 = m.add_atom();
      t.j2 = m.add_atom();
      m.add_bond(e.out_atom, t.j1);
      m.add_bond(t.j1, t.j2);
      m.add_bond(t.j2, e.in_atom);
      break;
    }
    case VineFamily::VI:
    case VineFamily::VIII: {
      int z = p.z1;
      if (z < 1) throw std::invalid_argument("vine VI/VIII need a column");
      if (p.pos < 0 || p.pos >= z) throw std::invalid_argument("bad reroute position");
      if (f == VineFamily::VI && p.z2 < 1)
        throw std::invalid_argument("vine VI reroute chain needs a cap");
      House h = build_house(m);
      // column with the b-side crossing between levels pos and pos+1 broken
      std::vector<int> a(z), b(z);
      for (int i = 0; i < z; ++i) {
        a[i] = m.add_atom();
        b[i] = m.add_atom();
        m.add_bond(a[i], b[i]);
        m.add_bond(b[i], a[i]);
      }
      m.add_bond(a[0], h.w1);
      for (int i = 0; i + 1 < z; ++i) m.add_bond(a[i + 1], a[i]);
      auto bside = [&](int i) { return i == 0 ? h.w3 : b[i - 1]; };  // level i atom
      for (int i = 0; i < z; ++i)
        if (i != p.pos) m.add_bond(bside(i), b[i]);
      t.j1 = m.add_atom();
      m.add_bond(b[z - 1], t.j1);
      m.add_bond(t.j1, a[z - 1]);
      t.j2 = build_jchain(m, bside(p.pos), b[p.pos], f == VineFamily::VI ? p.z2 : 0);
      break;
    }
    case VineFamily::VII: {
      House h = build_house(m);
      ColumnEnds e = build_column(m, h.w1, h.w3, p.z3);
      int A = m.add_atom(), B = m.add_atom();
      m.add_bond(B, A);
      m.add_bond(B, e.in_atom);   // B feeds the descending side
      m.add_bond(e.out_atom, A);  // ascending side drains into A
      t.j1 = build_jchain(m, A, B, p.z1);
      t.j2 = build_jchain(m, A, B, p.z2);
      break;
    }
  }
  return t;
}

std::vector<VineParams> param_choices(VineFamily f, int n) {
  std::vector<VineParams> out;
  switch (f) {
    case VineFamily::I:
      if (n == 2) out.push_back({});
      break;
    case VineFamily::II: {
      if (n >= 4 && n % 2 == 0) out.push_back({(n - 2) / 2, 0, 0, 0});
      break;
    }
    case VineFamily::III:
    case VineFamily::IV: {
      if (n < 5 || n % 2 == 0) break;
      int mm = (n - 5) / 2;
      for (int z1 = 0; z1 <= mm; ++z1) out.push_back({z1, mm - z1, 0, 0});
      break;
    }
    case VineFamily::V: {
      if (n >= 5 && n % 2 == 1) out.push_back({(n - 5) / 2, 0, 0, 0});
      break;
    }
    case VineFamily::VI: {
      if (n < 9 || n % 2 == 0) break;
      int mm = (n - 5) / 2;
      for (int z1 = 1; z1 < mm; ++z1)
        for (int pos = 0; pos < z1; ++pos) out.push_back({z1, mm - z1, 0, pos});
      break;
    }
    case VineFamily::VII: {
      if (n < 7 || n % 2 == 0) break;
      int mm = (n - 5) / 2 - 1;
      for (int z1 = 0; z1 <= mm; ++z1)
        for (int z2 = 0; z1 + z2 <= mm; ++z2) out.push_back({z1, z2, mm - z1 - z2, 0});
      break;
    }
    case VineFamily::VIII: {
      if (n < 7 || n % 2 == 0) break;
      int z1 = (n - 5) / 2;
      for (int pos = 0; pos < z1; ++pos) out.push_back({z1, 0, 0, pos});
      break;
    }
  }
  return out;
}

std::vector<Block> find_blocks(const Molecule& m, bool include_hyper) {
  std::vector<Block> out;
  std::vector<int> alive;
  for (int v = 0; v < (int)m.atoms.size(); ++v)
    if (m.atoms[v].alive) alive.push_back(v);
  for (size_t i = 0; i < alive.size(); ++i)
    for (size_t j = i + 1; j < alive.size(); ++j) {
      int v1 = alive[i], v2 = alive[j];
      // component structure of M minus the two candidate joints
      std::map<int, int> comp;
      int cid = 0;
      for (int s : alive) {
        if (s == v1 || s == v2 || comp.count(s)) continue;
        std::vector<int> stack{s};
        comp[s] = cid;
        while (!stack.empty()) {
          int v = stack.back();
          stack.pop_back();
          for (int b : m.bonds_at(v)) {
            int w = m.other_end(b, v);
            if (w == v1 || w == v2 || comp.count(w)) continue;
            comp[w] = cid;
            stack.push_back(w);
          }
        }
        ++cid;
      }
      auto joint_io = [&](int v, const std::set<int>& inside, int skip_bond) {
        int in = 0, outd = 0;
        for (int b : m.bonds_at(v)) {
          if (b == skip_bond) continue;
          int w = m.other_end(b, v);
          if (!inside.count(w)) continue;
          (m.zeta_at(b, v) > 0 ? outd : in)++;
        }
        return std::pair(in, outd);
      };
      auto jj_bonds = [&]() {
        std::vector<int> bs;
        for (int b : m.bonds_at(v1))
          if (m.other_end(b, v1) == v2) bs.push_back(b);
        return bs;
      };
      auto consider = [&](std::vector<int> interior) {
        std::set<int> inside(interior.begin(), interior.end());
        inside.insert(v1);
        inside.insert(v2);
        std::sort(interior.begin(), interior.end());
        auto [i1, o1] = joint_io(v1, inside, -1);
        auto [i2, o2] = joint_io(v2, inside, -1);
        if (i1 == 1 && o1 == 1 && i2 == 1 && o2 == 1) {
          out.push_back({v1, v2, interior, false, -1});
          return;
        }
        if (!include_hyper) return;
        for (int b : jj_bonds()) {
          auto [hi1, ho1] = joint_io(v1, inside, b);
          auto [hi2, ho2] = joint_io(v2, inside, b);
          if (hi1 == 1 && ho1 == 1 && hi2 == 1 && ho2 == 1) {
            out.push_back({v1, v2, interior, true, b});
            return;
          }
        }
      };
      // sigma<=2 candidate with empty interior: double bond (or its adjoint)
      if (m.bonds_between(v1, v2) >= 2) consider({});
      for (int c = 0; c < cid; ++c) {
        std::vector<int> interior;
        bool ok = true;
        for (auto& [v, cc] : comp)
          if (cc == c) {
            interior.push_back(v);
            if (m.degree(v) != 4) ok = false;
          }
        if (!ok || interior.empty()) continue;
        consider(interior);
      }
    }
  return out;
}

namespace {

// induced sub-molecule on an atom set, with joint coloring
Molecule induced(const Molecule& m, const std::vector<int>& atoms, int j1, int j2,
                 std::vector<uint64_t>* colors, int skip_bond = -1) {
  std::set<int> s(atoms.begin(), atoms.end());
  std::map<int, int> id;
  Molecule out;
  for (int v : atoms) id[v] = out.add_atom();
  for (int bi = 0; bi < (int)m.bonds.size(); ++bi) {
    const auto& b = m.bonds[bi];
    if (bi != skip_bond && b.alive && s.count(b.tail) && s.count(b.head))
      out.add_bond(id[b.tail], id[b.head]);
  }
  if (colors) {
    colors->assign(out.atoms.size(), 1);
    (*colors)[id[j1]] = 2;
    (*colors)[id[j2]] = 2;
  }
  return out;
}

}  // namespace

std::optional<VineMatch> classify_vine(const Molecule& m, const Block& b) {
  std::vector<int> atoms = b.atoms();
  int n = (int)atoms.size();
  std::vector<uint64_t> col;
  Molecule sub = induced(m, atoms, b.j1, b.j2, &col, b.hyper ? b.extra_bond : -1);
  std::string key = canonical_form_colored(sub, col, false);
  int sigma = m.bonds_between(b.j1, b.j2) - (b.hyper ? 1 : 0);
  for (VineFamily f :
       {VineFamily::I, VineFamily::II, VineFamily::V, VineFamily::III, VineFamily::IV,
        VineFamily::VII, VineFamily::VIII, VineFamily::VI}) {
    for (const VineParams& p : param_choices(f, n)) {
      VineTemplate t = instantiate_vine(f, p);
      int ts = t.mol.bonds_between(t.j1, t.j2);
      if (ts != sigma) continue;
      std::vector<uint64_t> tc(t.mol.atoms.size(), 1);
      tc[t.j1] = 2;
      tc[t.j2] = 2;
      if (canonical_form_colored(t.mol, tc, false) == key) {
        VineMatch vm;
        vm.family = f;
        vm.j1 = b.j1;
        vm.j2 = b.j2;
        vm.atoms = atoms;
        vm.sigma = sigma;
        vm.params = p;
        vm.ladder_slots = {p.z1, p.z2, p.z3};
        return vm;
      }
    }
  }
  return std::nullopt;
}

std::vector<VineMatch> find_vines(const Molecule& m) {
  std::vector<VineMatch> out;
  for (const Block& b : find_blocks(m, false))
    if (auto v = classify_vine(m, b)) out.push_back(*v);
  return out;
}

Molecule close_joints(const Molecule& m, int j1, int j2, int sigma) {
  Molecule out = m;
  if (sigma == 0) {
    for (int j : {j1, j2}) {
      auto bs = out.bonds_at(j);
      if (bs.size() != 2) throw std::invalid_argument("close_joints: joint degree != 2");
      int from = -1, to = -1;
      for (int b : bs) (out.zeta_at(b, j) > 0 ? to : from) = out.other_end(b, j);
      out.remove_atom(j);
      out.add_bond(from, to);
    }
  } else if (sigma == 1) {
    int from = -1, to = -1;
    for (int b : out.bonds_at(j1)) {
      int w = out.other_end(b, j1);
      if (w != j2) from = w;
    }
    for (int b : out.bonds_at(j2)) {
      int w = out.other_end(b, j2);
      if (w != j1) to = w;
    }
    // orient along the path from->j->j'->to
    bool fwd = false;
    for (int b : out.bonds_at(j1))
      if (out.other_end(b, j1) == from && out.bonds[b].head == j1) fwd = true;
    out.remove_atom(j1);
    out.remove_atom(j2);
    if (fwd) out.add_bond(from, to);
    else out.add_bond(to, from);
  } else {
    throw std::invalid_argument("close_joints: sigma must be 0 or 1");
  }
  return out;
}

Molecule close_joints(const Molecule& m, const VineMatch& v) {
  if (v.family == VineFamily::I)
    throw std::invalid_argument("close_joints: vine (I) has no interior");
  return close_joints(m, v.j1, v.j2, v.sigma);
}

std::vector<Ladder> find_ladders(const Molecule& m) {
  // rungs: pairs of atoms joined by exactly two bonds
  std::vector<std::pair<int, int>> rungs;
  for (int v = 0; v < (int)m.atoms.size(); ++v) {
    if (!m.atoms[v].alive) continue;
    for (int w = v + 1; w < (int)m.atoms.size(); ++w)
      if (m.atoms[w].alive && m.bonds_between(v, w) == 2) rungs.push_back({v, w});
  }
  auto linked = [&](std::pair<int, int> a, std::pair<int, int> b) {
    // crossing singles of opposite directions, either alignment
    for (int flip = 0; flip < 2; ++flip) {
      int b1 = flip ? b.second : b.first, b2 = flip ? b.first : b.second;
      if (m.bonds_between(a.first, b1) != 1 || m.bonds_between(a.second, b2) != 1) continue;
      int lab = -1, lcd = -1;
      for (int bb : m.bonds_at(a.first))
        if (m.other_end(bb, a.first) == b1) lab = bb;
      for (int bb : m.bonds_at(a.second))
        if (m.other_end(bb, a.second) == b2) lcd = bb;
      if (lab >= 0 && lcd >= 0 && m.zeta_at(lab, a.first) == -m.zeta_at(lcd, a.second))
        return true;
    }
    return false;
  };
  int n = (int)rungs.size();
  std::vector<std::vector<int>> adj(n);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      if (linked(rungs[i], rungs[j])) {
        adj[i].push_back(j);
        adj[j].push_back(i);
      }
  std::vector<bool> used(n, false);
  std::vector<Ladder> out;
  for (int s = 0; s < n; ++s) {
    if (used[s] || adj[s].size() > 1) continue;  // start from chain endpoints
    Ladder lad;
    int prev = -1, cur = s;
    while (cur >= 0) {
      used[cur] = true;
      lad.rungs.push_back(rungs[cur]);
      int next = -1;
      for (int x : adj[cur])
        if (x != prev && !used[x]) next = x;
      prev = cur;
      cur = next;
    }
    out.push_back(lad);
  }
  for (int s = 0; s < n; ++s) {  // leftover cycles of rungs
    if (used[s]) continue;
    Ladder lad;
    int prev = -1, cur = s;
    while (cur >= 0) {
      used[cur] = true;
      lad.rungs.push_back(rungs[cur]);
      int next = -1;
      for (int x : adj[cur])
        if (x != prev && !used[x]) next = x;
      prev = cur;
      cur = next;
    }
    out.push_back(lad);
  }
  return out;
}

namespace {

bool share_one_joint(const VineMatch& a, const VineMatch& b, int& joint) {
  std::set<int> ja{a.j1, a.j2}, jb{b.j1, b.j2};
  std::vector<int> common;
  for (int x : ja)
    if (jb.count(x)) common.push_back(x);
  if (common.size() != 1) return false;
  // no other common atom
  std::set<int> sa(a.atoms.begin(), a.atoms.end());
  int overlap = 0;
  for (int x : b.atoms)
    if (sa.count(x)) ++overlap;
  if (overlap != 1) return false;
  joint = common[0];
  return true;
}

}  // namespace

std::vector<VineLikeObject> vine_like_collection(const Molecule& m) {
  std::vector<VineMatch> vines = find_vines(m);

  // keep only maximal vines (drop ones strictly contained in another)
  {
    std::vector<VineMatch> keep;
    for (size_t i = 0; i < vines.size(); ++i) {
      bool contained = false;
      for (size_t j = 0; j < vines.size() && !contained; ++j) {
        if (i == j || vines[j].atoms.size() <= vines[i].atoms.size()) continue;
        std::set<int> sj(vines[j].atoms.begin(), vines[j].atoms.end());
        bool sub = true;
        for (int a : vines[i].atoms)
          if (!sj.count(a)) sub = false;
        contained = sub;
      }
      if (!contained) keep.push_back(vines[i]);
    }
    vines = keep;
  }

  // DV detection: two vines (V) sharing both joints and only them.
  std::vector<bool> used(vines.size(), false);
  std::vector<VineLikeObject> out;
  for (size_t i = 0; i < vines.size(); ++i)
    for (size_t j = i + 1; j < vines.size(); ++j) {
      if (vines[i].family != VineFamily::V || vines[j].family != VineFamily::V) continue;
      std::set<int> ji{vines[i].j1, vines[i].j2}, jj{vines[j].j1, vines[j].j2};
      if (ji != jj) continue;
      std::set<int> si(vines[i].atoms.begin(), vines[i].atoms.end());
      int overlap = 0;
      for (int x : vines[j].atoms)
        if (si.count(x)) ++overlap;
      if (overlap != 2) continue;
      VineLikeObject o;
      o.kind = VineLikeObject::DV;
      o.ingredients = {vines[i], vines[j]};
      o.atoms = vines[i].atoms;
      for (int x : vines[j].atoms)
        if (!si.count(x)) o.atoms.push_back(x);
      o.j1 = vines[i].j1;
      o.j2 = vines[i].j2;
      out.push_back(o);
      used[i] = used[j] = true;
    }

  // chain the remaining vines at shared joints (maximal VC), then check for
  // the adjoint bond (HV / HVC).
  std::vector<int> order;
  for (size_t i = 0; i < vines.size(); ++i)
    if (!used[i]) order.push_back((int)i);
  std::vector<bool> seen(vines.size(), false);
  for (int i : order) {
    if (seen[i]) continue;
    std::vector<int> chain{i};
    seen[i] = true;
    bool grew = true;
    while (grew) {
      grew = false;
      for (int j : order) {
        if (seen[j]) continue;
        int joint;
        if (share_one_joint(vines[chain.front()], vines[j], joint) ||
            share_one_joint(vines[chain.back()], vines[j], joint)) {
          if (share_one_joint(vines[chain.back()], vines[j], joint)) chain.push_back(j);
          else chain.insert(chain.begin(), j);
          seen[j] = true;
          grew = true;
        }
      }
    }
    VineLikeObject o;
    std::set<int> all;
    for (int x : chain) {
      o.ingredients.push_back(vines[x]);
      for (int a : vines[x].atoms) all.insert(a);
    }
    o.atoms.assign(all.begin(), all.end());
    // outer joints: joints appearing in exactly one ingredient's joint pair
    std::map<int, int> jcount;
    for (int x : chain) {
      jcount[vines[x].j1]++;
      jcount[vines[x].j2]++;
    }
    std::vector<int> outer;
    for (auto& [a, c] : jcount)
      if (c == 1) outer.push_back(a);
    if (outer.size() == 2) {
      o.j1 = outer[0];
      o.j2 = outer[1];
    } else if (chain.size() == 1) {
      o.j1 = vines[chain[0]].j1;
      o.j2 = vines[chain[0]].j2;
    }
    // adjoint bond between the outer joints, beyond those inside ingredients?
    bool hyper = false;
    if (o.j1 >= 0 && o.j2 >= 0) {
      int inside = 0;
      for (auto& ing : o.ingredients) {
        std::set<int> ja{ing.j1, ing.j2};
        if (ja.count(o.j1) && ja.count(o.j2)) inside = ing.sigma;
      }
      if (m.bonds_between(o.j1, o.j2) > inside) hyper = true;
    }
    o.kind = chain.size() == 1 ? (hyper ? VineLikeObject::HV : VineLikeObject::VC)
                               : (hyper ? VineLikeObject::HVC : VineLikeObject::VC);
    out.push_back(o);
  }
  return out;
}

}  // namespace wkdiag
