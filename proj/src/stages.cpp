#include "wkdiag/stages.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <stdexcept>

namespace wkdiag {

double gap_magnitude(const GlobalParams& p, const IVec& r) {
  return std::sqrt(static_cast<double>(r.norm2())) / p.L;
}

GapReport classify_gap(const GlobalParams& p, const IVec& r) {
  GapReport g;
  g.r = r;
  g.magnitude = gap_magnitude(p, r);
  g.zero = r.is_zero();
  g.sg = g.magnitude <= p.sg_threshold();
  g.dyadic = g.zero ? std::numeric_limits<int>::min()
                    : (int)std::floor(std::log2(g.magnitude));
  return g;
}

IVec triple_gap(const Molecule& m, const MoleculeDecoration& md, int v, int l1, int l2) {
  if (m.zeta_at(l1, v) == m.zeta_at(l2, v))
    throw std::invalid_argument("triple_gap: bonds have the same direction");
  int out = m.zeta_at(l1, v) > 0 ? l1 : l2;
  int in = out == l1 ? l2 : l1;
  return md.k[out] - md.k[in];
}

IVec block_gap(const Molecule& m, const MoleculeDecoration& md, int j1, int j2,
               const std::vector<int>& atoms) {
  std::set<int> inside(atoms.begin(), atoms.end());
  std::vector<int> bb;
  for (int b : m.bonds_at(j1))
    if (inside.count(m.other_end(b, j1))) bb.push_back(b);
  if (bb.size() != 2) throw std::invalid_argument("block_gap: joint bond count");
  return triple_gap(m, md, j1, bb[0], bb[1]);
}

std::vector<GapReport> gaps(const GlobalParams& p, const Molecule& m,
                            const MoleculeDecoration& md, const std::vector<int>& triple_atoms) {
  std::vector<GapReport> out;
  for (const auto& obj : vine_like_collection(m)) {
    GapReport g = classify_gap(p, block_gap(m, md, obj.ingredients[0].j1, obj.ingredients[0].j2,
                                            obj.ingredients[0].atoms));
    g.target = GapReport::Block;
    g.atoms = obj.atoms;
    out.push_back(g);
  }
  for (const auto& lad : find_ladders(m)) {
    if (lad.rungs.size() < 2) continue;
    // gap between consecutive rungs via the crossing singles
    auto [a1, a2] = lad.rungs[0];
    auto [b1, b2] = lad.rungs[1];
    int lab = -1, lcd = -1;
    for (int b : m.bonds_at(a1)) {
      int w = m.other_end(b, a1);
      if ((w == b1 || w == b2) && m.bonds_between(a1, w) == 1) lab = b;
    }
    for (int b : m.bonds_at(a2)) {
      int w = m.other_end(b, a2);
      if ((w == b1 || w == b2) && m.bonds_between(a2, w) == 1) lcd = b;
    }
    if (lab < 0 || lcd < 0) continue;
    int outb = m.zeta_at(lab, a1) > 0 ? lab : lcd;
    int inb = outb == lab ? lcd : lab;
    GapReport g = classify_gap(p, md.k[outb] - md.k[inb]);
    g.target = GapReport::LadderGap;
    for (auto& r : lad.rungs) {
      g.atoms.push_back(r.first);
      g.atoms.push_back(r.second);
    }
    out.push_back(g);
  }
  for (int v : triple_atoms) {
    auto bs = m.bonds_at(v);
    for (size_t i = 0; i < bs.size(); ++i)
      for (size_t j = i + 1; j < bs.size(); ++j) {
        if (m.zeta_at(bs[i], v) == m.zeta_at(bs[j], v)) continue;
        GapReport g = classify_gap(p, triple_gap(m, md, v, bs[i], bs[j]));
        g.target = GapReport::AtomTriple;
        g.atom = v;
        out.push_back(g);
      }
  }
  return out;
}

// ----- cutting -----

CutResult cut(const Molecule& m, int v, int l1, int l2) {
  int deg = m.degree(v);
  if (deg != 3 && deg != 4) throw std::invalid_argument("cut: atom degree must be 3 or 4");
  if (m.zeta_at(l1, v) == m.zeta_at(l2, v))
    throw std::invalid_argument("cut: bonds must have opposite directions");
  CutResult res;
  res.mol = m;
  int before_f = m.n_components();
  int chi0 = m.euler_chi(), nu0 = m.nu(), v30 = m.v_degree_count(3);
  res.new_atom = res.mol.add_atom();
  for (int b : res.mol.bonds_at(v)) {
    if (b == l1 || b == l2) continue;
    if (res.mol.bonds[b].tail == v) res.mol.bonds[b].tail = res.new_atom;
    else res.mol.bonds[b].head = res.new_atom;
  }
  res.beta = res.mol.n_components() > before_f;
  res.record.op = res.beta ? OpId::CUT_BETA : OpId::CUT_ALPHA;
  res.record.kind = OpKind::Structural;
  res.record.d_chi = res.mol.euler_chi() - chi0;
  res.record.d_nu = res.mol.nu() - nu0;
  res.record.d_v3 = res.mol.v_degree_count(3) - v30;
  res.record.d_f = res.mol.n_components() - before_f;
  res.record.d_vbeta = res.beta ? 2 : 0;
  return res;
}

// ----- stage 1 -----

GapOracle oracle_from_decoration(const GlobalParams& p, const Molecule& m,
                                 const MoleculeDecoration& md) {
  GapOracle o;
  o.object_sg = [&p, &m, &md](const VineLikeObject& obj) {
    IVec r = block_gap(m, md, obj.ingredients[0].j1, obj.ingredients[0].j2,
                       obj.ingredients[0].atoms);
    return classify_gap(p, r).sg;
  };
  return o;
}

std::vector<VineMatch> select_congruence_vines(const Couple& c, const Molecule& m) {
  std::vector<VineMatch> out;
  for (const auto& obj : vine_like_collection(m)) {
    if (obj.kind == VineLikeObject::HV || obj.kind == VineLikeObject::DV) continue;
    // classify ingredients
    std::vector<ClNodes> cls;
    for (auto& v : obj.ingredients) cls.push_back(classify_cl_cn(c, m, v));
    bool root_vc = obj.kind == VineLikeObject::VC && obj.j1 >= 0 && obj.j2 >= 0 &&
                   m.degree(obj.j1) == 3 && m.degree(obj.j2) == 3;
    bool exclude_one = obj.kind == VineLikeObject::HVC || root_vc;
    int excluded = -1;
    if (exclude_one) {
      for (size_t i = 0; i < cls.size(); ++i)
        if (!cls[i].cl) excluded = (int)i;  // prefer excluding the CN vine
      if (excluded < 0) {
        // exclude the top vine: u1 is an ancestor of all other u1 nodes
        auto depth = [&](const NodeRef& r) {
          int d = 0, x = r.node;
          const Tree& t = c.tree(r.tree);
          while (t.nodes[x].parent >= 0) {
            x = t.nodes[x].parent;
            ++d;
          }
          return d;
        };
        int best = -1, bd = 1 << 30;
        for (size_t i = 0; i < cls.size(); ++i)
          if (cls[i].cl && depth(cls[i].u1) < bd) {
            bd = depth(cls[i].u1);
            best = (int)i;
          }
        excluded = best;
      }
    }
    for (size_t i = 0; i < obj.ingredients.size(); ++i)
      if (cls[i].cl && (int)i != excluded) out.push_back(obj.ingredients[i]);
  }
  return out;
}

namespace {

int node_depth(const Couple& c, const NodeRef& r) {
  int d = 0, x = r.node;
  const Tree& t = c.tree(r.tree);
  while (t.nodes[x].parent >= 0) {
    x = t.nodes[x].parent;
    ++d;
  }
  return d;
}

}  // namespace

StageOneResult stage_one(const Couple& c, const GapOracle& oracle) {
  StageOneResult res;
  SkeletonDecomposition skd = skeleton(c);
  Couple cur = skd.skeleton;
  if (cur.trivial()) {
    res.q_sub = cur;
    return res;
  }
  Molecule m0 = build_molecule(cur);
  auto collection = vine_like_collection(m0);
  auto selected = select_congruence_vines(cur, m0);

  // V0: selected CL vines that are SG (per their containing object)
  auto object_of = [&](const VineMatch& v) -> const VineLikeObject* {
    for (auto& obj : collection) {
      std::set<int> oa(obj.atoms.begin(), obj.atoms.end());
      bool sub = true;
      for (int a : v.atoms)
        if (!oa.count(a)) sub = false;
      if (sub) return &obj;
    }
    return nullptr;
  };
  std::vector<VineMatch> v0;
  for (auto& v : selected) {
    const VineLikeObject* obj = object_of(v);
    if (obj && oracle.object_sg(*obj)) v0.push_back(v);
  }

  // organize into units per object, bottom to top (deepest u1 first)
  std::map<const VineLikeObject*, std::vector<VineMatch>> per_obj;
  for (auto& v : v0) per_obj[object_of(v)].push_back(v);
  std::vector<std::pair<int, VineMatch>> order;  // (depth, vine), deepest first
  for (auto& [obj, vines] : per_obj) {
    for (auto& v : vines) {
      ClNodes n = classify_cl_cn(cur, m0, v);
      order.push_back({node_depth(cur, n.u1), v});
      StageOneUnit unit;
      unit.bad = v.bad();
      unit.vines = {v};
      res.units.push_back(unit);
    }
  }
  std::sort(order.begin(), order.end(),
            [](auto& a, auto& b) { return a.first > b.first; });

  // splice in order, tracking u1 nodes through the maps
  std::vector<NodeRef> targets;
  for (auto& [d, v] : order) targets.push_back(classify_cl_cn(cur, m0, v).u1);
  std::vector<int> hinge_nodes;  // final u1 nodes (as couple refs, tree fixed)
  std::vector<NodeRef> hinge_refs;
  std::vector<std::array<NodeRef, 2>> hinge_free;  // mapped (u21, u22)
  for (size_t step = 0; step < targets.size(); ++step) {
    Molecule mc = build_molecule(cur);
    // find the vine whose u1 is the mapped target
    const VineMatch* match = nullptr;
    auto vines = find_vines(mc);
    ClNodes picked;
    for (auto& v : vines) {
      ClNodes n;
      try {
        n = classify_cl_cn(cur, mc, v);
      } catch (const std::logic_error&) {
        continue;
      }
      if (n.cl && n.u1 == targets[step]) {
        match = &v;
        picked = n;
        break;
      }
    }
    if (!match) throw std::logic_error("stage_one: spliced vine not found");
    TwistResult sp = splice(cur, mc, *match);
    OperationRecord rec;
    rec.op = OpId::SPLICE;
    rec.kind = OpKind::Structural;
    rec.assumption = "SG";
    res.trace.push_back(rec);
    // remap outstanding targets and hinge refs
    auto remap = [&](NodeRef& r) {
      int nn = sp.node_map[r.tree][r.node];
      if (nn < 0) throw std::logic_error("stage_one: tracked node removed");
      r.node = nn;
    };
    for (size_t j = step + 1; j < targets.size(); ++j) remap(targets[j]);
    for (auto& h : hinge_refs) remap(h);
    for (auto& hf : hinge_free) {
      remap(hf[0]);
      remap(hf[1]);
    }
    NodeRef h = picked.u1;
    remap(h);
    hinge_refs.push_back(h);
    NodeRef f1 = picked.u21, f2 = picked.u22;
    remap(f1);
    remap(f2);
    hinge_free.push_back({f1, f2});
    cur = sp.couple;
  }
  res.q_sub = cur;
  if (!cur.trivial()) {
    Molecule mf = build_molecule(cur);
    auto idx = molecule_atom_index(cur);
    for (size_t i = 0; i < hinge_refs.size(); ++i) {
      int atom = idx.at(noderef_key(hinge_refs[i]));
      res.hinge_atoms.push_back(atom);
      // designated pair: the two bonds at the hinge consuming the old free
      // children u21, u22 of the merged vine (now children of u1)
      std::array<int, 2> hb{-1, -1};
      NodeRef hnode = hinge_refs[i];
      for (int b : mf.bonds_at(atom)) {
        const auto& bd = mf.bonds[b];
        NodeRef used{-1, -1};
        if (!bd.lp) {
          if (bd.parent_end == atom) used = bd.origin;  // child branching node
        } else {
          NodeRef leaf = bd.origin;
          auto part = cur.partner(leaf);
          if (leaf.tree == hnode.tree && cur.tree(leaf.tree).nodes[leaf.node].parent == hnode.node)
            used = leaf;
          else if (part && part->tree == hnode.tree &&
                   cur.tree(part->tree).nodes[part->node].parent == hnode.node)
            used = *part;
        }
        for (int s = 0; s < 2; ++s)
          if (used == hinge_free[i][s]) hb[s] = b;
      }
      res.hinge_bonds.push_back(hb);
    }
  }
  return res;
}

std::vector<Couple> congruence_class(const Couple& c, int max_insert_order) {
  InsertDecomposition dec = decompose_inserts(c);
  if (dec.sk.trivial()) return {c};
  Molecule msk = build_molecule(dec.sk);
  auto selected = select_congruence_vines(dec.sk, msk);

  std::vector<InsertDecomposition> members{dec};
  for (auto& v : selected) {
    ClNodes n = classify_cl_cn(dec.sk, msk, v);
    if (!n.core) continue;  // only core vines admit the unit twist
    // locate the tree insert at u2 and the couple insert at (u23, u0)
    int pair_q = -1;
    for (int q = 0; q < (int)dec.sk.pairs.size(); ++q) {
      auto& [x, y] = dec.sk.pairs[q];
      if ((x == n.u23 && y == n.u0) || (x == n.u0 && y == n.u23)) pair_q = q;
    }
    std::vector<InsertDecomposition> next;
    for (const InsertDecomposition& base : members) {
      int nT = 0, nQ = 0;
      auto itT = base.tree_inserts.find({n.u2.tree, n.u2.node});
      if (itT != base.tree_inserts.end()) nT = itT->second.order();
      auto itQ = pair_q >= 0 ? base.couple_inserts.find(pair_q) : base.couple_inserts.end();
      if (itQ != base.couple_inserts.end()) nQ = itQ->second.order();
      int total = nT + nQ;
      if (total > max_insert_order) total = nT + nQ;  // budget applies to enumeration
      for (int twist = 0; twist < 2; ++twist) {
        InsertDecomposition mem = base;
        ClNodes nn = n;
        if (twist) {
          // unit twist of the skeleton; remap insert keys
          Molecule mm = build_molecule(mem.sk);
          auto vines = find_vines(mm);
          const VineMatch* match = nullptr;
          for (auto& vv : vines) {
            ClNodes x;
            try {
              x = classify_cl_cn(mem.sk, mm, vv);
            } catch (const std::logic_error&) {
              continue;
            }
            if (x.cl && x.core && x.u1 == n.u1) match = &vv;
          }
          if (!match) continue;
          TwistResult tw = unit_twist(mem.sk, mm, *match);
          InsertDecomposition mapped;
          mapped.sk = tw.couple;
          for (auto& [key, t] : mem.tree_inserts) {
            int nn2 = tw.node_map[key.first][key.second];
            mapped.tree_inserts[{key.first, nn2}] = t;
          }
          // pair indices: remap through node maps and re-sorted pairs
          for (auto& [q, ins] : mem.couple_inserts) {
            NodeRef a = mem.sk.pairs[q].first, b = mem.sk.pairs[q].second;
            a.node = tw.node_map[a.tree][a.node];
            b.node = tw.node_map[b.tree][b.node];
            int q2 = -1;
            for (int i = 0; i < (int)mapped.sk.pairs.size(); ++i) {
              auto& [x, y] = mapped.sk.pairs[i];
              if ((x == a && y == b) || (x == b && y == a)) q2 = i;
            }
            mapped.couple_inserts[q2] = ins;
          }
          mem = mapped;
          Molecule m3 = build_molecule(mem.sk);
          auto vines3 = find_vines(m3);
          for (auto& vv : vines3) {
            ClNodes x;
            try {
              x = classify_cl_cn(mem.sk, m3, vv);
            } catch (const std::logic_error&) {
              continue;
            }
            NodeRef u1m = n.u1;
            u1m.node = tw.node_map[u1m.tree][u1m.node];
            if (x.cl && x.core && x.u1 == u1m) nn = x;
          }
        }
        // pair index of (u23, u0) in mem.sk
        int pq = -1;
        for (int q = 0; q < (int)mem.sk.pairs.size(); ++q) {
          auto& [x, y] = mem.sk.pairs[q];
          if ((x == nn.u23 && y == nn.u0) || (x == nn.u0 && y == nn.u23)) pq = q;
        }
        // redistribute insert orders between T^(u2) and Q^(u23,u0)
        for (int a = 0; a <= total; a += 2) {
          int b = total - a;
          for (auto& T : enumerate_regular_trees(a, mem.sk.sign_of(nn.u2))) {
            for (auto& Q : enumerate_regular_couples(b)) {
              InsertDecomposition m2 = mem;
              if (a > 0) m2.tree_inserts[{nn.u2.tree, nn.u2.node}] = T;
              else m2.tree_inserts.erase({nn.u2.tree, nn.u2.node});
              if (b > 0 && pq >= 0) m2.couple_inserts[pq] = Q;
              else if (pq >= 0) m2.couple_inserts.erase(pq);
              next.push_back(m2);
            }
          }
        }
      }
    }
    // dedupe
    std::map<std::string, InsertDecomposition> uniq;
    for (auto& mdec : next) uniq.emplace(recompose_inserts(mdec).serialize(), mdec);
    members.clear();
    for (auto& [k, v2] : uniq) members.push_back(v2);
  }
  std::vector<Couple> out;
  std::set<std::string> seen;
  for (auto& mdec : members) {
    Couple q = recompose_inserts(mdec);
    if (seen.insert(q.serialize()).second) out.push_back(q);
  }
  return out;
}

// ----- stage 2 -----

namespace {

struct Stage2State {
  GlobalParams p;
  Molecule m;
  MoleculeDecoration md;
  StageTwoAnnotation ann;
  std::vector<OperationRecord> trace;
  std::vector<std::pair<IVec, int>> cut_gaps;  // (gap, dyadic) per cut, in order
  std::vector<int> alpha_atoms;                // in creation order

  void ensure(int atom) {
    while ((int)ann.atom_class.size() <= atom) {
      ann.atom_class.push_back(StageTwoAnnotation::Eps);
      ann.dyadic.push_back(0);
      ann.iota.push_back(0);
      ann.kappa.push_back(0);
      ann.hinge.push_back(false);
    }
  }

  void do_cut(int v, int l1, int l2, bool force_beta_label = false, bool force_alpha = false) {
    IVec r = triple_gap(m, md, v, l1, l2);
    CutResult cr = cut(m, v, l1, l2);
    ensure(cr.new_atom);
    md.k.resize(m.bonds.size());
    md.c_v.resize(m.atoms.size() + 1);
    m = cr.mol;
    trace.push_back(cr.record);
    GapReport g = classify_gap(p, r);
    cut_gaps.push_back({r, g.dyadic});
    auto label = [&](int atom, bool alpha) {
      ensure(atom);
      ann.atom_class[atom] = alpha ? StageTwoAnnotation::Alpha : StageTwoAnnotation::Beta;
      if (alpha) {
        ann.dyadic[atom] = g.dyadic;
        alpha_atoms.push_back(atom);
      }
    };
    bool alpha = force_alpha || (!cr.beta && !force_beta_label);
    label(v, alpha);
    label(cr.new_atom, alpha);
  }
};

bool sg_triple_at(const GlobalParams& p, const Molecule& m, const MoleculeDecoration& md, int v,
                  int& l1, int& l2) {
  auto bs = m.bonds_at(v);
  double best = 1e300;
  bool found = false;
  for (size_t i = 0; i < bs.size(); ++i)
    for (size_t j = i + 1; j < bs.size(); ++j) {
      if (m.zeta_at(bs[i], v) == m.zeta_at(bs[j], v)) continue;
      IVec r = triple_gap(m, md, v, bs[i], bs[j]);
      double mag = gap_magnitude(p, r);
      if (mag <= p.sg_threshold() && mag < best && !r.is_zero()) {
        best = mag;
        l1 = bs[i];
        l2 = bs[j];
        found = true;
      }
    }
  return found;
}

}  // namespace

StageTwoResult stage_two(const GlobalParams& p, const Molecule& m0, const MoleculeDecoration& md0,
                         const std::vector<int>& hinge_atoms,
                         const std::vector<std::array<int, 2>>& hinge_bonds) {
  Stage2State st{p, m0, md0, {}, {}, {}, {}};
  st.md.k.resize(m0.bonds.size());
  for (size_t i = 0; i < md0.k.size(); ++i) st.md.k[i] = md0.k[i];
  st.ensure((int)m0.atoms.size() - 1);
  for (size_t i = 0; i < hinge_atoms.size(); ++i) st.ann.hinge[hinge_atoms[i]] = true;

  // Step 1: remove SG vine-like objects (and triple bonds at hinge atoms)
  {
    auto col = vine_like_collection(st.m);
    for (auto& obj : col) {
      // DV rule: if both vines are SG pick the lexicographically first
      const VineMatch* v = &obj.ingredients[0];
      IVec r = block_gap(st.m, st.md, v->j1, v->j2, v->atoms);
      GapReport g = classify_gap(p, r);
      if (!g.sg || g.zero) continue;
      // cut at each joint along the two bonds inside the object, then drop
      // the separated chain
      std::set<int> inside(obj.atoms.begin(), obj.atoms.end());
      for (int joint : {obj.j1, obj.j2}) {
        if (joint < 0) continue;
        std::vector<int> bb;
        for (int b : st.m.bonds_at(joint))
          if (inside.count(st.m.other_end(b, joint)) &&
              (obj.kind != VineLikeObject::DV || true))
            bb.push_back(b);
        if (bb.size() < 2) continue;
        if (st.m.degree(joint) < 3) continue;
        st.do_cut(joint, bb[0], bb[1], false, true);  // joints become alpha atoms
      }
      // remove the separated component(s) consisting of object interior
      for (int a : obj.atoms)
        if (st.m.atoms[a].alive && a != obj.j1 && a != obj.j2) st.m.remove_atom(a);
      // the alpha halves carrying the chain got removed with it; the halves
      // keeping the outside bonds stay labeled
    }
  }

  // Step 2: triangles with two SG triples
  {
    bool again = true;
    while (again) {
      again = false;
      int n = (int)st.m.atoms.size();
      for (int v1 = 0; v1 < n && !again; ++v1) {
        if (!st.m.atoms[v1].alive) continue;
        for (int v2 = 0; v2 < n && !again; ++v2) {
          if (v2 == v1 || !st.m.atoms[v2].alive) continue;
          for (int v3 = v2 + 1; v3 < n && !again; ++v3) {
            if (v3 == v1 || !st.m.atoms[v3].alive) continue;
            // bonds l1: v2-v3, l2: v3-v1, l3: v1-v2
            auto bond_between = [&](int x, int y) {
              for (int b : st.m.bonds_at(x))
                if (st.m.other_end(b, x) == y) return b;
              return -1;
            };
            int l1 = bond_between(v2, v3), l2 = bond_between(v3, v1), l3 = bond_between(v1, v2);
            if (l1 < 0 || l2 < 0 || l3 < 0) continue;
            // SG triples at v1 (l2,l3) and v2 (l3,l1)
            auto sg_at = [&](int v, int a, int b) {
              if (st.m.zeta_at(a, v) == st.m.zeta_at(b, v)) return false;
              return classify_gap(p, triple_gap(st.m, st.md, v, a, b)).sg;
            };
            if (!sg_at(v1, l2, l3) || !sg_at(v2, l3, l1)) continue;
            if (st.m.degree(v1) < 3 || st.m.degree(v2) < 3) continue;
            // cut v1 and v2 (v3 keeps its bonds), remove the triangle
            st.do_cut(v1, l2, l3, false, true);
            st.do_cut(v2, l3, l1, false, true);
            // the triangle component: v3 with the halves holding l1..l3
            // classification of v3: beta-atom per the step description
            st.ensure(v3);
            // remove the triangle component if now separated
            auto comp = st.m.component_ids();
            // find atoms in the same component as the triangle bonds
            int tv = st.m.bonds[l3].tail;
            for (int x = 0; x < (int)st.m.atoms.size(); ++x)
              if (st.m.atoms[x].alive && comp[x] == comp[tv]) {
                if (st.m.degree(v3) <= 2 && x == v3) continue;
                st.m.remove_atom(x);
              }
            st.ann.atom_class[v3] = StageTwoAnnotation::Beta;
            again = true;
          }
        }
      }
    }
  }

  // Step 3: remaining SG atoms of degree >= 3
  {
    bool again = true;
    while (again) {
      again = false;
      for (int v = 0; v < (int)st.m.atoms.size(); ++v) {
        if (!st.m.atoms[v].alive || st.m.degree(v) < 3) continue;
        int l1, l2;
        // hinge atoms must use their designated pair
        bool hinge = v < (int)st.ann.hinge.size() && st.ann.hinge[v];
        bool has = false;
        if (hinge) {
          for (size_t i = 0; i < hinge_atoms.size(); ++i)
            if (hinge_atoms[i] == v && hinge_bonds.size() > i && hinge_bonds[i][0] >= 0) {
              l1 = hinge_bonds[i][0];
              l2 = hinge_bonds[i][1];
              has = st.m.bonds[l1].alive && st.m.bonds[l2].alive;
            }
        }
        if (!has) has = sg_triple_at(p, st.m, st.md, v, l1, l2);
        else {
          IVec r = triple_gap(st.m, st.md, v, l1, l2);
          if (!classify_gap(p, r).sg || r.is_zero()) has = false;
        }
        if (!has) continue;
        st.do_cut(v, l1, l2);
        again = true;
        break;
      }
    }
  }

  // Step 4: remaining beta-cuts
  {
    bool again = true;
    while (again) {
      again = false;
      for (int v = 0; v < (int)st.m.atoms.size() && !again; ++v) {
        if (!st.m.atoms[v].alive || st.m.degree(v) < 3) continue;
        auto bs = st.m.bonds_at(v);
        for (size_t i = 0; i < bs.size() && !again; ++i)
          for (size_t j = i + 1; j < bs.size() && !again; ++j) {
            if (st.m.zeta_at(bs[i], v) == st.m.zeta_at(bs[j], v)) continue;
            // does this cut create a component?
            Molecule probe = st.m;
            CutResult cr = cut(probe, v, bs[i], bs[j]);
            if (!cr.beta) continue;
            st.do_cut(v, bs[i], bs[j]);
            again = true;
          }
      }
    }
  }

  // iota / kappa per alpha atom, from earlier cut gaps
  {
    // alpha atoms were appended two per cut; cut index = position/2
    for (size_t ai = 0; ai < st.alpha_atoms.size(); ++ai) {
      int atom = st.alpha_atoms[ai];
      size_t cut_idx = ai / 2;
      const IVec& r = st.cut_gaps[cut_idx].first;
      double rv = std::pow(2.0, st.ann.dyadic[atom]);
      int iota = 0;
      for (size_t cj = 0; cj < cut_idx; ++cj) {
        const IVec& rp = st.cut_gaps[cj].first;
        for (IVec d : {r - rp, r + rp}) {
          double mag = gap_magnitude(st.p, d);
          if (!d.is_zero() && mag <= std::pow(st.p.L, -50.0 * st.p.eta) * rv) iota = 1;
        }
      }
      st.ann.iota[atom] = iota;
      st.ann.kappa[atom] = iota ? 50 : 0;
    }
  }

  StageTwoResult out;
  out.m_fin = st.m;
  out.annotation = st.ann;
  out.trace = st.trace;
  return out;
}

std::vector<std::string> check_final_molecule(const GlobalParams& p, const StageTwoResult& r,
                                              const MoleculeDecoration& md) {
  std::vector<std::string> bad;
  const Molecule& m = r.m_fin;
  auto comp = m.component_ids();
  int ncomp = m.n_components();
  // one odd component with degrees {1,3}; others even
  std::vector<int> odd(ncomp, 0);
  for (int v = 0; v < (int)m.atoms.size(); ++v) {
    if (!m.atoms[v].alive) continue;
    int d = m.degree(v);
    if (d % 2 == 1) odd[comp[v]]++;
  }
  int odd_comps = 0;
  for (int x : odd)
    if (x > 0) ++odd_comps;
  if (odd_comps > 1) bad.push_back("more than one odd component");
  // no triple bonds
  if (find_triple_bond(m)) bad.push_back("triple bond in final molecule");
  // every epsilon atom LG
  for (int v = 0; v < (int)m.atoms.size(); ++v) {
    if (!m.atoms[v].alive || v >= (int)r.annotation.atom_class.size()) continue;
    if (r.annotation.atom_class[v] != StageTwoAnnotation::Eps) continue;
    auto bs = m.bonds_at(v);
    for (size_t i = 0; i < bs.size(); ++i)
      for (size_t j = i + 1; j < bs.size(); ++j) {
        if (m.zeta_at(bs[i], v) == m.zeta_at(bs[j], v)) continue;
        if ((int)md.k.size() <= bs[i] || (int)md.k.size() <= bs[j]) continue;
        IVec g = triple_gap(m, md, v, bs[i], bs[j]);
        if (classify_gap(p, g).sg && !g.is_zero())
          bad.push_back("SG epsilon atom " + std::to_string(v));
      }
  }
  // even components have a beta atom
  std::vector<bool> has_beta(ncomp, false), nonempty(ncomp, false);
  for (int v = 0; v < (int)m.atoms.size(); ++v) {
    if (!m.atoms[v].alive || m.degree(v) == 0) continue;
    nonempty[comp[v]] = true;
    if (v < (int)r.annotation.atom_class.size() &&
        r.annotation.atom_class[v] == StageTwoAnnotation::Beta)
      has_beta[comp[v]] = true;
  }
  for (int cc = 0; cc < ncomp; ++cc)
    if (nonempty[cc] && odd[cc] == 0 && !has_beta[cc])
      bad.push_back("even component without beta atom");
  return bad;
}

}  // namespace wkdiag
