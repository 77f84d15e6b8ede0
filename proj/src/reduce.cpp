#include "wkdiag/reduce.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <stdexcept>

namespace wkdiag {

std::string op_name(OpId id) {
  switch (id) {
    case OpId::TB_1N: return "TB-1N";
    case OpId::TB_2N: return "TB-2N";
    case OpId::BR_N: return "BR-N";
    case OpId::S3_1N: return "3S3-1N";
    case OpId::S3_2G: return "3S3-2G";
    case OpId::S3_3G: return "3S3-3G";
    case OpId::S3_4G: return "3S3-4G";
    case OpId::S3_5G: return "3S3-5G";
    case OpId::D3_1N: return "3D3-1N";
    case OpId::D3_2G: return "3D3-2G";
    case OpId::D3_3G: return "3D3-3G";
    case OpId::D3_4G: return "3D3-4G";
    case OpId::D3_5G: return "3D3-5G";
    case OpId::D3_6G: return "3D3-6G";
    case OpId::D4_G: return "3D4-G";
    case OpId::S2_G: return "3S2-G";
    case OpId::R3_1N: return "3R-1N";
    case OpId::R3_2G: return "3R-2G";
    case OpId::R2_1F: return "2R-1F";
    case OpId::R2_2F: return "2R-2F";
    case OpId::R2_3F: return "2R-3F";
    case OpId::R2_4F: return "2R-4F";
    case OpId::CUT_ALPHA: return "CUT-a";
    case OpId::CUT_BETA: return "CUT-b";
    case OpId::Y1: return "Y1";
    case OpId::Y2: return "Y2";
    case OpId::SPLICE: return "SPLICE";
    case OpId::MERGE: return "MERGE";
  }
  return "?";
}

OpKind op_kind(OpId id) {
  switch (id) {
    case OpId::TB_1N:
    case OpId::TB_2N:
    case OpId::BR_N:
    case OpId::S3_1N:
    case OpId::D3_1N:
    case OpId::R3_1N: return OpKind::Normal;
    case OpId::R2_1F:
    case OpId::R2_2F:
    case OpId::R2_3F:
    case OpId::R2_4F: return OpKind::Fine;
    case OpId::S3_2G:
    case OpId::S3_3G:
    case OpId::S3_4G:
    case OpId::S3_5G:
    case OpId::D3_2G:
    case OpId::D3_3G:
    case OpId::D3_4G:
    case OpId::D3_5G:
    case OpId::D3_6G:
    case OpId::D4_G:
    case OpId::S2_G:
    case OpId::R3_2G: return OpKind::Good;
    default: return OpKind::Structural;
  }
}

AssumptionOracle fixed_branch_oracle(bool normal) {
  AssumptionOracle o;
  o.normal_branch = [normal](const Molecule&, const std::vector<int>&, const std::string&) {
    return normal;
  };
  return o;
}

namespace {

int v3_count(const Molecule& m) { return m.v_degree_count(3); }

struct Snapshot {
  int chi, nu, v3, f;
};
Snapshot snap(const Molecule& m) {
  return {m.euler_chi(), m.nu(), v3_count(m), m.n_components()};
}

void finish_record(OperationRecord& r, const Snapshot& a, const Snapshot& b) {
  r.d_chi = b.chi - a.chi;
  r.d_nu = b.nu - a.nu;
  r.d_v3 = b.v3 - a.v3;
  r.d_f = b.f - a.f;
}

bool is_bridge(const Molecule& m, int bond) {
  const auto& b = m.bonds[bond];
  if (m.bonds_between(b.tail, b.head) != 1) return false;
  // BFS from tail avoiding this bond
  std::set<int> seen{b.tail};
  std::vector<int> stack{b.tail};
  while (!stack.empty()) {
    int v = stack.back();
    stack.pop_back();
    for (int bb : m.bonds_at(v)) {
      if (bb == bond) continue;
      int w = m.other_end(bb, v);
      if (seen.insert(w).second) stack.push_back(w);
    }
  }
  return !seen.count(b.head);
}

std::optional<int> find_bridge(const Molecule& m) {
  for (int b = 0; b < (int)m.bonds.size(); ++b)
    if (m.bonds[b].alive && is_bridge(m, b)) return b;
  return std::nullopt;
}

std::vector<int> component_of(const Molecule& m, int v) {
  std::set<int> seen{v};
  std::vector<int> stack{v}, out{v};
  while (!stack.empty()) {
    int x = stack.back();
    stack.pop_back();
    for (int b : m.bonds_at(x)) {
      int w = m.other_end(b, x);
      if (seen.insert(w).second) {
        stack.push_back(w);
        out.push_back(w);
      }
    }
  }
  return out;
}

}  // namespace

std::optional<std::pair<int, int>> find_triple_bond(const Molecule& m) {
  for (int v = 0; v < (int)m.atoms.size(); ++v) {
    if (!m.atoms[v].alive) continue;
    for (int w = v + 1; w < (int)m.atoms.size(); ++w)
      if (m.atoms[w].alive && m.bonds_between(v, w) == 3) return std::pair(v, w);
  }
  return std::nullopt;
}

Molecule y_sequence(const Molecule& m0, std::pair<int, int> triple,
                    std::vector<OperationRecord>* records) {
  Molecule m = m0;
  auto [v1, v2] = triple;
  for (;;) {
    if (m.bonds_between(v1, v2) != 3) break;
    // extra bonds at the pair
    std::vector<int> extra;
    for (int v : {v1, v2})
      for (int b : m.bonds_at(v))
        if (m.other_end(b, v) != v1 && m.other_end(b, v) != v2) extra.push_back(b);
    Snapshot before = snap(m);
    OperationRecord rec;
    if (extra.size() <= 1) {
      rec.op = OpId::Y1;
      rec.removed_atoms = {v1, v2};
      m.remove_atom(v1);
      m.remove_atom(v2);
      finish_record(rec, before, snap(m));
      rec.kind = OpKind::Structural;
      if (records) records->push_back(rec);
      break;
    }
    if (extra.size() != 2) throw std::logic_error("y_sequence: malformed triple-bond pair");
    int b1 = extra[0], b2 = extra[1];
    int u1 = m.bonds[b1].tail == v1 || m.bonds[b1].head == v1 ? v1 : v2;
    int u2 = u1 == v1 ? v2 : v1;
    if ((m.bonds[b2].tail == u1 || m.bonds[b2].head == u1) &&
        !(m.bonds[b2].tail == u2 || m.bonds[b2].head == u2)) {
      // both extras on the same atom: not a (Y) shape; stop
      break;
    }
    int v3 = m.other_end(b1, u1), v4 = m.other_end(b2, u2);
    if (v3 == v4) {
      rec.op = OpId::Y1;  // two extra singles to the same third atom
      rec.removed_atoms = {v1, v2};
      m.remove_atom(v1);
      m.remove_atom(v2);
      finish_record(rec, before, snap(m));
      rec.kind = OpKind::Structural;
      if (records) records->push_back(rec);
      break;
    }
    rec.op = OpId::Y2;
    rec.removed_atoms = {v1, v2};
    // new bond matches the removed singles' directions at the far ends
    bool out_of_v3 = m.bonds[b1].tail == v3;
    m.remove_atom(v1);
    m.remove_atom(v2);
    int nb = out_of_v3 ? m.add_bond(v3, v4) : m.add_bond(v4, v3);
    rec.added_bonds = {nb};
    finish_record(rec, before, snap(m));
    rec.kind = OpKind::Structural;
    if (records) records->push_back(rec);
    v1 = v3;
    v2 = v4;
  }
  return m;
}

Molecule y_reduce_all(const Molecule& m0, std::vector<OperationRecord>* records) {
  Molecule m = m0;
  for (;;) {
    auto t = find_triple_bond(m);
    if (!t) break;
    Molecule next = y_sequence(m, *t, records);
    if (next.n_bonds() == m.n_bonds() && next.n_atoms() == m.n_atoms()) break;  // stuck
    m = next;
  }
  return m;
}

bool is_quadruple_bond(const Molecule& m) {
  std::vector<int> alive;
  for (int v = 0; v < (int)m.atoms.size(); ++v)
    if (m.atoms[v].alive && m.degree(v) > 0) alive.push_back(v);
  return alive.size() == 2 && m.bonds_between(alive[0], alive[1]) == 4;
}

bool is_triangle_of_doubles(const Molecule& m) {
  std::vector<int> alive;
  for (int v = 0; v < (int)m.atoms.size(); ++v)
    if (m.atoms[v].alive && m.degree(v) > 0) alive.push_back(v);
  if (alive.size() != 3) return false;
  return m.bonds_between(alive[0], alive[1]) == 2 && m.bonds_between(alive[1], alive[2]) == 2 &&
         m.bonds_between(alive[0], alive[2]) == 2;
}

// ----- the appendix loop -----

namespace {

struct S3Group {
  int v1, v2, l1;
  int l2, l3, l4, l5;     // l2,l3 at v1; l4,l5 at v2
  int v3, v4, v5, v6;     // ends of l2..l5
  bool standard = false;  // four distinct single-bond companions
  bool split_ok = false;  // (i): v3~v5 and v4~v6 in different new components
  bool dirs_ok = false;   // (ii)
};

// try to put the group into (i)+(ii) form by relabeling
S3Group analyze_s3(const Molecule& m, int v1, int v2, int l1) {
  S3Group g{v1, v2, l1, -1, -1, -1, -1, -1, -1, -1, -1};
  std::vector<int> a, b;
  for (int bb : m.bonds_at(v1))
    if (bb != l1) a.push_back(bb);
  for (int bb : m.bonds_at(v2))
    if (bb != l1) b.push_back(bb);
  std::set<int> ends;
  for (int bb : a) ends.insert(m.other_end(bb, v1));
  for (int bb : b) ends.insert(m.other_end(bb, v2));
  ends.erase(v1);
  ends.erase(v2);
  if (a.size() != 2 || b.size() != 2 || ends.size() != 4) return g;  // 3s3new shape
  for (int bb : a)
    if (m.other_end(bb, v1) == v1 || m.other_end(bb, v1) == v2) return g;
  for (int bb : b)
    if (m.other_end(bb, v2) == v1 || m.other_end(bb, v2) == v2) return g;
  g.standard = true;
  // components after removing v1, v2
  Molecule probe = m;
  probe.remove_atom(v1);
  probe.remove_atom(v2);
  auto comp = probe.component_ids();
  for (int s1 = 0; s1 < 2 && !(g.split_ok && g.dirs_ok); ++s1)
    for (int s2 = 0; s2 < 2 && !(g.split_ok && g.dirs_ok); ++s2) {
      int l2 = a[s1], l3 = a[1 - s1], l4 = b[s2], l5 = b[1 - s2];
      int v3 = m.other_end(l2, v1), v4 = m.other_end(l3, v1);
      int v5 = m.other_end(l4, v2), v6 = m.other_end(l5, v2);
      bool split = comp[v3] == comp[v5] && comp[v4] == comp[v6] && comp[v3] != comp[v4];
      bool dirs = m.zeta_at(l2, v1) == -m.zeta_at(l4, v2) &&
                  m.zeta_at(l3, v1) == -m.zeta_at(l5, v2);
      if (split && dirs) {
        g.l2 = l2;
        g.l3 = l3;
        g.l4 = l4;
        g.l5 = l5;
        g.v3 = v3;
        g.v4 = v4;
        g.v5 = v5;
        g.v6 = v6;
        g.split_ok = g.dirs_ok = true;
      }
    }
  return g;
}

}  // namespace

ReductionTrace appendix_b_reduce(const Molecule& m0, const AssumptionOracle& oracle) {
  ReductionTrace trace;
  trace.initial = m0;
  Molecule m = m0;
  std::optional<std::vector<int>> scope;  // (3-c-iii) one-shot component scope

  auto in_scope = [&](int v) {
    if (!scope) return true;
    return std::find(scope->begin(), scope->end(), v) != scope->end();
  };

  auto push = [&](OperationRecord rec) { trace.records.push_back(std::move(rec)); };

  auto remove_atoms = [&](OpId op, std::vector<int> atoms, const std::string& assumption = "") {
    Snapshot before = snap(m);
    OperationRecord rec;
    rec.op = op;
    rec.kind = op_kind(op);
    rec.removed_atoms = atoms;
    rec.assumption = assumption;
    for (int v : atoms) m.remove_atom(v);
    finish_record(rec, before, snap(m));
    push(rec);
  };

  auto imm_tb = [&](int a, int b) {
    // remove a triple bond formed right after (3S3-3G)/(3D3-3G)
    if (m.bonds_between(a, b) != 3) return;
    bool both3 = m.degree(a) == 3 && m.degree(b) == 3;
    remove_atoms(both3 ? OpId::TB_1N : OpId::TB_2N, {a, b});
  };

  int guard = 0;
  for (;;) {
    if (++guard > 10000) throw std::logic_error("appendix_b_reduce: no progress");
    if (m.n_bonds() == 0) break;

    std::optional<std::vector<int>> cur_scope;
    std::swap(cur_scope, scope);  // one-shot
    auto scoped = [&](int v) {
      if (!cur_scope) return true;
      return std::find(cur_scope->begin(), cur_scope->end(), v) != cur_scope->end();
    };

    // top priority: triple bonds with degrees not both 4 (TB-1N / TB-2N)
    {
      bool done = false;
      for (int v = 0; v < (int)m.atoms.size() && !done; ++v) {
        if (!m.atoms[v].alive || !scoped(v)) continue;
        for (int w = v + 1; w < (int)m.atoms.size() && !done; ++w) {
          if (!m.atoms[w].alive || m.bonds_between(v, w) != 3) continue;
          int dv = m.degree(v), dw = m.degree(w);
          if (dv == 4 && dw == 4) continue;
          remove_atoms(dv == 3 && dw == 3 ? OpId::TB_1N : OpId::TB_2N, {v, w});
          done = true;
        }
      }
      if (done) continue;
    }

    // (1) bridge
    if (auto br = find_bridge(m)) {
      Snapshot before = snap(m);
      OperationRecord rec;
      rec.op = OpId::BR_N;
      rec.kind = OpKind::Normal;
      rec.removed_bonds = {*br};
      int t = m.bonds[*br].tail, h = m.bonds[*br].head;
      bool both3 = m.degree(t) == 3 && m.degree(h) == 3;
      m.remove_bond(*br);
      finish_record(rec, before, snap(m));
      rec.assumption = both3 ? "deg3-deg3" : "";
      push(rec);
      continue;
    }

    // (2) two degree-3 atoms joined by a single bond
    {
      std::vector<std::tuple<int, int, int>> cands;  // (v1, v2, l1)
      for (int v = 0; v < (int)m.atoms.size(); ++v) {
        if (!m.atoms[v].alive || m.degree(v) != 3 || !scoped(v)) continue;
        for (int w = v + 1; w < (int)m.atoms.size(); ++w) {
          if (!m.atoms[w].alive || m.degree(w) != 3) continue;
          if (m.bonds_between(v, w) != 1) continue;
          for (int b : m.bonds_at(v))
            if (m.other_end(b, v) == w) cands.push_back({v, w, b});
        }
      }
      if (!cands.empty()) {
        // prefer a 3s3new-shaped pair (3S3-5G)
        std::optional<S3Group> pick;
        bool did_5g = false;
        for (auto& [v1, v2, l1] : cands) {
          S3Group g = analyze_s3(m, v1, v2, l1);
          if (!g.standard) {
            remove_atoms(OpId::S3_5G, {v1, v2});
            did_5g = true;
            break;
          }
          if (!pick) pick = g;
        }
        if (!did_5g) {
          S3Group g = *pick;
          if (!(g.split_ok && g.dirs_ok)) {
            remove_atoms(OpId::S3_4G, {g.v1, g.v2});
          } else {
            bool all4 = m.degree(g.v3) == 4 && m.degree(g.v4) == 4 && m.degree(g.v5) == 4 &&
                        m.degree(g.v6) == 4;
            bool normal = oracle.normal_branch(m, {g.l2, g.l4, g.l3, g.l5, g.l1}, "3S3");
            if (all4) {
              remove_atoms(normal ? OpId::S3_1N : OpId::S3_2G, {g.v1, g.v2},
                           normal ? "gaps-small" : "gaps-large");
            } else {
              // relabel so that (v3, v5) has a non-degree-4 member
              if (m.degree(g.v3) == 4 && m.degree(g.v5) == 4) {
                std::swap(g.v3, g.v4);
                std::swap(g.v5, g.v6);
                std::swap(g.l2, g.l3);
                std::swap(g.l4, g.l5);
              }
              if (normal) {
                Snapshot before = snap(m);
                OperationRecord rec;
                rec.op = OpId::S3_3G;
                rec.kind = OpKind::Good;
                rec.removed_atoms = {g.v1, g.v2};
                rec.assumption = "gaps-small";
                bool out_of_v3 = m.zeta_at(g.l2, g.v3) > 0;
                m.remove_atom(g.v1);
                m.remove_atom(g.v2);
                int nb = out_of_v3 ? m.add_bond(g.v3, g.v5) : m.add_bond(g.v5, g.v3);
                rec.added_bonds = {nb};
                finish_record(rec, before, snap(m));
                push(rec);
                imm_tb(g.v3, g.v5);
              } else {
                remove_atoms(OpId::S3_2G, {g.v1, g.v2}, "gaps-large");
              }
            }
          }
        }
        continue;
      }
    }

    // (3) two degree-3 atoms joined by a double bond
    {
      std::optional<std::pair<int, int>> pick;
      bool done = false;
      for (int v = 0; v < (int)m.atoms.size() && !done; ++v) {
        if (!m.atoms[v].alive || m.degree(v) != 3 || !scoped(v)) continue;
        for (int w = 0; w < (int)m.atoms.size() && !done; ++w) {
          if (w == v || !m.atoms[w].alive || m.degree(w) != 3) continue;
          if (m.bonds_between(v, w) != 2) continue;
          auto single_at = [&](int x) {
            for (int b : m.bonds_at(x))
              if (m.other_end(b, x) != (x == v ? w : v)) return b;
            return -1;
          };
          int l3 = single_at(v), l4 = single_at(w);
          int v3 = m.other_end(l3, v), v4 = m.other_end(l4, w);
          if (v3 == v4) {
            remove_atoms(OpId::D3_5G, {v, w});
            done = true;
            break;
          }
          if (m.zeta_at(l3, v) == m.zeta_at(l4, w)) {
            remove_atoms(OpId::D3_4G, {v, w});
            done = true;
            break;
          }
          if (!pick) pick = std::pair(v, w);
        }
      }
      if (done) continue;
      if (pick) {
        int v1 = pick->first, v2 = pick->second;
        // (3-b) follow the ladder
        for (;;) {
          auto single_at = [&](int x, int other) {
            for (int b : m.bonds_at(x))
              if (m.other_end(b, x) != other) return b;
            return -1;
          };
          int l3 = single_at(v1, v2), l4 = single_at(v2, v1);
          int v3 = m.other_end(l3, v1), v4 = m.other_end(l4, v2);
          bool ladder = v3 != v4 && m.bonds_between(v3, v4) == 2;
          if (ladder) {
            int l5 = -1, l6 = -1;
            for (int b : m.bonds_at(v3))
              if (m.other_end(b, v3) != v4 && m.other_end(b, v3) != v1) l5 = b;
            for (int b : m.bonds_at(v4))
              if (m.other_end(b, v4) != v3 && m.other_end(b, v4) != v2) l6 = b;
            if (l5 < 0 || l6 < 0) ladder = false;
            else {
              int v5 = m.other_end(l5, v3), v6 = m.other_end(l6, v4);
              ladder = v5 != v6 && m.zeta_at(l5, v3) == -m.zeta_at(l6, v4);
            }
          }
          if (!ladder) {
            // (3-c) with current (v1, v2, v3, v4)
            bool fig_new = v3 != v4 && m.bonds_between(v3, v4) == 1;
            if (fig_new) {
              // each of v3, v4 double-bonded to different fifth/sixth atoms
              auto dbl_other = [&](int x) {
                for (int b : m.bonds_at(x)) {
                  int u = m.other_end(b, x);
                  if (u != v1 && u != v2 && u != v3 && u != v4 && m.bonds_between(x, u) == 2)
                    return u;
                }
                return -1;
              };
              int v5 = dbl_other(v3), v6 = dbl_other(v4);
              if (v5 >= 0 && v6 >= 0 && v5 != v6) {
                remove_atoms(OpId::D3_6G, {v1, v2, v3, v4});
                break;
              }
            }
            // (3D3-5G) shape after removing (v1, v2)?
            if (v3 != v4 && m.bonds_between(v3, v4) == 2) {
              Molecule probe = m;
              probe.remove_atom(v1);
              probe.remove_atom(v2);
              int t3 = -1;
              for (int b : probe.bonds_at(v3))
                if (probe.other_end(b, v3) != v4) t3 = probe.other_end(b, v3);
              int t4 = -1;
              for (int b : probe.bonds_at(v4))
                if (probe.other_end(b, v4) != v3) t4 = probe.other_end(b, v4);
              if (probe.degree(v3) == 3 && probe.degree(v4) == 3 && t3 >= 0 && t3 == t4) {
                remove_atoms(OpId::D3_1N, {v1, v2}, "ladder-end");
                remove_atoms(OpId::D3_5G, {v3, v4});
                break;
              }
            }
            // not all other atoms in this component degree 4?
            bool all4 = true;
            for (int a : component_of(m, v1))
              if (a != v1 && a != v2 && m.degree(a) != 4) all4 = false;
            if (!all4) {
              bool normal = oracle.normal_branch(m, {l3, l4}, "3D3");
              if (normal) {
                Snapshot before = snap(m);
                OperationRecord rec;
                rec.op = OpId::D3_3G;
                rec.kind = OpKind::Good;
                rec.removed_atoms = {v1, v2};
                rec.assumption = "gaps-small";
                bool out_of_v3 = m.zeta_at(l3, v3) > 0;
                m.remove_atom(v1);
                m.remove_atom(v2);
                int nb = out_of_v3 ? m.add_bond(v3, v4) : m.add_bond(v4, v3);
                rec.added_bonds = {nb};
                finish_record(rec, before, snap(m));
                push(rec);
                imm_tb(v3, v4);
              } else {
                remove_atoms(OpId::D3_2G, {v1, v2}, "gaps-large");
              }
            } else {
              auto comp = component_of(m, v1);
              remove_atoms(OpId::D3_1N, {v1, v2}, "component-final");
              std::erase_if(comp, [&](int a) { return a == v1 || a == v2; });
              scope = comp;
            }
            break;
          }
          // ladder continues: (3D3-1N) or (3D3-2G)
          bool normal = oracle.normal_branch(m, {l3, l4}, "3D3");
          remove_atoms(normal ? OpId::D3_1N : OpId::D3_2G, {v1, v2},
                       normal ? "gaps-small" : "gaps-large");
          v1 = v3;
          v2 = v4;
        }
        continue;
      }
    }

    // (4) degree-3 / degree-4 double bond
    {
      bool done = false;
      for (int v = 0; v < (int)m.atoms.size() && !done; ++v) {
        if (!m.atoms[v].alive || m.degree(v) != 3 || !scoped(v)) continue;
        for (int w = 0; w < (int)m.atoms.size() && !done; ++w) {
          if (w == v || !m.atoms[w].alive || m.degree(w) != 4) continue;
          if (m.bonds_between(v, w) != 2) continue;
          remove_atoms(OpId::D4_G, {v, w});
          done = true;
        }
      }
      if (done) continue;
    }

    // (5) degree-3 atom connected to a degree-2 atom
    {
      bool done = false;
      for (int v = 0; v < (int)m.atoms.size() && !done; ++v) {
        if (!m.atoms[v].alive || m.degree(v) != 3 || !scoped(v)) continue;
        for (int b : m.bonds_at(v)) {
          int w = m.other_end(b, v);
          if (m.degree(w) == 2) {
            remove_atoms(OpId::S2_G, {v, w});
            done = true;
            break;
          }
        }
      }
      if (done) continue;
    }

    // (6) degree-3 atom with three degree-4 single neighbours
    {
      int v = -1;
      for (int x = 0; x < (int)m.atoms.size(); ++x)
        if (m.atoms[x].alive && m.degree(x) == 3 && scoped(x)) {
          v = x;
          break;
        }
      if (v >= 0) {
        // special bond in the component after removing v?
        Molecule probe = m;
        auto comp = component_of(m, v);
        probe.remove_atom(v);
        int sv1 = -1, sv2 = -1;
        for (int a : comp) {
          if (a == v || probe.degree(a) != 3) continue;
          for (int b : probe.bonds_at(a)) {
            int c = probe.other_end(b, a);
            if (c == a || probe.degree(c) != 3 || probe.bonds_between(a, c) != 1) continue;
            auto dbl = [&](int x) {
              for (int bb : probe.bonds_at(x)) {
                int u = probe.other_end(bb, x);
                if (u != a && u != c && probe.bonds_between(x, u) == 2) return u;
              }
              return -1;
            };
            int d1 = dbl(a), d2 = dbl(c);
            if (d1 >= 0 && d2 >= 0 && d1 != d2) {
              sv1 = a;
              sv2 = c;
            }
          }
        }
        if (sv1 >= 0) remove_atoms(OpId::R3_2G, {v, sv1, sv2});
        else remove_atoms(OpId::R3_1N, {v});
        continue;
      }
    }

    // (7) only degree 0/2/4 atoms remain: handle a degree-2 atom
    {
      int v = -1;
      for (int x = 0; x < (int)m.atoms.size(); ++x)
        if (m.atoms[x].alive && m.degree(x) == 2) {
          v = x;
          break;
        }
      if (v < 0) throw std::logic_error("appendix_b_reduce: no degree-2 atom in step (7)");
      auto bs = m.bonds_at(v);
      int w1 = m.other_end(bs[0], v), w2 = m.other_end(bs[1], v);
      if (w1 == w2) {
        if (m.degree(w1) == 4) remove_atoms(OpId::R2_1F, {v});
        else remove_atoms(OpId::R2_4F, {v, w1});
      } else if (m.degree(w1) == 2 && m.degree(w2) == 2) {
        remove_atoms(OpId::R2_3F, {v, w1, w2});
      } else {
        remove_atoms(OpId::R2_2F, {v});
      }
      continue;
    }
  }

  trace.final_mol = m;
  for (auto& r : trace.records) {
    if (r.kind == OpKind::Fine) ++trace.r1;
    if (r.kind == OpKind::Good) ++trace.r2;
    switch (r.op) {
      case OpId::BR_N: (r.assumption == "deg3-deg3" ? trace.z1 : trace.z1p)++; break;
      case OpId::S3_1N: ++trace.z2; break;
      case OpId::R3_1N: ++trace.z3; break;
      case OpId::R2_2F: ++trace.z4; break;
      case OpId::R2_3F: ++trace.z5; break;
      case OpId::R2_4F: ++trace.z6; break;
      case OpId::R2_1F: ++trace.z7; break;
      default: break;
    }
  }
  return trace;
}

std::vector<LedgerIssue> ledger_check(const ReductionTrace& t) {
  std::vector<LedgerIssue> issues;
  Molecule m = t.initial;
  auto complain = [&](int i, const std::string& s) { issues.push_back({i, s}); };
  for (int i = 0; i < (int)t.records.size(); ++i) {
    const auto& r = t.records[i];
    Snapshot before = snap(m);
    for (int b : r.removed_bonds) {
      if (!m.bonds[b].alive) complain(i, "removed bond not alive");
      m.remove_bond(b);
    }
    for (int v : r.removed_atoms) {
      if (!m.atoms[v].alive) complain(i, "removed atom not alive");
      m.remove_atom(v);
    }
    for (int b : r.added_bonds) {
      if (b != (int)m.bonds.size()) complain(i, "added bond id out of replay order");
      // bond ids are append-only and stable, so the final molecule still
      // records the endpoints even if the bond died later
      m.bonds.push_back(t.final_mol.bonds[b]);
      m.bonds.back().alive = true;
    }
    Snapshot after = snap(m);
    int d_chi = after.chi - before.chi, d_nu = after.nu - before.nu;
    int d_v3 = after.v3 - before.v3, d_f = after.f - before.f;
    if (d_chi != r.d_chi || d_nu != r.d_nu || d_v3 != r.d_v3 || d_f != r.d_f)
      complain(i, "replayed deltas differ from ledger for " + op_name(r.op));
    // stated proposition values
    switch (r.op) {
      case OpId::S3_1N:
        if (d_nu != -2 || d_v3 != 2) complain(i, "3S3-1N stated deltas violated");
        break;
      case OpId::D3_1N:
        if (d_nu != 0 || d_v3 != 0) complain(i, "3D3-1N stated deltas violated");
        break;
      case OpId::R2_1F:
      case OpId::R2_4F:
        if (d_nu != 0 || d_v3 != 0) complain(i, op_name(r.op) + " stated deltas violated");
        break;
      case OpId::R2_2F:
        if (d_nu != 0 || d_v3 < 1) complain(i, "2R-2F stated deltas violated");
        break;
      case OpId::R2_3F:
        if (d_nu > -2 || d_v3 < 0) complain(i, "2R-3F stated deltas violated");
        break;
      case OpId::BR_N:
        // the definition nu = 4V-2E-4F forces -2 (stated +2 is a typo)
        if (d_nu != -2) complain(i, "BR-N recomputed d_nu != -2");
        break;
      default: break;
    }
  }
  return issues;
}

}  // namespace wkdiag
