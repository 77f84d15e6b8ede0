#include "wkdiag/molecule.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <set>
#include <sstream>
#include <stdexcept>

namespace wkdiag {

int Molecule::n_atoms() const {
  int n = 0;
  for (auto& a : atoms) n += a.alive;
  return n;
}
int Molecule::n_bonds() const {
  int n = 0;
  for (auto& b : bonds) n += b.alive;
  return n;
}
std::vector<int> Molecule::bonds_at(int v) const {
  std::vector<int> out;
  for (int i = 0; i < (int)bonds.size(); ++i)
    if (bonds[i].alive && (bonds[i].tail == v || bonds[i].head == v)) out.push_back(i);
  return out;
}
int Molecule::degree(int v) const { return (int)bonds_at(v).size(); }
int Molecule::in_degree(int v) const {
  int n = 0;
  for (auto& b : bonds) n += b.alive && b.head == v;
  return n;
}
int Molecule::out_degree(int v) const {
  int n = 0;
  for (auto& b : bonds) n += b.alive && b.tail == v;
  return n;
}
int Molecule::bonds_between(int v, int w) const {
  int n = 0;
  for (auto& b : bonds)
    n += b.alive && ((b.tail == v && b.head == w) || (b.tail == w && b.head == v));
  return n;
}

std::vector<int> Molecule::component_ids() const {
  std::vector<int> comp(atoms.size(), -1);
  int cid = 0;
  for (int s = 0; s < (int)atoms.size(); ++s) {
    if (!atoms[s].alive || comp[s] >= 0) continue;
    std::vector<int> stack{s};
    comp[s] = cid;
    while (!stack.empty()) {
      int v = stack.back();
      stack.pop_back();
      for (int b : bonds_at(v)) {
        int w = other_end(b, v);
        if (comp[w] < 0) {
          comp[w] = cid;
          stack.push_back(w);
        }
      }
    }
    ++cid;
  }
  return comp;
}
int Molecule::n_components() const {
  auto c = component_ids();
  int m = 0;
  for (int x : c) m = std::max(m, x + 1);
  return m;
}
int Molecule::v_degree_count(int deg) const {
  int n = 0;
  for (int v = 0; v < (int)atoms.size(); ++v)
    if (atoms[v].alive && degree(v) == deg) ++n;
  return n;
}
void Molecule::remove_atom(int v) {
  for (int b : bonds_at(v)) bonds[b].alive = false;
  atoms[v].alive = false;
}
bool Molecule::has_self_loop() const {
  for (auto& b : bonds)
    if (b.alive && b.tail == b.head) return true;
  return false;
}

std::string Molecule::dot(const std::unordered_map<int, std::string>* notes) const {
  std::ostringstream os;
  os << "digraph molecule {\n";
  for (int v = 0; v < (int)atoms.size(); ++v) {
    if (!atoms[v].alive) continue;
    os << "  a" << v << " [label=\"" << v << "\"";
    if (degree(v) == 3) os << " shape=doublecircle";
    if (notes && notes->count(v)) os << " xlabel=\"" << notes->at(v) << "\"";
    os << "];\n";
  }
  for (auto& b : bonds) {
    if (!b.alive) continue;
    os << "  a" << b.tail << " -> a" << b.head << " [label=\"" << (b.lp ? "LP" : "PC")
       << "\"];\n";
  }
  os << "}\n";
  return os.str();
}

namespace {

// Compact alive subgraph: returns (atom count, directed edges by compact id,
// compact colors).
struct Compact {
  int n = 0;
  std::vector<std::pair<int, int>> edges;
  std::vector<uint64_t> col0;
};

Compact compact(const Molecule& m, const std::vector<uint64_t>* colors) {
  Compact c;
  std::vector<int> id(m.atoms.size(), -1);
  for (int v = 0; v < (int)m.atoms.size(); ++v)
    if (m.atoms[v].alive) {
      id[v] = c.n++;
      c.col0.push_back(colors ? (*colors)[v] : 1);
    }
  for (auto& b : m.bonds)
    if (b.alive) c.edges.push_back({id[b.tail], id[b.head]});
  return c;
}

std::string form_for_perm(const Compact& c, const std::vector<int>& perm, bool directed) {
  std::vector<std::pair<int, int>> e;
  e.reserve(c.edges.size());
  for (auto& [a, b] : c.edges) {
    int x = perm[a], y = perm[b];
    if (!directed && x > y) std::swap(x, y);
    e.push_back({x, y});
  }
  std::sort(e.begin(), e.end());
  std::ostringstream os;
  os << c.n << '#';
  for (int v = 0; v < c.n; ++v)
    for (int w = 0; w < c.n; ++w)
      if (perm[w] == v) {
        os << c.col0[w] << ',';
        break;
      }
  os << '#';
  for (auto& [a, b] : e) os << a << '>' << b << ';';
  return os.str();
}

// Iterative refinement colors; refined with individualized tags during the
// search so symmetric ties break after one placement.
std::vector<uint64_t> refine_colors(const Compact& c, std::vector<uint64_t> col, bool directed) {
  for (int it = 0; it < c.n + 2; ++it) {
    std::vector<uint64_t> nxt(c.n, 1469598103934665603ull);
    for (int v = 0; v < c.n; ++v) nxt[v] ^= col[v] * 1099511628211ull;
    for (auto& [a, b] : c.edges) {
      uint64_t fa = directed ? 31 : 41, fb = directed ? 37 : 41;
      nxt[a] += (col[b] * fa + 7) * 1000003ull;
      nxt[b] += (col[a] * fb + 7) * (directed ? 998244353ull : 1000003ull);
    }
    col = nxt;
  }
  return col;
}

void canon_search(const Compact& c, std::vector<uint64_t> col, std::vector<int>& perm,
                  int pos, std::string& best, bool directed) {
  col = refine_colors(c, col, directed);
  // place all vertices whose refined color is unique among unplaced ones
  for (;;) {
    if (pos == c.n) {
      std::string f = form_for_perm(c, perm, directed);
      if (best.empty() || f < best) best = f;
      return;
    }
    // minimal color among unplaced
    uint64_t mc = 0;
    bool have = false;
    for (int v = 0; v < c.n; ++v)
      if (perm[v] < 0 && (!have || col[v] < mc)) {
        mc = col[v];
        have = true;
      }
    std::vector<int> cell;
    for (int v = 0; v < c.n; ++v)
      if (perm[v] < 0 && col[v] == mc) cell.push_back(v);
    if (cell.size() == 1) {
      int v = cell[0];
      perm[v] = pos++;
      col[v] = 0x517cc1b727220a95ull + pos;  // individualize
      col = refine_colors(c, col, directed);
      continue;
    }
    for (int v : cell) {
      auto col2 = col;
      auto perm2 = perm;
      perm2[v] = pos;
      col2[v] = 0x517cc1b727220a95ull + pos + 1;
      canon_search(c, col2, perm2, pos + 1, best, directed);
    }
    return;
  }
}

std::string canonical_impl(const Molecule& m, const std::vector<uint64_t>* colors, bool directed) {
  Compact c = compact(m, colors);
  if (c.n == 0) return "0#";
  std::vector<int> perm(c.n, -1);
  std::string best;
  canon_search(c, c.col0, perm, 0, best, directed);
  return best;
}

}  // namespace

std::string Molecule::canonical_form() const { return canonical_impl(*this, nullptr, true); }

std::string canonical_form_colored(const Molecule& m, const std::vector<uint64_t>& colors,
                                   bool directed) {
  return canonical_impl(m, &colors, directed);
}

bool isomorphic_directed(const Molecule& a, const Molecule& b) {
  return a.canonical_form() == b.canonical_form();
}

std::unordered_map<int64_t, int> molecule_atom_index(const Couple& c) {
  std::unordered_map<int64_t, int> idx;
  int n = 0;
  for (int ti = 0; ti < 2; ++ti)
    for (int v = 0; v < (int)c.tree(ti).nodes.size(); ++v)
      if (!c.tree(ti).nodes[v].is_leaf()) idx[noderef_key({ti, v})] = n++;
  return idx;
}

Molecule build_molecule(const Couple& c) {
  if (c.trivial()) throw std::invalid_argument("build_molecule: trivial couple");
  if (c.is_degenerate()) {
    for (auto& [a, b] : c.pairs)
      if (a.tree == b.tree &&
          c.tree(a.tree).nodes[a.node].parent == c.tree(b.tree).nodes[b.node].parent)
        throw std::invalid_argument(
            "build_molecule: degenerate couple (sibling pair at nodes " +
            std::to_string(a.node) + "," + std::to_string(b.node) + ")");
    throw std::invalid_argument("build_molecule: degenerate couple (paired sibling subtrees)");
  }
  auto idx = molecule_atom_index(c);
  Molecule m;
  m.atoms.resize(idx.size());
  for (int ti = 0; ti < 2; ++ti)
    for (int v = 0; v < (int)c.tree(ti).nodes.size(); ++v)
      if (!c.tree(ti).nodes[v].is_leaf()) m.atoms[idx[noderef_key({ti, v})]].origin = {ti, v};

  // PC bonds: child branching node n with branching parent p. Direction:
  // P -> C if the C atom (node n) has - sign, C -> P if + sign.
  for (int ti = 0; ti < 2; ++ti) {
    const Tree& t = c.tree(ti);
    for (int v = 0; v < (int)t.nodes.size(); ++v) {
      if (t.nodes[v].is_leaf() || t.nodes[v].parent < 0) continue;
      int p = t.nodes[v].parent;
      int pa = idx[noderef_key({ti, p})], ca = idx[noderef_key({ti, v})];
      Molecule::Bond b;
      b.lp = false;
      b.parent_end = pa;
      b.origin = {ti, v};
      if (t.nodes[v].sign < 0) {
        b.tail = pa;
        b.head = ca;
      } else {
        b.tail = ca;
        b.head = pa;
      }
      m.bonds.push_back(b);
    }
  }
  // LP bonds: pair (x,y) of leaves with branching parents. Direction: from
  // the atom whose paired child has - sign to the one whose child has +.
  for (auto& [x, y] : c.pairs) {
    const Tree& tx = c.tree(x.tree);
    const Tree& ty = c.tree(y.tree);
    int px = tx.nodes[x.node].parent, py = ty.nodes[y.node].parent;
    if (px < 0 || py < 0) continue;  // a trivial tree's root leaf carries no bond
    int ax = idx[noderef_key({x.tree, px})], ay = idx[noderef_key({y.tree, py})];
    Molecule::Bond b;
    b.lp = true;
    NodeRef neg = c.sign_of(x) < 0 ? x : y;
    NodeRef pos = c.sign_of(x) < 0 ? y : x;
    b.tail = c.sign_of(x) < 0 ? ax : ay;
    b.head = c.sign_of(x) < 0 ? ay : ax;
    b.origin = pos;  // momenta equal on the pair; keep the + leaf
    (void)neg;
    m.bonds.push_back(b);
  }
  if (m.has_self_loop()) throw std::invalid_argument("build_molecule: self loop (degenerate)");
  return m;
}

int64_t MoleculeDecoration::gamma_v_int(const Molecule& m, int v) const {
  int64_t g = 0;
  for (int b : m.bonds_at(v)) g += m.zeta_at(b, v) * k[b].norm2();
  return g;
}

MoleculeDecoration transfer_decoration(const Couple& c, const Molecule& m, const Decoration& dec) {
  MoleculeDecoration md;
  md.k.resize(m.bonds.size());
  md.c_v.resize(m.atoms.size());
  for (int i = 0; i < (int)m.bonds.size(); ++i)
    if (m.bonds[i].alive) md.k[i] = dec.at(m.bonds[i].origin);
  for (int v = 0; v < (int)m.atoms.size(); ++v) {
    if (!m.atoms[v].alive) continue;
    IVec s{};
    for (int b : m.bonds_at(v)) {
      IVec kk = md.k[b];
      if (m.zeta_at(b, v) < 0) kk = -kk;
      s = s + kk;
    }
    md.c_v[v] = s;
  }
  return md;
}

Decoration restore_decoration(const Couple& c, const Molecule& m, const MoleculeDecoration& md,
                              const IVec& k) {
  std::vector<std::pair<NodeRef, IVec>> leaf_values;
  for (int i = 0; i < (int)m.bonds.size(); ++i)
    if (m.bonds[i].alive && m.bonds[i].lp) leaf_values.push_back({m.bonds[i].origin, md.k[i]});
  // pairs involving a trivial tree's root leaf carry the root momentum k
  for (auto& [x, y] : c.pairs)
    if (c.tree(x.tree).nodes[x.node].parent < 0 || c.tree(y.tree).nodes[y.node].parent < 0)
      leaf_values.push_back({x, k});
  return decorate(c, k, leaf_values);
}

}  // namespace wkdiag
