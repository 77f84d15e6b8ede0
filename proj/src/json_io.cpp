#include "wkdiag/json_io.hpp"

#include <functional>
#include <sstream>

namespace wkdiag {

namespace {

json tree_to_json(const Tree& t, int node) {
  json j;
  j["sign"] = (int)t.nodes[node].sign;
  if (!t.nodes[node].is_leaf()) {
    json ch = json::array();
    for (int c : t.nodes[node].child) ch.push_back(tree_to_json(t, c));
    j["children"] = ch;
  }
  return j;
}

std::vector<int> path_of(const Tree& t, int node) {
  std::vector<int> path;
  while (t.nodes[node].parent >= 0) {
    path.push_back(t.nodes[node].which_child);
    node = t.nodes[node].parent;
  }
  std::reverse(path.begin(), path.end());
  return path;
}

int node_at_path(const Tree& t, const std::vector<int>& path) {
  int n = t.root();
  for (int step : path) {
    if (t.nodes[n].is_leaf()) throw std::invalid_argument("couple json: bad leaf path");
    n = t.nodes[n].child[step];
  }
  return n;
}

void tree_from_json(const json& j, Tree& t, int node) {
  if (!j.contains("children")) return;
  int base = (int)t.nodes.size();
  t.nodes.resize(base + 3);
  for (int i = 0; i < 3; ++i) {
    t.nodes[node].child[i] = base + i;
    t.nodes[base + i].parent = node;
    t.nodes[base + i].which_child = i;
  }
  for (int i = 0; i < 3; ++i) tree_from_json(j["children"][i], t, t.nodes[node].child[i]);
}

}  // namespace

json couple_to_json(const Couple& c) {
  json j;
  j["plus"] = tree_to_json(c.plus, 0);
  j["minus"] = tree_to_json(c.minus, 0);
  json pairs = json::array();
  for (auto& [a, b] : c.pairs) {
    json p;
    p.push_back({{"tree", a.tree == 0 ? "plus" : "minus"},
                 {"path", path_of(c.tree(a.tree), a.node)}});
    p.push_back({{"tree", b.tree == 0 ? "plus" : "minus"},
                 {"path", path_of(c.tree(b.tree), b.node)}});
    pairs.push_back(p);
  }
  j["pairing"] = pairs;
  return j;
}

Couple couple_from_json(const json& j) {
  Couple c;
  c.plus = Tree::trivial_tree(+1);
  tree_from_json(j.at("plus"), c.plus, 0);
  c.minus = Tree::trivial_tree(-1);
  tree_from_json(j.at("minus"), c.minus, 0);
  std::vector<int> m0, m1;
  c.plus = preorder_normalize(c.plus, 0, &m0);
  c.minus = preorder_normalize(c.minus, 0, &m1);
  for (auto& p : j.at("pairing")) {
    auto leaf = [&](const json& e) {
      int ti = e.at("tree") == "plus" ? 0 : 1;
      std::vector<int> path = e.at("path").get<std::vector<int>>();
      return NodeRef{ti, node_at_path(c.tree(ti), path)};
    };
    c.pairs.push_back({leaf(p[0]), leaf(p[1])});
  }
  c.sort_pairs();
  c.validate();
  return c;
}

json molecule_to_json(const Molecule& m) {
  json j;
  json atoms = json::array();
  for (int v = 0; v < (int)m.atoms.size(); ++v)
    if (m.atoms[v].alive) atoms.push_back(v);
  j["atoms"] = atoms;
  json bonds = json::array();
  for (auto& b : m.bonds) {
    if (!b.alive) continue;
    bonds.push_back({{"tail", b.tail}, {"head", b.head}, {"label", b.lp ? "LP" : "PC"}});
  }
  j["bonds"] = bonds;
  return j;
}

Molecule molecule_from_json(const json& j) {
  Molecule m;
  int max_atom = -1;
  for (auto& a : j.at("atoms")) max_atom = std::max(max_atom, a.get<int>());
  for (auto& b : j.at("bonds"))
    max_atom = std::max({max_atom, b.at("tail").get<int>(), b.at("head").get<int>()});
  m.atoms.resize(max_atom + 1);
  std::vector<bool> listed(max_atom + 1, false);
  for (auto& a : j.at("atoms")) listed[a.get<int>()] = true;
  for (int v = 0; v <= max_atom; ++v) m.atoms[v].alive = listed[v];
  for (auto& b : j.at("bonds")) {
    Molecule::Bond bd;
    bd.tail = b.at("tail");
    bd.head = b.at("head");
    bd.lp = b.value("label", "PC") == "LP";
    m.bonds.push_back(bd);
  }
  return m;
}

std::string trace_to_jsonl(const ReductionTrace& t) {
  std::ostringstream os;
  Molecule m = t.initial;
  auto hash_of = [](const Molecule& mm) {
    return std::to_string(std::hash<std::string>{}(mm.canonical_form()));
  };
  for (const auto& r : t.records) {
    json j;
    j["op"] = op_name(r.op);
    j["kind"] = r.kind == OpKind::Normal   ? "N"
                : r.kind == OpKind::Fine   ? "F"
                : r.kind == OpKind::Good   ? "G"
                                           : "structural";
    j["before"] = hash_of(m);
    j["delta"] = {{"chi", r.d_chi}, {"nu", r.d_nu}, {"v3", r.d_v3}, {"f", r.d_f}};
    j["removed_atoms"] = r.removed_atoms;
    j["removed_bonds"] = r.removed_bonds;
    j["added_bonds"] = r.added_bonds;
    if (!r.assumption.empty()) j["assumption"] = r.assumption;
    for (int b : r.removed_bonds) m.remove_bond(b);
    for (int v : r.removed_atoms) m.remove_atom(v);
    for (int b : r.added_bonds) {
      m.bonds.push_back(t.final_mol.bonds[b]);
      m.bonds.back().alive = true;
    }
    j["after"] = hash_of(m);
    os << j.dump() << "\n";
  }
  return os.str();
}

json params_to_json(const GlobalParams& p) {
  return json{{"d", p.d},         {"L", p.L},     {"gamma", p.gamma},
              {"delta", p.delta}, {"trunc", p.trunc}, {"eta", p.eta}};
}

GlobalParams params_from_json(const json& j) {
  GlobalParams p;
  p.d = j.value("d", 2);
  p.L = j.value("L", 3.0);
  p.gamma = j.value("gamma", 0.5);
  p.delta = j.value("delta", 0.05);
  p.trunc = j.value("trunc", 2.0);
  p.eta = j.value("eta", 0.01);
  p.validate();
  return p;
}

}  // namespace wkdiag
