#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "wkdiag/couple.hpp"
#include "wkdiag/lattice.hpp"

namespace wkdiag {

// Directed multigraph of atoms and bonds. Atoms/bonds carry alive flags so
// ids stay stable across reduction operations; origin references tie the
// graph back to the couple it came from (when available).
struct Molecule {
  struct Atom {
    bool alive = true;
    NodeRef origin{-1, -1};
  };
  struct Bond {
    int tail = -1, head = -1;  // direction tail -> head
    bool alive = true;
    bool lp = false;           // LP (leaf-pair) vs PC (parent-child)
    int parent_end = -1;       // for PC bonds: atom id carrying the P label
    NodeRef origin{-1, -1};    // couple node m with k_l = k_m (leaf for LP)
  };

  std::vector<Atom> atoms;
  std::vector<Bond> bonds;

  int add_atom() {
    atoms.push_back({});
    return (int)atoms.size() - 1;
  }
  int add_bond(int tail, int head, bool lp = false) {
    Bond b;
    b.tail = tail;
    b.head = head;
    b.lp = lp;
    bonds.push_back(b);
    return (int)bonds.size() - 1;
  }

  int n_atoms() const;  // alive atoms
  int n_bonds() const;  // alive bonds
  std::vector<int> bonds_at(int v) const;
  int degree(int v) const;
  int in_degree(int v) const;
  int out_degree(int v) const;
  int other_end(int bond, int v) const {
    return bonds[bond].tail == v ? bonds[bond].head : bonds[bond].tail;
  }
  // +1 if bond is outgoing from v, -1 if incoming (zeta_{v,l}).
  int zeta_at(int bond, int v) const { return bonds[bond].tail == v ? +1 : -1; }
  int bonds_between(int v, int w) const;

  int n_components() const;                 // isolated alive atoms count
  std::vector<int> component_ids() const;   // -1 for dead atoms
  bool connected() const { return n_components() <= 1; }
  int euler_chi() const { return n_bonds() - n_atoms() + n_components(); }
  int nu() const { return 4 * n_atoms() - 2 * n_bonds() - 4 * n_components(); }
  int v_degree_count(int deg) const;        // number of alive atoms of given degree

  void remove_bond(int b) { bonds[b].alive = false; }
  void remove_atom(int v);  // removes incident bonds too

  bool has_self_loop() const;
  std::string dot(const std::unordered_map<int, std::string>* atom_notes = nullptr) const;

  // Canonical serialization of the alive directed multigraph (labels and
  // origins ignored); equal strings iff isomorphic as directed graphs.
  std::string canonical_form() const;
};

bool isomorphic_directed(const Molecule& a, const Molecule& b);

// Canonical form with optional per-atom colors (size = atoms.size(); dead
// atoms ignored) and optional direction-blind comparison.
std::string canonical_form_colored(const Molecule& m, const std::vector<uint64_t>& colors,
                                   bool directed);

// Build the molecule of a nontrivial couple. Atoms are branching nodes;
// bonds per parent-child (PC) and leaf-pair (LP) relations, with the sign
// direction rules. Throws (reporting the offending pair) on degenerate
// couples.
Molecule build_molecule(const Couple& c);

// Map from couple branching nodes to atom ids used by build_molecule.
std::unordered_map<int64_t, int> molecule_atom_index(const Couple& c);
inline int64_t noderef_key(const NodeRef& r) { return r.tree * (1ll << 32) + r.node; }

// Decoration of a molecule: momenta on bonds plus atom constants c_v.
struct MoleculeDecoration {
  std::vector<IVec> k;      // per bond id (dead bonds: ignored)
  std::vector<IVec> c_v;    // per atom id: sum of zeta_{v,l} k_l at v
  std::vector<double> beta; // optional restriction centers (empty = none)
  std::vector<IVec> window; // optional bond windows k_l^0 (empty = none)

  int64_t gamma_v_int(const Molecule& m, int v) const;  // sum zeta |m_l|^2
};

// Transfer a couple decoration to its molecule; verifies (decmole1) and the
// k-decoration rules (molecv).
MoleculeDecoration transfer_decoration(const Couple& c, const Molecule& m, const Decoration& dec);

// Inverse direction: rebuild the couple decoration from bond momenta.
Decoration restore_decoration(const Couple& c, const Molecule& m, const MoleculeDecoration& md,
                              const IVec& k);

}  // namespace wkdiag
