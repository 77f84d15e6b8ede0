#pragma once

#include <optional>
#include <string>
#include <vector>

#include "wkdiag/molecule.hpp"

namespace wkdiag {

// The eight vine families. Ladder slots are counted in rung pairs (a slot
// value z means z double-bonded pairs inserted); the drawn "length" of a
// ladder is #doubles - 1.
//
// Grammar fixed from the text (the figure is pictures-only):
//   I    double bond (sigma = 2).
//   II   joint-capped ladder of m >= 1 pairs; second joint across the bottom
//        pair (bad vine, 2m+2 atoms).
//   III  triangle x-y, y-z single, z=x double; joint chains spanning (x,y)
//        and (y,z) (chain = joint-capped ladder, possibly a bare joint).
//   IV   path x=z=y of two doubles; two joint chains spanning (x,y).
//   V    "house" w1=w2=w3 double-double + w1-w3 single, ladder up to a
//        bonded joint pair (sigma = 1).
//   VI   capped column onto the house with one side crossing rerouted
//        through a capped joint chain (z2 >= 1).
//   VII  central single-bonded pair carrying two joint chains, ladder down
//        to the house (three ladders meet at the central pair).
//   VIII as VI but the reroute is a bare joint.
enum class VineFamily { I = 1, II, III, IV, V, VI, VII, VIII };

std::string family_name(VineFamily f);

struct VineParams {
  int z1 = 0, z2 = 0, z3 = 0;  // rung counts per slot (family-specific)
  int pos = 0;                 // reroute position for VI/VIII
};

struct VineTemplate {
  Molecule mol;
  int j1 = -1, j2 = -1;  // joints
  VineFamily family;
  VineParams params;
};

// Build the canonical instance (one valid orientation).
VineTemplate instantiate_vine(VineFamily f, const VineParams& p);

// All parameter choices of a family with the given total atom count.
std::vector<VineParams> param_choices(VineFamily f, int n_atoms);

struct VineMatch {
  VineFamily family;
  int j1 = -1, j2 = -1;       // joints (atom ids in the host molecule)
  std::vector<int> atoms;     // all atoms of the block, joints included
  int sigma = 0;              // joint-joint bonds within the block
  VineParams params;
  std::vector<int> ladder_slots;  // rung counts per slot, family order
  bool bad() const { return family == VineFamily::I || family == VineFamily::II; }
};

// A block of the molecule: two joints with in/out degree 1 inside, interior
// atoms of full degree 4 inside. hyper marks an adjoint (hyper-block): the
// underlying block is recovered by dropping the bond `extra_bond` between
// the joints.
struct Block {
  int j1 = -1, j2 = -1;
  std::vector<int> interior;
  bool hyper = false;
  int extra_bond = -1;
  std::vector<int> atoms() const {
    std::vector<int> a = interior;
    a.push_back(j1);
    a.push_back(j2);
    return a;
  }
};

std::vector<Block> find_blocks(const Molecule& m, bool include_hyper = false);

// Classify one block against the vine templates (undirected, joints marked).
std::optional<VineMatch> classify_vine(const Molecule& m, const Block& b);

// Exhaustive vine detection: every block that matches a family.
std::vector<VineMatch> find_vines(const Molecule& m);

// The derived pseudomolecule: remove the two joints, add one bond per
// joint between the atoms it connected to (for sigma=1 one bond bridges
// the two interior neighbours). Only defined for families II..VIII.
Molecule close_joints(const Molecule& m, const VineMatch& v);
Molecule close_joints(const Molecule& m, int j1, int j2, int sigma);

// ----- ladders -----

struct Ladder {
  // Rung pairs in chain order; length (paper convention) = rungs.size()-1.
  std::vector<std::pair<int, int>> rungs;
  int length() const { return (int)rungs.size() - 1; }
};

// Maximal ladders: chains of double bonds joined by antiparallel crossing
// single pairs. Isolated double bonds count as length-0 ladders; triple and
// quadruple bonds do not.
std::vector<Ladder> find_ladders(const Molecule& m);

// ----- vine-like objects (HV / VC / HVC / DV) -----

struct VineLikeObject {
  enum Kind { VC, HV, HVC, DV } kind;
  std::vector<VineMatch> ingredients;  // chain order for VC/HVC
  std::vector<int> atoms;
  // joints of the whole object (for DV: the two shared joints)
  int j1 = -1, j2 = -1;
};

// The unique collection C of disjoint HV/VC/HVC/DV covering all vine-like
// objects (Lemma on maximal vine-like objects).
std::vector<VineLikeObject> vine_like_collection(const Molecule& m);

}  // namespace wkdiag
