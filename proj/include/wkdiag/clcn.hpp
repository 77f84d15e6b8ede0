#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "wkdiag/molecule.hpp"
#include "wkdiag/vine.hpp"

namespace wkdiag {

// Relative position of a block's joints inside the couple: cancellation (CL)
// or connectivity (CN), with the distinguished nodes of the two propositions
// on block structure. For bad CL vines also the subfamily and the extra
// nodes (u3, u4, u23, u0).
struct ClNodes {
  bool cl = false;
  NodeRef u1, u2;         // joint nodes; for CL, u2 is a descendant of u1
  NodeRef u11;            // free child of u1 (same sign as u1)
  NodeRef u21, u22;       // CL: free children of u2 with signs +, -
  NodeRef u21_cn;         // CN: free child of u2 (same sign as u2)
  enum Subfamily { None, Ia, Ib, IIa, IIb, IIc, IId, IIe } subfamily = None;
  NodeRef u23, u0, u3, u4;  // bad CL vines (u0, u3, u4 where applicable)
  bool core = false;        // bad CL vine, not (II-e)
};

std::string subfamily_name(ClNodes::Subfamily s);

// Classify a vine found in build_molecule(c). Throws on inconsistencies
// (which would signal a detector bug).
ClNodes classify_cl_cn(const Couple& c, const Molecule& m, const VineMatch& v);

// All nodes of Q[V]: descendants of u1 that are not descendants of
// u11/u21/u22 (CL version).
std::vector<NodeRef> couple_block_nodes(const Couple& c, const ClNodes& n);

struct TwistResult {
  Couple couple;
  // old node -> new node, per tree (node id -1 = removed)
  std::array<std::vector<int>, 2> node_map;
};

// Splice a CL vine: remove Q[V] minus u1; u11, u21, u22 become u1's children
// (positions by sign). The molecule of the result is the molecule of the
// input with the vine merged to one atom.
TwistResult splice(const Couple& c, const Molecule& m, const VineMatch& v);

// Unit twist at a core bad CL vine: swaps the subtree rooted at u2 with the
// leaf u0, switching the two free-child subtrees of u2. An involution.
TwistResult unit_twist(const Couple& c, const Molecule& m, const VineMatch& v);

// ----- flips and codes -----

// The structure piece Q[V] as a standalone object: the subtree of u1 pruned
// at the three free children (stub leaves), with internal pairings and the
// root sign. Serializable; flip is an involution on pieces.
struct VinePiece {
  Tree tree;                                      // rooted at u1's copy
  std::vector<std::pair<int, int>> pairs;         // internal leaf pairs (local ids)
  std::array<int, 3> stubs{-1, -1, -1};           // local ids of u11, u21, u22
  int8_t sgn = +1;                                // zeta_{u1}
  int u2 = -1;                                    // local id of u2

  std::string serialize() const;
};

VinePiece extract_piece(const Couple& c, const ClNodes& n);
VinePiece flip_piece(const VinePiece& p);

struct FlipCode {
  std::string cod;  // canonical key of the flip/twist equivalence class
  int8_t sgn;       // zeta_{u1}
  int8_t ind;       // zeta_{u2}
  std::vector<std::string> members;  // serialized class members
};

FlipCode flip_and_code(const Couple& c, const Molecule& m, const VineMatch& v);

// Reconstruct the couple from its spliced form, the code, the spliced node
// that u1 maps to, and ind. Exact inverse of (splice, flip_and_code).
Couple reconstruct_from_code(const Couple& spliced, const NodeRef& node, const FlipCode& code,
                             int8_t ind);

}  // namespace wkdiag
