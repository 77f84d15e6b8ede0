#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "wkdiag/clcn.hpp"
#include "wkdiag/molecule.hpp"
#include "wkdiag/reduce.hpp"
#include "wkdiag/vine.hpp"

namespace wkdiag {

// ----- gaps -----

struct GapReport {
  enum Target { Block, AtomTriple, LadderGap } target = Block;
  int atom = -1;           // for AtomTriple
  std::vector<int> atoms;  // object atoms (block/ladder)
  IVec r;
  double magnitude = 0.0;
  bool sg = false;
  bool zero = false;       // degenerate (flagged; blocks may not have r = 0)
  int dyadic = 0;          // floor(log2 |r|) bucket, R_v = 2^dyadic
};

double gap_magnitude(const GlobalParams& p, const IVec& r);
GapReport classify_gap(const GlobalParams& p, const IVec& r);

// Gap of the triple (v, l1, l2); bonds must have opposite directions at v.
IVec triple_gap(const Molecule& m, const MoleculeDecoration& md, int v, int l1, int l2);

// Gap of a block (from either joint; both agree up to sign).
IVec block_gap(const Molecule& m, const MoleculeDecoration& md, int j1, int j2,
               const std::vector<int>& atoms);

// Reports for every vine-like object and every maximal ladder of m, plus
// the per-atom triples requested in `triple_atoms`.
std::vector<GapReport> gaps(const GlobalParams& p, const Molecule& m,
                            const MoleculeDecoration& md, const std::vector<int>& triple_atoms);

// ----- cutting -----

struct CutResult {
  Molecule mol;
  OperationRecord record;
  int new_atom = -1;  // the split-off atom (the original id keeps l1, l2)
  bool beta = false;
};

// Cut atom v along bonds (l1, l2) (opposite directions; degree 3 or 4).
CutResult cut(const Molecule& m, int v, int l1, int l2);

// ----- stage 1 -----

struct GapOracle {
  // SG/LG per vine-like object (all ingredients share the object's gap)
  std::function<bool(const VineLikeObject&)> object_sg;
};

GapOracle oracle_from_decoration(const GlobalParams& p, const Molecule& m,
                                 const MoleculeDecoration& md);

struct StageOneUnit {
  bool bad = false;                  // bad CL vine vs normal CL vine chain
  std::vector<VineMatch> vines;      // in splice order (bottom to top)
};

struct StageOneResult {
  Couple q_sub;
  std::vector<StageOneUnit> units;
  std::vector<OperationRecord> trace;     // one SPLICE record per vine
  std::vector<int> hinge_atoms;           // atoms of M(q_sub)
  // designated (l1, l2) bond pair per hinge atom, bonds of build_molecule(q_sub)
  std::vector<std::array<int, 2>> hinge_bonds;
};

// Splices all SG CL vines of the selection V0 bottom-to-top, starting from
// the skeleton of c.
StageOneResult stage_one(const Couple& c, const GapOracle& oracle);

// The vine selection V of the congruence construction: per VC all CL
// ingredients except (for hyper chains and root chains) one excluded vine.
std::vector<VineMatch> select_congruence_vines(const Couple& c, const Molecule& m);

// All couples congruent to c: full twists at the selected vines (desk scale;
// insert redistribution included up to the given insert-order budget).
std::vector<Couple> congruence_class(const Couple& c, int max_insert_order = 4);

// ----- stage 2 -----

struct StageTwoAnnotation {
  enum AtomClass { Eps, Alpha, Beta };
  std::vector<AtomClass> atom_class;  // per atom id
  std::vector<int> dyadic;            // R_v bucket per alpha atom
  std::vector<int> iota;              // 0/1 per alpha atom
  std::vector<int> kappa;             // 0/50
  std::vector<bool> hinge;
};

struct StageTwoResult {
  Molecule m_fin;
  StageTwoAnnotation annotation;
  std::vector<OperationRecord> trace;
};

// Steps 1-4 of the stage-2 reduction: removing SG vine-like objects,
// removing triangles, remaining SG cuts, remaining beta-cuts.
StageTwoResult stage_two(const GlobalParams& p, const Molecule& m, const MoleculeDecoration& md,
                         const std::vector<int>& hinge_atoms = {},
                         const std::vector<std::array<int, 2>>& hinge_bonds = {});

// Check every graph-checkable bullet of the final-molecule proposition;
// returns human-readable violations.
std::vector<std::string> check_final_molecule(const GlobalParams& p, const StageTwoResult& r,
                                              const MoleculeDecoration& md);

}  // namespace wkdiag
