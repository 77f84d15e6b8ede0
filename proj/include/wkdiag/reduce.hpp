#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "wkdiag/molecule.hpp"

namespace wkdiag {

// Operation identifiers of the reduction algorithm, plus the structural ops
// (cuts, splices, Y moves) used by the two reduction stages.
enum class OpId {
  TB_1N, TB_2N, BR_N,
  S3_1N, S3_2G, S3_3G, S3_4G, S3_5G,          // (3S3-*)
  D3_1N, D3_2G, D3_3G, D3_4G, D3_5G, D3_6G,   // (3D3-*)
  D4_G, S2_G,                                  // (3D4-G), (3S2-G)
  R3_1N, R3_2G,                                // (3R-*)
  R2_1F, R2_2F, R2_3F, R2_4F,                  // (2R-*)
  CUT_ALPHA, CUT_BETA, Y1, Y2, SPLICE, MERGE,
};

std::string op_name(OpId id);

enum class OpKind { Normal, Fine, Good, Structural };
OpKind op_kind(OpId id);

struct OperationRecord {
  OpId op;
  OpKind kind;
  int d_chi = 0, d_nu = 0, d_v3 = 0, d_f = 0, d_vbeta = 0;
  std::vector<int> removed_atoms, removed_bonds, added_bonds;
  std::string assumption;  // decoration predicate consumed, if any
};

struct ReductionTrace {
  Molecule initial;
  std::vector<OperationRecord> records;
  Molecule final_mol;
  int r1 = 0;  // fine ops
  int r2 = 0;  // good ops
  // z tallies per the accounting: z1 (BR-N both deg 3), z1' (other BR-N),
  // z2 (3S3-1N), z3 (3R-1N), z4..z6 (2R-2F..4F), z7 (2R-1F)
  int z1 = 0, z1p = 0, z2 = 0, z3 = 0, z4 = 0, z5 = 0, z6 = 0, z7 = 0;
};

// ----- decoration-dependent branches -----

// The loop branches on decoration predicates the graph cannot see (the
// L^{-gamma} closeness tests in (3S3-1N)/(3D3-1N)). An oracle answers them;
// tests derive one from an explicit decoration, fuzzing fixes branches.
struct AssumptionOracle {
  // returns true if the "normal" branch condition holds (gaps small and the
  // secondary non-degeneracy gap large)
  std::function<bool(const Molecule&, const std::vector<int>& bonds, const std::string& which)>
      normal_branch = [](const Molecule&, const std::vector<int>&, const std::string&) {
        return true;
      };
};

AssumptionOracle fixed_branch_oracle(bool normal);

// ----- Y operations -----

// A pair of atoms joined by exactly three parallel bonds.
std::optional<std::pair<int, int>> find_triple_bond(const Molecule& m);

// One (Y) sequence starting from the given triple bond; repeats (Y1)/(Y2)
// until no new triple bond forms at the receiving pair. Records appended.
Molecule y_sequence(const Molecule& m, std::pair<int, int> triple,
                    std::vector<OperationRecord>* records = nullptr);

// Apply (Y) sequences while any triple bond exists.
Molecule y_reduce_all(const Molecule& m, std::vector<OperationRecord>* records = nullptr);

// Shape tests for the two bad graphs.
bool is_quadruple_bond(const Molecule& m);
bool is_triangle_of_doubles(const Molecule& m);

// ----- the appendix algorithm -----

// Runs the loop on a molecule until only isolated atoms remain. The oracle
// answers the decoration-dependent branches. Throws on invariant breaches
// (saturated component encountered).
ReductionTrace appendix_b_reduce(const Molecule& m, const AssumptionOracle& oracle);

struct LedgerIssue {
  int record_index;
  std::string what;
};

// Re-derives every record's deltas by replaying the trace and checks the
// stated proposition values where given. Returns all mismatches.
std::vector<LedgerIssue> ledger_check(const ReductionTrace& t);

}  // namespace wkdiag
