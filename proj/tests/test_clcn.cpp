#include "doctest.h"
#include "fixtures.hpp"
#include "wkdiag/clcn.hpp"

using namespace wkdiag;

TEST_SUITE_BEGIN("clcn");

namespace {

VineMatch bad_vine_of(const Couple& c, const Molecule& m) {
  for (auto& v : find_vines(m))
    if (v.family == VineFamily::II) return v;
  for (auto& v : find_vines(m)) {
    if (v.family != VineFamily::I) continue;
    // pick the (I) whose classification is CL with a branching u1 (the
    // fixture's root-side double bond, not the T- side one)
    ClNodes n = classify_cl_cn(c, m, v);
    if (n.cl && n.core) return v;
  }
  throw std::logic_error("fixture has no bad vine");
}

}  // namespace

TEST_CASE("fixture (II-c) classifies as CL / II-c; twist gives II-d") {
  Couple c = fixtures::fixture_IIc();
  Molecule m = build_molecule(c);
  VineMatch v = bad_vine_of(c, m);
  CHECK(v.family == VineFamily::II);
  ClNodes n = classify_cl_cn(c, m, v);
  CHECK(n.cl);
  CHECK(n.core);
  CHECK(n.subfamily == ClNodes::IIc);

  TwistResult tw = unit_twist(c, m, v);
  Molecule m2 = build_molecule(tw.couple);
  VineMatch v2 = bad_vine_of(tw.couple, m2);
  ClNodes n2 = classify_cl_cn(tw.couple, m2, v2);
  CHECK(n2.subfamily == ClNodes::IId);
}

TEST_CASE("fixture (I-a) classifies as I-a; twist gives I-b") {
  Couple c = fixtures::fixture_Ia();
  Molecule m = build_molecule(c);
  VineMatch v = bad_vine_of(c, m);
  CHECK(v.family == VineFamily::I);
  ClNodes n = classify_cl_cn(c, m, v);
  CHECK(n.subfamily == ClNodes::Ia);
  TwistResult tw = unit_twist(c, m, v);
  Molecule m2 = build_molecule(tw.couple);
  ClNodes n2 = classify_cl_cn(tw.couple, m2, bad_vine_of(tw.couple, m2));
  CHECK(n2.subfamily == ClNodes::Ib);
}

TEST_CASE("fixture (II-a) twists to (II-b)") {
  Couple c = fixtures::fixture_IIa();
  Molecule m = build_molecule(c);
  VineMatch v = bad_vine_of(c, m);
  ClNodes n = classify_cl_cn(c, m, v);
  CHECK((n.subfamily == ClNodes::IIa || n.subfamily == ClNodes::IIb));
  TwistResult tw = unit_twist(c, m, v);
  Molecule m2 = build_molecule(tw.couple);
  ClNodes n2 = classify_cl_cn(tw.couple, m2, bad_vine_of(tw.couple, m2));
  CHECK((n2.subfamily == ClNodes::IIa || n2.subfamily == ClNodes::IIb));
  CHECK(n2.subfamily != n.subfamily);
}

TEST_CASE("twist is an involution, preserves the molecule, zeta flips only at u2") {
  for (auto make : {fixtures::fixture_Ia, fixtures::fixture_IIc, fixtures::fixture_IIa}) {
    Couple c = make();
    Molecule m = build_molecule(c);
    VineMatch v = bad_vine_of(c, m);
    ClNodes n = classify_cl_cn(c, m, v);

    TwistResult tw = unit_twist(c, m, v);
    // involution
    Molecule m2 = build_molecule(tw.couple);
    TwistResult back = unit_twist(tw.couple, m2, bad_vine_of(tw.couple, m2));
    CHECK(back.couple.serialize() == c.serialize());
    // molecules equal as directed graphs
    CHECK(isomorphic_directed(m, m2));
    // zeta flip locality
    for (int ti = 0; ti < 2; ++ti)
      for (int x = 0; x < (int)c.tree(ti).nodes.size(); ++x) {
        if (c.tree(ti).nodes[x].is_leaf()) continue;
        int nx = tw.node_map[ti][x];
        REQUIRE(nx >= 0);
        int8_t before = c.tree(ti).nodes[x].sign;
        int8_t after = tw.couple.tree(ti).nodes[nx].sign;
        if (NodeRef{ti, x} == n.u2) CHECK(after == -before);
        else CHECK(after == before);
      }
  }
}

TEST_CASE("splice at the vine equals splice at its unit twist") {
  for (auto make : {fixtures::fixture_Ia, fixtures::fixture_IIc, fixtures::fixture_IIa}) {
    Couple c = make();
    Molecule m = build_molecule(c);
    VineMatch v = bad_vine_of(c, m);
    TwistResult sp1 = splice(c, m, v);
    TwistResult tw = unit_twist(c, m, v);
    Molecule m2 = build_molecule(tw.couple);
    TwistResult sp2 = splice(tw.couple, m2, bad_vine_of(tw.couple, m2));
    CHECK(sp1.couple.serialize() == sp2.couple.serialize());
    // order drop = branching nodes of Q[V] minus u1
    ClNodes n = classify_cl_cn(c, m, v);
    int branching = 0;
    for (auto& r : couple_block_nodes(c, n))
      if (!c.tree(r.tree).nodes[r.node].is_leaf()) ++branching;
    CHECK(c.order() - sp1.couple.order() == branching - 1);
    // spliced molecule = input molecule with the vine merged to one atom
    Molecule msp = build_molecule(sp1.couple);
    CHECK(msp.n_atoms() == m.n_atoms() - (int)v.atoms.size() + 1);
  }
}

TEST_CASE("decoration bijection swaps exactly k_u2 and k_u23") {
  Couple c = fixtures::fixture_IIc();
  Molecule m = build_molecule(c);
  VineMatch v = bad_vine_of(c, m);
  ClNodes n = classify_cl_cn(c, m, v);
  TwistResult tw = unit_twist(c, m, v);

  auto pts = ball_points(2, 1);  // small grid: bijection is per-decoration exact
  IVec k{{1, 0, 0}};
  int checked = 0;
  int P = (int)c.pairs.size();
  std::vector<size_t> idx(P, 0);
  for (long long it = 0; it < 400; ++it) {
    // pseudo-exhaustive odometer over pair values
    std::vector<std::pair<NodeRef, IVec>> lv;
    long long a = it * 2654435761ll;
    for (int q = 0; q < P; ++q) {
      lv.push_back({c.pairs[q].first, pts[((a % (long long)pts.size()) + pts.size()) % pts.size()]});
      a = a / (long long)pts.size() + 7919 * it;
    }
    Decoration d;
    try {
      d = decorate(c, k, lv);
    } catch (const std::invalid_argument&) {
      continue;
    }
    // transport: same pair values, except the (u23, u0) pair takes k_{u2}
    std::vector<std::pair<NodeRef, IVec>> lv2;
    for (auto& [r, val] : lv) {
      NodeRef r2{r.tree, tw.node_map[r.tree][r.node]};
      auto part = c.partner(r);
      bool swapped = r == n.u23 || r == n.u0 || (part && (*part == n.u23 || *part == n.u0));
      lv2.push_back({r2, swapped ? d.at(n.u2) : val});
    }
    Decoration d2 = decorate(tw.couple, k, lv2);
    // all node values transported except u2 <-> u23
    for (int ti = 0; ti < 2; ++ti)
      for (int x = 0; x < (int)c.tree(ti).nodes.size(); ++x) {
        NodeRef r{ti, x};
        NodeRef r2{ti, tw.node_map[ti][x]};
        if (r == n.u2) CHECK(d2.at(r2) == d.at(n.u23));
        else if (r == n.u23 || r == n.u0) CHECK(d2.at(r2) == d.at(n.u2));
        else CHECK(d2.at(r2) == d.at(r));
      }
    ++checked;
  }
  CHECK(checked > 20);
}

TEST_CASE("flip is an involution; core classes have four members") {
  for (auto make : {fixtures::fixture_Ia, fixtures::fixture_IIc, fixtures::fixture_IIa}) {
    Couple c = make();
    Molecule m = build_molecule(c);
    VineMatch v = bad_vine_of(c, m);
    ClNodes n = classify_cl_cn(c, m, v);
    VinePiece p = extract_piece(c, n);
    CHECK(flip_piece(flip_piece(p)).serialize() == p.serialize());
    FlipCode fc = flip_and_code(c, m, v);
    CHECK(fc.members.size() == 4);
    // the four members carry (sgn, ind) in {+,-}^2
  }
}

TEST_CASE("reconstruct(decompose) is exact on the fixture corpus") {
  for (auto make : {fixtures::fixture_Ia, fixtures::fixture_IIc, fixtures::fixture_IIa}) {
    Couple c = make();
    Molecule m = build_molecule(c);
    VineMatch v = bad_vine_of(c, m);
    ClNodes n = classify_cl_cn(c, m, v);
    FlipCode fc = flip_and_code(c, m, v);
    TwistResult sp = splice(c, m, v);
    NodeRef u1_new{n.u1.tree, sp.node_map[n.u1.tree][n.u1.node]};
    Couple back = reconstruct_from_code(sp.couple, u1_new, fc, fc.ind);
    CHECK(back.serialize() == c.serialize());
    // and its twist reconstructs from the flipped ind
    TwistResult tw = unit_twist(c, m, v);
    Couple back2 = reconstruct_from_code(sp.couple, u1_new, fc, static_cast<int8_t>(-fc.ind));
    CHECK(back2.serialize() == tw.couple.serialize());
  }
}

TEST_SUITE_END();
