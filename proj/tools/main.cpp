// Command-line driver: enumeration, molecule/DOT emission, vine detection,
// reduction traces, K_Q / correlation evaluation, truncated NLS runs, and
// the lattice counting oracles.

#include <fstream>
#include <iostream>
#include <set>
#include <sstream>

#include "CLI11.hpp"
#include "wkdiag/clcn.hpp"
#include "wkdiag/counting.hpp"
#include "wkdiag/dominant.hpp"
#include "wkdiag/evaluator.hpp"
#include "wkdiag/json_io.hpp"
#include "wkdiag/nls_lab.hpp"
#include "wkdiag/reduce.hpp"
#include "wkdiag/stages.hpp"
#include "wkdiag/vine.hpp"
#include "wkdiag/wke.hpp"

using namespace wkdiag;

namespace {

struct Common {
  std::string config_path, out_path;
  uint64_t seed = 1;
  int threads = 2;
  long long budget = 100000000;

  GlobalParams params() const {
    if (config_path.empty()) return GlobalParams{};
    std::ifstream in(config_path);
    if (!in) throw std::runtime_error("cannot open config " + config_path);
    json j;
    try {
      in >> j;
    } catch (const json::parse_error& e) {
      throw std::runtime_error("config parse error at byte " + std::to_string(e.byte) + ": " +
                               e.what());
    }
    return params_from_json(j);
  }

  void emit(const std::string& text) const {
    if (out_path.empty()) {
      std::cout << text;
      return;
    }
    std::ofstream out(out_path);
    out << text;
  }
};

void add_common(CLI::App* cmd, Common& c) {
  cmd->add_option("--config", c.config_path, "JSON config file with model parameters");
  cmd->add_option("--seed", c.seed, "RNG seed");
  cmd->add_option("--threads", c.threads, "worker threads (deterministic reduction)");
  cmd->add_option("--budget", c.budget, "enumeration budget");
  cmd->add_option("--out", c.out_path, "output path (default stdout)");
}

Couple load_couple(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open couple file " + path);
  json j;
  in >> j;
  return couple_from_json(j);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"wave-kinetic diagram laboratory"};
  app.require_subcommand(1);

  Common c;

  auto* cmd_enum = app.add_subcommand("enumerate", "enumerate trees or couples of an order");
  int enum_order = 2;
  std::string enum_what = "couples";
  cmd_enum->add_option("--order", enum_order);
  cmd_enum->add_option("--what", enum_what, "trees|couples|regular|dominant");
  add_common(cmd_enum, c);

  auto* cmd_mol = app.add_subcommand("molecule", "molecule of a couple (JSON in, DOT/JSON out)");
  std::string mol_in, mol_format = "dot";
  cmd_mol->add_option("--couple", mol_in)->required();
  cmd_mol->add_option("--format", mol_format, "dot|json");
  add_common(cmd_mol, c);

  auto* cmd_detect = app.add_subcommand("detect", "vines and ladders of a couple's molecule");
  std::string det_in;
  cmd_detect->add_option("--couple", det_in)->required();
  add_common(cmd_detect, c);

  auto* cmd_reduce = app.add_subcommand("reduce", "run the reduction loop, emit a JSONL trace");
  std::string red_in, red_couple, red_frames;
  bool red_branch = true;
  cmd_reduce->add_option("--molecule", red_in, "molecule JSON file");
  cmd_reduce->add_option("--couple", red_couple, "couple JSON file (molecule derived)");
  cmd_reduce->add_flag("--normal-branch,!--good-branch", red_branch,
                       "fixed oracle branch for decoration predicates");
  cmd_reduce->add_option("--dot-frames", red_frames, "directory for per-step DOT frames");
  add_common(cmd_reduce, c);

  auto* cmd_eval = app.add_subcommand("eval", "evaluate K_Q or the MC correlation");
  std::string eval_couple;
  int eval_n1 = 1, eval_n2 = 1, eval_samples = 2000;
  double eval_t = 0.5, eval_s = 0.5;
  bool eval_mc = false;
  cmd_eval->add_option("--couple", eval_couple);
  cmd_eval->add_flag("--mc", eval_mc, "Monte-Carlo correlation vs exact couple sums");
  cmd_eval->add_option("--n1", eval_n1);
  cmd_eval->add_option("--n2", eval_n2);
  cmd_eval->add_option("--samples", eval_samples);
  cmd_eval->add_option("--t", eval_t);
  cmd_eval->add_option("--s", eval_s);
  add_common(cmd_eval, c);

  auto* cmd_sim = app.add_subcommand("simulate", "truncated NLS ensemble, CSV spectra");
  int sim_samples = 100;
  double sim_t = 0.5, sim_dt = 0.005;
  bool sim_residual = false;
  cmd_sim->add_option("--samples", sim_samples);
  cmd_sim->add_option("--t", sim_t);
  cmd_sim->add_option("--dt", sim_dt);
  cmd_sim->add_flag("--residual", sim_residual, "expansion residual report");
  add_common(cmd_sim, c);

  auto* cmd_oracle = app.add_subcommand("oracle", "lattice counting oracle");
  int orc_clause = 1;
  double orc_gap = 1.0;
  std::string orc_query;
  cmd_oracle->add_option("--clause", orc_clause, "basiccount clause: 1,-1,2,3,-3,4,5");
  cmd_oracle->add_option("--gap", orc_gap, "dyadic gap parameter R or P");
  cmd_oracle->add_option("--query", orc_query, "query JSON file");
  add_common(cmd_oracle, c);

  auto* cmd_report = app.add_subcommand("report", "WKE Taylor iterates, CSV");
  int rep_nmax = 2;
  double rep_t = 0.5;
  cmd_report->add_option("--n-max", rep_nmax);
  cmd_report->add_option("--t", rep_t);
  add_common(cmd_report, c);

  CLI11_PARSE(app, argc, argv);

  try {
    if (*cmd_enum) {
      json out = json::array();
      if (enum_what == "trees") {
        for (auto& t : enumerate_trees(enum_order, +1, std::max(5, enum_order)))
          out.push_back(t.shape());
      } else if (enum_what == "dominant") {
        std::set<std::string> seen;
        for (auto& e : enumerate_enhanced_dominant(enum_order))
          if (seen.insert(e.couple_key).second) out.push_back(e.couple_key);
      } else {
        for (auto& q : enumerate_couples(enum_order, std::max(4, enum_order))) {
          if (enum_what == "regular" && !is_regular(q)) continue;
          out.push_back(couple_to_json(q));
        }
      }
      c.emit(out.dump(2) + "\n");
    } else if (*cmd_mol) {
      Couple q = load_couple(mol_in);
      Molecule m = build_molecule(q);
      c.emit(mol_format == "json" ? molecule_to_json(m).dump(2) + "\n" : m.dot());
    } else if (*cmd_detect) {
      Couple q = load_couple(det_in);
      Molecule m = build_molecule(q);
      json out;
      out["vines"] = json::array();
      for (auto& v : find_vines(m)) {
        json jv{{"family", family_name(v.family)},
                {"joints", {v.j1, v.j2}},
                {"sigma", v.sigma},
                {"atoms", v.atoms}};
        ClNodes n = classify_cl_cn(q, m, v);
        jv["cl"] = n.cl;
        if (n.cl) jv["subfamily"] = subfamily_name(n.subfamily);
        out["vines"].push_back(jv);
      }
      out["ladders"] = json::array();
      for (auto& l : find_ladders(m)) out["ladders"].push_back(l.length());
      c.emit(out.dump(2) + "\n");
    } else if (*cmd_reduce) {
      Molecule m;
      if (!red_in.empty()) {
        std::ifstream in(red_in);
        if (!in) throw std::runtime_error("cannot open molecule " + red_in);
        json j;
        in >> j;
        m = molecule_from_json(j);
      } else if (!red_couple.empty()) {
        m = build_molecule(load_couple(red_couple));
      } else {
        throw std::runtime_error("reduce: need --molecule or --couple");
      }
      ReductionTrace t = appendix_b_reduce(m, fixed_branch_oracle(red_branch));
      auto issues = ledger_check(t);
      if (!red_frames.empty()) {
        Molecule replay = t.initial;
        int fi = 0;
        std::ofstream(red_frames + "/frame0.dot") << replay.dot();
        for (auto& r : t.records) {
          for (int b : r.removed_bonds) replay.remove_bond(b);
          for (int v : r.removed_atoms) replay.remove_atom(v);
          for (int b : r.added_bonds) {
            replay.bonds.push_back(t.final_mol.bonds[b]);
            replay.bonds.back().alive = true;
          }
          std::ofstream(red_frames + "/frame" + std::to_string(++fi) + ".dot") << replay.dot();
        }
      }
      c.emit(trace_to_jsonl(t));
      if (!issues.empty()) {
        for (auto& i : issues)
          std::cerr << "ledger mismatch at record " << i.record_index << ": " << i.what << "\n";
        return 2;
      }
    } else if (*cmd_eval) {
      GlobalParams p = c.params();
      if (eval_mc) {
        auto rep = mc_correlation(p, eval_n1, eval_n2, eval_samples, eval_t, c.seed, c.threads);
        ModeGrid grid = ModeGrid::make(p);
        json out = json::array();
        for (int i = 0; i < grid.size(); ++i)
          out.push_back({{"k", {grid.modes[i][0], grid.modes[i][1], grid.modes[i][2]}},
                         {"estimate", {rep.mean[i].real(), rep.mean[i].imag()}},
                         {"stderr", rep.stderr_[i]},
                         {"exact", {rep.exact[i].real(), rep.exact[i].imag()}},
                         {"z", rep.z[i]}});
        c.emit(out.dump(2) + "\n");
      } else {
        Couple q = load_couple(eval_couple);
        GlobalParams p2 = c.params();
        auto v = eval_Kq(q, p2, IVec{{0, 0, 0}}, eval_t, eval_s, c.budget);
        json out{{"value", {v.value.real(), v.value.imag()}},
                 {"decorations", v.decorations_visited}};
        c.emit(out.dump(2) + "\n");
      }
    } else if (*cmd_sim) {
      GlobalParams p = c.params();
      if (sim_residual) {
        auto rep = compare_expansion(p, sim_samples, sim_t, sim_dt, c.seed, c.threads);
        json out;
        out["residual"] = json::array();
        for (int N = 0; N < 3; ++N)
          out["residual"].push_back(
              {{"N", N}, {"estimate", rep.residual[N]}, {"stderr", rep.stderr_[N]}});
        c.emit(out.dump(2) + "\n");
      } else {
        auto st = ensemble_spectrum(p, sim_samples, sim_t, sim_dt, c.seed, c.threads);
        ModeGrid grid = ModeGrid::make(p);
        std::ostringstream os;
        os << "kx,ky,kz,mean,stderr\n";
        for (int i = 0; i < grid.size(); ++i)
          os << grid.modes[i][0] << ',' << grid.modes[i][1] << ',' << grid.modes[i][2] << ','
             << st.mean_spectrum[i] << ',' << st.stderr_[i] << "\n";
        c.emit(os.str());
      }
    } else if (*cmd_oracle) {
      GlobalParams p = c.params();
      CountQuery q;
      if (!orc_query.empty()) {
        std::ifstream in(orc_query);
        if (!in) throw std::runtime_error("cannot open query " + orc_query);
        json j;
        in >> j;
        q.n_vars = j.at("n_vars");
        for (auto& cc : j.at("centers"))
          q.centers.push_back(IVec{{cc[0].get<int64_t>(), cc[1].get<int64_t>(),
                                    cc.size() > 2 ? cc[2].get<int64_t>() : 0}});
        for (auto& tt : j.at("tuples")) {
          CountQuery::Tuple t;
          for (auto& e : tt.at("elems")) t.elems.push_back({e[0].get<int>(), e[1].get<int>()});
          auto kk = tt.at("k");
          t.k = IVec{{kk[0].get<int64_t>(), kk[1].get<int64_t>(),
                      kk.size() > 2 ? kk[2].get<int64_t>() : 0}};
          t.beta = tt.at("beta");
          q.tuples.push_back(t);
        }
      } else {
        q.n_vars = 2;
        q.centers = {IVec{{(int64_t)p.L, 0, 0}}, IVec{{0, (int64_t)p.L, 0}}};
        CountQuery::Tuple t;
        t.elems = {{0, +1}, {1, -1}};
        t.k = q.centers[0] - q.centers[1];
        t.beta = (double)(q.centers[0].norm2() - q.centers[1].norm2()) / (p.L * p.L);
        q.tuples = {t};
      }
      auto r = count_oracle(q, p, orc_clause, orc_gap, c.budget);
      json out{{"count", r.count}, {"bound", r.bound}, {"ratio", r.ratio}, {"clause", r.clause}};
      c.emit(out.dump(2) + "\n");
    } else if (*cmd_report) {
      GlobalParams p = c.params();
      ModeGrid grid = ModeGrid::make(p);
      auto mc = wke_taylor(p, grid, rep_nmax);
      std::ostringstream os;
      os << "kx,ky,kz";
      for (int n = 0; n <= rep_nmax; ++n) os << ",Mc" << n;
      os << "\n";
      std::vector<McGrid> vals;
      for (int n = 0; n <= rep_nmax; ++n) vals.push_back(mc[n].eval(rep_t));
      for (int i = 0; i < grid.size(); ++i) {
        os << grid.modes[i][0] << ',' << grid.modes[i][1] << ',' << grid.modes[i][2];
        for (int n = 0; n <= rep_nmax; ++n) os << ',' << vals[n][i];
        os << "\n";
      }
      c.emit(os.str());
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
