#include "wkdiag/dominant.hpp"

#include <algorithm>
#include <set>
#include <sstream>
#include <stdexcept>

namespace wkdiag {

Poly poly_mul(const Poly& a, const Poly& b) {
  if (a.empty() || b.empty()) return {};
  Poly c(a.size() + b.size() - 1, 0.0);
  for (size_t i = 0; i < a.size(); ++i)
    for (size_t j = 0; j < b.size(); ++j) c[i + j] += a[i] * b[j];
  return c;
}

Poly poly_integrate(const Poly& a) {
  Poly c(a.size() + 1, 0.0);
  for (size_t i = 0; i < a.size(); ++i) c[i + 1] = a[i] / double(i + 1);
  return c;
}

double poly_eval(const Poly& a, double t) {
  double v = 0.0;
  for (size_t i = a.size(); i-- > 0;) v = v * t + a[i];
  return v;
}

namespace {

Poly poly_scale(Poly a, double s) {
  for (double& x : a) x *= s;
  return a;
}
Poly poly_add(const Poly& a, const Poly& b) {
  Poly c(std::max(a.size(), b.size()), 0.0);
  for (size_t i = 0; i < a.size(); ++i) c[i] += a[i];
  for (size_t i = 0; i < b.size(); ++i) c[i] += b[i];
  return c;
}

// sum over shuffles of the two chains of the ordered integral
//   int_{t>v1>...>vn>0} prod s_i(v_i) * lone(v_n) dv.
void shuffles_rec(const std::vector<Poly>& plus, const std::vector<Poly>& minus, size_t i,
                  size_t j, std::vector<const Poly*>& seq, const Poly& lone, Poly& acc) {
  if (i == plus.size() && j == minus.size()) {
    Poly g;
    bool innermost = true;
    for (size_t q = seq.size(); q-- > 0;) {
      Poly integrand = innermost ? poly_mul(*seq[q], lone) : poly_mul(*seq[q], g);
      g = poly_integrate(integrand);
      innermost = false;
    }
    if (seq.empty()) g = lone;
    acc = poly_add(acc, g);
    return;
  }
  if (i < plus.size()) {
    seq.push_back(&plus[i]);
    shuffles_rec(plus, minus, i + 1, j, seq, lone, acc);
    seq.pop_back();
  }
  if (j < minus.size()) {
    seq.push_back(&minus[j]);
    shuffles_rec(plus, minus, i, j + 1, seq, lone, acc);
    seq.pop_back();
  }
}

Poly jb_tt_type2(const std::vector<Poly>& plus, const std::vector<Poly>& minus,
                 const Poly& lone) {
  Poly acc;
  std::vector<const Poly*> seq;
  shuffles_rec(plus, minus, 0, 0, seq, lone, acc);
  return acc;
}

struct EnhRec {
  std::string key;
  cplx zf;
  int zsize;
};

struct DomCouple {
  Couple c;
  int type = 0;  // 0 trivial, 1 mini based, 2 double chain
  Poly jb_tt{1.0};
  std::vector<Poly> plus_steps, minus_steps;
  Poly lone_jb{1.0};
  std::vector<EnhRec> enh;
  std::string base_key;  // class key of (Q, empty Z) -- used for nesting
};

Couple trivial_couple() {
  Couple c;
  c.plus = Tree::trivial_tree(+1);
  c.minus = Tree::trivial_tree(-1);
  c.pairs = {{{0, 0}, {1, 0}}};
  return c;
}

// all dominant couples grouped by order
struct Table {
  int max_order;
  std::vector<std::vector<DomCouple>> by_order;  // index = order/2
};

void gen_type1(Table& tab, int n) {
  auto& out = tab.by_order[n / 2];
  for (int a = 0; a <= n - 2; a += 2)
    for (int b = 0; a + b <= n - 2; b += 2) {
      int c3 = n - 2 - a - b;
      for (const DomCouple& q1 : tab.by_order[a / 2])
        for (const DomCouple& q2 : tab.by_order[b / 2])
          for (const DomCouple& q3 : tab.by_order[c3 / 2])
            for (int variant = 0; variant < 2; ++variant) {
              DomCouple d;
              d.type = 1;
              Couple base = apply_A(trivial_couple(), 0, variant);
              InsertDecomposition dec;
              dec.sk = base;
              if (!q1.c.trivial()) dec.couple_inserts[0] = q1.c;
              if (!q2.c.trivial()) dec.couple_inserts[1] = q2.c;
              if (!q3.c.trivial()) dec.couple_inserts[2] = q3.c;
              d.c = recompose_inserts(dec);
              d.jb_tt = poly_scale(
                  poly_integrate(poly_mul(q1.jb_tt, poly_mul(q2.jb_tt, q3.jb_tt))), 2.0);
              for (const EnhRec& e1 : q1.enh)
                for (const EnhRec& e2 : q2.enh)
                  for (const EnhRec& e3 : q3.enh)
                    d.enh.push_back({"1(" + e1.key + "," + e2.key + "," + e3.key + ")",
                                     e1.zf * e2.zf * e3.zf, e1.zsize + e2.zsize + e3.zsize});
              d.base_key = "1(" + q1.base_key + "," + q2.base_key + "," + q3.base_key + ")";
              out.push_back(std::move(d));
            }
    }
}

struct ChainPlan {
  std::vector<int> variants;            // mini tree variant per step
  std::vector<std::pair<int, int>> ins;  // insert order pair (q1, q2) per step
};

void enumerate_chains(Table& tab, int m, int budget,
                      std::vector<std::tuple<ChainPlan, int>>& out) {
  // all variants and insert-order assignments with total insert order <= budget
  std::vector<ChainPlan> plans{{std::vector<int>(m, 0), std::vector<std::pair<int, int>>(m, {0, 0})}};
  // variants
  for (int j = 0; j < m; ++j) {
    std::vector<ChainPlan> next;
    for (auto& p : plans)
      for (int v = 0; v < 6; ++v) {
        ChainPlan q = p;
        q.variants[j] = v;
        next.push_back(q);
      }
    plans = next;
  }
  // insert orders
  for (int j = 0; j < m; ++j) {
    std::vector<ChainPlan> next;
    for (auto& p : plans) {
      int used = 0;
      for (auto& [x, y] : p.ins) used += x + y;
      for (int a = 0; a + used <= budget; a += 2)
        for (int b = 0; a + b + used <= budget; b += 2) {
          ChainPlan q = p;
          q.ins[j] = {a, b};
          next.push_back(q);
        }
    }
    plans = next;
  }
  for (auto& p : plans) {
    int used = 0;
    for (auto& [x, y] : p.ins) used += x + y;
    out.push_back({p, used});
  }
}

void gen_type2(Table& tab, int n) {
  auto& out = tab.by_order[n / 2];
  for (int mp = 0; 2 * mp <= n; ++mp)
    for (int mm = 0; 2 * (mp + mm) <= n; ++mm) {
      if (mp + mm < 1) continue;
      int budget = n - 2 * (mp + mm);
      std::vector<std::tuple<ChainPlan, int>> plus_plans, minus_plans;
      enumerate_chains(tab, mp, budget, plus_plans);
      enumerate_chains(tab, mm, budget, minus_plans);
      for (auto& [pp, pu] : plus_plans)
        for (auto& [mmp, mu] : minus_plans) {
          int lone_order = budget - pu - mu;
          if (lone_order < 0) continue;
          for (const DomCouple& lp : tab.by_order[lone_order / 2]) {
            if (lp.type == 2) continue;  // lone insert must be trivial or type 1
            // choose the actual inserts per step
            // expand recursively over insert choices
            struct Slot {
              int chain;  // 0 plus, 1 minus
              int step;
              int which;  // 0 or 1 (red/green)
              int order;
            };
            std::vector<Slot> slots;
            for (int j = 0; j < mp; ++j) {
              slots.push_back({0, j, 0, pp.ins[j].first});
              slots.push_back({0, j, 1, pp.ins[j].second});
            }
            for (int j = 0; j < mm; ++j) {
              slots.push_back({1, j, 0, mmp.ins[j].first});
              slots.push_back({1, j, 1, mmp.ins[j].second});
            }
            std::vector<const DomCouple*> choice(slots.size(), nullptr);
            std::function<void(size_t)> rec = [&](size_t si) {
              if (si == slots.size()) {
                // build the couple and records
                DomCouple d;
                d.type = 2;
                Couple c = trivial_couple();
                NodeRef lone_p{0, 0}, lone_m{1, 0};
                std::vector<std::array<std::pair<NodeRef, NodeRef>, 2>> pair_refs[2];
                pair_refs[0].resize(mp);
                pair_refs[1].resize(mm);
                auto remap_all = [&](const std::array<std::vector<int>, 2>& maps) {
                  auto rm = [&](NodeRef& r) { r.node = maps[r.tree][r.node]; };
                  rm(lone_p);
                  rm(lone_m);
                  for (int ch = 0; ch < 2; ++ch)
                    for (auto& ps : pair_refs[ch])
                      for (auto& pr : ps) {
                        rm(pr.first);
                        rm(pr.second);
                      }
                };
                for (int j = 0; j < mp; ++j) {
                  std::array<std::vector<int>, 2> maps;
                  BInfo info;
                  c = apply_B_mapped(c, lone_p, pp.variants[j], maps, info);
                  remap_all(maps);
                  pair_refs[0][j] = info.pairs;
                  lone_p = info.lone;
                }
                for (int j = 0; j < mm; ++j) {
                  std::array<std::vector<int>, 2> maps;
                  BInfo info;
                  c = apply_B_mapped(c, lone_m, mmp.variants[j], maps, info);
                  remap_all(maps);
                  pair_refs[1][j] = info.pairs;
                  lone_m = info.lone;
                }
                InsertDecomposition dec;
                dec.sk = c;
                auto pair_index = [&](const std::pair<NodeRef, NodeRef>& pr) {
                  for (int q = 0; q < (int)c.pairs.size(); ++q)
                    if ((c.pairs[q].first == pr.first && c.pairs[q].second == pr.second) ||
                        (c.pairs[q].first == pr.second && c.pairs[q].second == pr.first))
                      return q;
                  throw std::logic_error("dominant: tracked pair not found");
                };
                for (size_t si2 = 0; si2 < slots.size(); ++si2) {
                  const Slot& sl = slots[si2];
                  if (choice[si2]->c.trivial()) continue;
                  dec.couple_inserts[pair_index(pair_refs[sl.chain][sl.step][sl.which])] =
                      choice[si2]->c;
                }
                if (!lp.c.trivial())
                  dec.couple_inserts[pair_index({lone_p, lone_m})] = lp.c;
                d.c = recompose_inserts(dec);
                // step polynomials: product of the two insert diagonals
                auto step_poly = [&](int chain, int j) {
                  const DomCouple *q1 = nullptr, *q2 = nullptr;
                  for (size_t si2 = 0; si2 < slots.size(); ++si2)
                    if (slots[si2].chain == chain && slots[si2].step == j)
                      (slots[si2].which == 0 ? q1 : q2) = choice[si2];
                  return poly_mul(q1->jb_tt, q2->jb_tt);
                };
                for (int j = 0; j < mp; ++j) d.plus_steps.push_back(step_poly(0, j));
                for (int j = 0; j < mm; ++j) d.minus_steps.push_back(step_poly(1, j));
                d.lone_jb = lp.jb_tt;
                d.jb_tt = jb_tt_type2(d.plus_steps, d.minus_steps, d.lone_jb);
                // enhanced records: I bits per step x children enhanced x lone
                struct StepEnh {
                  std::string tuple;
                  cplx zf;
                  int zsize;
                };
                std::vector<std::vector<StepEnh>> per_step;
                for (int ch = 0; ch < 2; ++ch) {
                  int mcount = ch == 0 ? mp : mm;
                  auto& plan = ch == 0 ? pp : mmp;
                  for (int j = 0; j < mcount; ++j) {
                    const DomCouple *q1 = nullptr, *q2 = nullptr;
                    for (size_t si2 = 0; si2 < slots.size(); ++si2)
                      if (slots[si2].chain == ch && slots[si2].step == j)
                        (slots[si2].which == 0 ? q1 : q2) = choice[si2];
                    int cdigit = mini_tree_shape(plan.variants[j]).code_first;
                    std::vector<StepEnh> opts;
                    for (int ibit = 0; ibit < 2; ++ibit)
                      for (const EnhRec& e1 : q1->enh)
                        for (const EnhRec& e2 : q2->enh) {
                          std::ostringstream os;
                          os << '(' << ibit << ',' << cdigit << ',' << e1.key << ','
                             << e2.key << ')';
                          cplx zf = e1.zf * e2.zf;
                          int zs = e1.zsize + e2.zsize;
                          if (ibit) {
                            double zeta = ch == 0 ? +1.0 : -1.0;
                            zf *= 1.0 / (zeta * cplx(0.0, M_PI));
                            zs += 1;
                          }
                          opts.push_back({os.str(), zf, zs});
                        }
                    per_step.push_back(opts);
                  }
                }
                std::vector<size_t> pick(per_step.size(), 0);
                for (;;) {
                  for (const EnhRec& el : lp.enh) {
                    std::vector<std::string> tuples;
                    cplx zf = el.zf;
                    int zs = el.zsize;
                    for (size_t q = 0; q < per_step.size(); ++q) {
                      tuples.push_back(per_step[q][pick[q]].tuple);
                      zf *= per_step[q][pick[q]].zf;
                      zs += per_step[q][pick[q]].zsize;
                    }
                    std::sort(tuples.begin(), tuples.end());
                    std::ostringstream os;
                    os << "2{";
                    for (auto& s : tuples) os << s;
                    os << ';' << el.key << '}';
                    d.enh.push_back({os.str(), zf, zs});
                  }
                  size_t q = 0;
                  while (q < pick.size() && ++pick[q] == per_step[q].size()) pick[q++] = 0;
                  if (q == pick.size()) break;
                  if (per_step.empty()) break;
                }
                if (per_step.empty() && d.enh.empty())
                  for (const EnhRec& el : lp.enh)
                    d.enh.push_back({"2{;" + el.key + "}", el.zf, el.zsize});
                d.base_key = d.enh.front().key;  // not used for nesting of type 2
                out.push_back(std::move(d));
                return;
              }
              for (const DomCouple& q : tab.by_order[slots[si].order / 2]) {
                choice[si] = &q;
                rec(si + 1);
              }
            };
            rec(0);
          }
        }
    }
}

const Table& dominant_table(int max_order) {
  static std::map<int, Table> cache;
  auto it = cache.find(max_order);
  if (it != cache.end()) return it->second;
  Table tab;
  tab.max_order = max_order;
  tab.by_order.resize(max_order / 2 + 1);
  DomCouple triv;
  triv.c = trivial_couple();
  triv.type = 0;
  triv.enh = {{"T", 1.0, 0}};
  triv.base_key = "T";
  tab.by_order[0].push_back(triv);
  for (int n = 2; n <= max_order; n += 2) {
    gen_type1(tab, n);
    gen_type2(tab, n);
  }
  return cache.emplace(max_order, std::move(tab)).first->second;
}

}  // namespace

std::vector<EnhancedDominant> enumerate_enhanced_dominant(int max_order) {
  const Table& tab = dominant_table(max_order);
  std::vector<EnhancedDominant> out;
  for (auto& bucket : tab.by_order)
    for (const DomCouple& d : bucket) {
      std::string ck = d.c.serialize();
      for (const EnhRec& e : d.enh) out.push_back({ck, e.key, e.zf, e.zsize, d.jb_tt});
    }
  return out;
}

std::map<std::string, std::vector<EnhancedDominant>> dominant_classes(int max_order) {
  std::map<std::string, std::vector<EnhancedDominant>> out;
  for (auto& e : enumerate_enhanced_dominant(max_order)) out[e.class_key].push_back(e);
  return out;
}

cplx class_sum(const std::vector<EnhancedDominant>& members, double t) {
  cplx s = 0.0;
  for (auto& m : members) s += m.z_factor * poly_eval(m.jb_tt, t);
  return s;
}

DominantInfo dominant_classify(const Couple& c, int cap) {
  if (!is_regular(c)) throw std::invalid_argument("dominant_classify: input not regular");
  const Table& tab = dominant_table(cap);
  std::string key = c.serialize();
  DominantInfo info;
  for (auto& bucket : tab.by_order)
    for (const DomCouple& d : bucket)
      if (d.c.serialize() == key) {
        info.dominant = true;
        for (const EnhRec& e : d.enh) info.enhanced.push_back({e.key, e.zsize});
        return info;
      }
  return info;
}

double dominant_JB_tree(const std::vector<Poly>& steps, double t, double s) {
  // int_{t > t1 > ... > tm > s} prod steps_j(t_j); exact via antiderivatives
  Poly g{1.0};
  for (size_t j = steps.size(); j-- > 0;) {
    Poly f = poly_integrate(poly_mul(steps[j], g));
    // G_j(u) = int_s^u steps_j(v) g(v) dv
    double at_s = poly_eval(f, s);
    g = f;
    g[0] -= at_s;
  }
  return poly_eval(g, t);
}

double dominant_JB(const Couple& c, double t, double s, int cap) {
  const Table& tab = dominant_table(cap);
  std::string key = c.serialize();
  for (auto& bucket : tab.by_order)
    for (const DomCouple& d : bucket) {
      if (d.c.serialize() != key) continue;
      if (d.type == 0) return 1.0;
      if (d.type == 1) return poly_eval(d.jb_tt, std::min(t, s));
      // type 2: completions of both chains, then the min-coupled core
      auto completion = [](const std::vector<Poly>& steps, double T) {
        // D(u) = int_{T > v1 > ... > v_{m-1} > u} prod_{j<m} P_j; poly in u,
        // built outermost-first: A_j(u) = int_u^T P_j(w) A_{j-1}(w) dw
        Poly g{1.0};
        for (size_t j = 0; j + 1 < steps.size(); ++j) {
          Poly f = poly_integrate(poly_mul(steps[j], g));
          double at_T = poly_eval(f, T);
          g = poly_scale(f, -1.0);
          g[0] += at_T;
        }
        return g;
      };
      // PCp(x) = P_m(x) * D(x) for the plus chain (empty chain handled below)
      bool ep = d.plus_steps.empty(), em = d.minus_steps.empty();
      Poly pcp = ep ? Poly{} : poly_mul(d.plus_steps.back(), completion(d.plus_steps, t));
      Poly pcm = em ? Poly{} : poly_mul(d.minus_steps.back(), completion(d.minus_steps, s));
      const Poly& Y = d.lone_jb;
      if (ep && em) return poly_eval(Y, std::min(t, s));
      if (ep || em) {
        // single chain with upper limit T, the lone coupled at min(x, S)
        double T = ep ? s : t, S = ep ? t : s;
        const Poly& pc = ep ? pcm : pcp;
        // int_0^T pc(x) Y(min(x, S)) dx
        Poly f1 = poly_integrate(poly_mul(pc, Y));
        if (T <= S) return poly_eval(f1, T);
        Poly f2 = poly_integrate(pc);
        return poly_eval(f1, S) +
               (poly_eval(f2, T) - poly_eval(f2, S)) * poly_eval(Y, S);
      }
      // both chains: J = int_0^t pcp(x) [ F1(min(x,s)) + Y(x)(F2(s)-F2(min(x,s))) ] dx
      Poly F1 = poly_integrate(poly_mul(pcm, Y));
      Poly F2 = poly_integrate(pcm);
      double ms = std::min(t, s);
      // piece x <= s: bracket = F1(x) + Y(x) (F2(s) - F2(x))
      Poly bracket = poly_add(F1, poly_mul(Y, poly_add(poly_scale(F2, -1.0), Poly{poly_eval(F2, s)})));
      Poly piece1 = poly_integrate(poly_mul(pcp, bracket));
      double val = poly_eval(piece1, ms);
      if (t > s) {
        // piece x > s: bracket = F1(s) + Y(x)*0... min(x,s)=s: F1(s) + Y(x)(F2(s)-F2(s)) = F1(s)
        Poly f2p = poly_integrate(pcp);
        val += (poly_eval(f2p, t) - poly_eval(f2p, s)) * poly_eval(F1, s);
      }
      return val;
    }
  throw std::invalid_argument("dominant_JB: couple is not dominant within the cap");
}

}  // namespace wkdiag
