#include "wkdiag/exppoly.hpp"

#include <algorithm>
#include <cmath>

namespace wkdiag {

namespace {
constexpr double kPi = 3.14159265358979323846;
}

ExpPoly ExpPoly::constant(cplx c) {
  ExpPoly p;
  p.terms.push_back({c, 0.0, 0});
  return p;
}

ExpPoly ExpPoly::exponential(cplx c, double freq, int tpow) {
  ExpPoly p;
  p.terms.push_back({c, freq, tpow});
  return p;
}

cplx ExpPoly::eval(double t) const {
  cplx v = 0.0;
  for (const Term& tm : terms) {
    double amp = 1.0;
    for (int j = 0; j < tm.tpow; ++j) amp *= t;
    v += tm.coeff * amp * std::exp(cplx(0.0, kPi * tm.freq * t));
  }
  return v;
}

ExpPoly& ExpPoly::add_term(cplx c, double f, int p) {
  terms.push_back({c, f, p});
  return *this;
}

void ExpPoly::merge() {
  std::sort(terms.begin(), terms.end(), [](const Term& a, const Term& b) {
    if (a.freq != b.freq) return a.freq < b.freq;
    return a.tpow < b.tpow;
  });
  std::vector<Term> out;
  for (const Term& t : terms) {
    if (!out.empty() && t.tpow == out.back().tpow &&
        std::abs(t.freq - out.back().freq) <= freq_tol) {
      out.back().coeff += t.coeff;
    } else {
      out.push_back(t);
    }
  }
  std::erase_if(out, [](const Term& t) { return std::abs(t.coeff) == 0.0; });
  terms = std::move(out);
}

ExpPoly operator+(const ExpPoly& a, const ExpPoly& b) {
  ExpPoly p = a;
  p.terms.insert(p.terms.end(), b.terms.begin(), b.terms.end());
  p.merge();
  return p;
}

ExpPoly operator*(const ExpPoly& a, const ExpPoly& b) {
  ExpPoly p;
  p.terms.reserve(a.terms.size() * b.terms.size());
  for (const auto& x : a.terms)
    for (const auto& y : b.terms)
      p.terms.push_back({x.coeff * y.coeff, x.freq + y.freq, x.tpow + y.tpow});
  p.merge();
  return p;
}

ExpPoly ExpPoly::scaled(cplx c) const {
  ExpPoly p = *this;
  for (auto& t : p.terms) t.coeff *= c;
  return p;
}

ExpPoly ExpPoly::integrate() const {
  ExpPoly out;
  for (const Term& tm : terms) {
    if (std::abs(tm.freq) < near_zero) {
      // series e^{i pi f t} = sum (i pi f)^j t^j / j!, then integrate
      cplx ipf(0.0, kPi * tm.freq);
      cplx fac = 1.0;
      for (int j = 0; j <= 5; ++j) {
        out.add_term(tm.coeff * fac / double(tm.tpow + j + 1), 0.0, tm.tpow + j + 1);
        fac *= ipf / double(j + 1);
      }
    } else {
      // integral_0^T t^p e^{a t} dt, a = i pi f:
      //   e^{aT} sum_{j=0..p} (-1)^j p!/(p-j)! T^{p-j} / a^{j+1}  -  (-1)^p p!/a^{p+1}
      cplx a(0.0, kPi * tm.freq);
      double fall = 1.0;  // p!/(p-j)!
      cplx apow = a;      // a^{j+1}
      double sgn = 1.0;
      for (int j = 0; j <= tm.tpow; ++j) {
        out.add_term(tm.coeff * sgn * fall / apow, tm.freq, tm.tpow - j);
        fall *= double(tm.tpow - j);
        apow *= a;
        sgn = -sgn;
      }
      double psgn = (tm.tpow % 2 == 0) ? 1.0 : -1.0;
      double pfac = 1.0;
      for (int j = 2; j <= tm.tpow; ++j) pfac *= j;
      cplx ap1 = 1.0;
      for (int j = 0; j <= tm.tpow; ++j) ap1 *= a;
      out.add_term(-tm.coeff * psgn * pfac / ap1, 0.0, 0);
    }
  }
  out.merge();
  return out;
}

namespace {

ExpPoly node_poly(const TimeForest& f, int n) {
  ExpPoly prod = ExpPoly::one();
  for (int c : f.nodes[n].children) prod = prod * node_poly(f, c);
  ExpPoly integrand =
      prod * ExpPoly::exponential(1.0, f.nodes[n].zeta * f.nodes[n].alpha, 0);
  return integrand.integrate();
}

}  // namespace

ExpPoly time_integral_poly(const TimeForest& f, int root) { return node_poly(f, root); }

cplx time_integral(const TimeForest& f, double t, double s) {
  cplx v = 1.0;
  for (int r : f.plus_roots) v *= node_poly(f, r).eval(t);
  for (int r : f.minus_roots) v *= node_poly(f, r).eval(s);
  return v;
}

}  // namespace wkdiag
