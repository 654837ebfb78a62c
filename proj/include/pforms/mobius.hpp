#pragma once

// Möbius action of jet matrices on the upper half plane, the automorphy
// cocycle j(g,z) = 1/(cz+d), the weight-k slash operator, and the polynomial
// reparametrization of H (identity body) that straightens a deformed
// parabolic flow to the unit translation. The latter defines the cusp
// coordinate in which deformed forms have q-expansions.

#include <functional>

#include "pforms/extfield.hpp"
#include "pforms/mat2.hpp"

namespace pforms {

template <class K>
K unit_i() {
  if constexpr (std::is_same_v<K, CRat>) return crat_i();
  else if constexpr (std::is_same_v<K, Ext>) return Ext(crat_i());
  else return K(0.0, 1.0);
}

template <class K>
Jet<K> mobius_apply(const Mat2<K>& g, const Jet<K>& z) {
  return (g.a() * z + g.b()) / (g.c() * z + g.d());
}

template <class K>
Jet<K> cocycle_j(const Mat2<K>& g, const Jet<K>& z) {
  return jet_invert(g.c() * z + g.d());
}

template <class K>
using Evaluator = std::function<Jet<K>(const Jet<K>&)>;

// f|_g(z) = f(g z) j(g, z)^k
template <class K>
Jet<K> slash(const Evaluator<K>& f, const Mat2<K>& g, int k, const Jet<K>& z) {
  Jet<K> jz = cocycle_j(g, z);
  return f(mobius_apply(g, z)) * jet_pow(jz, Rat(k));
}

// Dense polynomials with jet coefficients, ascending powers.
template <class K>
struct PolyJet {
  AlgebraPtr alg;
  std::vector<Jet<K>> c;

  PolyJet() = default;
  explicit PolyJet(AlgebraPtr a) : alg(std::move(a)) {}

  int deg() const {
    for (int i = static_cast<int>(c.size()) - 1; i >= 0; --i)
      if (!c[static_cast<size_t>(i)].is_zero()) return i;
    return -1;
  }
  void trim() {
    int d = deg();
    c.resize(static_cast<size_t>(d + 1));
  }
  Jet<K> coeff(int i) const {
    if (i < 0 || i >= static_cast<int>(c.size())) return Jet<K>(alg);
    return c[static_cast<size_t>(i)];
  }
  bool is_zero() const { return deg() < 0; }

  static PolyJet constant(AlgebraPtr a, Jet<K> v) {
    PolyJet p(a);
    p.c.push_back(std::move(v));
    return p;
  }
  // the identity polynomial z
  static PolyJet ident(AlgebraPtr a) {
    PolyJet p(a);
    p.c.push_back(Jet<K>(a));
    p.c.push_back(Jet<K>::unit(a));
    return p;
  }

  Jet<K> eval(const Jet<K>& z) const {
    Jet<K> r(alg);
    for (int i = static_cast<int>(c.size()) - 1; i >= 0; --i) r = r * z + c[static_cast<size_t>(i)];
    return r;
  }

  PolyJet derivative() const {
    PolyJet d(alg);
    for (size_t i = 1; i < c.size(); ++i)
      d.c.push_back(c[i] * ScalarTraits<K>::from_rat(Rat(static_cast<long>(i))));
    if (d.c.empty()) d.c.push_back(Jet<K>(alg));
    return d;
  }

  friend PolyJet operator+(const PolyJet& a, const PolyJet& b) {
    PolyJet r = a;
    if (r.c.size() < b.c.size()) r.c.resize(b.c.size(), Jet<K>(a.alg));
    for (size_t i = 0; i < b.c.size(); ++i) r.c[i] += b.c[i];
    return r;
  }
  friend PolyJet operator-(const PolyJet& a, const PolyJet& b) {
    PolyJet r = a;
    if (r.c.size() < b.c.size()) r.c.resize(b.c.size(), Jet<K>(a.alg));
    for (size_t i = 0; i < b.c.size(); ++i) r.c[i] -= b.c[i];
    return r;
  }
  friend PolyJet operator*(const PolyJet& a, const PolyJet& b) {
    PolyJet r(a.alg);
    if (a.is_zero() || b.is_zero()) {
      r.c.push_back(Jet<K>(a.alg));
      return r;
    }
    r.c.assign(a.c.size() + b.c.size() - 1, Jet<K>(a.alg));
    for (size_t i = 0; i < a.c.size(); ++i) {
      if (a.c[i].is_zero()) continue;
      for (size_t j = 0; j < b.c.size(); ++j) {
        if (b.c[j].is_zero()) continue;
        r.c[i + j] += a.c[i] * b.c[j];
      }
    }
    r.trim();
    return r;
  }

  // substitution p(q(z))
  PolyJet compose(const PolyJet& q) const {
    PolyJet r = PolyJet::constant(alg, Jet<K>(alg));
    for (int i = static_cast<int>(c.size()) - 1; i >= 0; --i) {
      r = r * q;
      r = r + PolyJet::constant(alg, c[static_cast<size_t>(i)]);
    }
    r.trim();
    return r;
  }
};

// Polynomial reparametrization of H with identity body; coefficients above
// the linear-in-z identity term are nilpotent. Acts as the cusp coordinate
// chart for a deformed parabolic flow.
template <class K>
struct FrameMap {
  PolyJet<K> poly;  // the map itself

  AlgebraPtr alg() const { return poly.alg; }
  Jet<K> apply(const Jet<K>& z) const { return poly.eval(z); }
  PolyJet<K> derivative() const { return poly.derivative(); }

  static FrameMap identity(AlgebraPtr a) { return FrameMap{PolyJet<K>::ident(a)}; }

  bool body_is_identity() const {
    for (size_t i = 0; i < poly.c.size(); ++i) {
      const K want = (i == 1) ? ScalarTraits<K>::one() : ScalarTraits<K>::zero();
      if (!ScalarTraits<K>::is_zero(poly.c[i].body() - want)) return false;
    }
    return poly.c.size() >= 2;
  }

  // z -> Omega(z + a) for nilpotent a
  FrameMap translate(const Jet<K>& a) const {
    require(a.body_is_zero(), "frame translation offset must be nilpotent");
    PolyJet<K> shift = PolyJet<K>::ident(poly.alg);
    shift.c[0] = a;
    return FrameMap{poly.compose(shift)};
  }

  // the inverse map as a polynomial (exists since the non-identity part is
  // nilpotent); fixed-point iteration w -> u - eta(w)
  FrameMap inverse() const {
    AlgebraPtr a = poly.alg;
    PolyJet<K> eta = poly - PolyJet<K>::ident(a);  // nilpotent coefficients
    PolyJet<K> w = PolyJet<K>::ident(a);
    for (int i = 0; i < a->N; ++i) {
      w = PolyJet<K>::ident(a) - eta.compose(w);
    }
    return FrameMap{w};
  }
};

// The canonical frame for a deformed parabolic element exp(chi) with
// chi^# = chi_0: evaluate exp(t chi) (terminating polynomial matrix), apply
// it to i, substitute t -> z - i. The body is the identity and the flow
// identity Omega(z + t) = exp(t chi) Omega(z) holds as a polynomial identity.
template <class K>
FrameMap<K> frame_from_chi(const Mat2<K>& chi) {
  static_assert(ScalarTraits<K>::complex_field, "frame construction needs complex scalars");
  AlgebraPtr alg = chi.alg();
  require(ScalarTraits<K>::is_zero(chi.a().body()) && ScalarTraits<K>::is_zero(chi.c().body()) &&
              ScalarTraits<K>::is_zero(chi.d().body()) &&
              ScalarTraits<K>::is_zero(chi.b().body() - ScalarTraits<K>::one()),
          "chi body must be [[0,1],[0,0]]");
  require(trace(chi).is_zero(), "chi must be traceless");

  // exp(t chi) as a polynomial matrix in t; chi is nilpotent as a jet matrix
  std::array<PolyJet<K>, 4> E;
  for (auto& p : E) p = PolyJet<K>::constant(alg, Jet<K>(alg));
  E[0].c[0] = Jet<K>::unit(alg);
  E[3].c[0] = Jet<K>::unit(alg);
  Mat2<K> p = Mat2<K>::identity(alg);
  int cap = 2 * alg->N + 2;
  for (int m = 1; m <= cap + 1; ++m) {
    p = p * chi;
    if (p.is_zero()) break;
    require(m <= cap, "chi is not nilpotent as a jet matrix");
    Rat invf = Rat(1) / factorial_rat(m);
    for (int ent = 0; ent < 4; ++ent) {
      auto& poly = E[static_cast<size_t>(ent)];
      if (static_cast<int>(poly.c.size()) <= m) poly.c.resize(static_cast<size_t>(m + 1), Jet<K>(alg));
      poly.c[static_cast<size_t>(m)] += p.e[static_cast<size_t>(ent)] * ScalarTraits<K>::from_rat(invf);
    }
  }

  // omega(t) = E(t) . i  (Möbius with polynomial entries; denominator has body 1)
  Jet<K> iu = Jet<K>::constant(alg, unit_i<K>());
  PolyJet<K> num = E[0] * PolyJet<K>::constant(alg, iu) + E[1];
  PolyJet<K> den = E[2] * PolyJet<K>::constant(alg, iu) + E[3];
  PolyJet<K> one = PolyJet<K>::constant(alg, Jet<K>::unit(alg));
  PolyJet<K> eta = den - one;  // all coefficients nilpotent
  PolyJet<K> deninv = one;
  PolyJet<K> pw = one;
  for (int n = 1; n < alg->N; ++n) {
    pw = pw * eta;
    if (pw.is_zero()) break;
    if (n % 2 == 1) deninv = deninv - pw; else deninv = deninv + pw;
  }
  PolyJet<K> omega = num * deninv;

  // Omega(z) = omega(z - i)
  PolyJet<K> shift = PolyJet<K>::ident(alg);
  shift.c[0] = Jet<K>::constant(alg, -unit_i<K>());
  FrameMap<K> f{omega.compose(shift)};
  require(f.body_is_identity(), "frame body is not the identity");
  require(f.poly.deg() <= 2 * alg->N - 1, "frame degree bound violated");
  return f;
}

// Coefficient grid of the two-variable defect
//   Omega(z+t) * (C(t) Omega(z) + D(t)) - (A(t) Omega(z) + B(t)),
// which vanishes identically iff the flow intertwining identity holds.
// Returns the maximum coefficient norm (0 when exact).
template <class K>
double frame_intertwine_defect(const FrameMap<K>& f, const Mat2<K>& chi) {
  AlgebraPtr alg = f.alg();
  // bivariate grid: vector over z-powers of polynomials in t
  using Grid = std::vector<PolyJet<K>>;
  auto zero_grid = [&](int nz) { return Grid(static_cast<size_t>(nz), PolyJet<K>::constant(alg, Jet<K>(alg))); };
  int dz = f.poly.deg() + 1;

  // exp(t chi) polynomial matrix (again; cheap)
  std::array<PolyJet<K>, 4> E;
  for (auto& p : E) p = PolyJet<K>::constant(alg, Jet<K>(alg));
  E[0].c[0] = Jet<K>::unit(alg);
  E[3].c[0] = Jet<K>::unit(alg);
  Mat2<K> p = Mat2<K>::identity(alg);
  for (int m = 1; m <= 2 * alg->N + 2; ++m) {
    p = p * chi;
    if (p.is_zero()) break;
    Rat invf = Rat(1) / factorial_rat(m);
    for (int ent = 0; ent < 4; ++ent) {
      auto& poly = E[static_cast<size_t>(ent)];
      if (static_cast<int>(poly.c.size()) <= m) poly.c.resize(static_cast<size_t>(m + 1), Jet<K>(alg));
      poly.c[static_cast<size_t>(m)] += p.e[static_cast<size_t>(ent)] * ScalarTraits<K>::from_rat(invf);
    }
  }

  // LHS1 = Omega(z+t) expanded: sum_m c_m (z+t)^m -> grid[zpow] = poly in t
  Grid lhs = zero_grid(dz);
  {
    // (z+t)^m by iterated multiplication; represent as grid and multiply by (z+t)
    Grid zp = zero_grid(dz);
    zp[0] = PolyJet<K>::constant(alg, Jet<K>::unit(alg));  // (z+t)^0 = 1
    for (int m = 0; m < static_cast<int>(f.poly.c.size()); ++m) {
      const Jet<K>& cm = f.poly.c[static_cast<size_t>(m)];
      if (!cm.is_zero()) {
        for (int zi = 0; zi < dz; ++zi) lhs[static_cast<size_t>(zi)] = lhs[static_cast<size_t>(zi)] + zp[static_cast<size_t>(zi)] * PolyJet<K>::constant(alg, cm);
      }
      if (m + 1 < static_cast<int>(f.poly.c.size())) {
        Grid nz = zero_grid(dz);
        for (int zi = 0; zi < dz; ++zi) {
          if (zp[static_cast<size_t>(zi)].is_zero()) continue;
          // multiply by t
          PolyJet<K> bt = zp[static_cast<size_t>(zi)];
          bt.c.insert(bt.c.begin(), Jet<K>(alg));
          nz[static_cast<size_t>(zi)] = nz[static_cast<size_t>(zi)] + bt;
          // multiply by z
          if (zi + 1 < dz) nz[static_cast<size_t>(zi + 1)] = nz[static_cast<size_t>(zi + 1)] + zp[static_cast<size_t>(zi)];
        }
        zp = std::move(nz);
      }
    }
  }

  // Omega(z) as a grid (poly in z, constant in t)
  auto omega_grid = zero_grid(dz);
  for (int zi = 0; zi < dz && zi < static_cast<int>(f.poly.c.size()); ++zi)
    omega_grid[static_cast<size_t>(zi)] = PolyJet<K>::constant(alg, f.poly.c[static_cast<size_t>(zi)]);

  auto scale_grid = [&](const Grid& g, const PolyJet<K>& tpoly) {
    Grid r = zero_grid(static_cast<int>(g.size()));
    for (size_t zi = 0; zi < g.size(); ++zi) r[zi] = g[zi] * tpoly;
    return r;
  };
  auto mul_grid = [&](const Grid& a, const Grid& b) {
    Grid r(a.size() + b.size() - 1, PolyJet<K>::constant(alg, Jet<K>(alg)));
    for (size_t i = 0; i < a.size(); ++i)
      for (size_t j = 0; j < b.size(); ++j) r[i + j] = r[i + j] + a[i] * b[j];
    return r;
  };

  Grid denom = scale_grid(omega_grid, E[2]);
  denom[0] = denom[0] + E[3];
  Grid numer = scale_grid(omega_grid, E[0]);
  numer[0] = numer[0] + E[1];

  Grid defect = mul_grid(lhs, denom);
  for (size_t zi = 0; zi < numer.size(); ++zi) {
    if (zi >= defect.size()) defect.resize(zi + 1, PolyJet<K>::constant(alg, Jet<K>(alg)));
    defect[zi] = defect[zi] - numer[zi];
  }

  double worst = 0;
  for (const auto& row : defect)
    for (const auto& cf : row.c) worst = std::max(worst, cf.norm());
  return worst;
}

// f|_Omega(z) = f(Omega z) * Omega'(z)^{k/2}; the derivative has body 1, so
// the half-integer power is branch free.
template <class K>
Jet<K> frame_slash(const Evaluator<K>& f, const FrameMap<K>& om, int k, const Jet<K>& z) {
  Jet<K> w = om.apply(z);
  Jet<K> dp = om.derivative().eval(z);
  return f(w) * jet_pow(dp, Rat(k, 2));
}

using EvalC = Evaluator<std::complex<double>>;
using FrameC = FrameMap<std::complex<double>>;
using PolyC = PolyJet<std::complex<double>>;

struct CuspValueOptions {
  double height = 2.0;
  int samples = 64;
  double periodicity_tol = 1e-8;
};

// Constant Fourier coefficient of (f|_g)|_Omega on the line Im z = height:
// the value of f at the cusp. Detects non-periodicity above tolerance.
JetC cusp_value(const EvalC& f, const MatC& transporter, const FrameC& om, int k,
                const CuspValueOptions& opt = {});

}  // namespace pforms
