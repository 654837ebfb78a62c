#pragma once

// 2x2 matrices of jets: deformed group elements (det 1, body in SL(2,R)) and
// traceless Lie-algebra vectors. Includes the terminating matrix exponential,
// the order-by-order logarithm at near-parabolic elements, body
// classification, elliptic fixed points, the transport-to-i matrix and the
// conjugation collapse identity.

#include <array>

#include "pforms/extfield.hpp"
#include "pforms/jet.hpp"

namespace pforms {

using JetC = Jet<std::complex<double>>;

template <class K>
struct Mat2 {
  std::array<Jet<K>, 4> e;  // row major: [a b; c d]

  Mat2() = default;
  explicit Mat2(AlgebraPtr alg)
      : e{Jet<K>(alg), Jet<K>(alg), Jet<K>(alg), Jet<K>(alg)} {}
  Mat2(Jet<K> a, Jet<K> b, Jet<K> c, Jet<K> d) : e{std::move(a), std::move(b), std::move(c), std::move(d)} {}

  static Mat2 identity(AlgebraPtr alg) {
    Mat2 r(alg);
    r.e[0] = Jet<K>::unit(alg);
    r.e[3] = Jet<K>::unit(alg);
    return r;
  }
  static Mat2 scalar(AlgebraPtr alg, const K& s) {
    Mat2 r(alg);
    r.e[0] = Jet<K>::constant(alg, s);
    r.e[3] = r.e[0];
    return r;
  }
  // constant classical matrix [[a,b],[c,d]] embedded as jets
  static Mat2 constant(AlgebraPtr alg, const K& a, const K& b, const K& c, const K& d) {
    return Mat2(Jet<K>::constant(alg, a), Jet<K>::constant(alg, b),
                Jet<K>::constant(alg, c), Jet<K>::constant(alg, d));
  }

  AlgebraPtr alg() const { return e[0].alg; }
  const Jet<K>& a() const { return e[0]; }
  const Jet<K>& b() const { return e[1]; }
  const Jet<K>& c() const { return e[2]; }
  const Jet<K>& d() const { return e[3]; }

  bool is_zero() const { return e[0].is_zero() && e[1].is_zero() && e[2].is_zero() && e[3].is_zero(); }
  bool equals_body() const {
    return e[0].equals_body() && e[1].equals_body() && e[2].equals_body() && e[3].equals_body();
  }
  double norm() const {
    return std::max(std::max(e[0].norm(), e[1].norm()), std::max(e[2].norm(), e[3].norm()));
  }

  friend Mat2 operator*(const Mat2& x, const Mat2& y) {
    return Mat2(x.e[0] * y.e[0] + x.e[1] * y.e[2], x.e[0] * y.e[1] + x.e[1] * y.e[3],
                x.e[2] * y.e[0] + x.e[3] * y.e[2], x.e[2] * y.e[1] + x.e[3] * y.e[3]);
  }
  friend Mat2 operator+(const Mat2& x, const Mat2& y) {
    return Mat2(x.e[0] + y.e[0], x.e[1] + y.e[1], x.e[2] + y.e[2], x.e[3] + y.e[3]);
  }
  friend Mat2 operator-(const Mat2& x, const Mat2& y) {
    return Mat2(x.e[0] - y.e[0], x.e[1] - y.e[1], x.e[2] - y.e[2], x.e[3] - y.e[3]);
  }
  friend Mat2 operator-(const Mat2& x) { return Mat2(-x.e[0], -x.e[1], -x.e[2], -x.e[3]); }
  friend Mat2 operator*(const Mat2& x, const Jet<K>& s) {
    return Mat2(x.e[0] * s, x.e[1] * s, x.e[2] * s, x.e[3] * s);
  }
  friend bool operator==(const Mat2& x, const Mat2& y) { return x.e == y.e; }
  friend bool operator!=(const Mat2& x, const Mat2& y) { return !(x == y); }
};

template <class K>
Jet<K> det(const Mat2<K>& m) {
  return m.e[0] * m.e[3] - m.e[1] * m.e[2];
}

template <class K>
Jet<K> trace(const Mat2<K>& m) {
  return m.e[0] + m.e[3];
}

// adjugate divided by determinant
template <class K>
Mat2<K> inverse(const Mat2<K>& m) {
  Jet<K> dinv = jet_invert(det(m));
  return Mat2<K>(m.e[3] * dinv, -(m.e[1] * dinv), -(m.e[2] * dinv), m.e[0] * dinv);
}

template <class K>
Mat2<K> mat_pow(const Mat2<K>& m, long n) {
  Mat2<K> base = n >= 0 ? m : inverse(m);
  long k = n >= 0 ? n : -n;
  Mat2<K> acc = Mat2<K>::identity(m.alg());
  Mat2<K> p = base;
  while (k) {
    if (k & 1) acc = acc * p;
    k >>= 1;
    if (k) p = p * p;
  }
  return acc;
}

// Terminating exponential for matrices that are nilpotent as jet matrices
// (nilpotent body forces X^{2N} = 0). Floating mode falls back to scaling
// and squaring for general arguments.
template <class K>
Mat2<K> mat_exp(const Mat2<K>& x) {
  AlgebraPtr alg = x.alg();
  int cap = 2 * alg->N + 2;
  Mat2<K> acc = Mat2<K>::identity(alg);
  Mat2<K> term = Mat2<K>::identity(alg);
  bool terminated = false;
  for (int i = 1; i <= cap; ++i) {
    term = term * x;
    if (term.is_zero()) { terminated = true; break; }
    Jet<K> coef = Jet<K>::constant(alg, ScalarTraits<K>::from_rat(Rat(1) / factorial_rat(i)));
    acc = acc + term * coef;
  }
  if (terminated) return acc;
  if constexpr (ScalarTraits<K>::exact) {
    throw math_error("exact-mode matrix exp needs a nilpotent jet matrix");
  } else {
    // scaling and squaring, series to machine precision
    int s = 0;
    double n = x.norm();
    while (n > 0.25 && s < 40) { n /= 2; ++s; }
    K half = ScalarTraits<K>::one();
    for (int i = 0; i < s; ++i) half *= K(0.5);
    Mat2<K> y(alg);
    for (int i = 0; i < 4; ++i) y.e[static_cast<size_t>(i)] = x.e[static_cast<size_t>(i)] * half;
    Mat2<K> r = Mat2<K>::identity(alg);
    Mat2<K> t = Mat2<K>::identity(alg);
    for (int i = 1; i <= 40; ++i) {
      t = t * y;
      Jet<K> coef = Jet<K>::constant(alg, ScalarTraits<K>::from_rat(Rat(1) / factorial_rat(i)));
      Mat2<K> add = t * coef;
      r = r + add;
      if (add.norm() < 1e-18 * std::max(1.0, r.norm())) break;
    }
    for (int i = 0; i < s; ++i) r = r * r;
    return r;
  }
}

enum class BodyClass { Elliptic, Parabolic, Hyperbolic, Central };

// Classification of the classical body by |trace|; +-identity is flagged central.
template <class K>
BodyClass classify_body(const Mat2<K>& g) {
  auto tr = ScalarTraits<K>::approx(trace(g).body());
  require(std::abs(tr.imag()) < 1e-12, "classify_body needs a real-body matrix");
  double t = tr.real();
  auto b = ScalarTraits<K>::approx(g.b().body());
  auto c = ScalarTraits<K>::approx(g.c().body());
  auto a = ScalarTraits<K>::approx(g.a().body());
  if (std::abs(t) > 2) return BodyClass::Hyperbolic;
  if (std::abs(t) < 2) return BodyClass::Elliptic;
  bool offdiag_zero = std::abs(b) == 0.0 && std::abs(c) == 0.0;
  bool diag_pm1 = std::abs(std::abs(a.real()) - 1.0) == 0.0;
  if constexpr (ScalarTraits<K>::exact) {
    if (offdiag_zero && diag_pm1) return BodyClass::Central;
  } else {
    if (std::abs(b) < 1e-14 && std::abs(c) < 1e-14) return BodyClass::Central;
  }
  return BodyClass::Parabolic;
}

// chi_0 and g_0 = exp(chi_0): the infinitesimal and unit upper-triangular
// parabolic generators.
template <class K>
Mat2<K> parab_chi0(AlgebraPtr alg) {
  Mat2<K> r(alg);
  r.e[1] = Jet<K>::unit(alg);
  return r;
}
template <class K>
Mat2<K> parab_g0(AlgebraPtr alg) {
  Mat2<K> r = Mat2<K>::identity(alg);
  r.e[1] = Jet<K>::unit(alg);
  return r;
}

namespace detail {

// Solve A x = rhs (A given by columns) by Gauss-Jordan with full pivoting.
// Free variables are set to zero; inconsistency is left for the caller's
// closure check.
template <class K>
std::vector<K> solve_small(const std::vector<std::vector<K>>& cols, std::vector<K> b) {
  size_t rows = b.size(), nc = cols.size();
  std::vector<std::vector<K>> A(rows, std::vector<K>(nc));
  for (size_t c = 0; c < nc; ++c)
    for (size_t r = 0; r < rows; ++r) A[r][c] = cols[c][r];

  std::vector<bool> col_used(nc, false);
  std::vector<std::pair<size_t, size_t>> pivots;  // (row, col)
  size_t r0 = 0;
  while (r0 < rows && pivots.size() < nc) {
    double best = 0;
    size_t pr = 0, pc = 0;
    for (size_t r = r0; r < rows; ++r)
      for (size_t c = 0; c < nc; ++c) {
        if (col_used[c]) continue;
        double m = ScalarTraits<K>::mag(A[r][c]);
        if (m > best) { best = m; pr = r; pc = c; }
      }
    if (best == 0) break;
    std::swap(A[r0], A[pr]);
    std::swap(b[r0], b[pr]);
    col_used[pc] = true;
    pivots.emplace_back(r0, pc);
    K p = A[r0][pc];
    for (size_t r = 0; r < rows; ++r) {
      if (r == r0 || ScalarTraits<K>::is_zero(A[r][pc])) continue;
      K f = A[r][pc] / p;
      for (size_t c = 0; c < nc; ++c) A[r][c] -= f * A[r0][c];
      A[r][pc] = ScalarTraits<K>::zero();
      b[r] -= f * b[r0];
    }
    ++r0;
  }
  std::vector<K> x(nc, ScalarTraits<K>::zero());
  for (auto [r, c] : pivots) x[c] = b[r] / A[r][c];
  return x;
}

}  // namespace detail

// The unique traceless chi with body chi_0 and exp(chi) = g, for g with body
// g_0. Solved order by order through the nilpotent filtration; each grade is
// a linear solve against the exact differential of exp at chi_0.
template <class K>
Mat2<K> mat_log_near_parabolic(const Mat2<K>& g) {
  AlgebraPtr alg = g.alg();
  require(g.a().body() == ScalarTraits<K>::one() && g.d().body() == ScalarTraits<K>::one() &&
              g.b().body() == ScalarTraits<K>::one() && ScalarTraits<K>::is_zero(g.c().body()),
          "mat_log_near_parabolic needs body [[1,1],[0,1]]");
  Mat2<K> chi0 = parab_chi0<K>(alg);
  Mat2<K> chi = chi0;

  // sl2 basis H, E, F
  std::array<Mat2<K>, 3> basis = {Mat2<K>(alg), Mat2<K>(alg), Mat2<K>(alg)};
  basis[0].e[0] = Jet<K>::unit(alg);
  basis[0].e[3] = -Jet<K>::unit(alg);
  basis[1].e[1] = Jet<K>::unit(alg);
  basis[2].e[2] = Jet<K>::unit(alg);

  // L(delta) = dexp at chi_0 applied to delta: delta + (chi0 d + d chi0)/2 + chi0 d chi0 / 6
  auto dexp0 = [&](const Mat2<K>& d) {
    Jet<K> half = Jet<K>::constant(alg, ScalarTraits<K>::from_rat(rat_of(1, 2)));
    Jet<K> sixth = Jet<K>::constant(alg, ScalarTraits<K>::from_rat(rat_of(1, 6)));
    return d + (chi0 * d + d * chi0) * half + (chi0 * d * chi0) * sixth;
  };

  int maxg = alg->N - 1;
  for (int grade = 1; grade <= maxg; ++grade) {
    Mat2<K> defect = g - mat_exp(chi);
    if (defect.is_zero()) break;
    // collect the grade components: solve per ideal basis element of this grade
    for (int bidx = 1; bidx < alg->dim(); ++bidx) {
      if (alg->grade[static_cast<size_t>(bidx)] != grade) continue;
      // 4 equations (matrix entries), 3 unknowns (sl2 coordinates), scalar K
      std::vector<std::vector<K>> cols(3, std::vector<K>(4));
      for (int bcol = 0; bcol < 3; ++bcol) {
        Mat2<K> img = dexp0(basis[static_cast<size_t>(bcol)]);
        for (int ent = 0; ent < 4; ++ent) cols[static_cast<size_t>(bcol)][static_cast<size_t>(ent)] = img.e[static_cast<size_t>(ent)].body();
      }
      std::vector<K> rhs(4);
      for (int ent = 0; ent < 4; ++ent) rhs[static_cast<size_t>(ent)] = defect.e[static_cast<size_t>(ent)].c[static_cast<size_t>(bidx)];
      auto x = detail::solve_small<K>(cols, rhs);
      for (int bcol = 0; bcol < 3; ++bcol) {
        Jet<K> coef(alg);
        coef.c[static_cast<size_t>(bidx)] = x[static_cast<size_t>(bcol)];
        chi = chi + basis[static_cast<size_t>(bcol)] * coef;
      }
    }
  }
  if constexpr (ScalarTraits<K>::exact) {
    require((g - mat_exp(chi)).is_zero(), "log lifting did not close (non-graded algebra?)");
    require(trace(chi).is_zero(), "log lifting produced a trace");
  } else {
    require((g - mat_exp(chi)).norm() < 1e-10 * std::max(1.0, g.norm()), "log lifting did not converge");
  }
  return chi;
}

// Fixed point of an elliptic jet matrix in the upper half plane: the unique
// jet root of c z^2 + (d - a) z - b with the given classical root as body.
// K must be a complex field; in exact mode the supplied body root must solve
// the body quadratic exactly.
template <class K>
Jet<K> elliptic_fixed_point(const Mat2<K>& g, const K& body_root) {
  static_assert(ScalarTraits<K>::complex_field, "elliptic fixed points live in C");
  AlgebraPtr alg = g.alg();
  require(classify_body(g) == BodyClass::Elliptic, "matrix body is not elliptic");
  require(ScalarTraits<K>::approx(body_root).imag() > 0, "body root must lie in the upper half plane");

  Jet<K> z = Jet<K>::constant(alg, body_root);
  Jet<K> dma = g.d() - g.a();
  auto q = [&](const Jet<K>& w) { return g.c() * w * w + dma * w - g.b(); };
  auto qp = [&](const Jet<K>& w) { return g.c() * w * Jet<K>::constant(alg, ScalarTraits<K>::from_rat(Rat(2))) + dma; };
  if constexpr (ScalarTraits<K>::exact) {
    require(ScalarTraits<K>::is_zero(q(z).body()), "body root does not solve the body quadratic");
  } else {
    require(ScalarTraits<K>::mag(q(z).body()) < 1e-9 * std::max(1.0, g.norm()), "body root does not solve the body quadratic");
  }
  int steps = 2;
  while ((1 << steps) < alg->N + 1) ++steps;
  for (int i = 0; i <= steps; ++i) z = z - q(z) / qp(z);
  if constexpr (ScalarTraits<K>::exact) {
    require(q(z).is_zero(), "fixed point residual not exactly zero");
  } else {
    require(q(z).norm() < 1e-9 * std::max(1.0, g.norm() * z.norm()), "fixed point did not converge");
  }
  return z;
}

// Floating-mode convenience: computes the classical upper-half-plane root.
inline Jet<std::complex<double>> elliptic_fixed_point(const Mat2<std::complex<double>>& g) {
  std::complex<double> a = g.a().body(), b = g.b().body(), c = g.c().body(), d = g.d().body();
  std::complex<double> disc = (d - a) * (d - a) + 4.0 * b * c;
  std::complex<double> sq = std::sqrt(disc);
  std::complex<double> r1 = ((a - d) + sq) / (2.0 * c);
  std::complex<double> r2 = ((a - d) - sq) / (2.0 * c);
  return elliptic_fixed_point(g, r1.imag() > 0 ? r1 : r2);
}

// helper: w / (2i)
inline CRat div_2i(const CRat& w) { return CRat(w.im / 2, -w.re / 2); }
inline Ext div_2i(const Ext& w) {
  Ext r = w;
  for (auto& v : r.c) v = CRat(v.im / 2, -v.re / 2);
  return r;
}
inline std::complex<double> div_2i(const std::complex<double>& w) {
  return {w.imag() / 2.0, -w.real() / 2.0};
}

// real/imaginary parts of a complex jet, coefficient-wise
template <class K>
Jet<K> jet_re(const Jet<K>& z) {
  Jet<K> r = z;
  K half = ScalarTraits<K>::from_rat(rat_of(1, 2));
  for (auto& x : r.c) x = (x + ScalarTraits<K>::conj(x)) * half;
  return r;
}
template <class K>
Jet<K> jet_im(const Jet<K>& z) {
  Jet<K> r = z;
  for (auto& x : r.c) x = div_2i(x - ScalarTraits<K>::conj(x));
  return r;
}

// The transport phi(z) = [[sqrt(y), x / sqrt(y)], [0, 1 / sqrt(y)]] with
// x = Re z, y = Im z taken as jets; sqrt_y_branch designates the classical
// square root of Im(body z).
template <class K>
Mat2<K> transport_to_i(const Jet<K>& z, const K& sqrt_y_branch) {
  static_assert(ScalarTraits<K>::complex_field);
  AlgebraPtr alg = z.alg;
  Jet<K> x = jet_re(z);
  Jet<K> y = jet_im(z);
  require(ScalarTraits<K>::approx(y.body()).real() > 0, "point not in the upper half plane");
  Jet<K> s = jet_nth_root(y, 2, sqrt_y_branch);
  Jet<K> sinv = jet_invert(s);
  Mat2<K> r(alg);
  r.e[0] = s;
  r.e[1] = x * sinv;
  r.e[2] = Jet<K>(alg);
  r.e[3] = sinv;
  return r;
}

inline Mat2<std::complex<double>> transport_to_i(const Jet<std::complex<double>>& z) {
  double y0 = z.body().imag();
  require(y0 > 0, "point not in the upper half plane");
  return transport_to_i(z, std::complex<double>(std::sqrt(y0), 0.0));
}

// The collapse identity: for gamma with elliptic finite-order body, the
// transported conjugate t^{-1} gamma t at the fixed point equals its own
// body. Asserts the identity (exactly in exact mode) and returns the
// collapsed matrix.
template <class K>
Mat2<K> conjugation_collapse(const Mat2<K>& gamma, int body_order, const K& fixed_body_root,
                             const K& sqrt_y_branch) {
  require(body_order >= 1, "order must be positive");
  Jet<K> z0 = elliptic_fixed_point(gamma, fixed_body_root);
  Mat2<K> t = transport_to_i(z0, sqrt_y_branch);
  Mat2<K> k = inverse(t) * gamma * t;
  Mat2<K> pw = mat_pow(k, 2L * body_order);
  if constexpr (ScalarTraits<K>::exact) {
    require(pw.equals_body(), "collapse precondition failed: (t^-1 g t)^(2n) not classical");
    require(k.equals_body(), "conjugation collapse failed: nilpotent part survived");
  } else {
    require(k.norm() < 1e30, "overflow");
    Mat2<K> nil = k;
    for (auto& ent : nil.e) ent = ent.nil_part();
    require(nil.norm() < 1e-8 * std::max(1.0, k.norm()), "conjugation collapse failed");
  }
  return k;
}

inline Mat2<std::complex<double>> conjugation_collapse(const Mat2<std::complex<double>>& gamma, int body_order) {
  Jet<std::complex<double>> z0 = elliptic_fixed_point(gamma);
  return conjugation_collapse(gamma, body_order, z0.body(),
                              std::complex<double>(std::sqrt(z0.body().imag()), 0.0));
}

using MatC = Mat2<std::complex<double>>;

}  // namespace pforms
