#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "pforms/mobius.hpp"
#include "pforms/util.hpp"

using namespace pforms;

namespace {

MatC classical(AlgebraPtr alg, double a, double b, double c, double d) {
  return MatC::constant(alg, {a, 0}, {b, 0}, {c, 0}, {d, 0});
}

Mat2<CRat> classical_q(AlgebraPtr alg, long a, long b, long c, long d) {
  return Mat2<CRat>::constant(alg, CRat(rat_of(a)), CRat(rat_of(b)), CRat(rat_of(c)), CRat(rat_of(d)));
}

Mat2<CRat> random_body_identity(Rng& rng, const AlgebraPtr& alg) {
  // exp of a random real traceless nilpotent-coefficient matrix: body 1, det 1
  Mat2<CRat> x(alg);
  for (int ent : {0, 1, 2}) {
    JetCQ j(alg);
    for (size_t i = 1; i < j.c.size(); ++i)
      j.c[i] = CRat(rat_of(rng.int_in(-2, 2), rng.int_in(1, 3)));
    x.e[static_cast<size_t>(ent)] = j;
  }
  x.e[3] = -x.e[0];
  return mat_exp(x);
}

}  // namespace

TEST_CASE("matrix group operations") {
  auto A = algebra_trunc_poly(1, 3);
  auto one = JetCQ::unit(A);
  auto eps = JetCQ::basis(A, 1);
  Mat2<CRat> u = Mat2<CRat>::identity(A);
  u.e[1] = eps;
  Mat2<CRat> v = Mat2<CRat>::identity(A);
  v.e[1] = -eps;
  CHECK((u * v) == Mat2<CRat>::identity(A));

  // adjugate inverse of a det-1 matrix
  Mat2<CRat> g = classical_q(A, 2, 1, 1, 1);
  auto gi = inverse(g);
  CHECK(gi.a() == JetCQ::constant(A, CRat(rat_of(1))));
  CHECK(gi.b() == -one);
  CHECK((g * gi) == Mat2<CRat>::identity(A));

  // trace(S*T) = -1
  auto S = classical_q(A, 0, 1, -1, 0);
  auto T = classical_q(A, 1, 1, 0, 1);
  CHECK(trace(S * T) == JetCQ::constant(A, CRat(rat_of(-1))));

  // det multiplicativity on random jet matrices
  Rng rng(5);
  for (int t = 0; t < 20; ++t) {
    auto x = random_body_identity(rng, A) * classical_q(A, 1, 1, 0, 1);
    auto y = random_body_identity(rng, A) * classical_q(A, 0, 1, -1, 0);
    CHECK(det(x * y) == det(x) * det(y));
  }
}

TEST_CASE("matrix exponential") {
  auto A = algebra_trunc_poly(1, 3);
  // exp(a [[0,1],[0,0]]) = [[1,a],[0,1]] for any jet a
  JetCQ a(A);
  a.c = {CRat(rat_of(2)), CRat(rat_of(1, 3)), CRat(rat_of(-1))};
  Mat2<CRat> x(A);
  x.e[1] = a;
  auto e = mat_exp(x);
  CHECK(e.a() == JetCQ::unit(A));
  CHECK(e.b() == a);
  CHECK(e.c().is_zero());
  CHECK(det(e) == JetCQ::unit(A));

  // exp(0) = 1
  CHECK(mat_exp(Mat2<CRat>(A)) == Mat2<CRat>::identity(A));

  // exp(eps diag(1,-1)) = diag(1+eps+eps^2/2, 1-eps+eps^2/2)
  Mat2<CRat> d(A);
  auto eps = JetCQ::basis(A, 1);
  d.e[0] = eps;
  d.e[3] = -eps;
  auto ed = mat_exp(d);
  JetCQ up(A), dn(A);
  up.c = {CRat(rat_of(1)), CRat(rat_of(1)), CRat(rat_of(1, 2))};
  dn.c = {CRat(rat_of(1)), CRat(rat_of(-1)), CRat(rat_of(1, 2))};
  CHECK(ed.a() == up);
  CHECK(ed.d() == dn);
  CHECK(ed.b().is_zero());
  CHECK(det(ed) == JetCQ::unit(A));

  // non-nilpotent exact argument rejected
  CHECK_THROWS(mat_exp(classical_q(A, 1, 0, 0, -1)));

  // floating mode handles general arguments
  auto Af = algebra_trunc_poly(1, 2);
  MatC xf(Af);
  xf.e[0] = JetC::constant(Af, {0.3, 0});
  xf.e[3] = JetC::constant(Af, {-0.3, 0});
  auto ef = mat_exp(xf);
  CHECK(ef.a().body().real() == doctest::Approx(std::exp(0.3)));
  CHECK(ef.d().body().real() == doctest::Approx(std::exp(-0.3)));
}

TEST_CASE("log lifting at near-parabolic elements") {
  auto A = algebra_trunc_poly(1, 3);
  // body case: chi = chi_0
  auto g0 = parab_g0<CRat>(A);
  auto chi = mat_log_near_parabolic(g0);
  CHECK(chi == parab_chi0<CRat>(A));

  // round trip: g = exp(chi_0 + eps diag(1,-1))
  Mat2<CRat> x = parab_chi0<CRat>(A);
  auto eps = JetCQ::basis(A, 1);
  x.e[0] += eps;
  x.e[3] -= eps;
  auto g = mat_exp(x);
  auto back = mat_log_near_parabolic(g);
  CHECK(back == x);

  // g = [[1, 1+eps],[0,1]]: verified by round trip
  Mat2<CRat> h = Mat2<CRat>::identity(A);
  h.e[1] = JetCQ::unit(A) + eps;
  auto chih = mat_log_near_parabolic(h);
  CHECK(mat_exp(chih) == h);
  CHECK(trace(chih).is_zero());

  // random round trips chi -> exp -> log over a two-parameter algebra
  auto B = algebra_trunc_poly(2, 3);
  Rng rng(9);
  for (int t = 0; t < 10; ++t) {
    Mat2<CRat> c0 = parab_chi0<CRat>(B);
    for (int ent : {0, 1, 2}) {
      JetCQ j(B);
      for (size_t i = 1; i < j.c.size(); ++i) j.c[i] = CRat(rat_of(rng.int_in(-2, 2), rng.int_in(1, 2)));
      c0.e[static_cast<size_t>(ent)] += j;
    }
    c0.e[3] = -c0.e[0];
    auto gg = mat_exp(c0);
    CHECK(mat_log_near_parabolic(gg) == c0);
  }
}

TEST_CASE("body classification") {
  auto A = algebra_trunc_poly(1, 2);
  CHECK(classify_body(classical_q(A, 0, 1, -1, 0)) == BodyClass::Elliptic);   // S
  CHECK(classify_body(classical_q(A, 1, 1, 0, 1)) == BodyClass::Parabolic);   // T
  CHECK(classify_body(classical_q(A, 2, 1, 1, 1)) == BodyClass::Hyperbolic);  // trace 3
  CHECK(classify_body(classical_q(A, -1, 0, 0, -1)) == BodyClass::Central);
  CHECK(classify_body(classical_q(A, 0, 1, -1, -1)) == BodyClass::Elliptic);  // R
}

TEST_CASE("elliptic fixed points") {
  auto A = algebra_trunc_poly(1, 3);
  // S fixes i (exact)
  auto S = classical_q(A, 0, 1, -1, 0);
  auto z = elliptic_fixed_point(S, crat_i());
  CHECK(z == JetCQ::constant(A, crat_i()));

  // R fixes e^{2 pi i / 3} (floating)
  auto Af = algebra_trunc_poly(1, 3);
  auto R = classical(Af, 0, 1, -1, -1);
  auto zr = elliptic_fixed_point(R);
  CHECK(zr.body().real() == doctest::Approx(-0.5));
  CHECK(zr.body().imag() == doctest::Approx(std::sqrt(3.0) / 2));

  // deformed conjugate of S: fixed point is the Möbius image of i
  Rng rng(3);
  auto h = random_body_identity(rng, A);
  auto gamma = h * S * inverse(h);
  auto zf = elliptic_fixed_point(gamma, crat_i());
  CHECK(zf == mobius_apply(h, JetCQ::constant(A, crat_i())));
  CHECK(mobius_apply(gamma, zf) == zf);
}

TEST_CASE("transport to i") {
  auto A = algebra_trunc_poly(1, 3);
  // z = i -> identity
  auto t1 = transport_to_i(JetCQ::constant(A, crat_i()), CRat(rat_of(1)));
  CHECK(t1 == Mat2<CRat>::identity(A));

  // z = 2i -> [[sqrt2, 0],[0, 1/sqrt2]] (floating; irrational entries)
  auto tf = transport_to_i(JetC::constant(A, {0.0, 2.0}));
  CHECK(tf.a().body().real() == doctest::Approx(std::sqrt(2.0)));
  CHECK(tf.d().body().real() == doctest::Approx(1.0 / std::sqrt(2.0)));
  CHECK(std::abs(tf.b().body()) < 1e-14);

  // z = i + eps: Möbius round trip (exact)
  auto z = JetCQ::constant(A, crat_i()) + complexify(JetQ::basis(A, 1));
  auto m = transport_to_i(z, CRat(rat_of(1)));
  CHECK(mobius_apply(m, JetCQ::constant(A, crat_i())) == z);
  CHECK(det(m) == JetCQ::unit(A));
}

TEST_CASE("conjugation collapse at S (exact rational)") {
  auto A = algebra_trunc_poly(1, 3);
  auto S = classical_q(A, 0, 1, -1, 0);
  // S itself is already in the compact stabilizer
  auto k0 = conjugation_collapse(S, 2, crat_i(), CRat(rat_of(1)));
  CHECK(k0 == S);

  // h = exp(eps [[0,1],[1,0]])
  Mat2<CRat> x(A);
  auto eps = JetCQ::basis(A, 1);
  x.e[1] = eps;
  x.e[2] = eps;
  auto h = mat_exp(x);
  auto gamma = h * S * inverse(h);
  auto k = conjugation_collapse(gamma, 2, crat_i(), CRat(rat_of(1)));
  CHECK(k == S);  // collapses back to the classical rotation

  // random conjugators
  Rng rng(21);
  for (int t = 0; t < 5; ++t) {
    auto hh = random_body_identity(rng, A);
    auto g2 = hh * S * inverse(hh);
    auto kk = conjugation_collapse(g2, 2, crat_i(), CRat(rat_of(1)));
    CHECK(kk.equals_body());
    CHECK(kk == S);
  }
}

TEST_CASE("conjugation collapse at R (exact, quartic extension)") {
  auto A = algebra_trunc_poly(1, 3);
  auto cx = ext_ctx_quartic_3_4();
  // beta = (3/4)^{1/4}; z0 = (-1 + i sqrt3)/2 with sqrt3 = 2 beta^2
  Ext beta = Ext::gen(cx);
  Ext sqrt3 = beta * beta * Ext(CRat(rat_of(2)));
  Ext i_ext = Ext(crat_i());
  Ext z0 = (Ext(CRat(rat_of(-1))) + i_ext * sqrt3) * Ext(CRat(rat_of(1, 2)));

  auto R = Mat2<Ext>::constant(A, Ext(CRat(rat_of(0))), Ext(CRat(rat_of(1))),
                               Ext(CRat(rat_of(-1))), Ext(CRat(rat_of(-1))));
  // sanity: z0 solves the body quadratic of R and Im z0 = beta^2
  {
    Ext q = Ext(CRat(rat_of(-1))) * z0 * z0 + (Ext(CRat(rat_of(-1))) - Ext(CRat(rat_of(0)))) * z0 - Ext(CRat(rat_of(1)));
    CHECK(q.is_zero());
  }

  // R is already in its own stabilizer frame: collapse returns a classical matrix
  auto k0 = conjugation_collapse(R, 3, z0, beta);
  CHECK(k0.equals_body());

  // deformed conjugates
  Rng rng(33);
  for (int t = 0; t < 3; ++t) {
    Mat2<Ext> x(A);
    for (int ent : {0, 1, 2}) {
      Jet<Ext> j(A);
      for (size_t i = 1; i < j.c.size(); ++i)
        j.c[i] = Ext(CRat(rat_of(rng.int_in(-2, 2), 2)));
      x.e[static_cast<size_t>(ent)] = j;
    }
    x.e[3] = -x.e[0];
    auto h = mat_exp(x);
    auto gamma = h * R * inverse(h);
    auto k = conjugation_collapse(gamma, 3, z0, beta);
    CHECK(k.equals_body());
    // the collapsed body is the order-3 rotation: k^3 = identity
    CHECK(mat_pow(k, 3) == Mat2<Ext>::identity(A));
  }
}

TEST_CASE("Möbius action and cocycle") {
  auto A = algebra_trunc_poly(1, 3);
  auto i = JetCQ::constant(A, crat_i());
  auto S = classical_q(A, 0, 1, -1, 0);
  auto T = classical_q(A, 1, 1, 0, 1);

  // identity and S at i
  CHECK(mobius_apply(Mat2<CRat>::identity(A), i) == i);
  CHECK(mobius_apply(S, i) == i);

  // translation by a jet
  Mat2<CRat> u = Mat2<CRat>::identity(A);
  u.e[1] = complexify(JetQ::basis(A, 1));
  CHECK(mobius_apply(u, i) == i + complexify(JetQ::basis(A, 1)));

  // j(T, z) = 1; j(S, i) = i
  CHECK(cocycle_j(T, i) == JetCQ::unit(A));
  CHECK(cocycle_j(S, i) == i);

  // cocycle identity on the example pair and on random products
  auto lhs = cocycle_j(S * T, i);
  auto rhs = cocycle_j(S, mobius_apply(T, i)) * cocycle_j(T, i);
  CHECK(lhs == rhs);

  Rng rng(41);
  for (int t = 0; t < 30; ++t) {
    auto g = random_body_identity(rng, A) * classical_q(A, 1, 1, 0, 1);
    auto h = random_body_identity(rng, A) * classical_q(A, 0, 1, -1, 0);
    JetCQ z = i + complexify(JetQ::basis(A, 1)) * CRat(rat_of(rng.int_in(-2, 2), 3));
    CHECK(cocycle_j(g * h, z) == cocycle_j(g, mobius_apply(h, z)) * cocycle_j(h, z));
    CHECK(mobius_apply(g * h, z) == mobius_apply(g, mobius_apply(h, z)));
  }
}

TEST_CASE("slash operator") {
  auto A = algebra_trunc_poly(1, 2);
  EvalC one_fn = [&](const JetC& z) { return JetC::unit(z.alg); };
  auto T = classical(A, 1, 1, 0, 1);
  auto S = classical(A, 0, 1, -1, 0);
  auto z = JetC::constant(A, {0.0, 2.0});
  // f == 1, g = T: slash is 1 for any weight
  CHECK((slash(one_fn, T, 6, z) - JetC::unit(A)).norm() < 1e-15);
  // f == 1, g = S, k = 4 at 2i: (1/(-2i))^4 = 1/16
  auto v = slash(one_fn, S, 4, z);
  CHECK(v.body().real() == doctest::Approx(1.0 / 16));
  CHECK(std::abs(v.body().imag()) < 1e-15);
}

TEST_CASE("slash anti-action on sampled points") {
  auto A = algebra_trunc_poly(1, 2);
  Rng rng(61);
  EvalC f = [&](const JetC& z) { return z * z + JetC::constant(z.alg, {0.0, 1.0}); };
  for (int t = 0; t < 8; ++t) {
    auto g = classical(A, 1, 1, 0, 1) * classical(A, 0, 1, -1, 0);
    auto h = classical(A, 2, 1, 1, 1);
    JetC z = JetC::constant(A, {rng.real_in(-0.4, 0.4), rng.real_in(0.9, 2.0)});
    int k = 2 * static_cast<int>(rng.int_in(1, 5));
    // f|_{gh} = (f|_g)|_h
    JetC lhs = slash(f, g * h, k, z);
    EvalC fg = [&](const JetC& w) { return slash(f, g, k, w); };
    JetC rhs = slash(fg, h, k, z);
    CHECK((lhs - rhs).norm() < 1e-12 * std::max(1.0, lhs.norm()));
  }
}

TEST_CASE("error paths") {
  auto A = algebra_trunc_poly(1, 2);
  // elliptic machinery rejects a parabolic body
  auto T = classical_q(A, 1, 1, 0, 1);
  CHECK_THROWS(elliptic_fixed_point(T, crat_i()));
  // transport rejects the lower half plane
  CHECK_THROWS(transport_to_i(JetCQ::constant(A, CRat(rat_of(0), rat_of(-1))), CRat(rat_of(1))));
  // derivative supplier failure propagates
  std::function<Rat(const std::vector<int>&)> pole = [](const std::vector<int>&) -> Rat {
    throw math_error("pole at the body point");
  };
  CHECK_THROWS(taylor_compose<Rat>(pole, {JetQ::unit(A)}));
}

TEST_CASE("j^2 equals the Möbius derivative (finite differences)") {
  auto A = algebra_trunc_poly(1, 2);
  Rng rng(55);
  for (int t = 0; t < 10; ++t) {
    auto g = classical(A, 2, 1, 1, 1);
    std::complex<double> z0(rng.real_in(-0.5, 0.5), rng.real_in(0.8, 2.0));
    auto j = cocycle_j(g, JetC::constant(A, z0));
    std::complex<double> jj = j.body() * j.body();
    double hstep = 1e-6;
    auto at = [&](std::complex<double> w) { return mobius_apply(g, JetC::constant(A, w)).body(); };
    std::complex<double> der = (at(z0 + hstep) - at(z0 - hstep)) / (2 * hstep);
    CHECK(std::abs(jj - der) < 1e-6);
  }
}
