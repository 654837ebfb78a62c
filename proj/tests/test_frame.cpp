#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <numbers>

#include "pforms/mobius.hpp"
#include "pforms/util.hpp"

using namespace pforms;

namespace {

Mat2<CRat> random_chi(Rng& rng, const AlgebraPtr& alg) {
  Mat2<CRat> chi = parab_chi0<CRat>(alg);
  for (int ent : {0, 1, 2}) {
    JetCQ j(alg);
    for (size_t i = 1; i < j.c.size(); ++i) j.c[i] = CRat(rat_of(rng.int_in(-2, 2), rng.int_in(1, 3)));
    chi.e[static_cast<size_t>(ent)] += j;
  }
  chi.e[3] = -chi.e[0];
  return chi;
}

}  // namespace

TEST_CASE("frame of the undeformed parabolic is the identity") {
  auto A = algebra_trunc_poly(1, 3);
  auto f = frame_from_chi(parab_chi0<CRat>(A));
  CHECK(f.poly.deg() == 1);
  CHECK(f.poly.c[1] == JetCQ::unit(A));
  CHECK(f.poly.c[0].is_zero());
}

TEST_CASE("frame intertwines the deformed flow (exact polynomial identity)") {
  Rng rng(71);
  for (auto alg : {algebra_trunc_poly(1, 2), algebra_trunc_poly(1, 3), algebra_trunc_poly(2, 3)}) {
    for (int t = 0; t < 7; ++t) {
      auto chi = random_chi(rng, alg);
      auto f = frame_from_chi(chi);
      CHECK(f.body_is_identity());
      CHECK(f.poly.deg() <= 2 * alg->N - 1);
      CHECK(frame_intertwine_defect(f, chi) == 0.0);

      // translated variants also intertwine
      JetCQ a(alg);
      for (size_t i = 1; i < a.c.size(); ++i) a.c[i] = CRat(rat_of(rng.int_in(-2, 2), 2), rat_of(rng.int_in(-1, 1), 3));
      auto ft = f.translate(a);
      CHECK(frame_intertwine_defect(ft, chi) == 0.0);
    }
  }
}

TEST_CASE("explicit first-order frame example") {
  // chi = chi_0 + eps [[0,0],[1,0]] in R[eps]/(eps^2): cubic-or-lower frame,
  // verified coefficientwise through the intertwining grid
  auto A = algebra_trunc_poly(1, 2);
  auto chi = parab_chi0<CRat>(A);
  chi.e[2] = complexify(JetQ::basis(A, 1));
  auto f = frame_from_chi(chi);
  CHECK(f.poly.deg() <= 3);
  CHECK(frame_intertwine_defect(f, chi) == 0.0);
  // the nilpotent part is nontrivial
  bool nontrivial = false;
  for (const auto& c : f.poly.c)
    if (!c.nil_part().is_zero()) nontrivial = true;
  CHECK(nontrivial);
}

TEST_CASE("frame inverse composes to the identity") {
  Rng rng(73);
  auto alg = algebra_trunc_poly(1, 3);
  for (int t = 0; t < 5; ++t) {
    auto f = frame_from_chi(random_chi(rng, alg));
    auto finv = f.inverse();
    auto comp = f.poly.compose(finv.poly);
    comp.trim();
    CHECK(comp.deg() == 1);
    CHECK(comp.c[1] == JetCQ::unit(alg));
    CHECK(comp.c[0].is_zero());
    auto comp2 = finv.poly.compose(f.poly);
    comp2.trim();
    CHECK(comp2.deg() == 1);
    CHECK(comp2.c[1] == JetCQ::unit(alg));
  }
}

TEST_CASE("frame slash: identity frame reduces to evaluation") {
  auto A = algebra_trunc_poly(1, 2);
  auto f = FrameC::identity(A);
  EvalC func = [&](const JetC& z) { return z * z; };
  auto z = JetC::constant(A, {0.3, 1.2});
  CHECK((frame_slash(func, f, 8, z) - z * z).norm() < 1e-14);
  EvalC one_fn = [&](const JetC& zz) { return JetC::unit(zz.alg); };
  CHECK((frame_slash(one_fn, f, 0, z) - JetC::unit(A)).norm() < 1e-15);
}

TEST_CASE("frame slash periodicity for an invariant test function") {
  // f := H(Omega^{-1} z) * (Omega'(Omega^{-1} z))^{-k/2} with H 1-periodic is
  // invariant under exp(chi) in weight k, and its frame slash is 1-periodic.
  auto A = algebra_trunc_poly(1, 2);
  Rng rng(77);
  auto chiQ = random_chi(rng, A);
  // floating copies
  MatC chi(A);
  for (int i = 0; i < 4; ++i) chi.e[static_cast<size_t>(i)] = to_double(chiQ.e[static_cast<size_t>(i)]);
  auto f = frame_from_chi(chi);
  auto finv = f.inverse();
  auto fder = f.derivative();
  int k = 6;

  auto H = [&](const JetC& w) {
    // 3 + 5 q + q^3 with a jet-coefficient twist
    auto q = jet_exp(w * std::complex<double>(0, 2 * std::numbers::pi));
    JetC c5 = JetC::constant(A, {5.0, 0.0});
    c5.c[1] = {0.25, -0.5};
    return JetC::constant(A, {3.0, 0.0}) + c5 * q + q * q * q;
  };
  EvalC func = [&](const JetC& z) {
    JetC w = finv.apply(z);
    JetC dp = fder.eval(w);
    return H(w) * jet_pow(dp, Rat(-k, 2));
  };

  // invariance under the deformed parabolic
  auto g = mat_exp(chi);
  for (int t = 0; t < 5; ++t) {
    JetC z = JetC::constant(A, {rng.real_in(-1, 1), rng.real_in(0.8, 2.0)});
    auto lhs = slash(func, g, k, z);
    auto rhs = func(z);
    CHECK((lhs - rhs).norm() < 1e-10 * std::max(1.0, rhs.norm()));
  }

  // periodicity of the frame slash at 10 sample points
  for (int t = 0; t < 10; ++t) {
    JetC z = JetC::constant(A, {rng.real_in(-1, 1), rng.real_in(0.8, 2.0)});
    auto v0 = frame_slash(func, f, k, z);
    auto v1 = frame_slash(func, f, k, z + JetC::unit(A));
    CHECK((v1 - v0).norm() < 1e-10 * std::max(1.0, v0.norm()));
  }
}

TEST_CASE("cusp value on classical data") {
  auto A = algebra_trunc_poly(1, 2);
  auto f = FrameC::identity(A);
  auto id = MatC::constant(A, {1, 0}, {0, 0}, {0, 0}, {1, 0});
  // f == 1, k = 0 -> 1
  EvalC one_fn = [&](const JetC& z) { return JetC::unit(z.alg); };
  auto v = cusp_value(one_fn, id, f, 0);
  CHECK((v - JetC::unit(A)).norm() < 1e-12);

  // translated frame changes only the phase of higher coefficients; the cusp
  // value (constant coefficient) is unchanged
  JetC a(A);
  a.c[1] = {0.3, 0.1};
  auto ft = f.translate(a);
  EvalC qfun = [&](const JetC& z) {
    auto q = jet_exp(z * std::complex<double>(0, 2 * std::numbers::pi));
    return JetC::constant(A, {2.0, 0.0}) + q * std::complex<double>(7.0, 0.0);
  };
  auto v0 = cusp_value(qfun, id, f, 0);
  auto v1 = cusp_value(qfun, id, ft, 0);
  CHECK((v0 - v1).norm() < 1e-10);
  CHECK(std::abs(v0.body().real() - 2.0) < 1e-10);

  // non-periodic function detected
  EvalC bad = [&](const JetC& z) { return z; };
  CHECK_THROWS(cusp_value(bad, id, f, 0));
}
