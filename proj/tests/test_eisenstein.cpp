#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <numeric>

#include "pforms/adapt.hpp"
#include "pforms/kernels.hpp"
#include "pforms/util.hpp"

using namespace pforms;

namespace {

DeformedLattice h1_lattice(int N = 2) {
  auto pres = presentation_sl2z();
  auto cs = cocycle_space(pres);
  auto alg = algebra_trunc_poly(1, N);
  return lift_deformation(pres, cs.h1[0], alg, JetQ::basis(alg, 1));
}

DeformedLattice trivial_lattice() {
  auto pres = presentation_sl2z();
  auto alg = algebra_trunc_poly(1, 2);
  QVec zero(6, Rat(0));
  return lift_deformation(pres, zero, alg, JetQ::basis(alg, 1));
}

}  // namespace

TEST_CASE("kernel equivalence: scalar vs AVX2 on random batches") {
  if (!kern::cpu_has_avx2()) {
    MESSAGE("AVX2 not available; dispatch falls back to scalar");
    std::string chosen;
    kern::select_kernel("auto", &chosen);
    CHECK(chosen == "scalar");
    return;
  }
  std::string chosen;
  auto avx = kern::select_kernel("avx2", &chosen);
  CHECK(chosen == "avx2");

  Rng rng(101);
  for (int trial = 0; trial < 6; ++trial) {
    kern::EisBatch batch;
    batch.n = static_cast<int>(rng.int_in(1, kern::EisBatch::CAP));
    for (int t = 0; t < batch.n; ++t) {
      auto fill = [&](double* re, double* im, double scale) {
        re[t] = rng.real_in(-scale, scale);
        im[t] = rng.real_in(-scale, scale);
      };
      fill(batch.a0r, batch.a0i, 5);
      fill(batch.a1r, batch.a1i, 2);
      fill(batch.b0r, batch.b0i, 5);
      fill(batch.b1r, batch.b1i, 2);
      fill(batch.c0r, batch.c0i, 5);
      fill(batch.c1r, batch.c1i, 2);
      fill(batch.d0r, batch.d0i, 5);
      fill(batch.d1r, batch.d1i, 2);
      // keep denominators away from zero
      batch.c0r[t] += (batch.c0r[t] >= 0 ? 2.0 : -2.0);
      batch.d0r[t] += (batch.d0r[t] >= 0 ? 2.0 : -2.0);
    }
    kern::EisPointCtx ctx;
    ctx.w0r = rng.real_in(-0.5, 0.5);
    ctx.w0i = rng.real_in(0.5, 2.0);
    ctx.w1r = rng.real_in(-0.3, 0.3);
    ctx.w1i = rng.real_in(-0.3, 0.3);
    ctx.f0r = 1;
    ctx.f1r = rng.real_in(-0.5, 0.5);
    ctx.f1i = rng.real_in(-0.5, 0.5);
    ctx.pd_deg = 2;
    for (int m = 0; m <= 2; ++m) {
      ctx.pdr[m] = rng.real_in(-0.4, 0.4);
      ctx.pdi[m] = rng.real_in(-0.4, 0.4);
    }
    ctx.k = 6 + 2 * static_cast<int>(rng.int_in(0, 4));

    double s[4] = {0, 0, 0, 0}, v[4] = {0, 0, 0, 0};
    kern::eis_term_sum_scalar(batch, ctx, s);
    avx(batch, ctx, v);
    double scale = 0;
    for (int i = 0; i < 4; ++i) scale = std::max(scale, std::abs(s[i]));
    for (int i = 0; i < 4; ++i) CHECK(std::abs(s[i] - v[i]) <= 1e-10 * std::max(1.0, scale));
  }
}

TEST_CASE("trivial lift reproduces the classical Eisenstein series") {
  auto lat = trivial_lattice();
  EisensteinOptions opt;
  opt.k = 6;
  opt.B = 300;
  opt.M = 8;
  auto res = deformed_eisenstein(lat, opt);
  auto oracle = eisenstein_qexp(6, 8);
  for (int n = 0; n <= 8; ++n) {
    double want = oracle[static_cast<size_t>(n)].get_d();
    auto got = res.series.coeffs[static_cast<size_t>(n)];
    CHECK(std::abs(got.body().real() - want) <= 1e-8 * std::max(1.0, std::abs(want)));
    CHECK(std::abs(got.body().imag()) <= 1e-8 * std::max(1.0, std::abs(want)));
    CHECK(got.nil_part().norm() <= 1e-8 * std::max(1.0, std::abs(want)));
  }
}

TEST_CASE("coset count matches the brute-force enumeration") {
  auto lat = trivial_lattice();
  EisensteinOptions opt;
  opt.k = 6;
  opt.B = 37;
  opt.M = 4;
  auto res = deformed_eisenstein(lat, opt);
  long want = 1;  // identity coset
  for (long c = 1; c <= opt.B; ++c)
    for (long d = -opt.B; d <= opt.B; ++d)
      if (std::gcd(c, d) == 1) ++want;
  CHECK(res.reps == want);
}

TEST_CASE("deformed series: invariance and self-consistency under B doubling") {
  auto lat = h1_lattice();
  EisensteinOptions opt;
  opt.k = 6;
  opt.B = 250;
  opt.M = 8;
  auto res = deformed_eisenstein(lat, opt);

  // body matches the oracle
  auto oracle = eisenstein_qexp(6, 8);
  for (int n = 0; n <= 8; ++n) {
    double want = oracle[static_cast<size_t>(n)].get_d();
    CHECK(std::abs(res.series.coeffs[static_cast<size_t>(n)].body().real() - want) <=
          1e-7 * std::max(1.0, std::abs(want)));
  }
  // nontrivial deformation
  double nil = 0;
  for (const auto& c : res.series.coeffs) nil = std::max(nil, c.nil_part().norm());
  CHECK(nil > 1e-3);

  // invariance of the reconstructed sum under the lifted generators
  auto gens = lattice_to_float(lat);
  CHECK(invariance_residual(res.series, gens, modular_check_points(20)) < 1e-6);

  // doubling B moves the coefficients by less than the reported tail estimate
  EisensteinOptions opt2 = opt;
  opt2.B = 500;
  auto res2 = deformed_eisenstein(lat, opt2);
  double move = 0;
  for (int n = 0; n <= 8; ++n)
    move = std::max(move, (res2.series.coeffs[static_cast<size_t>(n)] -
                           res.series.coeffs[static_cast<size_t>(n)]).norm());
  CHECK(move <= res.tail_estimate);
  double biggest = 0;
  for (const auto& c : res.series.coeffs) biggest = std::max(biggest, c.norm());
  CHECK(res.tail_estimate < 1e-6 * biggest);
}

TEST_CASE("thread count does not change the result") {
  auto lat = h1_lattice();
  EisensteinOptions opt;
  opt.k = 8;
  opt.B = 120;
  opt.M = 6;
  opt.threads = 1;
  auto r1 = deformed_eisenstein(lat, opt);
  opt.threads = 2;
  auto r2 = deformed_eisenstein(lat, opt);
  for (int n = 0; n <= opt.M; ++n)
    for (int i = 0; i < lat.alg->dim(); ++i) {
      CHECK(r1.series.coeffs[static_cast<size_t>(n)].c[static_cast<size_t>(i)] ==
            r2.series.coeffs[static_cast<size_t>(n)].c[static_cast<size_t>(i)]);
    }
}

TEST_CASE("agreement between the cusp sum and the adaption solver") {
  auto lat = h1_lattice();
  for (int k : {6, 8}) {
    EisensteinOptions opt;
    opt.k = k;
    opt.B = 600;
    opt.M = 8;
    auto eis = deformed_eisenstein(lat, opt);

    AdaptOptions aopt;
    aopt.M_report = 8;
    auto ad = adapt_form(lat, k, {}, aopt);
    REQUIRE(ad.forms.size() == 1);

    // normalize the cusp sum by its constant term, then compare
    auto a0 = eis.series.coeffs[0];
    double worst = 0;
    for (int n = 0; n <= 8; ++n) {
      JetC normalized = eis.series.coeffs[static_cast<size_t>(n)] * jet_invert(a0);
      JetC diff = normalized - ad.forms[0].coeffs[static_cast<size_t>(n)];
      worst = std::max(worst, diff.norm() / std::max(1.0, ad.forms[0].coeffs[static_cast<size_t>(n)].norm()));
    }
    CHECK(worst < 1e-5);
  }
}

TEST_CASE("deep algebras are routed to the adaption solver") {
  auto lat = h1_lattice(3);
  EisensteinOptions opt;
  CHECK_THROWS(deformed_eisenstein(lat, opt));
}
