#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "pforms/adapt.hpp"
#include "pforms/dims.hpp"
#include "pforms/util.hpp"

using namespace pforms;

namespace {

DeformedLattice h1_lattice(int N) {
  auto pres = presentation_sl2z();
  auto cs = cocycle_space(pres);
  auto alg = algebra_trunc_poly(1, N);
  return lift_deformation(pres, cs.h1[0], alg, JetQ::basis(alg, 1));
}

}  // namespace

TEST_CASE("classical q-expansion oracle") {
  CHECK(bernoulli(4) == rat_of(-1, 30));
  CHECK(bernoulli(6) == rat_of(1, 42));
  CHECK(bernoulli(12) == rat_of(-691, 2730));

  auto e4 = eisenstein_qexp(4, 3);
  CHECK(e4[0] == 1);
  CHECK(e4[1] == 240);
  CHECK(e4[2] == 2160);
  auto e6 = eisenstein_qexp(6, 2);
  CHECK(e6[0] == 1);
  CHECK(e6[1] == -504);
  auto dl = delta_qexp(4);
  CHECK(dl[0] == 0);
  CHECK(dl[1] == 1);
  CHECK(dl[2] == -24);
  CHECK(dl[3] == 252);
  CHECK(dl[4] == -1472);

  // E8 = E4^2 (divisor sums vs the ring structure)
  auto e8 = eisenstein_qexp(8, 6);
  auto e44 = qexp_mul(eisenstein_qexp(4, 6), eisenstein_qexp(4, 6), 6);
  CHECK(e8 == e44);
}

TEST_CASE("echelon basis of M_k") {
  for (int k : {0, 4, 6, 8, 10, 12, 14, 16, 24}) {
    int d = dim_mk_oracle(k);
    auto basis = basis_mk(k, 20);
    REQUIRE(static_cast<int>(basis.size()) == d);
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j)
        CHECK(basis[static_cast<size_t>(i)][static_cast<size_t>(j)] == ((i == j) ? 1 : 0));
  }
  // k = 12: second echelon row is Delta
  auto b12 = basis_mk(12, 10);
  auto dl = delta_qexp(10);
  CHECK(b12[1] == dl);
}

TEST_CASE("dimension predictor: modular data for even k <= 24") {
  for (int k = 0; k <= 24; k += 2) {
    auto rep = dimension_predict(k, 0, {2, 3}, 1, 0, false, true);
    CHECK(rep.status == DimStatus::Ok);
    CHECK(rep.dim_m == dim_mk_oracle(k));
    int want_s = k >= 4 ? dim_mk_oracle(k) - 1 : 0;
    if (k == 0) want_s = 0;
    CHECK(rep.dim_s == want_s);
  }
  // frozen anchor values
  auto r12 = dimension_predict(12, 0, {2, 3}, 1, 0, false, true);
  CHECK(r12.deg == 1);
  CHECK(r12.dim_m == 2);
  CHECK(r12.dim_s == 1);
  auto r4 = dimension_predict(4, 0, {2, 3}, 1, 0, false, true);
  CHECK(r4.deg == 0);
  CHECK(r4.dim_m == 1);
  CHECK(r4.dim_s == 0);
}

TEST_CASE("dimension predictor: genus branches") {
  // g = 1, one elliptic point, no cusps, k = 2: constants survive
  auto a = dimension_predict(2, 1, {2}, 0, 0, false, false);
  CHECK(a.dim_m == 1);
  CHECK(a.dim_s == 1);
  CHECK_THROWS(dimension_predict(2, 1, {}, 0, 0, false, false));
  // g = 2, k = 2, no cusps: holomorphic differentials
  auto b = dimension_predict(2, 2, {}, 0, 0, false, false);
  CHECK(b.dim_m == 2);
  CHECK(b.dim_s == 2);
  // g = 2, k = 4, no data: deg = 4(g-1) = 4, dim = deg - g + 1 = 3
  auto c = dimension_predict(4, 2, {}, 0, 0, false, false);
  CHECK(c.deg == 4);
  CHECK(c.dim_m == 3);
  // odd weight with -1 present
  auto d = dimension_predict(3, 0, {2, 3}, 1, 0, true, true);
  CHECK(d.status == DimStatus::ZeroOddMinusOne);
  CHECK(d.dim_m == 0);
  // odd indeterminate corner: g = 1, k = 1, no even cusps
  auto e = dimension_predict(1, 1, {}, 2, 0, true, false);
  CHECK(e.status == DimStatus::Indeterminate);
  auto e2 = dimension_predict(3, 1, {2, 2}, 0, 0, true, false);
  CHECK(e2.status == DimStatus::Indeterminate);
  (void)e2;
  CHECK(e.status == DimStatus::Indeterminate);
  // odd covered case: g = 1, k = 1, two even cusps: deg = S'/2 = 1
  auto f = dimension_predict(1, 1, {}, 2, 2, true, false);
  CHECK(f.status == DimStatus::Ok);
  CHECK(f.deg == 1);
  CHECK(f.dim_m == 1);
  // g >= 2, k = 1 is outside the stability theorem
  auto g = dimension_predict(1, 2, {}, 0, 0, true, false);
  CHECK(g.status == DimStatus::NotCovered);
  // odd S' rejected
  CHECK_THROWS(dimension_predict(3, 1, {}, 3, 1, true, false));
}

TEST_CASE("cusp classification") {
  auto even = presentation_punctured_torus(false);
  auto ce = cusp_classify(even, {3});
  CHECK(ce.parity == CuspParity::Even);

  auto odd = presentation_punctured_torus(true);
  auto co = cusp_classify(odd, {3});
  CHECK(co.parity == CuspParity::Odd);

  // conjugated designations classify the same way
  auto ce2 = cusp_classify(even, {1, 3, -1});
  CHECK(ce2.parity == CuspParity::Even);

  // the modular group contains -1
  auto sl2z = presentation_sl2z();
  CHECK_THROWS(cusp_classify(sl2z, {2, 2, 2, 1}));
}

TEST_CASE("cusp frame of a deformed lattice") {
  auto lat = h1_lattice(2);
  auto f = modular_cusp_frame_exact(lat);
  CHECK(f.body_is_identity());
  // the chart straightens the lifted translation: the intertwining identity
  Mat2<CRat> tl(lat.alg);
  auto t_exact = lat.eval_word({{kTGen, 1}});
  for (int i = 0; i < 4; ++i) tl.e[static_cast<size_t>(i)] = complexify(t_exact.e[static_cast<size_t>(i)]);
  auto chi = mat_log_near_parabolic(tl);
  CHECK(frame_intertwine_defect(f, chi) == 0.0);
}

TEST_CASE("trivial lift adapts to the classical forms exactly") {
  auto pres = presentation_sl2z();
  auto alg = algebra_trunc_poly(1, 2);
  QVec zero(6, Rat(0));
  auto lat = lift_deformation(pres, zero, alg, JetQ::basis(alg, 1));
  AdaptOptions opt;
  opt.M_report = 8;
  auto res = adapt_form(lat, 6, {}, opt);
  REQUIRE(res.forms.size() == 1);
  CHECK(res.residual < 1e-9);
  auto e6 = eisenstein_qexp(6, 8);
  for (int n = 0; n <= 8; ++n) {
    auto c = res.forms[0].coeffs[static_cast<size_t>(n)];
    CHECK(std::abs(c.body().real() - e6[static_cast<size_t>(n)].get_d()) <
          1e-8 * std::max(1.0, std::abs(e6[static_cast<size_t>(n)].get_d())));
    CHECK(c.nil_part().norm() < 1e-8 * std::max(1.0, std::abs(c.body().real())));
  }
}

TEST_CASE("adaption at weight 6 for the deformed lattice") {
  auto lat = h1_lattice(2);
  AdaptOptions opt;
  opt.M_report = 10;
  auto res = adapt_form(lat, 6, {}, opt);
  REQUIRE(res.forms.size() == 1);
  CHECK(res.residual < 1e-9);
  // the adapted form genuinely deforms
  double nil = 0;
  for (const auto& c : res.forms[0].coeffs) nil = std::max(nil, c.nil_part().norm());
  CHECK(nil > 1e-3);
  // invariance of the reconstructed function under both lifted generators
  auto gens = lattice_to_float(lat);
  double r = invariance_residual(res.forms[0], gens, modular_check_points(20));
  CHECK(r < 1e-6);
  // rank certificate
  auto rank = rank_verify(res.forms, 1);
  CHECK(rank.ok);
}

TEST_CASE("weight 12: adapted cusp form keeps a vanishing constant term") {
  auto lat = h1_lattice(2);
  AdaptOptions opt;
  opt.M_report = 10;
  auto res = adapt_form(lat, 12, {}, opt);
  REQUIRE(res.forms.size() == 2);
  CHECK(res.residual < 1e-8);
  // echelon: form 0 has a_0 = 1, form 1 = adapted Delta with a_0 = 0 at all orders
  CHECK(res.forms[1].coeffs[0].norm() < 1e-10);
  CHECK(res.forms[1].cusp_flag());
  CHECK(!res.forms[0].cusp_flag());
  auto rank = rank_verify(res.forms, 2);
  CHECK(rank.ok);
  // degenerate family is rejected
  auto dup = res.forms;
  dup[1] = dup[0];
  auto bad = rank_verify(dup, 2);
  CHECK(!bad.ok);
  CHECK(bad.body_rank == 1);

  // cusp value of the reconstructed adapted Delta
  FormEvaluator ev(res.forms[1]);
  EvalC fe = [&](const JetC& z) { return ev(z); };
  auto v = cusp_value(fe, res.forms[1].frame.transporter, res.forms[1].frame.omega, 12);
  CHECK(v.norm() < 1e-10);
}

TEST_CASE("classical cusp values through the divisor-sum oracle") {
  auto alg = algebra_trunc_poly(1, 2);
  CuspFrame id_frame;
  id_frame.omega = FrameC::identity(alg);
  id_frame.transporter = MatC::constant(alg, {1, 0}, {0, 0}, {0, 0}, {1, 0});

  // E4 at the cusp -> 1; Delta (weight 12 cusp form) -> 0
  auto e4 = qseries_classical(eisenstein_qexp(4, 24), 4, id_frame);
  FormEvaluator ev4(e4);
  EvalC f4 = [&](const JetC& z) { return ev4(z); };
  auto v4 = cusp_value(f4, id_frame.transporter, id_frame.omega, 4);
  CHECK(std::abs(v4.body().real() - 1.0) < 1e-10);
  CHECK(std::abs(v4.body().imag()) < 1e-10);

  auto dl = qseries_classical(delta_qexp(24), 12, id_frame);
  FormEvaluator evd(dl);
  EvalC fd = [&](const JetC& z) { return evd(z); };
  auto vd = cusp_value(fd, id_frame.transporter, id_frame.omega, 12);
  CHECK(vd.norm() < 1e-10);

  // classical modular invariance of the truncated E4 series at sample points
  MatC S = MatC::constant(alg, {0, 0}, {1, 0}, {-1, 0}, {0, 0});
  MatC R = MatC::constant(alg, {0, 0}, {1, 0}, {-1, 0}, {-1, 0});
  CHECK(invariance_residual(e4, {R, S}, modular_check_points(12)) < 1e-6);
}

TEST_CASE("lifting over the even exterior algebra") {
  auto pres = presentation_sl2z();
  auto cs = cocycle_space(pres);
  auto alg = algebra_even_exterior(2, 3);
  auto lat = lift_deformation(pres, cs.h1[0], alg, JetQ::basis(alg, 1));
  CHECK(mat_pow(lat.gens[0], 3) == Mat2<Rat>::identity(alg));
  AdaptOptions opt;
  opt.M_report = 8;
  auto res = adapt_form(lat, 6, {}, opt);
  CHECK(res.residual < 1e-9);
  double nil = 0;
  for (const auto& c : res.forms[0].coeffs) nil = std::max(nil, c.nil_part().norm());
  CHECK(nil > 1e-3);
}

TEST_CASE("invariance kernel dimension saturates the free-module bound") {
  auto lat = h1_lattice(2);
  CHECK(invariance_kernel_dimension(lat, 6) == 1 * lat.alg->dim());
  CHECK(invariance_kernel_dimension(lat, 12) == 2 * lat.alg->dim());
}
