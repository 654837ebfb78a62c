#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <numeric>

#include "pforms/lattice.hpp"
#include "pforms/util.hpp"

using namespace pforms;

TEST_CASE("modular presentation") {
  auto p = presentation_sl2z();
  // R^3 = 1, S^4 = 1, S^2 = -1, S^3 R = T
  CHECK(p.relation_signs[0] == 1);
  CHECK(p.relation_signs[1] == 1);
  QMat2 S = p.gens[1], R = p.gens[0];
  CHECK(S * S == -QMat2::identity());
  CHECK(S * S * S * R == QMat2::of(1, 1, 0, 1));
  CHECK(p.eval_letters({1, 1, 1}) == QMat2::identity());
}

TEST_CASE("cohomology dimensions") {
  auto cs = cocycle_space(presentation_sl2z());
  CHECK(cs.dim_h1 == 1);
  REQUIRE(cs.quotient_model_dim.has_value());
  CHECK(*cs.quotient_model_dim == 1);

  auto cg2 = cocycle_space(presentation_surface_genus2());
  CHECK(cg2.dim_h1 == 6);

  auto cpt = cocycle_space(presentation_punctured_torus(false));
  CHECK(cpt.dim_h1 == 3);  // 6(g-1) + 3m with g = 1, m = 1
  auto cpt2 = cocycle_space(presentation_punctured_torus(true));
  CHECK(cpt2.dim_h1 == 3);

  // degenerate single-generator presentation with relation g = g (empty after
  // reduction): handled by rank computations
  Presentation triv;
  triv.gen_names = {"g"};
  triv.gens = {QMat2::of(1, 1, 0, 1)};
  triv.relations = {{1, -1}};
  triv.validate();
  auto ct = cocycle_space(triv);
  CHECK(ct.dim_z1 == 3);
  CHECK(ct.dim_h1 == ct.dim_z1 - ct.dim_b1);
}

TEST_CASE("Z1 contains B1") {
  for (auto pres : {presentation_sl2z(), presentation_surface_genus2()}) {
    auto cs = cocycle_space(pres);
    CHECK(cs.dim_z1 >= cs.dim_b1);
    for (const auto& b : cs.b1) CHECK(in_span(cs.z1, b));
  }
}

TEST_CASE("exact lifting of the modular H1 direction") {
  auto pres = presentation_sl2z();
  auto cs = cocycle_space(pres);
  REQUIRE(cs.dim_h1 == 1);
  for (int N : {2, 3, 4}) {
    auto alg = algebra_trunc_poly(1, N);
    auto lat = lift_deformation(pres, cs.h1[0], alg, JetQ::basis(alg, 1));
    // relations hold exactly (checked inside, assert the generators deform)
    bool nontrivial = false;
    for (const auto& g : lat.gens)
      if (!g.equals_body()) nontrivial = true;
    CHECK(nontrivial);
    // lift of -1 (word S^2) is exactly -identity
    auto m1 = mat_pow(lat.gens[1], 2);
    CHECK(m1 == -Mat2<Rat>::identity(alg));
    // R-tilde has exact order 3, S-tilde exact order 4
    CHECK(mat_pow(lat.gens[0], 3) == Mat2<Rat>::identity(alg));
    CHECK(mat_pow(lat.gens[0], 1) != Mat2<Rat>::identity(alg));
    CHECK(mat_pow(lat.gens[1], 4) == Mat2<Rat>::identity(alg));
    CHECK(mat_pow(lat.gens[1], 2) != Mat2<Rat>::identity(alg));
  }
}

TEST_CASE("zero direction lifts to the classical embedding") {
  auto pres = presentation_sl2z();
  auto alg = algebra_trunc_poly(1, 3);
  QVec zero(6, Rat(0));
  auto lat = lift_deformation(pres, zero, alg, JetQ::basis(alg, 1));
  for (const auto& g : lat.gens) CHECK(g.equals_body());
}

TEST_CASE("coboundary directions lift to conjugates of the classical embedding") {
  auto pres = presentation_sl2z();
  auto alg = algebra_trunc_poly(1, 3);
  auto eps = JetQ::basis(alg, 1);
  Rng rng(19);
  for (int t = 0; t < 5; ++t) {
    QVec v = {rat_of(rng.int_in(-2, 2), 2), rat_of(rng.int_in(-2, 2), 2), rat_of(rng.int_in(-2, 2), 2)};
    // coboundary u_i = Ad(gamma_i^{-1}) v - v
    QVec u;
    for (const auto& g : pres.gens) {
      auto w = ad_apply(g.inverse(), v);
      for (int j = 0; j < 3; ++j) u.push_back(w[static_cast<size_t>(j)] - v[static_cast<size_t>(j)]);
    }
    auto lifted = lift_deformation(pres, u, alg, eps);

    // first order: conjugating the classical embedding by exp(eps v) matches
    // the coboundary lift at grade one
    QVec zero(6, Rat(0));
    auto classical = lift_deformation(pres, zero, alg, eps);
    Mat2<Rat> x(alg);
    x.e[0] = eps * v[0];
    x.e[1] = eps * v[1];
    x.e[2] = eps * v[2];
    x.e[3] = -x.e[0];
    auto conj = conjugate_lattice(classical, mat_exp(x));
    for (int i = 0; i < 2; ++i) {
      auto diff = conj.gens[static_cast<size_t>(i)] - lifted.gens[static_cast<size_t>(i)];
      for (int ent = 0; ent < 4; ++ent) {
        // grade-1 coefficients agree
        for (int bidx = 1; bidx < alg->dim(); ++bidx)
          if (alg->grade[static_cast<size_t>(bidx)] == 1)
            CHECK(diff.e[static_cast<size_t>(ent)].c[static_cast<size_t>(bidx)] == 0);
      }
    }
  }
}

TEST_CASE("conjugate_lattice basics") {
  auto pres = presentation_sl2z();
  auto alg = algebra_trunc_poly(1, 3);
  auto cs = cocycle_space(pres);
  auto lat = lift_deformation(pres, cs.h1[0], alg, JetQ::basis(alg, 1));

  auto id = Mat2<Rat>::identity(alg);
  auto same = conjugate_lattice(lat, id);
  for (int i = 0; i < 2; ++i) CHECK(same.gens[static_cast<size_t>(i)] == lat.gens[static_cast<size_t>(i)]);

  Mat2<Rat> x(alg);
  x.e[1] = JetQ::basis(alg, 1);
  auto g = mat_exp(x);
  auto conj = conjugate_lattice(lat, g);
  auto back = conjugate_lattice(conj, inverse(g));
  for (int i = 0; i < 2; ++i) CHECK(back.gens[static_cast<size_t>(i)] == lat.gens[static_cast<size_t>(i)]);
  CHECK_THROWS(conjugate_lattice(lat, embed_classical(alg, QMat2::of(1, 1, 0, 1))));
}

TEST_CASE("finite-order transport for random words") {
  auto pres = presentation_sl2z();
  auto cs = cocycle_space(pres);
  auto alg = algebra_trunc_poly(1, 3);
  auto lat = lift_deformation(pres, cs.h1[0], alg, JetQ::basis(alg, 1));
  Rng rng(29);

  // cores of each finite order in the modular group
  struct Core { std::vector<int> letters; int order; };
  std::vector<Core> cores = {
      {{1}, 3}, {{1, 1}, 3}, {{2}, 4}, {{2, 2}, 2}, {{2, 2, 2}, 4},
      {{2, 2, 1}, 6}, {{2, 2, 1, 1}, 6},
  };
  for (int t = 0; t < 40; ++t) {
    // random conjugator word
    std::vector<int> w;
    int len = static_cast<int>(rng.int_in(0, 6));
    for (int i = 0; i < len; ++i) {
      int g = static_cast<int>(rng.int_in(1, 2));
      w.push_back(rng.int_in(0, 1) ? g : -g);
    }
    const auto& core = cores[static_cast<size_t>(rng.int_in(0, static_cast<long>(cores.size()) - 1))];
    std::vector<int> letters = w;
    letters.insert(letters.end(), core.letters.begin(), core.letters.end());
    for (auto it = w.rbegin(); it != w.rend(); ++it) letters.push_back(-*it);

    // body order equals jet order exactly
    auto jet = lat.eval_letters(letters);
    auto classical = pres.eval_letters(letters);
    // compute the true body order (<= 6)
    int body_order = 0;
    QMat2 acc = QMat2::identity();
    for (int n = 1; n <= 12; ++n) {
      acc = acc * classical;
      if (acc == QMat2::identity()) { body_order = n; break; }
    }
    REQUIRE(body_order == core.order);
    CHECK(mat_pow(jet, body_order) == Mat2<Rat>::identity(alg));
    for (int n = 1; n < body_order; ++n) CHECK(mat_pow(jet, n) != Mat2<Rat>::identity(alg));
  }
}

TEST_CASE("word decomposition") {
  auto pres = presentation_sl2z();
  // T = S^3 R
  auto dec = word_decompose_sl2z(QMat2::of(1, 1, 0, 1));
  QMat2 T = QMat2::of(1, 1, 0, 1);
  // identity -> empty word
  auto di = word_decompose_sl2z(QMat2::identity());
  CHECK(di.word.empty());
  CHECK(di.sign == 1);

  auto lat_eval = [&](const Word& w) {
    QMat2 acc = QMat2::identity();
    auto powq = [](QMat2 b, long e) {
      if (e < 0) { b = b.inverse(); e = -e; }
      QMat2 r = QMat2::identity();
      while (e) { if (e & 1) r = r * b; e >>= 1; if (e) b = b * b; }
      return r;
    };
    for (const auto& f : w) acc = acc * powq(f.gen == kTGen ? T : pres.gens[static_cast<size_t>(f.gen)], f.exp);
    return acc;
  };
  CHECK((dec.sign == 1 ? lat_eval(dec.word) : -lat_eval(dec.word)) == T);

  {
    auto d21 = word_decompose_sl2z(QMat2::of(2, 1, 1, 1));
    CHECK((d21.sign == 1 ? lat_eval(d21.word) : -lat_eval(d21.word)) == QMat2::of(2, 1, 1, 1));
  }

  Rng rng(37);
  for (int t = 0; t < 50; ++t) {
    // random integer matrix with det 1 via random word
    QMat2 m = QMat2::identity();
    int len = static_cast<int>(rng.int_in(1, 12));
    for (int i = 0; i < len; ++i)
      m = m * (rng.int_in(0, 1) ? pres.gens[0] : pres.gens[1]);
    auto d = word_decompose_sl2z(m);
    CHECK((d.sign == 1 ? lat_eval(d.word) : -lat_eval(d.word)) == m);
  }
  CHECK_THROWS(word_decompose_sl2z(QMat2{rat_of(1, 2), Rat(0), Rat(0), Rat(2)}));
  CHECK_THROWS(word_decompose_sl2z(QMat2::of(2, 0, 0, 2)));
}

TEST_CASE("coset representatives") {
  auto reps = coset_reps_sl2z(1);
  REQUIRE(reps.size() == 4);
  CHECK(reps[0].c == 0);
  CHECK(reps[0].d == 1);
  std::vector<std::pair<long, long>> rows;
  for (const auto& r : reps) rows.emplace_back(r.c, r.d);
  CHECK(std::count(rows.begin(), rows.end(), std::make_pair(1L, 0L)) == 1);
  CHECK(std::count(rows.begin(), rows.end(), std::make_pair(1L, 1L)) == 1);
  CHECK(std::count(rows.begin(), rows.end(), std::make_pair(1L, -1L)) == 1);

  // count for B = 10 matches brute-force coprime enumeration
  long B = 10;
  auto reps10 = coset_reps_sl2z(B);
  long count = 1;
  for (long c = 1; c <= B; ++c)
    for (long d = -B; d <= B; ++d)
      if (std::gcd(c, d) == 1) ++count;
  CHECK(static_cast<long>(reps10.size()) == count);
  // no duplicate bottom rows
  std::vector<std::pair<long, long>> rows10;
  for (const auto& r : reps10) rows10.emplace_back(r.c, r.d);
  std::sort(rows10.begin(), rows10.end());
  CHECK(std::adjacent_find(rows10.begin(), rows10.end()) == rows10.end());
  // bottom rows match the stored matrices
  for (const auto& r : reps10) {
    CHECK(r.mat.c == r.c);
    CHECK(r.mat.d == r.d);
    CHECK(r.mat.det() == 1);
  }
}

TEST_CASE("lattice lift of classical matrices through words") {
  auto pres = presentation_sl2z();
  auto cs = cocycle_space(pres);
  auto alg = algebra_trunc_poly(1, 2);
  auto lat = lift_deformation(pres, cs.h1[0], alg, JetQ::basis(alg, 1));
  // the lift is a homomorphic section: lift(M N) = lift(M) lift(N)
  QMat2 M = QMat2::of(2, 1, 1, 1), N = QMat2::of(1, 1, 0, 1);
  int sM = 0, sN = 0, sMN = 0;
  auto LM = lat.lift_classical(M, &sM);
  auto LN = lat.lift_classical(N, &sN);
  auto LMN = lat.lift_classical(M * N, &sMN);
  // signs compose and the lifted products agree up to the lifted -1 = -id
  Mat2<Rat> prod = LM * LN;
  if (sM * sN != sMN) prod = -prod;
  CHECK(prod == LMN);
}
