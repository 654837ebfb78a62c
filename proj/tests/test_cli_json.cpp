#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "pforms/json_io.hpp"
#include "pforms/util.hpp"

using namespace pforms;

TEST_CASE("algebra JSON round trip") {
  for (auto alg : {algebra_trunc_poly(1, 3), algebra_trunc_poly(2, 2), algebra_even_exterior(2, 3)}) {
    Json j = algebra_to_json(*alg);
    auto back = algebra_from_json(j);
    CHECK(back->id == alg->id);
    CHECK(back->dim() == alg->dim());
    CHECK(back->basis == alg->basis);
    CHECK(back->mul == alg->mul);
  }
  // structure-constants path: re-ingest a built-in as a custom table
  auto alg = algebra_trunc_poly(1, 3);
  Json j = algebra_to_json(*alg);
  j["kind"] = "structure-constants";
  auto custom = algebra_from_json(j);
  CHECK(custom->dim() == 3);
  CHECK(custom->N == 3);
  CHECK(custom->graded());

  // broken table rejected with a diagnostic naming the axiom
  Json bad = j;
  bad["mul_table"][1][2][0] = "1";  // unit coefficient in an ideal product
  CHECK_THROWS(algebra_from_json(bad));
}

TEST_CASE("jet JSON forms") {
  auto alg = algebra_trunc_poly(1, 2);
  JetQ x(alg);
  x.c = {rat_of(-7, 3), rat_of(22, 7)};
  Json j = jet_to_json(x);
  CHECK(j["mode"] == "exact");
  CHECK(j["coeffs"][0][0] == "-7");
  CHECK(j["coeffs"][0][1] == "3");
  auto back = jetq_from_json(j, alg);
  CHECK(back == x);

  JetC f(alg);
  f.c = {{1.5, -0.25}, {0.0, 3.0}};
  Json jf = jet_to_json(f);
  CHECK(jf["mode"] == "float");
  CHECK(jf["coeffs"][0][0] == 1.5);
}

TEST_CASE("lattice JSON round trip preserves the relations") {
  auto pres = presentation_sl2z();
  auto cs = cocycle_space(pres);
  auto alg = algebra_trunc_poly(1, 3);
  auto lat = lift_deformation(pres, cs.h1[0], alg, JetQ::basis(alg, 1));
  Json j = lattice_to_json(lat);
  auto back = lattice_from_json(j);  // validates relations on load
  for (int i = 0; i < 2; ++i)
    CHECK(back.gens[static_cast<size_t>(i)] == lat.gens[static_cast<size_t>(i)]);

  // corrupting a generator breaks validation
  Json broken = j;
  broken["generators"][0]["entries"][0][0]["coeffs"][1] = "1/2";
  CHECK_THROWS(lattice_from_json(broken));
}

TEST_CASE("presentation JSON round trip") {
  for (auto p : {presentation_sl2z(), presentation_punctured_torus(true)}) {
    Json j = presentation_to_json(p);
    auto back = presentation_from_json(j);
    CHECK(back.num_gens() == p.num_gens());
    CHECK(back.relations == p.relations);
    CHECK(back.relation_signs == p.relation_signs);
    for (int i = 0; i < p.num_gens(); ++i)
      CHECK(back.gens[static_cast<size_t>(i)] == p.gens[static_cast<size_t>(i)]);
  }
}

TEST_CASE("word JSON flattens the derived translation") {
  Word w = {{kTGen, 2}, {1, -1}};
  Json j = word_to_json(w);
  // T^2 = (S^3 R)^2 followed by S^{-1}
  std::vector<long> want = {2, 2, 2, 1, 2, 2, 2, 1, -2};
  REQUIRE(j.size() == want.size());
  for (size_t i = 0; i < want.size(); ++i) CHECK(j[i].get<long>() == want[i]);
  auto back = word_from_flat(want);
  // re-flatten reproduces the same letters
  CHECK(word_to_json(back) == j);
}

TEST_CASE("deterministic serialization") {
  auto pres = presentation_sl2z();
  auto cs = cocycle_space(pres);
  auto alg = algebra_trunc_poly(1, 2);
  auto lat = lift_deformation(pres, cs.h1[0], alg, JetQ::basis(alg, 1));
  std::string a = lattice_to_json(lat).dump(2);
  std::string b = lattice_to_json(lat).dump(2);
  CHECK(a == b);
}

TEST_CASE("check report shape") {
  std::vector<Check> checks = {{"alpha", true, 1e-12, 1e-8, 0.5, "fine"},
                               {"beta", false, 2e-3, 1e-6, 0.1, "broken"}};
  Json j = checks_to_json(checks, Json::object());
  CHECK(j["all_pass"] == false);
  CHECK(j["checks"][0]["status"] == "pass");
  CHECK(j["checks"][1]["status"] == "fail");
  CHECK(j["schema_version"] == kSchemaVersion);
}
