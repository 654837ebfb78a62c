#include "pforms/json_io.hpp"

namespace pforms {

namespace {

Json rat_json(const Rat& r) { return rat_str(r); }

Rat rat_from(const Json& j) {
  if (j.is_number_integer()) return Rat(static_cast<long>(j.get<std::int64_t>()));
  return rat_parse(j.get<std::string>());
}

}  // namespace

Json algebra_to_json(const AlgebraSpec& a) {
  Json j;
  j["schema_version"] = kSchemaVersion;
  j["id"] = a.id;
  j["kind"] = algebra_kind_name(a.kind);
  j["m"] = a.m;
  j["N"] = a.N_family;
  j["N_least"] = a.N;
  j["basis"] = a.basis;
  Json mask = Json::array();
  for (bool b : a.ideal_mask) mask.push_back(b);
  j["ideal_mask"] = mask;
  Json triples = Json::array();
  int n = a.dim();
  for (int i = 0; i < n; ++i)
    for (int k = 0; k < n; ++k) {
      const auto& v = a.mul_coeffs(i, k);
      bool nonzero = false;
      for (const auto& c : v)
        if (c != 0) nonzero = true;
      if (!nonzero) continue;
      Json coeffs = Json::array();
      for (const auto& c : v) coeffs.push_back(rat_json(c));
      triples.push_back(Json::array({i, k, coeffs}));
    }
  j["mul_table"] = triples;
  return j;
}

AlgebraPtr algebra_from_json(const Json& j) {
  std::string kind = j.at("kind").get<std::string>();
  int m = j.at("m").get<int>();
  int N = j.at("N").get<int>();
  if (kind == "trunc-poly") return algebra_trunc_poly(m, N);
  if (kind == "even-exterior") return algebra_even_exterior(m, N);
  require(kind == "structure-constants", "unknown algebra kind: " + kind);
  std::vector<std::string> basis = j.at("basis").get<std::vector<std::string>>();
  int n = static_cast<int>(basis.size());
  std::vector<bool> mask(j.at("ideal_mask").begin(), j.at("ideal_mask").end());
  std::vector<std::vector<std::vector<Rat>>> mul(
      static_cast<size_t>(n),
      std::vector<std::vector<Rat>>(static_cast<size_t>(n), std::vector<Rat>(static_cast<size_t>(n), Rat(0))));
  for (const auto& t : j.at("mul_table")) {
    int i = t.at(0).get<int>(), k = t.at(1).get<int>();
    require(i >= 0 && i < n && k >= 0 && k < n, "mul_table index out of range");
    const auto& coeffs = t.at(2);
    require(static_cast<int>(coeffs.size()) == n, "mul_table coefficient count mismatch");
    for (int c = 0; c < n; ++c) mul[static_cast<size_t>(i)][static_cast<size_t>(k)][static_cast<size_t>(c)] = rat_from(coeffs.at(static_cast<size_t>(c)));
  }
  return algebra_from_table(std::move(basis), std::move(mul), std::move(mask), N);
}

namespace {

// exact coefficients as [num, den] pairs of decimal strings
Json numden_json(const Rat& r) {
  return Json::array({r.get_num().get_str(), r.get_den().get_str()});
}

Rat numden_from(const Json& j) {
  if (j.is_string()) return rat_parse(j.get<std::string>());
  require(j.is_array() && j.size() == 2, "expected a [num, den] pair");
  auto part = [&](const Json& x) {
    return x.is_string() ? x.get<std::string>() : std::to_string(x.get<std::int64_t>());
  };
  Rat r(part(j.at(0)) + "/" + part(j.at(1)));
  r.canonicalize();
  return r;
}

}  // namespace

Json jet_to_json(const JetQ& x) {
  Json j;
  j["algebra_id"] = x.alg->id;
  j["field"] = "R";
  j["mode"] = "exact";
  Json c = Json::array();
  for (const auto& v : x.c) c.push_back(numden_json(v));
  j["coeffs"] = c;
  return j;
}

Json jet_to_json(const JetCQ& x) {
  Json j;
  j["algebra_id"] = x.alg->id;
  j["field"] = "C";
  j["mode"] = "exact";
  Json c = Json::array();
  for (const auto& v : x.c) c.push_back(Json::array({numden_json(v.re), numden_json(v.im)}));
  j["coeffs"] = c;
  return j;
}

Json jet_to_json(const JetC& x) {
  Json j;
  j["algebra_id"] = x.alg->id;
  j["field"] = "C";
  j["mode"] = "float";
  Json c = Json::array();
  for (const auto& v : x.c) c.push_back(Json::array({v.real(), v.imag()}));
  j["coeffs"] = c;
  return j;
}

JetQ jetq_from_json(const Json& j, const AlgebraPtr& alg) {
  require(j.at("algebra_id").get<std::string>() == alg->id, "jet algebra mismatch");
  require(j.at("mode").get<std::string>() == "exact" && j.at("field").get<std::string>() == "R",
          "expected an exact real jet");
  JetQ x(alg);
  const auto& c = j.at("coeffs");
  require(static_cast<int>(c.size()) == alg->dim(), "jet coefficient count mismatch");
  for (int i = 0; i < alg->dim(); ++i) x.c[static_cast<size_t>(i)] = numden_from(c.at(static_cast<size_t>(i)));
  return x;
}

Json mat_to_json(const Mat2<Rat>& m) {
  Json j;
  j["algebra_id"] = m.alg()->id;
  j["entries"] = Json::array({Json::array({jet_to_json(m.a()), jet_to_json(m.b())}),
                              Json::array({jet_to_json(m.c()), jet_to_json(m.d())})});
  return j;
}

Json mat_to_json(const MatC& m) {
  Json j;
  j["algebra_id"] = m.alg()->id;
  j["entries"] = Json::array({Json::array({jet_to_json(m.a()), jet_to_json(m.b())}),
                              Json::array({jet_to_json(m.c()), jet_to_json(m.d())})});
  return j;
}

Mat2<Rat> matq_from_json(const Json& j, const AlgebraPtr& alg) {
  const auto& e = j.at("entries");
  return Mat2<Rat>(jetq_from_json(e.at(0).at(0), alg), jetq_from_json(e.at(0).at(1), alg),
                   jetq_from_json(e.at(1).at(0), alg), jetq_from_json(e.at(1).at(1), alg));
}

Json presentation_to_json(const Presentation& p) {
  Json j;
  j["schema_version"] = kSchemaVersion;
  Json gens = Json::array();
  for (int i = 0; i < p.num_gens(); ++i) {
    const auto& g = p.gens[static_cast<size_t>(i)];
    gens.push_back({{"name", p.gen_names[static_cast<size_t>(i)]},
                    {"matrix", Json::array({Json::array({rat_json(g.a), rat_json(g.b)}),
                                            Json::array({rat_json(g.c), rat_json(g.d)})})}});
  }
  j["generators"] = gens;
  j["relations"] = p.relations;
  j["relation_signs"] = p.relation_signs;
  return j;
}

Presentation presentation_from_json(const Json& j) {
  Presentation p;
  for (const auto& g : j.at("generators")) {
    p.gen_names.push_back(g.at("name").get<std::string>());
    const auto& m = g.at("matrix");
    p.gens.push_back(QMat2{rat_from(m.at(0).at(0)), rat_from(m.at(0).at(1)),
                           rat_from(m.at(1).at(0)), rat_from(m.at(1).at(1))});
  }
  p.relations = j.at("relations").get<std::vector<std::vector<int>>>();
  p.validate();
  return p;
}

Json lattice_to_json(const DeformedLattice& lat) {
  Json j;
  j["schema_version"] = kSchemaVersion;
  j["presentation_id"] = lat.pres.gen_names.size() == 2 && lat.pres.gens[0] == QMat2::of(0, 1, -1, -1)
                             ? "sl2z"
                             : "custom";
  j["algebra_id"] = lat.alg->id;
  j["presentation"] = presentation_to_json(lat.pres);
  j["algebra"] = algebra_to_json(*lat.alg);
  Json gens = Json::array();
  for (const auto& g : lat.gens) gens.push_back(mat_to_json(g));
  j["generators"] = gens;
  return j;
}

DeformedLattice lattice_from_json(const Json& j) {
  DeformedLattice lat;
  lat.pres = presentation_from_json(j.at("presentation"));
  lat.alg = algebra_from_json(j.at("algebra"));
  for (const auto& g : j.at("generators")) lat.gens.push_back(matq_from_json(g, lat.alg));
  require(static_cast<int>(lat.gens.size()) == lat.pres.num_gens(), "generator count mismatch");
  lat.check_relations();
  return lat;
}

Json word_to_json(const Word& w) {
  Json j = Json::array();
  for (long l : word_flatten(w)) j.push_back(l);
  return j;
}

Json frame_to_json(const CuspFrame& f) {
  Json j;
  j["algebra_id"] = f.omega.alg()->id;
  j["omega"] = Json::object();
  j["omega"]["algebra_id"] = f.omega.alg()->id;
  j["omega"]["degree"] = f.omega.poly.deg();
  Json coeffs = Json::array();
  for (const auto& c : f.omega.poly.c) coeffs.push_back(jet_to_json(c));
  j["omega"]["coeffs"] = coeffs;
  j["transporter"] = mat_to_json(f.transporter);
  return j;
}

Json qseries_to_json(const QSeriesJet& s) {
  Json j;
  j["schema_version"] = kSchemaVersion;
  j["weight"] = s.weight;
  j["M"] = s.trunc;
  j["frame"] = frame_to_json(s.frame);
  Json coeffs = Json::array();
  for (const auto& c : s.coeffs) coeffs.push_back(jet_to_json(c));
  j["coeffs"] = coeffs;
  j["cusp_form"] = s.cusp_flag();
  return j;
}

Json dimension_report_to_json(const DimensionReport& r) {
  Json j;
  j["schema_version"] = kSchemaVersion;
  j["k"] = r.k;
  j["genus"] = r.genus;
  j["periods"] = r.periods;
  j["cusps"] = r.cusps;
  if (r.odd_weight) j["even_cusps"] = r.even_cusps;
  j["parity"] = r.odd_weight ? "odd" : "even";
  switch (r.status) {
    case DimStatus::Ok:
      j["status"] = "ok";
      j["deg"] = r.deg;
      j["dimM"] = r.dim_m;
      j["dimS"] = r.dim_s;
      break;
    case DimStatus::Indeterminate:
      j["status"] = "indeterminate";
      j["deg"] = r.deg;
      break;
    case DimStatus::NotCovered:
      j["status"] = "not_covered";
      break;
    case DimStatus::ZeroOddMinusOne:
      j["status"] = "ok";
      j["deg"] = 0;
      j["dimM"] = 0;
      j["dimS"] = 0;
      break;
  }
  return j;
}

Json checks_to_json(const std::vector<Check>& checks, const Json& config_echo) {
  Json j;
  j["schema_version"] = kSchemaVersion;
  j["config"] = config_echo;
  Json arr = Json::array();
  bool all = true;
  for (const auto& c : checks) {
    arr.push_back({{"check", c.name},
                   {"status", c.pass ? "pass" : "fail"},
                   {"residual", c.residual},
                   {"tolerance", c.tolerance},
                   {"seconds", c.seconds},
                   {"details", c.details}});
    all = all && c.pass;
  }
  j["checks"] = arr;
  j["all_pass"] = all;
  return j;
}

}  // namespace pforms
