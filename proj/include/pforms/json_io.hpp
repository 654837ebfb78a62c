#pragma once

// JSON schemas for the on-disk artifacts. Exact rational coefficients are
// serialized as decimal strings ("p/q") so round trips stay lossless; the
// basis order of every coefficient vector follows the declared algebra basis.

#include <json.hpp>

#include "pforms/adapt.hpp"
#include "pforms/dims.hpp"

namespace pforms {

using Json = nlohmann::json;

inline constexpr int kSchemaVersion = 1;

Json algebra_to_json(const AlgebraSpec& a);
AlgebraPtr algebra_from_json(const Json& j);

Json jet_to_json(const JetQ& x);
Json jet_to_json(const JetCQ& x);
Json jet_to_json(const JetC& x);
JetQ jetq_from_json(const Json& j, const AlgebraPtr& alg);

Json mat_to_json(const Mat2<Rat>& m);
Json mat_to_json(const MatC& m);
Mat2<Rat> matq_from_json(const Json& j, const AlgebraPtr& alg);

Json presentation_to_json(const Presentation& p);
Presentation presentation_from_json(const Json& j);

Json lattice_to_json(const DeformedLattice& lat);
DeformedLattice lattice_from_json(const Json& j);

Json word_to_json(const Word& w);  // flat signed indices
Json frame_to_json(const CuspFrame& f);
Json qseries_to_json(const QSeriesJet& s);
Json dimension_report_to_json(const DimensionReport& r);

// verification report entry
struct Check {
  std::string name;
  bool pass = false;
  double residual = 0;
  double tolerance = 0;
  double seconds = 0;
  std::string details;
};

Json checks_to_json(const std::vector<Check>& checks, const Json& config_echo);

}  // namespace pforms
