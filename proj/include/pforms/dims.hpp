#pragma once

// Degree and dimension bookkeeping for the weight-k line bundles on the
// compactified quotient: the closed degree formulas (even and odd weight)
// and the genus case analysis for their section spaces. A handful of odd
// low-weight configurations leave a 2-torsion bundle that the discrete data
// cannot decide; these are reported as indeterminate rather than guessed.

#include <string>
#include <vector>

#include "pforms/presentation.hpp"

namespace pforms {

enum class DimStatus { Ok, Indeterminate, NotCovered, ZeroOddMinusOne };

struct DimensionReport {
  int k = 0;
  int genus = 0;
  std::vector<int> periods;  // elliptic periods n_rho >= 2
  int cusps = 0;             // S
  int even_cusps = 0;        // S' (odd weight only)
  bool odd_weight = false;
  long deg = 0;              // deg of the weight-k bundle
  int dim_m = 0, dim_s = 0;
  DimStatus status = DimStatus::Ok;
};

DimensionReport dimension_predict(int k, int genus, const std::vector<int>& periods, int cusps,
                                  int even_cusps, bool odd_weight, bool minus_one_in_group);

enum class CuspParity { Even, Odd };

struct CuspClassification {
  CuspParity parity;
  int minus_one_search_depth;  // -1 was not found up to this ball radius
};

// Classifies the cusp carried by the designated primitive parabolic word.
// Preconditions checked: -1 is not reachable within the search depth, the
// element is parabolic and not central.
CuspClassification cusp_classify(const Presentation& pres, const std::vector<int>& parabolic_letters,
                                 int search_depth = 8);

}  // namespace pforms
