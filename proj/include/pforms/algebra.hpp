#pragma once

// Finite dimensional local commutative parameter algebras: a unital basis
// e_0 = 1, e_1, ..., e_{dim-1} with the non-unit elements spanning the
// nilpotent maximal ideal, plus an exact multiplication table. Jets over any
// scalar field are coefficient vectors against this basis.

#include <memory>
#include <string>
#include <vector>

#include "pforms/rat.hpp"

namespace pforms {

enum class AlgebraKind { TruncPoly, EvenExterior, StructureConstants };

std::string algebra_kind_name(AlgebraKind k);

class AlgebraSpec {
 public:
  AlgebraKind kind;
  int m = 0;          // number of parameters / generators
  int N_family = 1;   // family parameter as declared (truncation order)
  int N = 1;          // least N with I^N = 0 (computed)
  std::string id;

  std::vector<std::string> basis;        // basis labels, basis[0] is the unit
  std::vector<bool> ideal_mask;          // true on ideal basis elements
  std::vector<int> grade;                // I-adic grade per basis element (0 = unit); -1 if ungraded
  // mul[i][j] = coefficient vector of e_i * e_j
  std::vector<std::vector<std::vector<Rat>>> mul;

  int dim() const { return static_cast<int>(basis.size()); }
  bool graded() const;
  int max_grade() const;

  const std::vector<Rat>& mul_coeffs(int i, int j) const { return mul[static_cast<size_t>(i)][static_cast<size_t>(j)]; }

  // Sparse view and a double-precision copy for the floating pipeline.
  struct Triple { int i, j, k; double c; };
  const std::vector<Triple>& sparse() const { return sparse_; }
  void finalize();  // validates axioms, computes N, grades, id, sparse table

 private:
  std::vector<Triple> sparse_;
};

using AlgebraPtr = std::shared_ptr<const AlgebraSpec>;

// R[X_1..X_m] modulo total degree >= N; basis ordered by (total degree, X_1-major lex).
AlgebraPtr algebra_trunc_poly(int m, int N);

// Even part of the exterior algebra on m generators; the family parameter is N = m + 1.
AlgebraPtr algebra_even_exterior(int m, int N_family);

// Arbitrary validated table. basis[0] must be the unit.
AlgebraPtr algebra_from_table(std::vector<std::string> basis,
                              std::vector<std::vector<std::vector<Rat>>> mul,
                              std::vector<bool> ideal_mask, int declared_N);

AlgebraPtr algebra_create(AlgebraKind kind, int m, int N);

}  // namespace pforms
