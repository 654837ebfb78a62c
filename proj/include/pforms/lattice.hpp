#pragma once

// Deformed lattices: an assignment generator -> jet matrix whose body is the
// classical generator and which satisfies the presentation's relations
// exactly. Built by lifting a cocycle direction order by order through the
// nilpotent filtration.

#include "pforms/mat2.hpp"
#include "pforms/presentation.hpp"

namespace pforms {

struct DeformedLattice {
  Presentation pres;
  AlgebraPtr alg;
  std::vector<Mat2<Rat>> gens;  // exact real jets, det 1

  Mat2<Rat> eval_word(const Word& w) const;
  Mat2<Rat> eval_letters(const std::vector<int>& letters) const;
  // the unique lift of +-M for an integer classical matrix, via its word
  Mat2<Rat> lift_classical(const QMat2& m, int* sign_out = nullptr) const;
  void check_relations() const;  // throws unless every relation holds exactly
};

// gamma_i -> gamma_i exp(direction * u_i) followed by order-by-order
// correction. `cocycle` is a concatenated sl2 coordinate vector; `direction`
// is a nilpotent real jet. Obstructions are reported by throwing.
DeformedLattice lift_deformation(const Presentation& pres, const QVec& cocycle,
                                 const AlgebraPtr& alg, const JetQ& direction);

// generator-wise conjugation by a body-identity jet matrix
DeformedLattice conjugate_lattice(const DeformedLattice& lat, const Mat2<Rat>& g);

// floating copy of the generator matrices (complex entries, zero imaginary part)
std::vector<MatC> lattice_to_float(const DeformedLattice& lat);

Mat2<Rat> embed_classical(const AlgebraPtr& alg, const QMat2& m);

}  // namespace pforms
