#pragma once

// Finitely presented lattices with exact classical generator matrices, their
// first cohomology with adjoint coefficients, generator-word decomposition of
// integer matrices and coset enumeration for the cusp sum.

#include <optional>
#include <string>
#include <vector>

#include "pforms/linalgq.hpp"

namespace pforms {

// Exact classical 2x2 matrix with rational entries.
struct QMat2 {
  Rat a, b, c, d;

  static QMat2 identity() { return {Rat(1), Rat(0), Rat(0), Rat(1)}; }
  static QMat2 of(long aa, long bb, long cc, long dd) {
    return {Rat(aa), Rat(bb), Rat(cc), Rat(dd)};
  }
  Rat det() const { return a * d - b * c; }
  Rat trace() const { return a + d; }
  QMat2 inverse() const;  // requires det 1
  friend QMat2 operator*(const QMat2& x, const QMat2& y) {
    return {x.a * y.a + x.b * y.c, x.a * y.b + x.b * y.d,
            x.c * y.a + x.d * y.c, x.c * y.b + x.d * y.d};
  }
  friend QMat2 operator-(const QMat2& x) { return {-x.a, -x.b, -x.c, -x.d}; }
  friend bool operator==(const QMat2& x, const QMat2& y) {
    return x.a == y.a && x.b == y.b && x.c == y.c && x.d == y.d;
  }
  friend bool operator!=(const QMat2& x, const QMat2& y) { return !(x == y); }
};

// Words as products of generator powers. Generator indices refer to the
// presentation; index kTGen denotes the derived translation element of the
// modular presentation (expanded to S^3 R on serialization).
inline constexpr int kTGen = -1;
struct WordFactor {
  int gen;
  long exp;
};
using Word = std::vector<WordFactor>;

// flat signed-index form (1-based: +k / -k for generator k-1)
std::vector<long> word_flatten(const Word& w);
Word word_from_flat(const std::vector<long>& letters);

struct Presentation {
  std::vector<std::string> gen_names;
  std::vector<QMat2> gens;
  std::vector<std::vector<int>> relations;  // signed 1-based letters
  std::vector<int> relation_signs;          // word evaluates to sign * identity

  int num_gens() const { return static_cast<int>(gens.size()); }
  QMat2 eval_letters(const std::vector<int>& letters) const;
  void validate();  // checks det 1 and relation evaluations, fills signs
};

// The modular group: R = [[0,1],[-1,-1]], S = [[0,1],[-1,0]], relations
// R^3 = S^4 = 1 (S^2 = -1 is derived).
Presentation presentation_sl2z();

// Genus-2 surface presentation [A1,B1][A2,B2] = 1 with an irreducible exact
// rational representation (A2 = B1, B2 = A1 makes the relation hold).
Presentation presentation_surface_genus2();

// Once-punctured torus [A,B] C = 1 with C parabolic; `odd` chooses the
// trace -2 commutator (cusp conjugate to -g0), otherwise trace +2.
Presentation presentation_punctured_torus(bool odd);

// ---- cohomology ----

struct CocycleSpace {
  // vectors are sl2 coordinates (H, E, F) per generator, concatenated
  std::vector<QVec> z1;  // cocycle basis
  std::vector<QVec> b1;  // coboundary basis
  std::vector<QVec> h1;  // chosen complement of B1 in Z1
  int dim_z1 = 0, dim_b1 = 0, dim_h1 = 0;
  // for the modular presentation: the quotient model dim g/(z(R)+z(S))
  std::optional<int> quotient_model_dim;
};

CocycleSpace cocycle_space(const Presentation& pres);

// sl2 basis used throughout: H = [[1,0],[0,-1]], E = [[0,1],[0,0]], F = [[0,0],[1,0]]
QMat2 sl2_from_coords(const QVec& v);
QVec ad_apply(const QMat2& g, const QVec& v);  // Ad_g in the (H,E,F) coordinates

// ---- words and cosets for the modular group ----

struct WordDecomposition {
  Word word;
  int sign;  // evaluation equals sign * M
};

// Euclidean decomposition over {R, S} (with the derived translation as a
// compact internal factor); input must be an integer matrix with det 1.
WordDecomposition word_decompose_sl2z(const QMat2& m);

struct CosetRep {
  long c, d;
  QMat2 mat;
  Word word;
  int sign;
};

// One representative per bottom row (c,d), 0 <= c <= B, |d| <= B, gcd = 1,
// with (0,1) standing for the identity coset.
std::vector<CosetRep> coset_reps_sl2z(long B);

}  // namespace pforms
