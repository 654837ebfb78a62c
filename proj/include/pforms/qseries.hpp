#pragma once

// Classical level-one q-expansions in exact rational arithmetic (the
// independent oracle for everything downstream) and the jet-coefficient
// q-series type in which deformed forms are represented, together with its
// evaluator in a cusp frame.

#include "pforms/mobius.hpp"

namespace pforms {

// ---- exact classical oracle ----

Rat bernoulli(int n);

// E_k = 1 - (2k / B_k) sum sigma_{k-1}(n) q^n, coefficients a_0..a_M
std::vector<Rat> eisenstein_qexp(int k, int M);

// Delta = (E4^3 - E6^2) / 1728
std::vector<Rat> delta_qexp(int M);

std::vector<Rat> qexp_mul(const std::vector<Rat>& a, const std::vector<Rat>& b, int M);

// Echelonized basis of M_k (level one): d rows, row i has valuation i.
// Built from the E4^a E6^b monomials by exact elimination.
std::vector<std::vector<Rat>> basis_mk(int k, int M);

// #{(a,b) >= 0 : 4a + 6b = k}: the monomial-count dimension oracle
int dim_mk_oracle(int k);

enum class ClassicalForm { E4, E6, E8, E10, E12, E14, Delta };
std::vector<Rat> classical_form_qexp(ClassicalForm f, int M);

// ---- deformed q-series ----

struct CuspFrame {
  FrameC omega;      // the cusp coordinate chart (identity body)
  MatC transporter;  // classical transporter to the cusp (identity for level one)
};

struct QSeriesJet {
  int weight = 0;
  int trunc = 0;  // highest stored q-power
  CuspFrame frame;
  std::vector<JetC> coeffs;  // a_0 .. a_trunc

  AlgebraPtr alg() const { return frame.omega.alg(); }
  bool cusp_flag(double tol = 1e-10) const { return coeffs.empty() || coeffs[0].norm() <= tol; }
};

// Evaluator of f(z) = [sum a_n q^n](w) * Omega'(w)^{-k/2}, w = Omega^{-1}(z):
// the function on H whose frame slash is the stored series.
class FormEvaluator {
 public:
  explicit FormEvaluator(QSeriesJet series);
  JetC operator()(const JetC& z) const;
  const QSeriesJet& series() const { return series_; }

 private:
  QSeriesJet series_;
  PolyC inv_;  // Omega^{-1}
  PolyC der_;  // Omega'
};

// Cauchy product: same frame, weights add.
QSeriesJet qseries_mul(const QSeriesJet& a, const QSeriesJet& b);

// classical series embedded with the given frame (jet parts zero)
QSeriesJet qseries_classical(const std::vector<Rat>& coeffs, int weight, const CuspFrame& frame);

// a sample point paired with the generator index it checks
struct CheckPoint {
  int gen;
  std::complex<double> z;
};

// max over check points of |f|_g - f| / scale, g the point's generator
double invariance_residual(const QSeriesJet& f, const std::vector<MatC>& gens,
                           const std::vector<CheckPoint>& points);

// points clustered near the fixed point of the generator they check, where
// both z and gz keep a workable imaginary part (modular generator order R, S)
std::vector<CheckPoint> modular_check_points(int count);

}  // namespace pforms
