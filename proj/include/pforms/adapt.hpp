#pragma once

// The adaption solver: given a deformed lattice and a classical basis of
// weight-k forms, solve for jet-valued q-coefficients so that the
// reconstructed functions are invariant under the lifted generators. The
// echelon coefficients (q^0..q^{d-1}) are pinned to their classical values,
// which fixes the gauge and forces cusp forms to keep a vanishing constant
// term at every jet order. Each ideal grade is a linear least-squares solve
// against the same body collocation matrix.

#include "pforms/eisenstein.hpp"

namespace pforms {

std::vector<std::complex<double>> default_collocation_grid();

struct AdaptOptions {
  int M_report = 16;                              // coefficients kept in the output
  int M_solve = 0;                                // 0: choose from the tail bound
  std::vector<std::complex<double>> samples;      // empty: default grid
  double svd_rtol = 1e-13;
};

struct AdaptResult {
  std::vector<QSeriesJet> forms;   // one adapted form per classical basis row
  std::vector<int> valuations;     // echelon valuations (0..d-1)
  double residual = 0;             // max row-normalized collocation defect
  int m_solve = 0;
};

// classical_basis: echelonized exact q-expansions (row i has valuation i). An
// empty basis means "use the level-one echelon basis of weight k".
AdaptResult adapt_form(const DeformedLattice& lat, int k,
                       std::vector<std::vector<Rat>> classical_basis = {},
                       const AdaptOptions& opt = {});

struct RankReport {
  bool ok = false;
  int body_rank = 0;
  int expected = 0;
  double jet_kernel_sigma = 0;  // smallest singular value of the jet system
};

// Certifies that the bodies span a d_expected-dimensional space and that the
// family is linearly independent over the complexified algebra (the
// free-basis criterion).
RankReport rank_verify(const std::vector<QSeriesJet>& forms, int d_expected);

// Scalar dimension of the space of truncated q-expansions with jet
// coefficients satisfying the invariance system. Uniqueness (a solution
// vanishing on the echelon window vanishes) is verified through the pinned
// system's smallest singular value; the dimension is then the number of
// echelon window data that extend to solutions: dim M_k * dim P exactly when
// the module is free of the classical rank.
int invariance_kernel_dimension(const DeformedLattice& lat, int k, int M = 16,
                                double residual_tol = 1e-6);

}  // namespace pforms
