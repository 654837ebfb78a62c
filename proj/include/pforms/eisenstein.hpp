#pragma once

// The deformed cusp sum: F(z) = sum over lifted coset representatives of
// phi|_g(z), phi the weight factor that is invariant under the deformed
// translation (its frame slash is the constant 1). Representatives are
// enumerated as two generator-multiplication trees over bottom rows
// (c, d > 0) and (c, d < 0) plus the rows (0,1) and (1,0), so every lift is
// an exact product of lattice generators. Fourier coefficients are read off
// a DFT line in the frame coordinate.

#include "pforms/lattice.hpp"
#include "pforms/qseries.hpp"

namespace pforms {

// exact canonical cusp frame of a deformed modular lattice (identity
// transporter; the chart comes from the lifted translation)
FrameMap<CRat> modular_cusp_frame_exact(const DeformedLattice& lat);
CuspFrame modular_cusp_frame(const DeformedLattice& lat);

struct EisensteinOptions {
  int k = 6;
  long B = 5000;
  int M = 10;
  double height = 0.35;  // DFT line in the frame coordinate
  int samples = 64;
  int threads = 1;
  std::string kernel = "auto";  // auto | scalar | avx2
};

struct EisensteinResult {
  QSeriesJet series;
  double tail_estimate = 0;  // extrapolated from the outer 10% shell
  std::string kernel_used;
  long reps = 0;  // number of cosets summed
};

EisensteinResult deformed_eisenstein(const DeformedLattice& lat, const EisensteinOptions& opt);

}  // namespace pforms
