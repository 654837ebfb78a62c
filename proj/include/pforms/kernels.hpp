#pragma once

// Batched summation of slash terms for the deformed cusp sum, specialized to
// first-order jets (value + one nilpotent component, complex doubles). The
// scalar kernel is the reference; an AVX2 variant is selected at runtime on
// capable hosts and is equivalence-tested against the scalar path.
//
// Term for a lifted coset representative g = [[a,b],[c,d]] at a prepared
// sample point:
//   p   = c*w + d                (jet)
//   j   = 1/p, jk = j^k
//   u0  = body((a*w + b) * j)    (classical image of the point)
//   phi = (1, -(k/2) P'(u0))     (the inverse-frame weight factor)
//   term = phi * jk * fac
// accumulated over the batch in order.

#include <string>

namespace pforms::kern {

struct EisBatch {
  static constexpr int CAP = 2048;
  int n = 0;
  alignas(32) double a0r[CAP], a0i[CAP], a1r[CAP], a1i[CAP];
  alignas(32) double b0r[CAP], b0i[CAP], b1r[CAP], b1i[CAP];
  alignas(32) double c0r[CAP], c0i[CAP], c1r[CAP], c1i[CAP];
  alignas(32) double d0r[CAP], d0i[CAP], d1r[CAP], d1i[CAP];
};

struct EisPointCtx {
  double w0r = 0, w0i = 0, w1r = 0, w1i = 0;  // w = Omega(z_s)
  double f0r = 1, f0i = 0, f1r = 0, f1i = 0;  // Omega'(z_s)^{k/2}
  int pd_deg = -1;                            // P' coefficients, ascending
  double pdr[8] = {0}, pdi[8] = {0};
  int k = 6;
};

// out[0..3] += (Re sum0, Im sum0, Re sum1, Im sum1)
using TermSumFn = void (*)(const EisBatch&, const EisPointCtx&, double out[4]);

void eis_term_sum_scalar(const EisBatch& batch, const EisPointCtx& ctx, double out[4]);

bool cpu_has_avx2();

// name: "auto" | "scalar" | "avx2"; the chosen variant is written back
TermSumFn select_kernel(const std::string& name, std::string* chosen);

// magnitude sum of the terms at a point (scalar only; tail diagnostics)
double eis_term_mag_sum(const EisBatch& batch, const EisPointCtx& ctx);

}  // namespace pforms::kern
