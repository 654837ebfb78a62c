// AVX2 + FMA variant of the term summation; four representatives per vector
// lane group. Compiled with -mavx2 -mfma in its own translation unit and
// invoked only after a runtime CPU check.

#if defined(__x86_64__)

#include <immintrin.h>

#include "pforms/kernels.hpp"

namespace pforms::kern {

namespace {

struct VCx {
  __m256d r, i;
};

inline VCx vmul(VCx x, VCx y) {
  return {_mm256_fmsub_pd(x.r, y.r, _mm256_mul_pd(x.i, y.i)),
          _mm256_fmadd_pd(x.r, y.i, _mm256_mul_pd(x.i, y.r))};
}
inline VCx vadd(VCx x, VCx y) { return {_mm256_add_pd(x.r, y.r), _mm256_add_pd(x.i, y.i)}; }
inline VCx vneg(VCx x) {
  __m256d z = _mm256_setzero_pd();
  return {_mm256_sub_pd(z, x.r), _mm256_sub_pd(z, x.i)};
}
inline VCx vrecip(VCx x) {
  __m256d n = _mm256_fmadd_pd(x.r, x.r, _mm256_mul_pd(x.i, x.i));
  __m256d z = _mm256_setzero_pd();
  return {_mm256_div_pd(x.r, n), _mm256_div_pd(_mm256_sub_pd(z, x.i), n)};
}

struct VJet {
  VCx v0, v1;
};
inline VJet vjmul(VJet x, VJet y) {
  return {vmul(x.v0, y.v0), vadd(vmul(x.v0, y.v1), vmul(x.v1, y.v0))};
}

inline double hsum(__m256d v) {
  __m128d lo = _mm256_castpd256_pd128(v);
  __m128d hi = _mm256_extractf128_pd(v, 1);
  __m128d s = _mm_add_pd(lo, hi);
  return _mm_cvtsd_f64(_mm_add_sd(s, _mm_unpackhi_pd(s, s)));
}

}  // namespace

void eis_term_sum_avx2(const EisBatch& batch, const EisPointCtx& ctx, double out[4]) {
  const VCx w0{_mm256_set1_pd(ctx.w0r), _mm256_set1_pd(ctx.w0i)};
  const VJet w{{_mm256_set1_pd(ctx.w0r), _mm256_set1_pd(ctx.w0i)},
               {_mm256_set1_pd(ctx.w1r), _mm256_set1_pd(ctx.w1i)}};
  const VJet fac{{_mm256_set1_pd(ctx.f0r), _mm256_set1_pd(ctx.f0i)},
                 {_mm256_set1_pd(ctx.f1r), _mm256_set1_pd(ctx.f1i)}};
  const __m256d neg_half_k = _mm256_set1_pd(-0.5 * ctx.k);

  __m256d s0r = _mm256_setzero_pd(), s0i = _mm256_setzero_pd();
  __m256d s1r = _mm256_setzero_pd(), s1i = _mm256_setzero_pd();

  int t = 0;
  for (; t + 4 <= batch.n; t += 4) {
    VJet a{{_mm256_load_pd(batch.a0r + t), _mm256_load_pd(batch.a0i + t)},
           {_mm256_load_pd(batch.a1r + t), _mm256_load_pd(batch.a1i + t)}};
    VJet b{{_mm256_load_pd(batch.b0r + t), _mm256_load_pd(batch.b0i + t)},
           {_mm256_load_pd(batch.b1r + t), _mm256_load_pd(batch.b1i + t)}};
    VJet c{{_mm256_load_pd(batch.c0r + t), _mm256_load_pd(batch.c0i + t)},
           {_mm256_load_pd(batch.c1r + t), _mm256_load_pd(batch.c1i + t)}};
    VJet d{{_mm256_load_pd(batch.d0r + t), _mm256_load_pd(batch.d0i + t)},
           {_mm256_load_pd(batch.d1r + t), _mm256_load_pd(batch.d1i + t)}};

    VJet p = vjmul(c, w);
    p.v0 = vadd(p.v0, d.v0);
    p.v1 = vadd(p.v1, d.v1);
    VCx r = vrecip(p.v0);
    VJet j{r, vmul(vneg(p.v1), vmul(r, r))};

    VJet jk{{_mm256_set1_pd(1.0), _mm256_setzero_pd()}, {_mm256_setzero_pd(), _mm256_setzero_pd()}};
    VJet base = j;
    int e = ctx.k;
    while (e) {
      if (e & 1) jk = vjmul(jk, base);
      e >>= 1;
      if (e) base = vjmul(base, base);
    }

    VCx num0 = vadd(vmul(a.v0, w0), b.v0);
    VCx u0 = vmul(num0, r);

    VCx pd{_mm256_setzero_pd(), _mm256_setzero_pd()};
    for (int m = ctx.pd_deg; m >= 0; --m)
      pd = vadd(vmul(pd, u0), VCx{_mm256_set1_pd(ctx.pdr[m]), _mm256_set1_pd(ctx.pdi[m])});
    VJet phi{{_mm256_set1_pd(1.0), _mm256_setzero_pd()},
             {_mm256_mul_pd(neg_half_k, pd.r), _mm256_mul_pd(neg_half_k, pd.i)}};

    VJet term = vjmul(vjmul(phi, jk), fac);
    s0r = _mm256_add_pd(s0r, term.v0.r);
    s0i = _mm256_add_pd(s0i, term.v0.i);
    s1r = _mm256_add_pd(s1r, term.v1.r);
    s1i = _mm256_add_pd(s1i, term.v1.i);
  }

  out[0] += hsum(s0r);
  out[1] += hsum(s0i);
  out[2] += hsum(s1r);
  out[3] += hsum(s1i);

  if (t < batch.n) {
    EisBatch rest;
    rest.n = batch.n - t;
    for (int i = 0; i < rest.n; ++i) {
      rest.a0r[i] = batch.a0r[t + i]; rest.a0i[i] = batch.a0i[t + i];
      rest.a1r[i] = batch.a1r[t + i]; rest.a1i[i] = batch.a1i[t + i];
      rest.b0r[i] = batch.b0r[t + i]; rest.b0i[i] = batch.b0i[t + i];
      rest.b1r[i] = batch.b1r[t + i]; rest.b1i[i] = batch.b1i[t + i];
      rest.c0r[i] = batch.c0r[t + i]; rest.c0i[i] = batch.c0i[t + i];
      rest.c1r[i] = batch.c1r[t + i]; rest.c1i[i] = batch.c1i[t + i];
      rest.d0r[i] = batch.d0r[t + i]; rest.d0i[i] = batch.d0i[t + i];
      rest.d1r[i] = batch.d1r[t + i]; rest.d1i[i] = batch.d1i[t + i];
    }
    eis_term_sum_scalar(rest, ctx, out);
  }
}

}  // namespace pforms::kern

#endif  // __x86_64__
