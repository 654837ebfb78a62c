#include <cmath>

#include "pforms/kernels.hpp"

namespace pforms::kern {

namespace {

struct Cx {
  double r, i;
};
inline Cx cmul(Cx x, Cx y) { return {x.r * y.r - x.i * y.i, x.r * y.i + x.i * y.r}; }
inline Cx cadd(Cx x, Cx y) { return {x.r + y.r, x.i + y.i}; }
inline Cx crecip(Cx x) {
  double n = x.r * x.r + x.i * x.i;
  return {x.r / n, -x.i / n};
}

struct JetCx {
  Cx v0, v1;
};
inline JetCx jmul(JetCx x, JetCx y) {
  return {cmul(x.v0, y.v0), cadd(cmul(x.v0, y.v1), cmul(x.v1, y.v0))};
}

}  // namespace

void eis_term_sum_scalar(const EisBatch& batch, const EisPointCtx& ctx, double out[4]) {
  const Cx w0{ctx.w0r, ctx.w0i};
  const JetCx w{{ctx.w0r, ctx.w0i}, {ctx.w1r, ctx.w1i}};
  const JetCx fac{{ctx.f0r, ctx.f0i}, {ctx.f1r, ctx.f1i}};
  const double half_k = 0.5 * ctx.k;
  double s0r = 0, s0i = 0, s1r = 0, s1i = 0;
  for (int t = 0; t < batch.n; ++t) {
    JetCx a{{batch.a0r[t], batch.a0i[t]}, {batch.a1r[t], batch.a1i[t]}};
    JetCx b{{batch.b0r[t], batch.b0i[t]}, {batch.b1r[t], batch.b1i[t]}};
    JetCx c{{batch.c0r[t], batch.c0i[t]}, {batch.c1r[t], batch.c1i[t]}};
    JetCx d{{batch.d0r[t], batch.d0i[t]}, {batch.d1r[t], batch.d1i[t]}};

    JetCx p = jmul(c, w);
    p.v0 = cadd(p.v0, d.v0);
    p.v1 = cadd(p.v1, d.v1);
    Cx r = crecip(p.v0);
    JetCx j{r, cmul({-p.v1.r, -p.v1.i}, cmul(r, r))};

    // jk = j^k by binary powering on first-order jets
    JetCx jk{{1, 0}, {0, 0}};
    JetCx base = j;
    int e = ctx.k;
    while (e) {
      if (e & 1) jk = jmul(jk, base);
      e >>= 1;
      if (e) base = jmul(base, base);
    }

    // u0 = body of the Möbius image
    Cx num0 = cadd(cmul(a.v0, w0), b.v0);
    Cx u0 = cmul(num0, r);

    // P'(u0) by Horner
    Cx pd{0, 0};
    for (int m = ctx.pd_deg; m >= 0; --m) pd = cadd(cmul(pd, u0), Cx{ctx.pdr[m], ctx.pdi[m]});
    JetCx phi{{1, 0}, {-half_k * pd.r, -half_k * pd.i}};

    JetCx term = jmul(jmul(phi, jk), fac);
    s0r += term.v0.r;
    s0i += term.v0.i;
    s1r += term.v1.r;
    s1i += term.v1.i;
  }
  out[0] += s0r;
  out[1] += s0i;
  out[2] += s1r;
  out[3] += s1i;
}

double eis_term_mag_sum(const EisBatch& batch, const EisPointCtx& ctx) {
  double acc[4] = {0, 0, 0, 0};
  // magnitude via per-term absolute values: run term by term
  EisBatch single;
  single.n = 1;
  double total = 0;
  for (int t = 0; t < batch.n; ++t) {
    single.a0r[0] = batch.a0r[t]; single.a0i[0] = batch.a0i[t];
    single.a1r[0] = batch.a1r[t]; single.a1i[0] = batch.a1i[t];
    single.b0r[0] = batch.b0r[t]; single.b0i[0] = batch.b0i[t];
    single.b1r[0] = batch.b1r[t]; single.b1i[0] = batch.b1i[t];
    single.c0r[0] = batch.c0r[t]; single.c0i[0] = batch.c0i[t];
    single.c1r[0] = batch.c1r[t]; single.c1i[0] = batch.c1i[t];
    single.d0r[0] = batch.d0r[t]; single.d0i[0] = batch.d0i[t];
    single.d1r[0] = batch.d1r[t]; single.d1i[0] = batch.d1i[t];
    acc[0] = acc[1] = acc[2] = acc[3] = 0;
    eis_term_sum_scalar(single, ctx, acc);
    total += std::hypot(acc[0], acc[1]) + std::hypot(acc[2], acc[3]);
  }
  return total;
}

}  // namespace pforms::kern
