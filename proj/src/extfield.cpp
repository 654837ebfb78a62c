#include "pforms/extfield.hpp"

#include <cmath>

namespace pforms {

namespace {

using Poly = std::vector<CRat>;  // dense, ascending powers

int pdeg(const Poly& p) {
  for (int i = static_cast<int>(p.size()) - 1; i >= 0; --i)
    if (!(p[i].re == 0 && p[i].im == 0)) return i;
  return -1;
}

Poly ptrim(Poly p) {
  int d = pdeg(p);
  p.resize(static_cast<size_t>(d + 1 > 0 ? d + 1 : 1));
  return p;
}

Poly pmul(const Poly& a, const Poly& b) {
  Poly r(a.size() + b.size() - 1);
  for (size_t i = 0; i < a.size(); ++i)
    for (size_t j = 0; j < b.size(); ++j) r[i + j] += a[i] * b[j];
  return r;
}

Poly psub(Poly a, const Poly& b) {
  if (a.size() < b.size()) a.resize(b.size());
  for (size_t i = 0; i < b.size(); ++i) a[i] -= b[i];
  return a;
}

// divide a by b (b nonzero), return {quotient, remainder}
std::pair<Poly, Poly> pdivmod(Poly a, const Poly& b) {
  int db = pdeg(b);
  require(db >= 0, "polynomial division by zero");
  Poly q(std::max<size_t>(a.size(), 1));
  for (int da = pdeg(a); da >= db; da = pdeg(a)) {
    CRat f = a[static_cast<size_t>(da)] / b[static_cast<size_t>(db)];
    q[static_cast<size_t>(da - db)] += f;
    for (int i = 0; i <= db; ++i)
      a[static_cast<size_t>(da - db + i)] -= f * b[static_cast<size_t>(i)];
    a[static_cast<size_t>(da)] = CRat();  // force exact cancellation of the lead
  }
  return {ptrim(q), ptrim(a)};
}

Poly modulus_poly(const ExtCtx& cx) {
  Poly m(static_cast<size_t>(cx.deg()) + 1);
  for (int i = 0; i < cx.deg(); ++i) m[static_cast<size_t>(i)] = CRat(cx.mod[static_cast<size_t>(i)]);
  m[static_cast<size_t>(cx.deg())] = CRat(rat_of(1));
  return m;
}

std::shared_ptr<const ExtCtx> join_ctx(const Ext& a, const Ext& b) {
  if (a.ctx && b.ctx) {
    require(a.ctx == b.ctx, "mixing distinct field extensions");
    return a.ctx;
  }
  return a.ctx ? a.ctx : b.ctx;
}

std::vector<CRat> lift_to(const std::shared_ptr<const ExtCtx>& cx, const Ext& a) {
  size_t n = cx ? static_cast<size_t>(cx->deg()) : 1;
  std::vector<CRat> c(n);
  for (size_t i = 0; i < a.c.size() && i < n; ++i) c[i] = a.c[i];
  return c;
}

}  // namespace

std::shared_ptr<const ExtCtx> ext_ctx_quartic_3_4() {
  static std::shared_ptr<const ExtCtx> cx = [] {
    auto p = std::make_shared<ExtCtx>();
    p->mod = {rat_of(-3, 4), rat_of(0), rat_of(0), rat_of(0)};
    p->root_approx = std::sqrt(std::sqrt(3.0) / 2.0);
    return p;
  }();
  return cx;
}

Ext operator+(const Ext& a, const Ext& b) {
  auto cx = join_ctx(a, b);
  auto ca = lift_to(cx, a), cb = lift_to(cx, b);
  for (size_t i = 0; i < ca.size(); ++i) ca[i] += cb[i];
  return Ext(cx, std::move(ca));
}

Ext operator-(const Ext& a, const Ext& b) {
  auto cx = join_ctx(a, b);
  auto ca = lift_to(cx, a), cb = lift_to(cx, b);
  for (size_t i = 0; i < ca.size(); ++i) ca[i] -= cb[i];
  return Ext(cx, std::move(ca));
}

Ext operator-(const Ext& a) {
  Ext r = a;
  for (auto& v : r.c) v = -v;
  return r;
}

Ext operator*(const Ext& a, const Ext& b) {
  auto cx = join_ctx(a, b);
  if (!cx) return Ext(a.c[0] * b.c[0]);
  Poly prod = pmul(lift_to(cx, a), lift_to(cx, b));
  auto [q, r] = pdivmod(std::move(prod), modulus_poly(*cx));
  (void)q;
  r.resize(static_cast<size_t>(cx->deg()));
  return Ext(cx, std::move(r));
}

Ext ext_inverse(const Ext& a) {
  require(!a.is_zero(), "inverse of zero (Ext)");
  if (!a.ctx) {
    CRat one(rat_of(1));
    return Ext(one / a.c[0]);
  }
  // extended Euclid: s*a + t*m = gcd; gcd must be a nonzero constant
  Poly r0 = modulus_poly(*a.ctx), r1 = ptrim(a.c);
  Poly s0 = {CRat()}, s1 = {CRat(rat_of(1))};
  while (pdeg(r1) > 0) {
    auto [q, r2] = pdivmod(r0, r1);
    Poly s2 = psub(s0, pmul(q, s1));
    r0 = std::move(r1);
    r1 = std::move(r2);
    s0 = std::move(s1);
    s1 = ptrim(s2);
    require(pdeg(r1) >= 0, "zero divisor in extension (reducible modulus?)");
  }
  CRat g = r1[0];
  require(!(g.re == 0 && g.im == 0), "zero divisor in extension (reducible modulus?)");
  CRat ginv = CRat(rat_of(1)) / g;
  Poly s = s1;
  for (auto& v : s) v = v * ginv;
  s.resize(static_cast<size_t>(a.ctx->deg()));
  return Ext(a.ctx, std::move(s));
}

Ext operator/(const Ext& a, const Ext& b) { return a * ext_inverse(b); }

std::complex<double> ext_approx(const Ext& a) {
  double t = a.ctx ? a.ctx->root_approx : 0.0;
  std::complex<double> z{0.0, 0.0};
  double p = 1.0;
  for (const auto& v : a.c) {
    z += std::complex<double>(v.re.get_d(), v.im.get_d()) * p;
    p *= t;
  }
  return z;
}

}  // namespace pforms
