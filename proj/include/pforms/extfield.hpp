#pragma once

// Exact complex scalars in Q(i)[x]/(m(x)) for a monic real-coefficient
// modulus m with a designated real root. Degree-4 moduli such as
// x^4 - 3/4 make the transport matrix at the order-3 elliptic point exactly
// representable (its entries involve sqrt(3) and sqrt(sqrt(3)/2)).
//
// Elements with a null context behave as plain Q(i) and promote when they
// meet an element with a context, so generic code can use
// ScalarTraits<Ext>::one() without threading the context everywhere.

#include <memory>
#include <vector>

#include "pforms/rat.hpp"

namespace pforms {

struct ExtCtx {
  // monic modulus: x^deg + mod[deg-1] x^{deg-1} + ... + mod[0], coefficients in Q.
  std::vector<Rat> mod;
  double root_approx = 0.0;  // the designated real root, for magnitudes only

  int deg() const { return static_cast<int>(mod.size()); }
};

// x^4 = 3/4, root 3^{1/4}/sqrt(2) > 0.
std::shared_ptr<const ExtCtx> ext_ctx_quartic_3_4();

struct Ext {
  std::shared_ptr<const ExtCtx> ctx;  // null: plain Q(i)
  std::vector<CRat> c;                // coefficients in the power basis, size deg (1 if null ctx)

  Ext() : c(1) {}
  explicit Ext(CRat v) : c{std::move(v)} {}
  Ext(std::shared_ptr<const ExtCtx> cx, std::vector<CRat> cc) : ctx(std::move(cx)), c(std::move(cc)) {}

  static Ext in(const std::shared_ptr<const ExtCtx>& cx, CRat v) {
    std::vector<CRat> cc(cx ? cx->deg() : 1);
    cc[0] = std::move(v);
    return Ext(cx, std::move(cc));
  }
  // the generator (image of x)
  static Ext gen(const std::shared_ptr<const ExtCtx>& cx) {
    require(cx && cx->deg() >= 2, "generator needs a context of degree >= 2");
    std::vector<CRat> cc(cx->deg());
    cc[1] = CRat(rat_of(1));
    return Ext(cx, std::move(cc));
  }

  bool is_zero() const {
    for (const auto& x : c)
      if (!(x.re == 0 && x.im == 0)) return false;
    return true;
  }

  friend Ext operator+(const Ext& a, const Ext& b);
  friend Ext operator-(const Ext& a, const Ext& b);
  friend Ext operator-(const Ext& a);
  friend Ext operator*(const Ext& a, const Ext& b);
  friend Ext operator/(const Ext& a, const Ext& b);
  Ext& operator+=(const Ext& b) { *this = *this + b; return *this; }
  Ext& operator-=(const Ext& b) { *this = *this - b; return *this; }
  Ext& operator*=(const Ext& b) { *this = *this * b; return *this; }
  friend bool operator==(const Ext& a, const Ext& b) { return (a - b).is_zero(); }
  friend bool operator!=(const Ext& a, const Ext& b) { return !(a == b); }
};

Ext ext_inverse(const Ext& a);
std::complex<double> ext_approx(const Ext& a);

template <>
struct ScalarTraits<Ext> {
  static constexpr bool exact = true;
  static constexpr bool complex_field = true;
  static Ext zero() { return Ext(); }
  static Ext one() { return Ext(CRat(rat_of(1))); }
  static Ext from_rat(const Rat& r) { return Ext(CRat(r)); }
  static bool is_zero(const Ext& x) { return x.is_zero(); }
  static Ext conj(const Ext& x) {
    Ext r = x;
    for (auto& v : r.c) v.im = -v.im;
    return r;
  }
  static double mag(const Ext& x) {
    auto z = ext_approx(x);
    return std::abs(z.real()) + std::abs(z.imag());
  }
  static std::complex<double> approx(const Ext& x) { return ext_approx(x); }
};

}  // namespace pforms
