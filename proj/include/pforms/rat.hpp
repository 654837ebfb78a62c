#pragma once

// Scalar ground fields for jet arithmetic.
//
// Exact side: Rat = arbitrary-precision rationals (GMP), CRat = Gaussian
// rationals. Floating side: double / std::complex<double>. ScalarTraits
// gives the generic code a uniform way to build constants, test exactness,
// take conjugates and estimate magnitudes for pivoting.

#include <gmpxx.h>

#include <complex>
#include <cstdint>
#include <string>

#include "pforms/util.hpp"

namespace pforms {

using Rat = mpq_class;

inline Rat rat_of(std::int64_t n, std::int64_t d = 1) {
  require(d != 0, "rational with zero denominator");
  Rat r(static_cast<long>(n), static_cast<long>(d));
  r.canonicalize();
  return r;
}

inline std::string rat_str(const Rat& r) { return r.get_str(); }

inline Rat rat_parse(const std::string& s) {
  Rat r;
  if (r.set_str(s, 10) != 0) throw math_error("bad rational literal: " + s);
  r.canonicalize();
  return r;
}

// Gaussian rationals a + b i.
struct CRat {
  Rat re, im;

  CRat() : re(0), im(0) {}
  CRat(Rat r) : re(std::move(r)), im(0) {}
  CRat(Rat r, Rat i) : re(std::move(r)), im(std::move(i)) {}
  CRat(std::int64_t n) : re(rat_of(n)), im(0) {}

  friend CRat operator+(const CRat& a, const CRat& b) { return {a.re + b.re, a.im + b.im}; }
  friend CRat operator-(const CRat& a, const CRat& b) { return {a.re - b.re, a.im - b.im}; }
  friend CRat operator-(const CRat& a) { return {-a.re, -a.im}; }
  friend CRat operator*(const CRat& a, const CRat& b) {
    return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
  }
  friend CRat operator/(const CRat& a, const CRat& b) {
    Rat n = b.re * b.re + b.im * b.im;
    require(n != 0, "division by zero (CRat)");
    return {(a.re * b.re + a.im * b.im) / n, (a.im * b.re - a.re * b.im) / n};
  }
  CRat& operator+=(const CRat& b) { re += b.re; im += b.im; return *this; }
  CRat& operator-=(const CRat& b) { re -= b.re; im -= b.im; return *this; }
  CRat& operator*=(const CRat& b) { *this = *this * b; return *this; }
  friend bool operator==(const CRat& a, const CRat& b) { return a.re == b.re && a.im == b.im; }
  friend bool operator!=(const CRat& a, const CRat& b) { return !(a == b); }
};

inline CRat crat_i() { return CRat(rat_of(0), rat_of(1)); }

template <class K>
struct ScalarTraits;

template <>
struct ScalarTraits<Rat> {
  static constexpr bool exact = true;
  static constexpr bool complex_field = false;
  static Rat zero() { return Rat(0); }
  static Rat one() { return Rat(1); }
  static Rat from_rat(const Rat& r) { return r; }
  static bool is_zero(const Rat& x) { return x == 0; }
  static Rat conj(const Rat& x) { return x; }
  static double mag(const Rat& x) { return std::abs(x.get_d()); }
  static std::complex<double> approx(const Rat& x) { return {x.get_d(), 0.0}; }
};

template <>
struct ScalarTraits<CRat> {
  static constexpr bool exact = true;
  static constexpr bool complex_field = true;
  static CRat zero() { return CRat(); }
  static CRat one() { return CRat(rat_of(1)); }
  static CRat from_rat(const Rat& r) { return CRat(r); }
  static bool is_zero(const CRat& x) { return x.re == 0 && x.im == 0; }
  static CRat conj(const CRat& x) { return {x.re, -x.im}; }
  static double mag(const CRat& x) {
    return std::abs(x.re.get_d()) + std::abs(x.im.get_d());
  }
  static std::complex<double> approx(const CRat& x) { return {x.re.get_d(), x.im.get_d()}; }
};

template <>
struct ScalarTraits<double> {
  static constexpr bool exact = false;
  static constexpr bool complex_field = false;
  static double zero() { return 0.0; }
  static double one() { return 1.0; }
  static double from_rat(const Rat& r) { return r.get_d(); }
  static bool is_zero(double x) { return x == 0.0; }
  static double conj(double x) { return x; }
  static double mag(double x) { return std::abs(x); }
  static std::complex<double> approx(double x) { return {x, 0.0}; }
};

template <>
struct ScalarTraits<std::complex<double>> {
  static constexpr bool exact = false;
  static constexpr bool complex_field = true;
  static std::complex<double> zero() { return {0.0, 0.0}; }
  static std::complex<double> one() { return {1.0, 0.0}; }
  static std::complex<double> from_rat(const Rat& r) { return {r.get_d(), 0.0}; }
  static bool is_zero(const std::complex<double>& x) { return x == std::complex<double>(0.0, 0.0); }
  static std::complex<double> conj(const std::complex<double>& x) { return std::conj(x); }
  static double mag(const std::complex<double>& x) { return std::abs(x.real()) + std::abs(x.imag()); }
  static std::complex<double> approx(const std::complex<double>& x) { return x; }
};

}  // namespace pforms
