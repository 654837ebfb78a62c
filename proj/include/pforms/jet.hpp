#pragma once

// Jets: elements of the parameter algebra P (or its complexification) over a
// scalar field K. A jet is a coefficient vector against the algebra basis;
// the body is the unit coefficient. All operations are pure.

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <vector>

#include "pforms/algebra.hpp"
#include "pforms/rat.hpp"

namespace pforms {

inline Rat factorial_rat(int n) {
  Rat r(1);
  for (int i = 2; i <= n; ++i) r *= i;
  return r;
}

// pointer fast path; distinct instances of a rebuilt algebra compare by id
inline bool same_algebra(const AlgebraPtr& a, const AlgebraPtr& b) {
  if (a == b) return true;
  return a && b && a->dim() == b->dim() && a->id == b->id;
}

template <class K>
struct Jet {
  AlgebraPtr alg;
  std::vector<K> c;

  Jet() = default;
  explicit Jet(AlgebraPtr a) : alg(std::move(a)), c(static_cast<size_t>(alg->dim()), ScalarTraits<K>::zero()) {}
  Jet(AlgebraPtr a, std::vector<K> cc) : alg(std::move(a)), c(std::move(cc)) {
    require(static_cast<int>(c.size()) == alg->dim(), "jet coefficient count mismatch");
  }

  static Jet constant(AlgebraPtr a, K v) {
    Jet r(std::move(a));
    r.c[0] = std::move(v);
    return r;
  }
  static Jet unit(AlgebraPtr a) { return constant(std::move(a), ScalarTraits<K>::one()); }
  // the basis element e_idx
  static Jet basis(AlgebraPtr a, int idx) {
    Jet r(std::move(a));
    require(idx >= 0 && idx < r.alg->dim(), "basis index out of range");
    r.c[static_cast<size_t>(idx)] = ScalarTraits<K>::one();
    return r;
  }

  const K& body() const { return c[0]; }
  bool body_is_zero() const { return ScalarTraits<K>::is_zero(c[0]); }
  bool is_zero() const {
    for (const auto& x : c)
      if (!ScalarTraits<K>::is_zero(x)) return false;
    return true;
  }
  // zero on every ideal basis element
  bool equals_body() const {
    for (size_t i = 1; i < c.size(); ++i)
      if (!ScalarTraits<K>::is_zero(c[i])) return false;
    return true;
  }
  Jet body_part() const { return constant(alg, c[0]); }
  Jet nil_part() const {
    Jet r = *this;
    r.c[0] = ScalarTraits<K>::zero();
    return r;
  }
  double norm() const {  // max coefficient magnitude
    double n = 0;
    for (const auto& x : c) n = std::max(n, ScalarTraits<K>::mag(x));
    return n;
  }

  friend bool operator==(const Jet& a, const Jet& b) {
    return same_algebra(a.alg, b.alg) && a.c == b.c;
  }
  friend bool operator!=(const Jet& a, const Jet& b) { return !(a == b); }
};

namespace detail {
template <class K>
void check_same(const Jet<K>& a, const Jet<K>& b) {
  require(same_algebra(a.alg, b.alg), "jets over different algebras");
}
}  // namespace detail

template <class K>
Jet<K> operator+(const Jet<K>& a, const Jet<K>& b) {
  detail::check_same(a, b);
  Jet<K> r = a;
  for (size_t i = 0; i < r.c.size(); ++i) r.c[i] += b.c[i];
  return r;
}

template <class K>
Jet<K> operator-(const Jet<K>& a, const Jet<K>& b) {
  detail::check_same(a, b);
  Jet<K> r = a;
  for (size_t i = 0; i < r.c.size(); ++i) r.c[i] -= b.c[i];
  return r;
}

template <class K>
Jet<K> operator-(const Jet<K>& a) {
  Jet<K> r = a;
  for (auto& x : r.c) x = -x;
  return r;
}

template <class K>
Jet<K> operator*(const Jet<K>& a, const K& s) {
  Jet<K> r = a;
  for (auto& x : r.c) x *= s;
  return r;
}

template <class K>
Jet<K> operator*(const K& s, const Jet<K>& a) { return a * s; }

template <class K>
Jet<K> operator*(const Jet<K>& a, const Jet<K>& b) {
  detail::check_same(a, b);
  const AlgebraSpec& A = *a.alg;
  int n = A.dim();
  Jet<K> r(a.alg);
  for (int i = 0; i < n; ++i) {
    if (ScalarTraits<K>::is_zero(a.c[static_cast<size_t>(i)])) continue;
    for (int j = 0; j < n; ++j) {
      if (ScalarTraits<K>::is_zero(b.c[static_cast<size_t>(j)])) continue;
      K f = a.c[static_cast<size_t>(i)] * b.c[static_cast<size_t>(j)];
      const auto& t = A.mul_coeffs(i, j);
      for (int k = 0; k < n; ++k)
        if (t[static_cast<size_t>(k)] != 0) r.c[static_cast<size_t>(k)] += f * ScalarTraits<K>::from_rat(t[static_cast<size_t>(k)]);
    }
  }
  return r;
}

template <class K>
Jet<K>& operator+=(Jet<K>& a, const Jet<K>& b) { a = a + b; return a; }
template <class K>
Jet<K>& operator-=(Jet<K>& a, const Jet<K>& b) { a = a - b; return a; }
template <class K>
Jet<K>& operator*=(Jet<K>& a, const Jet<K>& b) { a = a * b; return a; }

// Geometric series against the nilpotent part; requires invertible body.
template <class K>
Jet<K> jet_invert(const Jet<K>& a) {
  require(!a.body_is_zero(), "jet not invertible (zero body)");
  K binv = ScalarTraits<K>::one() / a.body();
  Jet<K> u = a.nil_part() * binv;  // a = body * (1 + u), u nilpotent
  Jet<K> acc = Jet<K>::unit(a.alg);
  Jet<K> term = Jet<K>::unit(a.alg);
  for (int i = 1; i < a.alg->N; ++i) {
    term = term * u;
    if (term.is_zero()) break;
    if (i % 2 == 1) acc -= term; else acc += term;
  }
  return acc * binv;
}

template <class K>
Jet<K> operator/(const Jet<K>& a, const Jet<K>& b) { return a * jet_invert(b); }

// exp of a jet. Exact scalars require zero body (the nilpotent series
// terminates); floating scalars accept any body.
template <class K>
Jet<K> jet_exp(const Jet<K>& a) {
  K body_factor = ScalarTraits<K>::one();
  Jet<K> n = a;
  if constexpr (ScalarTraits<K>::exact) {
    require(a.body_is_zero(), "exact-mode exp needs zero body");
  } else {
    body_factor = std::exp(a.body());
    n = a.nil_part();
  }
  Jet<K> acc = Jet<K>::unit(a.alg);
  Jet<K> term = Jet<K>::unit(a.alg);
  for (int i = 1; i < a.alg->N; ++i) {
    term = term * n;
    if (term.is_zero()) break;
    acc += term * ScalarTraits<K>::from_rat(Rat(1) / factorial_rat(i));
  }
  return acc * body_factor;
}

// log of a jet with body 1 (exact) or positive/real-nonzero body (floating).
template <class K>
Jet<K> jet_log(const Jet<K>& a) {
  K body_term = ScalarTraits<K>::zero();
  Jet<K> u;
  if constexpr (ScalarTraits<K>::exact) {
    require(a.body() == ScalarTraits<K>::one(), "exact-mode log needs body 1");
    u = a.nil_part();
  } else {
    auto b = ScalarTraits<K>::approx(a.body());
    require(b != std::complex<double>(0.0, 0.0), "log of zero body");
    if constexpr (!ScalarTraits<K>::complex_field)
      require(b.real() > 0, "real log needs positive body");
    body_term = std::log(a.body());
    u = a.nil_part() * (ScalarTraits<K>::one() / a.body());
  }
  Jet<K> acc(a.alg);
  Jet<K> term = Jet<K>::unit(a.alg);
  for (int i = 1; i < a.alg->N; ++i) {
    term = term * u;
    if (term.is_zero()) break;
    Rat coef = Rat((i % 2 == 1) ? 1 : -1) / Rat(i);
    acc += term * ScalarTraits<K>::from_rat(coef);
  }
  acc.c[0] += body_term;
  return acc;
}

// a^r for rational exponent via the binomial series; body must be 1 in exact
// mode (general positive bodies only in floating mode).
template <class K>
Jet<K> jet_pow(const Jet<K>& a, const Rat& r) {
  if (r.get_den() == 1 && mpz_fits_sint_p(r.get_num().get_mpz_t())) {
    long e = r.get_num().get_si();
    Jet<K> base = e >= 0 ? a : jet_invert(a);
    long n = e >= 0 ? e : -e;
    Jet<K> acc = Jet<K>::unit(a.alg);
    Jet<K> p = base;
    while (n) {
      if (n & 1) acc = acc * p;
      n >>= 1;
      if (n) p = p * p;
    }
    return acc;
  }
  K scale = ScalarTraits<K>::one();
  Jet<K> u;
  if constexpr (ScalarTraits<K>::exact) {
    require(a.body() == ScalarTraits<K>::one(), "exact-mode fractional pow needs body 1");
    u = a.nil_part();
  } else {
    // no silent principal branch: fractional powers need a positive real
    // body (designated branches go through jet_nth_root)
    auto b = ScalarTraits<K>::approx(a.body());
    require(b.real() > 0 && std::abs(b.imag()) <= 1e-12 * b.real(),
            "fractional pow needs a positive real body; use an explicit root branch otherwise");
    scale = std::pow(a.body(), K(r.get_d()));
    u = a.nil_part() * (ScalarTraits<K>::one() / a.body());
  }
  Jet<K> acc = Jet<K>::unit(a.alg);
  Jet<K> term = Jet<K>::unit(a.alg);
  Rat binom(1);
  for (int i = 1; i < a.alg->N; ++i) {
    binom *= (r - (i - 1)) / Rat(i);
    term = term * u;
    if (term.is_zero()) break;
    acc += term * ScalarTraits<K>::from_rat(binom);
  }
  return acc * scale;
}

// n-th root with an explicit branch: branch^n must equal the body exactly
// (exact mode) or approximately (floating mode). No silent principal branch.
template <class K>
Jet<K> jet_nth_root(const Jet<K>& a, int n, const K& branch) {
  require(n >= 1, "root order must be positive");
  require(!a.body_is_zero(), "nth root needs invertible body");
  K bp = ScalarTraits<K>::one();
  for (int i = 0; i < n; ++i) bp *= branch;
  if constexpr (ScalarTraits<K>::exact) {
    require(ScalarTraits<K>::is_zero(bp - a.body()), "branch designation does not match the body");
  } else {
    double scale = std::max(1.0, ScalarTraits<K>::mag(a.body()));
    require(ScalarTraits<K>::mag(bp - a.body()) <= 1e-9 * scale, "branch designation does not match the body");
  }
  Jet<K> unital = a * jet_invert(Jet<K>::constant(a.alg, a.body()));
  return jet_pow(unital, Rat(1, n)) * branch;
}

// Formal Taylor composition: derivs(k) supplies the mixed partial derivative
// of h at the body point for the multi-index k; the result is
// sum_k 1/k! * d^k h * prod (a_i - a_i#)^{k_i}, truncated by nilpotency.
template <class K>
Jet<K> taylor_compose(const std::function<K(const std::vector<int>&)>& derivs,
                      const std::vector<Jet<K>>& args) {
  require(!args.empty(), "taylor_compose needs at least one argument");
  AlgebraPtr alg = args[0].alg;
  for (const auto& a : args) require(a.alg == alg, "jets over different algebras");
  int N = alg->N;
  size_t nargs = args.size();

  std::vector<Jet<K>> nil;
  nil.reserve(nargs);
  for (const auto& a : args) nil.push_back(a.nil_part());

  Jet<K> acc(alg);
  std::vector<int> k(nargs, 0);
  std::function<void(size_t, int, Jet<K>, Rat)> rec = [&](size_t pos, int total, Jet<K> prod, Rat invfact) {
    if (pos == nargs) {
      K d = derivs(k);
      if (!ScalarTraits<K>::is_zero(d)) {
        K s = d * ScalarTraits<K>::from_rat(invfact);
        acc += prod * s;
      }
      return;
    }
    Jet<K> p = prod;
    for (int e = 0; total + e <= N - 1; ++e) {
      k[pos] = e;
      rec(pos + 1, total + e, p, invfact / factorial_rat(e));
      if (total + e + 1 <= N - 1) {
        p = p * nil[pos];
        if (p.is_zero()) break;
      }
    }
    k[pos] = 0;
  };
  rec(0, 0, Jet<K>::unit(alg), Rat(1));
  return acc;
}

using JetQ = Jet<Rat>;
using JetCQ = Jet<CRat>;
using JetD = Jet<double>;
using JetCD = Jet<std::complex<double>>;

// real -> complex coefficient embeddings
inline JetCQ complexify(const JetQ& a) {
  std::vector<CRat> c;
  c.reserve(a.c.size());
  for (const auto& x : a.c) c.emplace_back(x);
  return JetCQ(a.alg, std::move(c));
}
inline JetCD complexify(const JetD& a) {
  std::vector<std::complex<double>> c(a.c.begin(), a.c.end());
  return JetCD(a.alg, std::move(c));
}
inline JetD to_double(const JetQ& a) {
  std::vector<double> c;
  c.reserve(a.c.size());
  for (const auto& x : a.c) c.push_back(x.get_d());
  return JetD(a.alg, std::move(c));
}
inline JetCD to_double(const JetCQ& a) {
  std::vector<std::complex<double>> c;
  c.reserve(a.c.size());
  for (const auto& x : a.c) c.emplace_back(x.re.get_d(), x.im.get_d());
  return JetCD(a.alg, std::move(c));
}

}  // namespace pforms
