#include "pforms/qseries.hpp"

#include <numbers>

namespace pforms {

Rat bernoulli(int n) {
  static std::vector<Rat> cache = {Rat(1)};
  while (static_cast<int>(cache.size()) <= n) {
    int m = static_cast<int>(cache.size());
    // sum_{j=0}^{m} C(m+1, j) B_j = 0
    Rat acc(0);
    Rat binom(1);  // C(m+1, 0)
    for (int j = 0; j < m; ++j) {
      acc += binom * cache[static_cast<size_t>(j)];
      binom = binom * (m + 1 - j) / (j + 1);
    }
    cache.push_back(-acc / binom);  // binom = C(m+1, m)
  }
  return cache[static_cast<size_t>(n)];
}

std::vector<Rat> eisenstein_qexp(int k, int M) {
  require(k >= 2 && k % 2 == 0, "Eisenstein weight must be even and >= 2");
  std::vector<Rat> out(static_cast<size_t>(M + 1), Rat(0));
  out[0] = 1;
  Rat factor = Rat(-2 * k) / bernoulli(k);
  for (int n = 1; n <= M; ++n) {
    // sigma_{k-1}(n)
    mpz_class sigma(0);
    for (int d = 1; d <= n; ++d) {
      if (n % d) continue;
      mpz_class p(1);
      for (int i = 0; i < k - 1; ++i) p *= d;
      sigma += p;
    }
    out[static_cast<size_t>(n)] = factor * Rat(sigma);
  }
  return out;
}

std::vector<Rat> qexp_mul(const std::vector<Rat>& a, const std::vector<Rat>& b, int M) {
  std::vector<Rat> out(static_cast<size_t>(M + 1), Rat(0));
  for (size_t i = 0; i < a.size() && i <= static_cast<size_t>(M); ++i) {
    if (a[i] == 0) continue;
    for (size_t j = 0; j < b.size() && i + j <= static_cast<size_t>(M); ++j)
      out[i + j] += a[i] * b[j];
  }
  return out;
}

std::vector<Rat> delta_qexp(int M) {
  auto e4 = eisenstein_qexp(4, M);
  auto e6 = eisenstein_qexp(6, M);
  auto e43 = qexp_mul(qexp_mul(e4, e4, M), e4, M);
  auto e62 = qexp_mul(e6, e6, M);
  std::vector<Rat> out(static_cast<size_t>(M + 1));
  for (int n = 0; n <= M; ++n)
    out[static_cast<size_t>(n)] = (e43[static_cast<size_t>(n)] - e62[static_cast<size_t>(n)]) / 1728;
  return out;
}

int dim_mk_oracle(int k) {
  if (k < 0 || k % 2) return 0;
  int count = 0;
  for (int a = 0; 4 * a <= k; ++a)
    if ((k - 4 * a) % 6 == 0) ++count;
  return count;
}

std::vector<std::vector<Rat>> basis_mk(int k, int M) {
  require(k >= 0 && k % 2 == 0, "weight must be even");
  int d = dim_mk_oracle(k);
  std::vector<std::vector<Rat>> rows;
  if (d == 0) return rows;
  auto e4 = eisenstein_qexp(4, M);
  auto e6 = eisenstein_qexp(6, M);
  for (int a = 0; 4 * a <= k; ++a) {
    if ((k - 4 * a) % 6) continue;
    int b = (k - 4 * a) / 6;
    std::vector<Rat> m(static_cast<size_t>(M + 1), Rat(0));
    m[0] = 1;
    for (int i = 0; i < a; ++i) m = qexp_mul(m, e4, M);
    for (int i = 0; i < b; ++i) m = qexp_mul(m, e6, M);
    rows.push_back(std::move(m));
  }
  require(static_cast<int>(rows.size()) == d, "monomial count mismatch");
  require(M >= d, "truncation too short for the echelon basis");
  // echelonize so row i = q^i + O(q^d)
  for (int i = 0; i < d; ++i) {
    int piv = -1;
    for (int r = i; r < d; ++r)
      if (rows[static_cast<size_t>(r)][static_cast<size_t>(i)] != 0) { piv = r; break; }
    require(piv >= 0, "echelon pivot missing (valuations not 0..d-1?)");
    std::swap(rows[static_cast<size_t>(i)], rows[static_cast<size_t>(piv)]);
    Rat p = rows[static_cast<size_t>(i)][static_cast<size_t>(i)];
    for (auto& x : rows[static_cast<size_t>(i)]) x /= p;
    for (int r = 0; r < d; ++r) {
      if (r == i) continue;
      Rat f = rows[static_cast<size_t>(r)][static_cast<size_t>(i)];
      if (f == 0) continue;
      for (int c = 0; c <= M; ++c)
        rows[static_cast<size_t>(r)][static_cast<size_t>(c)] -= f * rows[static_cast<size_t>(i)][static_cast<size_t>(c)];
    }
  }
  return rows;
}

std::vector<Rat> classical_form_qexp(ClassicalForm f, int M) {
  switch (f) {
    case ClassicalForm::E4: return eisenstein_qexp(4, M);
    case ClassicalForm::E6: return eisenstein_qexp(6, M);
    case ClassicalForm::E8: return eisenstein_qexp(8, M);
    case ClassicalForm::E10: return eisenstein_qexp(10, M);
    case ClassicalForm::E12: return eisenstein_qexp(12, M);
    case ClassicalForm::E14: return eisenstein_qexp(14, M);
    case ClassicalForm::Delta: return delta_qexp(M);
  }
  throw math_error("unsupported classical form");
}

FormEvaluator::FormEvaluator(QSeriesJet series) : series_(std::move(series)) {
  inv_ = series_.frame.omega.inverse().poly;
  der_ = series_.frame.omega.derivative();
}

JetC FormEvaluator::operator()(const JetC& z) const {
  AlgebraPtr alg = series_.alg();
  JetC w = inv_.eval(z);
  JetC q = jet_exp(w * std::complex<double>(0.0, 2.0 * std::numbers::pi));
  JetC acc(alg);
  for (int n = series_.trunc; n >= 0; --n) acc = acc * q + series_.coeffs[static_cast<size_t>(n)];
  JetC dp = der_.eval(w);
  return acc * jet_pow(dp, Rat(-series_.weight, 2));
}

QSeriesJet qseries_mul(const QSeriesJet& a, const QSeriesJet& b) {
  require(a.alg() == b.alg(), "series over different algebras");
  QSeriesJet out;
  out.weight = a.weight + b.weight;
  out.trunc = std::min(a.trunc, b.trunc);
  out.frame = a.frame;
  out.coeffs.assign(static_cast<size_t>(out.trunc + 1), JetC(a.alg()));
  for (int i = 0; i <= a.trunc; ++i) {
    if (a.coeffs[static_cast<size_t>(i)].is_zero()) continue;
    for (int j = 0; i + j <= out.trunc && j <= b.trunc; ++j)
      out.coeffs[static_cast<size_t>(i + j)] += a.coeffs[static_cast<size_t>(i)] * b.coeffs[static_cast<size_t>(j)];
  }
  return out;
}

QSeriesJet qseries_classical(const std::vector<Rat>& coeffs, int weight, const CuspFrame& frame) {
  QSeriesJet out;
  out.weight = weight;
  out.trunc = static_cast<int>(coeffs.size()) - 1;
  out.frame = frame;
  for (const auto& c : coeffs) out.coeffs.push_back(JetC::constant(frame.omega.alg(), {c.get_d(), 0.0}));
  return out;
}

std::vector<CheckPoint> modular_check_points(int count) {
  // each point sits near the fixed point of the generator it checks, so both
  // z and gz keep Im above ~0.65 and short q-expansions stay accurate
  std::vector<CheckPoint> pts;
  const std::complex<double> rho(-0.5, std::sqrt(3.0) / 2);
  for (int t = 0; t < count; ++t) {
    double ang = 2.0 * std::numbers::pi * (t + 0.37) / count;
    double rad = 0.05 + 0.02 * ((t * 7) % 3);
    if (t % 2 == 0)
      pts.push_back({1, std::complex<double>(0.0, 1.0) + std::polar(rad, ang)});
    else
      pts.push_back({0, rho + std::polar(rad, ang)});
  }
  return pts;
}

double invariance_residual(const QSeriesJet& f, const std::vector<MatC>& gens,
                           const std::vector<CheckPoint>& points) {
  FormEvaluator ev(f);
  EvalC fe = [&](const JetC& z) { return ev(z); };
  double worst = 0;
  AlgebraPtr alg = f.alg();
  for (const auto& p : points) {
    require(p.gen >= 0 && p.gen < static_cast<int>(gens.size()), "check point generator out of range");
    JetC z = JetC::constant(alg, p.z);
    JetC lhs = slash(fe, gens[static_cast<size_t>(p.gen)], f.weight, z);
    JetC rhs = ev(z);
    double scale = std::max(1.0, std::max(lhs.norm(), rhs.norm()));
    worst = std::max(worst, (lhs - rhs).norm() / scale);
  }
  return worst;
}

}  // namespace pforms
