#include "pforms/algebra.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <numeric>
#include <sstream>

namespace pforms {

namespace {

// Exact row reduction; returns rank. Rows are modified in place.
int rref_rank(std::vector<std::vector<Rat>>& rows, int ncols) {
  int rank = 0;
  for (int col = 0; col < ncols && rank < static_cast<int>(rows.size()); ++col) {
    int piv = -1;
    for (int r = rank; r < static_cast<int>(rows.size()); ++r)
      if (rows[static_cast<size_t>(r)][static_cast<size_t>(col)] != 0) { piv = r; break; }
    if (piv < 0) continue;
    std::swap(rows[static_cast<size_t>(rank)], rows[static_cast<size_t>(piv)]);
    Rat p = rows[static_cast<size_t>(rank)][static_cast<size_t>(col)];
    for (int c = 0; c < ncols; ++c) rows[static_cast<size_t>(rank)][static_cast<size_t>(c)] /= p;
    for (int r = 0; r < static_cast<int>(rows.size()); ++r) {
      if (r == rank) continue;
      Rat f = rows[static_cast<size_t>(r)][static_cast<size_t>(col)];
      if (f == 0) continue;
      for (int c = 0; c < ncols; ++c)
        rows[static_cast<size_t>(r)][static_cast<size_t>(c)] -= f * rows[static_cast<size_t>(rank)][static_cast<size_t>(c)];
    }
    ++rank;
  }
  return rank;
}

std::vector<Rat> mul_vec(const AlgebraSpec& A, const std::vector<Rat>& a, const std::vector<Rat>& b) {
  int n = A.dim();
  std::vector<Rat> r(static_cast<size_t>(n), Rat(0));
  for (int i = 0; i < n; ++i) {
    if (a[static_cast<size_t>(i)] == 0) continue;
    for (int j = 0; j < n; ++j) {
      if (b[static_cast<size_t>(j)] == 0) continue;
      const auto& t = A.mul_coeffs(i, j);
      Rat f = a[static_cast<size_t>(i)] * b[static_cast<size_t>(j)];
      for (int k = 0; k < n; ++k)
        if (t[static_cast<size_t>(k)] != 0) r[static_cast<size_t>(k)] += f * t[static_cast<size_t>(k)];
    }
  }
  return r;
}

}  // namespace

std::string algebra_kind_name(AlgebraKind k) {
  switch (k) {
    case AlgebraKind::TruncPoly: return "trunc-poly";
    case AlgebraKind::EvenExterior: return "even-exterior";
    case AlgebraKind::StructureConstants: return "structure-constants";
  }
  return "?";
}

bool AlgebraSpec::graded() const {
  for (int g : grade)
    if (g < 0) return false;
  return true;
}

int AlgebraSpec::max_grade() const {
  int g = 0;
  for (int x : grade) g = std::max(g, x);
  return g;
}

void AlgebraSpec::finalize() {
  int n = dim();
  require(n >= 1, "algebra needs at least the unit");
  require(static_cast<int>(mul.size()) == n, "mul table size mismatch");
  for (auto& row : mul) {
    require(static_cast<int>(row.size()) == n, "mul table size mismatch");
    for (auto& v : row) require(static_cast<int>(v.size()) == n, "mul table size mismatch");
  }
  require(static_cast<int>(ideal_mask.size()) == n, "ideal mask size mismatch");
  require(!ideal_mask[0], "unit flagged as ideal element");
  for (int i = 1; i < n; ++i) require(ideal_mask[static_cast<size_t>(i)], "non-unit basis element outside the ideal");

  // unit acts as identity
  for (int i = 0; i < n; ++i) {
    for (int k = 0; k < n; ++k) {
      Rat want = (k == i) ? Rat(1) : Rat(0);
      require(mul[0][static_cast<size_t>(i)][static_cast<size_t>(k)] == want, "unit is not a left identity");
      require(mul[static_cast<size_t>(i)][0][static_cast<size_t>(k)] == want, "unit is not a right identity");
    }
  }
  // commutativity
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      require(mul[static_cast<size_t>(i)][static_cast<size_t>(j)] == mul[static_cast<size_t>(j)][static_cast<size_t>(i)],
              "multiplication table is not commutative");
  // body projection is a homomorphism: ideal products have zero unit coefficient
  for (int i = 1; i < n; ++i)
    for (int j = 1; j < n; ++j)
      require(mul[static_cast<size_t>(i)][static_cast<size_t>(j)][0] == 0,
              "ideal is not closed (unit coefficient in an ideal product)");
  // associativity, exhaustive over basis triples
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) {
        std::vector<Rat> ei(static_cast<size_t>(n), Rat(0)), ek(static_cast<size_t>(n), Rat(0));
        ei[static_cast<size_t>(i)] = 1;
        ek[static_cast<size_t>(k)] = 1;
        auto left = mul_vec(*this, mul[static_cast<size_t>(i)][static_cast<size_t>(j)], ek);
        auto right = mul_vec(*this, ei, mul[static_cast<size_t>(j)][static_cast<size_t>(k)]);
        require(left == right, "multiplication table is not associative");
      }

  // I-adic filtration: spans of I^g, as row-reduced bases over the ideal coordinates
  std::vector<std::vector<std::vector<Rat>>> powers;  // powers[g] = basis rows of I^{g+1}
  std::vector<std::vector<Rat>> cur;
  for (int i = 1; i < n; ++i) {
    std::vector<Rat> e(static_cast<size_t>(n), Rat(0));
    e[static_cast<size_t>(i)] = 1;
    cur.push_back(std::move(e));
  }
  rref_rank(cur, n);
  while (true) {
    cur.resize(static_cast<size_t>(std::count_if(cur.begin(), cur.end(), [&](const std::vector<Rat>& r) {
      return std::any_of(r.begin(), r.end(), [](const Rat& x) { return x != 0; });
    })));
    powers.push_back(cur);
    if (cur.empty()) break;
    // next power: products of current span with the ideal generators
    std::vector<std::vector<Rat>> nxt;
    for (const auto& v : cur)
      for (int i = 1; i < n; ++i) {
        std::vector<Rat> e(static_cast<size_t>(n), Rat(0));
        e[static_cast<size_t>(i)] = 1;
        nxt.push_back(mul_vec(*this, v, e));
      }
    rref_rank(nxt, n);
    cur = std::move(nxt);
    require(static_cast<int>(powers.size()) <= n + 1, "flagged ideal is not nilpotent");
  }
  // powers[g] spans I^{g+1}; least N with I^N = 0:
  N = static_cast<int>(powers.size());  // powers.back() is empty = I^{size} = 0
  require(N <= N_family || N_family <= 1, "ideal nilpotency exceeds the declared order");

  // grade of basis element = largest g with e in I^g (0 for unit; -1 if not clean)
  grade.assign(static_cast<size_t>(n), 0);
  for (int i = 1; i < n; ++i) {
    int g = 0;
    for (int p = 0; p + 1 < static_cast<int>(powers.size()); ++p) {
      // is e_i in span(powers[p]) = I^{p+1}?
      auto rows = powers[static_cast<size_t>(p)];
      std::vector<Rat> e(static_cast<size_t>(n), Rat(0));
      e[static_cast<size_t>(i)] = 1;
      rows.push_back(e);
      auto probe = powers[static_cast<size_t>(p)];
      int r0 = rref_rank(probe, n);
      int r1 = rref_rank(rows, n);
      if (r1 == r0) g = p + 1;
    }
    grade[static_cast<size_t>(i)] = g >= 1 ? g : -1;
  }

  // check gradedness is consistent with the filtration dimensions; if the
  // basis does not split the filtration, mark everything ungraded
  if (graded()) {
    for (int p = 0; p + 1 < static_cast<int>(powers.size()); ++p) {
      int count = 0;
      for (int i = 1; i < n; ++i)
        if (grade[static_cast<size_t>(i)] >= p + 1) ++count;
      if (count != static_cast<int>(powers[static_cast<size_t>(p)].size())) {
        for (int i = 1; i < n; ++i) grade[static_cast<size_t>(i)] = -1;
        break;
      }
    }
  }

  sparse_.clear();
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) {
        const Rat& c = mul[static_cast<size_t>(i)][static_cast<size_t>(j)][static_cast<size_t>(k)];
        if (c != 0) sparse_.push_back({i, j, k, c.get_d()});
      }

  if (id.empty()) {
    std::ostringstream os;
    os << algebra_kind_name(kind) << "-m" << m << "-N" << N_family;
    id = os.str();
  }
}

AlgebraPtr algebra_trunc_poly(int m, int N) {
  require(m >= 0, "trunc-poly: m >= 0 required");
  require(N >= 1, "trunc-poly: N >= 1 required");
  // monomials of total degree < N, ordered by (total degree, X_1-major descending-exponent lex)
  std::vector<std::vector<int>> mons;
  std::vector<int> cur(static_cast<size_t>(m), 0);
  std::function<void(int, int)> emit = [&](int pos, int left) {
    if (pos == m) {
      if (left == 0) mons.push_back(cur);
      return;
    }
    for (int e = left; e >= 0; --e) {
      cur[static_cast<size_t>(pos)] = e;
      emit(pos + 1, left - e);
    }
    cur[static_cast<size_t>(pos)] = 0;
  };
  std::vector<std::vector<int>> all;
  for (int d = 0; d < N; ++d) {
    mons.clear();
    emit(0, d);
    // emit() produces X_1-major descending exponents already
    for (auto& mo : mons) all.push_back(mo);
  }
  require(static_cast<int>(all.size()) <= 512, "trunc-poly dimension too large");

  auto label = [&](const std::vector<int>& e) {
    int tot = std::accumulate(e.begin(), e.end(), 0);
    if (tot == 0) return std::string("1");
    std::ostringstream os;
    bool first = true;
    for (int i = 0; i < m; ++i) {
      if (!e[static_cast<size_t>(i)]) continue;
      if (!first) os << "*";
      first = false;
      os << (m == 1 ? std::string("X") : "X" + std::to_string(i + 1));
      if (e[static_cast<size_t>(i)] > 1) os << "^" << e[static_cast<size_t>(i)];
    }
    return os.str();
  };

  std::map<std::vector<int>, int> index;
  for (int i = 0; i < static_cast<int>(all.size()); ++i) index[all[static_cast<size_t>(i)]] = i;

  int n = static_cast<int>(all.size());
  auto A = std::make_shared<AlgebraSpec>();
  A->kind = AlgebraKind::TruncPoly;
  A->m = m;
  A->N_family = N;
  for (auto& e : all) A->basis.push_back(label(e));
  A->ideal_mask.assign(static_cast<size_t>(n), true);
  A->ideal_mask[0] = false;
  A->mul.assign(static_cast<size_t>(n),
                std::vector<std::vector<Rat>>(static_cast<size_t>(n), std::vector<Rat>(static_cast<size_t>(n), Rat(0))));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      std::vector<int> s(static_cast<size_t>(m));
      int tot = 0;
      for (int t = 0; t < m; ++t) {
        s[static_cast<size_t>(t)] = all[static_cast<size_t>(i)][static_cast<size_t>(t)] + all[static_cast<size_t>(j)][static_cast<size_t>(t)];
        tot += s[static_cast<size_t>(t)];
      }
      if (tot < N) A->mul[static_cast<size_t>(i)][static_cast<size_t>(j)][static_cast<size_t>(index[s])] = 1;
    }
  A->finalize();
  return A;
}

AlgebraPtr algebra_even_exterior(int m, int N_family) {
  require(m >= 0, "even-exterior: m >= 0 required");
  require(N_family == m + 1, "even-exterior: family parameter must be m + 1");
  require(m <= 10, "even-exterior dimension too large");
  // basis: subsets of {1..m} with even cardinality, ordered by (size, lex)
  std::vector<std::vector<int>> subs;
  for (int sz = 0; sz <= m; sz += 2) {
    std::vector<int> idx(static_cast<size_t>(sz));
    std::function<void(int, int)> rec = [&](int pos, int start) {
      if (pos == sz) { subs.push_back(idx); return; }
      for (int v = start; v <= m; ++v) {
        idx[static_cast<size_t>(pos)] = v;
        rec(pos + 1, v + 1);
      }
    };
    rec(0, 1);
  }
  std::map<std::vector<int>, int> index;
  for (int i = 0; i < static_cast<int>(subs.size()); ++i) index[subs[static_cast<size_t>(i)]] = i;

  int n = static_cast<int>(subs.size());
  auto A = std::make_shared<AlgebraSpec>();
  A->kind = AlgebraKind::EvenExterior;
  A->m = m;
  A->N_family = N_family;
  for (auto& s : subs) {
    if (s.empty()) { A->basis.push_back("1"); continue; }
    std::string lab = "e";
    for (int v : s) lab += std::to_string(v);
    A->basis.push_back(lab);
  }
  A->ideal_mask.assign(static_cast<size_t>(n), true);
  A->ideal_mask[0] = false;
  A->mul.assign(static_cast<size_t>(n),
                std::vector<std::vector<Rat>>(static_cast<size_t>(n), std::vector<Rat>(static_cast<size_t>(n), Rat(0))));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      const auto& a = subs[static_cast<size_t>(i)];
      const auto& b = subs[static_cast<size_t>(j)];
      // wedge: zero on overlap, sign = parity of the merge permutation
      bool overlap = false;
      for (int x : a)
        if (std::find(b.begin(), b.end(), x) != b.end()) { overlap = true; break; }
      if (overlap) continue;
      std::vector<int> c = a;
      c.insert(c.end(), b.begin(), b.end());
      int inversions = 0;
      for (size_t p = 0; p < c.size(); ++p)
        for (size_t q = p + 1; q < c.size(); ++q)
          if (c[p] > c[q]) ++inversions;
      std::sort(c.begin(), c.end());
      A->mul[static_cast<size_t>(i)][static_cast<size_t>(j)][static_cast<size_t>(index[c])] =
          (inversions % 2 == 0) ? Rat(1) : Rat(-1);
    }
  A->finalize();
  return A;
}

AlgebraPtr algebra_from_table(std::vector<std::string> basis,
                              std::vector<std::vector<std::vector<Rat>>> mul,
                              std::vector<bool> ideal_mask, int declared_N) {
  auto A = std::make_shared<AlgebraSpec>();
  A->kind = AlgebraKind::StructureConstants;
  A->m = static_cast<int>(basis.size()) - 1;
  A->N_family = declared_N;
  A->basis = std::move(basis);
  A->mul = std::move(mul);
  A->ideal_mask = std::move(ideal_mask);
  require(A->dim() <= 64, "structure-constants dimension too large");
  A->finalize();
  return A;
}

AlgebraPtr algebra_create(AlgebraKind kind, int m, int N) {
  switch (kind) {
    case AlgebraKind::TruncPoly: return algebra_trunc_poly(m, N);
    case AlgebraKind::EvenExterior: return algebra_even_exterior(m, N);
    default: throw math_error("structure-constants algebras require an explicit table");
  }
}

}  // namespace pforms
