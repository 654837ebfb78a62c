#include "pforms/presentation.hpp"

#include <numeric>

namespace pforms {

QMat2 QMat2::inverse() const {
  require(det() == 1, "inverse expects det 1");
  return {d, -b, -c, a};
}

std::vector<long> word_flatten(const Word& w) {
  std::vector<long> out;
  for (const auto& f : w) {
    if (f.exp == 0) continue;
    if (f.gen == kTGen) {
      // T = S^3 R
      long reps = f.exp > 0 ? f.exp : -f.exp;
      for (long i = 0; i < reps; ++i) {
        if (f.exp > 0) {
          out.insert(out.end(), {2, 2, 2, 1});
        } else {
          out.insert(out.end(), {-1, -2, -2, -2});
        }
      }
      continue;
    }
    long reps = f.exp > 0 ? f.exp : -f.exp;
    long letter = (f.exp > 0 ? 1 : -1) * (f.gen + 1);
    for (long i = 0; i < reps; ++i) out.push_back(letter);
  }
  return out;
}

Word word_from_flat(const std::vector<long>& letters) {
  Word w;
  for (long l : letters) {
    require(l != 0, "zero letter in word");
    int gen = static_cast<int>((l > 0 ? l : -l) - 1);
    long step = l > 0 ? 1 : -1;
    if (!w.empty() && w.back().gen == gen && ((w.back().exp > 0) == (step > 0)))
      w.back().exp += step;
    else
      w.push_back({gen, step});
  }
  return w;
}

QMat2 Presentation::eval_letters(const std::vector<int>& letters) const {
  QMat2 acc = QMat2::identity();
  for (int l : letters) {
    require(l != 0, "zero letter in relation");
    int idx = (l > 0 ? l : -l) - 1;
    require(idx < num_gens(), "letter out of range");
    acc = acc * (l > 0 ? gens[static_cast<size_t>(idx)] : gens[static_cast<size_t>(idx)].inverse());
  }
  return acc;
}

void Presentation::validate() {
  require(!gens.empty(), "presentation needs generators");
  for (const auto& g : gens) require(g.det() == 1, "generator determinant must be 1");
  relation_signs.assign(relations.size(), 0);
  for (size_t r = 0; r < relations.size(); ++r) {
    QMat2 v = eval_letters(relations[r]);
    if (v == QMat2::identity()) relation_signs[r] = 1;
    else if (v == -QMat2::identity()) relation_signs[r] = -1;
    else throw math_error("relation word does not evaluate to +-identity");
  }
}

Presentation presentation_sl2z() {
  Presentation p;
  p.gen_names = {"R", "S"};
  p.gens = {QMat2::of(0, 1, -1, -1), QMat2::of(0, 1, -1, 0)};
  p.relations = {{1, 1, 1}, {2, 2, 2, 2}};
  p.validate();
  return p;
}

Presentation presentation_surface_genus2() {
  Presentation p;
  p.gen_names = {"A1", "B1", "A2", "B2"};
  QMat2 A = QMat2::of(2, 1, 1, 1);
  QMat2 B = QMat2::of(1, 1, 0, 1);
  p.gens = {A, B, B, A};
  p.relations = {{1, 2, -1, -2, 3, 4, -3, -4}};
  p.validate();
  return p;
}

Presentation presentation_punctured_torus(bool odd) {
  // odd: the standard punctured-torus trace triple (3,3,3), commutator trace -2.
  // even: an upper-triangular non-commuting pair; the commutator is a
  // nontrivial parabolic with trace +2 (irreducible pairs cannot produce one).
  Presentation p;
  p.gen_names = {"A", "B", "C"};
  QMat2 A = odd ? QMat2::of(1, 1, 1, 2) : QMat2{Rat(2), Rat(0), Rat(0), rat_of(1, 2)};
  QMat2 B = odd ? QMat2::of(1, -1, -1, 2) : QMat2::of(1, 1, 0, 1);
  QMat2 comm = A * B * A.inverse() * B.inverse();
  QMat2 C = comm.inverse();
  require(!(C == QMat2::identity()), "degenerate puncture generator");
  p.gens = {A, B, C};
  p.relations = {{1, 2, -1, -2, 3}};
  p.validate();
  require(C.trace() == (odd ? -2 : 2), "puncture generator has unexpected trace");
  return p;
}

QMat2 sl2_from_coords(const QVec& v) {
  require(v.size() == 3, "sl2 coordinates are 3-dimensional");
  return {v[0], v[1], v[2], -v[0]};
}

QVec ad_apply(const QMat2& g, const QVec& v) {
  QMat2 x = sl2_from_coords(v);
  QMat2 gi = g.inverse();
  QMat2 y = g * x * gi;
  // y is traceless: coordinates (H, E, F)
  return {y.a, y.b, y.c};
}

namespace {

// 3x3 matrix of Ad_g in coordinates
std::array<QVec, 3> ad_matrix(const QMat2& g) {
  std::array<QVec, 3> cols;
  cols[0] = ad_apply(g, {Rat(1), Rat(0), Rat(0)});
  cols[1] = ad_apply(g, {Rat(0), Rat(1), Rat(0)});
  cols[2] = ad_apply(g, {Rat(0), Rat(0), Rat(1)});
  return cols;
}

QVec ad_apply_cols(const std::array<QVec, 3>& cols, const QVec& v) {
  QVec r(3, Rat(0));
  for (int j = 0; j < 3; ++j)
    for (int i = 0; i < 3; ++i) r[static_cast<size_t>(i)] += cols[static_cast<size_t>(j)][static_cast<size_t>(i)] * v[static_cast<size_t>(j)];
  return r;
}

}  // namespace

// The linearized relation map: for the word with letters g_l = gamma_i^s,
// the first-order defect of gamma_i -> gamma_i exp(t u_i) is
// sum_l Ad(P_l^{-1}) v_l with P_l the suffix product after position l and
// v_l = u_i (s = +1) or -Ad(gamma_i) u_i (s = -1).
static QMatrix relation_differential(const Presentation& pres, const std::vector<int>& letters) {
  int G = pres.num_gens();
  QMatrix rows(3, QVec(static_cast<size_t>(3 * G), Rat(0)));
  // suffix products
  size_t L = letters.size();
  std::vector<QMat2> suffix(L + 1, QMat2::identity());
  for (size_t l = L; l-- > 0;) {
    int letter = letters[l];
    int idx = (letter > 0 ? letter : -letter) - 1;
    QMat2 g = letter > 0 ? pres.gens[static_cast<size_t>(idx)] : pres.gens[static_cast<size_t>(idx)].inverse();
    suffix[l] = g * suffix[l + 1];
  }
  for (size_t l = 0; l < L; ++l) {
    int letter = letters[l];
    int idx = (letter > 0 ? letter : -letter) - 1;
    QMat2 p_inv = suffix[l + 1].inverse();
    auto ad_suffix = ad_matrix(p_inv);
    // contribution of u_idx: Ad(P^{-1}) (letter > 0) or -Ad(P^{-1}) Ad(gamma)
    std::array<QVec, 3> contrib;
    if (letter > 0) {
      contrib = ad_suffix;
    } else {
      auto ad_g = ad_matrix(pres.gens[static_cast<size_t>(idx)]);
      for (int j = 0; j < 3; ++j) {
        QVec v = ad_apply_cols(ad_suffix, ad_g[static_cast<size_t>(j)]);
        for (auto& x : v) x = -x;
        contrib[static_cast<size_t>(j)] = v;
      }
    }
    for (int j = 0; j < 3; ++j)
      for (int i = 0; i < 3; ++i)
        rows[static_cast<size_t>(i)][static_cast<size_t>(3 * idx + j)] += contrib[static_cast<size_t>(j)][static_cast<size_t>(i)];
  }
  return rows;
}

CocycleSpace cocycle_space(const Presentation& pres) {
  int G = pres.num_gens();
  CocycleSpace out;

  QMatrix stacked;
  for (const auto& rel : pres.relations) {
    auto rows = relation_differential(pres, rel);
    for (auto& r : rows) stacked.push_back(std::move(r));
  }
  out.z1 = nullspace(stacked, 3 * G);
  out.dim_z1 = static_cast<int>(out.z1.size());

  // coboundaries: v -> (Ad(gamma_i^{-1}) v - v)_i
  std::vector<QVec> b_gens;
  for (int j = 0; j < 3; ++j) {
    QVec v(3, Rat(0));
    v[static_cast<size_t>(j)] = 1;
    QVec row(static_cast<size_t>(3 * G), Rat(0));
    for (int i = 0; i < G; ++i) {
      QVec w = ad_apply(pres.gens[static_cast<size_t>(i)].inverse(), v);
      for (int t = 0; t < 3; ++t) row[static_cast<size_t>(3 * i + t)] = w[static_cast<size_t>(t)] - v[static_cast<size_t>(t)];
    }
    b_gens.push_back(std::move(row));
  }
  // reduce to a basis
  {
    QMatrix probe;
    for (const auto& r : b_gens) {
      probe.push_back(r);
      if (rank(probe) < static_cast<int>(probe.size()))
        probe.pop_back();
      else
        out.b1.push_back(r);
    }
  }
  out.dim_b1 = static_cast<int>(out.b1.size());
  out.dim_h1 = out.dim_z1 - out.dim_b1;

  // complement of B1 inside Z1
  {
    QMatrix probe = out.b1;
    for (const auto& z : out.z1) {
      probe.push_back(z);
      if (rank(probe) < static_cast<int>(probe.size())) {
        probe.pop_back();
      } else {
        out.h1.push_back(z);
      }
    }
  }
  require(static_cast<int>(out.h1.size()) == out.dim_h1, "complement dimension mismatch");

  // quotient model g / (z(R) + z(S)) for the modular presentation
  if (G == 2 && pres.gens[0] == QMat2::of(0, 1, -1, -1) && pres.gens[1] == QMat2::of(0, 1, -1, 0)) {
    std::vector<QVec> span;
    for (int i = 0; i < 2; ++i) {
      // centralizer of gamma in sl2: fixed vectors of Ad
      QMatrix m(3, QVec(3, Rat(0)));
      auto cols = ad_matrix(pres.gens[static_cast<size_t>(i)]);
      for (int j = 0; j < 3; ++j)
        for (int t = 0; t < 3; ++t)
          m[static_cast<size_t>(t)][static_cast<size_t>(j)] = cols[static_cast<size_t>(j)][static_cast<size_t>(t)] - ((t == j) ? Rat(1) : Rat(0));
      for (const auto& v : nullspace(m, 3)) span.push_back(v);
    }
    out.quotient_model_dim = 3 - span_rank(span);
  }
  return out;
}

WordDecomposition word_decompose_sl2z(const QMat2& m) {
  require(m.det() == 1, "word decomposition needs det 1");
  require(m.a.get_den() == 1 && m.b.get_den() == 1 && m.c.get_den() == 1 && m.d.get_den() == 1,
          "word decomposition needs integer entries");
  const QMat2 S = QMat2::of(0, 1, -1, 0);

  QMat2 v = m;
  Word right_ops;  // the operations applied on the right, in order
  int guard = 0;
  while (v.c != 0) {
    require(++guard < 10000, "euclidean reduction did not terminate");
    // pick q minimizing |d - q c|
    Rat q_floor(0);
    mpz_class q = v.d.get_num() / v.c.get_num();  // integer entries
    // balanced remainder: try q-1, q, q+1
    mpz_class best_q = q;
    mpz_class best_abs(-1);
    for (int off = -1; off <= 1; ++off) {
      mpz_class qq = q + off;
      mpz_class rem = v.d.get_num() - qq * v.c.get_num();
      mpz_class a = abs(rem);
      if (best_abs < 0 || a < best_abs) { best_abs = a; best_q = qq; }
    }
    long ql = static_cast<long>(best_q.get_si());
    // v <- v * T^{-q}
    QMat2 Tq = QMat2::of(1, -ql, 0, 1);
    v = v * Tq;
    right_ops.push_back({kTGen, -ql});
    // v <- v * S  (bottom row (c,d) -> (-d, c))
    v = v * S;
    right_ops.push_back({1, 1});
    (void)q_floor;
  }
  // v = [[a, b], [0, d]] with a d = 1, integer: v = +- T^m
  int sign = 1;
  long mpow = 0;
  if (v.a == 1) {
    mpow = static_cast<long>(v.b.get_num().get_si());
  } else {
    require(v.a == -1, "unexpected reduced form");
    sign = -1;
    mpow = -static_cast<long>(v.b.get_num().get_si());
  }
  // m * (right_ops product) = sign * T^mpow, so m = sign * T^mpow * (ops)^{-1}
  Word w;
  if (mpow != 0) w.push_back({kTGen, mpow});
  for (auto it = right_ops.rbegin(); it != right_ops.rend(); ++it) w.push_back({it->gen, -it->exp});

  // normalize: drop zero exponents
  Word out;
  for (auto& f : w)
    if (f.exp != 0) out.push_back(f);

  return {out, sign};
}

namespace {

QMat2 eval_word_classical(const Presentation& pres, const Word& w) {
  const QMat2 T = QMat2::of(1, 1, 0, 1);
  auto mat_pow_q = [](QMat2 base, long e) {
    if (e < 0) { base = base.inverse(); e = -e; }
    QMat2 acc = QMat2::identity();
    while (e) {
      if (e & 1) acc = acc * base;
      e >>= 1;
      if (e) base = base * base;
    }
    return acc;
  };
  QMat2 acc = QMat2::identity();
  for (const auto& f : w) {
    QMat2 base = f.gen == kTGen ? T : pres.gens[static_cast<size_t>(f.gen)];
    acc = acc * mat_pow_q(base, f.exp);
  }
  return acc;
}

}  // namespace

std::vector<CosetRep> coset_reps_sl2z(long B) {
  require(B >= 1, "coset bound must be >= 1");
  auto pres = presentation_sl2z();
  std::vector<CosetRep> reps;
  // identity coset
  reps.push_back({0, 1, QMat2::identity(), {}, 1});
  for (long c = 1; c <= B; ++c) {
    for (long d = -B; d <= B; ++d) {
      if (std::gcd(c, d) != 1) continue;
      // top row via Bezout: from s0 c + t0 d = +-1 take (x, y) with x d - y c = 1
      long x = 0, y = 0;
      {
        long r0 = c, r1 = d, s0 = 1, s1 = 0, t0 = 0, t1 = 1;
        while (r1 != 0) {
          long q = r0 / r1;
          std::tie(r0, r1) = std::make_pair(r1, r0 - q * r1);
          std::tie(s0, s1) = std::make_pair(s1, s0 - q * s1);
          std::tie(t0, t1) = std::make_pair(t1, t0 - q * t1);
        }
        x = t0;
        y = -s0;
        if (r0 == -1) { x = -x; y = -y; }
      }
      QMat2 mat{Rat(x), Rat(y), Rat(c), Rat(d)};
      require(mat.det() == 1, "bezout construction failed");
      auto dec = word_decompose_sl2z(mat);
      QMat2 check = eval_word_classical(pres, dec.word);
      require((dec.sign == 1 ? check : -check) == mat, "word re-evaluation failed");
      reps.push_back({c, d, mat, dec.word, dec.sign});
    }
  }
  return reps;
}

}  // namespace pforms
