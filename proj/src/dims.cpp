#include "pforms/dims.hpp"

#include <algorithm>
#include <map>

namespace pforms {

namespace {

long ceil_div(long a, long b) { return (a + b - 1) / b; }

}  // namespace

DimensionReport dimension_predict(int k, int genus, const std::vector<int>& periods, int cusps,
                                  int even_cusps, bool odd_weight, bool minus_one_in_group) {
  require(k >= 0, "weight must be nonnegative");
  require(genus >= 0 && cusps >= 0, "bad surface data");
  for (int n : periods) require(n >= 2, "elliptic periods are >= 2");
  require(odd_weight == (k % 2 == 1), "parity flag does not match the weight");

  DimensionReport rep;
  rep.k = k;
  rep.genus = genus;
  rep.periods = periods;
  rep.cusps = cusps;
  rep.even_cusps = even_cusps;
  rep.odd_weight = odd_weight;

  int R = static_cast<int>(periods.size());
  int g = genus, S = cusps;
  // genus-one quotients of the upper half plane carry an elliptic point or a cusp
  require(g != 1 || R + S >= 1, "genus-one data needs an elliptic point or a cusp");

  if (!odd_weight) {
    require(even_cusps == 0, "even weight takes no even-cusp count");
    long deg = static_cast<long>(k) * (g - 1) + (static_cast<long>(k) / 2) * (R + S);
    for (int n : periods) deg -= ceil_div(k, 2L * n);
    rep.deg = deg;
    long deg_c = deg - S;

    if (g == 0) {
      rep.dim_m = static_cast<int>(std::max(deg + 1, 0L));
      rep.dim_s = static_cast<int>(std::max(deg_c + 1, 0L));
    } else if (g == 1) {
      if (k == 0) {
        rep.dim_m = 1;
        rep.dim_s = S == 0 ? 1 : 0;
      } else if (k == 2) {
        rep.dim_m = S == 0 ? 1 : static_cast<int>(deg);  // deg = S when S >= 1
        rep.dim_s = 1;                                   // the twisted bundle is trivial
      } else {
        rep.dim_m = static_cast<int>(deg);
        rep.dim_s = static_cast<int>(deg_c);
      }
    } else {
      if (k == 0) {
        rep.dim_m = 1;
        rep.dim_s = S == 0 ? 1 : 0;
      } else if (k == 2) {
        rep.dim_m = S == 0 ? g : static_cast<int>(deg - g + 1);
        rep.dim_s = g;  // the twisted bundle is the relative cotangent bundle
      } else {
        rep.dim_m = static_cast<int>(deg - g + 1);
        rep.dim_s = static_cast<int>(deg_c - g + 1);
      }
    }
    return rep;
  }

  // odd weight
  if (minus_one_in_group) {
    rep.status = DimStatus::ZeroOddMinusOne;
    rep.dim_m = rep.dim_s = 0;
    rep.deg = 0;
    return rep;
  }
  require(even_cusps >= 0 && even_cusps <= S, "even-cusp count out of range");
  require(even_cusps % 2 == 0, "the even-cusp count must be even");
  int Sp = even_cusps;
  long deg2 = static_cast<long>(k) * (g - 1) + (static_cast<long>(k + 1) / 2) * R +
              (static_cast<long>(k - 1) / 2) * S + Sp / 2;
  for (int n : periods) deg2 -= ceil_div(k + n, 2L * n);
  rep.deg = deg2;
  long deg_c = deg2 - Sp;

  if (g == 0) {
    rep.dim_m = static_cast<int>(std::max(deg2 + 1, 0L));
    rep.dim_s = static_cast<int>(std::max(deg_c + 1, 0L));
    return rep;
  }
  if (g == 1) {
    bool all_two = std::all_of(periods.begin(), periods.end(), [](int n) { return n == 2; });
    if (k == 1 && Sp == 0) {
      rep.status = DimStatus::Indeterminate;  // square bundle trivial: 0 or 1 sections
      return rep;
    }
    if (k == 3 && S == 0 && all_two) {
      rep.status = DimStatus::Indeterminate;
      return rep;
    }
    if (k == 1) {
      rep.dim_m = static_cast<int>(deg2);  // = Sp/2 >= 1
      rep.dim_s = static_cast<int>(std::max(deg_c, 0L));
      return rep;
    }
    rep.dim_m = static_cast<int>(deg2);
    rep.dim_s = static_cast<int>(std::max(deg_c, 0L));
    return rep;
  }
  // g >= 2
  if (k == 1) {
    rep.status = DimStatus::NotCovered;  // the stability theorem fails here
    return rep;
  }
  rep.dim_m = static_cast<int>(deg2 - g + 1);
  rep.dim_s = static_cast<int>(deg_c - g + 1);
  return rep;
}

CuspClassification cusp_classify(const Presentation& pres, const std::vector<int>& parabolic_letters,
                                 int search_depth) {
  // bounded search for -1 in the group
  struct Key {
    long a, b, c, d;
    bool operator<(const Key& o) const {
      return std::tie(a, b, c, d) < std::tie(o.a, o.b, o.c, o.d);
    }
  };
  auto key_of = [](const QMat2& m) -> std::optional<Key> {
    if (m.a.get_den() != 1 || m.b.get_den() != 1 || m.c.get_den() != 1 || m.d.get_den() != 1)
      return std::nullopt;  // rational entries: fall back to exact compare below
    return Key{m.a.get_num().get_si(), m.b.get_num().get_si(), m.c.get_num().get_si(),
               m.d.get_num().get_si()};
  };

  std::vector<QMat2> frontier = {QMat2::identity()};
  std::map<Key, bool> seen;
  std::vector<QMat2> seen_rational;
  QMat2 minus1 = -QMat2::identity();
  int depth_reached = 0;
  for (int depth = 1; depth <= search_depth; ++depth) {
    std::vector<QMat2> next;
    for (const auto& m : frontier) {
      for (int gi = 0; gi < pres.num_gens(); ++gi) {
        for (int s : {1, -1}) {
          QMat2 w = m * (s > 0 ? pres.gens[static_cast<size_t>(gi)] : pres.gens[static_cast<size_t>(gi)].inverse());
          if (w == minus1) throw math_error("cusp classification undefined: -1 lies in the group");
          auto kk = key_of(w);
          if (kk) {
            if (seen.count(*kk)) continue;
            seen[*kk] = true;
          } else {
            bool dup = false;
            for (const auto& sr : seen_rational)
              if (sr == w) { dup = true; break; }
            if (dup) continue;
            seen_rational.push_back(w);
          }
          next.push_back(w);
        }
      }
    }
    frontier = std::move(next);
    depth_reached = depth;
    if (frontier.size() > 20000) break;  // ball grew too large; report the depth actually covered
  }

  QMat2 C = pres.eval_letters(parabolic_letters);
  require(!(C == QMat2::identity()) && !(C == minus1), "designated element is central");
  Rat tr = C.trace();
  require(tr == 2 || tr == -2, "designated element is not parabolic");
  CuspClassification out{tr == 2 ? CuspParity::Even : CuspParity::Odd, depth_reached};
  return out;
}

}  // namespace pforms
