#include "pforms/lattice.hpp"

namespace pforms {

Mat2<Rat> embed_classical(const AlgebraPtr& alg, const QMat2& m) {
  return Mat2<Rat>::constant(alg, m.a, m.b, m.c, m.d);
}

Mat2<Rat> DeformedLattice::eval_letters(const std::vector<int>& letters) const {
  Mat2<Rat> acc = Mat2<Rat>::identity(alg);
  for (int l : letters) {
    int idx = (l > 0 ? l : -l) - 1;
    const auto& g = gens[static_cast<size_t>(idx)];
    acc = acc * (l > 0 ? g : inverse(g));
  }
  return acc;
}

Mat2<Rat> DeformedLattice::eval_word(const Word& w) const {
  // T is the derived translation of the modular presentation: S^3 R
  Mat2<Rat> acc = Mat2<Rat>::identity(alg);
  for (const auto& f : w) {
    Mat2<Rat> base;
    if (f.gen == kTGen) {
      require(gens.size() >= 2, "derived translation needs the modular presentation");
      base = mat_pow(gens[1], 3) * gens[0];
    } else {
      base = gens[static_cast<size_t>(f.gen)];
    }
    acc = acc * mat_pow(base, f.exp);
  }
  return acc;
}

Mat2<Rat> DeformedLattice::lift_classical(const QMat2& m, int* sign_out) const {
  auto dec = word_decompose_sl2z(m);
  if (sign_out) *sign_out = dec.sign;
  return eval_word(dec.word);
}

void DeformedLattice::check_relations() const {
  for (size_t r = 0; r < pres.relations.size(); ++r) {
    Mat2<Rat> v = eval_letters(pres.relations[r]);
    Mat2<Rat> want = Mat2<Rat>::identity(alg);
    if (pres.relation_signs[r] == -1) want = -want;
    require(v == want, "lattice relation violated");
  }
  for (const auto& g : gens) require(det(g) == Jet<Rat>::unit(alg), "lattice generator determinant is not 1");
}

namespace {

Mat2<Rat> sl2_jet(const AlgebraPtr& alg, const QVec& coords, const JetQ& scale) {
  // coords in (H, E, F)
  Mat2<Rat> m(alg);
  m.e[0] = scale * coords[0];
  m.e[1] = scale * coords[1];
  m.e[2] = scale * coords[2];
  m.e[3] = -m.e[0];
  return m;
}

}  // namespace

DeformedLattice lift_deformation(const Presentation& pres, const QVec& cocycle,
                                 const AlgebraPtr& alg, const JetQ& direction) {
  int G = pres.num_gens();
  require(static_cast<int>(cocycle.size()) == 3 * G, "cocycle coordinate count mismatch");
  require(direction.alg == alg, "direction jet over the wrong algebra");
  require(direction.body_is_zero(), "direction must lie in the ideal");
  require(alg->graded(), "lifting requires a graded algebra basis");

  DeformedLattice lat;
  lat.pres = pres;
  lat.alg = alg;
  for (int i = 0; i < G; ++i) {
    QVec u(cocycle.begin() + 3 * i, cocycle.begin() + 3 * (i + 1));
    Mat2<Rat> x = sl2_jet(alg, u, direction);
    lat.gens.push_back(embed_classical(alg, pres.gens[static_cast<size_t>(i)]) * mat_exp(x));
  }

  // order-by-order correction: the grade-n defect of each relation is killed
  // by generator updates gamma_i <- gamma_i exp(delta_i), delta_i supported
  // in grade n; the linear response is the classical relation differential.
  QMatrix diff_stack;
  {
    // build the stacked relation differential over Q (3 rows per relation)
    // reusing cocycle_space machinery indirectly: recompute directly here
    for (const auto& rel : pres.relations) {
      // suffix products
      size_t L = rel.size();
      std::vector<QMat2> suffix(L + 1, QMat2::identity());
      for (size_t l = L; l-- > 0;) {
        int letter = rel[l];
        int idx = (letter > 0 ? letter : -letter) - 1;
        QMat2 g = letter > 0 ? pres.gens[static_cast<size_t>(idx)] : pres.gens[static_cast<size_t>(idx)].inverse();
        suffix[l] = g * suffix[l + 1];
      }
      QMatrix rows(3, QVec(static_cast<size_t>(3 * G), Rat(0)));
      for (size_t l = 0; l < L; ++l) {
        int letter = rel[l];
        int idx = (letter > 0 ? letter : -letter) - 1;
        QMat2 pinv = suffix[l + 1].inverse();
        for (int j = 0; j < 3; ++j) {
          QVec e(3, Rat(0));
          e[static_cast<size_t>(j)] = 1;
          QVec v = e;
          if (letter < 0) {
            v = ad_apply(pres.gens[static_cast<size_t>(idx)], e);
            for (auto& x : v) x = -x;
          }
          QVec w = ad_apply(pinv, v);
          for (int t = 0; t < 3; ++t)
            rows[static_cast<size_t>(t)][static_cast<size_t>(3 * idx + j)] += w[static_cast<size_t>(t)];
        }
      }
      for (auto& r : rows) diff_stack.push_back(std::move(r));
    }
  }

  int R = static_cast<int>(pres.relations.size());
  for (int grade = 2; grade < alg->N; ++grade) {
    // defects at this grade, per relation and ideal basis element
    bool any = false;
    for (int bidx = 1; bidx < alg->dim(); ++bidx) {
      if (alg->grade[static_cast<size_t>(bidx)] != grade) continue;
      QVec rhs(static_cast<size_t>(3 * R), Rat(0));
      bool nonzero = false;
      for (int r = 0; r < R; ++r) {
        Mat2<Rat> v = lat.eval_letters(pres.relations[static_cast<size_t>(r)]);
        if (pres.relation_signs[static_cast<size_t>(r)] == -1) v = -v;
        // defect matrix v - 1; grade component is traceless
        Mat2<Rat> d = v - Mat2<Rat>::identity(alg);
        QVec comp = {d.e[0].c[static_cast<size_t>(bidx)], d.e[1].c[static_cast<size_t>(bidx)],
                     d.e[2].c[static_cast<size_t>(bidx)]};
        require(d.e[0].c[static_cast<size_t>(bidx)] + d.e[3].c[static_cast<size_t>(bidx)] == 0,
                "relation defect has a trace at its leading grade");
        for (int t = 0; t < 3; ++t) {
          rhs[static_cast<size_t>(3 * r + t)] = -comp[static_cast<size_t>(t)];
          if (comp[static_cast<size_t>(t)] != 0) nonzero = true;
        }
      }
      if (!nonzero) continue;
      any = true;
      auto sol = solve(diff_stack, rhs);
      require(sol.has_value(), "deformation obstructed: relation defect not in the image of the differential");
      for (int i = 0; i < G; ++i) {
        QVec u(sol->begin() + 3 * i, sol->begin() + 3 * (i + 1));
        JetQ unitdir(alg);
        unitdir.c[static_cast<size_t>(bidx)] = 1;
        lat.gens[static_cast<size_t>(i)] = lat.gens[static_cast<size_t>(i)] * mat_exp(sl2_jet(alg, u, unitdir));
      }
    }
    (void)any;
  }

  lat.check_relations();
  return lat;
}

DeformedLattice conjugate_lattice(const DeformedLattice& lat, const Mat2<Rat>& g) {
  require(g.a().body() == 1 && g.d().body() == 1 && g.b().body() == 0 && g.c().body() == 0,
          "conjugator must have identity body");
  DeformedLattice out = lat;
  Mat2<Rat> gi = inverse(g);
  for (auto& m : out.gens) m = g * m * gi;
  out.check_relations();
  return out;
}

std::vector<MatC> lattice_to_float(const DeformedLattice& lat) {
  std::vector<MatC> out;
  for (const auto& g : lat.gens) {
    MatC m(lat.alg);
    for (int i = 0; i < 4; ++i) {
      JetC j(lat.alg);
      for (size_t t = 0; t < j.c.size(); ++t) j.c[t] = {g.e[static_cast<size_t>(i)].c[t].get_d(), 0.0};
      m.e[static_cast<size_t>(i)] = j;
    }
    out.push_back(std::move(m));
  }
  return out;
}

}  // namespace pforms
