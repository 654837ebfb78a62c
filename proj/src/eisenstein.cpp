#include "pforms/eisenstein.hpp"

#include <numbers>
#include <thread>

#include "pforms/kernels.hpp"

namespace pforms {

namespace {

bool is_modular_presentation(const Presentation& p) {
  return p.num_gens() == 2 && p.gens[0] == QMat2::of(0, 1, -1, -1) && p.gens[1] == QMat2::of(0, 1, -1, 0);
}

}  // namespace

FrameMap<CRat> modular_cusp_frame_exact(const DeformedLattice& lat) {
  require(is_modular_presentation(lat.pres), "cusp frame needs the modular presentation");
  Mat2<Rat> t_lift = lat.eval_word({{kTGen, 1}});
  // complexify and take the unique logarithm with parabolic body
  Mat2<CRat> tc(lat.alg);
  for (int i = 0; i < 4; ++i) tc.e[static_cast<size_t>(i)] = complexify(t_lift.e[static_cast<size_t>(i)]);
  Mat2<CRat> chi = mat_log_near_parabolic(tc);
  return frame_from_chi(chi);
}

CuspFrame modular_cusp_frame(const DeformedLattice& lat) {
  auto exact = modular_cusp_frame_exact(lat);
  FrameC f{PolyC(lat.alg)};
  for (const auto& c : exact.poly.c) f.poly.c.push_back(to_double(c));
  CuspFrame out;
  out.omega = std::move(f);
  out.transporter = MatC::constant(lat.alg, {1, 0}, {0, 0}, {0, 0}, {1, 0});
  return out;
}

namespace {

// first-order complex-jet 2x2 matrix, SoA-friendly plain data
struct JMat {
  // entry order a, b, c, d; each holds (value, direction component)
  std::complex<double> v0[4], v1[4];

  static JMat from(const Mat2<Rat>& m, int dir_idx) {
    JMat out;
    for (int e = 0; e < 4; ++e) {
      out.v0[e] = {m.e[static_cast<size_t>(e)].c[0].get_d(), 0.0};
      out.v1[e] = {m.e[static_cast<size_t>(e)].c[static_cast<size_t>(dir_idx)].get_d(), 0.0};
    }
    return out;
  }
  friend JMat operator*(const JMat& x, const JMat& y) {
    auto mul = [&](int i, int j, int k, int l) {
      // product entry = x[i] y[j] + x[k] y[l] in first-order jets
      std::complex<double> p0 = x.v0[i] * y.v0[j] + x.v0[k] * y.v0[l];
      std::complex<double> p1 = x.v0[i] * y.v1[j] + x.v1[i] * y.v0[j] + x.v0[k] * y.v1[l] + x.v1[k] * y.v0[l];
      return std::make_pair(p0, p1);
    };
    JMat r;
    std::tie(r.v0[0], r.v1[0]) = mul(0, 0, 1, 2);
    std::tie(r.v0[1], r.v1[1]) = mul(0, 1, 1, 3);
    std::tie(r.v0[2], r.v1[2]) = mul(2, 0, 3, 2);
    std::tie(r.v0[3], r.v1[3]) = mul(2, 1, 3, 3);
    return r;
  }
};

struct PointData {
  kern::EisPointCtx ctx;
  double acc[4] = {0, 0, 0, 0};
  double shell[4] = {0, 0, 0, 0};  // contribution of the outer 10% band
};

// one worker: enumerates the full representative set in a fixed order and
// accumulates only its assigned sample points, so per-point sums do not
// depend on the thread count
struct Worker {
  long B;
  kern::TermSumFn fn;
  std::vector<PointData>* points;
  int pt_begin, pt_end;
  const JMat *stepA_T, *stepA_L, *stepB_Tinv, *stepB_Linv;
  const JMat *rootA, *rootB, *rep10, *rep01;
  long reps = 0;

  kern::EisBatch batch;
  kern::EisBatch shell_batch;

  void flush(kern::EisBatch& b, bool shell) {
    if (b.n == 0) return;
    for (int p = pt_begin; p < pt_end; ++p) {
      auto& pd = (*points)[static_cast<size_t>(p)];
      fn(b, pd.ctx, pd.acc);
      if (shell) fn(b, pd.ctx, pd.shell);
    }
    b.n = 0;
  }

  void push(const JMat& m, bool shell) {
    kern::EisBatch& b = shell ? shell_batch : batch;
    int t = b.n;
    b.a0r[t] = m.v0[0].real(); b.a0i[t] = m.v0[0].imag();
    b.a1r[t] = m.v1[0].real(); b.a1i[t] = m.v1[0].imag();
    b.b0r[t] = m.v0[1].real(); b.b0i[t] = m.v0[1].imag();
    b.b1r[t] = m.v1[1].real(); b.b1i[t] = m.v1[1].imag();
    b.c0r[t] = m.v0[2].real(); b.c0i[t] = m.v0[2].imag();
    b.c1r[t] = m.v1[2].real(); b.c1i[t] = m.v1[2].imag();
    b.d0r[t] = m.v0[3].real(); b.d0i[t] = m.v0[3].imag();
    b.d1r[t] = m.v1[3].real(); b.d1i[t] = m.v1[3].imag();
    if (++b.n == kern::EisBatch::CAP) flush(b, shell);
    ++reps;
  }

  void run() {
    const double shell_lo = 0.9 * static_cast<double>(B);
    auto consider = [&](const JMat& m) {
      double c = std::abs(m.v0[2].real());
      double d = std::abs(m.v0[3].real());
      push(m, std::max(c, d) > shell_lo);
    };

    consider(*rep01);
    consider(*rep10);

    // tree over rows (c >= 1, d >= 1): children via T (d += c) and L (c += d)
    std::vector<JMat> stack;
    stack.reserve(1 << 12);
    auto run_tree = [&](const JMat& root, const JMat& stepT, const JMat& stepL) {
      stack.clear();
      stack.push_back(root);
      while (!stack.empty()) {
        JMat m = stack.back();
        stack.pop_back();
        double c = std::abs(m.v0[2].real());
        double d = std::abs(m.v0[3].real());
        if (c > static_cast<double>(B) || d > static_cast<double>(B)) continue;
        push(m, std::max(c, d) > shell_lo);
        stack.push_back(m * stepL);
        stack.push_back(m * stepT);
      }
    };
    run_tree(*rootA, *stepA_T, *stepA_L);
    run_tree(*rootB, *stepB_Tinv, *stepB_Linv);

    flush(batch, false);
    flush(shell_batch, true);
  }
};

}  // namespace

EisensteinResult deformed_eisenstein(const DeformedLattice& lat, const EisensteinOptions& opt) {
  require(is_modular_presentation(lat.pres), "the cusp sum needs the modular presentation");
  require(opt.k >= 6 && opt.k % 2 == 0, "cusp sum weight must be even and >= 6");
  require(lat.alg->N <= 2, "cusp sum supports first-order algebras; use the adaption solver for deeper ones");
  require(opt.B >= 1 && opt.M >= 0 && opt.samples >= 4 * (opt.M + 1), "bad sampling parameters");
  require(opt.height > 0, "sampling height must be positive");

  std::string kernel_used;
  kern::TermSumFn fn = kern::select_kernel(opt.kernel, &kernel_used);

  auto frame_exact = modular_cusp_frame_exact(lat);
  CuspFrame frame = modular_cusp_frame(lat);

  // lifts of the step matrices, exact
  Mat2<Rat> Tl = lat.eval_word({{kTGen, 1}});
  auto decL = word_decompose_sl2z(QMat2::of(1, 0, 1, 1));
  Mat2<Rat> Ll = lat.eval_word(decL.word);
  if (decL.sign == -1) Ll = -Ll;
  Mat2<Rat> Tl_inv = inverse(Tl), Ll_inv = inverse(Ll);
  Mat2<Rat> rootA_m = Ll;                                  // bottom row (1, 1)
  Mat2<Rat> rootB_m = Ll * Tl_inv * Tl_inv;                // bottom row (1, -1)
  Mat2<Rat> rep10_m = mat_pow(lat.gens[1], 3);             // S^3, bottom row (1, 0)
  Mat2<Rat> rep01_m = Mat2<Rat>::identity(lat.alg);        // identity coset

  int dim = lat.alg->dim();
  int nsamples = opt.samples;
  int threads = std::max(1, opt.threads);

  QSeriesJet series;
  series.weight = opt.k;
  series.trunc = opt.M;
  series.frame = frame;
  series.coeffs.assign(static_cast<size_t>(opt.M + 1), JetC(lat.alg));

  double tail = 0;
  long reps_total = 0;

  // per nilpotent direction: first-order components decouple
  for (int dir = 1; dir < dim; ++dir) {
    JMat stepT = JMat::from(Tl, dir), stepL = JMat::from(Ll, dir);
    JMat stepTi = JMat::from(Tl_inv, dir), stepLi = JMat::from(Ll_inv, dir);
    JMat rootA = JMat::from(rootA_m, dir), rootB = JMat::from(rootB_m, dir);
    JMat rep10 = JMat::from(rep10_m, dir), rep01 = JMat::from(rep01_m, dir);

    // frame data for this direction: Omega = z + eps P(z), P from the exact frame
    std::vector<std::complex<double>> P;  // ascending coefficients of the direction part
    for (const auto& cf : frame_exact.poly.c) {
      const CRat& comp = cf.c[static_cast<size_t>(dir)];
      P.push_back({comp.re.get_d(), comp.im.get_d()});
    }
    std::vector<std::complex<double>> Pd;  // P'
    for (size_t m = 1; m < P.size(); ++m) Pd.push_back(P[m] * static_cast<double>(m));
    require(Pd.size() <= 8, "frame derivative degree exceeds the kernel bound");

    std::vector<PointData> points(static_cast<size_t>(nsamples));
    for (int s = 0; s < nsamples; ++s) {
      std::complex<double> z(static_cast<double>(s) / nsamples, opt.height);
      std::complex<double> w1(0, 0);
      for (int m = static_cast<int>(P.size()) - 1; m >= 0; --m) w1 = w1 * z + P[static_cast<size_t>(m)];
      std::complex<double> pd(0, 0);
      for (int m = static_cast<int>(Pd.size()) - 1; m >= 0; --m) pd = pd * z + Pd[static_cast<size_t>(m)];
      auto& ctx = points[static_cast<size_t>(s)].ctx;
      ctx.w0r = z.real(); ctx.w0i = z.imag();
      ctx.w1r = w1.real(); ctx.w1i = w1.imag();
      // fac = Omega'(z)^{k/2} = 1 + (k/2) eps P'(z) at first order
      std::complex<double> f1 = 0.5 * opt.k * pd;
      ctx.f0r = 1; ctx.f0i = 0;
      ctx.f1r = f1.real(); ctx.f1i = f1.imag();
      ctx.pd_deg = static_cast<int>(Pd.size()) - 1;
      for (size_t m = 0; m < Pd.size(); ++m) {
        ctx.pdr[m] = Pd[m].real();
        ctx.pdi[m] = Pd[m].imag();
      }
      ctx.k = opt.k;
    }

    std::vector<Worker> workers(static_cast<size_t>(threads));
    {
      std::vector<std::thread> pool;
      int per = (nsamples + threads - 1) / threads;
      for (int t = 0; t < threads; ++t) {
        Worker& w = workers[static_cast<size_t>(t)];
        w.B = opt.B;
        w.fn = fn;
        w.points = &points;
        w.pt_begin = std::min(nsamples, t * per);
        w.pt_end = std::min(nsamples, (t + 1) * per);
        w.stepA_T = &stepT; w.stepA_L = &stepL;
        w.stepB_Tinv = &stepTi; w.stepB_Linv = &stepLi;
        w.rootA = &rootA; w.rootB = &rootB;
        w.rep10 = &rep10; w.rep01 = &rep01;
        pool.emplace_back([&w] { w.run(); });
      }
      for (auto& th : pool) th.join();
    }
    if (dir == 1) reps_total = workers[0].reps;

    // DFT: a_n = e^{2 pi n Y} / S * sum_s G(x_s) e^{-2 pi i n x_s};
    // the same transform of the outer-band sums estimates the truncation
    // tail per coefficient (remaining bands extrapolated geometrically)
    for (int n = 0; n <= opt.M; ++n) {
      std::complex<double> acc0(0, 0), acc1(0, 0), sh0(0, 0), sh1(0, 0);
      for (int s = 0; s < nsamples; ++s) {
        double ang = -2.0 * std::numbers::pi * n * s / nsamples;
        std::complex<double> ph(std::cos(ang), std::sin(ang));
        const auto& pd = points[static_cast<size_t>(s)];
        acc0 += std::complex<double>(pd.acc[0], pd.acc[1]) * ph;
        acc1 += std::complex<double>(pd.acc[2], pd.acc[3]) * ph;
        sh0 += std::complex<double>(pd.shell[0], pd.shell[1]) * ph;
        sh1 += std::complex<double>(pd.shell[2], pd.shell[3]) * ph;
      }
      double scale = std::exp(2.0 * std::numbers::pi * n * opt.height) / nsamples;
      auto& coef = series.coeffs[static_cast<size_t>(n)];
      coef.c[0] = acc0 * scale;
      coef.c[static_cast<size_t>(dir)] = acc1 * scale;
      tail = std::max(tail, 6.0 * scale * (std::abs(sh0) + std::abs(sh1)));
    }
  }

  EisensteinResult out;
  out.series = std::move(series);
  out.tail_estimate = tail;
  out.kernel_used = kernel_used;
  out.reps = reps_total;
  return out;
}

}  // namespace pforms
