#include "pforms/mobius.hpp"

#include <numbers>

namespace pforms {

JetC cusp_value(const EvalC& f, const MatC& transporter, const FrameC& om, int k,
                const CuspValueOptions& opt) {
  AlgebraPtr alg = om.alg();
  require(opt.samples >= 4, "cusp value needs at least 4 samples");
  EvalC slashed = [&](const JetC& z) { return slash(f, transporter, k, z); };

  JetC acc(alg);
  double worst_period = 0;
  for (int j = 0; j < opt.samples; ++j) {
    double x = static_cast<double>(j) / opt.samples;
    JetC z = JetC::constant(alg, {x, opt.height});
    JetC v = frame_slash(slashed, om, k, z);
    acc += v;
    if (j % 16 == 0) {
      JetC z1 = JetC::constant(alg, {x + 1.0, opt.height});
      JetC v1 = frame_slash(slashed, om, k, z1);
      worst_period = std::max(worst_period, (v1 - v).norm());
    }
  }
  double scale = std::max(1.0, acc.norm() / opt.samples);
  require(worst_period <= opt.periodicity_tol * std::max(1.0, scale),
          "cusp value: function is not 1-periodic in the frame coordinate");
  return acc * std::complex<double>(1.0 / opt.samples, 0.0);
}

}  // namespace pforms
