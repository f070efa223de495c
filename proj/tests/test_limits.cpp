#include <doctest.h>

#include <cmath>
#include <functional>
#include <random>

#include "comlab/limits.hpp"

using namespace comlab;

namespace {

Sequence synth(double r0, double ratio, int n, const std::function<Vec3(double)>& f) {
  Sequence seq;
  double r = r0;
  for (int k = 0; k < n; ++k) {
    seq.emplace_back(r, f(r));
    r *= ratio;
  }
  return seq;
}

}  // namespace

TEST_CASE("ladder construction and validation") {
  const RadiusLadder ladder = RadiusLadder::default_for(2.0);
  const auto radii = ladder.radii();
  CHECK(radii.size() == 36);
  CHECK(radii.front() == 200.0);
  for (size_t i = 1; i < radii.size(); ++i) CHECK(radii[i] > radii[i - 1]);
  // oscillation detectability: at least two full periods in ln r
  CHECK((ladder.count - 1) * std::log(ladder.ratio) >= 4.0 * std::numbers::pi);
  ladder.validate(2.0);

  CHECK_THROWS_AS((RadiusLadder{0.0, 2.0, 8}).validate(1.0), config_error);
  CHECK_THROWS_AS((RadiusLadder{10.0, 0.9, 8}).validate(1.0), config_error);
  CHECK_THROWS_AS((RadiusLadder{10.0, 2.0, 1}).validate(1.0), config_error);
  CHECK_THROWS_AS((RadiusLadder{1e7, 2.0, 12}).validate(1.0), config_error);  // tops 2e10
}

TEST_CASE("classify recovers each synthetic model") {
  const Vec3 c{1.0, -2.0, 0.5};

  const auto conv = classify(synth(10.0, 2.0, 12, [&](double r) {
    return c + Vec3{3.0, -1.0, 0.2} / r;
  }));
  CHECK(conv.cls == LimitClass::Converged);
  CHECK(std::fabs(conv.value.x - 1.0) <= 1e-10);
  CHECK(std::fabs(conv.value.y + 2.0) <= 1e-10);
  CHECK(std::fabs(conv.rate.x - 3.0) <= 1e-8);

  const auto logd = classify(synth(10.0, 2.0, 12, [&](double r) {
    return c + Vec3{0.7, 0.0, -0.1} * std::log(r);
  }));
  CHECK(logd.cls == LimitClass::LogDivergent);
  CHECK(std::fabs(logd.log_slope.x - 0.7) <= 1e-10);

  const auto pw = classify(synth(10.0, 2.0, 14, [&](double r) {
    return c + Vec3{0.4, 0.0, 0.0} * std::pow(r, 0.3);
  }));
  CHECK(pw.cls == LimitClass::PowerDivergent);
  CHECK(std::fabs(pw.exponent - 0.3) <= 0.02);
  CHECK(std::fabs(pw.power_coeff.x - 0.4) <= 0.02);

  const auto osc = classify(synth(10.0, std::exp(std::numbers::pi / 7.0), 32, [&](double r) {
    const double x = std::log(r);
    return c + Vec3{0.5 * std::cos(x) + 0.2 * std::sin(x), 0.0, 0.0};
  }));
  CHECK(osc.cls == LimitClass::Oscillatory);
  CHECK(std::fabs(osc.amplitude - std::hypot(0.5, 0.2)) <= 1e-9);
  CHECK(std::fabs(osc.osc_cos.x - 0.5) <= 1e-9);
  CHECK(std::fabs(osc.osc_sin.x - 0.2) <= 1e-9);
}

TEST_CASE("classification is stable under radius rescaling") {
  std::mt19937 rng(42u);
  std::uniform_real_distribution<double> unif(0.5, 2.0);
  for (int trial = 0; trial < 20; ++trial) {
    const double amp = unif(rng), b = unif(rng), scale = 10.0 * unif(rng);
    auto model = [&](double r) {
      const double x = std::log(r);
      return Vec3{amp * std::cos(x) - 0.4 * amp * std::sin(x) + b, 0.1, -0.3};
    };
    const auto base = classify(synth(12.0, std::exp(0.45), 32, model));
    const auto scaled = classify(synth(12.0 * scale, std::exp(0.45), 32,
                                       [&](double r) { return model(r / scale); }));
    CHECK(base.cls == LimitClass::Oscillatory);
    CHECK(scaled.cls == base.cls);
    CHECK(std::fabs(scaled.amplitude - base.amplitude) <= 1e-6 * base.amplitude);
  }
  // converged and power classes are rescaling-stable too
  const auto conv = classify(synth(50.0, 2.0, 10, [](double r) {
    return Vec3{2.0 + 5.0 / r, 0.0, 0.0};
  }));
  const auto conv_scaled = classify(synth(500.0, 2.0, 10, [](double r) {
    return Vec3{2.0 + 50.0 / r, 0.0, 0.0};
  }));
  CHECK(conv.cls == LimitClass::Converged);
  CHECK(conv_scaled.cls == LimitClass::Converged);
  CHECK(std::fabs(conv.value.x - conv_scaled.value.x) <= 1e-10);
}

TEST_CASE("ambiguous data comes back undetermined instead of guessed") {
  // a decaying power not in the model set: every candidate misfits by a
  // comparable amount, so no model wins by the 5x margin
  const auto verdict = classify(synth(10.0, std::exp(0.5), 16, [](double r) {
    return Vec3{2.0 + 3.0 / std::sqrt(r), 0.0, 0.0};
  }));
  CHECK(verdict.cls == LimitClass::Undetermined);
  CHECK(!verdict.note.empty());
  CHECK(verdict.residuals.count("converged") == 1);
}

TEST_CASE("degenerate input is rejected or flagged") {
  CHECK_THROWS_AS(classify(synth(10.0, 2.0, 7, [](double) { return Vec3{}; })), config_error);

  Sequence flat;
  for (int k = 0; k < 10; ++k) flat.emplace_back(5.0, Vec3{1.0, 0.0, 0.0});  // equal radii
  CHECK(classify(flat).cls == LimitClass::Undetermined);

  // exactly constant data: noise floor, classified converged
  const auto constant = classify(synth(10.0, 2.0, 10, [](double) {
    return Vec3{4.0, -1.0, 0.0};
  }));
  CHECK(constant.cls == LimitClass::Converged);
  CHECK(constant.value.x == doctest::Approx(4.0));
}

TEST_CASE("richardson extrapolation nails terminating expansions") {
  // the finite-radius mass law is a cubic in 1/r: three stages recover the
  // limit to machine precision
  const auto seq = synth(10.0, 2.0, 10, [](double r) {
    return Vec3{std::pow(1.0 + 0.5 / r, 3), 0.0, 0.0};
  });
  Vec3 err;
  const Vec3 val = extrapolate(seq, &err);
  CHECK(std::fabs(val.x - 1.0) <= 1e-12);

  // translated-center ladders are constant plus tiny noise
  const auto zseq = synth(100.0, 2.0, 10, [](double r) {
    (void)r;
    return Vec3{2.0, -1.0, 3.0};
  });
  const Vec3 z = extrapolate(zseq);
  CHECK(std::fabs(z.x - 2.0) <= 1e-8);
  CHECK(std::fabs(z.z - 3.0) <= 1e-8);
}

TEST_CASE("extrapolate refuses non-convergent sequences") {
  const auto log_seq = synth(10.0, 2.0, 10, [](double r) {
    return Vec3{std::log(r), 0.0, 0.0};
  });
  CHECK_THROWS_AS(extrapolate(log_seq), internal_error);
}

TEST_CASE("richardson handles non-geometric ladders via the fallback") {
  Sequence seq;
  for (double r : {10.0, 15.0, 27.0, 40.0, 81.0, 160.0, 320.0, 700.0})
    seq.emplace_back(r, Vec3{5.0 + 2.0 / r + 0.3 / (r * r), 0.0, 0.0});
  const Vec3 val = richardson_extrapolate(seq);
  CHECK(std::fabs(val.x - 5.0) <= 1e-6);
}

TEST_CASE("log-log slope fitting") {
  std::vector<std::pair<double, double>> xy;
  for (double x = 1.0; x <= 1024.0; x *= 2.0) xy.emplace_back(x, 7.0 * std::pow(x, -2.5));
  CHECK(loglog_slope(xy) == doctest::Approx(-2.5).epsilon(1e-12));
  std::vector<std::pair<double, double>> bad = {{1.0, 1.0}};
  CHECK_THROWS_AS(loglog_slope(bad), domain_error);
}
