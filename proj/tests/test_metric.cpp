#include <doctest.h>

#include <cmath>
#include <random>

#include "comlab/limits.hpp"
#include "comlab/metric.hpp"
#include "comlab/quadrature.hpp"

using namespace comlab;

namespace {

Point3 random_direction(std::mt19937& rng) {
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  const double ct = 2.0 * unif(rng) - 1.0;
  const double st = std::sqrt(1.0 - ct * ct);
  const double ph = 2.0 * std::numbers::pi * unif(rng);
  return {st * std::cos(ph), st * std::sin(ph), ct};
}

double max_diff(const SymTensor2& a, const SymTensor2& b) {
  return max_abs_component(a - b);
}

}  // namespace

TEST_CASE("schwarzschild jet: direct substitution") {
  auto fam = make_schwarzschild(1.0);
  const MetricJet jet = eval_jet(*fam, {10.0, 0.0, 0.0});
  const double phi4 = std::pow(1.05, 4);  // 1.21550625
  CHECK(jet.g(0, 0) == doctest::Approx(phi4).epsilon(1e-15));
  CHECK(jet.g(1, 1) == doctest::Approx(phi4).epsilon(1e-15));
  CHECK(jet.g(0, 1) == 0.0);
}

TEST_CASE("york perturbation with zero momentum reduces to schwarzschild") {
  auto schw = make_schwarzschild(1.0);
  auto york = make_york_perturbed(1.0, {0.0, 0.0, 0.0}, {YorkWeight::Kind::SinLog});
  const Point3 p{7.0, -3.0, 2.0};
  const MetricJet a = eval_jet(*schw, p), b = eval_jet(*york, p);
  CHECK(max_diff(a.g, b.g) == 0.0);
  for (int k = 0; k < 3; ++k) CHECK(max_diff(a.dg[k], b.dg[k]) == 0.0);
}

TEST_CASE("canonical slice (T = 0) reduces to schwarzschild") {
  auto schw = make_schwarzschild(1.0);
  auto graph = make_graph_slice(1.0, prescribed_graph_function({}));
  const Point3 p{3.0, 4.0, 12.0};
  const MetricJet a = eval_jet(*schw, p), b = eval_jet(*graph, p);
  CHECK(max_diff(a.g, b.g) == 0.0);
  for (int k = 0; k < 3; ++k) CHECK(max_diff(a.dg[k], b.dg[k]) == 0.0);
  CHECK(max_abs_component(deviation(*graph, p)) == 0.0);
}

TEST_CASE("schwarzschild deviation vanishes and york deviation is -2fY") {
  auto schw = make_schwarzschild(1.0);
  CHECK(max_abs_component(deviation(*schw, {5.0, 1.0, 0.0})) == 0.0);

  // constant weight f = m: deviation -2m Y with Y from the closed form
  const Vec3 P{0.2, -0.5, 1.1};
  auto york = make_york_perturbed(1.0, P, {YorkWeight::Kind::Const}, 4.0);
  const Point3 p{6.0, 2.0, -3.0};
  const double r = norm(p);
  const Vec3 eta = p / r;
  const double pe = dot(P, eta);
  SymTensor2 Y;
  for (int i = 0; i < 3; ++i)
    for (int j = i; j < 3; ++j) {
      const double dij = i == j ? 1.0 : 0.0;
      Y(i, j) = 1.5 / (r * r) *
                (P[i] * eta[j] + eta[i] * P[j] - pe * (dij - eta[i] * eta[j]));
    }
  CHECK(max_diff(deviation(*york, p), Y * (-2.0)) <= 1e-15);
}

TEST_CASE("prescribed graph deviation against frozen symbolic oracle") {
  // z = (1,0,0), m = 1, p = (300,400,1200)/13 (r = 100); dT and N computed
  // by symbolic differentiation, values frozen here.
  auto graph = make_graph_slice(1.0, prescribed_graph_function({1, 0, 0}));
  const Point3 p{300.0 / 13.0, 400.0 / 13.0, 1200.0 / 13.0};
  const SymTensor2 dev = deviation(*graph, p);
  CHECK(dev(0, 0) == doctest::Approx(-1.6977599394379992e-05).epsilon(1e-12));
  CHECK(dev(0, 1) == doctest::Approx(1.2733199545784994e-06).epsilon(1e-12));
  CHECK(dev(1, 2) == doctest::Approx(-2.8649698978016237e-07).epsilon(1e-12));
  CHECK(dev(2, 2) == doctest::Approx(-8.5949096934048712e-07).epsilon(1e-12));

  // divergent graph gradient against the same style of oracle
  auto div = make_graph_slice(1.0, divergent_graph_function({1, 0, 0}));
  const ScalarJet2 tj = div->as_graph()->graph_jet(p);
  CHECK(tj.grad.x == doctest::Approx(9.2205014284738439e-03).epsilon(1e-12));
  CHECK(tj.grad.y == doctest::Approx(-1.0393314287015415e-03).epsilon(1e-12));
  CHECK(tj.grad.z == doctest::Approx(-3.1179942861046244e-03).epsilon(1e-12));
}

TEST_CASE("analytic first derivatives match finite differences on random points") {
  std::mt19937 rng(1234u);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  const std::vector<FamilyPtr> families = {
      make_schwarzschild(1.0),
      make_translated_schwarzschild(1.0, {2.0, -1.0, 3.0}),
      make_york_perturbed(1.0, {1.0, 0.5, -0.2}, {YorkWeight::Kind::Power, 0.75}),
      make_graph_slice(1.0, divergent_graph_function({0.3, 1.0, -0.4})),
      make_graph_slice(1.0, prescribed_graph_function({0.0, 2.0, 1.0})),
  };
  for (const auto& fam : families) {
    for (int trial = 0; trial < 100; ++trial) {
      const double r = std::max(5.0, 1.5 * fam->r_min()) * std::pow(300.0, unif(rng));
      const Point3 p = random_direction(rng) * r;
      const auto analytic = fam->first_derivs(p);
      const double h = r * 1e-4;
      double worst = 0.0, scale = 1e-14;
      for (int k = 0; k < 3; ++k) {
        Vec3 e;
        e[k] = 1.0;
        const SymTensor2 fd = (fam->value(p + e * (2.0 * h)) * (-1.0) +
                               fam->value(p + e * h) * 8.0 + fam->value(p - e * h) * (-8.0) +
                               fam->value(p - e * (2.0 * h))) *
                              (1.0 / (12.0 * h));
        worst = std::max(worst, max_diff(fd, analytic[k]));
        scale = std::max(scale, max_abs_component(analytic[k]));
      }
      CHECK(worst / scale <= 1e-6);
    }
  }
}

TEST_CASE("deviation jets differentiate the deviation") {
  // dh from deviation_jet matches finite differences of deviation()
  std::mt19937 rng(99u);
  const std::vector<FamilyPtr> families = {
      make_translated_schwarzschild(1.0, {1.0, 2.0, -0.5}),
      make_york_perturbed(1.0, {0.7, -0.3, 0.1}, {YorkWeight::Kind::SinLog}),
      make_graph_slice(1.0, divergent_graph_function({1.0, 0.0, 0.0})),
  };
  for (const auto& fam : families) {
    for (int trial = 0; trial < 25; ++trial) {
      const double r = 20.0 * std::pow(50.0, trial / 25.0);
      const Point3 p = random_direction(rng) * r;
      SymTensor2 h;
      std::array<SymTensor2, 3> dh;
      fam->deviation_jet(p, h, dh);
      CHECK(max_diff(h, fam->deviation(p)) <= 1e-15 * std::max(1.0, max_abs_component(h)));
      const double step = r * 1e-4;
      double scale = 1e-16, worst = 0.0;
      for (int k = 0; k < 3; ++k) {
        Vec3 e;
        e[k] = 1.0;
        const SymTensor2 fd = (fam->deviation(p + e * (2.0 * step)) * (-1.0) +
                               fam->deviation(p + e * step) * 8.0 +
                               fam->deviation(p - e * step) * (-8.0) +
                               fam->deviation(p - e * (2.0 * step))) *
                              (1.0 / (12.0 * step));
        worst = std::max(worst, max_diff(fd, dh[k]));
        scale = std::max(scale, max_abs_component(dh[k]));
      }
      CHECK(worst / scale <= 1e-5);
    }
  }
}

TEST_CASE("metric values stay positive definite across the domain") {
  std::mt19937 rng(7u);
  const std::vector<FamilyPtr> families = {
      make_translated_schwarzschild(1.0, {2.0, -1.0, 3.0}),
      make_york_perturbed(1.0, {1.0, 0.0, 0.0}, {YorkWeight::Kind::SinLog}),
      make_graph_slice(1.0, divergent_graph_function({1.0, 0.0, 0.0})),
  };
  for (const auto& fam : families)
    for (int trial = 0; trial < 200; ++trial) {
      const double r = 1.2 * fam->r_min() * std::pow(1e5, trial / 200.0);
      CHECK(fam->value(random_direction(rng) * r).positive_definite());
    }
}

TEST_CASE("york deviation decay matches the weight order") {
  // |h|_{g_m} ~ f(r)/r^2: fitted log-log slope within 0.2 of the analytic one
  auto slope_for = [](const YorkWeight& w, double expect) {
    auto fam = make_york_perturbed(1.0, {1.0, 0.0, 0.0}, w);
    const Vec3 eta{0.48, 0.6, 0.64};
    std::vector<std::pair<double, double>> decay;
    for (int k = 0; k <= 8; ++k) {
      const double r = 50.0 * std::pow(2.0, k);
      const Point3 p = eta / norm(eta) * r;
      const SymTensor2 h = fam->deviation(p);
      const SymTensor2 ginv = fam->value(p).inverse();
      decay.emplace_back(r, std::sqrt(SymTensor2::contract2(h, h, ginv)));
    }
    CHECK(std::fabs(loglog_slope(decay) - expect) <= 0.2);
  };
  slope_for({YorkWeight::Kind::Power, 0.75}, -1.75);
  slope_for({YorkWeight::Kind::Const}, -2.0);
}

TEST_CASE("york deviation is exactly trace-free and divergence-free") {
  auto fam = make_york_perturbed(1.0, {0.3, -1.2, 0.8}, {YorkWeight::Kind::Const});
  std::mt19937 rng(5u);
  for (int trial = 0; trial < 50; ++trial) {
    const Point3 p = random_direction(rng) * (10.0 + 30.0 * trial);
    SymTensor2 h;
    std::array<SymTensor2, 3> dh;
    fam->deviation_jet(p, h, dh);
    const double scale = max_abs_component(h);
    CHECK(std::fabs(h.trace()) <= 1e-14 * scale);
    // div h = -2 f div Y = 0 for constant weight
    for (int j = 0; j < 3; ++j) {
      double div_j = 0.0;
      for (int i = 0; i < 3; ++i) div_j += dh[i](i, j);
      CHECK(std::fabs(div_j) <= 1e-14 * scale / norm(p));
    }
  }
}

TEST_CASE("time-symmetric slice has vanishing extrinsic data") {
  auto graph = make_graph_slice(1.0, prescribed_graph_function({}));
  const ExtrinsicData ex = extrinsic_data(*graph->as_graph(), {9.0, 1.0, -2.0});
  CHECK(max_abs_component(ex.K) == 0.0);
  CHECK(max_abs_component(ex.Pi) == 0.0);
  CHECK(ex.trK == 0.0);
}

TEST_CASE("extrinsic curvature against a finite-difference covariant Hessian") {
  auto fam = make_graph_slice(1.0, divergent_graph_function({1, 0, 0}));
  const GraphSlice* slice = fam->as_graph();
  const double m = 1.0;
  const Point3 p{1000.0, 0.0, 0.0};
  const ExtrinsicData ex = extrinsic_data(*slice, p);
  CHECK(max_abs_component(ex.K) > 1e-8);   // O(r^-2) magnitude
  CHECK(max_abs_component(ex.K) < 1e-4);

  // rebuild K with the Hessian of T taken by finite differences of the
  // analytic gradient
  const double h = 1e-2;
  ScalarJet2 tj = slice->graph_jet(p);
  SymTensor2 fd_hess;
  for (int k = 0; k < 3; ++k) {
    Vec3 e;
    e[k] = 1.0;
    const Vec3 gp2 = slice->graph_jet(p + e * (2.0 * h)).grad;
    const Vec3 gp1 = slice->graph_jet(p + e * h).grad;
    const Vec3 gm1 = slice->graph_jet(p - e * h).grad;
    const Vec3 gm2 = slice->graph_jet(p - e * (2.0 * h)).grad;
    for (int i = 0; i < 3; ++i) {
      const double d = (-gp2[i] + 8.0 * gp1[i] - 8.0 * gm1[i] + gm2[i]) / (12.0 * h);
      if (i >= k) fd_hess(k, i) = d;
    }
  }
  ScalarJet2 fd_jet = tj;
  fd_jet.hess = fd_hess;
  const SymTensor2 hess_m = background_hessian(fd_jet, p, m);
  const double r = norm(p);
  const double phi = conformal_factor(r, m);
  const double N = schwarzschild_lapse(r, m);
  const double dN = schwarzschild_lapse_dr(r, m);
  const double gradT_sq = dot(tj.grad, tj.grad) / std::pow(phi, 4);
  const double gdotn = dot(tj.grad, p / r * dN) / std::pow(phi, 4);
  SymTensor2 K = SymTensor2::sym_outer(tj.grad, (p / r) * dN) * 2.0;
  K += hess_m * N;
  K += SymTensor2::outer(tj.grad) * (-N * N * gdotn);
  K = K * (1.0 / std::sqrt(1.0 - N * N * gradT_sq));
  CHECK(max_diff(K, ex.K) <= 1e-8 * max_abs_component(ex.K));
}

TEST_CASE("extrinsic invariants: trace and momentum tensor") {
  auto fam = make_graph_slice(1.0, divergent_graph_function({0.2, 1.0, 0.4}));
  const GraphSlice* slice = fam->as_graph();
  std::mt19937 rng(17u);
  for (int trial = 0; trial < 20; ++trial) {
    const Point3 p = random_direction(rng) * (50.0 * (trial + 1));
    const ExtrinsicData ex = extrinsic_data(*slice, p);
    const SymTensor2 g = fam->value(p);
    const SymTensor2 ginv = g.inverse();
    double tr = 0.0;
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) tr += ginv(i, j) * ex.K(i, j);
    CHECK(std::fabs(tr - ex.trK) <= 1e-12 * std::max(1e-30, std::fabs(ex.trK)));
    CHECK(max_diff(ex.Pi, g * ex.trK - ex.K) == 0.0);
    CHECK(ex.lapse == schwarzschild_lapse(norm(p), 1.0));
  }
}

TEST_CASE("induced mean curvature tracks the flat laplacian of T") {
  auto fam = make_graph_slice(1.0, divergent_graph_function({1, 0, 0}));
  const GraphSlice* slice = fam->as_graph();
  const Vec3 dir = Vec3{0.6, -0.48, 0.64} / norm(Vec3{0.6, -0.48, 0.64});
  for (double r : {100.0, 300.0, 1000.0, 3000.0}) {
    const Point3 p = dir * r;
    const ExtrinsicData ex = extrinsic_data(*slice, p);
    const ScalarJet2 tj = slice->graph_jet(p);
    const double lap = tj.hess(0, 0) + tj.hess(1, 1) + tj.hess(2, 2);
    CHECK(std::fabs(ex.trK - lap) * r * r * r <= 20.0);
  }
}

TEST_CASE("non-spacelike points are rejected with the defect reported") {
  GraphFunction steep;
  steep.kind = GraphFunction::Kind::Custom;
  steep.custom = [](const Point3& p) {
    ScalarJet2 j;
    // benign at the construction-time validation radii, steep in between
    const double r = norm(p);
    if (r > 60.0 && r < 1000.0) j.grad = {2.0, 0.0, 0.0};
    return j;
  };
  auto fam = make_graph_slice(1.0, steep);
  try {
    extrinsic_data(*fam->as_graph(), {100.0, 0.0, 0.0});
    FAIL("expected domain_error");
  } catch (const domain_error& e) {
    CHECK(std::string(e.what()).find("1 - N^2 |grad T|^2") != std::string::npos);
  }
}

TEST_CASE("points inside the validity radius are rejected") {
  auto york = make_york_perturbed(1.0, {1, 0, 0}, {YorkWeight::Kind::Const});
  CHECK_THROWS_AS(eval_jet(*york, {1.0, 0.0, 0.0}), domain_error);  // r_min = 2m
  auto schw = make_schwarzschild(1.0);
  CHECK_THROWS_AS(deviation(*schw, {0.1, 0.0, 0.0}), domain_error);
}

TEST_CASE("non-positive-definite construction is flagged as an internal error") {
  GraphFunction steep;
  steep.kind = GraphFunction::Kind::Custom;
  steep.custom = [](const Point3&) {
    ScalarJet2 j;
    j.grad = {5.0, 0.0, 0.0};
    return j;
  };
  CHECK_THROWS_AS(make_graph_slice(1.0, steep), internal_error);
}

TEST_CASE("second derivatives are symmetric and feed a vanishing schwarzschild curvature") {
  auto schw = make_schwarzschild(1.0);
  const MetricJet jet = eval_jet(*schw, {7.0, -4.0, 3.0}, 2);
  REQUIRE(jet.has_second);
  for (int k = 0; k < 3; ++k)
    for (int l = 0; l < 3; ++l) CHECK(max_diff(jet.ddg[k][l], jet.ddg[l][k]) == 0.0);

  for (double r : {10.0, 100.0, 1000.0}) {
    CHECK(std::fabs(scalar_curvature(*schw, {r, 0.0, 0.0})) <= 1e-8);
    CHECK(std::fabs(scalar_curvature(*schw, {0.0, r / std::sqrt(2.0), r / std::sqrt(2.0)})) <=
          1e-8);
  }
}

TEST_CASE("vacuum identity on a prescribed graph slice") {
  auto fam = make_graph_slice(1.0, prescribed_graph_function({1, 0, 0}));
  const GraphSlice* slice = fam->as_graph();
  const Vec3 dir = Vec3{2.0, 2.0, 1.0} / 3.0;
  for (double r : {100.0, 1000.0}) {
    const Point3 p = dir * r;
    const double R = scalar_curvature(*fam, p);
    const ExtrinsicData ex = extrinsic_data(*slice, p);
    const SymTensor2 ginv = fam->value(p).inverse();
    const double rhs = SymTensor2::contract2(ex.K, ex.K, ginv) - ex.trK * ex.trK;
    if (std::fabs(R) > 1e-12) CHECK(std::fabs(R - rhs) <= 1e-6 * std::fabs(R));
  }
}

TEST_CASE("prescribed graph coefficient vanishes with the center") {
  CHECK(prescribed_graph_lambda(1.0, {}) == 0.0);
  const Vec3 z{0.0, 3.0, -4.0};
  const double lam = prescribed_graph_lambda(2.0, z);
  // normalization: -(4 lam^3 / 15 m) |z|^2 = 1
  CHECK(-(4.0 * lam * lam * lam / (15.0 * 2.0)) * dot(z, z) == doctest::Approx(1.0).epsilon(1e-14));
}
