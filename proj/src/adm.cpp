#include "comlab/adm.hpp"

#include <cmath>
#include <numbers>

namespace comlab {

namespace {
constexpr double kFourPi = 4.0 * std::numbers::pi;
}

double adm_mass_at(const MetricFamily& family, double r, const SphereGrid& grid) {
  const double integral = integrate_sphere(grid, r, [&](const Point3& p) {
    const MetricJet jet = eval_jet(family, p, 1);
    const Vec3 eta = p / r;
    double s = 0.0;
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) s += (jet.dg[j](i, j) - jet.dg[i](j, j)) * eta[i];
    return s;
  });
  return integral / (4.0 * kFourPi);
}

namespace {

// The shared surface integrand of the center integrals, evaluated on a
// deviation jet. The integral is linear in the metric and its Schwarzschild
// part vanishes identically on coordinate spheres (radial conformal factor,
// odd integrand), so the center is computed from the deviation alone; this
// keeps the signal clear of the O(1) background that would otherwise absorb
// deviations below 1 ulp of 1 at large radii.
template <typename DeviationJet>
Vec3 com_surface_integral(double r, double m, const SphereGrid& grid, DeviationJet&& jet_at) {
  if (!(m > 0.0)) throw config_error("center integral: family mass must be positive");
  const Vec3 integral = integrate_sphere_vec(grid, r, [&](const Point3& p) {
    SymTensor2 h;
    std::array<SymTensor2, 3> dh;
    jet_at(p, h, dh);
    const Vec3 eta = p / r;
    double divh_nu = 0.0, nu_trh = 0.0;
    for (int j = 0; j < 3; ++j) {
      nu_trh += (dh[j](0, 0) + dh[j](1, 1) + dh[j](2, 2)) * eta[j];
      for (int i = 0; i < 3; ++i) divh_nu += dh[i](i, j) * eta[j];
    }
    Vec3 v = p * (divh_nu - nu_trh);
    v += (h.contract(eta) - eta * h.trace()) * (-1.0);
    return v;
  });
  return integral / (4.0 * kFourPi * m);
}

}  // namespace

Vec3 adm_com_at(const MetricFamily& family, double r, const SphereGrid& grid) {
  return com_surface_integral(r, family.mass(), grid,
                              [&](const Point3& p, SymTensor2& h, std::array<SymTensor2, 3>& dh) {
                                family.check_domain(p);
                                family.deviation_jet(p, h, dh);
                              });
}

Vec3 adm_com_deviation_form(const MetricFamily& family, double r, const SphereGrid& grid) {
  return com_surface_integral(r, family.mass(), grid,
                              [&](const Point3& p, SymTensor2& h, std::array<SymTensor2, 3>& dh) {
                                family.check_domain(p);
                                family.com_deviation_jet(p, h, dh);
                              });
}

Vec3 adm_momentum_at(const MetricFamily& family, double r, const SphereGrid& grid) {
  const GraphSlice* slice = family.as_graph();
  if (slice == nullptr)
    throw config_error("adm_momentum_at: linear momentum is defined for graph slices only");
  const Vec3 integral = integrate_sphere_vec(grid, r, [&](const Point3& p) {
    const ExtrinsicData ex = extrinsic_data(*slice, p);
    return ex.Pi.contract(p / r);
  });
  return integral / (2.0 * kFourPi);
}

Vec3 com_volume_form(const MetricFamily& family, double r0, double r, const AnnulusRule& rule) {
  const GraphSlice* slice = family.as_graph();
  if (slice == nullptr)
    throw config_error("com_volume_form: defined for graph slices only");
  const double m = family.mass();
  if (!(r0 > 0.5 * m) || !(r > r0))
    throw config_error("com_volume_form: need m/2 < R0 < r");
  const Vec3 integral = integrate_annulus_vec(rule, [&](const Point3& p) {
    slice->check_domain(p);
    const ScalarJet2 tj = slice->graph_jet(p);
    const SymTensor2 hess = background_hessian(tj, p, m);
    const double rr = norm(p);
    const double phi = conformal_factor(rr, m);
    const double inv_phi4 = 1.0 / (phi * phi * phi * phi);
    // g_m-raised contractions of the background Hessian
    double lap = 0.0, hess_sq = 0.0;
    for (int i = 0; i < 3; ++i) {
      lap += hess(i, i);
      for (int j = 0; j < 3; ++j) hess_sq += hess(i, j) * hess(i, j);
    }
    lap *= inv_phi4;
    hess_sq *= inv_phi4 * inv_phi4;
    return p * (hess_sq - lap * lap);
  });
  return integral / (4.0 * kFourPi * m);
}

}  // namespace comlab
