#include "comlab/newtonian.hpp"

#include <cmath>
#include <mutex>
#include <numbers>
#include <sstream>

#include "comlab/errors.hpp"

namespace comlab {

namespace {

constexpr double kFourPi = 4.0 * std::numbers::pi;
constexpr int kRadialNodes = 48;

double bump(double t) { return t > 0.0 ? std::exp(-1.0 / t) : 0.0; }

// int_1^2 psi/s^2 ds with the same panel scheme used by the volume
// quadratures, so truncated-mass identities hold to roundoff.
double psi_over_r2_on_cutoff() {
  return integrate_radial([](double s) { return cutoff_psi(s) / (s * s); }, 1.0, 2.0,
                          kRadialNodes, 4);
}

// rho_0(s): the radial prescribed profile of mass parameter m about the origin
double prescribed_profile(double s, double m) {
  if (s <= 1.0) return 0.0;
  const double a = cutoff_constant_a();
  return m * cutoff_psi(s) / (kFourPi * (a + 0.5) * s * s * s * s);
}

}  // namespace

double cutoff_psi(double r) {
  const double t = r - 1.0;
  if (t <= 0.0) return 0.0;
  if (t >= 1.0) return 1.0;
  const double e0 = bump(t), e1 = bump(1.0 - t);
  return e0 / (e0 + e1);
}

double cutoff_constant_a() {
  static std::once_flag flag;
  static double a = 0.0;
  std::call_once(flag, [] { a = psi_over_r2_on_cutoff(); });
  return a;
}

bool NewtonianDensity::radial() const {
  switch (kind) {
    case Kind::DivergentU: return false;
    case Kind::Prescribed: return true;
    case Kind::CustomRadial: return odd_eps == 0.0 || (u.x == 0.0 && u.y == 0.0 && u.z == 0.0);
  }
  return false;
}

NewtonianDensity make_divergent_density(const Vec3& u) {
  if (norm(u) == 0.0) throw config_error("divergent density: u must be nonzero");
  NewtonianDensity d;
  d.kind = NewtonianDensity::Kind::DivergentU;
  d.u = u;
  d.m = 0.0;
  return d;
}

NewtonianDensity make_prescribed_density(double m, const Vec3& z) {
  if (!(m > 0.0)) throw config_error("prescribed density: mass must be positive");
  NewtonianDensity d;
  d.kind = NewtonianDensity::Kind::Prescribed;
  d.m = m;
  d.z = z;
  return d;
}

NewtonianDensity make_custom_radial_density(double m, const Vec3& u, double odd_eps) {
  if (!(m > 0.0)) throw config_error("custom density: mass must be positive");
  if (odd_eps < 0.0) throw config_error("custom density: odd_eps must be >= 0");
  NewtonianDensity d;
  d.kind = NewtonianDensity::Kind::CustomRadial;
  d.m = m;
  d.u = u;
  d.odd_eps = odd_eps;
  return d;
}

double density_eval(const NewtonianDensity& d, const Point3& p) {
  switch (d.kind) {
    case NewtonianDensity::Kind::DivergentU: {
      const double r = norm(p);
      if (r <= 1.0) return 0.0;
      return cutoff_psi(r) * (norm(d.u) + dot(p, d.u) / r) / (r * r * r * r);
    }
    case NewtonianDensity::Kind::Prescribed:
      return prescribed_profile(norm(p - d.z), d.m);
    case NewtonianDensity::Kind::CustomRadial: {
      const double r = norm(p);
      const double base = prescribed_profile(r, d.m);
      if (base == 0.0 || d.odd_eps == 0.0) return base;
      const double un = norm(d.u);
      if (un == 0.0) return base;
      const double mu = dot(p, d.u) / (r * un);
      return base * (1.0 + 0.5 * mu * std::pow(r, -d.odd_eps));
    }
  }
  return 0.0;
}

std::pair<double, double> evenness_split(const NewtonianDensity& d, const Point3& p) {
  const double plus = density_eval(d, p);
  const double minus = density_eval(d, -p);
  return {0.5 * (plus + minus), 0.5 * (plus - minus)};
}

namespace {

// Shell-by-shell integral of rho(center + s eta) * weight(s, eta) for s in
// [1, R] about the density's center; panels split at the cutoff edge.
template <typename Shell>
void for_radial_panels(double R, Shell&& accumulate) {
  if (R <= 1.0) return;
  std::vector<double> x, w;
  gauss_legendre(kRadialNodes, x, w);
  auto run_panel = [&](double a, double b) {
    const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
    for (int k = 0; k < kRadialNodes; ++k) accumulate(mid + half * x[k], half * w[k]);
  };
  const double edge = std::min(R, 2.0);
  // cutoff transition region: same panel layout as integrate_radial(.., 4)
  // so the closed-form mass identities hold to roundoff
  {
    const double step = std::pow(edge, 0.25);
    double a = 1.0;
    for (int p = 0; p < 4; ++p) {
      const double b = (p == 3) ? edge : a * step;
      run_panel(a, b);
      a = b;
    }
  }
  if (R > 2.0) {
    const int panels = std::max(1, static_cast<int>(std::ceil(std::log(R / 2.0))));
    const double step = std::pow(R / 2.0, 1.0 / panels);
    double a = 2.0;
    for (int p = 0; p < panels; ++p) {
      const double b = (p == panels - 1) ? R : a * step;
      run_panel(a, b);
      a = b;
    }
  }
}

}  // namespace

double newton_mass(const NewtonianDensity& d, double R, const SphereGrid& grid) {
  if (!(R > 0.0)) throw config_error("newton_mass: R must be positive");
  const Vec3 c = d.center();
  KahanSum total;
  for_radial_panels(R, [&](double s, double ws) {
    const double shell = integrate_sphere(grid, s, [&](const Point3& q) {
      return density_eval(d, c + q);
    });
    total.add(ws * shell);
  });
  return total.value();
}

Vec3 newton_com_numerator(const NewtonianDensity& d, double R, const SphereGrid& grid) {
  const Vec3 c = d.center();
  KahanSum sx, sy, sz;
  for_radial_panels(R, [&](double s, double ws) {
    const Vec3 shell = integrate_sphere_vec(grid, s, [&](const Point3& q) {
      return (c + q) * density_eval(d, c + q);
    });
    sx.add(ws * shell.x);
    sy.add(ws * shell.y);
    sz.add(ws * shell.z);
  });
  return {sx.value(), sy.value(), sz.value()};
}

Vec3 newton_com(const NewtonianDensity& d, double R, const SphereGrid& grid) {
  const double mass = newton_mass(d, R, grid);
  if (!(mass > 0.0)) throw domain_error("newton_com: truncated mass vanishes");
  return newton_com_numerator(d, R, grid) / mass;
}

namespace {

// Enclosed mass M(s) about the center; closed form beyond the cutoff.
double enclosed_mass_radial(const NewtonianDensity& d, double s) {
  const double a = cutoff_constant_a();
  if (s <= 1.0) return 0.0;
  if (s >= 2.0) return d.m * (1.0 - 1.0 / ((a + 0.5) * s));
  const double part = integrate_radial(
      [&](double t) { return cutoff_psi(t) / (t * t); }, 1.0, s, kRadialNodes, 4);
  return d.m * part / (a + 0.5);
}

// tail(r) = int_r^inf 4 pi rho(s) s ds
double potential_tail(const NewtonianDensity& d, double r) {
  const double a = cutoff_constant_a();
  const double coeff = d.m / (a + 0.5);
  if (r >= 2.0) return 0.5 * coeff / (r * r);
  const double lo = std::max(r, 1.0);
  const double inner = integrate_radial(
      [&](double t) { return cutoff_psi(t) / (t * t * t); }, lo, 2.0, kRadialNodes, 4);
  return coeff * (inner + 0.125);
}

}  // namespace

std::pair<double, double> radial_potential(const NewtonianDensity& d, double r) {
  if (!d.radial())
    throw config_error("radial_potential: density is not radially symmetric about a center");
  if (!(r > 0.0)) throw config_error("radial_potential: r must be positive");
  const double M = enclosed_mass_radial(d, r);
  const double U = -M / r - potential_tail(d, r);
  return {U, M / (r * r)};
}

double quasilocal_mass(const NewtonianDensity& d, const Vec3& sphere_center, double r,
                       const SphereGrid& grid) {
  const Vec3 zc = d.center();
  const double flux = integrate_sphere(grid, r, [&](const Point3& q) {
    const Point3 x = sphere_center + q;
    const Vec3 rel = x - zc;
    const double s = norm(rel);
    const auto [U, dU] = radial_potential(d, s);
    (void)U;
    const Vec3 nu = q / r;
    return dU * dot(rel, nu) / s;
  });
  return flux / kFourPi;
}

Vec3 quasilocal_com(const NewtonianDensity& d, const Vec3& sphere_center, double r,
                    const SphereGrid& grid) {
  const double mN = quasilocal_mass(d, sphere_center, r, grid);
  if (std::fabs(mN) < 1e-300) {
    throw domain_error("quasilocal_com: quasi-local mass vanishes on this sphere");
  }
  const Vec3 zc = d.center();
  const Vec3 integral = integrate_sphere_vec(grid, r, [&](const Point3& q) {
    const Point3 x = sphere_center + q;
    const Vec3 rel = x - zc;
    const double s = norm(rel);
    const auto [U, dU] = radial_potential(d, s);
    const Vec3 nu = q / r;
    return x * (dU * dot(rel, nu) / s) - nu * U;
  });
  return integral / (kFourPi * mN);
}

}  // namespace comlab
