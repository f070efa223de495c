#pragma once

// Newtonian matter densities with critical r^-4 tails, their truncated
// mass/center volume integrals, radial potentials, and the quasi-local
// surface integrals built from the potential.

#include <utility>

#include "comlab/geometry.hpp"
#include "comlab/quadrature.hpp"

namespace comlab {

// Smooth rotationally symmetric cutoff: 0 on r <= 1, 1 on r >= 2.
double cutoff_psi(double r);
// a = int_1^2 psi(r)/r^2 dr (cached after the first call).
double cutoff_constant_a();

struct NewtonianDensity {
  enum class Kind { DivergentU, Prescribed, CustomRadial } kind = Kind::Prescribed;
  double m = 1.0;      // mass parameter (Prescribed / CustomRadial)
  Vec3 u;              // DivergentU direction; CustomRadial odd-part direction
  Vec3 z;              // Prescribed center
  double odd_eps = 0.0;  // CustomRadial: odd part decays like r^(-4-odd_eps)

  Vec3 center() const { return kind == Kind::Prescribed ? z : Vec3{}; }
  bool radial() const;
};

NewtonianDensity make_divergent_density(const Vec3& u);
NewtonianDensity make_prescribed_density(double m, const Vec3& z);
// rho = rho_{m,0}(r) * (1 + (u_hat.eta)/(2 r^odd_eps)); odd_eps = 0 or u = 0
// gives the plain radial profile.
NewtonianDensity make_custom_radial_density(double m, const Vec3& u, double odd_eps);

double density_eval(const NewtonianDensity& d, const Point3& p);

// (rho_even, rho_odd) at p: (rho(p) +- rho(-p))/2.
std::pair<double, double> evenness_split(const NewtonianDensity& d, const Point3& p);

// Truncated volume integrals over the ball of radius R about the density's
// center, integrated as radial shells from the cutoff's inner edge outward.
double newton_mass(const NewtonianDensity& d, double R, const SphereGrid& grid);
Vec3 newton_com(const NewtonianDensity& d, double R, const SphereGrid& grid);
// The center-of-mass numerator int_{B_R} rho x dV (no mass division).
Vec3 newton_com_numerator(const NewtonianDensity& d, double R, const SphereGrid& grid);

// Radial potential about the density's center: U(r) and dU/dr with
// U -> 0 at infinity; the r^-4 tail beyond the cutoff is integrated
// analytically. Throws for non-radial densities.
std::pair<double, double> radial_potential(const NewtonianDensity& d, double r);

// Quasi-local surface integrals on the sphere |x - sphere_center| = r:
//   m_N = (1/4 pi) oint dU/dnu dA
//   z_N = (1/(4 pi m_N)) oint (dU/dnu x - U nu) dA
double quasilocal_mass(const NewtonianDensity& d, const Vec3& sphere_center, double r,
                       const SphereGrid& grid);
Vec3 quasilocal_com(const NewtonianDensity& d, const Vec3& sphere_center, double r,
                    const SphereGrid& grid);

}  // namespace comlab
