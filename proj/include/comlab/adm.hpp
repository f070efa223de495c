#pragma once

// Finite-radius ADM surface integrals: mass, center of mass (full-metric and
// deviation forms), linear momentum, and the annulus volume form of the
// center of mass.

#include <vector>

#include "comlab/metric.hpp"
#include "comlab/quadrature.hpp"

namespace comlab {

// (1/16 pi) oint sum_ij (d_j g_ij - d_i g_jj) x_i/r dA   (Euclidean area)
double adm_mass_at(const MetricFamily& family, double r, const SphereGrid& grid);

// (1/16 pi m) oint [ (d_j g_jk - d_k g_jj) x_k/r x_i - (g_ij x_j/r - g_jj x_i/r) ] dA
// with m the family's mass parameter.
Vec3 adm_com_at(const MetricFamily& family, double r, const SphereGrid& grid);

// Deviation form of the same center integral,
//   (1/16 pi m) oint [ (div h)(nu) x_i - nu(tr h) x_i - h(nu, e_i) + (tr h) nu_i ] dA,
// evaluated on the family's com_deviation_jet (exact deviation except for
// graph slices, which use the leading-order -dT (x) dT; the two surface forms
// then differ by O(1/r) there).
Vec3 adm_com_deviation_form(const MetricFamily& family, double r, const SphereGrid& grid);

// (1/8 pi) oint Pi_ij x_j/r dA on a graph slice (no 1/m factor; divide by the
// family mass for the momentum-per-mass normalization).
Vec3 adm_momentum_at(const MetricFamily& family, double r, const SphereGrid& grid);

// Annulus increment of the volume form of the center of mass,
//   (1/16 pi m) int_{R0 <= |x| <= r} ( |Hess T|^2 - (Lap T)^2 ) x dV,
// Hessian/Laplacian covariant in the Schwarzschild background, indices raised
// with it, Euclidean volume measure. The caller adds the surface value at R0.
Vec3 com_volume_form(const MetricFamily& family, double r0, double r, const AnnulusRule& rule);

struct SweepRecord {
  double r = 0.0;
  double m_adm = 0.0;
  Vec3 z_adm;
  Vec3 p_adm;          // graph slices only; NaN otherwise
  bool has_momentum = false;
  int n_theta = 0;
  int n_phi = 0;
};

}  // namespace comlab
