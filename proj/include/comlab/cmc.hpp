#pragma once

// Mean curvature of round coordinate spheres in a family's metric, and a
// derivative-free least-variance fit of near-CMC spheres whose centers probe
// the foliation's Euclidean centers.

#include <vector>

#include "comlab/metric.hpp"
#include "comlab/quadrature.hpp"

namespace comlab {

// Mean curvature (outward convention) of the Euclidean round sphere
// |x - center| = radius at the point center + radius * eta, measured in the
// family metric. Needs only the first-derivative jet.
double sphere_mean_curvature(const MetricFamily& family, const Vec3& center, double radius,
                             const Vec3& eta);

struct CmcFit {
  Vec3 center;
  double radius = 0.0;
  double mean_h = 0.0;
  double residual = 0.0;  // area-normalized variance of H over the sphere
  int iterations = 0;
  bool converged = false;
};

struct CmcFitOptions {
  int n_theta = 16;
  int n_phi = 32;
  int max_iterations = 200;
  double step_tol_factor = 1e-10;  // simplex diameter tolerance, * sigma
  double simplex_scale = 0.02;     // initial simplex leg, * sigma
  double residual_tol = 1e-2;      // converged also requires sqrt(var) <= tol * |Hbar|
  std::vector<double>* trace = nullptr;  // best residual per iteration, if set
};

// Nelder-Mead minimization of the H-variance over (center, radius), started
// from `init`. Non-convergence is reported via the flag, never thrown.
CmcFit fit_cmc_sphere(const MetricFamily& family, double sigma, const CmcFit& init,
                      const CmcFitOptions& opts = {});

// Repeated fits along a sigma ladder with warm starts; per-sigma failures are
// recorded (converged = false) and the sweep continues.
std::vector<std::pair<double, CmcFit>> cmc_center_sweep(const MetricFamily& family,
                                                        const std::vector<double>& sigmas,
                                                        const CmcFitOptions& opts = {});

}  // namespace comlab
