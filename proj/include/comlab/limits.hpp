#pragma once

// Radius ladders, convergence-model classification of (r, vector) sequences,
// and Richardson extrapolation of convergent ones.
//
// Candidate models, fitted per component by least squares:
//   converged        y = c + b/r
//   log_divergent    y = c + alpha ln r
//   power_divergent  y = c + beta r^p, p in (0, 1]   (shared p, profiled)
//   oscillatory      y = c + A cos(ln r) + B sin(ln r)
// The winning model must beat the runner-up by a 5x residual margin,
// otherwise the verdict is undetermined.

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "comlab/errors.hpp"
#include "comlab/geometry.hpp"

namespace comlab {

struct RadiusLadder {
  double r0 = 0.0;
  double ratio = 0.0;
  int count = 0;

  // r0 = 100 m, ratio e^(pi/8), 36 rungs: just over two full 2-pi periods in
  // ln r (enough to pin oscillatory models) while staying inside the 1e8 m
  // validity cap.
  static RadiusLadder default_for(double m);

  std::vector<double> radii() const;
  void validate(double mass_scale) const;  // caps r_max at 1e8 * m
};

enum class LimitClass { Converged, LogDivergent, PowerDivergent, Oscillatory, Undetermined };

std::string to_string(LimitClass c);

struct LimitVerdict {
  LimitClass cls = LimitClass::Undetermined;

  // converged
  Vec3 value;
  Vec3 rate;  // coefficient of 1/r

  // log_divergent
  Vec3 log_slope;

  // power_divergent
  double exponent = 0.0;
  Vec3 power_coeff;

  // oscillatory: per-component cos/sin coefficients, offsets, and the total
  // amplitude sqrt(sum_i A_i^2 + B_i^2) with phase from the dominant component
  Vec3 osc_cos;
  Vec3 osc_sin;
  Vec3 osc_center;
  double amplitude = 0.0;
  double phase = 0.0;

  std::map<std::string, double> residuals;  // model -> RMS residual
  std::string note;
};

using Sequence = std::vector<std::pair<double, Vec3>>;

// Least-squares model classification; needs at least 8 points.
LimitVerdict classify(const Sequence& seq);

// Richardson extrapolation (geometric ladders; least-squares fallback
// otherwise). Throws if classify does not return Converged.
Vec3 extrapolate(const Sequence& seq, Vec3* error_estimate = nullptr);

// The bare extrapolation step without the classification gate.
Vec3 richardson_extrapolate(const Sequence& seq, Vec3* error_estimate = nullptr);

// Log-log least-squares slope of (x, y): fits ln y = s ln x + c, returns s.
// Used by the decay-rate checks; y entries <= floor are skipped.
double loglog_slope(const std::vector<std::pair<double, double>>& xy, double floor = 0.0);

}  // namespace comlab
