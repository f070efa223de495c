#pragma once

// Exterior-region metric families with analytic first derivatives.
//
// Families (units G = c = 1, lengths in units of the mass parameter allowed):
//   schwarzschild            g = phi^4 delta,  phi = 1 + m/2r
//   translated_schwarzschild g = g_m + (2 m z.x / r^3) delta
//   york_perturbed           g = g_m - 2 f(r) Y,   Y the momentum tensor of a
//                            prescribed linear momentum P (trace- and
//                            divergence-free)
//   graph_slice              g = g_m - N^2 dT (x) dT, the metric induced on
//                            the hypersurface t = T(x) of the Schwarzschild
//                            spacetime; N the Schwarzschild lapse
//
// First derivatives are hand-derived closed forms (validated against finite
// differences in the tests); second derivatives come from 4th-order central
// differences of the analytic first derivatives.

#include <array>
#include <functional>
#include <memory>
#include <optional>
#include <string>

#include "comlab/errors.hpp"
#include "comlab/geometry.hpp"

namespace comlab {

inline double conformal_factor(double r, double m) { return 1.0 + 0.5 * m / r; }
inline double conformal_factor_dr(double r, double m) { return -0.5 * m / (r * r); }
// Schwarzschild lapse (1 - m/2r)/(1 + m/2r) and its radial derivative.
inline double schwarzschild_lapse(double r, double m) {
  return (1.0 - 0.5 * m / r) / (1.0 + 0.5 * m / r);
}
inline double schwarzschild_lapse_dr(double r, double m) {
  const double a = 1.0 + 0.5 * m / r;
  return m / (r * r * a * a);
}

struct MetricJet {
  SymTensor2 g;
  std::array<SymTensor2, 3> dg;  // dg[k](i,j) = d_k g_ij
  bool has_second = false;
  std::array<std::array<SymTensor2, 3>, 3> ddg;  // ddg[k][l](i,j) = d_k d_l g_ij
};

struct ExtrinsicData {
  SymTensor2 K;    // second fundamental form of the graph slice
  double trK;      // trace of K in the induced metric
  SymTensor2 Pi;   // momentum tensor trK * g - K
  double lapse;    // Schwarzschild lapse at the point
};

// Jet of a graph function T: value, gradient, Hessian (flat partials).
struct ScalarJet2 {
  double value = 0.0;
  Vec3 grad;
  SymTensor2 hess;
};

class GraphSlice;

class MetricFamily {
 public:
  virtual ~MetricFamily() = default;

  virtual std::string name() const = 0;
  double mass() const { return m_; }
  double r_min() const { return r_min_; }

  virtual SymTensor2 value(const Point3& p) const = 0;
  virtual std::array<SymTensor2, 3> first_derivs(const Point3& p) const = 0;
  // exact deviation g - g_m
  virtual SymTensor2 deviation(const Point3& p) const = 0;

  // Exact deviation g - g_m and its flat first derivatives. The center
  // integrals are linear in g and the Schwarzschild part integrates to zero
  // on every coordinate sphere, so they are evaluated on this jet alone;
  // forming phi^4 + h first would absorb deviations below 1 ulp of 1 at
  // large radii.
  virtual void deviation_jet(const Point3& p, SymTensor2& h,
                             std::array<SymTensor2, 3>& dh) const = 0;

  // Deviation jet entering the deviation-form surface CoM. Exact for all
  // families except graph slices, where the leading-order form -dT (x) dT
  // is used (see adm_com_deviation_form).
  virtual void com_deviation_jet(const Point3& p, SymTensor2& h,
                                 std::array<SymTensor2, 3>& dh) const {
    deviation_jet(p, h, dh);
  }

  virtual const GraphSlice* as_graph() const { return nullptr; }

  void check_domain(const Point3& p) const;

 protected:
  MetricFamily(double m, double r_min);
  double m_;
  double r_min_;
};

using FamilyPtr = std::shared_ptr<const MetricFamily>;

FamilyPtr make_schwarzschild(double m);
FamilyPtr make_translated_schwarzschild(double m, const Vec3& z);

// York weight choices.
struct YorkWeight {
  enum class Kind { SinLog, Power, Const } kind = Kind::Const;
  double eps = 0.75;  // Power only; must lie in (1/2, 1)
  double f(double r, double m) const;
  double df(double r, double m) const;
};

FamilyPtr make_york_perturbed(double m, const Vec3& P, const YorkWeight& w,
                              std::optional<double> r_min = std::nullopt);

// Graph functions T for graph slices.
struct GraphFunction {
  enum class Kind { Zero, Divergent, Prescribed, Custom } kind = Kind::Zero;
  Vec3 u;        // Divergent: T = sin(ln r) + u.x/r
  Vec3 z;        // Prescribed: T = lam*w + (lam*w)^2, w = z.x/r
  double lam = 0.0;
  std::function<ScalarJet2(const Point3&)> custom;
};

// Prescribed-center coefficient: lam(m, 0) = 0 and otherwise the root of
// -(4 lam^3 / 15 m) |z|^2 = 1, so the slice's measured center equals z.
double prescribed_graph_lambda(double m, const Vec3& z);

inline GraphFunction divergent_graph_function(const Vec3& u) {
  GraphFunction T;
  T.kind = GraphFunction::Kind::Divergent;
  T.u = u;
  return T;
}
inline GraphFunction prescribed_graph_function(const Vec3& z) {
  GraphFunction T;
  T.kind = GraphFunction::Kind::Prescribed;
  T.z = z;
  return T;
}

FamilyPtr make_graph_slice(double m, GraphFunction T, std::optional<double> r_min = std::nullopt);

class GraphSlice : public MetricFamily {
 public:
  GraphSlice(double m, GraphFunction T, double r_min);

  std::string name() const override { return "graph_slice"; }
  SymTensor2 value(const Point3& p) const override;
  std::array<SymTensor2, 3> first_derivs(const Point3& p) const override;
  SymTensor2 deviation(const Point3& p) const override;
  void deviation_jet(const Point3& p, SymTensor2& h,
                     std::array<SymTensor2, 3>& dh) const override;
  void com_deviation_jet(const Point3& p, SymTensor2& h,
                         std::array<SymTensor2, 3>& dh) const override;
  const GraphSlice* as_graph() const override { return this; }

  ScalarJet2 graph_jet(const Point3& p) const;

 private:
  GraphFunction T_;
};

// Metric value + derivatives at a point. order = 1 or 2; order 2 adds the
// FD second derivatives (step h = max(r * 1e-4, 1e-6)).
MetricJet eval_jet(const MetricFamily& family, const Point3& p, int order = 1);

SymTensor2 deviation(const MetricFamily& family, const Point3& p);

// Second fundamental form data of a graph slice at p. Throws domain_error at
// non-spacelike points (1 - N^2 |grad T|^2 <= 0).
ExtrinsicData extrinsic_data(const GraphSlice& family, const Point3& p);

// Christoffel symbols Gamma[k][i][j] = Gamma^k_ij of the jet's metric.
using Christoffels = std::array<std::array<std::array<double, 3>, 3>, 3>;
Christoffels christoffel_symbols(const MetricJet& jet);

// Scalar curvature from an order-2 jet.
double scalar_curvature(const MetricFamily& family, const Point3& p);

// Covariant Hessian of T with respect to the Schwarzschild background g_m.
SymTensor2 background_hessian(const ScalarJet2& tj, const Point3& p, double m);

}  // namespace comlab
