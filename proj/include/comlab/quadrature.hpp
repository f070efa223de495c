#pragma once

// Deterministic product quadrature on coordinate spheres and radial annuli.
//
// The sphere rule is Gauss-Legendre in cos(theta) x uniform in phi, exact for
// spherical harmonics of degree <= min(2*n_theta - 1, n_phi - 1). Nodes are
// stored with antipodal partners adjacent and the partner direction is the
// bitwise negation of its mate, so odd integrands cancel pairwise exactly.
// All sums are compensated (Kahan) in the fixed storage order; results are
// bitwise reproducible for a fixed grid.

#include <functional>
#include <utility>
#include <vector>

#include "comlab/errors.hpp"
#include "comlab/geometry.hpp"

namespace comlab {

// Kahan-compensated accumulator.
class KahanSum {
 public:
  void add(double v) {
    const double y = v - c_;
    const double t = s_ + y;
    c_ = (t - s_) - y;
    s_ = t;
  }
  double value() const { return s_; }

 private:
  double s_ = 0.0;
  double c_ = 0.0;
};

// Gauss-Legendre nodes and weights on [-1, 1], symmetrized so that
// x[n-1-i] == -x[i] and w[n-1-i] == w[i] bitwise.
void gauss_legendre(int n, std::vector<double>& x, std::vector<double>& w);

struct SphereNode {
  Vec3 eta;   // unit direction
  double w;   // solid-angle weight; sum over nodes = 4*pi
};

class SphereGrid {
 public:
  // n_phi must be even (antipodal pairing); n_theta >= 1.
  SphereGrid(int n_theta, int n_phi);

  int n_theta() const { return n_theta_; }
  int n_phi() const { return n_phi_; }
  int degree_of_exactness() const { return std::min(2 * n_theta_ - 1, n_phi_ - 1); }
  const std::vector<SphereNode>& nodes() const { return nodes_; }

 private:
  int n_theta_;
  int n_phi_;
  std::vector<SphereNode> nodes_;
};

namespace detail {
[[noreturn]] void rethrow_with_node(const domain_error& e, const Vec3& p);
}

// integral over the coordinate sphere of radius r (Euclidean area measure):
//   sum_k w_k * r^2 * field(r * eta_k)
template <typename Field>
double integrate_sphere(const SphereGrid& grid, double r, Field&& field) {
  KahanSum sum;
  for (const SphereNode& n : grid.nodes()) {
    const Vec3 p = n.eta * r;
    try {
      sum.add(n.w * static_cast<double>(field(p)));
    } catch (const domain_error& e) {
      detail::rethrow_with_node(e, p);
    }
  }
  return sum.value() * r * r;
}

template <typename Field>
Vec3 integrate_sphere_vec(const SphereGrid& grid, double r, Field&& field) {
  KahanSum sx, sy, sz;
  for (const SphereNode& n : grid.nodes()) {
    const Vec3 p = n.eta * r;
    Vec3 v;
    try {
      v = field(p);
    } catch (const domain_error& e) {
      detail::rethrow_with_node(e, p);
    }
    sx.add(n.w * v.x);
    sy.add(n.w * v.y);
    sz.add(n.w * v.z);
  }
  return Vec3{sx.value(), sy.value(), sz.value()} * (r * r);
}

// Product rule on the annulus R1 <= |x| <= R2: the sphere grid times
// Gauss-Legendre panels in the radius (panels split geometrically so wide
// annuli keep per-panel ratios modest).
class AnnulusRule {
 public:
  AnnulusRule(SphereGrid grid, double r1, double r2, int radial_nodes_per_panel = 16,
              int panels = 0 /* 0 = choose from the ratio R2/R1 */);

  const SphereGrid& grid() const { return grid_; }
  const std::vector<std::pair<double, double>>& radial_nodes() const { return radial_; }
  double r1() const { return r1_; }
  double r2() const { return r2_; }

 private:
  SphereGrid grid_;
  double r1_, r2_;
  std::vector<std::pair<double, double>> radial_;  // (s, weight) with ds weight
};

// integral over the annulus with Euclidean volume measure s^2 ds dOmega.
template <typename Field>
double integrate_annulus(const AnnulusRule& rule, Field&& field) {
  KahanSum sum;
  for (const auto& [s, ws] : rule.radial_nodes()) {
    const double shell = integrate_sphere(rule.grid(), s, field);  // has s^2 factor
    sum.add(ws * shell);
  }
  return sum.value();
}

template <typename Field>
Vec3 integrate_annulus_vec(const AnnulusRule& rule, Field&& field) {
  KahanSum sx, sy, sz;
  for (const auto& [s, ws] : rule.radial_nodes()) {
    const Vec3 shell = integrate_sphere_vec(rule.grid(), s, field);
    sx.add(ws * shell.x);
    sy.add(ws * shell.y);
    sz.add(ws * shell.z);
  }
  return {sx.value(), sy.value(), sz.value()};
}

// 1D Gauss-Legendre integral of f over [a, b], single panel.
double integrate_segment(const std::function<double(double)>& f, double a, double b, int n = 32);

// 1D integral over [a, b] split into geometric panels (for wide ranges).
double integrate_radial(const std::function<double(double)>& f, double a, double b,
                        int nodes_per_panel = 32, int panels = 0);

}  // namespace comlab
