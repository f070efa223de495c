#include "comlab/quadrature.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

namespace comlab {

void gauss_legendre(int n, std::vector<double>& x, std::vector<double>& w) {
  if (n < 1) throw config_error("gauss_legendre: need n >= 1");
  x.assign(n, 0.0);
  w.assign(n, 0.0);
  const int half = (n + 1) / 2;
  for (int i = 0; i < half; ++i) {
    // Tricomi-style initial guess, then Newton on P_n.
    double xi = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double pp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = xi;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * xi * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      pp = n * (xi * p1 - p0) / (xi * xi - 1.0);
      const double dx = p1 / pp;
      xi -= dx;
      if (std::fabs(dx) < 1e-15) {
        // one polishing step
        double q0 = 1.0, q1 = xi;
        for (int k = 2; k <= n; ++k) {
          const double q2 = ((2.0 * k - 1.0) * xi * q1 - (k - 1.0) * q0) / k;
          q0 = q1;
          q1 = q2;
        }
        pp = n * (xi * q1 - q0) / (xi * xi - 1.0);
        xi -= q1 / pp;
        break;
      }
    }
    const double wi = 2.0 / ((1.0 - xi * xi) * pp * pp);
    // descending guess order means xi > 0 here; store ascending, mirrored.
    x[i] = -xi;
    w[i] = wi;
    x[n - 1 - i] = xi;
    w[n - 1 - i] = wi;
  }
  if (n % 2 == 1) x[n / 2] = 0.0;
}

SphereGrid::SphereGrid(int n_theta, int n_phi) : n_theta_(n_theta), n_phi_(n_phi) {
  if (n_theta < 1) throw config_error("SphereGrid: n_theta must be >= 1");
  if (n_phi < 2 || n_phi % 2 != 0) throw config_error("SphereGrid: n_phi must be even and >= 2");

  std::vector<double> mu, wmu;
  gauss_legendre(n_theta, mu, wmu);
  const double wphi = 2.0 * std::numbers::pi / n_phi;

  std::vector<double> cphi(n_phi), sphi(n_phi);
  for (int k = 0; k < n_phi; ++k) {
    cphi[k] = std::cos(2.0 * std::numbers::pi * k / n_phi);
    sphi[k] = std::sin(2.0 * std::numbers::pi * k / n_phi);
  }

  nodes_.reserve(static_cast<size_t>(n_theta) * n_phi);
  std::vector<char> visited(static_cast<size_t>(n_theta) * n_phi, 0);
  auto flat = [n_phi](int it, int ip) { return static_cast<size_t>(it) * n_phi + ip; };

  for (int it = 0; it < n_theta; ++it) {
    for (int ip = 0; ip < n_phi; ++ip) {
      if (visited[flat(it, ip)]) continue;
      const int jt = n_theta - 1 - it;
      const int jp = (ip + n_phi / 2) % n_phi;
      visited[flat(it, ip)] = 1;
      visited[flat(jt, jp)] = 1;

      const double st = std::sqrt(std::max(0.0, 1.0 - mu[it] * mu[it]));
      const Vec3 eta{st * cphi[ip], st * sphi[ip], mu[it]};
      nodes_.push_back({eta, wmu[it] * wphi});
      // antipode stored as the exact negation so odd fields cancel bitwise
      nodes_.push_back({-eta, wmu[jt] * wphi});
    }
  }
}

namespace detail {
[[noreturn]] void rethrow_with_node(const domain_error& e, const Vec3& p) {
  std::ostringstream os;
  os << e.what() << " [at quadrature node (" << p.x << ", " << p.y << ", " << p.z << ")]";
  throw domain_error(os.str());
}
}  // namespace detail

AnnulusRule::AnnulusRule(SphereGrid grid, double r1, double r2, int radial_nodes_per_panel,
                         int panels)
    : grid_(std::move(grid)), r1_(r1), r2_(r2) {
  if (!(r1 > 0.0) || !(r2 > r1)) throw config_error("AnnulusRule: need 0 < R1 < R2");
  if (panels <= 0) panels = std::max(1, static_cast<int>(std::ceil(std::log(r2 / r1))));
  std::vector<double> x, w;
  gauss_legendre(radial_nodes_per_panel, x, w);
  const double step = std::pow(r2 / r1, 1.0 / panels);
  double a = r1;
  for (int p = 0; p < panels; ++p) {
    const double b = (p == panels - 1) ? r2 : a * step;
    const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
    for (size_t k = 0; k < x.size(); ++k) radial_.emplace_back(mid + half * x[k], half * w[k]);
    a = b;
  }
}

double integrate_segment(const std::function<double(double)>& f, double a, double b, int n) {
  std::vector<double> x, w;
  gauss_legendre(n, x, w);
  const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
  KahanSum s;
  for (int k = 0; k < n; ++k) s.add(w[k] * f(mid + half * x[k]));
  return s.value() * half;
}

double integrate_radial(const std::function<double(double)>& f, double a, double b,
                        int nodes_per_panel, int panels) {
  if (!(b > a)) return 0.0;
  if (panels <= 0)
    panels = (a > 0.0) ? std::max(1, static_cast<int>(std::ceil(std::log(b / a)))) : 4;
  KahanSum s;
  const double step = (a > 0.0) ? std::pow(b / a, 1.0 / panels) : 0.0;
  double lo = a;
  for (int p = 0; p < panels; ++p) {
    const double hi = (p == panels - 1) ? b : (a > 0.0 ? lo * step : a + (b - a) * (p + 1.0) / panels);
    s.add(integrate_segment(f, lo, hi, nodes_per_panel));
    lo = hi;
  }
  return s.value();
}

}  // namespace comlab
