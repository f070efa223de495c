#include "comlab/cmc.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>
#include <numbers>

namespace comlab {

double sphere_mean_curvature(const MetricFamily& family, const Vec3& center, double radius,
                             const Vec3& eta) {
  const Point3 p = center + eta * radius;
  const MetricJet jet = eval_jet(family, p, 1);
  const SymTensor2 ginv = jet.g.inverse();

  const Vec3 rel = p - center;
  const double s = norm(rel);
  const Vec3 u = rel / s;

  // d_m g^{kl} = -g^{ka} (d_m g_ab) g^{bl}
  std::array<SymTensor2, 3> dginv;
  for (int mI = 0; mI < 3; ++mI) {
    SymTensor2 d;
    for (int k = 0; k < 3; ++k)
      for (int l = k; l < 3; ++l) {
        double acc = 0.0;
        for (int a = 0; a < 3; ++a)
          for (int b = 0; b < 3; ++b) acc += ginv(k, a) * jet.dg[mI](a, b) * ginv(b, l);
        d(k, l) = -acc;
      }
    dginv[mI] = d;
  }

  // unit conormal n_j = W u_j with W = (g^{kl} u_k u_l)^(-1/2)
  double guu = 0.0;
  for (int k = 0; k < 3; ++k)
    for (int l = 0; l < 3; ++l) guu += ginv(k, l) * u[k] * u[l];
  const double W = 1.0 / std::sqrt(guu);

  double du[3][3];  // d_i u_j = (delta_ij - u_i u_j)/s
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) du[i][j] = ((i == j ? 1.0 : 0.0) - u[i] * u[j]) / s;

  Vec3 dW;
  for (int i = 0; i < 3; ++i) {
    double d_guu = 0.0;
    for (int k = 0; k < 3; ++k)
      for (int l = 0; l < 3; ++l) d_guu += dginv[i](k, l) * u[k] * u[l];
    for (int k = 0; k < 3; ++k) {
      double giu = 0.0;
      for (int l = 0; l < 3; ++l) giu += ginv(k, l) * u[l];
      d_guu += 2.0 * giu * du[i][k];
    }
    dW[i] = -0.5 * W * W * W * d_guu;
  }

  double dn[3][3];  // d_i n_j
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) dn[i][j] = dW[i] * u[j] + W * du[i][j];

  const Christoffels gam = christoffel_symbols(jet);
  Vec3 nlow = u * W;
  Vec3 nup = ginv.contract(nlow);

  double H = 0.0;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      double cov = dn[i][j];
      for (int k = 0; k < 3; ++k) cov -= gam[k][i][j] * nlow[k];
      H += (ginv(i, j) - nup[i] * nup[j]) * cov;
    }
  return H;
}

namespace {

struct Objective {
  const MetricFamily& family;
  const SphereGrid& grid;
  mutable std::vector<double> h_buf;

  // (variance, mean) of H over the sphere; +inf on domain violations.
  // Two passes with the mean subtracted before squaring: the one-pass
  // sum-of-squares form bottoms out at ulp(H^2) and goes numerically flat
  // long before the center signal (~ sigma^-6) does.
  std::pair<double, double> operator()(const Vec3& c, double a) const {
    if (!(a > 0.0)) return {std::numeric_limits<double>::infinity(), 0.0};
    const auto& nodes = grid.nodes();
    h_buf.resize(nodes.size());
    KahanSum sum;
    try {
      for (size_t i = 0; i < nodes.size(); ++i) {
        h_buf[i] = sphere_mean_curvature(family, c, a, nodes[i].eta);
        sum.add(nodes[i].w * h_buf[i]);
      }
    } catch (const domain_error&) {
      return {std::numeric_limits<double>::infinity(), 0.0};
    }
    const double four_pi = 4.0 * std::numbers::pi;
    const double mean = sum.value() / four_pi;
    KahanSum var_sum;
    for (size_t i = 0; i < nodes.size(); ++i) {
      const double d = h_buf[i] - mean;
      var_sum.add(nodes[i].w * d * d);
    }
    return {var_sum.value() / four_pi, mean};
  }
};

}  // namespace

namespace {

using Param = std::array<double, 4>;

// Nelder-Mead over the first `dim` coordinates of a 4-vector (the rest stay
// fixed). Monotone in the best value; rebuilds the simplex around the best
// vertex when no vertex improves for a while (flat or noise-floor regions),
// so the step tolerance stays reachable inside the iteration budget.
struct SimplexResult {
  Param best;
  double f_best = 0.0;
  int iterations = 0;
  bool step_converged = false;
};

template <typename Eval>
SimplexResult run_simplex(Eval&& eval, const Param& start, int dim, const Param& legs,
                          double tol, int budget, std::vector<double>* trace) {
  const int nv = dim + 1;
  std::vector<Param> vx(nv, start);
  std::vector<double> fx(nv);
  for (int k = 1; k < nv; ++k) vx[k][k - 1] += legs[k - 1];
  for (int k = 0; k < nv; ++k) fx[k] = eval(vx[k]);

  auto order = [&]() {
    std::vector<int> idx(nv);
    for (int i = 0; i < nv; ++i) idx[i] = i;
    std::sort(idx.begin(), idx.end(), [&](int a, int b) { return fx[a] < fx[b]; });
    std::vector<Param> v2(nv);
    std::vector<double> f2(nv);
    for (int k = 0; k < nv; ++k) {
      v2[k] = vx[idx[k]];
      f2[k] = fx[idx[k]];
    }
    vx.swap(v2);
    fx.swap(f2);
  };

  SimplexResult out;
  int stall = 0;
  double last_best = std::numeric_limits<double>::infinity();
  for (; out.iterations < budget; ++out.iterations) {
    order();
    if (trace != nullptr) trace->push_back(fx[0]);
    double diameter = 0.0;
    for (int k = 1; k < nv; ++k)
      for (int c = 0; c < dim; ++c)
        diameter = std::max(diameter, std::fabs(vx[k][c] - vx[0][c]));
    if (diameter < tol) {
      out.step_converged = true;
      break;
    }

    if (fx[0] < last_best * (1.0 - 1e-12)) {
      last_best = fx[0];
      stall = 0;
    } else if (++stall >= 10) {
      stall = 0;
      // reshape at (half) the current scale: a degenerate simplex loses the
      // descent direction long before it is small, so shrinking further
      // would freeze it; a fresh axis-aligned simplex restores the span
      const double fresh = std::max(diameter / 2.0, 2.0 * tol);
      for (int k = 1; k < nv; ++k) {
        vx[k] = vx[0];
        vx[k][k - 1] += fresh;
        fx[k] = eval(vx[k]);
      }
      continue;
    }

    Param centroid{start};
    for (int c = 0; c < dim; ++c) {
      centroid[c] = 0.0;
      for (int k = 0; k < nv - 1; ++k) centroid[c] += vx[k][c] / dim;
    }
    auto blend = [&](double t) {
      Param p = vx[nv - 1];
      for (int c = 0; c < dim; ++c) p[c] = centroid[c] + t * (vx[nv - 1][c] - centroid[c]);
      return p;
    };

    const Param refl = blend(-1.0);
    const double f_refl = eval(refl);
    if (f_refl < fx[0]) {
      const Param expd = blend(-2.0);
      const double f_expd = eval(expd);
      if (f_expd < f_refl) {
        vx[nv - 1] = expd;
        fx[nv - 1] = f_expd;
      } else {
        vx[nv - 1] = refl;
        fx[nv - 1] = f_refl;
      }
    } else if (f_refl < fx[nv - 2]) {
      vx[nv - 1] = refl;
      fx[nv - 1] = f_refl;
    } else {
      const Param contr = blend(f_refl < fx[nv - 1] ? -0.5 : 0.5);
      const double f_contr = eval(contr);
      if (f_contr < std::min(f_refl, fx[nv - 1])) {
        vx[nv - 1] = contr;
        fx[nv - 1] = f_contr;
      } else {
        for (int k = 1; k < nv; ++k) {
          for (int c = 0; c < dim; ++c) vx[k][c] = vx[0][c] + 0.5 * (vx[k][c] - vx[0][c]);
          fx[k] = eval(vx[k]);
        }
      }
    }
  }
  order();
  out.best = vx[0];
  out.f_best = fx[0];
  return out;
}

}  // namespace

CmcFit fit_cmc_sphere(const MetricFamily& family, double sigma, const CmcFit& init,
                      const CmcFitOptions& opts) {
  const SphereGrid grid(opts.n_theta, opts.n_phi);
  const Objective obj{family, grid, {}};

  // The pure H-variance is degenerate along the radius: every concentric
  // sphere in the Schwarzschild background is exactly CMC, and the variance
  // of an off-center sphere falls like a^-6, so a variance-only search can
  // descend forever by inflating the sphere. The leaf of scale sigma is the
  // one with mean curvature 2/sigma - 4m/sigma^2 (outward convention), so
  // the search objective tethers the area-mean to that target; the reported
  // residual stays the plain variance.
  const double m = family.mass();
  const double h_target = 2.0 / sigma - 4.0 * m / (sigma * sigma);
  // Precondition the radius: the tether's curvature in a is stronger than
  // the variance's curvature in the center by ~ (sigma/4m)^2, so the search
  // runs in a = q3 * s_a units to make the bowl roughly isotropic.
  const double s_a = std::max(4.0 * m / sigma, 1e-12 * sigma);
  auto eval = [&](const Param& p) {
    const double a = p[3] * s_a;
    if (a < sigma / 3.0 || a > 3.0 * sigma)
      return std::numeric_limits<double>::infinity();
    const auto [var, mean] = obj(Vec3{p[0], p[1], p[2]}, a);
    if (!std::isfinite(var)) return var;
    const double tether = mean - h_target;
    return var + tether * tether;
  };

  const double a0 = init.radius > 0.0 ? init.radius : sigma;
  const double leg = opts.simplex_scale * sigma;
  const double tol = opts.step_tol_factor * sigma;

  const Param start{init.center.x, init.center.y, init.center.z, a0 / s_a};
  const Param legs{leg, leg, leg, leg};
  const SimplexResult best =
      run_simplex(eval, start, 4, legs, tol, opts.max_iterations, opts.trace);

  CmcFit fit;
  fit.center = Vec3{best.best[0], best.best[1], best.best[2]};
  fit.radius = best.best[3] * s_a;
  const auto [var, mean] = obj(fit.center, fit.radius);
  fit.residual = var;
  fit.mean_h = mean;
  fit.iterations = best.iterations;
  const double h_scale = std::max(std::fabs(mean), 1e-300);
  fit.converged = best.step_converged && std::isfinite(var) &&
                  std::sqrt(var) <= opts.residual_tol * h_scale;
  return fit;
}

std::vector<std::pair<double, CmcFit>> cmc_center_sweep(const MetricFamily& family,
                                                        const std::vector<double>& sigmas,
                                                        const CmcFitOptions& opts) {
  std::vector<std::pair<double, CmcFit>> out;
  out.reserve(sigmas.size());
  Vec3 warm{};
  for (double sigma : sigmas) {
    CmcFit init;
    init.center = warm;
    init.radius = sigma;
    CmcFit fit;
    try {
      fit = fit_cmc_sphere(family, sigma, init, opts);
    } catch (const std::exception&) {
      fit = CmcFit{};
      fit.center = warm;
      fit.radius = sigma;
      fit.converged = false;
    }
    if (fit.converged) warm = fit.center;
    out.emplace_back(sigma, fit);
  }
  return out;
}

}  // namespace comlab
