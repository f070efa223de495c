#include "comlab/limits.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace comlab {

RadiusLadder RadiusLadder::default_for(double m) {
  // 35 * pi/8 = 13.7 in ln r: a bit over two full periods of cos(ln r),
  // topping out at ~9.3e7 m, inside the validity cap.
  return {100.0 * m, std::exp(std::numbers::pi / 8.0), 36};
}

std::vector<double> RadiusLadder::radii() const {
  std::vector<double> r(count);
  double v = r0;
  for (int k = 0; k < count; ++k) {
    r[k] = v;
    v *= ratio;
  }
  return r;
}

void RadiusLadder::validate(double mass_scale) const {
  if (!(r0 > 0.0)) throw config_error("radius ladder: r0 must be positive");
  if (!(ratio > 1.0)) throw config_error("radius ladder: ratio must exceed 1");
  if (count < 2) throw config_error("radius ladder: need at least 2 rungs");
  const double top = r0 * std::pow(ratio, count - 1);
  if (top > 1e8 * mass_scale)
    throw config_error("radius ladder: top radius exceeds 1e8 * m");
}

std::string to_string(LimitClass c) {
  switch (c) {
    case LimitClass::Converged: return "converged";
    case LimitClass::LogDivergent: return "log_divergent";
    case LimitClass::PowerDivergent: return "power_divergent";
    case LimitClass::Oscillatory: return "oscillatory";
    case LimitClass::Undetermined: return "undetermined";
  }
  return "undetermined";
}

namespace {

// Ordinary least squares for a small fixed basis; returns false when the
// normal equations are singular or near-singular (collinear columns).
bool solve_ls(const std::vector<std::vector<double>>& cols, const std::vector<double>& y,
              std::vector<double>& coef, double& sse) {
  const size_t k = cols.size(), n = y.size();
  // normalize columns so the pivot test sees the conditioning, not the units
  std::vector<double> scale(k, 0.0);
  for (size_t a = 0; a < k; ++a) {
    double s = 0.0;
    for (size_t i = 0; i < n; ++i) s += cols[a][i] * cols[a][i];
    scale[a] = std::sqrt(s);
    if (!(scale[a] > 0.0)) return false;
  }
  double N[3][3] = {{0}}, b[3] = {0};
  for (size_t a = 0; a < k; ++a) {
    for (size_t c = a; c < k; ++c) {
      double s = 0.0;
      for (size_t i = 0; i < n; ++i) s += cols[a][i] * cols[c][i];
      N[a][c] = N[c][a] = s / (scale[a] * scale[c]);
    }
    double s = 0.0;
    for (size_t i = 0; i < n; ++i) s += cols[a][i] * y[i];
    b[a] = s / scale[a];
  }
  // Gaussian elimination with partial pivoting on the k x k system
  double A[3][4];
  for (size_t i = 0; i < k; ++i) {
    for (size_t j = 0; j < k; ++j) A[i][j] = N[i][j];
    A[i][k] = b[i];
  }
  for (size_t col = 0; col < k; ++col) {
    size_t piv = col;
    for (size_t i = col + 1; i < k; ++i)
      if (std::fabs(A[i][col]) > std::fabs(A[piv][col])) piv = i;
    if (std::fabs(A[piv][col]) < 1e-10) return false;  // collinear basis
    if (piv != col)
      for (size_t j = 0; j <= k; ++j) std::swap(A[piv][j], A[col][j]);
    for (size_t i = 0; i < k; ++i) {
      if (i == col) continue;
      const double f = A[i][col] / A[col][col];
      for (size_t j = 0; j <= k; ++j) A[i][j] -= f * A[col][j];
    }
  }
  coef.assign(k, 0.0);
  for (size_t i = 0; i < k; ++i) coef[i] = A[i][k] / (A[i][i] * scale[i]);
  sse = 0.0;
  for (size_t i = 0; i < n; ++i) {
    double fit = 0.0;
    for (size_t a = 0; a < k; ++a) fit += coef[a] * cols[a][i];
    const double d = y[i] - fit;
    sse += d * d;
  }
  return true;
}

struct ModelFit {
  bool valid = false;
  double rms = 0.0;
  // per-component coefficients, coef[comp][basis]
  std::array<std::vector<double>, 3> coef;
};

ModelFit fit_basis(const Sequence& seq, const std::vector<std::vector<double>>& cols) {
  ModelFit fit;
  double sse_total = 0.0;
  const size_t n = seq.size();
  for (int comp = 0; comp < 3; ++comp) {
    std::vector<double> y(n);
    for (size_t i = 0; i < n; ++i) y[i] = seq[i].second[comp];
    double sse = 0.0;
    if (!solve_ls(cols, y, fit.coef[comp], sse)) return fit;  // invalid
    sse_total += sse;
  }
  fit.valid = true;
  fit.rms = std::sqrt(sse_total / (3.0 * n));
  return fit;
}

}  // namespace

LimitVerdict classify(const Sequence& seq) {
  if (seq.size() < 8) throw config_error("classify: need at least 8 ladder points");
  const size_t n = seq.size();

  std::vector<double> ones(n, 1.0), inv_r(n), ln_r(n), cos_lr(n), sin_lr(n);
  for (size_t i = 0; i < n; ++i) {
    const double r = seq[i].first;
    if (!(r > 0.0)) throw config_error("classify: radii must be positive");
    inv_r[i] = 1.0 / r;
    ln_r[i] = std::log(r);
    cos_lr[i] = std::cos(ln_r[i]);
    sin_lr[i] = std::sin(ln_r[i]);
  }

  double scale = 0.0;
  for (const auto& [r, v] : seq)
    for (int c = 0; c < 3; ++c) scale = std::max(scale, std::fabs(v[c]));

  const ModelFit conv = fit_basis(seq, {ones, inv_r});
  const ModelFit logf = fit_basis(seq, {ones, ln_r});
  const ModelFit oscf = fit_basis(seq, {ones, cos_lr, sin_lr});

  // power model: profile the shared exponent by golden-section search
  const double p_lo = 0.05, p_hi = 1.0;
  auto power_sse = [&](double p) {
    std::vector<double> rp(n);
    for (size_t i = 0; i < n; ++i) rp[i] = std::pow(seq[i].first, p);
    const ModelFit f = fit_basis(seq, {ones, rp});
    return f.valid ? f.rms : 1e300;
  };
  const double gr = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = p_lo, b = p_hi;
  double x1 = b - gr * (b - a), x2 = a + gr * (b - a);
  double f1 = power_sse(x1), f2 = power_sse(x2);
  for (int it = 0; it < 60; ++it) {
    if (f1 < f2) {
      b = x2; x2 = x1; f2 = f1;
      x1 = b - gr * (b - a); f1 = power_sse(x1);
    } else {
      a = x1; x1 = x2; f1 = f2;
      x2 = a + gr * (b - a); f2 = power_sse(x2);
    }
  }
  const double p_best = 0.5 * (a + b);
  std::vector<double> rp(n);
  for (size_t i = 0; i < n; ++i) rp[i] = std::pow(seq[i].first, p_best);
  ModelFit powf = fit_basis(seq, {ones, rp});
  // an exponent pinned at the search boundary mimics another model family
  const bool power_boundary = (p_best - p_lo < 1e-3) || (p_hi - p_best < 1e-3);

  LimitVerdict v;
  v.residuals["converged"] = conv.valid ? conv.rms : -1.0;
  v.residuals["log_divergent"] = logf.valid ? logf.rms : -1.0;
  v.residuals["power_divergent"] = powf.valid ? powf.rms : -1.0;
  v.residuals["oscillatory"] = oscf.valid ? oscf.rms : -1.0;

  struct Cand {
    LimitClass cls;
    const ModelFit* fit;
    bool eligible;
  };
  const Cand cands[] = {
      {LimitClass::Converged, &conv, conv.valid},
      {LimitClass::LogDivergent, &logf, logf.valid},
      {LimitClass::PowerDivergent, &powf, powf.valid && !power_boundary},
      {LimitClass::Oscillatory, &oscf, oscf.valid},
  };

  const double floor = 1e-12 * std::max(scale, 1e-30);
  const Cand* best = nullptr;
  const Cand* second = nullptr;
  for (const Cand& c : cands) {
    if (!c.eligible) continue;
    if (best == nullptr || c.fit->rms < best->fit->rms) {
      second = best;
      best = &c;
    } else if (second == nullptr || c.fit->rms < second->fit->rms) {
      second = &c;
    }
  }
  if (best == nullptr) {
    v.note = "all model fits degenerate";
    return v;
  }

  bool accept = false;
  if (conv.valid && conv.rms <= floor) {
    // everything at the noise floor: prefer the simplest (convergent) model
    best = &cands[0];
    accept = true;
    v.note = "residual at noise floor";
  } else if (second == nullptr || best->fit->rms * 5.0 <= second->fit->rms) {
    accept = true;
  } else {
    v.note = "no 5x residual separation between best and runner-up";
  }
  if (!accept) return v;

  v.cls = best->cls;
  const ModelFit& f = *best->fit;
  switch (v.cls) {
    case LimitClass::Converged:
      for (int c = 0; c < 3; ++c) {
        v.value[c] = f.coef[c][0];
        v.rate[c] = f.coef[c][1];
      }
      break;
    case LimitClass::LogDivergent:
      for (int c = 0; c < 3; ++c) {
        v.osc_center[c] = f.coef[c][0];
        v.log_slope[c] = f.coef[c][1];
      }
      break;
    case LimitClass::PowerDivergent:
      v.exponent = p_best;
      for (int c = 0; c < 3; ++c) v.power_coeff[c] = f.coef[c][1];
      break;
    case LimitClass::Oscillatory: {
      double amp_sq = 0.0;
      int dominant = 0;
      double dom_amp = -1.0;
      for (int c = 0; c < 3; ++c) {
        v.osc_center[c] = f.coef[c][0];
        v.osc_cos[c] = f.coef[c][1];
        v.osc_sin[c] = f.coef[c][2];
        const double a2 = v.osc_cos[c] * v.osc_cos[c] + v.osc_sin[c] * v.osc_sin[c];
        amp_sq += a2;
        if (a2 > dom_amp) {
          dom_amp = a2;
          dominant = c;
        }
      }
      v.amplitude = std::sqrt(amp_sq);
      v.phase = std::atan2(v.osc_sin[dominant], v.osc_cos[dominant]);
      break;
    }
    case LimitClass::Undetermined:
      break;
  }
  return v;
}

Vec3 richardson_extrapolate(const Sequence& seq, Vec3* error_estimate) {
  const size_t n = seq.size();
  if (n < 3) throw config_error("richardson_extrapolate: need at least 3 points");

  // geometric ladder check
  const double q = seq[1].first / seq[0].first;
  bool geometric = q > 1.0;
  for (size_t i = 1; i + 1 < n && geometric; ++i) {
    const double qi = seq[i + 1].first / seq[i].first;
    if (std::fabs(qi / q - 1.0) > 1e-9) geometric = false;
  }

  if (geometric) {
    // eliminate 1/r, 1/r^2, ... successively
    std::array<std::vector<double>, 3> t;
    for (int c = 0; c < 3; ++c) {
      t[c].resize(n);
      for (size_t i = 0; i < n; ++i) t[c][i] = seq[i].second[c];
    }
    Vec3 prev{}, cur{};
    for (int c = 0; c < 3; ++c) cur[c] = t[c].back();
    const int stages = static_cast<int>(std::min<size_t>(6, n - 1));
    for (int j = 1; j <= stages; ++j) {
      const double qj = std::pow(q, j);
      for (int c = 0; c < 3; ++c) {
        for (size_t i = 0; i + j < n; ++i)
          t[c][i] = t[c][i + 1] + (t[c][i + 1] - t[c][i]) / (qj - 1.0);
      }
      prev = cur;
      for (int c = 0; c < 3; ++c) cur[c] = t[c][n - 1 - j];
    }
    if (error_estimate != nullptr)
      *error_estimate = {std::fabs(cur.x - prev.x), std::fabs(cur.y - prev.y),
                         std::fabs(cur.z - prev.z)};
    return cur;
  }

  // fallback: cubic least squares in 1/r
  std::vector<double> ones(n, 1.0), c1(n), c2(n), c3(n);
  for (size_t i = 0; i < n; ++i) {
    c1[i] = 1.0 / seq[i].first;
    c2[i] = c1[i] * c1[i];
    c3[i] = c2[i] * c1[i];
  }
  Vec3 out{};
  for (int c = 0; c < 3; ++c) {
    std::vector<double> y(n);
    for (size_t i = 0; i < n; ++i) y[i] = seq[i].second[c];
    // two-stage: remove 1/r then refit constant (simple and adequate here)
    std::vector<double> coef;
    double sse;
    if (!solve_ls({ones, c1, c2}, y, coef, sse))
      throw domain_error("extrapolate: singular fit");
    out[c] = coef[0];
    if (error_estimate != nullptr) (*error_estimate)[c] = std::sqrt(sse / n);
  }
  return out;
}

Vec3 extrapolate(const Sequence& seq, Vec3* error_estimate) {
  const LimitVerdict verdict = classify(seq);
  if (verdict.cls != LimitClass::Converged)
    throw internal_error("extrapolate called on a non-convergent sequence (verdict: " +
                         to_string(verdict.cls) + ")");
  return richardson_extrapolate(seq, error_estimate);
}

double loglog_slope(const std::vector<std::pair<double, double>>& xy, double floor) {
  std::vector<double> lx, ly;
  for (const auto& [x, y] : xy) {
    if (x > 0.0 && y > floor) {
      lx.push_back(std::log(x));
      ly.push_back(std::log(y));
    }
  }
  const size_t n = lx.size();
  if (n < 2) throw domain_error("loglog_slope: not enough positive samples");
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (size_t i = 0; i < n; ++i) {
    sx += lx[i];
    sy += ly[i];
    sxx += lx[i] * lx[i];
    sxy += lx[i] * ly[i];
  }
  const double det = n * sxx - sx * sx;
  if (std::fabs(det) < 1e-300) throw domain_error("loglog_slope: degenerate abscissae");
  return (n * sxy - sx * sy) / det;
}

}  // namespace comlab
