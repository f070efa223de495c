#include "comlab/metric.hpp"

#include <cmath>
#include <sstream>

namespace comlab {

namespace {

Vec3 unit(const Point3& p, double& r) {
  r = norm(p);
  return p / r;
}

SymTensor2 schwarzschild_value(const Point3& p, double m) {
  const double r = norm(p);
  const double phi = conformal_factor(r, m);
  const double phi2 = phi * phi;
  return SymTensor2::scaled_identity(phi2 * phi2);
}

std::array<SymTensor2, 3> schwarzschild_derivs(const Point3& p, double m) {
  double r;
  const Vec3 eta = unit(p, r);
  const double phi = conformal_factor(r, m);
  const double dphi = conformal_factor_dr(r, m);
  const double c = 4.0 * phi * phi * phi * dphi;
  std::array<SymTensor2, 3> dg;
  for (int k = 0; k < 3; ++k) dg[k] = SymTensor2::scaled_identity(c * eta[k]);
  return dg;
}

// York momentum tensor of linear momentum P:
//   Y_ij = 3/(2 r^2) [P_i n_j + n_i P_j - (P.n)(delta_ij - n_i n_j)],  n = x/r
// trace-free and divergence-free in the flat metric.
SymTensor2 york_tensor(const Point3& p, const Vec3& P) {
  double r;
  const Vec3 eta = unit(p, r);
  const double pe = dot(P, eta);
  const double c = 1.5 / (r * r);
  SymTensor2 Y = SymTensor2::sym_outer(P, eta) * 2.0;
  Y += (SymTensor2::outer(eta) - SymTensor2::identity()) * pe;
  return Y * c;
}

std::array<SymTensor2, 3> york_tensor_derivs(const Point3& p, const Vec3& P) {
  const double r = norm(p);
  const Vec3 x = p;
  const double c = dot(P, x);
  const double r3 = r * r * r, r5 = r3 * r * r, r7 = r5 * r * r;
  std::array<SymTensor2, 3> dY;
  for (int k = 0; k < 3; ++k) {
    SymTensor2 d;
    for (int i = 0; i < 3; ++i) {
      for (int j = i; j < 3; ++j) {
        const double dij = (i == j) ? 1.0 : 0.0;
        const double dik = (i == k) ? 1.0 : 0.0;
        const double djk = (j == k) ? 1.0 : 0.0;
        double v = (P[i] * djk + P[j] * dik) / r3
                 - 3.0 * (P[i] * x[j] + P[j] * x[i]) * x[k] / r5
                 - P[k] * dij / r3 + 3.0 * c * dij * x[k] / r5
                 + P[k] * x[i] * x[j] / r5
                 + c * (dik * x[j] + x[i] * djk) / r5
                 - 5.0 * c * x[i] * x[j] * x[k] / r7;
        d(i, j) = 1.5 * v;
      }
    }
    dY[k] = d;
  }
  return dY;
}

}  // namespace

MetricFamily::MetricFamily(double m, double r_min) : m_(m), r_min_(r_min) {
  if (!(m > 0.0)) throw config_error("metric family: mass parameter must be positive");
}

void MetricFamily::check_domain(const Point3& p) const {
  const double r = norm(p);
  if (!(r > r_min_)) {
    std::ostringstream os;
    os << name() << ": point at r = " << r << " inside validity radius r_min = " << r_min_;
    throw domain_error(os.str());
  }
}

namespace {

// Positive definiteness spot-checks at construction time; a failure is a bug
// in the family's parameters/formulas, not a user input problem.
void validate_positive_definite(const MetricFamily& f) {
  const double base = f.r_min();
  const Vec3 dirs[] = {{1, 0, 0}, {0, 1, 0}, {0, 0, 1}, {-1, 0, 0},
                       {0.57735026918962576, 0.57735026918962576, 0.57735026918962576}};
  for (double scale : {1.05, 2.0, 10.0, 100.0, 1e4}) {
    for (const Vec3& d : dirs) {
      const Point3 p = d * (base * scale);
      if (!f.value(p).positive_definite()) {
        std::ostringstream os;
        os << f.name() << ": metric not positive definite at validation point r = "
           << base * scale;
        throw internal_error(os.str());
      }
    }
  }
}

class Schwarzschild final : public MetricFamily {
 public:
  explicit Schwarzschild(double m) : MetricFamily(m, 0.5 * m + 1e-3 * m) {}
  std::string name() const override { return "schwarzschild"; }
  SymTensor2 value(const Point3& p) const override { return schwarzschild_value(p, m_); }
  std::array<SymTensor2, 3> first_derivs(const Point3& p) const override {
    return schwarzschild_derivs(p, m_);
  }
  SymTensor2 deviation(const Point3&) const override { return SymTensor2{}; }
  void deviation_jet(const Point3&, SymTensor2& h,
                     std::array<SymTensor2, 3>& dh) const override {
    h = SymTensor2{};
    dh = {SymTensor2{}, SymTensor2{}, SymTensor2{}};
  }
};

class TranslatedSchwarzschild final : public MetricFamily {
 public:
  TranslatedSchwarzschild(double m, const Vec3& z)
      : MetricFamily(m, std::max(0.5 * m + 1e-3 * m, 1.5 * std::sqrt(2.0 * m * norm(z)))),
        z_(z) {}
  std::string name() const override { return "translated_schwarzschild"; }
  SymTensor2 value(const Point3& p) const override {
    return schwarzschild_value(p, m_) + SymTensor2::scaled_identity(shift(p));
  }
  std::array<SymTensor2, 3> first_derivs(const Point3& p) const override {
    auto dg = schwarzschild_derivs(p, m_);
    double r;
    const Vec3 eta = unit(p, r);
    const double c = 2.0 * m_ / (r * r * r);
    const double ze = dot(z_, eta);
    for (int k = 0; k < 3; ++k)
      dg[k] += SymTensor2::scaled_identity(c * (z_[k] - 3.0 * ze * eta[k]));
    return dg;
  }
  SymTensor2 deviation(const Point3& p) const override {
    return SymTensor2::scaled_identity(shift(p));
  }
  void deviation_jet(const Point3& p, SymTensor2& h,
                     std::array<SymTensor2, 3>& dh) const override {
    h = deviation(p);
    double r;
    const Vec3 eta = unit(p, r);
    const double c = 2.0 * m_ / (r * r * r);
    const double ze = dot(z_, eta);
    for (int k = 0; k < 3; ++k)
      dh[k] = SymTensor2::scaled_identity(c * (z_[k] - 3.0 * ze * eta[k]));
  }

 private:
  double shift(const Point3& p) const {
    const double r = norm(p);
    return 2.0 * m_ * dot(z_, p) / (r * r * r);
  }
  Vec3 z_;
};

class YorkPerturbed final : public MetricFamily {
 public:
  YorkPerturbed(double m, const Vec3& P, const YorkWeight& w, double r_min)
      : MetricFamily(m, r_min), P_(P), w_(w) {
    if (w.kind == YorkWeight::Kind::Power && !(w.eps > 0.5 && w.eps < 1.0))
      throw config_error("york_perturbed: power weight requires eps in (1/2, 1)");
  }
  std::string name() const override { return "york_perturbed"; }
  SymTensor2 value(const Point3& p) const override {
    const double r = norm(p);
    return schwarzschild_value(p, m_) + york_tensor(p, P_) * (-2.0 * w_.f(r, m_));
  }
  std::array<SymTensor2, 3> first_derivs(const Point3& p) const override {
    auto dg = schwarzschild_derivs(p, m_);
    double r;
    const Vec3 eta = unit(p, r);
    const double f = w_.f(r, m_), df = w_.df(r, m_);
    const SymTensor2 Y = york_tensor(p, P_);
    const auto dY = york_tensor_derivs(p, P_);
    for (int k = 0; k < 3; ++k) dg[k] += Y * (-2.0 * df * eta[k]) + dY[k] * (-2.0 * f);
    return dg;
  }
  SymTensor2 deviation(const Point3& p) const override {
    return york_tensor(p, P_) * (-2.0 * w_.f(norm(p), m_));
  }
  void deviation_jet(const Point3& p, SymTensor2& h,
                     std::array<SymTensor2, 3>& dh) const override {
    double r;
    const Vec3 eta = unit(p, r);
    const double f = w_.f(r, m_), df = w_.df(r, m_);
    const SymTensor2 Y = york_tensor(p, P_);
    const auto dY = york_tensor_derivs(p, P_);
    h = Y * (-2.0 * f);
    for (int k = 0; k < 3; ++k) dh[k] = Y * (-2.0 * df * eta[k]) + dY[k] * (-2.0 * f);
  }

 private:
  Vec3 P_;
  YorkWeight w_;
};

}  // namespace

double YorkWeight::f(double r, double m) const {
  switch (kind) {
    case Kind::SinLog: return std::sin(std::log(r));
    case Kind::Power: return std::pow(r, 1.0 - eps);
    case Kind::Const: return m;
  }
  return m;
}

double YorkWeight::df(double r, double m) const {
  (void)m;
  switch (kind) {
    case Kind::SinLog: return std::cos(std::log(r)) / r;
    case Kind::Power: return (1.0 - eps) * std::pow(r, -eps);
    case Kind::Const: return 0.0;
  }
  return 0.0;
}

double prescribed_graph_lambda(double m, const Vec3& z) {
  const double z2 = dot(z, z);
  if (z2 == 0.0) return 0.0;
  return -std::cbrt(15.0 * m / (4.0 * z2));
}

GraphSlice::GraphSlice(double m, GraphFunction T, double r_min)
    : MetricFamily(m, r_min), T_(std::move(T)) {
  if (T_.kind == GraphFunction::Kind::Prescribed)
    T_.lam = prescribed_graph_lambda(m, T_.z);
  if (T_.kind == GraphFunction::Kind::Custom && !T_.custom)
    throw config_error("graph_slice: custom graph function not set");
}

ScalarJet2 GraphSlice::graph_jet(const Point3& p) const {
  ScalarJet2 j;
  double r;
  const Vec3 eta = unit(p, r);
  switch (T_.kind) {
    case GraphFunction::Kind::Zero:
      break;
    case GraphFunction::Kind::Divergent: {
      const double lr = std::log(r);
      const double s = std::sin(lr), c = std::cos(lr);
      const double ue = dot(T_.u, eta);
      j.value = s + ue;
      j.grad = eta * (c / r) + (T_.u - eta * ue) / r;
      // radial Hessian f'' nn + (f'/r)(delta - nn), plus the u.x/r part
      const double inv_r2 = 1.0 / (r * r);
      SymTensor2 H = SymTensor2::outer(eta) * (-(s + c) * inv_r2);
      H += (SymTensor2::identity() - SymTensor2::outer(eta)) * (c * inv_r2);
      H += (SymTensor2::sym_outer(T_.u, eta) * (-2.0) +
            SymTensor2::identity() * (-ue) + SymTensor2::outer(eta) * (3.0 * ue)) *
           inv_r2;
      j.hess = H;
      break;
    }
    case GraphFunction::Kind::Prescribed: {
      const double lam = T_.lam;
      if (lam == 0.0) break;
      const double w = dot(T_.z, eta);
      const Vec3 dw = (T_.z - eta * w) / r;
      const double inv_r2 = 1.0 / (r * r);
      SymTensor2 ddw = SymTensor2::outer(eta) * (3.0 * w * inv_r2);
      ddw += SymTensor2::sym_outer(T_.z, eta) * (-2.0 * inv_r2);
      ddw += SymTensor2::identity() * (-w * inv_r2);
      const double a = lam + 2.0 * lam * lam * w;
      j.value = lam * w + lam * lam * w * w;
      j.grad = dw * a;
      j.hess = SymTensor2::outer(dw) * (2.0 * lam * lam) + ddw * a;
      break;
    }
    case GraphFunction::Kind::Custom:
      j = T_.custom(p);
      break;
  }
  return j;
}

SymTensor2 GraphSlice::value(const Point3& p) const {
  const double r = norm(p);
  const double N = schwarzschild_lapse(r, m_);
  const ScalarJet2 tj = graph_jet(p);
  return schwarzschild_value(p, m_) + SymTensor2::outer(tj.grad) * (-N * N);
}

std::array<SymTensor2, 3> GraphSlice::first_derivs(const Point3& p) const {
  auto dg = schwarzschild_derivs(p, m_);
  double r;
  const Vec3 eta = unit(p, r);
  const double N = schwarzschild_lapse(r, m_);
  const double dN = schwarzschild_lapse_dr(r, m_);
  const ScalarJet2 tj = graph_jet(p);
  for (int k = 0; k < 3; ++k) {
    const Vec3 dk_gradT{tj.hess(0, k), tj.hess(1, k), tj.hess(2, k)};
    SymTensor2 d = SymTensor2::outer(tj.grad) * (2.0 * N * dN * eta[k]);
    d += SymTensor2::sym_outer(dk_gradT, tj.grad) * (2.0 * N * N);
    dg[k] += d * (-1.0);
  }
  return dg;
}

SymTensor2 GraphSlice::deviation(const Point3& p) const {
  const double r = norm(p);
  const double N = schwarzschild_lapse(r, m_);
  return SymTensor2::outer(graph_jet(p).grad) * (-N * N);
}

void GraphSlice::deviation_jet(const Point3& p, SymTensor2& h,
                               std::array<SymTensor2, 3>& dh) const {
  double r;
  const Vec3 eta = unit(p, r);
  const double N = schwarzschild_lapse(r, m_);
  const double dN = schwarzschild_lapse_dr(r, m_);
  const ScalarJet2 tj = graph_jet(p);
  h = SymTensor2::outer(tj.grad) * (-N * N);
  for (int k = 0; k < 3; ++k) {
    const Vec3 dk_gradT{tj.hess(0, k), tj.hess(1, k), tj.hess(2, k)};
    dh[k] = SymTensor2::outer(tj.grad) * (-2.0 * N * dN * eta[k]) +
            SymTensor2::sym_outer(dk_gradT, tj.grad) * (-2.0 * N * N);
  }
}

void GraphSlice::com_deviation_jet(const Point3& p, SymTensor2& h,
                                   std::array<SymTensor2, 3>& dh) const {
  // leading-order deviation -dT (x) dT (lapse corrections dropped)
  const ScalarJet2 tj = graph_jet(p);
  h = SymTensor2::outer(tj.grad) * (-1.0);
  for (int k = 0; k < 3; ++k) {
    const Vec3 dk_gradT{tj.hess(0, k), tj.hess(1, k), tj.hess(2, k)};
    dh[k] = SymTensor2::sym_outer(dk_gradT, tj.grad) * (-2.0);
  }
}

FamilyPtr make_schwarzschild(double m) {
  auto f = std::make_shared<Schwarzschild>(m);
  validate_positive_definite(*f);
  return f;
}

FamilyPtr make_translated_schwarzschild(double m, const Vec3& z) {
  auto f = std::make_shared<TranslatedSchwarzschild>(m, z);
  validate_positive_definite(*f);
  return f;
}

FamilyPtr make_york_perturbed(double m, const Vec3& P, const YorkWeight& w,
                              std::optional<double> r_min) {
  auto f = std::make_shared<YorkPerturbed>(m, P, w, r_min.value_or(2.0 * m));
  validate_positive_definite(*f);
  return f;
}

FamilyPtr make_graph_slice(double m, GraphFunction T, std::optional<double> r_min) {
  auto f = std::make_shared<GraphSlice>(m, std::move(T), r_min.value_or(0.5 * m + 1e-3 * m));
  validate_positive_definite(*f);
  return f;
}

MetricJet eval_jet(const MetricFamily& family, const Point3& p, int order) {
  family.check_domain(p);
  MetricJet jet;
  jet.g = family.value(p);
  if (!jet.g.positive_definite()) {
    std::ostringstream os;
    os << family.name() << ": non-positive-definite metric value at r = " << norm(p);
    throw internal_error(os.str());
  }
  jet.dg = family.first_derivs(p);
  if (order >= 2) {
    const double r = norm(p);
    const double h = std::max(r * 1e-4, 1e-6);
    std::array<std::array<SymTensor2, 3>, 3> raw;  // raw[k][l] = d_k (dg_l)
    for (int k = 0; k < 3; ++k) {
      Vec3 e;
      e[k] = 1.0;
      const auto p2 = family.first_derivs(p + e * (2.0 * h));
      const auto p1 = family.first_derivs(p + e * h);
      const auto m1 = family.first_derivs(p - e * h);
      const auto m2 = family.first_derivs(p - e * (2.0 * h));
      for (int l = 0; l < 3; ++l)
        raw[k][l] = (p2[l] * (-1.0) + p1[l] * 8.0 + m1[l] * (-8.0) + m2[l]) * (1.0 / (12.0 * h));
    }
    for (int k = 0; k < 3; ++k)
      for (int l = 0; l < 3; ++l) jet.ddg[k][l] = (raw[k][l] + raw[l][k]) * 0.5;
    jet.has_second = true;
  }
  return jet;
}

SymTensor2 deviation(const MetricFamily& family, const Point3& p) {
  family.check_domain(p);
  return family.deviation(p);
}

Christoffels christoffel_symbols(const MetricJet& jet) {
  const SymTensor2 ginv = jet.g.inverse();
  Christoffels gam{};
  for (int k = 0; k < 3; ++k)
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) {
        double s = 0.0;
        for (int l = 0; l < 3; ++l)
          s += ginv(k, l) * (jet.dg[i](l, j) + jet.dg[j](l, i) - jet.dg[l](i, j));
        gam[k][i][j] = 0.5 * s;
      }
  return gam;
}

double scalar_curvature(const MetricFamily& family, const Point3& p) {
  const MetricJet jet = eval_jet(family, p, 2);
  const SymTensor2 ginv = jet.g.inverse();
  const Christoffels gam = christoffel_symbols(jet);

  // d_m g^{kl} = -g^{ka} (d_m g_ab) g^{bl}
  std::array<SymTensor2, 3> dginv;
  for (int mI = 0; mI < 3; ++mI) {
    SymTensor2 d;
    for (int k = 0; k < 3; ++k)
      for (int l = k; l < 3; ++l) {
        double s = 0.0;
        for (int a = 0; a < 3; ++a)
          for (int b = 0; b < 3; ++b) s += ginv(k, a) * jet.dg[mI](a, b) * ginv(b, l);
        d(k, l) = -s;
      }
    dginv[mI] = d;
  }

  // d_m Gamma^k_ij
  double dgam[3][3][3][3];
  for (int mI = 0; mI < 3; ++mI)
    for (int k = 0; k < 3; ++k)
      for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
          double s = 0.0;
          for (int l = 0; l < 3; ++l) {
            s += dginv[mI](k, l) * (jet.dg[i](l, j) + jet.dg[j](l, i) - jet.dg[l](i, j));
            s += ginv(k, l) *
                 (jet.ddg[mI][i](l, j) + jet.ddg[mI][j](l, i) - jet.ddg[mI][l](i, j));
          }
          dgam[mI][k][i][j] = 0.5 * s;
        }

  double R = 0.0;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      double ric = 0.0;
      for (int k = 0; k < 3; ++k) {
        ric += dgam[k][k][i][j] - dgam[i][k][k][j];
        for (int l = 0; l < 3; ++l)
          ric += gam[k][k][l] * gam[l][i][j] - gam[k][i][l] * gam[l][k][j];
      }
      R += ginv(i, j) * ric;
    }
  return R;
}

SymTensor2 background_hessian(const ScalarJet2& tj, const Point3& p, double m) {
  double r;
  const Vec3 eta = unit(p, r);
  const double phi = conformal_factor(r, m);
  const double w = 2.0 * conformal_factor_dr(r, m) / phi;  // d(ln phi^2)/dr
  const double te = dot(tj.grad, eta);
  SymTensor2 H = tj.hess;
  H += SymTensor2::sym_outer(tj.grad, eta) * (-2.0 * w);
  H += SymTensor2::identity() * (w * te);
  return H;
}

ExtrinsicData extrinsic_data(const GraphSlice& family, const Point3& p) {
  family.check_domain(p);
  const double m = family.mass();
  double r;
  const Vec3 eta = unit(p, r);
  const double phi = conformal_factor(r, m);
  const double phi4 = phi * phi * phi * phi;
  const double N = schwarzschild_lapse(r, m);
  const double dN = schwarzschild_lapse_dr(r, m);

  const ScalarJet2 tj = family.graph_jet(p);
  const double gradT_sq = dot(tj.grad, tj.grad) / phi4;  // |grad T|^2 in g_m
  const double alpha = 1.0 - N * N * gradT_sq;
  if (!(alpha > 0.0)) {
    std::ostringstream os;
    os << "graph_slice: non-spacelike point at r = " << r
       << " (1 - N^2 |grad T|^2 = " << alpha << ")";
    throw domain_error(os.str());
  }

  const Vec3 gradN = eta * dN;
  const SymTensor2 hess_m = background_hessian(tj, p, m);
  const double gradT_dot_gradN = dot(tj.grad, gradN) / phi4;

  // K_ij = [T_i N_j + N_i T_j + N Hess_ij T - N^2 (grad T . grad N) T_i T_j]
  //        / sqrt(1 - N^2 |grad T|^2),  derivatives and contractions in the
  // Schwarzschild background. The final term follows from the spacetime
  // embedding; it is what makes the vacuum identity R = |K|^2 - (tr K)^2
  // hold to quadrature precision.
  SymTensor2 K = SymTensor2::sym_outer(tj.grad, gradN) * 2.0;
  K += hess_m * N;
  K += SymTensor2::outer(tj.grad) * (-N * N * gradT_dot_gradN);
  K = K * (1.0 / std::sqrt(alpha));

  ExtrinsicData out;
  out.K = K;
  out.lapse = N;
  const SymTensor2 g = family.value(p);
  const SymTensor2 ginv = g.inverse();
  double tr = 0.0;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) tr += ginv(i, j) * K(i, j);
  out.trK = tr;
  out.Pi = g * tr - K;
  return out;
}

}  // namespace comlab
