#include "comlab/sweep.hpp"

#include <cmath>
#include <cstdio>
#include <limits>

#include "comlab/parallel.hpp"
#include "comlab/version.hpp"

namespace comlab {

std::vector<SweepRecord> run_adm_sweep(const MetricFamily& family, const RadiusLadder& ladder,
                                       const SphereGrid& grid) {
  ladder.validate(family.mass());
  const std::vector<double> radii = ladder.radii();
  if (!(radii.front() > family.r_min()))
    throw config_error("sweep: ladder starts inside the family's validity radius");
  std::vector<SweepRecord> records(radii.size());
  const bool graph = family.as_graph() != nullptr;
  parallel_for(static_cast<int>(radii.size()), [&](int i) {
    SweepRecord rec;
    rec.r = radii[i];
    rec.m_adm = adm_mass_at(family, rec.r, grid);
    rec.z_adm = adm_com_at(family, rec.r, grid);
    if (graph) {
      rec.p_adm = adm_momentum_at(family, rec.r, grid);
      rec.has_momentum = true;
    } else {
      const double nan = std::numeric_limits<double>::quiet_NaN();
      rec.p_adm = {nan, nan, nan};
    }
    rec.n_theta = grid.n_theta();
    rec.n_phi = grid.n_phi();
    records[i] = rec;
  });
  return records;
}

Sequence mass_sequence(const std::vector<SweepRecord>& records) {
  Sequence s;
  s.reserve(records.size());
  for (const auto& r : records) s.emplace_back(r.r, Vec3{r.m_adm, 0.0, 0.0});
  return s;
}

Sequence com_sequence(const std::vector<SweepRecord>& records) {
  Sequence s;
  s.reserve(records.size());
  for (const auto& r : records) s.emplace_back(r.r, r.z_adm);
  return s;
}

Sequence momentum_sequence(const std::vector<SweepRecord>& records) {
  Sequence s;
  s.reserve(records.size());
  for (const auto& r : records)
    if (r.has_momentum) s.emplace_back(r.r, r.p_adm);
  return s;
}

std::vector<NewtonRecord> run_newton_sweep(const NewtonianDensity& density,
                                           const RadiusLadder& ladder, const SphereGrid& grid) {
  const std::vector<double> radii = ladder.radii();
  std::vector<NewtonRecord> records(radii.size());
  parallel_for(static_cast<int>(radii.size()), [&](int i) {
    NewtonRecord rec;
    rec.R = radii[i];
    rec.mass = newton_mass(density, rec.R, grid);
    rec.com = rec.mass > 0.0 ? newton_com(density, rec.R, grid) : Vec3{};
    records[i] = rec;
  });
  return records;
}

namespace {

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

Json vec_json(const Vec3& v) { return Json::array({v.x, v.y, v.z}); }

std::string csv_header(const Json& config_echo) {
  std::string out;
  out += "# comlab ";
  out += kVersion;
  out += "\n# config: ";
  out += config_echo.dump();
  out += "\n";
  return out;
}

}  // namespace

Json verdict_to_json(const LimitVerdict& v) {
  Json params = Json::object();
  switch (v.cls) {
    case LimitClass::Converged:
      params["value"] = vec_json(v.value);
      params["rate"] = vec_json(v.rate);
      break;
    case LimitClass::LogDivergent:
      params["slope"] = vec_json(v.log_slope);
      params["offset"] = vec_json(v.osc_center);
      break;
    case LimitClass::PowerDivergent:
      params["exponent"] = v.exponent;
      params["coefficient"] = vec_json(v.power_coeff);
      break;
    case LimitClass::Oscillatory:
      params["cos"] = vec_json(v.osc_cos);
      params["sin"] = vec_json(v.osc_sin);
      params["center"] = vec_json(v.osc_center);
      params["amplitude"] = v.amplitude;
      params["phase"] = v.phase;
      break;
    case LimitClass::Undetermined:
      break;
  }
  Json residuals = Json::object();
  for (const auto& [model, rms] : v.residuals) residuals[model] = rms;
  Json out;
  out["class"] = to_string(v.cls);
  out["params"] = params;
  out["residuals"] = residuals;
  if (!v.note.empty()) out["note"] = v.note;
  return out;
}

std::string adm_sweep_csv(const std::vector<SweepRecord>& records, const Json& config_echo) {
  std::string out = csv_header(config_echo);
  if (!records.empty()) {
    out += "# grid: ntheta=" + std::to_string(records.front().n_theta) +
           " nphi=" + std::to_string(records.front().n_phi) + "\n";
  }
  out += "r,m_adm,zx,zy,zz,px,py,pz,ntheta,nphi\n";
  for (const auto& rec : records) {
    out += fmt(rec.r) + "," + fmt(rec.m_adm) + "," + fmt(rec.z_adm.x) + "," + fmt(rec.z_adm.y) +
           "," + fmt(rec.z_adm.z) + "," + fmt(rec.p_adm.x) + "," + fmt(rec.p_adm.y) + "," +
           fmt(rec.p_adm.z) + "," + std::to_string(rec.n_theta) + "," +
           std::to_string(rec.n_phi) + "\n";
  }
  return out;
}

Json adm_sweep_json(const std::vector<SweepRecord>& records, const Json& config_echo,
                    double family_mass, const LimitVerdict& mass_verdict,
                    const LimitVerdict& com_verdict, const LimitVerdict* momentum_verdict) {
  Json rows = Json::array();
  for (const auto& rec : records) {
    Json row;
    row["r"] = rec.r;
    row["m_adm"] = rec.m_adm;
    row["zx"] = rec.z_adm.x;
    row["zy"] = rec.z_adm.y;
    row["zz"] = rec.z_adm.z;
    if (rec.has_momentum) {
      row["px"] = rec.p_adm.x;
      row["py"] = rec.p_adm.y;
      row["pz"] = rec.p_adm.z;
      // the normalization carrying an extra 1/m, alongside the plain one
      row["px_over_m"] = rec.p_adm.x / family_mass;
      row["py_over_m"] = rec.p_adm.y / family_mass;
      row["pz_over_m"] = rec.p_adm.z / family_mass;
    }
    row["ntheta"] = rec.n_theta;
    row["nphi"] = rec.n_phi;
    rows.push_back(row);
  }
  Json out;
  out["version"] = kVersion;
  out["config"] = config_echo;
  out["records"] = rows;
  Json verdicts;
  verdicts["m_adm"] = verdict_to_json(mass_verdict);
  verdicts["z_adm"] = verdict_to_json(com_verdict);
  if (momentum_verdict != nullptr) verdicts["p_adm"] = verdict_to_json(*momentum_verdict);
  out["verdicts"] = verdicts;
  return out;
}

std::string newton_sweep_csv(const std::vector<NewtonRecord>& records, const Json& config_echo) {
  std::string out = csv_header(config_echo);
  out += "R,mass,comx,comy,comz\n";
  for (const auto& rec : records) {
    out += fmt(rec.R) + "," + fmt(rec.mass) + "," + fmt(rec.com.x) + "," + fmt(rec.com.y) + "," +
           fmt(rec.com.z) + "\n";
  }
  return out;
}

std::string cmc_sweep_csv(const std::vector<CmcSweepRow>& rows, const Json& config_echo) {
  std::string out = csv_header(config_echo);
  out += "sigma,cx,cy,cz,radius,residual,converged\n";
  for (const auto& row : rows) {
    out += fmt(row.sigma) + "," + fmt(row.center.x) + "," + fmt(row.center.y) + "," +
           fmt(row.center.z) + "," + fmt(row.radius) + "," + fmt(row.residual) + "," +
           (row.converged ? "1" : "0") + "\n";
  }
  return out;
}

}  // namespace comlab
