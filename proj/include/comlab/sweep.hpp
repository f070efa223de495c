#pragma once

// Radius-ladder sweeps of the ADM integrals and the Newtonian volume
// integrals, their convergence verdicts, and reproducible CSV/JSON output.

#include <string>
#include <vector>

#include "comlab/adm.hpp"
#include "comlab/config.hpp"
#include "comlab/limits.hpp"
#include "comlab/newtonian.hpp"

namespace comlab {

std::vector<SweepRecord> run_adm_sweep(const MetricFamily& family, const RadiusLadder& ladder,
                                       const SphereGrid& grid);

Sequence mass_sequence(const std::vector<SweepRecord>& records);
Sequence com_sequence(const std::vector<SweepRecord>& records);
Sequence momentum_sequence(const std::vector<SweepRecord>& records);

struct NewtonRecord {
  double R = 0.0;
  double mass = 0.0;
  Vec3 com;
};

std::vector<NewtonRecord> run_newton_sweep(const NewtonianDensity& density,
                                           const RadiusLadder& ladder, const SphereGrid& grid);

Json verdict_to_json(const LimitVerdict& v);

// CSV with a '#' header carrying the full config echo, grid degrees and the
// tool version; bitwise deterministic for a fixed config and build.
std::string adm_sweep_csv(const std::vector<SweepRecord>& records, const Json& config_echo);
Json adm_sweep_json(const std::vector<SweepRecord>& records, const Json& config_echo,
                    double family_mass, const LimitVerdict& mass_verdict,
                    const LimitVerdict& com_verdict, const LimitVerdict* momentum_verdict);

std::string newton_sweep_csv(const std::vector<NewtonRecord>& records, const Json& config_echo);

struct CmcSweepRow {
  double sigma = 0.0;
  Vec3 center;
  double radius = 0.0;
  double residual = 0.0;
  bool converged = false;
};
std::string cmc_sweep_csv(const std::vector<CmcSweepRow>& rows, const Json& config_echo);

}  // namespace comlab
