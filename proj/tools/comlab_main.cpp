// comlab: evaluate ADM / CMC / Newtonian mass and center-of-mass integrals on
// explicit asymptotically Schwarzschildean metric families, sweep them over
// radius ladders, classify the limits, and run the verification suites.
//
// Exit codes: 0 success, 1 verification failure, 2 configuration error,
// 3 numerical domain error.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "comlab/cmc.hpp"
#include "comlab/config.hpp"
#include "comlab/sweep.hpp"
#include "comlab/verify.hpp"
#include "comlab/version.hpp"

namespace {

using comlab::Json;

Json load_json_arg(const std::string& arg, const std::string& what) {
  std::string text = arg;
  if (!arg.empty() && arg.front() != '{' && arg.front() != '[') {
    std::ifstream in(arg);
    if (!in) throw comlab::config_error(what + ": cannot open file \"" + arg + "\"");
    std::ostringstream buf;
    buf << in.rdbuf();
    text = buf.str();
  }
  try {
    return Json::parse(text);
  } catch (const std::exception& e) {
    throw comlab::config_error(what + ": JSON parse error: " + e.what());
  }
}

void write_output(const std::string& path, const std::string& content) {
  if (path.empty() || path == "-") {
    std::cout << content;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw comlab::config_error("cannot open output file \"" + path + "\"");
  out << content;
}

struct LadderFlags {
  double r0 = 0.0;
  double ratio = 0.0;
  int count = 0;

  comlab::RadiusLadder resolve(double mass_scale) const {
    comlab::RadiusLadder ladder = comlab::RadiusLadder::default_for(mass_scale);
    if (r0 > 0.0) ladder.r0 = r0;
    if (ratio > 0.0) ladder.ratio = ratio;
    if (count > 0) ladder.count = count;
    ladder.validate(mass_scale);
    return ladder;
  }
};

Json compose_family_config(const std::string& family_kind, const std::string& params) {
  Json config = params.empty() ? Json::object() : load_json_arg(params, "--params");
  if (!family_kind.empty()) config["kind"] = family_kind;
  return config;
}

int cmd_sweep(const std::string& family_kind, const std::string& params,
              const LadderFlags& ladder_flags, int ntheta, int nphi, const std::string& out_path,
              const std::string& format) {
  const Json config = compose_family_config(family_kind, params);
  const comlab::FamilyPtr family = comlab::family_from_json(config);
  const comlab::RadiusLadder ladder = ladder_flags.resolve(family->mass());
  const comlab::SphereGrid grid(ntheta, nphi);

  const auto records = comlab::run_adm_sweep(*family, ladder, grid);
  const comlab::LimitVerdict mass_verdict = comlab::classify(comlab::mass_sequence(records));
  const comlab::LimitVerdict com_verdict = comlab::classify(comlab::com_sequence(records));
  comlab::LimitVerdict momentum_verdict;
  const bool graph = family->as_graph() != nullptr;
  if (graph) momentum_verdict = comlab::classify(comlab::momentum_sequence(records));

  Json echo;
  echo["family"] = config;
  echo["ladder"] = {{"r0", ladder.r0}, {"ratio", ladder.ratio}, {"count", ladder.count}};

  if (format == "json") {
    const Json doc = comlab::adm_sweep_json(records, echo, family->mass(), mass_verdict,
                                            com_verdict, graph ? &momentum_verdict : nullptr);
    write_output(out_path, doc.dump(2) + "\n");
  } else {
    write_output(out_path, comlab::adm_sweep_csv(records, echo));
    std::cerr << "z_adm verdict: " << comlab::verdict_to_json(com_verdict).dump() << "\n";
  }
  return 0;
}

int cmd_newton(const std::string& density_json, const LadderFlags& ladder_flags, int ntheta,
               int nphi, const std::string& out_path) {
  const Json config = load_json_arg(density_json, "--density");
  const comlab::NewtonianDensity density = comlab::density_from_json(config);
  comlab::RadiusLadder ladder{4.0, 2.0, 12};
  if (ladder_flags.r0 > 0.0) ladder.r0 = ladder_flags.r0;
  if (ladder_flags.ratio > 0.0) ladder.ratio = ladder_flags.ratio;
  if (ladder_flags.count > 0) ladder.count = ladder_flags.count;
  ladder.validate(std::max(density.m, 1.0));
  const comlab::SphereGrid grid(ntheta, nphi);

  const auto records = comlab::run_newton_sweep(density, ladder, grid);
  Json echo;
  echo["density"] = config;
  echo["ladder"] = {{"r0", ladder.r0}, {"ratio", ladder.ratio}, {"count", ladder.count}};
  echo["grid"] = {{"ntheta", ntheta}, {"nphi", nphi}};
  write_output(out_path, comlab::newton_sweep_csv(records, echo));
  return 0;
}

int cmd_cmc_fit(const std::string& family_kind, const std::string& params, double sigma0,
                double ratio, int count, const std::string& out_path) {
  const Json config = compose_family_config(family_kind, params);
  const comlab::FamilyPtr family = comlab::family_from_json(config);
  std::vector<double> sigmas;
  double s = sigma0;
  for (int k = 0; k < count; ++k) {
    sigmas.push_back(s);
    s *= ratio;
  }
  const auto fits = comlab::cmc_center_sweep(*family, sigmas);
  std::vector<comlab::CmcSweepRow> rows;
  for (const auto& [sigma, fit] : fits)
    rows.push_back({sigma, fit.center, fit.radius, fit.residual, fit.converged});
  Json echo;
  echo["family"] = config;
  echo["sigma"] = {{"sigma0", sigma0}, {"ratio", ratio}, {"count", count}};
  const comlab::CmcFitOptions fit_defaults;
  echo["fit_grid"] = {{"ntheta", fit_defaults.n_theta}, {"nphi", fit_defaults.n_phi}};
  write_output(out_path, comlab::cmc_sweep_csv(rows, echo));
  return 0;
}

int cmd_verify(const std::string& suite) {
  const auto results = comlab::run_verification_suite(suite);
  comlab::print_results(results, std::cout);
  return comlab::all_passed(results) ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"mass and center-of-mass integral laboratory"};
  app.set_version_flag("--version", comlab::kVersion);
  app.require_subcommand(1);

  std::string family_kind, params, out_path = "-", format = "csv";
  LadderFlags ladder;
  int ntheta = 24, nphi = 48;

  CLI::App* sweep = app.add_subcommand("sweep", "ADM integrals over a radius ladder");
  sweep->add_option("--family", family_kind, "family kind (overrides params)");
  sweep->add_option("--params", params, "family parameters: inline JSON or a file path");
  sweep->add_option("--r0", ladder.r0, "ladder start radius");
  sweep->add_option("--ratio", ladder.ratio, "ladder ratio (> 1)");
  sweep->add_option("--count", ladder.count, "ladder rung count");
  sweep->add_option("--ntheta", ntheta, "Gauss-Legendre nodes in cos(theta)");
  sweep->add_option("--nphi", nphi, "uniform nodes in phi (even)");
  sweep->add_option("--out", out_path, "output path ('-' = stdout)");
  sweep->add_option("--format", format, "csv or json")
      ->check(CLI::IsMember({"csv", "json"}));

  std::string density_json;
  CLI::App* newton = app.add_subcommand("newton", "Newtonian mass/center over a radius ladder");
  newton->add_option("--density", density_json, "density parameters: inline JSON or file path")
      ->required();
  newton->add_option("--r0", ladder.r0, "ladder start radius");
  newton->add_option("--ratio", ladder.ratio, "ladder ratio (> 1)");
  newton->add_option("--count", ladder.count, "ladder rung count");
  newton->add_option("--ntheta", ntheta, "Gauss-Legendre nodes in cos(theta)");
  newton->add_option("--nphi", nphi, "uniform nodes in phi (even)");
  newton->add_option("--out", out_path, "output path ('-' = stdout)");

  double sigma0 = 20.0, sigma_ratio = 1.6;
  int sigma_count = 12;
  CLI::App* cmc = app.add_subcommand("cmc-fit", "near-CMC sphere fits along a sigma ladder");
  cmc->add_option("--family", family_kind, "family kind (overrides params)");
  cmc->add_option("--params", params, "family parameters: inline JSON or a file path");
  cmc->add_option("--sigma0", sigma0, "first leaf scale");
  cmc->add_option("--ratio", sigma_ratio, "sigma ladder ratio");
  cmc->add_option("--count", sigma_count, "sigma ladder length");
  cmc->add_option("--out", out_path, "output path ('-' = stdout)");

  std::string suite = "all";
  CLI::App* verify = app.add_subcommand("verify", "run a verification suite");
  verify->add_option("suite", suite,
                     "schwarzschild|newtonian|divergent|prescribed|cmc|all");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (sweep->parsed())
      return cmd_sweep(family_kind, params, ladder, ntheta, nphi, out_path, format);
    if (newton->parsed()) return cmd_newton(density_json, ladder, ntheta, nphi, out_path);
    if (cmc->parsed())
      return cmd_cmc_fit(family_kind, params, sigma0, sigma_ratio, sigma_count, out_path);
    if (verify->parsed()) return cmd_verify(suite);
  } catch (const comlab::config_error& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const comlab::domain_error& e) {
    std::cerr << "domain error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
