#include "jostfit/pipeline.hpp"

#include <cmath>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "jostfit/io.hpp"
#include "json.hpp"

namespace fs = std::filesystem;

namespace jostfit {
namespace {

fs::path out_path(const RunConfig& cfg, const char* name) {
  const fs::path dir = cfg.out_dir.is_absolute() ? cfg.out_dir : cfg.base_dir / cfg.out_dir;
  return dir / name;
}

fs::path require(const RunConfig& cfg, const char* name, const char* stage) {
  const fs::path p = out_path(cfg, name);
  if (!fs::exists(p)) throw ConfigError("missing " + p.string() + " (run '" + stage + "' first)");
  return p;
}

void ensure_out_dir(const RunConfig& cfg) {
  const fs::path dir = out_path(cfg, "").parent_path();
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir)) throw ConfigError("cannot create output directory " + dir.string());
}

double model_mu(const RunConfig& cfg) { return cfg.potential.mu_eff(); }
double model_z(const RunConfig& cfg) { return cfg.potential.coulomb_z; }

// Default pole-search box per l when the config lists none: the data window, down to Im E = -1.5.
std::vector<RegionConfig> regions_or_default(const RunConfig& cfg) {
  if (!cfg.regions.empty()) return cfg.regions;
  std::vector<RegionConfig> out;
  for (int l = 0; l <= cfg.l_max; ++l) {
    RegionConfig rc;
    rc.l = l;
    rc.region.re_min = cfg.e_min;
    rc.region.re_max = cfg.e_max;
    rc.region.im_min = -1.5;
    rc.region.im_max = -1e-7;
    out.push_back(rc);
  }
  return out;
}

std::string curve_csv(const std::vector<double>& E, const std::vector<double>& exact, const std::vector<double>& fit) {
  std::ostringstream os;
  os << "E,sigma_exact,sigma_fit\n";
  for (size_t i = 0; i < E.size(); ++i)
    os << fmt_double(E[i]) << ',' << fmt_double(exact[i]) << ',' << fmt_double(fit[i]) << '\n';
  return os.str();
}

void write_curves(const RunConfig& cfg, const FittedModel& fm, double lo, double hi, int n, const std::string& prefix) {
  std::vector<double> E;
  std::vector<std::vector<double>> exact(cfg.l_max + 2), fit(cfg.l_max + 2);
  for (int i = 0; i < n; ++i) {
    const double e = i + 1 == n ? hi : lo + (hi - lo) * i / (n - 1);
    E.push_back(e);
    const CrossSections ex = cross_sections_exact(cfg.potential, e, cfg.l_max, cfg.integration);
    const CrossSections ft = fm.sigma(e, model_mu(cfg), model_z(cfg));
    exact[0].push_back(ex.total);
    fit[0].push_back(ft.total);
    for (int l = 0; l <= cfg.l_max; ++l) {
      exact[l + 1].push_back(ex.sigma_l[l]);
      fit[l + 1].push_back(l < static_cast<int>(ft.sigma_l.size()) ? ft.sigma_l[l] : 0.0);
    }
  }
  write_text(out_path(cfg, (prefix + "_total.csv").c_str()).string(), curve_csv(E, exact[0], fit[0]));
  for (int l = 0; l <= cfg.l_max; ++l)
    write_text(out_path(cfg, (prefix + "_l" + std::to_string(l) + ".csv").c_str()).string(),
               curve_csv(E, exact[l + 1], fit[l + 1]));
}

}  // namespace

int FittedModel::l_max() const {
  switch (model) {
    case ModelKind::Jost: return static_cast<int>(jost.size()) - 1;
    case ModelKind::JostTaylor: return static_cast<int>(taylor.size()) - 1;
    case ModelKind::RMatrix: return static_cast<int>(rmatrix.size()) - 1;
  }
  return -1;
}

CrossSections FittedModel::sigma(double E, double mu, double z) const {
  switch (model) {
    case ModelKind::Jost: return sigma_model(jost, E, mu, z);
    case ModelKind::JostTaylor: return sigma_model(taylor, E, mu, z);
    case ModelKind::RMatrix: return sigma_rmatrix(rmatrix, E, mu, z);
  }
  return {};
}

std::vector<Resonance> FittedModel::search(int l, double mu, double z, const SearchRegion& region) const {
  if (l < 0 || l > l_max()) throw ConfigError("pole region for l = " + std::to_string(l) + " but the fit has no such wave");
  switch (model) {
    case ModelKind::Jost: return find_resonances(jost[l], mu, z, region);
    case ModelKind::JostTaylor: return find_resonances(taylor[l], mu, z, region);
    case ModelKind::RMatrix: return rmatrix_pole_search(rmatrix[l], mu, z, region);
  }
  return {};
}

FittedModel read_fit_result(const fs::path& path) {
  FittedModel fm;
  try {
    const nlohmann::json j = nlohmann::json::parse(read_text(path.string()));
    fm.model = model_kind_from_string(j.at("model").get<std::string>());
    fm.chi2 = j.at("chi2").get<double>();
    fm.converged = j.at("converged").get<bool>();
    for (const auto& w : j.at("partial_waves")) {
      switch (fm.model) {
        case ModelKind::Jost: fm.jost.push_back(ab_params_from_json(w)); break;
        case ModelKind::JostTaylor: fm.taylor.push_back(taylor_params_from_json(w)); break;
        case ModelKind::RMatrix: fm.rmatrix.push_back(rparams_from_json(w)); break;
      }
    }
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
  return fm;
}

FitProblem build_problem(const RunConfig& cfg, const CrossSectionDataset& ds) {
  switch (cfg.model) {
    case ModelKind::Jost: return make_jost_problem(ds, cfg.jost_bases, model_mu(cfg), model_z(cfg));
    case ModelKind::JostTaylor:
      return make_taylor_problem(ds, cfg.taylor_E0, cfg.taylor_order, model_mu(cfg), model_z(cfg));
    case ModelKind::RMatrix: return make_rmatrix_problem(ds, cfg.rmatrix, model_mu(cfg), model_z(cfg));
  }
  throw ConfigError("unknown model");
}

StartFilter causal_filter(const RunConfig& cfg, const FitProblem& problem) {
  if (!cfg.require_causal || problem.model == ModelKind::RMatrix) return {};
  const auto regions = regions_or_default(cfg);
  return [&problem, regions](const Eigen::VectorXd& params) {
    try {
      if (problem.model == ModelKind::Jost) {
        const auto ps = unpack_jost(problem, params);
        for (const auto& rc : regions)
          if (physical_zero_count(ps[rc.l], problem.mu, problem.z, rc.region) != 0) return false;
      } else {
        const auto ps = unpack_taylor(problem, params);
        for (const auto& rc : regions)
          if (physical_zero_count(ps[rc.l], problem.mu, problem.z, rc.region) != 0) return false;
      }
    } catch (const NumericalError&) {
      return false;
    }
    return true;
  };
}

void cmd_generate(const RunConfig& cfg) {
  ensure_out_dir(cfg);
  const CrossSectionDataset ds =
      generate_dataset(cfg.potential, cfg.e_min, cfg.e_max, cfg.count, cfg.l_max, cfg.delta, cfg.integration);
  write_dataset_csv(out_path(cfg, files::dataset).string(), ds);
  write_text(out_path(cfg, files::dataset_meta).string(), dataset_metadata_json(ds, cfg.potential, cfg.delta));
}

FitOutcome cmd_fit(const RunConfig& cfg) {
  const CrossSectionDataset ds = read_dataset_csv(require(cfg, files::dataset, "generate").string(), cfg.l_max);
  FitOutcome out{FitResult{}, build_problem(cfg, ds)};
  Eigen::VectorXd first;
  if (cfg.model == ModelKind::RMatrix) first = pack_rmatrix(cfg.rmatrix);
  out.result = multistart(out.problem, cfg.starts, cfg.scale, cfg.seed, cfg.fit, first, causal_filter(cfg, out.problem));
  ensure_out_dir(cfg);
  write_text(out_path(cfg, files::fit_result).string(), fit_result_json(out.result, out.problem) + "\n");
  const ParamTable t = param_report(out.result, out.problem);
  write_text(out_path(cfg, files::params_csv).string(), t.to_csv());
  write_text(out_path(cfg, files::params_txt).string(), t.to_text());
  return out;
}

std::vector<Resonance> cmd_poles(const RunConfig& cfg) {
  const FittedModel fm = read_fit_result(require(cfg, files::fit_result, "fit"));
  std::vector<Resonance> all;
  for (const auto& rc : cfg.regions) {
    const auto found = fm.search(rc.l, model_mu(cfg), model_z(cfg), rc.region);
    all.insert(all.end(), found.begin(), found.end());
  }
  ensure_out_dir(cfg);
  write_resonances_csv(out_path(cfg, files::resonances_csv).string(), all);
  write_text(out_path(cfg, files::resonances_json).string(), resonances_json(all) + "\n");
  return all;
}

void cmd_exact_poles(const RunConfig& cfg) {
  IntegrationSettings s = cfg.integration;
  s.rotation_theta = cfg.exact_theta;
  std::vector<Resonance> all;
  for (const auto& rc : cfg.exact_regions) {
    const auto found = exact_resonances(cfg.potential, rc.l, rc.region, s);
    all.insert(all.end(), found.begin(), found.end());
  }
  ensure_out_dir(cfg);
  write_resonances_csv(out_path(cfg, files::exact_resonances_csv).string(), all);
}

std::vector<TruthRow> compare_to_truth(const std::vector<Resonance>& truth, const std::vector<Resonance>& found,
                                       double E_tol, double gamma_rel_tol) {
  std::vector<TruthRow> rows;
  for (const auto& t : truth) {
    TruthRow r;
    r.truth = t;
    double best = INFINITY;
    for (const auto& f : found) {
      if (f.l != t.l) continue;
      const double d = std::abs(f.E_complex - t.E_complex);
      if (d < best) {
        best = d;
        r.match = f;
        r.found = true;
      }
    }
    r.pass = r.found && std::abs(r.match.E_r - t.E_r) <= E_tol &&
             std::abs(r.match.Gamma - t.Gamma) <= gamma_rel_tol * std::abs(t.Gamma);
    rows.push_back(r);
  }
  return rows;
}

bool cmd_report(const RunConfig& cfg) {
  const CrossSectionDataset ds = read_dataset_csv(require(cfg, files::dataset, "generate").string(), cfg.l_max);
  const FittedModel fm = read_fit_result(require(cfg, files::fit_result, "fit"));
  const auto found = read_resonances_csv(require(cfg, files::resonances_csv, "poles").string());

  write_curves(cfg, fm, cfg.e_min, cfg.e_max, cfg.report.curve_points, "fig");
  write_curves(cfg, fm, cfg.report.insert_min, cfg.report.insert_max, cfg.report.insert_points, "insert");

  double worst = 0;
  for (const auto& p : ds.points) {
    const double s = fm.sigma(p.E, model_mu(cfg), model_z(cfg)).total;
    worst = std::max(worst, std::abs(s - p.sigma) / std::abs(p.sigma));
  }

  nlohmann::json j;
  j["model"] = to_string(fm.model);
  j["chi2"] = fm.chi2;
  j["converged"] = fm.converged;
  j["max_rel_deviation_at_data"] = worst;
  std::ostringstream txt;
  txt << "model " << to_string(fm.model) << "  chi2 " << fm.chi2 << "  converged " << (fm.converged ? "yes" : "no")
      << "\nmax relative deviation at data points " << worst << "\n\n";
  txt << "found resonances\n";
  for (const auto& r : found) txt << "  l=" << r.l << "  E_r " << fmt_double(r.E_r) << "  Gamma " << fmt_double(r.Gamma) << "\n";

  bool ok = true;
  nlohmann::json rows = nlohmann::json::array();
  if (!cfg.report.ground_truth.empty()) {
    const auto truth = read_resonances_csv((cfg.base_dir / cfg.report.ground_truth).string());
    txt << "\nground truth (" << cfg.report.ground_truth << "): |dE_r| <= " << cfg.report.truth_E_tol
        << ", |dGamma|/Gamma <= " << cfg.report.truth_gamma_rel_tol << "\n";
    for (const auto& r : compare_to_truth(truth, found, cfg.report.truth_E_tol, cfg.report.truth_gamma_rel_tol)) {
      ok = ok && r.pass;
      txt << "  " << (r.pass ? "PASS" : "FAIL") << "  l=" << r.truth.l << "  truth " << fmt_double(r.truth.E_r) << " / "
          << fmt_double(r.truth.Gamma);
      if (r.found)
        txt << "  nearest " << fmt_double(r.match.E_r) << " / " << fmt_double(r.match.Gamma);
      else
        txt << "  nearest none";
      txt << "\n";
      nlohmann::json row = {{"l", r.truth.l}, {"truth_E_r", r.truth.E_r}, {"truth_Gamma", r.truth.Gamma},
                            {"found", r.found}, {"pass", r.pass}};
      if (r.found) {
        row["E_r"] = r.match.E_r;
        row["Gamma"] = r.match.Gamma;
      }
      rows.push_back(row);
    }
  }
  j["truth"] = rows;
  j["all_pass"] = ok;
  write_text(out_path(cfg, files::summary_txt).string(), txt.str());
  write_text(out_path(cfg, files::summary_json).string(), j.dump(2) + "\n");
  return ok;
}

int run_cli(int argc, char** argv) {
  CLI::App app{"Jost-function fits of cross-section data"};
  app.require_subcommand(1);
  std::string config_path;
  std::string out_dir;
  std::string model;
  std::uint64_t seed = 0;
  app.add_option("--config", config_path, "TOML run configuration")->required();
  auto* seed_opt = app.add_option("--seed", seed, "override fit.seed");
  app.add_option("--out", out_dir, "output directory");
  app.add_option("--model", model, "model override")->check(CLI::IsMember({"jost", "rmatrix", "jost_taylor"}));
  for (const char* name : {"generate", "fit", "rfit", "poles", "report", "all"}) app.add_subcommand(name);
  app.get_subcommand("rfit")->description("fit with the R-matrix model");
  app.get_subcommand("all")->description("generate, fit, poles, report");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitConfig;
  }
  const std::string cmd = app.get_subcommands().front()->get_name();

  try {
    RunConfig cfg = load_config(config_path);
    if (!out_dir.empty()) cfg.out_dir = fs::absolute(out_dir);
    if (*seed_opt) cfg.seed = seed;
    if (!model.empty()) cfg.model = model_kind_from_string(model);
    if (cmd == "rfit") cfg.model = ModelKind::RMatrix;
    cfg.validate();

    int code = kExitOk;
    if (cmd == "generate" || cmd == "all") {
      cmd_generate(cfg);
      std::cout << "dataset: " << out_path(cfg, files::dataset).string() << "\n";
    }
    if (cmd == "fit" || cmd == "rfit" || cmd == "all") {
      const FitOutcome f = cmd_fit(cfg);
      std::cout << "fit (" << to_string(cfg.model) << "): chi2 " << f.result.chi2 << " after "
                << f.result.n_evaluations << " evaluations" << (f.result.converged ? "" : ", not converged")
                << (f.result.admissible ? "" : ", no causal start") << "\n";
      if (!f.result.converged) code = kExitNonConverged;
    }
    if (cmd == "poles" || cmd == "all") {
      const auto found = cmd_poles(cfg);
      std::cout << "poles: " << found.size() << " found\n";
      if (!cfg.exact_regions.empty()) cmd_exact_poles(cfg);
    }
    if (cmd == "report" || cmd == "all") {
      const bool ok = cmd_report(cfg);
      std::cout << "report: " << out_path(cfg, files::summary_txt).string()
                << (cfg.report.ground_truth.empty() ? "" : ok ? " (truth rows pass)" : " (truth rows fail)") << "\n";
    }
    return code;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const DomainError& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return kExitNumerical;
  } catch (const NumericalError& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return kExitNumerical;
  }
}

}  // namespace jostfit
