#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "jostfit/config.hpp"

namespace jostfit {

enum ExitCode { kExitOk = 0, kExitConfig = 2, kExitNumerical = 3, kExitNonConverged = 4 };

// Output file names inside RunConfig::out_dir.
namespace files {
inline constexpr const char* dataset = "dataset.csv";
inline constexpr const char* dataset_meta = "dataset_meta.json";
inline constexpr const char* fit_result = "fit_result.json";
inline constexpr const char* params_csv = "params.csv";
inline constexpr const char* params_txt = "params.txt";
inline constexpr const char* resonances_csv = "resonances.csv";
inline constexpr const char* resonances_json = "resonances.json";
inline constexpr const char* exact_resonances_csv = "exact_resonances.csv";
inline constexpr const char* summary_txt = "summary.txt";
inline constexpr const char* summary_json = "summary.json";
}  // namespace files

// Fitted model restored from fit_result.json.
struct FittedModel {
  ModelKind model = ModelKind::Jost;
  std::vector<ABParams> jost;
  std::vector<TaylorParams> taylor;
  std::vector<RParams> rmatrix;
  double chi2 = 0;
  bool converged = false;

  int l_max() const;
  CrossSections sigma(double E, double mu, double z) const;
  std::vector<Resonance> search(int l, double mu, double z, const SearchRegion& region) const;
};

FittedModel read_fit_result(const std::filesystem::path& path);

struct FitOutcome {
  FitResult result;
  FitProblem problem;
};

FitProblem build_problem(const RunConfig& cfg, const CrossSectionDataset& ds);

// Rejects fits whose f_in has zeros on the physical sheet inside the configured regions (jost models).
StartFilter causal_filter(const RunConfig& cfg, const FitProblem& problem);

void cmd_generate(const RunConfig& cfg);
FitOutcome cmd_fit(const RunConfig& cfg);
std::vector<Resonance> cmd_poles(const RunConfig& cfg);
void cmd_exact_poles(const RunConfig& cfg);

struct TruthRow {
  Resonance truth;
  bool found = false;
  Resonance match;
  bool pass = false;
};

std::vector<TruthRow> compare_to_truth(const std::vector<Resonance>& truth, const std::vector<Resonance>& found,
                                       double E_tol, double gamma_rel_tol);

// Figure curves and the summary; returns false if any ground-truth row failed.
bool cmd_report(const RunConfig& cfg);

// Command-line entry point; returns the process exit code.
int run_cli(int argc, char** argv);

}  // namespace jostfit
