#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "jostfit/jostmodel.hpp"
#include "jostfit/oracle.hpp"
#include "jostfit/rmatrix.hpp"

namespace jostfit {

enum class ModelKind { Jost, RMatrix, JostTaylor };

std::string to_string(ModelKind m);
ModelKind model_kind_from_string(const std::string& s);

enum class ScalePolicy { Unit, PolyMagnitude };

// Dataset plus the fixed part of the model. Free parameters are laid out per l:
//   jost:        alpha_0..alpha_N, beta_0..beta_N
//   jost_taylor: a_0..a_N, b_0..b_N
//   rmatrix:     gamma_1..gamma_N
struct FitProblem {
  CrossSectionDataset dataset;
  ModelKind model = ModelKind::Jost;
  int l_max = 2;
  double mu = 1, z = -2;
  std::vector<PolyBasis> bases;       // jost
  std::vector<double> taylor_E0;      // jost_taylor, per l
  int taylor_order = 3;               // jost_taylor
  std::vector<RParams> rtemplates;    // rmatrix: energies, a, B_R fixed

  // per l, per data point
  struct PointCache {
    double k = 0, sigma_c = 0, M = 0, D2 = 0;
    Eigen::VectorXd basis;  // P_n(E_i) or (E_i - E0)^n
    ChannelH h;             // rmatrix only
  };
  std::vector<std::vector<PointCache>> cache;
  std::vector<int> offsets;  // first parameter index per l

  int n_params() const { return offsets.back(); }
  int params_per_l(int l) const { return offsets[l + 1] - offsets[l]; }
};

FitProblem make_jost_problem(CrossSectionDataset ds, std::vector<PolyBasis> bases, double mu, double z);
FitProblem make_taylor_problem(CrossSectionDataset ds, std::vector<double> E0, int order, double mu, double z);
FitProblem make_rmatrix_problem(CrossSectionDataset ds, std::vector<RParams> templates, double mu, double z);

// Model sigma_total at the dataset energies; a model pole at a data energy yields NaN for that point.
Eigen::VectorXd model_sigma(const FitProblem& problem, const Eigen::VectorXd& params);
Eigen::VectorXd model_sigma_partial(const FitProblem& problem, const Eigen::VectorXd& params, int l);

inline constexpr double kPolePenalty = 1e12;

// (sigma_i - sigma_fit_i) / delta_i; a pole point contributes sqrt(kPolePenalty).
Eigen::VectorXd residuals(const FitProblem& problem, const Eigen::VectorXd& params);
double chi2(const FitProblem& problem, const Eigen::VectorXd& params);

std::vector<ABParams> unpack_jost(const FitProblem& problem, const Eigen::VectorXd& params);
std::vector<TaylorParams> unpack_taylor(const FitProblem& problem, const Eigen::VectorXd& params);
std::vector<RParams> unpack_rmatrix(const FitProblem& problem, const Eigen::VectorXd& params);
Eigen::VectorXd pack_jost(const std::vector<ABParams>& params);
Eigen::VectorXd pack_rmatrix(const std::vector<RParams>& params);

// Typical magnitude of each parameter, from P_n (or H) magnitudes over the data range.
Eigen::VectorXd parameter_scales(const FitProblem& problem, ScalePolicy policy = ScalePolicy::PolyMagnitude);

struct FitOptions {
  long max_evaluations = 40000;  // simplex budget per start
  double simplex_tol = 1e-10;
  int restarts = 2;              // simplex restarts from the current best vertex
  bool polish = true;            // Levenberg-Marquardt after the simplex
  int lm_max_iterations = 1000;
  double lm_tol = 1e-6;           // relative chi2 decrease over 10 accepted steps
};

struct StartRecord {
  double initial_chi2 = 0;
  double chi2 = 0;
  long n_evaluations = 0;
  bool converged = false;
  bool admissible = true;
};

struct FitResult {
  Eigen::VectorXd params;
  double chi2 = 0;
  double initial_chi2 = 0;
  long n_evaluations = 0;
  bool converged = false;
  bool admissible = true;            // passed the multistart filter, if any
  std::vector<double> trace;        // best chi2 after each accepted iteration
  std::vector<StartRecord> history;  // one per start
};

using ResidualFn = std::function<Eigen::VectorXd(const Eigen::VectorXd& params)>;

// Minimizes |r(x)|^2: simplex passes in scaled variables, then a Levenberg-Marquardt polish.
FitResult minimize_residuals(const ResidualFn& r, const Eigen::VectorXd& start, const FitOptions& options = {},
                             const Eigen::VectorXd& scales = Eigen::VectorXd());

FitResult minimize(const FitProblem& problem, const Eigen::VectorXd& start, const FitOptions& options = {},
                   const Eigen::VectorXd& scales = Eigen::VectorXd());

// Random start uniform in scaled [-1, 1].
Eigen::VectorXd random_start(const Eigen::VectorXd& scales, std::mt19937_64& rng);

using StartFilter = std::function<bool(const Eigen::VectorXd& params)>;

// Best of n_starts minimizations; starts drawn from a generator seeded with seed.
// If first_start is non-empty it replaces the first random start. With a filter, the best
// admissible result wins; if no start passes, the best overall is returned flagged.
FitResult multistart(const FitProblem& problem, int n_starts, ScalePolicy policy, std::uint64_t seed,
                     const FitOptions& options = {}, const Eigen::VectorXd& first_start = Eigen::VectorXd(),
                     const StartFilter& admissible = {});

struct ParamRow {
  int l = 0;
  int n = 0;
  double E = 0;           // E_n (NaN for the n = 0 row of the jost model)
  std::string label;
  std::vector<double> values;  // jost: {alpha, beta}; rmatrix: {gamma}; taylor: {a, b}
};

struct ParamTable {
  std::vector<std::string> header;
  std::vector<ParamRow> rows;

  std::string to_text() const;
  std::string to_csv() const;
};

ParamTable param_report(const FitResult& result, const FitProblem& problem);

std::string fit_result_json(const FitResult& result, const FitProblem& problem);

}  // namespace jostfit
