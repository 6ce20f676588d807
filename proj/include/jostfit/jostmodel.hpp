#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "jostfit/specfun.hpp"
#include "json.hpp"
#include "jostfit/types.hpp"

namespace jostfit {

enum class BasisLabel { Resonance, Background };

std::string to_string(BasisLabel label);
BasisLabel basis_label_from_string(const std::string& s);

// Pole-energy grid E_n (n = 1..N) for one partial wave.
class PolyBasis {
 public:
  PolyBasis() = default;
  explicit PolyBasis(std::vector<double> energies, std::vector<BasisLabel> labels = {});

  int N() const { return static_cast<int>(energies_.size()); }
  const std::vector<double>& energies() const { return energies_; }
  const std::vector<BasisLabel>& labels() const { return labels_; }

 private:
  std::vector<double> energies_;
  std::vector<BasisLabel> labels_;
};

// P_0 = prod (E_n - E); P_n = prod_{m != n} (E_m - E), no division.
Complex poly_P(const PolyBasis& basis, int n, Complex E);

struct ABParams {
  int l = 0;
  PolyBasis basis;
  Eigen::VectorXd alpha;  // N+1
  Eigen::VectorXd beta;   // N+1

  ABParams() = default;
  ABParams(int l, PolyBasis basis, Eigen::VectorXd alpha, Eigen::VectorXd beta);
};

struct TaylorParams {
  int l = 0;
  double E0 = 0;
  Eigen::VectorXd a;
  Eigen::VectorXd b;

  TaylorParams() = default;
  TaylorParams(int l, double E0, Eigen::VectorXd a, Eigen::VectorXd b);
  int order() const { return static_cast<int>(a.size()) - 1; }
};

struct AB {
  Complex A, B;
};

struct JostPair {
  Complex f_in, f_out;
};

// E-dependent factors of the Jost model for one (kin, l).
struct ExplicitFactors {
  Complex k, sigma, D, M, k_pow_l;
};

ExplicitFactors explicit_factors(const Kinematics& kin, int l);

AB eval_A_B(const ABParams& params, Complex E);
AB eval_A_B_taylor(const TaylorParams& params, Complex E);

JostPair jost_from_AB(const Kinematics& kin, int l, Complex A, Complex B);
JostPair jost_from_AB(const ExplicitFactors& x, Complex A, Complex B);

// S = e^{2i sigma} (X + iY)/(X - iY), X = kA - M D^2 B, Y = D^2 B. Throws PoleError when the denominator vanishes.
Complex s_matrix_from_AB(const ExplicitFactors& x, Complex A, Complex B);
Complex s_matrix_model(const Kinematics& kin, const ABParams& params);
Complex s_matrix_model(const Kinematics& kin, const TaylorParams& params);

struct CrossSections {
  std::vector<double> sigma_l;
  double total = 0;
};

// (pi/k^2)(2l+1)|S-1|^2
double partial_sigma(int l, double k, Complex S);

// params[l] for l = 0..l_max.
CrossSections sigma_model(const std::vector<ABParams>& params, double E, double mu, double z);
CrossSections sigma_model(const std::vector<TaylorParams>& params, double E, double mu, double z);

struct RParams;
// A, B generated by an R-matrix, with the common 1/Q factor set to 1.
AB AB_from_rmatrix(const RParams& rp, const Kinematics& kin);

nlohmann::json to_json(const ABParams& p);
ABParams ab_params_from_json(const nlohmann::json& j);
nlohmann::json to_json(const TaylorParams& p);
TaylorParams taylor_params_from_json(const nlohmann::json& j);

}  // namespace jostfit
