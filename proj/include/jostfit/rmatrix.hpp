#pragma once

#include <Eigen/Dense>
#include <vector>

#include "jostfit/coulomb.hpp"
#include "jostfit/jostmodel.hpp"
#include "jostfit/poles.hpp"

namespace jostfit {

struct RParams {
  int l = 0;
  std::vector<double> energies;
  std::vector<BasisLabel> labels;
  Eigen::VectorXd gammas;
  double a = 1;
  double B_R = 0;

  RParams() = default;
  RParams(int l, std::vector<double> energies, Eigen::VectorXd gammas, double a, double B_R = 0,
          std::vector<BasisLabel> labels = {});
  int N() const { return static_cast<int>(energies.size()); }
};

// sum gamma_n^2 / (E_n - E). Throws PoleError at E = E_n.
Complex r_matrix_value(const RParams& rp, Complex E);

// H(+-) and d/dr at r = a: real routine on the physical real axis, continuation otherwise.
struct ChannelH {
  CoulombH plus, minus;  // dH here is d/dr
};
ChannelH channel_H(int l, const Kinematics& kin, double a, const ContinuationSettings& settings = {});

// Denominator of S: H(+) - [a H(+)' - B_R H(+)] R.
Complex rmatrix_denominator(const RParams& rp, const Kinematics& kin, const ContinuationSettings& settings = {});

// S = -e^{2i sigma} [H(-) - (a H(-)' - B_R H(-)) R] / [H(+) - (a H(+)' - B_R H(+)) R].
Complex s_matrix_rmatrix(const RParams& rp, const Kinematics& kin, const ContinuationSettings& settings = {});

CrossSections sigma_rmatrix(const std::vector<RParams>& params, double E, double mu, double z);

std::vector<Resonance> rmatrix_pole_search(const RParams& rp, double mu, double z, const SearchRegion& region,
                                           const ContourOptions& options = {});

nlohmann::json to_json(const RParams& p);
RParams rparams_from_json(const nlohmann::json& j);

}  // namespace jostfit
