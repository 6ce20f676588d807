#include "jostfit/rmatrix.hpp"

#include <cmath>

namespace jostfit {

RParams::RParams(int l_, std::vector<double> energies_, Eigen::VectorXd gammas_, double a_, double B_R_,
                 std::vector<BasisLabel> labels_)
    : l(l_), energies(std::move(energies_)), labels(std::move(labels_)), gammas(std::move(gammas_)), a(a_), B_R(B_R_) {
  if (labels.empty()) labels.assign(energies.size(), BasisLabel::Resonance);
  if (gammas.size() != N() || labels.size() != energies.size())
    throw ConfigError("RParams: energies, labels and gammas differ in length");
  if (!(a > 0)) throw ConfigError("RParams: channel radius must be positive");
}

Complex r_matrix_value(const RParams& rp, Complex E) {
  Complex R(0);
  for (int n = 0; n < rp.N(); ++n) {
    const Complex d = rp.energies[n] - E;
    if (d == Complex(0)) throw PoleError("r_matrix_value: E equals a pole energy");
    R += rp.gammas[n] * rp.gammas[n] / d;
  }
  return R;
}

ChannelH channel_H(int l, const Kinematics& kin, double a, const ContinuationSettings& settings) {
  ChannelH out;
  const Complex k = kin.k;
  if (kin.E.imag() == 0 && k.imag() == 0 && k.real() > 0) {
    out.plus = coulomb_H(l, kin.eta.real(), k.real() * a, HSign::Plus);
    out.minus = coulomb_H(l, kin.eta.real(), k.real() * a, HSign::Minus);
  } else {
    out.plus = coulomb_H_complex(l, kin, a, HSign::Plus, settings);
    out.minus = coulomb_H_complex(l, kin, a, HSign::Minus, settings);
  }
  out.plus.dH *= k;
  out.minus.dH *= k;
  return out;
}

namespace {

Complex bracket(const CoulombH& h, const RParams& rp, Complex R) {
  return h.H - (rp.a * h.dH - rp.B_R * h.H) * R;
}

}  // namespace

Complex rmatrix_denominator(const RParams& rp, const Kinematics& kin, const ContinuationSettings& settings) {
  const ChannelH h = channel_H(rp.l, kin, rp.a, settings);
  return bracket(h.plus, rp, r_matrix_value(rp, kin.E));
}

Complex s_matrix_rmatrix(const RParams& rp, const Kinematics& kin, const ContinuationSettings& settings) {
  const ChannelH h = channel_H(rp.l, kin, rp.a, settings);
  const Complex R = r_matrix_value(rp, kin.E);
  const Complex den = bracket(h.plus, rp, R);
  if (den == Complex(0)) throw PoleError("s_matrix_rmatrix: denominator vanishes");
  const Complex i(0, 1);
  return -std::exp(2.0 * i * coulomb_phase(rp.l, kin.eta)) * bracket(h.minus, rp, R) / den;
}

CrossSections sigma_rmatrix(const std::vector<RParams>& params, double E, double mu, double z) {
  if (!(E > 0)) throw DomainError("sigma_rmatrix: E must be positive");
  const Kinematics kin = make_kinematics(Complex(E), mu, z);
  CrossSections out;
  for (size_t l = 0; l < params.size(); ++l) {
    if (params[l].l != int(l)) throw ConfigError("sigma_rmatrix: params must be ordered by l");
    out.sigma_l.push_back(partial_sigma(int(l), kin.k.real(), s_matrix_rmatrix(params[l], kin)));
    out.total += out.sigma_l.back();
  }
  return out;
}

std::vector<Resonance> rmatrix_pole_search(const RParams& rp, double mu, double z, const SearchRegion& region,
                                           const ContourOptions& options) {
  const ComplexFn f = [&](Complex E) { return rmatrix_denominator(rp, make_kinematics(E, mu, z, region.sheet)); };
  SearchRegion r = region;
  r.hot_re.insert(r.hot_re.end(), rp.energies.begin(), rp.energies.end());
  return zeros_to_resonances(rp.l, find_zeros(f, r, options), region.sheet);
}

}  // namespace jostfit

namespace jostfit {

nlohmann::json to_json(const RParams& p) {
  std::vector<std::string> labels;
  for (auto l : p.labels) labels.push_back(to_string(l));
  return {{"l", p.l},
          {"energies", p.energies},
          {"labels", labels},
          {"gammas", std::vector<double>(p.gammas.data(), p.gammas.data() + p.gammas.size())},
          {"a", p.a},
          {"B_R", p.B_R}};
}

RParams rparams_from_json(const nlohmann::json& j) {
  try {
    std::vector<BasisLabel> labels;
    if (j.contains("labels"))
      for (const auto& s : j.at("labels")) labels.push_back(basis_label_from_string(s.get<std::string>()));
    const auto g = j.at("gammas").get<std::vector<double>>();
    return RParams(j.at("l").get<int>(), j.at("energies").get<std::vector<double>>(),
                   Eigen::Map<const Eigen::VectorXd>(g.data(), static_cast<Eigen::Index>(g.size())),
                   j.at("a").get<double>(), j.value("B_R", 0.0), labels);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("RParams json: ") + e.what());
  }
}

}  // namespace jostfit
