#include "jostfit/jostmodel.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "jostfit/coulomb.hpp"
#include "jostfit/rmatrix.hpp"

namespace jostfit {

std::string to_string(BasisLabel label) { return label == BasisLabel::Resonance ? "resonance" : "background"; }

BasisLabel basis_label_from_string(const std::string& s) {
  if (s == "resonance") return BasisLabel::Resonance;
  if (s == "background") return BasisLabel::Background;
  throw ConfigError("unknown basis label '" + s + "'");
}

PolyBasis::PolyBasis(std::vector<double> energies, std::vector<BasisLabel> labels)
    : energies_(std::move(energies)), labels_(std::move(labels)) {
  if (labels_.empty()) labels_.assign(energies_.size(), BasisLabel::Resonance);
  if (labels_.size() != energies_.size()) throw ConfigError("PolyBasis: labels and energies differ in length");
  for (size_t i = 0; i < energies_.size(); ++i) {
    if (!std::isfinite(energies_[i])) throw ConfigError("PolyBasis: non-finite energy");
    for (size_t j = 0; j < i; ++j)
      if (energies_[i] == energies_[j]) {
        std::ostringstream os;
        os << "PolyBasis: duplicate energy " << energies_[i];
        throw ConfigError(os.str());
      }
  }
}

Complex poly_P(const PolyBasis& basis, int n, Complex E) {
  const auto& e = basis.energies();
  if (n < 0 || n > basis.N()) throw DomainError("poly_P: index out of range");
  Complex p(1);
  for (int m = 0; m < basis.N(); ++m)
    if (n == 0 || m != n - 1) p *= e[m] - E;
  return p;
}

ABParams::ABParams(int l_, PolyBasis basis_, Eigen::VectorXd alpha_, Eigen::VectorXd beta_)
    : l(l_), basis(std::move(basis_)), alpha(std::move(alpha_)), beta(std::move(beta_)) {
  if (l < 0) throw ConfigError("ABParams: negative l");
  if (alpha.size() != basis.N() + 1 || beta.size() != basis.N() + 1)
    throw ConfigError("ABParams: alpha and beta need N+1 entries");
  if (!alpha.allFinite() || !beta.allFinite()) throw ConfigError("ABParams: non-finite coefficient");
}

TaylorParams::TaylorParams(int l_, double E0_, Eigen::VectorXd a_, Eigen::VectorXd b_)
    : l(l_), E0(E0_), a(std::move(a_)), b(std::move(b_)) {
  if (a.size() == 0 || a.size() != b.size()) throw ConfigError("TaylorParams: a and b need N+1 entries");
}

ExplicitFactors explicit_factors(const Kinematics& kin, int l) {
  if (kin.k == Complex(0)) throw DomainError("threshold k = 0");
  ExplicitFactors x;
  x.k = kin.k;
  x.sigma = coulomb_phase(l, kin.eta);
  x.D = D_factor(l, kin.eta, kin.k);
  x.M = M_factor(kin);
  x.k_pow_l = int_pow(kin.k, l);
  return x;
}

AB eval_A_B(const ABParams& params, Complex E) {
  AB out{0, 0};
  for (int n = 0; n <= params.basis.N(); ++n) {
    const Complex p = poly_P(params.basis, n, E);
    out.A += params.alpha[n] * p;
    out.B += params.beta[n] * p;
  }
  return out;
}

AB eval_A_B_taylor(const TaylorParams& params, Complex E) {
  AB out{0, 0};
  const Complex t = E - params.E0;
  for (int n = params.order(); n >= 0; --n) {
    out.A = out.A * t + params.a[n];
    out.B = out.B * t + params.b[n];
  }
  return out;
}

JostPair jost_from_AB(const ExplicitFactors& x, Complex A, Complex B) {
  const Complex i(0, 1);
  const Complex kd = x.k / x.D * A;
  const Complex e = std::exp(-i * x.sigma);
  return {e * x.k_pow_l * (kd - (x.M + i) * x.D * B), x.k_pow_l * (kd - (x.M - i) * x.D * B) / e};
}

JostPair jost_from_AB(const Kinematics& kin, int l, Complex A, Complex B) {
  return jost_from_AB(explicit_factors(kin, l), A, B);
}

Complex s_matrix_from_AB(const ExplicitFactors& x, Complex A, Complex B) {
  const Complex i(0, 1);
  const Complex d2b = x.D * x.D * B;
  const Complex den = x.k * A - (x.M + i) * d2b;
  if (den == Complex(0)) throw PoleError("s_matrix_model: f_in = 0");
  return std::exp(2.0 * i * x.sigma) * (x.k * A - (x.M - i) * d2b) / den;
}

Complex s_matrix_model(const Kinematics& kin, const ABParams& params) {
  const AB ab = eval_A_B(params, kin.E);
  return s_matrix_from_AB(explicit_factors(kin, params.l), ab.A, ab.B);
}

Complex s_matrix_model(const Kinematics& kin, const TaylorParams& params) {
  const AB ab = eval_A_B_taylor(params, kin.E);
  return s_matrix_from_AB(explicit_factors(kin, params.l), ab.A, ab.B);
}

double partial_sigma(int l, double k, Complex S) {
  return std::numbers::pi / (k * k) * (2 * l + 1) * std::norm(S - 1.0);
}

namespace {

template <typename P>
CrossSections sigma_any(const std::vector<P>& params, double E, double mu, double z) {
  if (!(E > 0)) throw DomainError("sigma_model: E must be positive");
  const Kinematics kin = make_kinematics(Complex(E), mu, z);
  CrossSections out;
  for (size_t l = 0; l < params.size(); ++l) {
    if (params[l].l != int(l)) throw ConfigError("sigma_model: params must be ordered by l");
    out.sigma_l.push_back(partial_sigma(int(l), kin.k.real(), s_matrix_model(kin, params[l])));
    out.total += out.sigma_l.back();
  }
  return out;
}

}  // namespace

CrossSections sigma_model(const std::vector<ABParams>& params, double E, double mu, double z) {
  return sigma_any(params, E, mu, z);
}

CrossSections sigma_model(const std::vector<TaylorParams>& params, double E, double mu, double z) {
  return sigma_any(params, E, mu, z);
}

AB AB_from_rmatrix(const RParams& rp, const Kinematics& kin) {
  const HumbletTilde h = humblet_tilde(rp.l, kin, rp.a);
  const Complex R = r_matrix_value(rp, kin.E);
  return {h.Gt - (rp.a * h.dGt - rp.B_R * h.Gt) * R, -h.Ft + (rp.a * h.dFt - rp.B_R * h.Ft) * R};
}

}  // namespace jostfit

namespace jostfit {
namespace {

std::vector<double> to_std(const Eigen::VectorXd& v) { return std::vector<double>(v.data(), v.data() + v.size()); }

Eigen::VectorXd to_eigen(const std::vector<double>& v) {
  return Eigen::Map<const Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size()));
}

}  // namespace

nlohmann::json to_json(const ABParams& p) {
  std::vector<std::string> labels;
  for (auto l : p.basis.labels()) labels.push_back(to_string(l));
  return {{"l", p.l},
          {"N", p.basis.N()},
          {"energies", p.basis.energies()},
          {"labels", labels},
          {"alpha", to_std(p.alpha)},
          {"beta", to_std(p.beta)}};
}

ABParams ab_params_from_json(const nlohmann::json& j) {
  try {
    std::vector<BasisLabel> labels;
    for (const auto& s : j.at("labels")) labels.push_back(basis_label_from_string(s.get<std::string>()));
    PolyBasis basis(j.at("energies").get<std::vector<double>>(), labels);
    if (j.contains("N") && j.at("N").get<int>() != basis.N()) throw ConfigError("ABParams json: N mismatch");
    return ABParams(j.at("l").get<int>(), basis, to_eigen(j.at("alpha").get<std::vector<double>>()),
                    to_eigen(j.at("beta").get<std::vector<double>>()));
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("ABParams json: ") + e.what());
  }
}

nlohmann::json to_json(const TaylorParams& p) {
  return {{"l", p.l}, {"E0", p.E0}, {"N", p.order()}, {"a", to_std(p.a)}, {"b", to_std(p.b)}};
}

TaylorParams taylor_params_from_json(const nlohmann::json& j) {
  try {
    return TaylorParams(j.at("l").get<int>(), j.at("E0").get<double>(), to_eigen(j.at("a").get<std::vector<double>>()),
                        to_eigen(j.at("b").get<std::vector<double>>()));
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("TaylorParams json: ") + e.what());
  }
}

}  // namespace jostfit
