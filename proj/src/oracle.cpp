#include "jostfit/oracle.hpp"

#include <array>
#include <algorithm>
#include <boost/numeric/odeint.hpp>
#include <cmath>
#include <numbers>
#include <sstream>

#include "jostfit/coulomb.hpp"
#include "jostfit/io.hpp"
#include "json.hpp"

namespace jostfit {
namespace {

using State = std::array<double, 4>;  // Re u, Im u, Re du/dx, Im du/dx

struct RadialSystem {
  double L, strength, z;
  Complex k2, e_it, e_2it;
  long* calls;

  void operator()(const State& y, State& dy, double x) const {
    ++*calls;
    const Complex r = x * e_it;
    const Complex q = L / (r * r) + strength * r * r * std::exp(-r) + z / r - k2;
    const Complex acc = e_2it * q * Complex(y[0], y[1]);
    dy = {y[2], y[3], acc.real(), acc.imag()};
  }
};

double state_norm(const State& y) { return std::sqrt(y[0] * y[0] + y[1] * y[1] + y[2] * y[2] + y[3] * y[3]); }

double odd_double_factorial(int l) {
  double p = 1;
  for (int j = 3; j <= 2 * l + 1; j += 2) p *= j;
  return p;
}

}  // namespace

void IntegrationSettings::validate() const {
  if (!(r_min > 0 && r_min < r_max)) throw ConfigError("IntegrationSettings: need 0 < r_min < r_max");
  if (!(tolerance > 0)) throw ConfigError("IntegrationSettings: tolerance must be positive");
  if (!(std::abs(rotation_theta) < std::numbers::pi / 2))
    throw ConfigError("IntegrationSettings: rotation_theta must lie in (-pi/2, pi/2)");
  if (max_steps <= 0) throw ConfigError("IntegrationSettings: max_steps must be positive");
}

void CrossSectionDataset::validate() const {
  for (size_t i = 0; i < points.size(); ++i) {
    const auto& p = points[i];
    if (!(p.E > 0 && std::isfinite(p.E))) throw ConfigError("dataset: energies must be positive");
    if (!(p.sigma >= 0)) throw ConfigError("dataset: sigma must be nonnegative");
    if (!(p.delta > 0)) throw ConfigError("dataset: delta must be positive");
  }
  std::vector<double> e;
  for (const auto& p : points) e.push_back(p.E);
  std::sort(e.begin(), e.end());
  if (std::adjacent_find(e.begin(), e.end()) != e.end()) throw ConfigError("dataset: duplicate energy");
}

double potential_value(const PotentialSpec& spec, double r) {
  if (!(r > 0)) throw DomainError("potential_value: r must be positive");
  const double pre = spec.hbar * spec.hbar / (2 * spec.mu);
  return pre * (spec.strength * r * r * std::exp(-r) + spec.coulomb_z / r);
}

JostPair solve_jost(const PotentialSpec& spec, int l, Complex E, const IntegrationSettings& settings,
                    SheetSelector sheet) {
  namespace odeint = boost::numeric::odeint;
  settings.validate();
  if (l < 0) throw DomainError("solve_jost: negative l");
  const Kinematics kin = make_kinematics(E, spec.mu_eff(), spec.coulomb_z, sheet);
  const Complex k = kin.k;
  const Complex i(0, 1);
  const Complex e_it = std::exp(i * settings.rotation_theta);
  long calls = 0;
  RadialSystem sys{double(l) * (l + 1), spec.strength, spec.coulomb_z, k * k, e_it, e_it * e_it, &calls};

  // phi ~ (kr)^{l+1}/(2l+1)!! (1 + c1 r + c2 r^2)
  const Complex r0 = settings.r_min * e_it;
  const double z = spec.coulomb_z;
  const Complex c1 = z / (2.0 * (l + 1));
  const Complex c2 = (z * c1 - k * k) / (2.0 * (2 * l + 3));
  const Complex norm0 = int_pow(k, l + 1) / odd_double_factorial(l);
  const Complex rl = int_pow(r0, l);
  const Complex u0 = norm0 * rl * r0 * (1.0 + c1 * r0 + c2 * r0 * r0);
  const Complex du0 = norm0 * (double(l + 1) * rl * (1.0 + c1 * r0 + c2 * r0 * r0) + rl * r0 * (c1 + 2.0 * c2 * r0));
  const Complex w0 = e_it * du0;
  State y = {u0.real(), u0.imag(), w0.real(), w0.imag()};
  double log_scale = 0;
  {
    const double n = state_norm(y);
    for (double& v : y) v /= n;
    log_scale += std::log(n);
  }

  // local error held at tolerance / 10 so the accumulated error stays near tolerance
  auto stepper = odeint::make_controlled<odeint::runge_kutta_fehlberg78<State>>(settings.tolerance * 1e-4,
                                                                                settings.tolerance * 0.1);
  double x = settings.r_min;
  double dt = settings.r_min * 0.1;
  while (x < settings.r_max) {
    const double x_next = std::min(settings.r_max, std::min(2 * x, x + 1.0));
    odeint::integrate_adaptive(stepper, sys, y, x, x_next, dt);
    x = x_next;
    const double n = state_norm(y);
    if (!std::isfinite(n) || n == 0) throw NumericalError("solve_jost: integration produced a non-finite state");
    for (double& v : y) v /= n;
    log_scale += std::log(n);
    if (calls > settings.max_steps * 13) throw NumericalError("solve_jost: step budget exhausted (stiff integrand?)");
  }

  const Complex R = settings.r_max * e_it;
  const Complex u(y[0], y[1]);
  const Complex du = Complex(y[2], y[3]) / e_it;
  const Complex ln_2rho = std::log(2.0 * settings.r_max) + i * settings.rotation_theta + kin.ln_k;
  CoulombH hp, hm;
  try {
    hp = coulomb_H_asymptotic(l, kin.eta, k * R, ln_2rho, HSign::Plus);
    hm = coulomb_H_asymptotic(l, kin.eta, k * R, ln_2rho, HSign::Minus);
  } catch (const NumericalError&) {
    throw NumericalError("solve_jost: r_max too small for the asymptotic matching (|k r_max| too small)");
  }
  const Complex dhp = k * hp.dH, dhm = k * hm.dH;
  const Complex scale = std::exp(Complex(log_scale));
  const Complex a = (u * dhp - du * hp.H) / (i * k) * scale;
  const Complex b = (hm.H * du - dhm * u) / (i * k) * scale;
  const Complex sigma = coulomb_phase(l, kin.eta);
  return {a * std::exp(-i * sigma), b * std::exp(i * sigma)};
}

Complex s_matrix_exact(const PotentialSpec& spec, int l, Complex E, const IntegrationSettings& settings,
                       SheetSelector sheet) {
  const JostPair f = solve_jost(spec, l, E, settings, sheet);
  if (f.f_in == Complex(0) || std::abs(f.f_in) < 1e-300 * std::abs(f.f_out)) throw PoleError("s_matrix_exact: f_in = 0");
  return f.f_out / f.f_in;
}

CrossSections cross_sections_exact(const PotentialSpec& spec, double E, int l_max,
                                   const IntegrationSettings& settings) {
  if (!(E > 0)) throw DomainError("cross_sections_exact: E must be positive");
  const double k = std::sqrt(2 * spec.mu_eff() * E);
  CrossSections out;
  for (int l = 0; l <= l_max; ++l) {
    out.sigma_l.push_back(partial_sigma(l, k, s_matrix_exact(spec, l, Complex(E), settings)));
    out.total += out.sigma_l.back();
  }
  return out;
}

CrossSectionDataset generate_dataset(const PotentialSpec& spec, double E_min, double E_max, int n_points, int l_max,
                                     const DeltaPolicy& delta, const IntegrationSettings& settings) {
  if (!(E_min > 0 && E_min < E_max)) throw ConfigError("generate_dataset: need 0 < E_min < E_max");
  if (n_points < 2) throw ConfigError("generate_dataset: need at least 2 points");
  if (!(delta.value > 0)) throw ConfigError("generate_dataset: delta must be positive");
  CrossSectionDataset ds;
  ds.l_max = l_max;
  for (int j = 0; j < n_points; ++j) {
    const double E = j == n_points - 1 ? E_max : E_min + (E_max - E_min) * j / (n_points - 1);
    const CrossSections cs = cross_sections_exact(spec, E, l_max, settings);
    const double d = delta.kind == DeltaPolicy::Kind::Constant ? delta.value : delta.value * cs.total;
    ds.points.push_back({E, cs.total, d > 0 ? d : delta.value});
  }
  std::ostringstream os;
  os << "oracle: strength=" << spec.strength << " coulomb_z=" << spec.coulomb_z << " mu=" << spec.mu
     << " hbar=" << spec.hbar << " r_max=" << settings.r_max << " tol=" << settings.tolerance;
  ds.provenance = os.str();
  return ds;
}

std::vector<Resonance> exact_resonances(const PotentialSpec& spec, int l, const SearchRegion& region,
                                        const IntegrationSettings& settings, const ContourOptions& options) {
  if (region.contains(Complex(0))) throw ConfigError("exact_resonances: region contains E = 0");
  const ComplexFn f = [&](Complex E) { return solve_jost(spec, l, E, settings, region.sheet).f_in; };
  return zeros_to_resonances(l, find_zeros(f, region, options), region.sheet);
}

void write_dataset_csv(const std::string& path, const CrossSectionDataset& ds) {
  std::ostringstream os;
  os << "E,sigma_total,delta\n";
  for (const auto& p : ds.points) os << fmt_double(p.E) << ',' << fmt_double(p.sigma) << ',' << fmt_double(p.delta) << '\n';
  write_text(path, os.str());
}

CrossSectionDataset read_dataset_csv(const std::string& path, int l_max) {
  const CsvTable t = read_csv(path);
  if (t.header != std::vector<std::string>{"E", "sigma_total", "delta"})
    throw ConfigError(path + ": expected header E,sigma_total,delta");
  CrossSectionDataset ds;
  ds.l_max = l_max;
  ds.provenance = "read from " + path;
  for (const auto& row : t.rows) {
    if (row.size() != 3) throw ConfigError(path + ": expected 3 columns");
    ds.points.push_back({parse_double(row[0]), parse_double(row[1]), parse_double(row[2])});
  }
  ds.validate();
  return ds;
}

std::string dataset_metadata_json(const CrossSectionDataset& ds, const PotentialSpec& spec, const DeltaPolicy& delta) {
  nlohmann::json j;
  j["provenance"] = ds.provenance;
  j["l_max"] = ds.l_max;
  j["n_points"] = ds.points.size();
  if (!ds.points.empty()) {
    j["E_min"] = ds.points.front().E;
    j["E_max"] = ds.points.back().E;
  }
  j["potential"] = {{"strength", spec.strength}, {"coulomb_z", spec.coulomb_z}, {"mu", spec.mu}, {"hbar", spec.hbar}};
  j["delta_policy"] = {{"kind", delta.kind == DeltaPolicy::Kind::Constant ? "constant" : "relative"},
                       {"value", delta.value}};
  return j.dump(2) + "\n";
}

}  // namespace jostfit
