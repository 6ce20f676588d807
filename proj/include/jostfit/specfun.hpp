#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <numbers>

#include "jostfit/types.hpp"

namespace jostfit {

struct SheetSelector {
  int k_branch = 1;    // +1 physical (Im k >= 0), -1 resonance sheet
  int log_branch = 0;  // winding added to ln(eta)

  static SheetSelector physical() { return {1, 0}; }
  static SheetSelector resonance() { return {-1, 0}; }
  bool operator==(const SheetSelector&) const = default;
};

template <typename Scalar>
struct KinematicsT {
  using C = std::complex<Scalar>;
  C E;
  Scalar mu = 1;
  Scalar z = 0;  // 2 k eta
  C k;
  C eta;
  C ln_k;    // principal Log k
  C ln_eta;  // ln|z/2| - Log k + 2 pi i log_branch
  SheetSelector sheet;
};

using Kinematics = KinematicsT<double>;

namespace detail {

// B_{2n} for n = 1..10
template <typename Scalar>
constexpr std::array<Scalar, 10> bernoulli_even() {
  return {Scalar(1) / 6,      Scalar(-1) / 30,       Scalar(1) / 42,
          Scalar(-1) / 30,    Scalar(5) / 66,        Scalar(-691) / 2730,
          Scalar(7) / 6,      Scalar(-3617) / 510,   Scalar(43867) / 798,
          Scalar(-174611) / 330};
}

template <typename Scalar>
bool is_gamma_pole(const std::complex<Scalar>& z) {
  return z.imag() == 0 && z.real() <= 0 && z.real() == std::round(z.real());
}

template <typename Scalar>
constexpr Scalar stirling_shift() {
  return 16;
}

}  // namespace detail

// Principal branch of ln Gamma(z): upward recurrence to Re z >= 16, then Stirling.
template <typename Scalar>
std::complex<Scalar> ln_gamma(std::complex<Scalar> z) {
  using C = std::complex<Scalar>;
  if (detail::is_gamma_pole(z)) throw DomainError("ln_gamma: pole at nonpositive integer");
  C shift_sum(0);
  while (z.real() < detail::stirling_shift<Scalar>()) {
    shift_sum += std::log(z);
    z += Scalar(1);
  }
  const auto b = detail::bernoulli_even<Scalar>();
  const C w1 = Scalar(1) / z;
  const C w2 = w1 * w1;
  C series(0);
  C wp = w1;
  for (int n = 1; n <= 10; ++n) {
    series += b[n - 1] / Scalar(2 * n * (2 * n - 1)) * wp;
    wp *= w2;
  }
  const Scalar half_ln_2pi = std::log(2 * std::numbers::pi_v<Scalar>) / 2;
  return (z - Scalar(0.5)) * std::log(z) - z + half_ln_2pi + series - shift_sum;
}

template <typename Scalar>
std::complex<Scalar> digamma(std::complex<Scalar> z) {
  using C = std::complex<Scalar>;
  if (detail::is_gamma_pole(z)) throw DomainError("digamma: pole at nonpositive integer");
  C shift_sum(0);
  while (z.real() < detail::stirling_shift<Scalar>()) {
    shift_sum += Scalar(1) / z;
    z += Scalar(1);
  }
  const auto b = detail::bernoulli_even<Scalar>();
  const C w1 = Scalar(1) / z;
  const C w2 = w1 * w1;
  C series(0);
  C wp = w2;
  for (int n = 1; n <= 10; ++n) {
    series += b[n - 1] / Scalar(2 * n) * wp;
    wp *= w2;
  }
  return std::log(z) - Scalar(0.5) * w1 - series - shift_sum;
}

// sigma_l = [lnGamma(l+1+i eta) - lnGamma(l+1-i eta)] / 2i
template <typename Scalar>
std::complex<Scalar> coulomb_phase(int l, const std::complex<Scalar>& eta) {
  using C = std::complex<Scalar>;
  const C i(0, 1);
  const C lp = ln_gamma(C(l + 1) + i * eta);
  const C lm = ln_gamma(C(l + 1) - i * eta);
  return (lp - lm) / (Scalar(2) * i);
}

// C_l(eta) = e^{-pi eta/2} / l! * exp{[lnGamma(l+1+i eta) + lnGamma(l+1-i eta)]/2}
template <typename Scalar>
std::complex<Scalar> barrier_C(int l, const std::complex<Scalar>& eta) {
  using C = std::complex<Scalar>;
  if (eta == C(0)) return C(1);
  const C i(0, 1);
  Scalar lfact = 0;
  for (int j = 2; j <= l; ++j) lfact += std::log(Scalar(j));
  const C s = ln_gamma(C(l + 1) + i * eta) + ln_gamma(C(l + 1) - i * eta);
  return std::exp(-std::numbers::pi_v<Scalar> * eta / Scalar(2) + s / Scalar(2) - lfact);
}

template <typename Scalar>
std::complex<Scalar> int_pow(const std::complex<Scalar>& k, int n) {
  std::complex<Scalar> p(1);
  for (int j = 0; j < n; ++j) p *= k;
  return p;
}

template <typename Scalar>
std::complex<Scalar> D_factor(int l, const std::complex<Scalar>& eta, const std::complex<Scalar>& k) {
  return barrier_C(l, eta) * int_pow(k, l + 1);
}

// M = 2 eta h(eta) / C_0^2, h = [psi(1+i eta) + psi(1-i eta)]/2 - ln eta
template <typename Scalar>
std::complex<Scalar> M_factor(const std::complex<Scalar>& eta, const std::complex<Scalar>& ln_eta) {
  using C = std::complex<Scalar>;
  if (eta == C(0)) return C(0);
  const C i(0, 1);
  const C h = (digamma(C(1) + i * eta) + digamma(C(1) - i * eta)) / Scalar(2) - ln_eta;
  const C c0 = barrier_C(0, eta);
  return Scalar(2) * eta * h / (c0 * c0);
}

template <typename Scalar>
std::complex<Scalar> M_factor(const KinematicsT<Scalar>& kin) {
  return M_factor(kin.eta, kin.ln_eta);
}

// Root of 2 mu E with Im k >= 0 (k > 0 on the positive real axis).
template <typename Scalar>
std::complex<Scalar> physical_k(const std::complex<Scalar>& E, Scalar mu) {
  std::complex<Scalar> k = std::sqrt(Scalar(2) * mu * E);
  if (k.imag() < 0 || (k.imag() == 0 && k.real() < 0)) k = -k;
  return k;
}

template <typename Scalar>
KinematicsT<Scalar> make_kinematics(const std::complex<Scalar>& E, Scalar mu, Scalar z,
                                    SheetSelector sheet = {}) {
  using C = std::complex<Scalar>;
  if (!(mu > 0)) throw DomainError("make_kinematics: mu must be positive");
  if (sheet.k_branch != 1 && sheet.k_branch != -1)
    throw DomainError("make_kinematics: k_branch must be +1 or -1");
  if (E == C(0)) throw DomainError("make_kinematics: threshold E = 0");
  KinematicsT<Scalar> kin;
  kin.E = E;
  kin.mu = mu;
  kin.z = z;
  kin.sheet = sheet;
  kin.k = Scalar(sheet.k_branch) * physical_k(E, mu);
  kin.eta = C(z / 2) / kin.k;
  kin.ln_k = std::log(kin.k);
  const C two_pi_i(0, 2 * std::numbers::pi_v<Scalar>);
  if (z != 0)
    kin.ln_eta = std::log(std::abs(z) / Scalar(2)) - kin.ln_k + Scalar(sheet.log_branch) * two_pi_i;
  return kin;
}

}  // namespace jostfit
