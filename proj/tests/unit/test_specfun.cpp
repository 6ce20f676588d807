#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"
#include "jostfit/coulomb.hpp"
#include "jostfit/specfun.hpp"
#include "oracle_values.hpp"

using namespace jostfit;

namespace {

double rel(Complex a, Complex b) { return std::abs(a - b) / std::max(1e-300, std::abs(b)); }

}  // namespace

TEST_CASE("ln_gamma matches the mpmath oracle") {
  CHECK(std::abs(ln_gamma(Complex(1))) < 1e-15);
  for (const auto& row : oracle::ln_gamma) {
    INFO("z = " << row.z);
    CHECK(std::abs(ln_gamma(row.z) - row.value) < 1e-13 * std::max(1.0, std::abs(row.value)));
  }
  CHECK(std::abs(ln_gamma(Complex(0.5)).real() - std::log(std::sqrt(std::numbers::pi))) < 1e-14);
}

TEST_CASE("digamma matches the mpmath oracle") {
  CHECK(std::abs(digamma(Complex(1)) + std::numbers::egamma) < 1e-15);
  for (const auto& row : oracle::digamma) {
    INFO("z = " << row.z);
    CHECK(std::abs(digamma(row.z) - row.value) < 1e-13 * std::max(1.0, std::abs(row.value)));
  }
}

TEST_CASE("gamma poles raise DomainError") {
  CHECK_THROWS_AS(ln_gamma(Complex(0)), DomainError);
  CHECK_THROWS_AS(ln_gamma(Complex(-3)), DomainError);
  CHECK_THROWS_AS(digamma(Complex(-1)), DomainError);
  CHECK_NOTHROW(ln_gamma(Complex(-3, 1e-12)));
}

TEST_CASE("recurrence and conjugation identities on a random grid") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> re(-12, 12), im(-15, 15);
  for (int n = 0; n < 400; ++n) {
    const Complex z(re(rng), im(rng));
    if (std::abs(z.imag()) < 1e-3) continue;
    // ln Gamma(z+1) - ln Gamma(z) - ln z is a multiple of 2 pi i on the principal branch
    const Complex d = ln_gamma(z + 1.0) - ln_gamma(z) - std::log(z);
    const double turns = d.imag() / (2 * std::numbers::pi);
    CHECK(std::abs(d.real()) < 1e-12 * std::max(1.0, std::abs(ln_gamma(z))));
    CHECK(std::abs(turns - std::round(turns)) < 1e-12 * std::max(1.0, std::abs(ln_gamma(z))));
    if (z.real() > 0) CHECK(std::abs(d) < 1e-12 * std::max(1.0, std::abs(ln_gamma(z))));
    CHECK(std::abs(digamma(z + 1.0) - digamma(z) - 1.0 / z) < 1e-12 * std::max(1.0, std::abs(1.0 / z)));
    CHECK(std::abs(ln_gamma(std::conj(z)) - std::conj(ln_gamma(z))) < 1e-12 * std::max(1.0, std::abs(ln_gamma(z))));
    CHECK(std::abs(digamma(std::conj(z)) - std::conj(digamma(z))) < 1e-12 * std::max(1.0, std::abs(digamma(z))));
  }
}

TEST_CASE("long double instantiation agrees with double") {
  using CL = std::complex<long double>;
  for (const auto& row : oracle::ln_gamma) {
    const CL v = ln_gamma(CL(row.z.real(), row.z.imag()));
    CHECK(std::abs(Complex(double(v.real()), double(v.imag())) - row.value) < 1e-14 * std::max(1.0, std::abs(row.value)));
  }
}

TEST_CASE("digamma symmetric sum is real for real eta") {
  for (double eta : {-2.0, -0.25, 0.1, 1.7}) {
    const Complex i(0, 1);
    CHECK(std::abs((digamma(1.0 + i * eta) + digamma(1.0 - i * eta)).imag()) < 1e-15);
  }
}

TEST_CASE("coulomb_phase") {
  for (int l = 0; l <= 3; ++l) CHECK(std::abs(coulomb_phase(l, Complex(0))) == 0.0);
  for (const auto& row : oracle::coulomb_phase) CHECK(std::abs(coulomb_phase(row.l, row.eta) - row.value) < 1e-14);
  const Complex i(0, 1);
  CHECK(std::abs(coulomb_phase(0, Complex(-0.25)).real() - std::arg(std::exp(ln_gamma(1.0 - 0.25 * i)))) < 1e-15);
}

TEST_CASE("barrier_C") {
  for (int l = 0; l <= 2; ++l) CHECK(barrier_C(l, Complex(0)) == Complex(1));
  for (const auto& row : oracle::barrier_C) CHECK(rel(barrier_C(row.l, row.eta), row.value) < 1e-14);
  for (double eta : {-1.5, -0.25, 0.4, 2.0}) {
    const double closed = 2 * std::numbers::pi * eta / (std::exp(2 * std::numbers::pi * eta) - 1);
    const Complex c0 = barrier_C(0, Complex(eta));
    CHECK(std::abs(c0 * c0 - closed) < 1e-13 * closed);
  }
}

TEST_CASE("D_factor") {
  const Complex k(1.3, -0.2);
  for (int l = 0; l <= 2; ++l) CHECK(std::abs(D_factor(l, Complex(0), k) - int_pow(k, l + 1)) < 1e-15);
  CHECK(rel(D_factor(0, Complex(-0.25), Complex(2)), 2.0 * oracle::barrier_C[0].value) < 1e-14);
  // k -> -k at fixed eta only flips the integer power
  for (int l = 0; l <= 2; ++l) {
    const Complex eta(-0.3, 0.05);
    CHECK(rel(D_factor(l, eta, -k), std::pow(-1.0, l + 1) * D_factor(l, eta, k)) < 1e-15);
  }
}

TEST_CASE("M_factor") {
  for (const auto& row : oracle::M_principal)
    CHECK(rel(M_factor(row.z, std::log(row.z)), row.value) < 1e-13);
  CHECK(M_factor(Complex(0), Complex(0)) == Complex(0));
  for (double eta : {0.05, 0.7, 3.0}) CHECK(M_factor(Complex(eta), Complex(std::log(eta))).imag() == doctest::Approx(0).epsilon(1e-15));
  // eta -> 0+: M ~ -2 eta ln eta, extrapolates to 0
  double prev = 1;
  for (double eta : {1e-3, 1e-4, 1e-5}) {
    const double m = std::abs(M_factor(Complex(eta), Complex(std::log(eta))));
    CHECK(m < prev);
    CHECK(m < 30 * eta);
    prev = m;
  }
  // physical real axis: M is real for either sign of the Coulomb strength
  for (double z : {-2.0, 1.0}) {
    const Kinematics kin = make_kinematics(Complex(3.0), 1.0, z);
    CHECK(std::abs(M_factor(kin).imag()) < 1e-15);
  }
}

TEST_CASE("kinematics invariants") {
  for (Complex E : {Complex(3, 0), Complex(4, -0.5), Complex(1.78, -5e-5), Complex(-1, 0.2)}) {
    for (int kb : {1, -1}) {
      const Kinematics kin = make_kinematics(E, 1.0, -2.0, {kb, 0});
      CHECK(std::abs(kin.k * kin.k - 2.0 * E) < 1e-14 * std::abs(E));
      CHECK(std::abs(kin.eta * kin.k - (-1.0)) < 1e-15);
      if (kb == 1) CHECK(kin.k.imag() >= 0);
      if (kb == -1) CHECK(kin.k.imag() <= 0);
    }
  }
  CHECK_THROWS_AS(make_kinematics(Complex(0), 1.0, -2.0), DomainError);
}

TEST_CASE("coulomb_FG neutral limit and oracle grid") {
  for (double rho : {0.05, 0.7, 3.3, 25.0, 80.0}) {
    const CoulombFG fg = coulomb_FG(0, 0.0, rho);
    CHECK(std::abs(fg.F - std::sin(rho)) < 1e-13);
    CHECK(std::abs(fg.G - std::cos(rho)) < 1e-13);
  }
  for (const auto& row : oracle::coulomb_fg) {
    INFO("l=" << row.l << " eta=" << row.eta << " rho=" << row.rho);
    const CoulombFG fg = coulomb_FG(row.l, row.eta, row.rho);
    CHECK(std::abs(fg.F - row.F) < 1e-10 * std::abs(row.F));
    CHECK(std::abs(fg.G - row.G) < 1e-10 * std::abs(row.G));
    CHECK(std::abs(fg.dF - row.dF) < 1e-10 * std::abs(row.dF));
    CHECK(std::abs(fg.dG - row.dG) < 1e-10 * std::abs(row.dG));
  }
}

TEST_CASE("Coulomb Wronskian F'G - FG' = 1 on a grid") {
  double worst = 0;
  for (int l = 0; l <= 2; ++l)
    for (double eta = -2; eta <= 2.001; eta += 0.25)
      for (double rho = 0.1; rho <= 50; rho *= 1.17) {
        const CoulombFG fg = coulomb_FG(l, eta, rho);
        worst = std::max(worst, std::abs(fg.dF * fg.G - fg.F * fg.dG - 1));
      }
  CHECK(worst < 1e-10);
}

TEST_CASE("coulomb_H") {
  const Complex i(0, 1);
  for (double rho : {0.3, 4.0, 40.0}) {
    const CoulombH hp = coulomb_H(0, 0.0, rho, HSign::Plus);
    const CoulombH hm = coulomb_H(0, 0.0, rho, HSign::Minus);
    CHECK(std::abs(hp.H - (-i) * std::exp(i * rho)) < 1e-13);
    CHECK(std::abs(hm.H - i * std::exp(-i * rho)) < 1e-13);
    const CoulombFG fg = coulomb_FG(0, 0.0, rho);
    CHECK(std::abs(hp.H + hm.H - 2.0 * fg.F) < 1e-13);
  }
  // large rho: compare with the leading asymptotic form including eta ln(2 rho)
  const double eta = -0.25, rho = 50;
  const double theta = rho - eta * std::log(2 * rho) + coulomb_phase(0, Complex(eta)).real();
  const CoulombH hp = coulomb_H(0, eta, rho, HSign::Plus);
  CHECK(std::abs(hp.H - (-i) * std::exp(i * theta)) < 5e-3);
  const CoulombH ha = coulomb_H_asymptotic(0, Complex(eta), Complex(rho), Complex(std::log(2 * rho)), HSign::Plus);
  CHECK(std::abs(hp.H - ha.H) < 1e-6);
}

TEST_CASE("coulomb_H_complex") {
  const Complex i(0, 1);
  // real axis consistency
  for (int l = 0; l <= 2; ++l)
    for (double E : {0.8, 3.0, 4.9})
      for (double r : {0.53, 1.31, 4.0}) {
        const Kinematics kin = make_kinematics(Complex(E), 1.0, -2.0);
        for (HSign s : {HSign::Plus, HSign::Minus}) {
          const CoulombH a = coulomb_H_complex(l, kin, r, s);
          const CoulombH b = coulomb_H(l, kin.eta.real(), kin.k.real() * r, s);
          CHECK(std::abs(a.H - b.H) < 1e-8 * std::abs(b.H));
          CHECK(std::abs(a.dH - b.dH) < 1e-8 * std::abs(b.dH));
        }
      }
  // neutral, complex k
  const Kinematics free = make_kinematics(Complex(4, -0.5), 1.0, 0.0, SheetSelector::resonance());
  for (double r : {0.5, 2.0}) {
    const CoulombH hp = coulomb_H_complex(0, free, r, HSign::Plus);
    const CoulombH hm = coulomb_H_complex(0, free, r, HSign::Minus);
    CHECK(std::abs(hp.H - (-i) * std::exp(i * free.k * r)) < 1e-11 * std::abs(hp.H));
    CHECK(std::abs(hm.H - i * std::exp(-i * free.k * r)) < 1e-11 * std::abs(hm.H));
  }
  // complex E against mpmath, and the rho-Wronskian W[H-, H+] = 2i
  for (const auto& row : oracle::coulomb_h_complex) {
    if (row.k_branch == 1 && row.Ei != 0) {
      const Kinematics kin = make_kinematics(Complex(row.Er, row.Ei), 1.0, row.z, {row.k_branch, 0});
      CHECK_THROWS_AS(coulomb_H_complex(row.l, kin, row.r, HSign::Plus), ContinuationError);
      continue;
    }
    INFO("l=" << row.l << " E=" << row.Er << "," << row.Ei << " r=" << row.r << " kb=" << row.k_branch);
    const Kinematics kin = make_kinematics(Complex(row.Er, row.Ei), 1.0, row.z, {row.k_branch, 0});
    const CoulombH hp = coulomb_H_complex(row.l, kin, row.r, HSign::Plus);
    const CoulombH hm = coulomb_H_complex(row.l, kin, row.r, HSign::Minus);
    CHECK(rel(hp.H, row.Hp) < 1e-9);
    CHECK(rel(hp.dH, row.dHp) < 1e-9);
    CHECK(rel(hm.H, row.Hm) < 1e-9);
    CHECK(rel(hm.dH, row.dHm) < 1e-9);
    CHECK(std::abs(hm.H * hp.dH - hm.dH * hp.H - 2.0 * i) < 1e-9);
  }
  const Kinematics far = make_kinematics(Complex(4, -3.5), 1.0, -2.0, SheetSelector::resonance());
  CHECK_THROWS_AS(coulomb_H_complex(0, far, 1.0, HSign::Plus), ContinuationError);
}

TEST_CASE("humblet_tilde") {
  // neutral limit
  const Kinematics kin0 = make_kinematics(Complex(2.0), 1.0, 0.0);
  const double k = 2.0, r = 0.8;
  const HumbletTilde h0 = humblet_tilde(0, kin0, r);
  CHECK(std::abs(h0.Ft - std::sin(k * r) / k) < 1e-13);
  CHECK(std::abs(h0.Gt - std::cos(k * r)) < 1e-13);
  for (const auto& row : oracle::humblet) {
    INFO("l=" << row.l << " E=" << row.Er << "," << row.Ei);
    const Kinematics kin = make_kinematics(Complex(row.Er, row.Ei), 1.0, row.z);
    const HumbletTilde h = humblet_tilde(row.l, kin, row.r);
    CHECK(rel(h.Ft, row.Ft) < 1e-9);
    CHECK(rel(h.Gt, row.Gt) < 1e-9);
  }
  // single-valuedness under k -> -k
  for (int l = 0; l <= 2; ++l)
    for (Complex E : {Complex(3.0, 0.0), Complex(4.0, -0.5), Complex(1.78, -1e-4), Complex(4.9, -0.8)}) {
      const HumbletTilde a = humblet_tilde(l, make_kinematics(E, 1.0, -2.0, SheetSelector::physical()), 0.94);
      const HumbletTilde b = humblet_tilde(l, make_kinematics(E, 1.0, -2.0, SheetSelector::resonance()), 0.94);
      CHECK(rel(a.Ft, b.Ft) < 1e-8);
      CHECK(rel(a.Gt, b.Gt) < 1e-8);
      CHECK(rel(a.dFt, b.dFt) < 1e-8);
      CHECK(rel(a.dGt, b.dGt) < 1e-8);
    }
}
