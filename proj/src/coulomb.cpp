#include "jostfit/coulomb.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "jostfit/detail/taylor.hpp"

namespace jostfit {
namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();
constexpr double kTiny = 1e-300;

double double_factorial_odd(int l) {
  double p = 1;
  for (int j = 3; j <= 2 * l + 1; j += 2) p *= j;
  return p;
}

// F = C^AS rho^{l+1} sum a_j rho^j
void regular_series(int l, double eta, double rho, double& F, double& dF) {
  const double cas = barrier_C(l, Complex(eta)).real() / double_factorial_odd(l);
  double am2 = 0, am1 = 1, a = 1;
  double phi = 1, dphi = 0, rp = 1;  // rp = rho^{j}
  double biggest = 1;
  int quiet = 0;
  for (int j = 1; j < 2000; ++j) {
    a = j == 1 ? eta / (l + 1) : (2 * eta * am1 - am2) / (double(j) * (j + 2 * l + 1));
    const double t_d = j * a * rp;
    rp *= rho;
    const double t = a * rp;
    phi += t;
    dphi += t_d;
    biggest = std::max(biggest, std::abs(t));
    am2 = am1;
    am1 = a;
    if (std::abs(t) < kEps * 1e-2 * std::abs(phi) && std::abs(t_d) < kEps * 1e-2 * std::abs(dphi) + kTiny) {
      if (++quiet >= 3) break;
    } else {
      quiet = 0;
    }
    if (j == 1999) throw NumericalError("coulomb_FG: regular series did not converge");
  }
  const double rl = std::pow(rho, l);
  F = cas * rl * rho * phi;
  dF = cas * ((l + 1) * rl * phi + rl * rho * dphi);
}

// Steed's method: CF1 by backward recurrence with sign tracking, CF2 by Lentz.
CoulombFG steed(int l, double eta, double rho) {
  auto S = [&](double L) { return L / rho + eta / L; };
  auto R2 = [&](double L) { return 1 + eta * eta / (L * L); };
  const int top = l + static_cast<int>(rho + 2 * std::abs(eta)) + 80;
  double f = S(top + 1);
  double sign = 1;
  for (int m = top - 1; m >= l; --m) {
    double x = S(m + 1) + f;
    if (x == 0) x = kTiny;
    if (x < 0) sign = -sign;
    f = S(m + 1) - R2(m + 1) / x;
  }

  const Complex i(0, 1);
  const Complex a = 1.0 + l + i * eta;
  const Complex b = -double(l) + i * eta;
  Complex cf = kTiny, Cn = cf, Dn = 0;
  bool converged = false;
  for (int n = 1; n < 100000; ++n) {
    const Complex an = (a + double(n - 1)) * (b + double(n - 1));
    const Complex bn = 2.0 * (rho - eta + double(n) * i);
    Dn = bn + an * Dn;
    if (Dn == Complex(0)) Dn = kTiny;
    Cn = bn + an / Cn;
    if (Cn == Complex(0)) Cn = kTiny;
    Dn = 1.0 / Dn;
    const Complex delta = Cn * Dn;
    cf *= delta;
    if (std::abs(delta - 1.0) < kEps) {
      converged = true;
      break;
    }
  }
  if (!converged) {
    std::ostringstream os;
    os << "coulomb_FG: CF2 did not converge (l=" << l << ", eta=" << eta << ", rho=" << rho << ")";
    throw NumericalError(os.str());
  }
  const Complex pq = i * (1 - eta / rho) + i / rho * cf;
  const double p = pq.real(), q = pq.imag();
  CoulombFG out;
  out.F = sign / std::sqrt((f - p) * (f - p) / q + q);
  out.dF = f * out.F;
  out.G = (f - p) * out.F / q;
  out.dG = p * out.G - q * out.F;
  return out;
}

}  // namespace

CoulombFG coulomb_FG(int l, double eta, double rho) {
  if (l < 0) throw DomainError("coulomb_FG: l must be nonnegative");
  if (!(rho > 0)) throw DomainError("coulomb_FG: rho must be positive");
  const double tp = eta + std::sqrt(eta * eta + l * (l + 1.0));
  const double rho_c = std::max(tp, 0.0) + 4.0;
  if (rho >= rho_c) return steed(l, eta, rho);

  const CoulombFG at_c = steed(l, eta, rho_c);
  Complex g = at_c.G, dg = at_c.dG;
  detail::taylor_propagate<Complex>(l * (l + 1.0), Complex(2 * eta), Complex(-1), Complex(rho_c), Complex(rho),
                                    g, dg);
  CoulombFG out;
  regular_series(l, eta, rho, out.F, out.dF);
  out.G = g.real();
  out.dG = dg.real();
  return out;
}

CoulombH coulomb_H(int l, double eta, double rho, HSign sign) {
  const CoulombFG fg = coulomb_FG(l, eta, rho);
  const double s = sign == HSign::Plus ? 1.0 : -1.0;
  const Complex i(0, 1);
  return {fg.F - s * i * fg.G, fg.dF - s * i * fg.dG};
}

CoulombH coulomb_H_asymptotic(int l, Complex eta, Complex rho, Complex ln_2rho, HSign sign) {
  const Complex i(0, 1);
  const double s = sign == HSign::Plus ? 1.0 : -1.0;
  const Complex a = 1.0 + double(l) + s * i * eta;
  const Complex b = -double(l) + s * i * eta;
  const Complex z = s * 2.0 * i * rho;
  Complex t = 1, sum = 1, dsum = 0;
  double last = 1;
  bool converged = false;
  for (int k = 0; k < 500; ++k) {
    t *= (a + double(k)) * (b + double(k)) / (double(k + 1) * z);
    const double mag = std::abs(t);
    if (mag > last && k > 2) break;
    sum += t;
    dsum += t * (-double(k + 1)) / rho;
    last = mag;
    if (mag < kEps * 1e-2 * std::abs(sum)) {
      converged = true;
      break;
    }
  }
  if (!converged) throw NumericalError("coulomb_H_asymptotic: |rho| too small for full precision");
  const Complex theta = rho - eta * ln_2rho - double(l) * std::numbers::pi / 2 + coulomb_phase(l, eta);
  const Complex e = std::exp(s * i * theta);
  const Complex dtheta = 1.0 - eta / rho;
  // H(+-) = -+ i (G +- i F)
  const Complex pre = -s * i;
  return {pre * e * sum, pre * e * (s * i * dtheta * sum + dsum)};
}

CoulombH coulomb_H_complex(int l, const Kinematics& kin, double r, HSign sign,
                           const ContinuationSettings& settings) {
  if (!(r > 0)) throw DomainError("coulomb_H_complex: r must be positive");
  if (std::abs(kin.E.imag()) > settings.im_E_band)
    throw ContinuationError("coulomb_H_complex: |Im E| outside the validity band");
  const Complex k = kin.k;
  if (!(k.real() > 0))
    throw ContinuationError("coulomb_H_complex: asymptotic seed requires Re k > 0 (|arg rho| < pi/2)");
  const Complex rho = k * r;
  const double rho_far = 24.0 + 4.0 * std::abs(kin.eta) + double(l * l);
  if (std::abs(rho) >= rho_far)
    return coulomb_H_asymptotic(l, kin.eta, rho, std::log(2.0 * r) + kin.ln_k, sign);
  // seed on the real rho axis, then integrate along the straight line to k r
  const double growth = 2.0 * std::abs(rho.imag());
  if (growth > std::log(settings.max_amplification)) {
    std::ostringstream os;
    os << "coulomb_H_complex: continuation amplifies errors by e^" << growth << " at E=" << kin.E;
    throw ContinuationError(os.str());
  }
  const CoulombH seed = coulomb_H_asymptotic(l, kin.eta, Complex(rho_far), Complex(std::log(2.0 * rho_far)), sign);
  Complex u = seed.H, du = seed.dH;
  detail::taylor_propagate<Complex>(l * (l + 1.0), 2.0 * kin.eta, Complex(-1), Complex(rho_far), rho, u, du);
  return {u, du};
}

HumbletTilde humblet_tilde(int l, const Kinematics& kin_in, double r, const ContinuationSettings& settings) {
  // F~ and G~ are even in k; evaluate on the root with Re k > 0
  Kinematics kin = kin_in;
  if (kin.k.real() < 0 || (kin.k.real() == 0 && kin.k.imag() < 0)) {
    SheetSelector flipped = kin.sheet;
    flipped.k_branch = -flipped.k_branch;
    kin = make_kinematics(kin.E, kin.mu, kin.z, flipped);
  }
  const Complex k = kin.k;
  const Complex i(0, 1);
  Complex F, G, dF, dG;  // d/dr
  if (kin.E.imag() == 0 && k.imag() == 0 && k.real() > 0) {
    const CoulombFG fg = coulomb_FG(l, kin.eta.real(), k.real() * r);
    F = fg.F;
    G = fg.G;
    dF = fg.dF * k;
    dG = fg.dG * k;
  } else {
    const CoulombH hp = coulomb_H_complex(l, kin, r, HSign::Plus, settings);
    const CoulombH hm = coulomb_H_complex(l, kin, r, HSign::Minus, settings);
    F = (hp.H + hm.H) / 2.0;
    G = (hm.H - hp.H) / (2.0 * i);
    dF = k * (hp.dH + hm.dH) / 2.0;
    dG = k * (hm.dH - hp.dH) / (2.0 * i);
  }
  const Complex D = D_factor(l, kin.eta, k);
  if (D == Complex(0)) throw DomainError("humblet_tilde: D_l = 0");
  const Complex M = M_factor(kin);
  HumbletTilde out;
  out.Ft = F / D;
  out.dFt = dF / D;
  out.Gt = (G - M * F) * D / k;
  out.dGt = (dG - M * dF) * D / k;
  return out;
}

}  // namespace jostfit
