#pragma once

#include "jostfit/specfun.hpp"
#include "jostfit/types.hpp"

namespace jostfit {

struct CoulombFG {
  double F = 0, G = 0, dF = 0, dG = 0;  // derivatives with respect to rho
};

struct CoulombH {
  Complex H, dH;  // dH = dH/drho
};

struct ContinuationSettings {
  double im_E_band = 3.0;           // |Im E| validity band
  double max_amplification = 1e7;  // allowed error growth of the inward integration
};

struct HumbletTilde {
  Complex Ft, Gt;    // F~, G~
  Complex dFt, dGt;  // d/dr
};

// Real Coulomb wave functions: series below the crossover, Steed CF1/CF2 above,
// G continued inward by Taylor stepping.
CoulombFG coulomb_FG(int l, double eta, double rho);

// H(+-) = F -+ i G.
CoulombH coulomb_H(int l, double eta, double rho, HSign sign);

// Large-rho expansion of H(+-) with ln(2 rho) supplied on the caller's branch.
// Throws NumericalError when the series cannot reach full precision.
CoulombH coulomb_H_asymptotic(int l, Complex eta, Complex rho, Complex ln_2rho, HSign sign);

// H(+-)(eta(k), k r) for complex k: asymptotic seed at large r, integrated inward.
CoulombH coulomb_H_complex(int l, const Kinematics& kin, double r, HSign sign,
                           const ContinuationSettings& settings = {});

// F~ = F/D, G~ = (G - M F) D / k at (kin, r).
HumbletTilde humblet_tilde(int l, const Kinematics& kin, double r,
                           const ContinuationSettings& settings = {});

}  // namespace jostfit
