#pragma once

#include "jostfit/specfun.hpp"

namespace jostfit {

struct Resonance {
  int l = 0;
  Complex E_complex;
  double E_r = 0;
  double Gamma = 0;
  SheetSelector sheet;
};

inline Resonance make_resonance(int l, Complex E, SheetSelector sheet) {
  return {l, E, E.real(), -2.0 * E.imag(), sheet};
}

}  // namespace jostfit
