#pragma once

#include <algorithm>
#include <cmath>
#include <complex>

#include "jostfit/types.hpp"

namespace jostfit::detail {

// Propagates (u, du/dx) for u'' = (L/x^2 + c1/x + c0) u along the straight
// segment x_from -> x_to using local Taylor series. x = 0 must stay off the path.
template <typename C>
void taylor_propagate(double L, C c1, C c0, C x_from, C x_to, C& u, C& du) {
  using R = typename C::value_type;
  const R total = std::abs(x_to - x_from);
  if (total == 0) return;
  const C dir = (x_to - x_from) / total;
  const R wave = std::max<R>(std::sqrt(std::abs(c0)), std::abs(c1) / std::max<R>(std::abs(x_from), 1e-300));
  const R h_wave = wave > 0 ? R(2) / wave : total;
  R done = 0;
  C x = x_from;
  constexpr int max_terms = 600;
  constexpr R eps = std::numeric_limits<R>::epsilon() * R(1e-2);
  while (done < total) {
    R h_len = std::min({R(0.5) * std::abs(x), h_wave, total - done});
    if (total - done - h_len < R(1e-14) * total) h_len = total - done;
    const C h = dir * h_len;
    const C x2 = x * x;
    const C q0 = C(L) + c1 * x + c0 * x2;
    const C q1 = c1 + R(2) * c0 * x;
    C am2(0), am1(0), a0 = u, a1 = du;  // a_{m-2}, a_{m-1}, a_m, a_{m+1}
    C hp = h;                            // h^{m+1}
    C su = a0 + a1 * h, sd = a1;
    int quiet = 0;
    for (int m = 0; m < max_terms; ++m) {
      const R mr = m;
      const C a2 = (q0 * a0 + q1 * am1 + c0 * am2 - R(2) * x * (mr + 1) * mr * a1 - mr * (mr - 1) * a0) /
                   (x2 * (mr + 2) * (mr + 1));
      const C tu = a2 * hp * h;
      const C td = (mr + 2) * a2 * hp;
      su += tu;
      sd += td;
      am2 = am1;
      am1 = a0;
      a0 = a1;
      a1 = a2;
      hp *= h;
      if (std::abs(tu) <= eps * std::abs(su) && std::abs(td) <= eps * std::abs(sd)) {
        if (++quiet >= 3) break;
      } else {
        quiet = 0;
      }
      if (m == max_terms - 1) throw NumericalError("taylor_propagate: series did not converge");
    }
    u = su;
    du = sd;
    x += h;
    done += h_len;
  }
}

}  // namespace jostfit::detail
