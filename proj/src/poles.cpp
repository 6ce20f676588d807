#include "jostfit/poles.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <numbers>
#include <sstream>

#include "jostfit/io.hpp"
#include "jostfit/jostmodel.hpp"
#include "json.hpp"

namespace jostfit {
namespace {

constexpr double kPi = std::numbers::pi;

struct BoundaryError : NumericalError {
  using NumericalError::NumericalError;
};

double wrap(double d) {
  while (d > kPi) d -= 2 * kPi;
  while (d <= -kPi) d += 2 * kPi;
  return d;
}

class Walker {
 public:
  Walker(const ComplexFn& f, double min_len) : f_(f), min_len_(min_len) {}

  Complex eval(Complex z) {
    const Complex v = f_(z);
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
      throw NumericalError("contour_count: non-finite function value");
    if (v == Complex(0)) throw BoundaryError("contour_count: zero on the boundary");
    return v;
  }

  // Phase change of f from a to b, bisecting until every piece moves less than pi/2.
  double segment(Complex a, Complex fa, Complex b, Complex fb) {
    const Complex m = 0.5 * (a + b);
    const Complex fm = eval(m);
    const double d1 = wrap(std::arg(fm) - std::arg(fa));
    const double d2 = wrap(std::arg(fb) - std::arg(fm));
    const double d = wrap(std::arg(fb) - std::arg(fa));
    // near-linearity guards against a close pair of zeros turning the phase by ~2 pi inside one half
    const double curv = std::abs(fm - 0.5 * (fa + fb));
    const bool linear = curv < 0.5 * std::min({std::abs(fa), std::abs(fb), std::abs(fm)});
    if (linear && std::abs(d1) < kPi / 2 && std::abs(d2) < kPi / 2 && std::abs(d1 + d2 - d) < 1e-9) return d1 + d2;
    if (std::abs(b - a) < min_len_) throw BoundaryError("contour_count: boundary passes through a near-zero");
    return segment(a, fa, m, fm) + segment(m, fm, b, fb);
  }

  double edge(Complex a, Complex b, int pieces, const std::vector<double>& hot = {}) {
    std::vector<double> ts;
    for (int i = 1; i <= pieces; ++i) ts.push_back(double(i) / pieces);
    const double len = b.real() - a.real();
    for (double x : hot) {
      if (len == 0) break;
      for (int j = 1; j <= 11; ++j)
        for (double sgn : {-1.0, 1.0}) {
          const double t = (x + sgn * std::pow(10.0, -j) - a.real()) / len;
          if (t > 0 && t < 1) ts.push_back(t);
        }
    }
    std::sort(ts.begin(), ts.end());
    double total = 0;
    Complex za = a, fa = eval(a);
    for (double t : ts) {
      const Complex zb = t == 1.0 ? b : a + (b - a) * t;
      if (zb == za) continue;
      const Complex fb = eval(zb);
      total += segment(za, fa, zb, fb);
      za = zb;
      fa = fb;
    }
    return total;
  }

 private:
  const ComplexFn& f_;
  double min_len_;
};

int winding(const ComplexFn& f, const SearchRegion& r, const ContourOptions& opt) {
  const double scale = std::max(r.width(), r.height());
  Walker w(f, opt.min_segment * scale);
  const Complex c00(r.re_min, r.im_min), c10(r.re_max, r.im_min), c11(r.re_max, r.im_max), c01(r.re_min, r.im_max);
  const double total = w.edge(c00, c10, r.grid_re, r.hot_re) + w.edge(c10, c11, r.grid_im) +
                       w.edge(c11, c01, r.grid_re, r.hot_re) + w.edge(c01, c00, r.grid_im);
  const double turns = total / (2 * kPi);
  const double n = std::round(turns);
  if (std::abs(turns - n) > 1e-3) {
    std::ostringstream os;
    os << "contour_count: non-integer winding " << turns;
    throw NumericalError(os.str());
  }
  return static_cast<int>(n);
}

SearchRegion shrunk(const SearchRegion& r, int attempt) {
  if (attempt == 0) return r;
  SearchRegion s = r;
  const double t = 1e-6 * attempt;
  s.re_min += 0.71 * t * r.width();
  s.re_max -= 1.13 * t * r.width();
  s.im_min += 0.97 * t * r.height();
  s.im_max -= 0.53 * t * r.height();
  return s;
}

// Contour count with inward boundary perturbation; region is updated to the box actually used.
int count_with_perturbation(const ComplexFn& f, SearchRegion& region, const ContourOptions& opt) {
  for (int attempt = 0; attempt <= opt.perturb_attempts; ++attempt) {
    const SearchRegion r = shrunk(region, attempt);
    try {
      const int n = winding(f, r, opt);
      region = r;
      return n;
    } catch (const BoundaryError&) {
    }
  }
  throw NumericalError("contour_count: zero on the boundary persists after perturbation");
}

class ZeroFinder {
 public:
  ZeroFinder(const ComplexFn& f, const ContourOptions& opt) : f_(f), opt_(opt) {}

  void run(const SearchRegion& box, int n) {
    if (n <= 0) return;
    if (++boxes_ > opt_.max_boxes) throw IncompleteSearchError("find_zeros: box budget exhausted");
    const Complex centre(0.5 * (box.re_min + box.re_max), 0.5 * (box.im_min + box.im_max));
    if (n == 1) {
      try {
        const double step = 0.1 * std::min(box.width(), box.height());
        const Complex z = refine_zero(f_, centre, opt_.refine_tol, step);
        if (box.contains(z, 1e-12 * std::max(1.0, std::abs(z)))) {
          zeros_.push_back(z);
          return;
        }
      } catch (const NumericalError&) {
      }
    }
    if (box.width() < 1e-11 && box.height() < 1e-11) {
      for (int i = 0; i < n; ++i) zeros_.push_back(centre);
      return;
    }
    const bool split_re = box.height() < opt_.min_box_height || box.width() >= box.height();
    static constexpr double fracs[] = {0.5, 0.4871, 0.5237, 0.4413, 0.5689};
    for (double frac : fracs) {
      SearchRegion a = box, b = box;
      if (split_re) {
        const double x = box.re_min + frac * box.width();
        a.re_max = x;
        b.re_min = x;
      } else {
        const double y = box.im_min + frac * box.height();
        a.im_max = y;
        b.im_min = y;
      }
      try {
        const int na = winding(f_, a, opt_);
        const int nb = winding(f_, b, opt_);
        if (na + nb != n) continue;
        run(a, na);
        run(b, nb);
        return;
      } catch (const BoundaryError&) {
      }
    }
    throw IncompleteSearchError("find_zeros: could not split a box consistently");
  }

  std::vector<Complex> zeros() const { return zeros_; }

 private:
  const ComplexFn& f_;
  ContourOptions opt_;
  std::vector<Complex> zeros_;
  int boxes_ = 0;
};

std::string sheet_string(SheetSelector s) {
  std::ostringstream os;
  os << s.k_branch << ":" << s.log_branch;
  return os.str();
}

SheetSelector sheet_from_string(const std::string& s) {
  SheetSelector out;
  char colon = 0;
  std::istringstream is(s);
  if (!(is >> out.k_branch >> colon >> out.log_branch) || colon != ':')
    throw ConfigError("bad sheet field '" + s + "'");
  return out;
}

}  // namespace

bool SearchRegion::contains(Complex z, double margin) const {
  return z.real() >= re_min - margin && z.real() <= re_max + margin && z.imag() >= im_min - margin &&
         z.imag() <= im_max + margin;
}

int contour_count(const ComplexFn& f, const SearchRegion& region, const ContourOptions& options) {
  if (!(region.re_max > region.re_min) || !(region.im_max > region.im_min))
    throw ConfigError("contour_count: empty region");
  SearchRegion r = region;
  return count_with_perturbation(f, r, options);
}

Complex refine_zero(const ComplexFn& f, Complex seed, double tol, double step) {
  Complex x0 = seed - step, x1 = seed + step, x2 = seed;
  Complex f0 = f(x0), f1 = f(x1), f2 = f(x2);
  const double scale = std::max({std::abs(f0), std::abs(f1), std::abs(f2)});
  std::ostringstream trace;
  for (int it = 0; it < 200; ++it) {
    if (f2 == Complex(0)) return x2;
    const Complex h1 = x1 - x0, h2 = x2 - x1;
    const Complex d1 = (f1 - f0) / h1, d2 = (f2 - f1) / h2;
    const Complex a = (d2 - d1) / (h2 + h1);
    const Complex b = a * h2 + d2;
    const Complex disc = std::sqrt(b * b - 4.0 * f2 * a);
    Complex den = std::abs(b + disc) >= std::abs(b - disc) ? b + disc : b - disc;
    if (den == Complex(0)) den = Complex(1e-300);
    const Complex dx = -2.0 * f2 / den;
    const Complex x3 = x2 + dx;
    if (!std::isfinite(x3.real()) || !std::isfinite(x3.imag())) break;
    if (it < 8) trace << " " << x3;
    if (std::abs(dx) <= tol * std::max(1.0, std::abs(x3))) {
      // a stalled iteration also takes tiny steps
      if (std::abs(f(x3)) <= 1e-6 * scale) return x3;
      break;
    }
    x0 = x1;
    f0 = f1;
    x1 = x2;
    f1 = f2;
    x2 = x3;
    f2 = f(x3);
  }
  throw NumericalError("refine_zero: Muller iteration failed; iterates:" + trace.str());
}

std::vector<Complex> find_zeros(const ComplexFn& f, const SearchRegion& region, const ContourOptions& options) {
  SearchRegion r = region;
  const int n = count_with_perturbation(f, r, options);
  ZeroFinder finder(f, options);
  finder.run(r, n);
  std::vector<Complex> zeros = finder.zeros();
  std::sort(zeros.begin(), zeros.end(), [](Complex a, Complex b) { return a.real() < b.real(); });
  if (int(zeros.size()) != n) throw IncompleteSearchError("find_zeros: refined zeros do not match the contour count");
  return zeros;
}

std::vector<Resonance> zeros_to_resonances(int l, const std::vector<Complex>& zeros, SheetSelector sheet) {
  std::vector<Resonance> out;
  for (Complex z : zeros) out.push_back(make_resonance(l, z, sheet));
  std::sort(out.begin(), out.end(), [](const Resonance& a, const Resonance& b) { return a.E_r < b.E_r; });
  return out;
}

std::vector<Resonance> find_resonances(const ABParams& params, double mu, double z, const SearchRegion& region,
                                       const ContourOptions& options) {
  const ComplexFn f = [&](Complex E) {
    const AB ab = eval_A_B(params, E);
    return jost_from_AB(make_kinematics(E, mu, z, region.sheet), params.l, ab.A, ab.B).f_in;
  };
  SearchRegion r = region;
  const auto& e = params.basis.energies();
  r.hot_re.insert(r.hot_re.end(), e.begin(), e.end());
  return zeros_to_resonances(params.l, find_zeros(f, r, options), region.sheet);
}

std::vector<Resonance> find_resonances(const TaylorParams& params, double mu, double z, const SearchRegion& region,
                                       const ContourOptions& options) {
  const ComplexFn f = [&](Complex E) {
    const AB ab = eval_A_B_taylor(params, E);
    return jost_from_AB(make_kinematics(E, mu, z, region.sheet), params.l, ab.A, ab.B).f_in;
  };
  return zeros_to_resonances(params.l, find_zeros(f, region, options), region.sheet);
}

namespace {

template <typename P, typename Eval>
int physical_count(const P& params, double mu, double z, SearchRegion region, const ContourOptions& options,
                   Eval eval) {
  region.sheet = SheetSelector::physical();
  region.im_max = std::min(region.im_max, 0.0);
  if (region.im_max == 0) region.im_max = -1e-9 * std::max(1.0, region.height());
  const ComplexFn f = [&](Complex E) {
    const Kinematics kin = make_kinematics(E, mu, z, region.sheet);
    const ExplicitFactors x = explicit_factors(kin, params.l);
    const AB ab = eval(params, E);
    return x.k * ab.A - (x.M + Complex(0, 1)) * x.D * x.D * ab.B;
  };
  return contour_count(f, region, options);
}

}  // namespace

int physical_zero_count(const ABParams& params, double mu, double z, SearchRegion region,
                        const ContourOptions& options) {
  const auto& e = params.basis.energies();
  region.hot_re.insert(region.hot_re.end(), e.begin(), e.end());
  return physical_count(params, mu, z, region, options,
                        [](const ABParams& p, Complex E) { return eval_A_B(p, E); });
}

int physical_zero_count(const TaylorParams& params, double mu, double z, SearchRegion region,
                        const ContourOptions& options) {
  return physical_count(params, mu, z, region, options,
                        [](const TaylorParams& p, Complex E) { return eval_A_B_taylor(p, E); });
}

void write_resonances_csv(const std::string& path, const std::vector<Resonance>& rows) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot write " + path);
  os << "l,E_r,Gamma,Re_E,Im_E,sheet\n";
  for (const auto& r : rows)
    os << r.l << ',' << fmt_double(r.E_r) << ',' << fmt_double(r.Gamma) << ',' << fmt_double(r.E_complex.real())
       << ',' << fmt_double(r.E_complex.imag()) << ',' << sheet_string(r.sheet) << '\n';
}

std::vector<Resonance> read_resonances_csv(const std::string& path) {
  const CsvTable t = read_csv(path);
  std::vector<Resonance> out;
  for (const auto& row : t.rows) {
    if (row.size() != 6) throw ConfigError(path + ": expected 6 columns");
    const Complex E(parse_double(row[3]), parse_double(row[4]));
    Resonance r = make_resonance(std::stoi(row[0]), E, sheet_from_string(row[5]));
    out.push_back(r);
  }
  return out;
}

std::string resonances_json(const std::vector<Resonance>& rows) {
  nlohmann::json j = nlohmann::json::array();
  for (const auto& r : rows)
    j.push_back({{"l", r.l},
                 {"E_r", r.E_r},
                 {"Gamma", r.Gamma},
                 {"Re_E", r.E_complex.real()},
                 {"Im_E", r.E_complex.imag()},
                 {"sheet", {{"k_branch", r.sheet.k_branch}, {"log_branch", r.sheet.log_branch}}}});
  return j.dump(2);
}

}  // namespace jostfit
