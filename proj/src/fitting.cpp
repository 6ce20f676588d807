#include "jostfit/fitting.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <numbers>
#include <numeric>
#include <sstream>

#include "jostfit/io.hpp"
#include "json.hpp"

namespace jostfit {

std::string to_string(ModelKind m) {
  switch (m) {
    case ModelKind::Jost: return "jost";
    case ModelKind::RMatrix: return "rmatrix";
    case ModelKind::JostTaylor: return "jost_taylor";
  }
  return "?";
}

ModelKind model_kind_from_string(const std::string& s) {
  if (s == "jost") return ModelKind::Jost;
  if (s == "rmatrix") return ModelKind::RMatrix;
  if (s == "jost_taylor") return ModelKind::JostTaylor;
  throw ConfigError("unknown model '" + s + "'");
}

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

void base_cache(FitProblem& p) {
  p.dataset.validate();
  if (p.l_max < 0) throw ConfigError("l_max must be non-negative");
  p.cache.assign(p.l_max + 1, {});
  for (int l = 0; l <= p.l_max; ++l) {
    for (const auto& pt : p.dataset.points) {
      const Kinematics kin = make_kinematics(Complex(pt.E), p.mu, p.z);
      const ExplicitFactors x = explicit_factors(kin, l);
      FitProblem::PointCache c;
      c.k = kin.k.real();
      c.sigma_c = x.sigma.real();
      c.M = x.M.real();
      c.D2 = (x.D * x.D).real();
      p.cache[l].push_back(std::move(c));
    }
  }
}

void set_offsets(FitProblem& p, const std::vector<int>& per_l) {
  p.offsets.assign(1, 0);
  for (int n : per_l) p.offsets.push_back(p.offsets.back() + n);
}

double sigma_from_XY(int l, const FitProblem::PointCache& c, double X, double Y) {
  if (X == 0 && Y == 0) return kNaN;
  const double s = std::sin(c.sigma_c + std::atan2(Y, X));
  return 4 * std::numbers::pi / (c.k * c.k) * (2 * l + 1) * s * s;
}

double point_sigma(const FitProblem& p, const Eigen::VectorXd& params, int l, size_t i) {
  const auto& c = p.cache[l][i];
  const int off = p.offsets[l];
  switch (p.model) {
    case ModelKind::Jost:
    case ModelKind::JostTaylor: {
      const int m = static_cast<int>(c.basis.size());
      const double A = c.basis.dot(params.segment(off, m));
      const double B = c.basis.dot(params.segment(off + m, m));
      return sigma_from_XY(l, c, c.k * A - c.M * c.D2 * B, c.D2 * B);
    }
    case ModelKind::RMatrix: {
      const RParams& t = p.rtemplates[l];
      const double E = p.dataset.points[i].E;
      double R = 0;
      for (int n = 0; n < t.N(); ++n) {
        const double d = t.energies[n] - E;
        if (d == 0) return kNaN;
        R += params[off + n] * params[off + n] / d;
      }
      auto br = [&](const CoulombH& h) { return h.H - (t.a * h.dH - t.B_R * h.H) * R; };
      const Complex den = br(c.h.plus);
      if (den == Complex(0)) return kNaN;
      const Complex S = -std::exp(Complex(0, 2 * c.sigma_c)) * br(c.h.minus) / den;
      return partial_sigma(l, c.k, S);
    }
  }
  return kNaN;
}

void check_params(const FitProblem& p, const Eigen::VectorXd& params) {
  if (p.offsets.empty() || params.size() != p.n_params())
    throw ConfigError("parameter vector has the wrong length for this problem");
}

}  // namespace

FitProblem make_jost_problem(CrossSectionDataset ds, std::vector<PolyBasis> bases, double mu, double z) {
  FitProblem p;
  p.dataset = std::move(ds);
  p.model = ModelKind::Jost;
  p.l_max = p.dataset.l_max;
  p.mu = mu;
  p.z = z;
  if (static_cast<int>(bases.size()) != p.l_max + 1) throw ConfigError("need one basis per partial wave");
  p.bases = std::move(bases);
  base_cache(p);
  std::vector<int> per_l;
  for (int l = 0; l <= p.l_max; ++l) {
    const PolyBasis& b = p.bases[l];
    for (size_t i = 0; i < p.dataset.points.size(); ++i) {
      auto& c = p.cache[l][i];
      c.basis.resize(b.N() + 1);
      for (int n = 0; n <= b.N(); ++n) c.basis[n] = poly_P(b, n, Complex(p.dataset.points[i].E)).real();
    }
    per_l.push_back(2 * (b.N() + 1));
  }
  set_offsets(p, per_l);
  return p;
}

FitProblem make_taylor_problem(CrossSectionDataset ds, std::vector<double> E0, int order, double mu, double z) {
  FitProblem p;
  p.dataset = std::move(ds);
  p.model = ModelKind::JostTaylor;
  p.l_max = p.dataset.l_max;
  p.mu = mu;
  p.z = z;
  if (order < 0) throw ConfigError("taylor order must be non-negative");
  if (static_cast<int>(E0.size()) != p.l_max + 1) throw ConfigError("need one expansion energy per partial wave");
  p.taylor_E0 = std::move(E0);
  p.taylor_order = order;
  base_cache(p);
  std::vector<int> per_l;
  for (int l = 0; l <= p.l_max; ++l) {
    for (size_t i = 0; i < p.dataset.points.size(); ++i) {
      auto& c = p.cache[l][i];
      c.basis.resize(order + 1);
      const double t = p.dataset.points[i].E - p.taylor_E0[l];
      double v = 1;
      for (int n = 0; n <= order; ++n, v *= t) c.basis[n] = v;
    }
    per_l.push_back(2 * (order + 1));
  }
  set_offsets(p, per_l);
  return p;
}

FitProblem make_rmatrix_problem(CrossSectionDataset ds, std::vector<RParams> templates, double mu, double z) {
  FitProblem p;
  p.dataset = std::move(ds);
  p.model = ModelKind::RMatrix;
  p.l_max = p.dataset.l_max;
  p.mu = mu;
  p.z = z;
  if (static_cast<int>(templates.size()) != p.l_max + 1) throw ConfigError("need one R-matrix template per partial wave");
  for (int l = 0; l <= p.l_max; ++l)
    if (templates[l].l != l) throw ConfigError("R-matrix templates must be ordered by l");
  p.rtemplates = std::move(templates);
  base_cache(p);
  std::vector<int> per_l;
  for (int l = 0; l <= p.l_max; ++l) {
    for (size_t i = 0; i < p.dataset.points.size(); ++i) {
      const Kinematics kin = make_kinematics(Complex(p.dataset.points[i].E), mu, z);
      p.cache[l][i].h = channel_H(l, kin, p.rtemplates[l].a);
    }
    per_l.push_back(p.rtemplates[l].N());
  }
  set_offsets(p, per_l);
  return p;
}

Eigen::VectorXd model_sigma_partial(const FitProblem& problem, const Eigen::VectorXd& params, int l) {
  check_params(problem, params);
  if (l < 0 || l > problem.l_max) throw DomainError("partial wave out of range");
  const size_t n = problem.dataset.points.size();
  Eigen::VectorXd out(n);
  for (size_t i = 0; i < n; ++i) out[i] = point_sigma(problem, params, l, i);
  return out;
}

Eigen::VectorXd model_sigma(const FitProblem& problem, const Eigen::VectorXd& params) {
  check_params(problem, params);
  Eigen::VectorXd out = Eigen::VectorXd::Zero(problem.dataset.points.size());
  for (int l = 0; l <= problem.l_max; ++l) out += model_sigma_partial(problem, params, l);
  return out;
}

Eigen::VectorXd residuals(const FitProblem& problem, const Eigen::VectorXd& params) {
  const Eigen::VectorXd s = model_sigma(problem, params);
  Eigen::VectorXd r(s.size());
  for (Eigen::Index i = 0; i < s.size(); ++i) {
    const auto& pt = problem.dataset.points[i];
    r[i] = std::isfinite(s[i]) ? (pt.sigma - s[i]) / pt.delta : std::sqrt(kPolePenalty);
  }
  return r;
}

double chi2(const FitProblem& problem, const Eigen::VectorXd& params) { return residuals(problem, params).squaredNorm(); }

std::vector<ABParams> unpack_jost(const FitProblem& problem, const Eigen::VectorXd& params) {
  if (problem.model != ModelKind::Jost) throw ConfigError("unpack_jost: not a jost problem");
  check_params(problem, params);
  std::vector<ABParams> out;
  for (int l = 0; l <= problem.l_max; ++l) {
    const int m = problem.bases[l].N() + 1;
    out.emplace_back(l, problem.bases[l], params.segment(problem.offsets[l], m), params.segment(problem.offsets[l] + m, m));
  }
  return out;
}

std::vector<TaylorParams> unpack_taylor(const FitProblem& problem, const Eigen::VectorXd& params) {
  if (problem.model != ModelKind::JostTaylor) throw ConfigError("unpack_taylor: not a jost_taylor problem");
  check_params(problem, params);
  std::vector<TaylorParams> out;
  const int m = problem.taylor_order + 1;
  for (int l = 0; l <= problem.l_max; ++l)
    out.emplace_back(l, problem.taylor_E0[l], params.segment(problem.offsets[l], m),
                     params.segment(problem.offsets[l] + m, m));
  return out;
}

std::vector<RParams> unpack_rmatrix(const FitProblem& problem, const Eigen::VectorXd& params) {
  if (problem.model != ModelKind::RMatrix) throw ConfigError("unpack_rmatrix: not an rmatrix problem");
  check_params(problem, params);
  std::vector<RParams> out = problem.rtemplates;
  for (int l = 0; l <= problem.l_max; ++l) out[l].gammas = params.segment(problem.offsets[l], out[l].N());
  return out;
}

Eigen::VectorXd pack_jost(const std::vector<ABParams>& params) {
  Eigen::Index n = 0;
  for (const auto& p : params) n += p.alpha.size() + p.beta.size();
  Eigen::VectorXd out(n);
  Eigen::Index at = 0;
  for (const auto& p : params) {
    out.segment(at, p.alpha.size()) = p.alpha;
    at += p.alpha.size();
    out.segment(at, p.beta.size()) = p.beta;
    at += p.beta.size();
  }
  return out;
}

Eigen::VectorXd pack_rmatrix(const std::vector<RParams>& params) {
  Eigen::Index n = 0;
  for (const auto& p : params) n += p.gammas.size();
  Eigen::VectorXd out(n);
  Eigen::Index at = 0;
  for (const auto& p : params) {
    out.segment(at, p.gammas.size()) = p.gammas;
    at += p.gammas.size();
  }
  return out;
}

Eigen::VectorXd parameter_scales(const FitProblem& problem, ScalePolicy policy) {
  Eigen::VectorXd s = Eigen::VectorXd::Ones(problem.n_params());
  if (policy == ScalePolicy::Unit) return s;
  for (int l = 0; l <= problem.l_max; ++l) {
    const int off = problem.offsets[l];
    const auto& cl = problem.cache[l];
    if (problem.model == ModelKind::RMatrix) {
      const RParams& t = problem.rtemplates[l];
      for (int n = 0; n < t.N(); ++n) {
        double mean = 0;
        for (const auto& pt : problem.dataset.points) mean += std::abs(t.energies[n] - pt.E);
        mean /= static_cast<double>(problem.dataset.points.size());
        s[off + n] = std::sqrt(std::max(mean, 1e-6) / t.a);
      }
      continue;
    }
    const int m = static_cast<int>(cl.front().basis.size());
    for (int n = 0; n < m; ++n) {
      double ma = 0, mb = 0;
      for (const auto& c : cl) {
        ma = std::max(ma, std::abs(c.k * c.basis[n]));
        mb = std::max(mb, std::abs(c.D2 * c.basis[n]));
      }
      s[off + n] = ma > 0 ? 1 / ma : 1;
      s[off + m + n] = mb > 0 ? 1 / mb : 1;
    }
  }
  return s;
}

namespace {

struct Objective {
  const ResidualFn& r;
  const Eigen::VectorXd& scales;
  long evals = 0;

  Eigen::VectorXd to_params(const Eigen::VectorXd& u) const { return u.cwiseProduct(scales); }
  double operator()(const Eigen::VectorXd& u) {
    ++evals;
    const double v = r(to_params(u)).squaredNorm();
    return std::isfinite(v) ? v : std::numeric_limits<double>::max();
  }
  Eigen::VectorXd res(const Eigen::VectorXd& u) {
    ++evals;
    return r(to_params(u));
  }
};

// Adaptive Nelder-Mead. Returns true when the simplex collapsed below tol.
bool nelder_mead(Objective& f, Eigen::VectorXd& best, double& fbest, long budget, double tol,
                 std::vector<double>& trace) {
  const int n = static_cast<int>(best.size());
  const double dn = n;
  const double alpha = 1, beta = 1 + 2 / dn, gamma = 0.75 - 1 / (2 * dn), delta = 1 - 1 / dn;
  std::vector<Eigen::VectorXd> x(n + 1, best);
  std::vector<double> fx(n + 1);
  fx[0] = fbest;
  for (int j = 0; j < n; ++j) {
    const double h = 0.2 * std::max(1.0, std::abs(best[j]));
    x[j + 1][j] += h;
    fx[j + 1] = f(x[j + 1]);
  }
  const long stop = f.evals + budget;
  std::vector<int> idx(n + 1);
  while (f.evals < stop) {
    std::iota(idx.begin(), idx.end(), 0);
    std::sort(idx.begin(), idx.end(), [&](int a, int b) { return fx[a] < fx[b]; });
    const int lo = idx[0], hi = idx[n], nh = idx[n - 1];
    if (fx[lo] < fbest) {
      fbest = fx[lo];
      best = x[lo];
    }
    trace.push_back(fbest);
    double spread = 0;
    for (int j = 0; j <= n; ++j) spread = std::max(spread, (x[j] - x[lo]).cwiseAbs().maxCoeff());
    if (fx[hi] - fx[lo] <= tol * (std::abs(fx[lo]) + 1e-300) && spread <= tol * (1 + x[lo].cwiseAbs().maxCoeff()))
      return true;
    if (spread == 0) return true;
    Eigen::VectorXd c = Eigen::VectorXd::Zero(n);
    for (int j = 0; j <= n; ++j)
      if (j != hi) c += x[j];
    c /= dn;
    const Eigen::VectorXd xr = c + alpha * (c - x[hi]);
    const double fr = f(xr);
    if (fr < fx[lo]) {
      const Eigen::VectorXd xe = c + beta * (xr - c);
      const double fe = f(xe);
      if (fe < fr) {
        x[hi] = xe;
        fx[hi] = fe;
      } else {
        x[hi] = xr;
        fx[hi] = fr;
      }
      continue;
    }
    if (fr < fx[nh]) {
      x[hi] = xr;
      fx[hi] = fr;
      continue;
    }
    const bool outside = fr < fx[hi];
    const Eigen::VectorXd xc = outside ? Eigen::VectorXd(c + gamma * (xr - c)) : Eigen::VectorXd(c - gamma * (xr - c));
    const double fc = f(xc);
    if (fc < (outside ? fr : fx[hi])) {
      x[hi] = xc;
      fx[hi] = fc;
      continue;
    }
    for (int j = 0; j <= n; ++j) {
      if (j == lo) continue;
      x[j] = x[lo] + delta * (x[j] - x[lo]);
      fx[j] = f(x[j]);
    }
  }
  for (int j = 0; j <= n; ++j)
    if (fx[j] < fbest) {
      fbest = fx[j];
      best = x[j];
    }
  return false;
}

// Levenberg-Marquardt with a central-difference Jacobian and Nielsen's damping update.
// Converged when chi2 falls by less than tol (relative) over a window of accepted steps.
bool levenberg_marquardt(Objective& f, Eigen::VectorXd& u, double& fu, int max_iter, double tol,
                         std::vector<double>& trace) {
  constexpr int kWindow = 10;
  const int n = static_cast<int>(u.size());
  Eigen::VectorXd r = f.res(u);
  if (!r.allFinite()) return false;
  double lambda = -1, nu = 2;
  std::vector<double> hist{fu};
  for (int it = 0; it < max_iter; ++it) {
    Eigen::MatrixXd J(r.size(), n);
    for (int j = 0; j < n; ++j) {
      const double h = 1e-6 * std::max(1.0, std::abs(u[j]));
      Eigen::VectorXd up = u, um = u;
      up[j] += h;
      um[j] -= h;
      J.col(j) = (f.res(up) - f.res(um)) / (2 * h);
    }
    if (!J.allFinite()) return false;
    const Eigen::MatrixXd H = J.transpose() * J;
    const Eigen::VectorXd g = J.transpose() * r;
    const Eigen::VectorXd d = H.diagonal().cwiseMax(1e-12 * H.diagonal().maxCoeff()).cwiseMax(1e-300);
    if (lambda < 0) lambda = 1e-3;
    for (;;) {
      Eigen::MatrixXd A = H;
      A.diagonal() += lambda * d;
      const Eigen::VectorXd step = A.ldlt().solve(-g);
      if (step.allFinite()) {
        const Eigen::VectorXd ut = u + step;
        const Eigen::VectorXd rt = f.res(ut);
        const double ft = rt.squaredNorm();
        const double predicted = -(2 * step.dot(g) + step.dot(H * step));
        const double rho = predicted > 0 ? (fu - ft) / predicted : -1;
        if (std::isfinite(ft) && ft < fu && rho > 0) {
          u = ut;
          r = rt;
          fu = ft;
          trace.push_back(fu);
          hist.push_back(fu);
          lambda *= std::max(1.0 / 3, 1 - std::pow(2 * rho - 1, 3));
          lambda = std::max(lambda, 1e-15);
          nu = 2;
          break;
        }
      }
      lambda *= nu;
      nu *= 2;
      if (lambda > 1e16) return true;
    }
    const size_t m = hist.size();
    if (m > kWindow && hist[m - 1 - kWindow] - fu <= tol * std::max(fu, 1e-300)) return true;
    if (fu == 0) return true;
  }
  return false;
}

}  // namespace

FitResult minimize_residuals(const ResidualFn& r, const Eigen::VectorXd& start, const FitOptions& options,
                             const Eigen::VectorXd& scales_in) {
  if (!start.allFinite()) throw ConfigError("start vector must be finite");
  const Eigen::VectorXd scales = scales_in.size() ? scales_in : Eigen::VectorXd::Ones(start.size());
  if (scales.size() != start.size() || (scales.array() <= 0).any()) throw ConfigError("invalid parameter scales");
  Objective f{r, scales};
  FitResult out;
  Eigen::VectorXd u = start.cwiseQuotient(scales);
  double fu = f(u);
  out.initial_chi2 = fu;
  out.trace.push_back(fu);
  if (options.max_evaluations <= 0) {
    out.params = start;
    out.chi2 = fu;
    out.n_evaluations = f.evals;
    out.history.push_back({fu, fu, f.evals, false, true});
    return out;
  }
  bool collapsed = false;
  for (int pass = 0; pass <= options.restarts; ++pass) {
    const double before = fu;
    collapsed = nelder_mead(f, u, fu, options.max_evaluations, options.simplex_tol, out.trace);
    if (!collapsed) break;
    if (pass > 0 && before - fu <= options.simplex_tol * std::max(before, 1e-300)) break;
  }
  bool polished = false;
  if (options.polish) polished = levenberg_marquardt(f, u, fu, options.lm_max_iterations, options.lm_tol, out.trace);
  out.params = u.cwiseProduct(scales);
  out.chi2 = fu;
  out.n_evaluations = f.evals;
  out.converged = (collapsed || polished) && fu < kPolePenalty;
  out.history.push_back({out.initial_chi2, fu, f.evals, out.converged, true});
  return out;
}

FitResult minimize(const FitProblem& problem, const Eigen::VectorXd& start, const FitOptions& options,
                   const Eigen::VectorXd& scales) {
  check_params(problem, start);
  const ResidualFn r = [&](const Eigen::VectorXd& x) { return residuals(problem, x); };
  return minimize_residuals(r, start, options, scales);
}

Eigen::VectorXd random_start(const Eigen::VectorXd& scales, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> U(-1.0, 1.0);
  Eigen::VectorXd x(scales.size());
  for (Eigen::Index i = 0; i < x.size(); ++i) x[i] = U(rng) * scales[i];
  return x;
}

FitResult multistart(const FitProblem& problem, int n_starts, ScalePolicy policy, std::uint64_t seed,
                     const FitOptions& options, const Eigen::VectorXd& first_start, const StartFilter& admissible) {
  if (n_starts < 1) throw ConfigError("multistart needs at least one start");
  const Eigen::VectorXd scales = parameter_scales(problem, policy);
  std::mt19937_64 rng(seed);
  FitResult best, best_any;
  bool have = false;
  std::vector<StartRecord> history;
  long evals = 0;
  for (int s = 0; s < n_starts; ++s) {
    Eigen::VectorXd x0 = random_start(scales, rng);
    if (s == 0 && first_start.size()) x0 = first_start;
    FitResult r = minimize(problem, x0, options, scales);
    evals += r.n_evaluations;
    r.admissible = !admissible || admissible(r.params);
    r.history.front().admissible = r.admissible;
    history.push_back(r.history.front());
    if (s == 0 || r.chi2 < best_any.chi2) best_any = r;
    if (r.admissible && (!have || r.chi2 < best.chi2)) {
      best = std::move(r);
      have = true;
    }
  }
  if (!have) best = std::move(best_any);
  best.history = std::move(history);
  best.n_evaluations = evals;
  return best;
}

std::string ParamTable::to_text() const {
  std::ostringstream os;
  for (const auto& h : header) os << std::setw(16) << h;
  os << '\n';
  for (const auto& r : rows) {
    os << std::setw(16) << r.l << std::setw(16) << r.n << std::setw(16)
       << (std::isnan(r.E) ? std::string("-") : fmt_double(r.E)) << std::setw(16) << r.label;
    for (double v : r.values) os << std::setw(16) << std::setprecision(9) << v;
    os << '\n';
  }
  return os.str();
}

std::string ParamTable::to_csv() const {
  std::ostringstream os;
  for (size_t i = 0; i < header.size(); ++i) os << (i ? "," : "") << header[i];
  os << '\n';
  for (const auto& r : rows) {
    os << r.l << ',' << r.n << ',' << (std::isnan(r.E) ? std::string("") : fmt_double(r.E)) << ',' << r.label;
    for (double v : r.values) os << ',' << fmt_double(v);
    os << '\n';
  }
  return os.str();
}

ParamTable param_report(const FitResult& result, const FitProblem& problem) {
  ParamTable t;
  switch (problem.model) {
    case ModelKind::Jost: {
      t.header = {"l", "n", "E_n", "label", "alpha", "beta"};
      for (const auto& p : unpack_jost(problem, result.params))
        for (int n = 0; n <= p.basis.N(); ++n)
          t.rows.push_back({p.l, n, n ? p.basis.energies()[n - 1] : kNaN,
                            n ? to_string(p.basis.labels()[n - 1]) : std::string("-"), {p.alpha[n], p.beta[n]}});
      break;
    }
    case ModelKind::JostTaylor: {
      t.header = {"l", "n", "E0", "label", "a", "b"};
      for (const auto& p : unpack_taylor(problem, result.params))
        for (int n = 0; n <= p.order(); ++n) t.rows.push_back({p.l, n, p.E0, "-", {p.a[n], p.b[n]}});
      break;
    }
    case ModelKind::RMatrix: {
      t.header = {"l", "n", "E_n", "label", "gamma"};
      for (const auto& p : unpack_rmatrix(problem, result.params))
        for (int n = 0; n < p.N(); ++n)
          t.rows.push_back({p.l, n + 1, p.energies[n], to_string(p.labels[n]), {p.gammas[n]}});
      break;
    }
  }
  return t;
}

std::string fit_result_json(const FitResult& result, const FitProblem& problem) {
  nlohmann::json j;
  j["model"] = to_string(problem.model);
  j["chi2"] = result.chi2;
  j["initial_chi2"] = result.initial_chi2;
  j["n_points"] = problem.dataset.points.size();
  j["n_params"] = problem.n_params();
  j["n_evaluations"] = result.n_evaluations;
  j["converged"] = result.converged;
  j["admissible"] = result.admissible;
  j["params"] = std::vector<double>(result.params.data(), result.params.data() + result.params.size());
  nlohmann::json waves = nlohmann::json::array();
  switch (problem.model) {
    case ModelKind::Jost:
      for (const auto& p : unpack_jost(problem, result.params)) waves.push_back(to_json(p));
      break;
    case ModelKind::JostTaylor:
      for (const auto& p : unpack_taylor(problem, result.params)) waves.push_back(to_json(p));
      break;
    case ModelKind::RMatrix:
      for (const auto& p : unpack_rmatrix(problem, result.params)) waves.push_back(to_json(p));
      break;
  }
  j["partial_waves"] = waves;
  nlohmann::json hist = nlohmann::json::array();
  for (const auto& h : result.history)
    hist.push_back({{"initial_chi2", h.initial_chi2}, {"chi2", h.chi2}, {"n_evaluations", h.n_evaluations},
                    {"converged", h.converged}, {"admissible", h.admissible}});
  j["starts"] = hist;
  return j.dump(2);
}

}  // namespace jostfit
