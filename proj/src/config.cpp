#include "jostfit/config.hpp"

#include <sstream>

#include "jostfit/io.hpp"
#include "toml.hpp"

namespace jostfit {
namespace {

std::string where(const toml::node& n) {
  std::ostringstream os;
  os << " (line " << n.source().begin.line << ")";
  return os.str();
}

double get_double(const toml::table& t, const char* key, double def) {
  const toml::node* n = t.get(key);
  if (!n) return def;
  if (auto v = n->value<double>()) return *v;
  throw ConfigError(std::string("'") + key + "' must be a number" + where(*n));
}

long get_int(const toml::table& t, const char* key, long def) {
  const toml::node* n = t.get(key);
  if (!n) return def;
  if (auto v = n->value_exact<int64_t>()) return static_cast<long>(*v);
  throw ConfigError(std::string("'") + key + "' must be an integer" + where(*n));
}

bool get_bool(const toml::table& t, const char* key, bool def) {
  const toml::node* n = t.get(key);
  if (!n) return def;
  if (auto v = n->value_exact<bool>()) return *v;
  throw ConfigError(std::string("'") + key + "' must be true or false" + where(*n));
}

std::string get_string(const toml::table& t, const char* key, const std::string& def) {
  const toml::node* n = t.get(key);
  if (!n) return def;
  if (auto v = n->value_exact<std::string>()) return *v;
  throw ConfigError(std::string("'") + key + "' must be a string" + where(*n));
}

const toml::table* get_table(const toml::table& t, const char* key) {
  const toml::node* n = t.get(key);
  if (!n) return nullptr;
  if (!n->is_table()) throw ConfigError(std::string("'") + key + "' must be a table" + where(*n));
  return n->as_table();
}

const toml::array* get_array(const toml::table& t, const char* key) {
  const toml::node* n = t.get(key);
  if (!n) return nullptr;
  if (!n->is_array()) throw ConfigError(std::string("'") + key + "' must be an array" + where(*n));
  return n->as_array();
}

std::vector<double> get_doubles(const toml::table& t, const char* key) {
  std::vector<double> out;
  if (const toml::array* a = get_array(t, key))
    for (const auto& e : *a) {
      auto v = e.value<double>();
      if (!v) throw ConfigError(std::string("'") + key + "' must hold numbers" + where(e));
      out.push_back(*v);
    }
  return out;
}

std::vector<BasisLabel> get_labels(const toml::table& t, size_t n) {
  std::vector<BasisLabel> out;
  if (const toml::array* a = get_array(t, "labels"))
    for (const auto& e : *a) {
      auto v = e.value_exact<std::string>();
      if (!v) throw ConfigError("'labels' must hold strings" + where(e));
      out.push_back(basis_label_from_string(*v));
    }
  if (out.empty()) out.assign(n, BasisLabel::Resonance);
  return out;
}

// [[name]] entries, each with an integer l; returned ordered by l.
std::vector<const toml::table*> per_l_tables(const toml::table& t, const char* key, int l_max, bool required) {
  std::vector<const toml::table*> out(l_max + 1, nullptr);
  const toml::array* a = get_array(t, key);
  if (!a) {
    if (required) throw ConfigError(std::string("missing [[") + key + "] entries");
    return {};
  }
  for (const auto& e : *a) {
    const toml::table* et = e.as_table();
    if (!et) throw ConfigError(std::string("[[") + key + "] entries must be tables" + where(e));
    const long l = get_int(*et, "l", -1);
    if (l < 0 || l > l_max) throw ConfigError(std::string("[[") + key + "] has l outside 0..l_max" + where(e));
    if (out[l]) throw ConfigError(std::string("[[") + key + "] repeats l = " + std::to_string(l) + where(e));
    out[l] = et;
  }
  for (int l = 0; l <= l_max; ++l)
    if (!out[l]) throw ConfigError(std::string("[[") + key + "] is missing l = " + std::to_string(l));
  return out;
}

SheetSelector read_sheet(const toml::table& t) {
  SheetSelector s = SheetSelector::resonance();
  s.k_branch = static_cast<int>(get_int(t, "k_branch", s.k_branch));
  s.log_branch = static_cast<int>(get_int(t, "log_branch", s.log_branch));
  if (s.k_branch != 1 && s.k_branch != -1) throw ConfigError("k_branch must be +1 or -1" + where(t));
  return s;
}

std::vector<RegionConfig> read_regions(const toml::table& t, const char* key, int l_max) {
  std::vector<RegionConfig> out;
  const toml::array* a = get_array(t, key);
  if (!a) return out;
  for (const auto& e : *a) {
    const toml::table* et = e.as_table();
    if (!et) throw ConfigError(std::string("[[") + key + "] entries must be tables" + where(e));
    RegionConfig rc;
    rc.l = static_cast<int>(get_int(*et, "l", -1));
    if (rc.l < 0 || rc.l > l_max) throw ConfigError(std::string("[[") + key + "] has l outside 0..l_max" + where(e));
    SearchRegion& r = rc.region;
    r.re_min = get_double(*et, "re_min", r.re_min);
    r.re_max = get_double(*et, "re_max", r.re_max);
    r.im_min = get_double(*et, "im_min", r.im_min);
    r.im_max = get_double(*et, "im_max", r.im_max);
    r.grid_re = static_cast<int>(get_int(*et, "grid_re", r.grid_re));
    r.grid_im = static_cast<int>(get_int(*et, "grid_im", r.grid_im));
    r.sheet = read_sheet(*et);
    if (!(r.re_max > r.re_min) || !(r.im_max > r.im_min))
      throw ConfigError(std::string("[[") + key + "] region is empty" + where(e));
    out.push_back(rc);
  }
  return out;
}

}  // namespace

int RunConfig::n_params() const {
  int n = 0;
  switch (model) {
    case ModelKind::Jost:
      for (const auto& b : jost_bases) n += 2 * (b.N() + 1);
      break;
    case ModelKind::JostTaylor:
      n = 2 * (taylor_order + 1) * (l_max + 1);
      break;
    case ModelKind::RMatrix:
      for (const auto& r : rmatrix) n += r.N();
      break;
  }
  return n;
}

void RunConfig::validate() const {
  integration.validate();
  if (!(potential.mu > 0) || !(potential.hbar > 0)) throw ConfigError("mu and hbar must be positive");
  if (!(e_min > 0) || !(e_max > e_min)) throw ConfigError("dataset needs 0 < e_min < e_max");
  if (count < 1) throw ConfigError("dataset count must be at least 1");
  if (l_max < 0) throw ConfigError("l_max must be non-negative");
  if (!(delta.value > 0)) throw ConfigError("delta value must be positive");
  if (starts < 1) throw ConfigError("fit needs at least one start");
  switch (model) {
    case ModelKind::Jost:
      if (static_cast<int>(jost_bases.size()) != l_max + 1) throw ConfigError("jost model needs one basis per l");
      break;
    case ModelKind::JostTaylor:
      if (static_cast<int>(taylor_E0.size()) != l_max + 1) throw ConfigError("jost_taylor needs one e0 per l");
      if (taylor_order < 0) throw ConfigError("taylor order must be non-negative");
      break;
    case ModelKind::RMatrix:
      if (static_cast<int>(rmatrix.size()) != l_max + 1) throw ConfigError("rmatrix model needs one channel per l");
      break;
  }
  if (n_params() < 1) throw ConfigError("model has no free parameters");
  if (report.curve_points < 2 || report.insert_points < 2) throw ConfigError("report curves need at least 2 points");
  if (!report.ground_truth.empty() && !std::filesystem::exists(base_dir / report.ground_truth))
    throw ConfigError("ground truth file not found: " + (base_dir / report.ground_truth).string());
}

RunConfig parse_config(const std::string& text, const std::filesystem::path& base_dir) {
  toml::table root;
  try {
    root = toml::parse(text);
  } catch (const toml::parse_error& e) {
    std::ostringstream os;
    os << "config: " << e.description() << " (line " << e.source().begin.line << ")";
    throw ConfigError(os.str());
  }
  RunConfig c;
  c.base_dir = base_dir;
  c.out_dir = get_string(root, "out_dir", c.out_dir.string());

  if (const toml::table* t = get_table(root, "potential")) {
    c.potential.strength = get_double(*t, "strength", c.potential.strength);
    c.potential.coulomb_z = get_double(*t, "coulomb_z", c.potential.coulomb_z);
    c.potential.mu = get_double(*t, "mu", c.potential.mu);
    c.potential.hbar = get_double(*t, "hbar", c.potential.hbar);
  }
  if (const toml::table* t = get_table(root, "integration")) {
    c.integration.r_min = get_double(*t, "r_min", c.integration.r_min);
    c.integration.r_max = get_double(*t, "r_max", c.integration.r_max);
    c.integration.tolerance = get_double(*t, "tolerance", c.integration.tolerance);
    c.integration.max_steps = get_int(*t, "max_steps", c.integration.max_steps);
  }
  if (const toml::table* t = get_table(root, "dataset")) {
    c.e_min = get_double(*t, "e_min", c.e_min);
    c.e_max = get_double(*t, "e_max", c.e_max);
    c.count = static_cast<int>(get_int(*t, "count", c.count));
    c.l_max = static_cast<int>(get_int(*t, "l_max", c.l_max));
    const std::string kind = get_string(*t, "delta", "constant");
    if (kind == "constant")
      c.delta.kind = DeltaPolicy::Kind::Constant;
    else if (kind == "relative")
      c.delta.kind = DeltaPolicy::Kind::Relative;
    else
      throw ConfigError("dataset.delta must be 'constant' or 'relative'");
    c.delta.value = get_double(*t, "delta_value", c.delta.value);
  }
  if (c.l_max < 0 || c.l_max > 20) throw ConfigError("l_max must be in 0..20");

  if (const toml::table* t = get_table(root, "model")) {
    c.model = model_kind_from_string(get_string(*t, "kind", to_string(c.model)));
    if (get_array(*t, "basis")) {
      for (const toml::table* b : per_l_tables(*t, "basis", c.l_max, true)) {
        const auto e = get_doubles(*b, "energies");
        c.jost_bases.emplace_back(e, get_labels(*b, e.size()));
      }
    }
    if (const toml::table* tt = get_table(*t, "taylor")) {
      c.taylor_order = static_cast<int>(get_int(*tt, "order", c.taylor_order));
      c.taylor_E0 = get_doubles(*tt, "e0");
    }
    if (get_array(*t, "channel")) {
      for (const toml::table* ch : per_l_tables(*t, "channel", c.l_max, true)) {
        const auto e = get_doubles(*ch, "energies");
        const auto g = get_doubles(*ch, "gammas");
        Eigen::VectorXd gv = Eigen::Map<const Eigen::VectorXd>(g.data(), static_cast<Eigen::Index>(g.size()));
        const int l = static_cast<int>(c.rmatrix.size());
        c.rmatrix.emplace_back(l, e, gv, get_double(*ch, "a", 1.0), get_double(*ch, "B_R", 0.0),
                               get_labels(*ch, e.size()));
      }
    }
  }
  if (const toml::table* t = get_table(root, "fit")) {
    c.starts = static_cast<int>(get_int(*t, "starts", c.starts));
    c.seed = static_cast<std::uint64_t>(get_int(*t, "seed", static_cast<long>(c.seed)));
    const std::string sc = get_string(*t, "scale", "poly");
    if (sc == "poly")
      c.scale = ScalePolicy::PolyMagnitude;
    else if (sc == "unit")
      c.scale = ScalePolicy::Unit;
    else
      throw ConfigError("fit.scale must be 'poly' or 'unit'");
    c.require_causal = get_bool(*t, "require_causal", c.require_causal);
    c.fit.max_evaluations = get_int(*t, "max_evaluations", c.fit.max_evaluations);
    c.fit.simplex_tol = get_double(*t, "simplex_tol", c.fit.simplex_tol);
    c.fit.restarts = static_cast<int>(get_int(*t, "restarts", c.fit.restarts));
    c.fit.polish = get_bool(*t, "polish", c.fit.polish);
    c.fit.lm_max_iterations = static_cast<int>(get_int(*t, "lm_max_iterations", c.fit.lm_max_iterations));
    c.fit.lm_tol = get_double(*t, "lm_tol", c.fit.lm_tol);
  }
  if (const toml::table* t = get_table(root, "poles")) {
    c.regions = read_regions(*t, "region", c.l_max);
    c.exact_theta = get_double(*t, "exact_theta", c.exact_theta);
    c.exact_regions = read_regions(*t, "exact_region", c.l_max);
  }
  if (const toml::table* t = get_table(root, "report")) {
    c.report.curve_points = static_cast<int>(get_int(*t, "curve_points", c.report.curve_points));
    c.report.insert_min = get_double(*t, "insert_min", c.report.insert_min);
    c.report.insert_max = get_double(*t, "insert_max", c.report.insert_max);
    c.report.insert_points = static_cast<int>(get_int(*t, "insert_points", c.report.insert_points));
    c.report.ground_truth = get_string(*t, "ground_truth", c.report.ground_truth);
    c.report.truth_E_tol = get_double(*t, "truth_E_tol", c.report.truth_E_tol);
    c.report.truth_gamma_rel_tol = get_double(*t, "truth_gamma_rel_tol", c.report.truth_gamma_rel_tol);
  }
  c.validate();
  return c;
}

RunConfig load_config(const std::filesystem::path& path) {
  if (!std::filesystem::exists(path)) throw ConfigError("config file not found: " + path.string());
  return parse_config(read_text(path.string()), path.parent_path().empty() ? "." : path.parent_path());
}

}  // namespace jostfit
