#include <cmath>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "jostfit/io.hpp"
#include "jostfit/pipeline.hpp"

using namespace jostfit;
namespace fs = std::filesystem;

namespace {

const char* kSmall = R"(
out_dir = "out"

[dataset]
e_min = 1.7
e_max = 5.0
count = 6
l_max = 0

[model]
kind = "jost"

[[model.basis]]
l = 0
energies = [1.78, 4.0, 0.0]
labels = ["resonance", "resonance", "background"]

[[model.channel]]
l = 0
a = 0.53
energies = [0.0, 1.78, 4.0, 20.0]
gammas = [0.36862, 0.59070e-2, 0.44958, 0.88622]

[fit]
starts = 1
seed = 7
require_causal = false
max_evaluations = 400
restarts = 0
lm_max_iterations = 20

[[poles.region]]
l = 0
re_min = 1.75
re_max = 1.81
im_min = -0.01
im_max = -1e-7

[report]
curve_points = 5
insert_points = 3
)";

struct TempDir {
  fs::path path;
  explicit TempDir(const std::string& name) : path(fs::temp_directory_path() / name) {
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
};

fs::path write_config(const fs::path& dir, const std::string& text) {
  const fs::path p = dir / "run.toml";
  std::ofstream(p) << text;
  return p;
}

int cli(std::vector<std::string> args) {
  args.insert(args.begin(), "jostfit");
  std::vector<char*> argv;
  for (auto& a : args) argv.push_back(a.data());
  return run_cli(static_cast<int>(argv.size()), argv.data());
}

std::string with(const std::string& base, const std::string& from, const std::string& to) {
  std::string s = base;
  const auto pos = s.find(from);
  REQUIRE(pos != std::string::npos);
  s.replace(pos, from.size(), to);
  return s;
}

int csv_rows(const fs::path& p) {
  const std::string t = read_text(p.string());
  int n = 0;
  for (char c : t) n += c == '\n';
  return n - 1;
}

}  // namespace

TEST_CASE("reference config parses") {
  const RunConfig c = load_config(fs::path(JOSTFIT_CONFIG_DIR) / "reference.toml");
  CHECK(c.n_params() == 24);
  CHECK(c.count == 40);
  CHECK(c.l_max == 2);
  CHECK(c.starts == 200);
  CHECK(c.regions.size() == 3);
  CHECK(c.exact_regions.size() == 3);
  CHECK(c.rmatrix.size() == 3);
  CHECK(c.report.ground_truth == "reference_resonances.csv");
}

TEST_CASE("config errors") {
  CHECK_THROWS_AS(parse_config("count = [1"), ConfigError);
  CHECK_THROWS_AS(parse_config(with(kSmall, "count = 6", "count = 0")), ConfigError);
  CHECK_THROWS_AS(parse_config(with(kSmall, "count = 6", "count = 6.5")), ConfigError);
  CHECK_THROWS_AS(parse_config(with(kSmall, "l_max = 0", "l_max = 1")), ConfigError);
  CHECK_THROWS_AS(parse_config(with(kSmall, "kind = \"jost\"", "kind = \"spline\"")), ConfigError);
  CHECK_THROWS_AS(parse_config(with(kSmall, "e_max = 5.0", "e_max = 1.0")), ConfigError);
  CHECK_THROWS_AS(parse_config(with(kSmall, "im_max = -1e-7", "im_max = -0.5")), ConfigError);
  CHECK_THROWS_AS(parse_config(with(kSmall, "curve_points = 5", "curve_points = 1")), ConfigError);
  CHECK_THROWS_AS(parse_config(with(kSmall, "[report]", "[report]\nground_truth = \"nope.csv\"")), ConfigError);
  CHECK_THROWS_AS(load_config("/nonexistent/run.toml"), ConfigError);
  try {
    parse_config(with(kSmall, "count = 6", "count = \"six\""));
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    CHECK(std::string(e.what()).find("line") != std::string::npos);
  }
}

TEST_CASE("generate is deterministic") {
  TempDir d("jostfit_test_gen");
  RunConfig c = parse_config(kSmall, d.path);
  c.out_dir = d.path / "a";
  cmd_generate(c);
  const std::string first = read_text((c.out_dir / files::dataset).string());
  c.out_dir = d.path / "b";
  cmd_generate(c);
  CHECK(read_text((c.out_dir / files::dataset).string()) == first);
  CHECK(csv_rows(c.out_dir / files::dataset) == 6);

  c.count = 2;
  cmd_generate(c);
  const CrossSectionDataset ds = read_dataset_csv((c.out_dir / files::dataset).string(), 0);
  REQUIRE(ds.points.size() == 2);
  CHECK(ds.points[0].E == 1.7);
  CHECK(ds.points[1].E == 5.0);
}

TEST_CASE("pipeline stages and artifacts") {
  TempDir d("jostfit_test_pipe");
  const fs::path cfg = write_config(d.path, kSmall);
  const fs::path out = d.path / "out";

  // stages refuse to run without their inputs
  CHECK(cli({"--config", cfg.string(), "fit"}) == kExitConfig);
  CHECK(cli({"--config", cfg.string(), "poles"}) == kExitConfig);
  CHECK(cli({"--config", cfg.string(), "report"}) == kExitConfig);

  CHECK(cli({"--config", cfg.string(), "generate"}) == kExitOk);
  CHECK(fs::exists(out / files::dataset));
  CHECK(fs::exists(out / files::dataset_meta));

  const int rc = cli({"--config", cfg.string(), "fit"});
  CHECK((rc == kExitOk || rc == kExitNonConverged));
  CHECK(csv_rows(out / files::params_csv) == 4);
  const FittedModel fm = read_fit_result(out / files::fit_result);
  CHECK(fm.model == ModelKind::Jost);
  CHECK(fm.l_max() == 0);
  CHECK(std::isfinite(fm.chi2));

  CHECK(cli({"--config", cfg.string(), "poles"}) == kExitOk);
  CHECK(fs::exists(out / files::resonances_json));
  const auto found = read_resonances_csv((out / files::resonances_csv).string());
  for (const auto& r : found) CHECK(r.l == 0);

  CHECK(cli({"--config", cfg.string(), "report"}) == kExitOk);
  for (const char* f : {"fig_total.csv", "fig_l0.csv", "insert_total.csv", "insert_l0.csv", "summary.txt"})
    CHECK(fs::exists(out / f));
  CHECK(csv_rows(out / "fig_total.csv") == 5);
  CHECK(csv_rows(out / "insert_l0.csv") == 3);
  const auto j = nlohmann::json::parse(read_text((out / files::summary_json).string()));
  CHECK(j["model"] == "jost");
  CHECK(j["max_rel_deviation_at_data"].get<double>() >= 0);

  // --out redirects; rfit with no budget keeps the configured channels
  const fs::path cfg0 = write_config(d.path, with(kSmall, "max_evaluations = 400", "max_evaluations = 0"));
  const fs::path out2 = d.path / "r";
  CHECK(cli({"--config", cfg0.string(), "--out", out2.string(), "generate"}) == kExitOk);
  CHECK(cli({"--config", cfg0.string(), "--out", out2.string(), "rfit"}) == kExitNonConverged);
  CHECK(read_fit_result(out2 / files::fit_result).model == ModelKind::RMatrix);
  CHECK(csv_rows(out2 / files::params_csv) == 4);
  CHECK(cli({"--config", cfg0.string(), "--out", out2.string(), "poles"}) == kExitOk);
  const auto poles = read_resonances_csv((out2 / files::resonances_csv).string());
  REQUIRE(poles.size() == 1);
  CHECK(poles[0].E_r == doctest::Approx(1.7800003).epsilon(1e-6));
}

TEST_CASE("empty search region gives a header-only table") {
  TempDir d("jostfit_test_empty");
  const std::string text = with(kSmall, "re_min = 1.75\nre_max = 1.81", "re_min = 2.5\nre_max = 3.0");
  const fs::path cfg = write_config(d.path, text);
  CHECK(cli({"--config", cfg.string(), "--model", "rmatrix", "generate"}) == kExitOk);
  const int rc = cli({"--config", cfg.string(), "--model", "rmatrix", "fit"});
  CHECK((rc == kExitOk || rc == kExitNonConverged));
  CHECK(cli({"--config", cfg.string(), "poles"}) == kExitOk);
  CHECK(read_text((d.path / "out" / files::resonances_csv).string()) == "l,E_r,Gamma,Re_E,Im_E,sheet\n");
}

TEST_CASE("exit codes") {
  TempDir d("jostfit_test_exit");
  const fs::path cfg = write_config(d.path, with(kSmall, "max_evaluations = 400", "max_evaluations = 0"));
  CHECK(cli({"--config", (d.path / "missing.toml").string(), "generate"}) == kExitConfig);
  CHECK(cli({"--config", cfg.string(), "--model", "spline", "generate"}) == kExitConfig);
  CHECK(cli({"--config", cfg.string()}) == kExitConfig);
  CHECK(cli({"--config", cfg.string(), "frobnicate"}) == kExitConfig);
  CHECK(cli({"generate"}) == kExitConfig);

  CHECK(cli({"--config", cfg.string(), "generate"}) == kExitOk);
  CHECK(cli({"--config", cfg.string(), "--seed", "3", "fit"}) == kExitNonConverged);
  CHECK_FALSE(read_fit_result(d.path / "out" / files::fit_result).converged);

  const fs::path bad = write_config(d.path, with(kSmall, "[dataset]", "[integration]\nmax_steps = 3\n\n[dataset]"));
  CHECK(cli({"--config", bad.string(), "generate"}) == kExitNumerical);
}
