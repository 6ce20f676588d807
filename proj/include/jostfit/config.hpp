#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "jostfit/fitting.hpp"
#include "jostfit/oracle.hpp"
#include "jostfit/poles.hpp"
#include "jostfit/rmatrix.hpp"

namespace jostfit {

struct RegionConfig {
  int l = 0;
  SearchRegion region;
};

struct ReportConfig {
  int curve_points = 331;
  double insert_min = 1.780, insert_max = 1.781;
  int insert_points = 201;
  std::string ground_truth;        // resonance CSV, relative to the config file
  double truth_E_tol = 2e-4;       // absolute
  double truth_gamma_rel_tol = 0.15;
};

struct RunConfig {
  std::filesystem::path base_dir = ".";
  std::filesystem::path out_dir = "out";

  PotentialSpec potential;
  IntegrationSettings integration;

  double e_min = 1.7, e_max = 5.0;
  int count = 40;
  int l_max = 2;
  DeltaPolicy delta;

  ModelKind model = ModelKind::Jost;
  std::vector<PolyBasis> jost_bases;
  int taylor_order = 3;
  std::vector<double> taylor_E0;
  std::vector<RParams> rmatrix;

  int starts = 40;
  std::uint64_t seed = 1;
  ScalePolicy scale = ScalePolicy::PolyMagnitude;
  bool require_causal = true;
  FitOptions fit;

  std::vector<RegionConfig> regions;        // model pole search
  double exact_theta = 0.6;
  std::vector<RegionConfig> exact_regions;  // oracle pole search

  ReportConfig report;

  int n_params() const;
  void validate() const;
};

// TOML text; base_dir anchors relative paths.
RunConfig parse_config(const std::string& text, const std::filesystem::path& base_dir = ".");
RunConfig load_config(const std::filesystem::path& path);

}  // namespace jostfit
