#pragma once

#include <string>
#include <vector>

#include "jostfit/jostmodel.hpp"
#include "jostfit/poles.hpp"
#include "jostfit/specfun.hpp"

namespace jostfit {

// V(r) = (hbar^2 / 2 mu) (strength r^2 e^{-r} + coulomb_z / r)
struct PotentialSpec {
  double strength = 15.0;
  double coulomb_z = -2.0;
  double mu = 1.0;
  double hbar = 1.0;

  double mu_eff() const { return mu / (hbar * hbar); }  // k^2 = 2 mu_eff E
};

struct IntegrationSettings {
  double r_min = 1e-4;
  double r_max = 60.0;
  double rotation_theta = 0.0;
  double tolerance = 1e-12;
  long max_steps = 200000;

  void validate() const;
};

struct DataPoint {
  double E = 0, sigma = 0, delta = 1;
};

struct CrossSectionDataset {
  std::vector<DataPoint> points;
  int l_max = 2;
  std::string provenance;

  void validate() const;
};

struct DeltaPolicy {
  enum class Kind { Constant, Relative } kind = Kind::Constant;
  double value = 1.0;  // constant delta, or fraction of sigma
};

double potential_value(const PotentialSpec& spec, double r);

// Regular solution integrated along r = x e^{i theta}, decomposed at r_max into
// (1/2)[H(-) e^{i sigma} f_in + H(+) e^{-i sigma} f_out].
JostPair solve_jost(const PotentialSpec& spec, int l, Complex E, const IntegrationSettings& settings = {},
                    SheetSelector sheet = SheetSelector::physical());

// f_out / f_in; PoleError when f_in vanishes.
Complex s_matrix_exact(const PotentialSpec& spec, int l, Complex E, const IntegrationSettings& settings = {},
                       SheetSelector sheet = SheetSelector::physical());

CrossSections cross_sections_exact(const PotentialSpec& spec, double E, int l_max,
                                   const IntegrationSettings& settings = {});

CrossSectionDataset generate_dataset(const PotentialSpec& spec, double E_min, double E_max, int n_points, int l_max,
                                     const DeltaPolicy& delta = {}, const IntegrationSettings& settings = {});

// Zeros of the oracle f_in on region.sheet; settings.rotation_theta must uncover them.
std::vector<Resonance> exact_resonances(const PotentialSpec& spec, int l, const SearchRegion& region,
                                        const IntegrationSettings& settings, const ContourOptions& options = {});

void write_dataset_csv(const std::string& path, const CrossSectionDataset& ds);
CrossSectionDataset read_dataset_csv(const std::string& path, int l_max = 2);
std::string dataset_metadata_json(const CrossSectionDataset& ds, const PotentialSpec& spec, const DeltaPolicy& delta);

}  // namespace jostfit
