#pragma once

#include <functional>
#include <string>
#include <vector>

#include "jostfit/resonance.hpp"
#include "jostfit/types.hpp"

namespace jostfit {

struct ABParams;
struct TaylorParams;

struct SearchRegion {
  double re_min = 0, re_max = 1;
  double im_min = -1, im_max = 0;
  SheetSelector sheet = SheetSelector::resonance();
  int grid_re = 24, grid_im = 12;  // initial boundary segments per edge
  std::vector<double> hot_re;       // Re E of known sharp features; sampled geometrically on horizontal edges

  double width() const { return re_max - re_min; }
  double height() const { return im_max - im_min; }
  bool contains(Complex z, double margin = 0) const;
};

struct ContourOptions {
  double min_segment = 1e-14;  // relative to the edge length
  int perturb_attempts = 4;
  double min_box_height = 1e-8;
  double refine_tol = 1e-13;
  int max_boxes = 4000;
};

using ComplexFn = std::function<Complex(Complex)>;

// Winding number of f along the boundary of region.
int contour_count(const ComplexFn& f, const SearchRegion& region, const ContourOptions& options = {});

// Muller iteration from seed. Throws NumericalError on divergence.
Complex refine_zero(const ComplexFn& f, Complex seed, double tol = 1e-13, double step = 1e-3);

// All zeros of f inside region, certified by contour counts.
std::vector<Complex> find_zeros(const ComplexFn& f, const SearchRegion& region, const ContourOptions& options = {});

std::vector<Resonance> zeros_to_resonances(int l, const std::vector<Complex>& zeros, SheetSelector sheet);

// Zeros of the model f_in for one partial wave on region.sheet.
std::vector<Resonance> find_resonances(const ABParams& params, double mu, double z, const SearchRegion& region,
                                       const ContourOptions& options = {});

std::vector<Resonance> find_resonances(const TaylorParams& params, double mu, double z, const SearchRegion& region,
                                       const ContourOptions& options = {});

// Zeros of the model f_in on the physical sheet below the real axis, where a causal S-matrix has none.
int physical_zero_count(const ABParams& params, double mu, double z, SearchRegion region,
                        const ContourOptions& options = {});
int physical_zero_count(const TaylorParams& params, double mu, double z, SearchRegion region,
                        const ContourOptions& options = {});

void write_resonances_csv(const std::string& path, const std::vector<Resonance>& rows);
std::vector<Resonance> read_resonances_csv(const std::string& path);
std::string resonances_json(const std::vector<Resonance>& rows);

}  // namespace jostfit
