#include <cmath>
#include <filesystem>

#include "doctest.h"
#include "jostfit/io.hpp"
#include "jostfit/jostmodel.hpp"
#include "jostfit/oracle.hpp"
#include "jostfit/poles.hpp"
#include "physics_oracle.hpp"

using namespace jostfit;

namespace {

SearchRegion box(double re_min, double re_max, double im_min, double im_max,
                 SheetSelector sheet = SheetSelector::resonance()) {
  SearchRegion r;
  r.re_min = re_min;
  r.re_max = re_max;
  r.im_min = im_min;
  r.im_max = im_max;
  r.sheet = sheet;
  return r;
}

ABParams table1_l0() {
  Eigen::VectorXd a(4), b(4);
  a << 3.8898e5, -19.967, -2.0212e5, 5.3628e5;
  b << 4.9502e4, 30.567, 3.0482e4, 9.7332e3;
  return ABParams(0, PolyBasis({1.78, 4.0, 0.0}), a, b);
}

}  // namespace

TEST_CASE("contour_count") {
  const Complex z0(4, -0.5);
  const ComplexFn f = [&](Complex E) { return E - z0; };
  CHECK(contour_count(f, box(3, 5, -1, 0)) == 1);
  CHECK(contour_count(f, box(4.5, 5, -1, 0)) == 0);
  const ComplexFn g = [](Complex E) { return (E - Complex(2, -0.2)) * (E - Complex(2.5, -0.7)) * (E - Complex(9, 0)); };
  CHECK(contour_count(g, box(1, 3, -1, -0.01)) == 2);
  // a zero on the boundary is perturbed away, not missed silently
  CHECK_NOTHROW(contour_count(f, box(3, 5, -0.5, 0)));
}

TEST_CASE("refine_zero") {
  const ComplexFn f = [](Complex E) { return E - 2.0; };
  CHECK(std::abs(refine_zero(f, 2.5) - 2.0) < 1e-12);
  const ComplexFn g = [](Complex E) { return std::exp(E) - Complex(1, 1); };
  const Complex z = refine_zero(g, Complex(0.3, 0.7));
  CHECK(std::abs(z - std::log(Complex(1, 1))) < 1e-12);
  const ComplexFn none = [](Complex) { return Complex(1, 0); };
  CHECK_THROWS_AS(refine_zero(none, 1.0), NumericalError);
}

TEST_CASE("find_zeros conserves the count") {
  const std::vector<Complex> roots = {{1.5, -0.3}, {1.5001, -0.3}, {2.2, -1e-5}, {3.9, -0.9}};
  const ComplexFn f = [&](Complex E) {
    Complex p = 1;
    for (Complex r : roots) p *= E - r;
    return p;
  };
  SearchRegion r = box(1, 4.5, -1.2, -1e-7);
  r.hot_re = {2.2};
  const int n = contour_count(f, r);
  const std::vector<Complex> zs = find_zeros(f, r);
  CHECK(n == 4);
  REQUIRE(zs.size() == 4);
  for (Complex want : roots) {
    double best = 1e9;
    for (Complex z : zs) best = std::min(best, std::abs(z - want));
    CHECK(best < 1e-10);
  }
  CHECK(find_zeros(f, box(5, 6, -1, -0.1)).empty());
}

TEST_CASE("zeros_to_resonances") {
  const std::vector<Resonance> rs =
      zeros_to_resonances(1, {Complex(3.0, -0.2), Complex(2.0, -0.5)}, SheetSelector::resonance());
  REQUIRE(rs.size() == 2);
  CHECK(rs[0].E_r == 2.0);
  CHECK(rs[0].Gamma == 1.0);
  CHECK(rs[1].E_r == 3.0);
  CHECK(rs[1].Gamma == -2 * -0.2);
  CHECK(rs[1].l == 1);
}

TEST_CASE("reference l = 0 coefficients give the reference fitted zeros") {
  SearchRegion r = box(1.7, 4.5, -1.5, -1e-7);
  r.hot_re = {1.78, 4.0};
  const std::vector<Resonance> rs = find_resonances(table1_l0(), 1.0, -2.0, r);
  REQUIRE(rs.size() == 2);
  CHECK(rs[0].E_r == doctest::Approx(1.780524652).epsilon(1e-9));
  CHECK(rs[0].Gamma == doctest::Approx(9.6022e-5).epsilon(1e-4));
  for (size_t i = 0; i < 2; ++i) {
    CHECK(rs[i].E_r == doctest::Approx(physics_oracle::table1_l0_zeros[i].E_r).epsilon(1e-10));
    CHECK(rs[i].Gamma == doctest::Approx(physics_oracle::table1_l0_zeros[i].Gamma).epsilon(1e-8));
  }

  // zeros are sheet-specific, A and B are not
  const ABParams p = table1_l0();
  for (const Resonance& z : rs) {
    const AB ab = eval_A_B(p, z.E_complex);
    const Complex f0 = jost_from_AB(make_kinematics(z.E_complex, 1.0, -2.0, z.sheet), 0, ab.A, ab.B).f_in;
    const JostPair near =
        jost_from_AB(make_kinematics(z.E_complex + Complex(0.01, 0), 1.0, -2.0, z.sheet), 0, ab.A, ab.B);
    for (int lb : {-1, 1}) {
      const Complex f1 = jost_from_AB(make_kinematics(z.E_complex, 1.0, -2.0, SheetSelector{-1, lb}), 0, ab.A, ab.B).f_in;
      CHECK(std::abs(f1) > 1e3 * std::abs(f0));
    }
    CHECK(std::abs(f0) < 1e-8 * std::abs(near.f_in));
  }
}

TEST_CASE("no resonance zeros of the exact f_in on the physical sheet") {
  const PotentialSpec p;
  IntegrationSettings s;
  s.rotation_theta = -0.6;  // H(-) must dominate along the ray on this sheet
  const SearchRegion r = box(1.5, 5.5, -1.5, -1e-3, SheetSelector::physical());
  const ComplexFn f = [&](Complex E) { return solve_jost(p, 0, E, s, SheetSelector::physical()).f_in; };
  ContourOptions opt;
  CHECK(contour_count(f, r, opt) == 0);
}

TEST_CASE("resonance CSV and JSON") {
  const auto dir = std::filesystem::temp_directory_path();
  const std::vector<Resonance> rs = {make_resonance(0, Complex(1.780524536, -4.78595e-5), SheetSelector::resonance()),
                                     make_resonance(2, Complex(4.9005161451, -0.78375), SheetSelector{-1, 1})};
  const std::string path = (dir / "jostfit_test_res.csv").string();
  write_resonances_csv(path, rs);
  CHECK(read_text(path).rfind("l,E_r,Gamma,Re_E,Im_E,sheet\n", 0) == 0);
  const std::vector<Resonance> back = read_resonances_csv(path);
  REQUIRE(back.size() == 2);
  for (size_t i = 0; i < 2; ++i) {
    CHECK(back[i].l == rs[i].l);
    CHECK(back[i].E_r == rs[i].E_r);
    CHECK(back[i].Gamma == rs[i].Gamma);
    CHECK(back[i].E_complex == rs[i].E_complex);
    CHECK(back[i].sheet == rs[i].sheet);
  }
  const auto j = nlohmann::json::parse(resonances_json(rs));
  REQUIRE(j.size() == 2);
  CHECK(j[1]["E_r"].get<double>() == rs[1].E_r);

  write_resonances_csv(path, {});
  CHECK(read_text(path) == "l,E_r,Gamma,Re_E,Im_E,sheet\n");
  CHECK(read_resonances_csv(path).empty());
  std::filesystem::remove(path);
}
