#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "rsfield/variation.hpp"
#include "rsfield/verify.hpp"

using namespace rsfield;

TEST_CASE("Vitali variation of additive and product functions") {
  const Box box{{0, 0}, {1, 1}};
  ScalarFn additive = [](const Point& p) { return p[0] + p[1]; };
  VariationEstimate va = vitali_variation(additive, box, 3, 8);
  CHECK(va.value <= 1e-12);
  CHECK(va.is_lower_bound);

  ScalarFn prod = [](const Point& p) { return p[0] * p[1]; };
  // analytic: int int |d^2(u1 u2)/du1 du2| = area = 1
  VariationEstimate vp = vitali_variation(prod, box, 3, 8);
  CHECK(vp.value == doctest::Approx(1.0).epsilon(1e-12));

  ScalarFn constant = [](const Point&) { return 3.5; };
  CHECK(vitali_variation(constant, box, 3, 8).value == 0.0);
}

TEST_CASE("Vitali variation never decreases under refinement") {
  SmoothFn f = random_separable(2, 4041);
  const Box box{{0, 0}, {1, 1}};
  double prev = -1.0;
  for (int r = 1; r <= 4; ++r) {
    VariationEstimate est = vitali_variation(f.value, box, r, 4);
    CHECK(est.value >= prev - 1e-12);
    prev = est.value;
  }
}

TEST_CASE("Hardy-Krause variation of t1 + t2 on the unit square is 2") {
  // 1-D trace oracle: variation of a slope-1 line over [0,1] is 1, twice;
  // the 2-D Vitali term vanishes.
  const Box box{{0, 0}, {1, 1}};
  ScalarFn additive = [](const Point& p) { return p[0] + p[1]; };
  VariationEstimate hk = hk_variation(additive, box, 3, 8);
  CHECK(hk.value == doctest::Approx(2.0).epsilon(1e-12));

  ScalarFn constant = [](const Point&) { return -2.0; };
  CHECK(hk_variation(constant, box, 3, 8).value == 0.0);
}

TEST_CASE("smooth formula matches analytic antiderivatives for e^{u1+u2}") {
  const Box box{{0, 0}, {1, 1}};
  const double e = std::exp(1.0);
  // v={1}: int_0^1 e^{r+1} dr = (e-1)e ; v={2}: e(e-1) ; v={1,2}: (e-1)^2
  const double analytic = (e - 1.0) * e + e * (e - 1.0) + (e - 1.0) * (e - 1.0);

  SmoothFn f = exp_dot({1.0, 1.0});
  const double smooth = hk_variation_smooth(f, box, 6, 8);
  CHECK(smooth == doctest::Approx(analytic).epsilon(1e-6));

  VariationEstimate ladder = hk_variation(f.value, box, 5, 16);
  CHECK(ladder.value == doctest::Approx(analytic).epsilon(1e-4));
}

TEST_CASE("smooth formula: single-variable and constant edge cases") {
  const Box box{{0, 0}, {1, 1}};
  // linear in u1 only: the only nonzero term is v={1} with integral 2
  SmoothFn lin{[](const Point& p) { return 2.0 * p[0]; },
               [](std::uint32_t mask, const Point& p) {
                 if (mask == 0) return 2.0 * p[0];
                 return mask == 0b01 ? 2.0 : 0.0;
               }};
  CHECK(hk_variation_smooth(lin, box, 4, 8) == doctest::Approx(2.0).epsilon(1e-10));

  SmoothFn constant{[](const Point&) { return 5.0; },
                    [](std::uint32_t mask, const Point&) { return mask == 0 ? 5.0 : 0.0; }};
  CHECK(hk_variation_smooth(constant, box, 4, 8) == 0.0);
}

TEST_CASE("closure sanity: sums and products of BVHK test functions stay finite") {
  const Box box{{0, 0}, {1, 1}};
  for (int trial = 0; trial < 4; ++trial) {
    SmoothFn f = random_separable(2, 5100 + trial);
    SmoothFn g = random_separable(2, 5200 + trial);
    ScalarFn sum = [&](const Point& p) { return f.value(p) + g.value(p); };
    ScalarFn prod = [&](const Point& p) { return f.value(p) * g.value(p); };
    CHECK(std::isfinite(hk_variation(sum, box, 3, 8).value));
    CHECK(std::isfinite(hk_variation(prod, box, 3, 8).value));
  }
}

TEST_CASE("sampled fields get their variation from the native grid") {
  const GridPartition P = GridPartition::uniform({0, 0}, {1, 1}, 16);
  const GridField F = GridField::sample([](const Point& p) { return p[0] * p[1]; }, P);
  VariationEstimate est = vitali_variation(F, Box{{0, 0}, {1, 1}});
  CHECK(est.value == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(est.partition_norm == doctest::Approx(P.norm()));
}
