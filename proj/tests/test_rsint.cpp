#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "rsfield/rng.hpp"
#include "rsfield/rsint.hpp"
#include "rsfield/verify.hpp"

using namespace rsfield;

namespace {
const ScalarFn one = [](const Point&) { return 1.0; };
}

TEST_CASE("g == 1 reproduces the bracket exactly at every level") {
  for (int trial = 0; trial < 6; ++trial) {
    const int N = 1 + trial % 3;
    SmoothFn f = random_separable(N, rng::substream(2024, trial));
    const Box box{Point(N, -0.3), Point(N, 0.9)};
    const double bracket = rect_increment(f.value, box.lo, box.hi);
    IntegralResult r = rs_integral(one, f.value, box, TagPolicy::midpoint(), 3, 4);
    for (const auto& [norm, value] : r.levels)
      CHECK(value == doctest::Approx(bracket).epsilon(1e-13));
  }
}

TEST_CASE("classical 1-D value: int x d(x^2) over [0,1] = 2/3") {
  ScalarFn g = [](const Point& p) { return p[0]; };
  ScalarFn f = [](const Point& p) { return p[0] * p[0]; };
  IntegralResult r = rs_integral(g, f, Box{{0.0}, {1.0}}, TagPolicy::midpoint(), 5, 8);
  CHECK(r.value == doctest::Approx(2.0 / 3.0).epsilon(1e-4));
  CHECK(r.error_estimate < 1e-4);
  // levels carry decreasing norms
  for (std::size_t k = 1; k < r.levels.size(); ++k)
    CHECK(r.levels[k].first < r.levels[k - 1].first);
}

TEST_CASE("int u1 u2 d(u1 u2) over the unit square = 1/4") {
  SmoothFn f = coordinate_product(2);
  // independent route: d(u1 u2) = du, so the value is the Riemann integral
  const double oracle = oracles::riemann_midpoint(f.value, {0, 0}, {1, 1}, 256);
  CHECK(oracle == doctest::Approx(0.25).epsilon(1e-6));
  IntegralResult r =
      rs_integral(f.value, f.value, Box{{0, 0}, {1, 1}}, TagPolicy::midpoint(), 5, 8);
  CHECK(r.value == doctest::Approx(0.25).epsilon(1e-5));
}

TEST_CASE("tag policies converge to a common value") {
  SmoothFn f = random_separable(2, 555);
  SmoothFn g = random_separable(2, 556);
  const Box box{{0, 0}, {1, 1}};
  double prev_spread = 1e300;
  for (int n : {8, 32, 128}) {
    const double lo = rs_integral(g.value, f.value, box, TagPolicy::lower(), 1, n).value;
    const double up = rs_integral(g.value, f.value, box, TagPolicy::upper(), 1, n).value;
    const double mid = rs_integral(g.value, f.value, box, TagPolicy::midpoint(), 1, n).value;
    const double rnd = rs_integral(g.value, f.value, box, TagPolicy::randomized(9), 1, n).value;
    const double spread = std::max({std::abs(lo - up), std::abs(lo - mid), std::abs(lo - rnd)});
    CHECK(spread < prev_spread + 1e-12);
    prev_spread = spread;
  }
  CHECK(prev_spread < 5e-2);
}

TEST_CASE("mixed_integral: g == 1 gives the full bracket for every v") {
  SmoothFn f = random_separable(3, 777);
  const Box box{Point(3, 0.0), Point{0.9, 0.8, 0.7}};
  const double bracket = rect_increment(f.value, box.lo, box.hi);
  for (const auto& v : subsets(3)) {
    if (v.is_empty()) continue;
    IntegralResult r = mixed_integral(one, f.value, v, box, TagPolicy::midpoint(), 2, 8);
    CHECK(r.value == doctest::Approx(bracket).epsilon(1e-10));
  }
}

TEST_CASE("mixed_integral: degenerate -v coordinate collapses to exact zero") {
  SmoothFn f = random_separable(3, 778);
  Box box{Point(3, 0.0), Point{0.9, 0.8, 0.7}};
  box.hi[2] = box.lo[2];  // degenerate in a -v coordinate for v={1,2}
  IntegralResult r =
      mixed_integral(one, f.value, MultiIndexSet::of({1, 2}, 3), box, TagPolicy::midpoint(), 2, 8);
  CHECK(r.value == 0.0);
  CHECK(r.error_estimate == 0.0);
}

TEST_CASE("mixed_integral with v = full equals rs_integral") {
  SmoothFn f = random_separable(2, 779);
  SmoothFn g = random_separable(2, 780);
  const Box box{{0, 0}, {1, 1}};
  IntegralResult direct = rs_integral(g.value, f.value, box, TagPolicy::midpoint(), 3, 8);
  IntegralResult mixed =
      mixed_integral(g.value, f.value, MultiIndexSet::full(2), box, TagPolicy::midpoint(), 3, 8);
  for (std::size_t k = 0; k < direct.levels.size(); ++k)
    CHECK(mixed.levels[k].second == doctest::Approx(direct.levels[k].second).epsilon(1e-12));
}

TEST_CASE("integration by parts in one dimension is the classical formula") {
  // int f dg = fg| - int g df with f = x^2, g = sin x on [0,1]
  ScalarFn f = [](const Point& p) { return p[0] * p[0]; };
  ScalarFn g = [](const Point& p) { return std::sin(p[0]); };
  const Box box{{0.0}, {1.0}};
  const double lhs = rs_integral(f, g, box, TagPolicy::midpoint(), 5, 8).value;
  const double rhs = ibp_rhs(f, g, box, TagPolicy::midpoint(), 5, 8).value;
  // classical closed form: 1*sin 1 - int_0^1 sin(x) 2x dx = sin1 - 2(sin1 - cos1)
  const double closed = std::sin(1.0) - 2.0 * (std::sin(1.0) - std::cos(1.0));
  CHECK(lhs == doctest::Approx(closed).epsilon(1e-5));
  CHECK(rhs == doctest::Approx(closed).epsilon(1e-5));
}

TEST_CASE("ibp_rhs with f == 1 reduces to the bracket of g") {
  SmoothFn g = random_separable(2, 881);
  const Box box{{0, 0}, {1, 1}};
  IntegralResult r = ibp_rhs(one, g.value, box, TagPolicy::midpoint(), 3, 8);
  CHECK(r.value == doctest::Approx(rect_increment(g.value, box.lo, box.hi)).epsilon(1e-10));
}

TEST_CASE("integration by parts matches the direct integral on smooth pairs") {
  SmoothFn f = exp_dot({1.0, 1.0});
  ScalarFn g = [](const Point& p) { return p[0] * p[1]; };
  const Box box{{0, 0}, {1, 1}};
  IntegralResult lhs = rs_integral(f.value, g, box, TagPolicy::midpoint(), 4, 16);
  IntegralResult rhs = ibp_rhs(f.value, g, box, TagPolicy::midpoint(), 4, 16);
  CHECK(std::abs(lhs.value - rhs.value) <= 1e-3 * std::abs(lhs.value));

  // the gap shrinks along the shared dyadic ladder
  double prev = 1e300;
  for (std::size_t k = 0; k < lhs.levels.size(); ++k) {
    const double gap = std::abs(lhs.levels[k].second - rhs.levels[k].second);
    CHECK(gap <= prev + 1e-10);
    prev = gap;
  }
}

TEST_CASE("derivative substitution: exact density and bracket reduction") {
  // f = prod u_l has f_t == 1: plain Riemann of g
  ScalarFn g = [](const Point& p) { return p[0] * p[1]; };
  IntegralResult r = substitute_derivative(g, one, Box{{0, 0}, {1, 1}}, 4, 8);
  CHECK(r.value == doctest::Approx(0.25).epsilon(1e-12));  // midpoint is exact for bilinear

  // g == 1: int f_t dr = [f]_s^t
  SmoothFn f = exp_dot({0.8, 1.3});
  ScalarFn ft = [&f](const Point& p) { return f.partial(0b11, p); };
  const Box box{{0, 0}, {1, 1}};
  IntegralResult r2 = substitute_derivative(one, ft, box, 5, 8);
  CHECK(r2.value == doctest::Approx(rect_increment(f.value, box.lo, box.hi)).epsilon(1e-5));
}

TEST_CASE("partial substitution agrees with the full integral for every v") {
  SmoothFn f = exp_dot({0.7, 1.1});
  SmoothFn g = random_separable(2, 882);
  const Box box{{0, 0}, {1, 1}};
  const double direct = rs_integral(g.value, f.value, box, TagPolicy::midpoint(), 4, 16).value;
  for (const auto& v : subsets(2)) {
    if (v.is_empty()) continue;
    IntegralResult sub = substitute_partial(g.value, f, v, box, TagPolicy::midpoint(), 4, 16);
    CHECK(sub.value == doctest::Approx(direct).epsilon(2e-3));
  }
}

TEST_CASE("product rule: collapsing cases and the smooth 2-D fixture") {
  const Box box{{0, 0}, {1, 1}};
  SmoothFn h = exp_dot({1.0, 0.0});  // e^{u1}
  SmoothFn f = exp_dot({1.0, 1.0});
  ScalarFn g = [](const Point& p) { return p[0] * p[1]; };

  // f == 1: rhs collapses to int h dg
  SmoothFn fone{one, [](std::uint32_t mask, const Point&) { return mask == 0 ? 1.0 : 0.0; }};
  auto [l1, r1] = product_rule_check(h, fone, g, box, 4, 8);
  CHECK(l1.value == doctest::Approx(r1.value).epsilon(1e-10));

  // g == 1: both sides become the Riemann integral of h f_t
  auto [l2, r2] = product_rule_check(h, f, one, box, 4, 8);
  const double riemann = oracles::riemann_midpoint(
      [&](const Point& p) { return h.value(p) * f.partial(0b11, p); }, box.lo, box.hi, 512);
  CHECK(l2.value == doctest::Approx(riemann).epsilon(1e-4));
  CHECK(r2.value == doctest::Approx(riemann).epsilon(1e-4));

  // exponential/bilinear fixture at 128 cells/axis: |lhs - rhs| within 1e-3
  auto [l3, r3] = product_rule_check(h, f, g, box, 2, 64);
  CHECK(std::abs(l3.value - r3.value) <= 1e-3 * std::max(1.0, std::abs(l3.value)));
}

TEST_CASE("fundamental lemma: dF_v = d_{-v} f dt_v") {
  const Box box{{0, 0}, {1, 1}};
  ScalarFn f = [](const Point& p) { return std::exp(p[0] + p[1]); };

  auto [lhs_full, rhs_full] = fundamental_lemma_check(f, MultiIndexSet::full(2), box, 3, 8);
  CHECK(lhs_full == doctest::Approx(rhs_full).epsilon(1e-3));

  auto [lhs, rhs] = fundamental_lemma_check(f, MultiIndexSet::of({1}, 2), box, 4, 8);
  CHECK(std::abs(lhs - rhs) <= 1e-3 * std::max(1.0, std::abs(rhs)));

  // f independent of -v: the -v bracket of f vanishes, so both routes are 0
  ScalarFn f1 = [](const Point& p) { return std::sin(p[0]); };
  auto [l0, r0] = fundamental_lemma_check(f1, MultiIndexSet::of({1}, 2), box, 3, 8);
  CHECK(std::abs(l0) <= 1e-12);
  CHECK(std::abs(r0) <= 1e-12);
}

TEST_CASE("mixed Riemann/RS term matches the iterated closed form") {
  // int_0^{t1} [X(s)]_{0_{23}}^{t_{23}} ds_1 for X = sin(s1) e^{s2+s3}:
  // the inner bracket factorizes, giving (1-cos t1)(e^{t2}-1)(e^{t3}-1)
  ScalarFn X = [](const Point& p) { return std::sin(p[0]) * std::exp(p[1] + p[2]); };
  const Point t{1.0, 0.8, 0.6};
  const GridPartition P = GridPartition::uniform(Point(3, 0.0), t, 24);
  ScalarFn one_w = [](const Point&) { return 1.0; };
  const double got = detail::mixed_sum(one_w, X, 0b110, P, TagPolicy::midpoint());
  const double want =
      (1.0 - std::cos(t[0])) * (std::exp(t[1]) - 1.0) * (std::exp(t[2]) - 1.0);
  CHECK(got == doctest::Approx(want).epsilon(1e-3));
}

TEST_CASE("linearity in integrand and integrator") {
  SmoothFn f1 = random_separable(2, 883);
  SmoothFn f2 = random_separable(2, 884);
  SmoothFn g1 = random_separable(2, 885);
  SmoothFn g2 = random_separable(2, 886);
  const Box box{{0, 0}, {1, 1}};
  const TagPolicy tags = TagPolicy::midpoint();

  ScalarFn gmix = [&](const Point& p) { return 2.0 * g1.value(p) - 0.5 * g2.value(p); };
  CHECK(rs_integral(gmix, f1.value, box, tags, 2, 16).value ==
        doctest::Approx(2.0 * rs_integral(g1.value, f1.value, box, tags, 2, 16).value -
                        0.5 * rs_integral(g2.value, f1.value, box, tags, 2, 16).value)
            .epsilon(1e-11));

  ScalarFn fmix = [&](const Point& p) { return 1.5 * f1.value(p) + 0.25 * f2.value(p); };
  CHECK(rs_integral(g1.value, fmix, box, tags, 2, 16).value ==
        doctest::Approx(1.5 * rs_integral(g1.value, f1.value, box, tags, 2, 16).value +
                        0.25 * rs_integral(g1.value, f2.value, box, tags, 2, 16).value)
            .epsilon(1e-11));
}

TEST_CASE("domain additivity in each axis") {
  SmoothFn f = random_separable(2, 887);
  SmoothFn g = random_separable(2, 888);
  const TagPolicy tags = TagPolicy::midpoint();
  const Box whole{{0, 0}, {1, 1}};
  for (int axis = 0; axis < 2; ++axis) {
    Box left = whole, right = whole;
    left.hi[axis] = 0.5;
    right.lo[axis] = 0.5;
    IntegralResult a = rs_integral(g.value, f.value, whole, tags, 3, 16);
    IntegralResult bl = rs_integral(g.value, f.value, left, tags, 3, 16);
    IntegralResult br = rs_integral(g.value, f.value, right, tags, 3, 16);
    const double gap = std::abs(a.value - bl.value - br.value);
    CHECK(gap <= std::max(1e-8, 10.0 * (a.error_estimate + bl.error_estimate +
                                        br.error_estimate)));
  }
}

TEST_CASE("sampled integrators use the native grid as the finest partition") {
  const GridPartition P = GridPartition::uniform({0, 0}, {1, 1}, 16);
  const GridField F = GridField::sample([](const Point& p) { return p[0] * p[1]; }, P);
  const Box box{{0, 0}, {1, 1}};
  IntegralResult r = rs_integral(one, F, box, TagPolicy::midpoint(), 3);
  CHECK(r.value == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(r.levels.back().first == doctest::Approx(P.norm()));  // never below data resolution
  CHECK(r.levels.size() == 3);
  for (std::size_t k = 1; k < r.levels.size(); ++k)
    CHECK(r.levels[k].first < r.levels[k - 1].first);

  // sub-box with off-node faces still telescopes through the interpolant
  const Box sub{{0.11, 0.3}, {0.77, 0.95}};
  IntegralResult rs = rs_integral(one, F, sub, TagPolicy::midpoint(), 2);
  CHECK(rs.value == doctest::Approx(rect_increment(F, sub.lo, sub.hi)).epsilon(1e-12));

  CHECK_THROWS_AS(rs_integral(one, F, Box{{0, 0}, {2, 1}}, TagPolicy::midpoint(), 2),
                  std::invalid_argument);
}

TEST_CASE("four-parameter bracket identity") {
  SmoothFn f = random_separable(4, 890);
  const Box box{Point(4, 0.0), Point(4, 0.8)};
  const double bracket = rect_increment(f.value, box.lo, box.hi);
  IntegralResult r = rs_integral(one, f.value, box, TagPolicy::midpoint(), 2, 4);
  for (const auto& [norm, value] : r.levels)
    CHECK(value == doctest::Approx(bracket).epsilon(1e-12));
}

TEST_CASE("empty boxes are rejected") {
  SmoothFn f = random_separable(2, 889);
  CHECK_THROWS_AS(rs_integral(one, f.value, Box{{0, 0}, {0, 1}}, TagPolicy::midpoint(), 2, 8),
                  std::invalid_argument);
}
