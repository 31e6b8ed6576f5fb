// Acceptance suite: one line per criterion, nonzero exit on any failure.
// Run it directly or through ctest; pass criterion numbers to run a subset.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <iostream>
#include <set>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "rsfield/io.hpp"
#include "rsfield/ou.hpp"
#include "rsfield/rng.hpp"
#include "rsfield/stats.hpp"
#include "rsfield/triangle.hpp"
#include "rsfield/variation.hpp"
#include "rsfield/verify.hpp"

using namespace rsfield;

namespace {

const ScalarFn one_fn = [](const Point&) { return 1.0; };

struct Outcome {
  bool pass = true;
  std::string detail;
  void fail(const std::string& why) {
    pass = false;
    if (detail.empty()) detail = why;
  }
};

// fixture with a non-negligible bracket over the box, so that relative
// tolerances stay meaningful
SmoothFn bracketed_fixture(int dim, std::uint64_t seed, const Box& box, double floor) {
  for (std::uint64_t k = 0;; ++k) {
    SmoothFn f = random_separable(dim, rng::substream(seed, k));
    if (std::abs(rect_increment(f.value, box.lo, box.hi)) >= floor) return f;
  }
}

Box random_box(int dim, std::uint64_t seed) {
  Box box{Point(dim), Point(dim)};
  for (int m = 0; m < dim; ++m) {
    const double a = -1.0 + 1.2 * rng::uniform01(seed, 7, 2 * m);
    const double w = 0.4 + 0.8 * rng::uniform01(seed, 7, 2 * m + 1);
    box.lo[m] = a;
    box.hi[m] = a + w;
  }
  return box;
}

// ---------------------------------------------------------------- criterion 1
Outcome criterion_bracket_identity() {
  Outcome out;
  int count = 0;
  for (int trial = 0; trial < 50; ++trial) {
    const int N = 1 + trial % 3;
    const Box box = random_box(N, 9000 + trial);
    const SmoothFn f = bracketed_fixture(N, 9100 + trial, box, 1e-2);
    const double bracket = rect_increment(f.value, box.lo, box.hi);
    const IntegralResult r = rs_integral(one_fn, f.value, box, TagPolicy::midpoint(), 4, 8);
    for (const auto& [norm, value] : r.levels) {
      const double rel = std::abs(value - bracket) / std::abs(bracket);
      if (!(rel <= 1e-12)) {
        char buf[160];
        std::snprintf(buf, sizeof(buf), "trial %d n=%d norm=%.4g rel=%.3g", trial, N, norm, rel);
        out.fail(buf);
      }
    }
    ++count;
  }
  if (out.detail.empty()) out.detail = std::to_string(count) + " fixtures, all levels exact";
  return out;
}

// ------------------------------------------------------------- criteria 2 & 3
struct IdentityFixture {
  int dim;
  int base;
  int refinements;
  SmoothFn f, g, h;
};

std::vector<IdentityFixture> identity_fixtures() {
  // gentle rates keep the relative comparisons well conditioned at the pinned
  // 128 (N=2) and 32 (N=3) resolutions; fixtures with a near-zero integral
  // are rejected so the relative gap has a meaningful denominator
  std::vector<IdentityFixture> out;
  for (int trial = 0; trial < 10; ++trial) {
    for (int dim : {2, 3}) {
      const int base = (dim == 2) ? 32 : 8;
      for (std::uint64_t k = 0;; ++k) {
        IdentityFixture fix{dim, base, 3,
                            random_separable(dim, rng::substream(9200 + dim, 100 * trial + k), 0.7),
                            random_separable(dim, rng::substream(9300 + dim, 100 * trial + k), 0.7),
                            random_separable(dim, rng::substream(9400 + dim, 100 * trial + k), 0.7)};
        const Box box{Point(dim, 0.0), Point(dim, 1.0)};
        const double c1 =
            rs_integral(fix.g.value, fix.f.value, box, TagPolicy::midpoint(), 1, base).value;
        const double c2 =
            rs_integral(fix.f.value, fix.g.value, box, TagPolicy::midpoint(), 1, base).value;
        ScalarFn fg = [&fix](const Point& p) { return fix.f.value(p) * fix.g.value(p); };
        const double c3 =
            rs_integral(fix.h.value, fg, box, TagPolicy::midpoint(), 1, base).value;
        if (std::abs(c1) >= 0.3 && std::abs(c2) >= 0.3 && std::abs(c3) >= 1.0) {
          out.push_back(std::move(fix));
          break;
        }
      }
    }
  }
  return out;
}

bool gaps_decrease(const IntegralResult& a, const IntegralResult& b, double floor = 1e-10) {
  double prev = 1e300;
  for (std::size_t k = 0; k < a.levels.size(); ++k) {
    const double gap = std::abs(a.levels[k].second - b.levels[k].second);
    if (gap > prev + floor) return false;
    prev = gap;
  }
  return true;
}

Outcome criterion_integration_by_parts() {
  Outcome out;
  for (const auto& fix : identity_fixtures()) {
    const Box box{Point(fix.dim, 0.0), Point(fix.dim, 1.0)};
    const IntegralResult lhs =
        rs_integral(fix.f.value, fix.g.value, box, TagPolicy::midpoint(), fix.refinements, fix.base);
    const IntegralResult rhs =
        ibp_rhs(fix.f.value, fix.g.value, box, TagPolicy::midpoint(), fix.refinements, fix.base);
    const double rel = std::abs(lhs.value - rhs.value) / std::abs(lhs.value);
    if (!(rel <= 1e-3)) out.fail("rel gap " + std::to_string(rel));
    if (!gaps_decrease(lhs, rhs)) out.fail("gap not decreasing over dyadic levels");
  }
  if (out.detail.empty()) out.detail = "20 pairs in N=2 (128/axis) and N=3 (32/axis)";
  return out;
}

Outcome criterion_substitution_product_rule() {
  Outcome out;
  for (const auto& fix : identity_fixtures()) {
    const Box box{Point(fix.dim, 0.0), Point(fix.dim, 1.0)};
    const IntegralResult direct =
        rs_integral(fix.g.value, fix.f.value, box, TagPolicy::midpoint(), fix.refinements, fix.base);
    const double scale = std::abs(direct.value);
    for (const auto& v : subsets(fix.dim)) {
      if (v.is_empty()) continue;
      const IntegralResult sub = substitute_partial(fix.g.value, fix.f, v, box,
                                                    TagPolicy::midpoint(), fix.refinements,
                                                    fix.base);
      const double rel = std::abs(sub.value - direct.value) / scale;
      if (!(rel <= 1e-3))
        out.fail("substitution |v|=" + std::to_string(v.size()) + " rel " + std::to_string(rel));
    }
    const auto [lhs, rhs] =
        product_rule_check(fix.h, fix.f, fix.g.value, box, fix.refinements, fix.base);
    const double rel = std::abs(lhs.value - rhs.value) / std::abs(lhs.value);
    if (!(rel <= 1e-3)) out.fail("product rule rel " + std::to_string(rel));
    if (!gaps_decrease(lhs, rhs)) out.fail("product-rule gap not decreasing");
  }
  if (out.detail.empty()) out.detail = "every nonempty v plus the product rule, same fixtures";
  return out;
}

// ---------------------------------------------------------------- criterion 4
Outcome criterion_triangle_additivity() {
  Outcome out;
  int cases = 0;
  for (int trial = 0; trial < 20; ++trial) {
    const int N = 2 + trial % 2;
    const SmoothFn f = random_separable(N, rng::substream(9800, trial));
    const SmoothFn g = random_separable(N, rng::substream(9900, trial));
    for (int orient = 0; orient < 2; ++orient) {
      // 10 apexes per orientation, mixed coordinate signs allowed
      Point apex(N);
      const int pick = trial % 10;
      double apex_sum = 0.0;
      for (std::uint64_t k = 0; std::abs(apex_sum) < 0.15; ++k) {
        apex_sum = 0.0;
        for (int m = 0; m < N; ++m) {
          apex[m] = -0.5 + 1.4 * rng::uniform01(10000 + pick, 8 * orient + m, k);
          apex_sum += apex[m];
        }
      }
      if ((orient == 1) != (apex_sum < 0.0))
        for (int m = 0; m < N; ++m) apex[m] = -apex[m];

      const int base = (N == 2) ? 16 : 8;
      const int refs = (N == 2) ? 3 : 2;
      const IntegralResult tri = triangle_integral(f, g.value, apex, refs, base);
      const IntegralResult comp = complement_integral(f, g.value, apex, refs, base);
      const TriangleDomain dom = build_domain(apex);
      Box R{dom.reflected, apex};
      if (dom.orientation < 0) std::swap(R.lo, R.hi);
      const IntegralResult whole =
          rs_integral(f.value, g.value, R, TagPolicy::midpoint(), refs, base);
      const double gap = std::abs(whole.value - tri.value - comp.value);
      const double budget = std::max(
          1e-6, 10.0 * (whole.error_estimate + tri.error_estimate + comp.error_estimate));
      if (!(gap <= budget)) {
        char buf[160];
        std::snprintf(buf, sizeof(buf), "trial %d n=%d orient=%d gap=%.3g budget=%.3g", trial, N,
                      orient, gap, budget);
        out.fail(buf);
      }
      ++cases;
    }
  }

  // exact zero on the cutting hyperplane
  const SmoothFn f0 = random_separable(2, 10100);
  const SmoothFn g0 = random_separable(2, 10101);
  if (triangle_integral(f0, g0.value, Point{0.6, -0.6}, 2, 8).value != 0.0)
    out.fail("nonzero at sum(t) = 0");

  // |int_T| -> 0 along apexes approaching the hyperplane
  double first = -1.0, last = 0.0;
  for (int k = 0; k <= 6; ++k) {
    const double eps = std::pow(0.5, k);
    const double val =
        std::abs(triangle_integral(f0, g0.value, Point{0.6 + eps / 2, -0.6 + eps / 2}, 2, 16).value);
    if (k == 0) first = val;
    last = val;
  }
  if (!(last <= 0.1 * std::max(first, 1e-6))) out.fail("no decay toward the hyperplane");

  if (out.detail.empty())
    out.detail = std::to_string(cases) + " apex cases + hyperplane zero and decay";
  return out;
}

// ---------------------------------------------------------------- criterion 5
Outcome criterion_hk_variation() {
  Outcome out;
  const Box box{{0.0, 0.0}, {1.0, 1.0}};
  const double e = std::exp(1.0);
  const double analytic = (e - 1.0) * e + e * (e - 1.0) + (e - 1.0) * (e - 1.0);
  const VariationEstimate hk = hk_variation(exp_dot({1.0, 1.0}).value, box, 6, 8);  // 256/axis
  if (!(std::abs(hk.value - analytic) <= 1e-4))
    out.fail("hk gap " + std::to_string(std::abs(hk.value - analytic)));

  const VariationEstimate vit =
      vitali_variation([](const Point& p) { return p[0] + p[1]; }, box, 6, 8);
  if (!(vit.value <= 1e-9)) out.fail("vitali of t1+t2 = " + std::to_string(vit.value));

  if (out.detail.empty()) {
    char buf[120];
    std::snprintf(buf, sizeof(buf), "hk=%.8f vs %.8f, vitali(additive)=%.2e", hk.value, analytic,
                  vit.value);
    out.detail = buf;
  }
  return out;
}

// ---------------------------------------------------------------- criterion 6
Outcome criterion_ou_stationarity() {
  Outcome out;
  const ThetaVector theta({1.0, 1.0});
  const double trunc = 7.0;
  const double step = 0.125;  // 16 cells over [0,2]
  const int total = int(std::lround((2.0 + trunc) / step));
  const GridPartition P =
      GridPartition::uniform(Point(2, -trunc), Point(2, 2.0), std::vector<int>(2, total));

  FieldEnsemble driver = brownian_sheet(P, 2000, 424242);
  FieldEnsemble ou = ou_solve_ensemble(driver, theta, trunc);

  // ten node-pair families vs the derived product kernel (quadrature oracle)
  const std::vector<std::pair<Point, Point>> families = {
      {{1.0, 1.0}, {1.0, 1.0}},   {{1.0, 1.0}, {1.5, 1.0}},  {{1.0, 1.0}, {1.0, 1.5}},
      {{0.5, 0.5}, {1.5, 1.5}},   {{0.25, 1.0}, {1.25, 1.0}}, {{2.0, 2.0}, {2.0, 2.0}},
      {{0.5, 1.5}, {1.0, 0.5}},   {{1.75, 0.25}, {1.0, 1.0}}, {{0.0, 0.0}, {0.5, 0.5}},
      {{1.25, 1.25}, {1.5, 0.75}}};
  for (std::size_t k = 0; k < families.size(); ++k) {
    const auto& [s, t] = families[k];
    const double expected = oracles::ou_cov_quadrature({1.0, 1.0}, s, t, trunc);
    const auto [c, se] = empirical_cov(ou, s, t);
    if (!(std::abs(c - expected) <= 4.0 * se)) {
      char buf[160];
      std::snprintf(buf, sizeof(buf), "family %zu: cov=%.5f expected=%.5f se=%.5f", k, c, expected,
                    se);
      out.fail(buf);
    }
  }

  const std::vector<std::pair<Point, Point>> pairs = {
      {{0.0, 0.0}, {0.5, 0.25}}, {{0.25, 0.25}, {0.75, 0.75}}, {{0.5, 0.0}, {1.0, 0.5}}};
  const std::vector<Point> shifts = {{0.5, 0.0}, {0.25, 0.75}, {1.0, 1.0}};
  const TestReport rep = stationarity_test(ou, shifts, pairs, 0.01);
  if (!rep.pass) out.fail("stationarity_test failed");

  if (out.detail.empty()) out.detail = "10 kernel families within 4 SE; test passes at alpha=0.01";
  return out;
}

// ---------------------------------------------------------------- criterion 7
Outcome criterion_langevin_residual() {
  Outcome out;
  const ThetaVector theta({1.0, 1.0});
  const SmoothFn Gfun = exp_dot({1.0, 1.0});  // dG = e^{u1+u2} du

  std::vector<Point> probes;
  for (int k = 0; k < 10; ++k)
    probes.push_back(Point{0.25 + 0.175 * k, 2.0 - 0.175 * k});

  std::vector<std::vector<double>> rel(probes.size());
  for (int level = 0; level < 3; ++level) {
    const int cells_unit = 32 << level;  // 32, 64, 128 cells per unit axis [0,2]->2x
    const double h = 2.0 / cells_unit;
    const double lo = -4.0;
    const int total = int(std::lround((2.0 - lo) / h));
    const GridPartition P =
        GridPartition::uniform(Point(2, lo), Point(2, 2.0), std::vector<int>(2, total));
    const GridField G = GridField::sample(Gfun.value, P);
    const TransformedField X = ou_solve(G, theta, -lo);
    for (std::size_t p = 0; p < probes.size(); ++p) {
      // snap the probe to the current grid
      Point t = probes[p];
      for (int m = 0; m < 2; ++m) t[m] = std::round(t[m] / h) * h;
      const double denom = std::abs(rect_increment(G, Point{0.0, 0.0}, t));
      rel[p].push_back(langevin_residual(X.base, G, theta, t) / denom);
    }
  }
  for (std::size_t p = 0; p < probes.size(); ++p) {
    if (!(rel[p][2] <= 1e-2)) out.fail("final residual " + std::to_string(rel[p][2]));
    if (!(rel[p][2] <= rel[p][0] + 1e-12)) out.fail("residual not decreasing");
  }

  // stochastic driver: the residual variance shrinks under refinement
  std::vector<double> variances;
  for (int level = 0; level < 3; ++level) {
    const int cells_unit = 8 << level;
    const double h = 1.0 / cells_unit;
    const GridPartition P = GridPartition::uniform(Point(2, -2.0), Point(2, 1.0),
                                                   std::vector<int>(2, int(3.0 / h)));
    FieldEnsemble driver = brownian_sheet(P, 200, 515151 + level);
    FieldEnsemble ou = ou_solve_ensemble(driver, theta, 2.0);
    const Point t{1.0, 1.0};
    double mean = 0.0, m2 = 0.0;
    std::vector<double> res(ou.size());
    for (int m = 0; m < ou.size(); ++m)
      res[m] = langevin_residual(ou.field(m), driver.field(m), theta, t);
    for (double r : res) mean += r;
    mean /= double(res.size());
    for (double r : res) m2 += (r - mean) * (r - mean);
    variances.push_back(m2 / double(res.size() - 1));
  }
  if (!(variances[1] < variances[0] && variances[2] < variances[1]))
    out.fail("stochastic residual variance not decreasing");

  if (out.detail.empty()) {
    char buf[160];
    std::snprintf(buf, sizeof(buf), "max rel %.2e at 128/axis; var %.3g -> %.3g -> %.3g",
                  rel[0][2], variances[0], variances[1], variances[2]);
    out.detail = buf;
  }
  return out;
}

// ---------------------------------------------------------------- criterion 8
Outcome criterion_round_trips() {
  Outcome out;
  const ThetaVector theta({1.0, 1.0});

  // Lamperti round-trip, exact to round-off
  {
    const GridPartition P = GridPartition::uniform(Point(2, -2.0), Point(2, 2.0), 16);
    const SmoothFn f = random_separable(2, 10200);
    const GridField X = GridField::sample(f.value, P);
    const GridField back = inv_lamperti(lamperti(X, theta).base, theta).base;
    double worst = 0.0;
    for (std::size_t k = 0; k < X.values().size(); ++k)
      worst = std::max(worst, std::abs(back.values()[k] - X.values()[k]) /
                                  std::max(1.0, std::abs(X.values()[k])));
    if (!(worst <= 1e-14)) out.fail("lamperti round-trip " + std::to_string(worst));
  }

  // m_theta o m_theta_inv preserves increments of smooth G within 1e-2
  const double bound = 3.0;
  const GridPartition P = GridPartition::uniform(Point(2, -bound), Point(2, bound), 96);
  const GridField G = GridField::sample(
      [](const Point& p) { return (std::exp(p[0]) - 1.0) * (std::exp(p[1]) - 1.0); }, P);
  const TransformedField Y = m_theta_inv(G, theta, bound);
  auto gtilde = [&](const Point& p) { return m_theta_at(Y.base, theta, p, 3, 8); };
  for (int k = 0; k < 10; ++k) {
    const double a = -0.7 + 0.09 * k;
    const Box probe{{a, a - 0.15}, {a + 0.55, a + 0.45}};
    const double want = rect_increment(G, probe.lo, probe.hi);
    const double got = rect_increment(ScalarFn(gtilde), probe.lo, probe.hi);
    const double rel = std::abs(got - want) / std::abs(want);
    if (!(rel <= 1e-2)) out.fail("increment rel " + std::to_string(rel));
  }

  // m_theta output vanishes on the sum(t) = 0 diagonal
  double diag_worst = 0.0;
  for (int i = 0; i <= 96; ++i) {
    const double x = P.axis(0)[i];
    diag_worst = std::max(diag_worst, std::abs(m_theta_at(Y.base, theta, Point{x, -x}, 2, 8)));
    // and just off the hyperplane the corner algebra still cancels
    if (std::abs(x) < 1.4)
      diag_worst = std::max(
          diag_worst, std::abs(m_theta_at(Y.base, theta, Point{x + 1e-12, -x}, 2, 8)));
  }
  if (!(diag_worst <= 1e-10)) out.fail("diagonal value " + std::to_string(diag_worst));

  if (out.detail.empty()) out.detail = "lamperti exact; 10 probe boxes within 1e-2; diagonal zero";
  return out;
}

// ---------------------------------------------------------------- criterion 9
Outcome criterion_equivalence_homogeneous() {
  Outcome out;
  const ThetaVector theta({1.0, 1.0});
  const GridPartition P = GridPartition::uniform(Point(2, 0.0), Point(2, 1.0), 16);
  const SmoothFn f = random_separable(2, 10300);
  const GridField X = GridField::sample(f.value, P);
  const std::vector<Box> probes = {{{0.0, 0.0}, {1.0, 1.0}}, {{0.25, 0.0}, {0.75, 0.5}}};

  for (int trial = 0; trial < 5; ++trial) {
    const double c = 0.5 + rng::uniform01(10400, 0, trial);
    const double w = 1.0 + 2.0 * rng::uniform01(10400, 1, trial);
    // u = {} (constant), u = {1}, u = {2}: all |u| < N perturbations
    const GridField Yc = GridField::sample(
        [&](const Point& p) { return f.value(p) + c * std::exp(-theta.dot(p)); }, P);
    const GridField Y1 = GridField::sample(
        [&](const Point& p) { return f.value(p) + std::exp(-theta.dot(p)) * std::sin(w * p[0]); },
        P);
    const GridField Y2 = GridField::sample(
        [&](const Point& p) { return f.value(p) + std::exp(-theta.dot(p)) * std::cos(w * p[1]); },
        P);
    if (!equivalence_check(X, Yc, theta, probes, 1e-6)) out.fail("constant term rejected");
    if (!equivalence_check(X, Y1, theta, probes, 1e-6)) out.fail("h(t1) rejected");
    if (!equivalence_check(X, Y2, theta, probes, 1e-6)) out.fail("h(t2) rejected");
  }
  const GridField Ybad = GridField::sample(
      [&](const Point& p) { return f.value(p) + 1e-2 * p[0] * p[1]; }, P);
  if (equivalence_check(X, Ybad, theta, probes, 1e-6)) out.fail("eps product accepted");

  for (int trial = 0; trial < 10; ++trial) {
    const double a = 0.5 + rng::uniform01(10500, 0, trial);
    const double b = 6.28 * rng::uniform01(10500, 1, trial);
    const double c = 2.0 * rng::uniform01(10500, 2, trial) - 1.0;
    std::vector<HomogeneousPart> parts;
    parts.push_back({MultiIndexSet::of({1}, 2),
                     [a, b](const std::vector<double>& x) { return std::sin(a * x[0] + b); }});
    parts.push_back({MultiIndexSet::of({2}, 2),
                     [c](const std::vector<double>& x) { return std::exp(c * x[0]); }});
    parts.push_back({MultiIndexSet::empty(2), [c](const std::vector<double>&) { return c; }});
    const double resid =
        homogeneous_solution_check(parts, theta, Box{{0.0, 0.0}, {1.0, 1.0}}, 3);
    if (!(resid <= 1e-4)) out.fail("homogeneous residual " + std::to_string(resid));
  }

  if (out.detail.empty()) out.detail = "perturbation accept/reject + 10 homogeneous families";
  return out;
}

// --------------------------------------------------------------- criterion 10
Outcome criterion_calibration() {
  Outcome out;
  const ThetaVector theta({1.0, 1.0});
  const double trunc = 6.0, step = 0.125, hi = 1.5;
  const int total = int(std::lround((hi + trunc) / step));
  const GridPartition P =
      GridPartition::uniform(Point(2, -trunc), Point(2, hi), std::vector<int>(2, total));
  const std::vector<std::pair<Point, Point>> pairs = {
      {{0.0, 0.0}, {0.25, 0.125}}, {{0.125, 0.125}, {0.5, 0.375}}, {{0.25, 0.0}, {0.75, 0.5}}};
  const std::vector<Point> shifts = {{0.5, 0.0}, {0.25, 0.75}};

  int failures = 0;
  for (int seed = 0; seed < 50; ++seed) {
    FieldEnsemble driver = brownian_sheet(P, 400, 70000 + seed);
    FieldEnsemble ou = ou_solve_ensemble(driver, theta, trunc);
    if (!stationarity_test(ou, shifts, pairs, 0.01).pass) ++failures;
  }
  // binomial(50, 0.01): central 95% region is {0, 1, 2}
  if (failures > 2) out.fail(std::to_string(failures) + " failures out of 50");
  if (out.detail.empty())
    out.detail = std::to_string(failures) + "/50 failures, within binomial bounds of alpha=0.01";
  return out;
}

struct Criterion {
  int id;
  const char* name;
  Outcome (*run)();
};

const Criterion kCriteria[] = {
    {1, "bracket identity (int 1 df = [f])", criterion_bracket_identity},
    {2, "integration by parts", criterion_integration_by_parts},
    {3, "derivative substitution and product rule", criterion_substitution_product_rule},
    {4, "triangle additivity and hyperplane limit", criterion_triangle_additivity},
    {5, "Hardy-Krause variation", criterion_hk_variation},
    {6, "OU stationarity vs product kernel", criterion_ou_stationarity},
    {7, "Langevin residual convergence", criterion_langevin_residual},
    {8, "round-trips (Lamperti, M-transform, diagonal)", criterion_round_trips},
    {9, "equivalence classes and homogeneous solutions", criterion_equivalence_homogeneous},
    {10, "stationarity test calibration", criterion_calibration},
};

}  // namespace

int main(int argc, char** argv) {
  std::set<int> wanted;
  for (int i = 1; i < argc; ++i) wanted.insert(std::atoi(argv[i]));

  int failed = 0;
  for (const auto& c : kCriteria) {
    if (!wanted.empty() && !wanted.count(c.id)) continue;
    const auto start = std::chrono::steady_clock::now();
    Outcome out;
    try {
      out = c.run();
    } catch (const std::exception& e) {
      out.pass = false;
      out.detail = std::string("exception: ") + e.what();
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::printf("[%s] criterion %2d: %s  (%s; %.1fs)\n", out.pass ? "PASS" : "FAIL", c.id, c.name,
                out.detail.c_str(), secs);
    std::fflush(stdout);
    if (!out.pass) ++failed;
  }
  if (failed) std::printf("%d criterion(s) FAILED\n", failed);
  return failed == 0 ? 0 : 1;
}
