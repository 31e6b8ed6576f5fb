#ifndef RSFIELD_RSINT_HPP
#define RSFIELD_RSINT_HPP

#include <cmath>
#include <cstdint>
#include <functional>
#include <utility>
#include <vector>

#include "rsfield/grid.hpp"
#include "rsfield/indexkit.hpp"

namespace rsfield {

/// Value of a refinement ladder together with its trace. The error estimate
/// is the difference between the last two levels (0 with a single level).
struct IntegralResult {
  double value = 0.0;
  double error_estimate = 0.0;
  std::vector<std::pair<double, double>> levels;  // (partition norm, value)
};

/// Where the tag is placed inside each cell of a Riemann-Stieltjes sum.
struct TagPolicy {
  enum class Kind { LowerCorner, UpperCorner, Midpoint, Randomized };
  Kind kind = Kind::Midpoint;
  std::uint64_t seed = 0;

  static TagPolicy lower() { return {Kind::LowerCorner, 0}; }
  static TagPolicy upper() { return {Kind::UpperCorner, 0}; }
  static TagPolicy midpoint() { return {Kind::Midpoint, 0}; }
  static TagPolicy randomized(std::uint64_t seed) { return {Kind::Randomized, seed}; }
};

/// A function bundled with its mixed partial derivatives. `partial(mask, p)`
/// differentiates once with respect to every 0-based axis in `mask`;
/// mask == 0 returns the value itself.
struct SmoothFn {
  ScalarFn value;
  std::function<double(std::uint32_t, const Point&)> partial;

  double operator()(const Point& p) const { return value(p); }
  double partial_at(const MultiIndexSet& u, const Point& p) const {
    return partial(u.bits(), p);
  }
};

/// Wraps a plain callable with central finite differences for the partials.
SmoothFn smooth_from_fd(ScalarFn f, double step = 1e-4);

/// e^{alpha . u} with exact partials.
SmoothFn exp_dot(const std::vector<double>& alpha);

/// prod_l u_l with exact partials.
SmoothFn coordinate_product(int dim);

inline constexpr int kDefaultBaseCells = 8;

/// Unrestricted Riemann-Stieltjes integral of g with respect to f over the
/// box, as the finest value of a dyadic partition ladder.
IntegralResult rs_integral(const ScalarFn& g, const ScalarFn& f, const Box& box,
                           TagPolicy tags = TagPolicy::midpoint(), int refinements = 4,
                           int base_cells = kDefaultBaseCells);

/// Same, but the integrator is sampled data: the field's own grid (clipped to
/// the box) is the finest partition, with coarsened grids below it for the
/// error estimate. No refinement below the data resolution.
IntegralResult rs_integral(const ScalarFn& g, const GridField& f, const Box& box,
                           TagPolicy tags = TagPolicy::midpoint(), int levels = 2);

/// int_{s_v}^{t_v} [g(r) d_v f(r)]_{s_{-v}}^{t_{-v}} : 2^{|-v|} signed
/// |v|-variate RS integrals with the -v coordinates fixed at box corners.
IntegralResult mixed_integral(const ScalarFn& g, const ScalarFn& f, const MultiIndexSet& v,
                              const Box& box, TagPolicy tags = TagPolicy::midpoint(),
                              int refinements = 4, int base_cells = kDefaultBaseCells);

/// Right-hand side of the integration by parts formula:
/// [fg]_s^t + sum_{v != 0} (-1)^{|v|} int [g d_v f]. Converges to int f dg.
IntegralResult ibp_rhs(const ScalarFn& f, const ScalarFn& g, const Box& box,
                       TagPolicy tags = TagPolicy::midpoint(), int refinements = 4,
                       int base_cells = kDefaultBaseCells);

/// Plain Riemann integral int g(r) f_t(r) dr (derivative substitution).
IntegralResult substitute_derivative(const ScalarFn& g, const ScalarFn& f_t, const Box& box,
                                     int refinements = 4, int base_cells = kDefaultBaseCells);

/// Partial substitution int g(r) d_{-v} f_{t_v}(r) dr_v : RS differential in
/// the -v coordinates, Riemann in the v coordinates.
IntegralResult substitute_partial(const ScalarFn& g, const SmoothFn& f, const MultiIndexSet& v,
                                  const Box& box, TagPolicy tags = TagPolicy::midpoint(),
                                  int refinements = 4, int base_cells = kDefaultBaseCells);

/// Product rule check: lhs = int h d(fg),
/// rhs = sum_u int h f_{t_u} d_{-u} g dr_u. The two ladders share levels.
std::pair<IntegralResult, IntegralResult> product_rule_check(
    const SmoothFn& h, const SmoothFn& f, const ScalarFn& g, const Box& box,
    int refinements = 4, int base_cells = kDefaultBaseCells);

/// Fundamental-theorem lemma: with F_v(t) = int_{s_v}^{t_v} [f]_{s_{-v}}^{t_{-v}} dr_v,
/// compares int g dF_v against int g d_{-v} f dt_v for a smooth built-in g.
std::pair<double, double> fundamental_lemma_check(const ScalarFn& f, const MultiIndexSet& v,
                                                  const Box& box, int refinements = 4,
                                                  int base_cells = kDefaultBaseCells);

namespace detail {

/// Neumaier-compensated accumulator in extended precision; the big
/// alternating reductions in this module cancel heavily.
struct Accum {
  long double sum = 0.0L;
  long double comp = 0.0L;
  void add(long double x) {
    const long double t = sum + x;
    if (std::abs(double(sum)) >= std::abs(double(x)))
      comp += (sum - t) + x;
    else
      comp += (x - t) + sum;
    sum = t;
  }
  double get() const { return double(sum + comp); }
};

/// Core tagged sum over the cells of a partition:
///   sum_i w(xi_i) * [F]_{rs-range of cell i, other coords at xi_i} * vol_{riemann}(cell i)
/// rs_mask selects the axes carrying the RS differential (0-based bits);
/// the remaining axes carry a plain Riemann differential. rs_mask == full
/// is the RS sum; rs_mask == 0 is a plain Riemann sum of w * F.
double mixed_sum(const ScalarFn& w, const ScalarFn& F, std::uint32_t rs_mask,
                 const GridPartition& P, const TagPolicy& tags);

/// Dyadic ladder of uniform partitions of the box.
std::vector<GridPartition> dyadic_ladder(const Box& box, int refinements, int base_cells);

IntegralResult ladder_result(std::vector<std::pair<double, double>> levels);

}  // namespace detail

}  // namespace rsfield

#endif
