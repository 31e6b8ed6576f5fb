#include "rsfield/variation.hpp"

#include <cmath>
#include <stdexcept>

namespace rsfield {

namespace {

double vitali_level(const ScalarFn& F, const GridPartition& P) {
  const int N = P.dim();
  std::vector<int> node_extents(N), cell_extents(N);
  for (int m = 0; m < N; ++m) {
    node_extents[m] = P.nodes(m);
    cell_extents[m] = P.cells(m);
  }
  // node values once, brackets from the array
  std::vector<double> nodevals(P.node_count());
  {
    Point p(N);
    std::size_t k = 0;
    detail::for_each_index(node_extents, [&](const std::vector<int>& idx) {
      for (int m = 0; m < N; ++m) p[m] = P.axis(m)[idx[m]];
      const double v = F(p);
      if (!std::isfinite(v)) throw std::runtime_error("vitali_variation: non-finite value");
      nodevals[k++] = v;
    });
  }
  detail::Accum total;
  std::vector<int> node(N);
  detail::for_each_index(cell_extents, [&](const std::vector<int>& cell) {
    detail::Accum br;
    for (std::uint32_t c = 0; c < (1u << N); ++c) {
      int par = 0;
      for (int m = 0; m < N; ++m) {
        const bool low = (c >> m) & 1u;
        node[m] = cell[m] + (low ? 0 : 1);
        par += low ? 1 : 0;
      }
      const double v = nodevals[detail::linear_index(node_extents, node)];
      br.add((par % 2 == 0) ? v : -v);
    }
    total.add(std::abs(br.get()));
  });
  return total.get();
}

}  // namespace

VariationEstimate vitali_variation(const ScalarFn& F, const Box& box, int refinements,
                                   int base_cells) {
  const auto ladder = detail::dyadic_ladder(box, refinements, base_cells);
  VariationEstimate est;
  for (const auto& P : ladder) {
    est.value = vitali_level(F, P);  // nondecreasing along the ladder
    est.partition_norm = P.norm();
  }
  est.is_lower_bound = true;
  return est;
}

VariationEstimate vitali_variation(const GridField& F, const Box& box) {
  const GridPartition P = F.partition().clipped(box);
  auto eval = [&F](const Point& p) { return F(p); };
  VariationEstimate est;
  est.value = vitali_level(eval, P);
  est.partition_norm = P.norm();
  est.is_lower_bound = true;
  return est;
}

VariationEstimate hk_variation(const ScalarFn& F, const Box& box, int refinements,
                               int base_cells) {
  const int N = box.dim();
  VariationEstimate est;
  est.is_lower_bound = true;
  double total = 0.0;
  for (const auto& v : subsets(N)) {
    if (v.is_empty()) continue;
    const auto vm = v.members();
    Box sub;
    for (int j : vm) {
      sub.lo.push_back(box.lo[j - 1]);
      sub.hi.push_back(box.hi[j - 1]);
    }
    // trace with the -v coordinates fixed at the upper corner t_{-v}
    ScalarFn trace = [&F, &box, vm](const Point& x) {
      Point p(box.hi);
      for (std::size_t j = 0; j < vm.size(); ++j) p[vm[j] - 1] = x[j];
      return F(p);
    };
    VariationEstimate term = vitali_variation(trace, sub, refinements, base_cells);
    total += term.value;
    est.partition_norm = std::max(est.partition_norm, term.partition_norm);
  }
  est.value = total;
  return est;
}

double hk_variation_smooth(const SmoothFn& f, const Box& box, int refinements, int base_cells) {
  const int N = box.dim();
  double total = 0.0;
  for (const auto& v : subsets(N)) {
    if (v.is_empty()) continue;
    const auto vm = v.members();
    const std::uint32_t vmask = v.bits();
    Box sub;
    for (int j : vm) {
      sub.lo.push_back(box.lo[j - 1]);
      sub.hi.push_back(box.hi[j - 1]);
    }
    ScalarFn abs_partial = [&f, &box, vm, vmask](const Point& x) {
      Point p(box.hi);
      for (std::size_t j = 0; j < vm.size(); ++j) p[vm[j] - 1] = x[j];
      return std::abs(f.partial(vmask, p));
    };
    ScalarFn one = [](const Point&) { return 1.0; };
    IntegralResult r = substitute_derivative(one, abs_partial, sub, refinements, base_cells);
    if (r.levels.size() >= 2 &&
        r.error_estimate > 0.02 * (std::abs(r.value) + 1.0))
      throw std::runtime_error("hk_variation_smooth: quadrature did not converge");
    total += r.value;
  }
  return total;
}

}  // namespace rsfield
