#include "rsfield/triangle.hpp"

#include <cmath>
#include <stdexcept>

namespace rsfield {

double TriangleDomain::apex_sum() const {
  double s = 0.0;
  for (double x : apex) s += x;
  return s;
}

std::pair<double, double> TriangleDomain::facet_bounds(const std::vector<int>& vm, int j,
                                                       double prefix_sum) const {
  // Remaining slack once x_1..x_{j-1} are chosen and the rest sit at their
  // extreme value: -prefix - (S - sum_{i<=j} t_{v_i}).
  double tail = apex_sum();
  for (int i = 0; i <= j; ++i) tail -= apex[vm[i] - 1];
  const double cut = -prefix_sum - tail;
  const double corner = apex[vm[j] - 1];
  if (orientation >= 0) return {cut, corner};
  return {corner, cut};
}

TriangleDomain build_domain(const Point& t) {
  if (t.empty()) throw std::invalid_argument("build_domain: empty point");
  for (double x : t)
    if (!std::isfinite(x)) throw std::invalid_argument("build_domain: non-finite apex");
  TriangleDomain dom;
  dom.apex = t;
  double S = 0.0;
  for (double x : t) S += x;
  dom.orientation = (S >= 0.0) ? 1 : -1;
  dom.reflected.resize(t.size());
  for (std::size_t l = 0; l < t.size(); ++l) dom.reflected[l] = t[l] - S;
  return dom;
}

bool contains(const TriangleDomain& dom, const Point& x) {
  if (x.size() != dom.apex.size()) throw std::invalid_argument("contains: dimension mismatch");
  double sum = 0.0;
  for (double c : x) sum += c;
  if (dom.orientation >= 0) {
    for (std::size_t l = 0; l < x.size(); ++l)
      if (x[l] > dom.apex[l]) return false;
    return sum >= 0.0;
  }
  for (std::size_t l = 0; l < x.size(); ++l)
    if (x[l] < dom.apex[l]) return false;
  return sum <= 0.0;
}

namespace detail {

namespace {

double facet_recurse(const std::function<double(const std::vector<double>&)>& integrand,
                     const TriangleDomain& dom, const std::vector<int>& vm, int n, int depth,
                     std::vector<double>& x, double prefix_sum) {
  const auto [lo, hi] = dom.facet_bounds(vm, depth, prefix_sum);
  const double width = hi - lo;
  if (width <= 0.0) return 0.0;
  const double h = width / n;
  Accum acc;
  for (int i = 0; i < n; ++i) {
    x[depth] = lo + (i + 0.5) * h;
    if (depth + 1 == int(vm.size()))
      acc.add(integrand(x));
    else
      acc.add(facet_recurse(integrand, dom, vm, n, depth + 1, x, prefix_sum + x[depth]));
  }
  return h * acc.get();
}

}  // namespace

double facet_quadrature(const std::function<double(const std::vector<double>&)>& integrand,
                        const TriangleDomain& dom, const std::vector<int>& vm, int n) {
  std::vector<double> x(vm.size(), 0.0);
  return facet_recurse(integrand, dom, vm, n, 0, x, 0.0);
}

double box_facet_quadrature(const std::function<double(const std::vector<double>&)>& integrand,
                            const TriangleDomain& dom, const std::vector<int>& vm, int n) {
  const int k = int(vm.size());
  std::vector<double> lo(k), h(k);
  for (int j = 0; j < k; ++j) {
    const double a = dom.reflected[vm[j] - 1];
    const double b = dom.apex[vm[j] - 1];
    lo[j] = std::min(a, b);
    h[j] = std::abs(b - a) / n;
  }
  std::vector<double> x(k);
  std::vector<int> ext(k, n);
  Accum acc;
  rsfield::detail::for_each_index(ext, [&](const std::vector<int>& idx) {
    for (int j = 0; j < k; ++j) x[j] = lo[j] + (idx[j] + 0.5) * h[j];
    acc.add(integrand(x));
  });
  double vol = 1.0;
  for (int j = 0; j < k; ++j) vol *= h[j];
  return vol * acc.get();
}

}  // namespace detail

namespace {

struct CornerTerms {
  double triangle = 0.0;    // f(t)g(t) - (1/N) sum_{|v|=1} ...
  double complement = 0.0;  // -(N-1)/N sum_{|v|=1} ... + sum_{|v|>=2} ...
};

CornerTerms corner_terms(const SmoothFn& f, const ScalarFn& g, const TriangleDomain& dom) {
  const int N = dom.dim();
  CornerTerms ct;
  ct.triangle = f.value(dom.apex) * g(dom.apex);
  double singles = 0.0;
  Point y(dom.apex);
  for (int l = 0; l < N; ++l) {
    y[l] = dom.reflected[l];
    singles += f.value(y) * g(y);
    y[l] = dom.apex[l];
  }
  ct.triangle -= singles / N;
  ct.complement = -(double(N - 1) / N) * singles;
  for (const auto& v : subsets(N)) {
    if (v.size() < 2) continue;
    Point p(dom.apex);
    for (int l : v.members()) p[l - 1] = dom.reflected[l - 1];
    ct.complement += v.sign() * f.value(p) * g(p);
  }
  return ct;
}

std::function<double(const std::vector<double>&)> facet_integrand(const SmoothFn& f,
                                                                  const ScalarFn& g,
                                                                  const Point& fixed,
                                                                  const std::vector<int>& vm,
                                                                  std::uint32_t vmask) {
  return [&f, &g, fixed, vm, vmask](const std::vector<double>& x) {
    Point p(fixed);
    for (std::size_t j = 0; j < vm.size(); ++j) p[vm[j] - 1] = x[j];
    return f.partial(vmask, p) * g(p);
  };
}

IntegralResult zero_result() { return IntegralResult{0.0, 0.0, {{0.0, 0.0}}}; }

}  // namespace

IntegralResult triangle_integral(const SmoothFn& f, const ScalarFn& g, const Point& apex,
                                 int refinements, int base_cells) {
  TriangleDomain dom = build_domain(apex);
  const int N = dom.dim();
  const double S = dom.apex_sum();
  if (S == 0.0) return zero_result();

  const CornerTerms ct = corner_terms(f, g, dom);
  const auto all = subsets(N);

  std::vector<std::pair<double, double>> levels;
  int n = base_cells;
  for (int k = 0; k < refinements; ++k, n *= 2) {
    detail::Accum acc;
    acc.add(ct.triangle);
    for (const auto& v : all) {
      if (v.is_empty()) continue;
      const auto vm = v.members();
      const double fv =
          detail::facet_quadrature(facet_integrand(f, g, apex, vm, v.bits()), dom, vm, n);
      acc.add((dom.orientation >= 0 ? v.sign() : 1.0) * fv);
    }
    double value = acc.get();
    if (dom.orientation < 0 && N % 2 == 1) value = -value;
    levels.emplace_back(std::abs(S) / n, value);
  }
  return detail::ladder_result(std::move(levels));
}

IntegralResult complement_integral(const SmoothFn& f, const ScalarFn& g, const Point& apex,
                                   int refinements, int base_cells) {
  TriangleDomain dom = build_domain(apex);
  const int N = dom.dim();
  const double S = dom.apex_sum();
  if (S == 0.0) return zero_result();

  const CornerTerms ct = corner_terms(f, g, dom);
  const auto all = subsets(N);

  std::vector<std::pair<double, double>> levels;
  int n = base_cells;
  for (int k = 0; k < refinements; ++k, n *= 2) {
    detail::Accum acc;
    acc.add(ct.complement);
    for (const auto& v : all) {
      if (v.is_empty()) continue;
      const auto vm = v.members();
      const auto wm_all = v.complement().members();

      // R_v \ T_v with the -v coordinates at t_{-v}
      auto base_integrand = facet_integrand(f, g, apex, vm, v.bits());
      const double box_part = detail::box_facet_quadrature(base_integrand, dom, vm, n);
      const double tri_part = detail::facet_quadrature(base_integrand, dom, vm, n);
      double term = box_part - tri_part;

      // corner compositions: w coordinates moved to the reflected corner
      const int nw = int(wm_all.size());
      for (std::uint32_t wbits = 1; wbits < (1u << nw); ++wbits) {
        Point fixed(apex);
        int wsize = 0;
        for (int j = 0; j < nw; ++j)
          if ((wbits >> j) & 1u) {
            fixed[wm_all[j] - 1] = dom.reflected[wm_all[j] - 1];
            ++wsize;
          }
        const double sign = (wsize % 2 == 0) ? 1.0 : -1.0;
        term += sign * detail::box_facet_quadrature(facet_integrand(f, g, fixed, vm, v.bits()),
                                                    dom, vm, n);
      }
      acc.add((dom.orientation >= 0 ? v.sign() : 1.0) * term);
    }
    double value = acc.get();
    if (dom.orientation < 0 && N % 2 == 1) value = -value;
    levels.emplace_back(std::abs(S) / n, value);
  }
  return detail::ladder_result(std::move(levels));
}

}  // namespace rsfield
