#ifndef RSFIELD_TRIANGLE_HPP
#define RSFIELD_TRIANGLE_HPP

#include "rsfield/rsint.hpp"

namespace rsfield {

/// The region T(t) below the apex t cut by the hyperplane sum(x) = 0, or its
/// reflection when sum(t) < 0. The reflected corner has
/// reflected_l = -sum_{j != l} t_j, and R = box(reflected, t) contains T.
struct TriangleDomain {
  Point apex;
  Point reflected;
  int orientation = 1;  // +1 when sum(apex) >= 0, else -1

  int dim() const { return int(apex.size()); }
  double apex_sum() const;

  /// Iterated bounds of the facet domain T_v: the half-open range of the
  /// j-th nested coordinate (0-based within v) given the sum of the
  /// previously chosen coordinates.
  std::pair<double, double> facet_bounds(const std::vector<int>& v_members, int j,
                                         double prefix_sum) const;
};

TriangleDomain build_domain(const Point& t);

bool contains(const TriangleDomain& dom, const Point& x);

/// int_T f dg with the corner weighting 1/N and signed facet integrals.
/// Exactly zero when sum(apex) == 0. Requires f differentiable on R.
IntegralResult triangle_integral(const SmoothFn& f, const ScalarFn& g, const Point& apex,
                                 int refinements = 3, int base_cells = 16);

/// int_{R \ T} f dg with (N-1)/N corner weights and the corner-composition
/// facet integrals over the boxes R_v.
IntegralResult complement_integral(const SmoothFn& f, const ScalarFn& g, const Point& apex,
                                   int refinements = 3, int base_cells = 16);

namespace detail {

/// Iterated composite-midpoint quadrature over the facet T_v, n points per
/// nesting level. `integrand` receives the |v| nested coordinates.
double facet_quadrature(const std::function<double(const std::vector<double>&)>& integrand,
                        const TriangleDomain& dom, const std::vector<int>& v_members, int n);

/// Tensor midpoint quadrature over the box R_v.
double box_facet_quadrature(const std::function<double(const std::vector<double>&)>& integrand,
                            const TriangleDomain& dom, const std::vector<int>& v_members, int n);

}  // namespace detail

}  // namespace rsfield

#endif
