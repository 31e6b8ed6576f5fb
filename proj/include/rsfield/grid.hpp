#ifndef RSFIELD_GRID_HPP
#define RSFIELD_GRID_HPP

#include <cstddef>
#include <functional>
#include <vector>

#include "rsfield/indexkit.hpp"

namespace rsfield {

using ScalarFn = std::function<double(const Point&)>;

/// A box [lo, hi] with lo <= hi componentwise.
struct Box {
  Point lo;
  Point hi;
  int dim() const { return int(lo.size()); }
};

/// Tensor partition of a hyperrectangle: per-axis strictly increasing
/// breakpoints. Axis m with n_m+1 breakpoints has n_m cells.
class GridPartition {
public:
  explicit GridPartition(std::vector<std::vector<double>> axes);

  static GridPartition uniform(const Point& lo, const Point& hi,
                               const std::vector<int>& cells);
  static GridPartition uniform(const Point& lo, const Point& hi, int cells_per_axis);

  int dim() const { return int(axes_.size()); }
  const std::vector<double>& axis(int m) const { return axes_[m]; }  // 0-based
  int cells(int m) const { return int(axes_[m].size()) - 1; }
  int nodes(int m) const { return int(axes_[m].size()); }
  std::size_t node_count() const;
  std::size_t cell_count() const;

  /// max over axes of the max consecutive breakpoint gap
  double norm() const;

  Point lower() const;
  Point upper() const;
  Box bounds() const { return {lower(), upper()}; }
  bool contains(const Point& p, double tol = 0.0) const;

  /// Each cell split uniformly into `factor` pieces per axis.
  GridPartition refined(int factor) const;

  /// Every other breakpoint dropped (first and last kept). Valid coarse
  /// partition of the same box; used for error ladders on sampled data.
  GridPartition coarsened() const;

  /// Breakpoints restricted to [box.lo, box.hi], with the box faces inserted.
  GridPartition clipped(const Box& box, double tol = 1e-12) const;

  /// Row-major linear index of a node (last axis fastest).
  std::size_t node_index(const std::vector<int>& idx) const;

  bool operator==(const GridPartition& other) const { return axes_ == other.axes_; }

private:
  std::vector<std::vector<double>> axes_;
};

/// Scalar values on the full tensor grid of a partition, row-major with the
/// last axis fastest. Immutable after construction in normal use; evaluation
/// between nodes is multilinear, which preserves rectangular increments.
class GridField {
public:
  GridField(GridPartition partition, std::vector<double> values);

  static GridField sample(const ScalarFn& fn, const GridPartition& partition);
  static GridField zeros(const GridPartition& partition);

  const GridPartition& partition() const { return part_; }
  const std::vector<double>& values() const { return values_; }
  std::vector<double>& values() { return values_; }

  double at(const std::vector<int>& node_idx) const;
  double& at(const std::vector<int>& node_idx);

  /// Multilinear interpolation; throws outside the domain.
  double operator()(const Point& p) const;

  int dim() const { return part_.dim(); }

private:
  GridPartition part_;
  std::vector<double> values_;
};

/// Rectangular increment [F]_s^t = sum_v (-1)^{|v|} F(s_v : t_{-v}).
/// Degenerate boxes (t_l == s_l for some l) give exactly 0 without evaluating
/// F; swapped coordinates contribute a factor (-1) each.
double rect_increment(const ScalarFn& F, const Point& s, const Point& t);
double rect_increment(const GridField& F, const Point& s, const Point& t);

/// Increment over one grid cell, from stored node values.
double cell_increment(const GridField& F, const std::vector<int>& cell_idx);

GridPartition refine(const GridPartition& P, int factor);
GridField sample(const ScalarFn& fn, const GridPartition& P);

/// Multilinear interpolation over externally owned node values (row-major,
/// last axis fastest). GridField::operator() routes through this.
double interp_value(const GridPartition& P, const std::vector<double>& values, const Point& p);

namespace detail {

/// Odometer over a multi-index with per-axis extents; calls body(idx).
template <typename Body>
void for_each_index(const std::vector<int>& extents, Body&& body) {
  const int n = int(extents.size());
  for (int m = 0; m < n; ++m)
    if (extents[m] <= 0) return;
  std::vector<int> idx(n, 0);
  while (true) {
    body(idx);
    int axis = n - 1;
    while (axis >= 0) {
      if (++idx[axis] < extents[axis]) break;
      idx[axis] = 0;
      --axis;
    }
    if (axis < 0) return;
  }
}

std::size_t linear_index(const std::vector<int>& extents, const std::vector<int>& idx);

}  // namespace detail

}  // namespace rsfield

#endif
