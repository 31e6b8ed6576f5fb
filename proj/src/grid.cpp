#include "rsfield/grid.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace rsfield {

namespace detail {

std::size_t linear_index(const std::vector<int>& extents, const std::vector<int>& idx) {
  std::size_t lin = 0;
  for (std::size_t m = 0; m < extents.size(); ++m) lin = lin * extents[m] + idx[m];
  return lin;
}

}  // namespace detail

GridPartition::GridPartition(std::vector<std::vector<double>> axes) : axes_(std::move(axes)) {
  if (axes_.empty()) throw std::invalid_argument("GridPartition: no axes");
  for (const auto& ax : axes_) {
    if (ax.size() < 2) throw std::invalid_argument("GridPartition: axis needs >= 2 breakpoints");
    for (std::size_t i = 0; i + 1 < ax.size(); ++i)
      if (!(ax[i] < ax[i + 1]))
        throw std::invalid_argument("GridPartition: breakpoints must be strictly increasing");
    for (double x : ax)
      if (!std::isfinite(x)) throw std::invalid_argument("GridPartition: non-finite breakpoint");
  }
}

GridPartition GridPartition::uniform(const Point& lo, const Point& hi,
                                     const std::vector<int>& cells) {
  if (lo.size() != hi.size() || lo.size() != cells.size())
    throw std::invalid_argument("GridPartition::uniform: dimension mismatch");
  std::vector<std::vector<double>> axes(lo.size());
  for (std::size_t m = 0; m < lo.size(); ++m) {
    if (cells[m] < 1) throw std::invalid_argument("GridPartition::uniform: cells must be >= 1");
    if (!(lo[m] < hi[m])) throw std::invalid_argument("GridPartition::uniform: lo must be < hi");
    axes[m].resize(cells[m] + 1);
    const double h = (hi[m] - lo[m]) / cells[m];
    for (int i = 0; i <= cells[m]; ++i) axes[m][i] = lo[m] + i * h;
    axes[m].back() = hi[m];
  }
  return GridPartition(std::move(axes));
}

GridPartition GridPartition::uniform(const Point& lo, const Point& hi, int cells_per_axis) {
  return uniform(lo, hi, std::vector<int>(lo.size(), cells_per_axis));
}

std::size_t GridPartition::node_count() const {
  std::size_t n = 1;
  for (int m = 0; m < dim(); ++m) n *= std::size_t(nodes(m));
  return n;
}

std::size_t GridPartition::cell_count() const {
  std::size_t n = 1;
  for (int m = 0; m < dim(); ++m) n *= std::size_t(cells(m));
  return n;
}

double GridPartition::norm() const {
  double w = 0.0;
  for (const auto& ax : axes_)
    for (std::size_t i = 0; i + 1 < ax.size(); ++i) w = std::max(w, ax[i + 1] - ax[i]);
  return w;
}

Point GridPartition::lower() const {
  Point p(dim());
  for (int m = 0; m < dim(); ++m) p[m] = axes_[m].front();
  return p;
}

Point GridPartition::upper() const {
  Point p(dim());
  for (int m = 0; m < dim(); ++m) p[m] = axes_[m].back();
  return p;
}

bool GridPartition::contains(const Point& p, double tol) const {
  if (int(p.size()) != dim()) return false;
  for (int m = 0; m < dim(); ++m)
    if (p[m] < axes_[m].front() - tol || p[m] > axes_[m].back() + tol) return false;
  return true;
}

GridPartition GridPartition::refined(int factor) const {
  if (factor < 2) throw std::invalid_argument("refined: factor must be >= 2");
  std::vector<std::vector<double>> axes(dim());
  for (int m = 0; m < dim(); ++m) {
    const auto& ax = axes_[m];
    axes[m].reserve((ax.size() - 1) * factor + 1);
    for (std::size_t i = 0; i + 1 < ax.size(); ++i) {
      axes[m].push_back(ax[i]);
      const double h = (ax[i + 1] - ax[i]) / factor;
      for (int k = 1; k < factor; ++k) axes[m].push_back(ax[i] + k * h);
    }
    axes[m].push_back(ax.back());
  }
  return GridPartition(std::move(axes));
}

GridPartition GridPartition::coarsened() const {
  std::vector<std::vector<double>> axes(dim());
  for (int m = 0; m < dim(); ++m) {
    const auto& ax = axes_[m];
    for (std::size_t i = 0; i < ax.size(); i += 2) axes[m].push_back(ax[i]);
    if (axes[m].back() != ax.back()) axes[m].push_back(ax.back());
    if (axes[m].size() < 2) axes[m] = {ax.front(), ax.back()};
  }
  return GridPartition(std::move(axes));
}

GridPartition GridPartition::clipped(const Box& box, double tol) const {
  if (box.dim() != dim()) throw std::invalid_argument("clipped: dimension mismatch");
  std::vector<std::vector<double>> axes(dim());
  for (int m = 0; m < dim(); ++m) {
    const double lo = box.lo[m], hi = box.hi[m];
    if (lo < axes_[m].front() - tol || hi > axes_[m].back() + tol)
      throw std::invalid_argument("clipped: box exceeds partition domain");
    if (!(lo < hi)) throw std::invalid_argument("clipped: empty box");
    auto& out = axes[m];
    out.push_back(lo);
    for (double x : axes_[m])
      if (x > lo + tol && x < hi - tol) out.push_back(x);
    out.push_back(hi);
  }
  return GridPartition(std::move(axes));
}

std::size_t GridPartition::node_index(const std::vector<int>& idx) const {
  std::size_t lin = 0;
  for (int m = 0; m < dim(); ++m) {
    if (idx[m] < 0 || idx[m] >= nodes(m)) throw std::out_of_range("node_index: out of range");
    lin = lin * nodes(m) + idx[m];
  }
  return lin;
}

GridField::GridField(GridPartition partition, std::vector<double> values)
    : part_(std::move(partition)), values_(std::move(values)) {
  if (values_.size() != part_.node_count())
    throw std::invalid_argument("GridField: value count does not match grid");
}

GridField GridField::sample(const ScalarFn& fn, const GridPartition& partition) {
  std::vector<double> vals(partition.node_count());
  std::vector<int> extents(partition.dim());
  for (int m = 0; m < partition.dim(); ++m) extents[m] = partition.nodes(m);
  Point p(partition.dim());
  std::size_t k = 0;
  detail::for_each_index(extents, [&](const std::vector<int>& idx) {
    for (int m = 0; m < partition.dim(); ++m) p[m] = partition.axis(m)[idx[m]];
    const double v = fn(p);
    if (!std::isfinite(v)) throw std::runtime_error("GridField::sample: non-finite sample value");
    vals[k++] = v;
  });
  return GridField(partition, std::move(vals));
}

GridField GridField::zeros(const GridPartition& partition) {
  return GridField(partition, std::vector<double>(partition.node_count(), 0.0));
}

double GridField::at(const std::vector<int>& node_idx) const {
  return values_[part_.node_index(node_idx)];
}

double& GridField::at(const std::vector<int>& node_idx) {
  return values_[part_.node_index(node_idx)];
}

double GridField::operator()(const Point& p) const { return interp_value(part_, values_, p); }

double interp_value(const GridPartition& P, const std::vector<double>& values, const Point& p) {
  const int N = P.dim();
  if (int(p.size()) != N) throw std::invalid_argument("interp_value: dimension mismatch");
  // locate the cell and barycentric weight per axis
  std::vector<int> base(N);
  std::vector<double> w(N);
  std::vector<int> node_extents(N);
  for (int m = 0; m < N; ++m) {
    node_extents[m] = P.nodes(m);
    const auto& ax = P.axis(m);
    const double x = p[m];
    const double tol = 1e-12 * (std::abs(ax.front()) + std::abs(ax.back()) + 1.0);
    if (x < ax.front() - tol || x > ax.back() + tol)
      throw std::out_of_range("interp_value: point outside domain");
    auto it = std::upper_bound(ax.begin(), ax.end(), x);
    int i = int(it - ax.begin()) - 1;
    i = std::clamp(i, 0, int(ax.size()) - 2);
    base[m] = i;
    w[m] = (x - ax[i]) / (ax[i + 1] - ax[i]);
    w[m] = std::clamp(w[m], 0.0, 1.0);
  }
  double acc = 0.0;
  std::vector<int> node(N);
  for (std::uint32_t corner = 0; corner < (1u << N); ++corner) {
    double weight = 1.0;
    for (int m = 0; m < N; ++m) {
      const bool upper = (corner >> m) & 1u;
      weight *= upper ? w[m] : (1.0 - w[m]);
      node[m] = base[m] + (upper ? 1 : 0);
    }
    if (weight != 0.0) acc += weight * values[detail::linear_index(node_extents, node)];
  }
  return acc;
}

namespace {

template <typename Eval>
double rect_increment_impl(const Eval& eval, const Point& s, const Point& t) {
  const int N = int(s.size());
  if (t.size() != s.size()) throw std::invalid_argument("rect_increment: dimension mismatch");
  double sign = 1.0;
  Point lo(s), hi(t);
  for (int m = 0; m < N; ++m) {
    if (lo[m] == hi[m]) return 0.0;
    if (hi[m] < lo[m]) {
      std::swap(lo[m], hi[m]);
      sign = -sign;
    }
  }
  long double acc = 0.0L;
  Point corner(N);
  for (std::uint32_t v = 0; v < (1u << N); ++v) {
    // bit m set: coordinate m taken from lo (the "s_v" slot)
    int par = 0;
    for (int m = 0; m < N; ++m) {
      const bool low = (v >> m) & 1u;
      corner[m] = low ? lo[m] : hi[m];
      par += low ? 1 : 0;
    }
    const double val = eval(corner);
    acc += (par % 2 == 0) ? val : -val;
  }
  return sign * double(acc);
}

}  // namespace

double rect_increment(const ScalarFn& F, const Point& s, const Point& t) {
  return rect_increment_impl([&](const Point& p) { return F(p); }, s, t);
}

double rect_increment(const GridField& F, const Point& s, const Point& t) {
  return rect_increment_impl([&](const Point& p) { return F(p); }, s, t);
}

double cell_increment(const GridField& F, const std::vector<int>& cell_idx) {
  const auto& P = F.partition();
  const int N = P.dim();
  if (int(cell_idx.size()) != N) throw std::invalid_argument("cell_increment: dimension mismatch");
  for (int m = 0; m < N; ++m)
    if (cell_idx[m] < 0 || cell_idx[m] >= P.cells(m))
      throw std::out_of_range("cell_increment: cell index out of range");
  long double acc = 0.0L;
  std::vector<int> node(N);
  for (std::uint32_t v = 0; v < (1u << N); ++v) {
    int par = 0;
    for (int m = 0; m < N; ++m) {
      const bool low = (v >> m) & 1u;
      node[m] = cell_idx[m] + (low ? 0 : 1);
      par += low ? 1 : 0;
    }
    const double val = F.at(node);
    acc += (par % 2 == 0) ? val : -val;
  }
  return double(acc);
}

GridPartition refine(const GridPartition& P, int factor) { return P.refined(factor); }

GridField sample(const ScalarFn& fn, const GridPartition& P) { return GridField::sample(fn, P); }

}  // namespace rsfield
