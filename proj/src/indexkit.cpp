#include "rsfield/indexkit.hpp"

#include <algorithm>

namespace rsfield {

MultiIndexSet::MultiIndexSet(int ambient_dim, std::uint32_t bits)
    : dim_(ambient_dim), bits_(bits) {
  if (ambient_dim < 1 || ambient_dim > max_dim)
    throw std::invalid_argument("MultiIndexSet: ambient_dim must be in [1,16]");
  if (ambient_dim < 32 && (bits >> ambient_dim) != 0)
    throw std::invalid_argument("MultiIndexSet: member outside [1,N]");
}

MultiIndexSet MultiIndexSet::full(int ambient_dim) {
  if (ambient_dim < 1 || ambient_dim > max_dim)
    throw std::invalid_argument("MultiIndexSet: ambient_dim must be in [1,16]");
  return {ambient_dim, (ambient_dim == 32) ? ~0u : ((1u << ambient_dim) - 1u)};
}

MultiIndexSet MultiIndexSet::of(const std::vector<int>& members, int ambient_dim) {
  std::uint32_t bits = 0;
  for (int m : members) {
    if (m < 1 || m > ambient_dim)
      throw std::invalid_argument("MultiIndexSet: member outside [1,N]");
    std::uint32_t bit = 1u << (m - 1);
    if (bits & bit) throw std::invalid_argument("MultiIndexSet: duplicate member");
    bits |= bit;
  }
  return {ambient_dim, bits};
}

int MultiIndexSet::size() const { return detail::popcount32(bits_); }

bool MultiIndexSet::is_full() const { return size() == dim_; }

bool MultiIndexSet::contains(int axis) const {
  if (axis < 1 || axis > dim_) return false;
  return (bits_ >> (axis - 1)) & 1u;
}

MultiIndexSet MultiIndexSet::complement() const {
  std::uint32_t all = (1u << dim_) - 1u;
  return {dim_, all & ~bits_};
}

MultiIndexSet MultiIndexSet::set_union(const MultiIndexSet& other) const {
  if (dim_ != other.dim_) throw std::invalid_argument("set_union: dimension mismatch");
  return {dim_, bits_ | other.bits_};
}

MultiIndexSet MultiIndexSet::set_intersection(const MultiIndexSet& other) const {
  if (dim_ != other.dim_)
    throw std::invalid_argument("set_intersection: dimension mismatch");
  return {dim_, bits_ & other.bits_};
}

bool MultiIndexSet::disjoint_with(const MultiIndexSet& other) const {
  return (bits_ & other.bits_) == 0;
}

std::vector<int> MultiIndexSet::members() const {
  std::vector<int> out;
  out.reserve(size());
  for (int i = 1; i <= dim_; ++i)
    if (contains(i)) out.push_back(i);
  return out;
}

std::vector<MultiIndexSet> subsets(int ambient_dim) {
  if (ambient_dim < 1 || ambient_dim > MultiIndexSet::max_dim)
    throw std::invalid_argument("subsets: N must be in [1,16]");
  std::vector<MultiIndexSet> out;
  out.reserve(std::size_t(1) << ambient_dim);
  for (std::uint32_t m = 0; m < (1u << ambient_dim); ++m)
    out.emplace_back(ambient_dim, m);
  std::sort(out.begin(), out.end(), [](const MultiIndexSet& a, const MultiIndexSet& b) {
    if (a.size() != b.size()) return a.size() < b.size();
    return a.members() < b.members();
  });
  return out;
}

namespace {
void check_point_dim(const Point& p, int dim, const char* what) {
  if (int(p.size()) != dim) throw std::invalid_argument(std::string(what) + ": dimension mismatch");
}
}  // namespace

Point compose(const Point& s, const Point& t, const MultiIndexSet& u) {
  const int dim = u.ambient_dim();
  check_point_dim(s, dim, "compose");
  check_point_dim(t, dim, "compose");
  Point y(t);
  for (int i = 1; i <= dim; ++i)
    if (u.contains(i)) y[i - 1] = s[i - 1];
  return y;
}

Point compose3(const Point& r, const Point& s, const Point& t,
               const MultiIndexSet& u, const MultiIndexSet& w) {
  const int dim = u.ambient_dim();
  if (!u.disjoint_with(w)) throw std::invalid_argument("compose3: overlapping subsets");
  check_point_dim(r, dim, "compose3");
  check_point_dim(s, dim, "compose3");
  check_point_dim(t, dim, "compose3");
  Point y(r);
  for (int i = 1; i <= dim; ++i) {
    if (u.contains(i))
      y[i - 1] = t[i - 1];
    else if (w.contains(i))
      y[i - 1] = s[i - 1];
  }
  return y;
}

std::vector<double> pick(const Point& t, const MultiIndexSet& u) {
  check_point_dim(t, u.ambient_dim(), "pick");
  std::vector<double> out;
  out.reserve(u.size());
  for (int i = 1; i <= u.ambient_dim(); ++i)
    if (u.contains(i)) out.push_back(t[i - 1]);
  return out;
}

double alternating_sum_check(int M) {
  if (M < 1) throw std::invalid_argument("alternating_sum_check: M must be positive");
  // C(M,m) built incrementally; values stay integral and exact for small M.
  double sum = 0.0;
  double binom = 1.0;
  for (int m = 0; m <= M; ++m) {
    sum += (m % 2 == 0 ? binom : -binom);
    binom = binom * double(M - m) / double(m + 1);
  }
  return sum;
}

}  // namespace rsfield
