#ifndef RSFIELD_INDEXKIT_HPP
#define RSFIELD_INDEXKIT_HPP

#include <cstdint>
#include <stdexcept>
#include <vector>

namespace rsfield {

/// A point in N-dimensional parameter space.
using Point = std::vector<double>;

/// An ordered subset of the coordinate axes {1,...,N}, stored as a bitmask.
/// Bit (i-1) is set iff axis i belongs to the set. The ambient dimension is
/// capped at 16 so that sums over all 2^N subsets stay cheap.
class MultiIndexSet {
public:
  static constexpr int max_dim = 16;

  MultiIndexSet(int ambient_dim, std::uint32_t bits);

  static MultiIndexSet empty(int ambient_dim) { return {ambient_dim, 0u}; }
  static MultiIndexSet full(int ambient_dim);
  /// Builds from 1-based member indices (need not be sorted; duplicates rejected).
  static MultiIndexSet of(const std::vector<int>& members, int ambient_dim);

  int ambient_dim() const { return dim_; }
  int size() const;
  bool is_empty() const { return bits_ == 0; }
  bool is_full() const;
  bool contains(int axis) const;  // 1-based
  std::uint32_t bits() const { return bits_; }

  MultiIndexSet complement() const;
  MultiIndexSet set_union(const MultiIndexSet& other) const;
  MultiIndexSet set_intersection(const MultiIndexSet& other) const;
  bool disjoint_with(const MultiIndexSet& other) const;

  /// 1-based member indices in ascending order.
  std::vector<int> members() const;

  /// (-1)^|u|
  double sign() const { return (size() % 2 == 0) ? 1.0 : -1.0; }

  bool operator==(const MultiIndexSet& other) const {
    return dim_ == other.dim_ && bits_ == other.bits_;
  }

private:
  int dim_;
  std::uint32_t bits_;
};

/// All 2^N subsets of {1,...,N}, ordered by size and then lexicographically
/// by the ascending member list. Deterministic, suitable for test fixtures.
std::vector<MultiIndexSet> subsets(int ambient_dim);

/// y_i = s_i for i in u, y_i = t_i otherwise. The composition s_u:t_{-u}.
Point compose(const Point& s, const Point& t, const MultiIndexSet& u);

/// Composition from three sources: coordinates from t on u, from s on w,
/// from r elsewhere (t_u : s_w : r_{-u-w}). u and w must be disjoint.
Point compose3(const Point& r, const Point& s, const Point& t,
               const MultiIndexSet& u, const MultiIndexSet& w);

/// Picks the coordinates of t indexed by u, in ascending order of index.
std::vector<double> pick(const Point& t, const MultiIndexSet& u);

/// sum_{m=0}^{M} (-1)^m C(M,m); equals zero for every M >= 1.
double alternating_sum_check(int M);

namespace detail {
inline int popcount32(std::uint32_t x) {
  int c = 0;
  while (x) {
    x &= x - 1;
    ++c;
  }
  return c;
}
}  // namespace detail

}  // namespace rsfield

#endif
