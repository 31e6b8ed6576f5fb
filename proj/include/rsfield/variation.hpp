#ifndef RSFIELD_VARIATION_HPP
#define RSFIELD_VARIATION_HPP

#include "rsfield/rsint.hpp"

namespace rsfield {

/// Partition-based variation estimate. The sup over all partitions is not
/// computable, so values are lower bounds from a refinement ladder; they
/// never decrease when the tested partition is refined.
struct VariationEstimate {
  double value = 0.0;
  double partition_norm = 0.0;
  bool is_lower_bound = true;
};

/// Vitali variation: sum of |cell increment| over the finest tested partition.
VariationEstimate vitali_variation(const ScalarFn& F, const Box& box, int refinements = 4,
                                   int base_cells = kDefaultBaseCells);
VariationEstimate vitali_variation(const GridField& F, const Box& box);

/// Hardy-Krause variation: sum over nonempty v of the Vitali variation of
/// r_v -> F(r_v : t_{-v}) on [s_v, t_v], anchored at the upper corner.
VariationEstimate hk_variation(const ScalarFn& F, const Box& box, int refinements = 4,
                               int base_cells = kDefaultBaseCells);

/// Analytic form for smooth functions:
/// sum over nonempty v of int |f_{t_v}(r_v : t_{-v})| dr_v by quadrature.
double hk_variation_smooth(const SmoothFn& f, const Box& box, int refinements = 6,
                           int base_cells = kDefaultBaseCells);

}  // namespace rsfield

#endif
