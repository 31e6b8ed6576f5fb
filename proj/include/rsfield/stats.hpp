#ifndef RSFIELD_STATS_HPP
#define RSFIELD_STATS_HPP

#include <utility>

#include "rsfield/fields.hpp"
#include "rsfield/report.hpp"

namespace rsfield {

/// Sample covariance of the field values at s and t across replications,
/// with a leave-one-out jackknife standard error. Requires M >= 30.
std::pair<double, double> empirical_cov(const FieldEnsemble& E, const Point& s, const Point& t);

/// Second-order stationarity: cov at (s,t) against cov at (s+h,t+h) for every
/// node pair and shift; z-tests on the jackknifed difference, Bonferroni
/// corrected at level alpha.
TestReport stationarity_test(const FieldEnsemble& E, const std::vector<Point>& shifts,
                             const std::vector<std::pair<Point, Point>>& node_pairs,
                             double alpha);

/// Theta-self-similarity of Y (values stored over the t-grid): for shift s,
/// cov at the shifted nodes must equal e^{2 Theta.s} times the base cov.
TestReport self_similarity_test(const FieldEnsemble& Y, const ThetaVector& theta,
                                const std::vector<Point>& shifts,
                                const std::vector<std::pair<Point, Point>>& node_pairs,
                                double alpha);

}  // namespace rsfield

#endif
