#include "rsfield/stats.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace rsfield {

namespace {

std::vector<double> node_values(const FieldEnsemble& E, const Point& p) {
  std::vector<double> out(E.size());
  for (int m = 0; m < E.size(); ++m) out[m] = interp_value(E.partition, E.replications[m], p);
  return out;
}

double sample_cov(const std::vector<double>& a, const std::vector<double>& b) {
  const std::size_t n = a.size();
  double ma = 0.0, mb = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    ma += a[i];
    mb += b[i];
  }
  ma /= double(n);
  mb /= double(n);
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += (a[i] - ma) * (b[i] - mb);
  return s / double(n - 1);
}

/// Jackknife SE of an arbitrary statistic given its leave-one-out values.
double jackknife_se(const std::vector<double>& loo) {
  const std::size_t n = loo.size();
  double mean = 0.0;
  for (double x : loo) mean += x;
  mean /= double(n);
  double s = 0.0;
  for (double x : loo) s += (x - mean) * (x - mean);
  return std::sqrt(s * double(n - 1) / double(n));
}

/// Leave-one-out covariances from sufficient statistics; O(n).
std::vector<double> loo_cov(const std::vector<double>& a, const std::vector<double>& b) {
  const std::size_t n = a.size();
  double Sa = 0.0, Sb = 0.0, Sab = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    Sa += a[i];
    Sb += b[i];
    Sab += a[i] * b[i];
  }
  std::vector<double> out(n);
  const double np = double(n - 1);
  for (std::size_t i = 0; i < n; ++i) {
    const double sa = Sa - a[i], sb = Sb - b[i], sab = Sab - a[i] * b[i];
    out[i] = (sab - sa * sb / np) / (np - 1.0);
  }
  return out;
}

}  // namespace

std::pair<double, double> empirical_cov(const FieldEnsemble& E, const Point& s, const Point& t) {
  if (E.size() < 30) throw std::invalid_argument("empirical_cov: need M >= 30");
  const auto a = node_values(E, s);
  const auto b = node_values(E, t);
  const double cov = sample_cov(a, b);
  return {cov, jackknife_se(loo_cov(a, b))};
}

TestReport stationarity_test(const FieldEnsemble& E, const std::vector<Point>& shifts,
                             const std::vector<std::pair<Point, Point>>& node_pairs,
                             double alpha) {
  if (E.size() < 30) throw std::invalid_argument("stationarity_test: need M >= 30");
  TestReport report;
  report.name = "stationarity";
  report.alpha = alpha;
  for (std::size_t pi = 0; pi < node_pairs.size(); ++pi) {
    const auto& [s, t] = node_pairs[pi];
    const auto a = node_values(E, s);
    const auto b = node_values(E, t);
    const auto base_loo = loo_cov(a, b);
    const double base = sample_cov(a, b);
    for (std::size_t si = 0; si < shifts.size(); ++si) {
      Point s2(s), t2(t);
      for (std::size_t m = 0; m < s2.size(); ++m) {
        s2[m] += shifts[si][m];
        t2[m] += shifts[si][m];
      }
      if (!E.partition.contains(s2, 1e-9) || !E.partition.contains(t2, 1e-9))
        throw std::invalid_argument("stationarity_test: shifted node off-grid");
      const auto c = node_values(E, s2);
      const auto d = node_values(E, t2);
      const auto shift_loo = loo_cov(c, d);
      std::vector<double> diff_loo(base_loo.size());
      for (std::size_t i = 0; i < diff_loo.size(); ++i) diff_loo[i] = shift_loo[i] - base_loo[i];
      const double observed = sample_cov(c, d);
      const double se = jackknife_se(diff_loo);
      ProbeStat ps;
      std::ostringstream os;
      os << "pair" << pi << " shift" << si;
      ps.probe = os.str();
      ps.observed = observed;
      ps.expected = base;
      ps.se = se;
      ps.z = (se > 0.0) ? (observed - base) / se : 0.0;
      report.statistics.push_back(ps);
    }
  }
  finalize_report(report);
  return report;
}

TestReport self_similarity_test(const FieldEnsemble& Y, const ThetaVector& theta,
                                const std::vector<Point>& shifts,
                                const std::vector<std::pair<Point, Point>>& node_pairs,
                                double alpha) {
  if (Y.size() < 30) throw std::invalid_argument("self_similarity_test: need M >= 30");
  TestReport report;
  report.name = "self-similarity";
  report.alpha = alpha;
  for (std::size_t pi = 0; pi < node_pairs.size(); ++pi) {
    const auto& [t, r] = node_pairs[pi];
    const auto a = node_values(Y, t);
    const auto b = node_values(Y, r);
    const auto base_loo = loo_cov(a, b);
    const double base = sample_cov(a, b);
    for (std::size_t si = 0; si < shifts.size(); ++si) {
      Point t2(t), r2(r);
      for (std::size_t m = 0; m < t2.size(); ++m) {
        t2[m] += shifts[si][m];
        r2[m] += shifts[si][m];
      }
      if (!Y.partition.contains(t2, 1e-9) || !Y.partition.contains(r2, 1e-9))
        throw std::invalid_argument("self_similarity_test: shifted node off-grid");
      const double scale = std::exp(2.0 * theta.dot(shifts[si]));
      const auto c = node_values(Y, t2);
      const auto d = node_values(Y, r2);
      const auto shift_loo = loo_cov(c, d);
      std::vector<double> diff_loo(base_loo.size());
      for (std::size_t i = 0; i < diff_loo.size(); ++i)
        diff_loo[i] = shift_loo[i] - scale * base_loo[i];
      const double observed = sample_cov(c, d);
      const double expected = scale * base;
      const double se = jackknife_se(diff_loo);
      ProbeStat ps;
      std::ostringstream os;
      os << "pair" << pi << " shift" << si;
      ps.probe = os.str();
      ps.observed = observed;
      ps.expected = expected;
      ps.se = se;
      ps.z = (se > 0.0) ? (observed - expected) / se : 0.0;
      report.statistics.push_back(ps);
    }
  }
  finalize_report(report);
  return report;
}

}  // namespace rsfield
