#include "rsfield/report.hpp"

#include <cmath>
#include <stdexcept>

namespace rsfield {

double normal_quantile(double p) {
  if (!(p > 0.0 && p < 1.0)) throw std::invalid_argument("normal_quantile: p in (0,1) required");
  static const double a[] = {2.50662823884, -18.61500062529, 41.39119773534, -25.44106049637};
  static const double b[] = {-8.47351093090, 23.08336743743, -21.06224101826, 3.13082909833};
  static const double c[] = {0.3374754822726147, 0.9761690190917186, 0.1607979714918209,
                             0.0276438810333863, 0.0038405729373609, 0.0003951896511919,
                             0.0000321767881768, 0.0000002888167364, 0.0000003960315187};
  const double y = p - 0.5;
  if (std::abs(y) < 0.42) {
    const double r = y * y;
    return y * (((a[3] * r + a[2]) * r + a[1]) * r + a[0]) /
           ((((b[3] * r + b[2]) * r + b[1]) * r + b[0]) * r + 1.0);
  }
  double r = (y > 0) ? 1.0 - p : p;
  r = std::log(-std::log(r));
  double x = c[0];
  double rk = 1.0;
  for (int k = 1; k < 9; ++k) {
    rk *= r;
    x += c[k] * rk;
  }
  return (y > 0) ? x : -x;
}

double z_threshold(double alpha, std::size_t n_probes) {
  if (n_probes == 0) return normal_quantile(1.0 - alpha / 2.0);
  return normal_quantile(1.0 - alpha / (2.0 * double(n_probes)));
}

void finalize_report(TestReport& report) {
  const double zc = z_threshold(report.alpha, report.statistics.size());
  report.pass = true;
  for (const auto& s : report.statistics)
    if (!(std::abs(s.z) <= zc)) report.pass = false;
}

}  // namespace rsfield
