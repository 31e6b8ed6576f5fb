#ifndef RSFIELD_REPORT_HPP
#define RSFIELD_REPORT_HPP

#include <string>
#include <vector>

namespace rsfield {

struct ProbeStat {
  std::string probe;
  double observed = 0.0;
  double expected = 0.0;
  double se = 0.0;
  double z = 0.0;
};

/// Outcome of an ensemble-level hypothesis test. pass is true iff every |z|
/// stays below the two-sided threshold at level alpha, Bonferroni-corrected
/// across the probes.
struct TestReport {
  std::string name;
  std::vector<ProbeStat> statistics;
  bool pass = true;
  double alpha = 0.01;
};

/// Inverse standard normal CDF (Beasley-Springer-Moro).
double normal_quantile(double p);

/// Two-sided z threshold at level alpha with Bonferroni correction over
/// n_probes comparisons.
double z_threshold(double alpha, std::size_t n_probes);

/// Fills pass from the recorded z-scores.
void finalize_report(TestReport& report);

}  // namespace rsfield

#endif
