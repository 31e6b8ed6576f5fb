#ifndef RSFIELD_VERIFY_HPP
#define RSFIELD_VERIFY_HPP

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "rsfield/rsint.hpp"

namespace rsfield {

/// Shared run configuration for the CLI commands. A flat key=value config
/// file fills it first; command-line flags override.
struct RunConfig {
  int n = 2;
  std::vector<double> theta{1.0, 1.0};
  std::vector<double> hurst;
  std::vector<double> grid_lo;
  std::vector<double> grid_hi;
  int cells = 16;
  int replications = 200;
  std::uint64_t seed = 1;
  double truncation = 0.0;  // 0 selects the e^{-theta s} < 1e-6 default
  int refinements = 3;
  double tolerance = 1e-3;
  double alpha = 0.01;
  int jobs = 0;
  std::string out_dir;
  std::string driver = "bsheet";
  std::string pipeline = "ou";
  std::string suite = "identities";
  std::string kind = "box";
  std::vector<double> apex;
  std::vector<int> subset;  // coordinate subset for mixed integrals
  std::string f_name = "product";
  std::string g_name = "one";

  void validate() const;  // throws std::invalid_argument on bad values
};

/// Parses `key = value` lines; '#' starts a comment. Unknown keys throw.
void apply_config_file(RunConfig& cfg, const std::string& path);
void apply_config_entry(RunConfig& cfg, const std::string& key, const std::string& value);

/// Named integrands for the CLI: one, product, expsum, exptheta, sinprod.
SmoothFn builtin_smooth(const std::string& name, int dim, const std::vector<double>& theta);

/// Random smooth separable-sum test function with exact partials; members of
/// the family are sums of products of exponential, affine and sine factors.
/// rate_scale < 1 damps the exponential rates and sine frequencies.
SmoothFn random_separable(int dim, std::uint64_t seed, double rate_scale = 1.0);

/// Suite runners used by `verify`. They print one line per check and return
/// 0 on success, 1 on a failed check.
int run_suite_identities(const RunConfig& cfg, std::ostream& log);
int run_suite_roundtrips(const RunConfig& cfg, std::ostream& log);
int run_suite_stationarity(const RunConfig& cfg, std::ostream& log);
int run_suite_langevin(const RunConfig& cfg, std::ostream& log);

int run_suite(const RunConfig& cfg, std::ostream& log);  // dispatch on cfg.suite

}  // namespace rsfield

#endif
