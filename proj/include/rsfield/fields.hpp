#ifndef RSFIELD_FIELDS_HPP
#define RSFIELD_FIELDS_HPP

#include <cstdint>
#include <string>

#include "rsfield/grid.hpp"
#include "rsfield/report.hpp"

namespace rsfield {

/// Strictly positive mean-reversion rates, one per axis.
struct ThetaVector {
  std::vector<double> components;

  explicit ThetaVector(std::vector<double> c);
  int dim() const { return int(components.size()); }
  double operator[](int m) const { return components[m]; }
  double dot(const Point& p) const;
};

/// Anisotropy indices, each in (0,1).
struct HurstVector {
  std::vector<double> components;

  explicit HurstVector(std::vector<double> c);
  int dim() const { return int(components.size()); }
  double operator[](int m) const { return components[m]; }
};

/// M replications of a scalar field on a shared partition. Values are stored
/// flat per replication in the same row-major node order as GridField.
struct FieldEnsemble {
  GridPartition partition;
  std::vector<std::vector<double>> replications;
  std::uint64_t seed = 0;
  std::string driver;
  std::string params;  // human-readable driver parameters

  int size() const { return int(replications.size()); }
  GridField field(int m) const { return GridField(partition, replications[m]); }
  double value(int m, std::size_t node) const { return replications[m][node]; }
};

using CovFn = std::function<double(const Point&, const Point&)>;

/// Dense node limit for exact covariance factorization.
inline constexpr std::size_t kMaxDenseNodes = 4096;

/// Exact mean-zero Gaussian sampling on the tensor grid via dense Cholesky
/// factorization, with escalating diagonal jitter on near-PSD covariances.
/// Throws if the covariance stays non-factorizable at the jitter cap.
FieldEnsemble gaussian_field(const CovFn& cov, const GridPartition& P, int M,
                             std::uint64_t seed);

/// Brownian sheet on arbitrary (possibly signed) grids: independent white
/// noise per orthant, value 0 on the coordinate hyperplanes, covariance
/// prod_i min(|s_i|,|t_i|) 1{s_i t_i > 0}. Sampled by prefix sums of cell
/// increments, so there is no dense node cap.
FieldEnsemble brownian_sheet(const GridPartition& P, int M, std::uint64_t seed);

/// One-dimensional covariance factor of the signed sheet.
double brownian_sheet_cov1(double a, double b);

/// Anisotropic fractional Brownian sheet with the tensor-product covariance
/// prod_i (|s_i|^{2H_i} + |t_i|^{2H_i} - |t_i - s_i|^{2H_i}) / 2.
FieldEnsemble fbm_sheet(const HurstVector& H, const GridPartition& P, int M,
                        std::uint64_t seed);
double fbm_cov1(double a, double b, double hurst);

/// Compares mean and variance of [X]_{s+h}^{t+h} against [X]_s^t across the
/// ensemble, for every probe box and shift; z-tests at level alpha with
/// Bonferroni correction.
TestReport check_stationary_increments(const FieldEnsemble& E, const std::vector<Point>& shifts,
                                       const std::vector<Box>& probes, double alpha);

/// Values of int_{-s}^{t} e^{Theta.u} dG(u) for each truncation level s,
/// over the field's native grid. Successive differences expose the
/// truncation decay.
std::vector<double> g_theta_truncation_probe(const GridField& G, const ThetaVector& theta,
                                             const Point& t, const std::vector<double>& s_levels);

/// Subtracts the reflected-corner trace F(t) = (1/N) sum_l G(t_{-l} : t~_l)
/// so that the result vanishes on the sampled hyperplane sum(t) = 0. Each
/// term depends on N-1 coordinates only, so no rectangular increment changes.
GridField g_theta_zero_normalize(const GridField& G);

}  // namespace rsfield

#endif
