#include "rsfield/fields.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <sstream>
#include <stdexcept>

#include "rsfield/parallel.hpp"
#include "rsfield/rng.hpp"
#include "rsfield/rsint.hpp"

namespace rsfield {

ThetaVector::ThetaVector(std::vector<double> c) : components(std::move(c)) {
  if (components.empty()) throw std::invalid_argument("ThetaVector: empty");
  for (double x : components)
    if (!(x > 0.0) || !std::isfinite(x))
      throw std::invalid_argument("ThetaVector: components must be positive");
}

double ThetaVector::dot(const Point& p) const {
  if (p.size() != components.size()) throw std::invalid_argument("ThetaVector: dimension mismatch");
  double s = 0.0;
  for (std::size_t m = 0; m < components.size(); ++m) s += components[m] * p[m];
  return s;
}

HurstVector::HurstVector(std::vector<double> c) : components(std::move(c)) {
  if (components.empty()) throw std::invalid_argument("HurstVector: empty");
  for (double x : components)
    if (!(x > 0.0 && x < 1.0)) throw std::invalid_argument("HurstVector: components must be in (0,1)");
}

namespace {

// In-place lower Cholesky; returns false when a pivot goes negative beyond
// tolerance. Zero-variance pivots are allowed and produce a zero column.
bool try_cholesky(std::vector<double>& A, std::size_t n, double tol) {
  for (std::size_t j = 0; j < n; ++j) {
    double d = A[j * n + j];
    for (std::size_t k = 0; k < j; ++k) d -= A[j * n + k] * A[j * n + k];
    if (d < -tol) return false;
    if (d <= tol) {
      A[j * n + j] = 0.0;
      for (std::size_t i = j + 1; i < n; ++i) A[i * n + j] = 0.0;
      continue;
    }
    const double l = std::sqrt(d);
    A[j * n + j] = l;
    for (std::size_t i = j + 1; i < n; ++i) {
      double s = A[i * n + j];
      for (std::size_t k = 0; k < j; ++k) s -= A[i * n + k] * A[j * n + k];
      A[i * n + j] = s / l;
    }
  }
  return true;
}

std::vector<Point> grid_nodes(const GridPartition& P) {
  const int N = P.dim();
  std::vector<int> extents(N);
  for (int m = 0; m < N; ++m) extents[m] = P.nodes(m);
  std::vector<Point> nodes;
  nodes.reserve(P.node_count());
  Point p(N);
  detail::for_each_index(extents, [&](const std::vector<int>& idx) {
    for (int m = 0; m < N; ++m) p[m] = P.axis(m)[idx[m]];
    nodes.push_back(p);
  });
  return nodes;
}

}  // namespace

FieldEnsemble gaussian_field(const CovFn& cov, const GridPartition& P, int M,
                             std::uint64_t seed) {
  if (M < 1) throw std::invalid_argument("gaussian_field: M must be >= 1");
  const std::size_t n = P.node_count();
  if (n > kMaxDenseNodes)
    throw std::invalid_argument("gaussian_field: node count exceeds dense sampling cap");

  const auto nodes = grid_nodes(P);
  std::vector<double> K(n * n);
  double trace = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j <= i; ++j) {
      const double c = cov(nodes[i], nodes[j]);
      if (!std::isfinite(c)) throw std::runtime_error("gaussian_field: non-finite covariance");
      K[i * n + j] = c;
      K[j * n + i] = c;
    }
    trace += K[i * n + i];
  }
  const double scale = std::max(trace / double(n), 1e-300);

  std::vector<double> L;
  bool ok = false;
  for (double jitter : {0.0, 1e-12, 1e-10, 1e-8, 1e-6}) {
    L = K;
    for (std::size_t i = 0; i < n; ++i) L[i * n + i] += jitter * scale;
    if (try_cholesky(L, n, 1e-12 * scale)) {
      ok = true;
      break;
    }
  }
  if (!ok)
    throw std::runtime_error("gaussian_field: covariance not factorizable (non-PSD?)");

  FieldEnsemble E{P, std::vector<std::vector<double>>(M), seed, "gaussian", ""};
  parallel_for(std::size_t(M), [&](std::size_t m) {
    std::vector<double> z(n);
    for (std::size_t i = 0; i < n; ++i) z[i] = rng::normal(seed, m, i);
    std::vector<double>& out = E.replications[m];
    out.assign(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
      double s = 0.0;
      for (std::size_t j = 0; j <= i; ++j) s += L[i * n + j] * z[j];
      out[i] = s;
    }
  });
  return E;
}

double brownian_sheet_cov1(double a, double b) {
  if (a * b <= 0.0) return 0.0;
  return std::min(std::abs(a), std::abs(b));
}

FieldEnsemble brownian_sheet(const GridPartition& P, int M, std::uint64_t seed) {
  if (M < 1) throw std::invalid_argument("brownian_sheet: M must be >= 1");
  const int N = P.dim();

  // Absolute-value breakpoints per axis (always anchored at 0) and the map
  // from original breakpoints to (sign, abs index).
  std::vector<std::vector<double>> abs_axis(N);
  std::vector<std::vector<int>> abs_index(N);
  std::vector<std::vector<int>> node_sign(N);
  for (int m = 0; m < N; ++m) {
    std::vector<double> vals{0.0};
    for (double b : P.axis(m)) vals.push_back(std::abs(b));
    std::sort(vals.begin(), vals.end());
    vals.erase(std::unique(vals.begin(), vals.end()), vals.end());
    abs_axis[m] = vals;
    for (double b : P.axis(m)) {
      const auto it = std::lower_bound(vals.begin(), vals.end(), std::abs(b));
      abs_index[m].push_back(int(it - vals.begin()));
      node_sign[m].push_back(b < 0.0 ? 1 : 0);  // bit set for the negative side
    }
  }

  std::vector<int> abs_nodes(N), abs_cells(N), node_extents(N);
  std::size_t abs_node_count = 1;
  for (int m = 0; m < N; ++m) {
    abs_nodes[m] = int(abs_axis[m].size());
    abs_cells[m] = abs_nodes[m] - 1;
    node_extents[m] = P.nodes(m);
    abs_node_count *= std::size_t(abs_nodes[m]);
  }

  // Orthants that actually occur on this grid.
  std::vector<std::uint32_t> orthants;
  {
    std::vector<int> extents(N);
    for (int m = 0; m < N; ++m) extents[m] = P.nodes(m);
    std::vector<char> seen(std::size_t(1) << N, 0);
    detail::for_each_index(extents, [&](const std::vector<int>& idx) {
      std::uint32_t code = 0;
      for (int m = 0; m < N; ++m) code |= std::uint32_t(node_sign[m][idx[m]]) << m;
      seen[code] = 1;
    });
    for (std::uint32_t c = 0; c < (1u << N); ++c)
      if (seen[c]) orthants.push_back(c);
  }

  FieldEnsemble E{P, std::vector<std::vector<double>>(M), seed, "bsheet", ""};
  parallel_for(std::size_t(M), [&](std::size_t rep) {
    std::map<std::uint32_t, std::vector<double>> sheets;
    for (std::uint32_t code : orthants) {
      std::vector<double>& W = sheets[code];
      W.assign(abs_node_count, 0.0);
      // independent white-noise increment per abs-cell, placed at the cell's
      // upper node, then prefix-summed along every axis
      const std::uint64_t stream = (std::uint64_t(rep) << 8) | code;
      std::vector<int> cell_ext(abs_cells);
      std::size_t counter = 0;
      std::vector<int> node(N);
      detail::for_each_index(cell_ext, [&](const std::vector<int>& cell) {
        double vol = 1.0;
        for (int m = 0; m < N; ++m) {
          vol *= abs_axis[m][cell[m] + 1] - abs_axis[m][cell[m]];
          node[m] = cell[m] + 1;
        }
        W[detail::linear_index(abs_nodes, node)] =
            rng::normal(seed, stream, counter++) * std::sqrt(vol);
      });
      for (int axis = 0; axis < N; ++axis) {
        std::size_t stride = 1;
        for (int m = axis + 1; m < N; ++m) stride *= std::size_t(abs_nodes[m]);
        const std::size_t block = stride * std::size_t(abs_nodes[axis]);
        for (std::size_t i = 0; i < abs_node_count; ++i)
          if (i % block >= stride) W[i] += W[i - stride];
      }
    }
    std::vector<double>& out = E.replications[rep];
    out.assign(P.node_count(), 0.0);
    std::size_t k = 0;
    std::vector<int> abs_node(N);
    detail::for_each_index(node_extents, [&](const std::vector<int>& idx) {
      std::uint32_t code = 0;
      for (int m = 0; m < N; ++m) {
        code |= std::uint32_t(node_sign[m][idx[m]]) << m;
        abs_node[m] = abs_index[m][idx[m]];
      }
      out[k++] = sheets[code][detail::linear_index(abs_nodes, abs_node)];
    });
  });
  return E;
}

double fbm_cov1(double a, double b, double hurst) {
  const double h2 = 2.0 * hurst;
  return 0.5 * (std::pow(std::abs(a), h2) + std::pow(std::abs(b), h2) -
                std::pow(std::abs(b - a), h2));
}

FieldEnsemble fbm_sheet(const HurstVector& H, const GridPartition& P, int M,
                        std::uint64_t seed) {
  if (H.dim() != P.dim()) throw std::invalid_argument("fbm_sheet: dimension mismatch");
  CovFn cov = [H](const Point& s, const Point& t) {
    double c = 1.0;
    for (int m = 0; m < H.dim(); ++m) c *= fbm_cov1(s[m], t[m], H[m]);
    return c;
  };
  FieldEnsemble E = gaussian_field(cov, P, M, seed);
  E.driver = "fbm";
  std::ostringstream os;
  os << "H=";
  for (int m = 0; m < H.dim(); ++m) os << (m ? "," : "") << H[m];
  E.params = os.str();
  return E;
}

namespace {

double ensemble_increment(const FieldEnsemble& E, int m, const Point& s, const Point& t) {
  auto eval = [&](const Point& p) { return interp_value(E.partition, E.replications[m], p); };
  return rect_increment(ScalarFn(eval), s, t);
}

void add_mean_zero_probe(TestReport& report, const std::string& name,
                         const std::vector<double>& d) {
  const std::size_t n = d.size();
  double mean = 0.0;
  for (double x : d) mean += x;
  mean /= double(n);
  double var = 0.0;
  for (double x : d) var += (x - mean) * (x - mean);
  var /= double(n - 1);
  const double se = std::sqrt(var / double(n));
  ProbeStat ps;
  ps.probe = name;
  ps.observed = mean;
  ps.expected = 0.0;
  ps.se = se;
  if (se > 0.0)
    ps.z = mean / se;
  else
    ps.z = (mean == 0.0) ? 0.0 : std::numeric_limits<double>::infinity();
  report.statistics.push_back(ps);
}

}  // namespace

TestReport check_stationary_increments(const FieldEnsemble& E, const std::vector<Point>& shifts,
                                       const std::vector<Box>& probes, double alpha) {
  if (E.size() < 2) throw std::invalid_argument("check_stationary_increments: M too small");
  TestReport report;
  report.name = "stationary-increments";
  report.alpha = alpha;
  const int M = E.size();
  for (std::size_t pi = 0; pi < probes.size(); ++pi) {
    const Box& b = probes[pi];
    for (std::size_t si = 0; si < shifts.size(); ++si) {
      Point s2(b.lo), t2(b.hi);
      for (std::size_t m = 0; m < s2.size(); ++m) {
        s2[m] += shifts[si][m];
        t2[m] += shifts[si][m];
      }
      if (!E.partition.contains(s2, 1e-9) || !E.partition.contains(t2, 1e-9))
        throw std::invalid_argument("check_stationary_increments: shifted probe outside grid");
      std::vector<double> dmean(M), dvar(M);
      for (int m = 0; m < M; ++m) {
        const double a = ensemble_increment(E, m, b.lo, b.hi);
        const double c = ensemble_increment(E, m, s2, t2);
        dmean[m] = c - a;
        dvar[m] = c * c - a * a;
      }
      std::ostringstream os;
      os << "probe" << pi << " shift" << si;
      add_mean_zero_probe(report, os.str() + " mean", dmean);
      add_mean_zero_probe(report, os.str() + " var", dvar);
    }
  }
  finalize_report(report);
  return report;
}

std::vector<double> g_theta_truncation_probe(const GridField& G, const ThetaVector& theta,
                                             const Point& t, const std::vector<double>& s_levels) {
  const int N = G.dim();
  if (theta.dim() != N || int(t.size()) != N)
    throw std::invalid_argument("g_theta_truncation_probe: dimension mismatch");
  ScalarFn weight = [&theta](const Point& p) { return std::exp(theta.dot(p)); };
  std::vector<double> out;
  out.reserve(s_levels.size());
  for (double s : s_levels) {
    Box box{Point(N, -s), t};
    bool degenerate = false;
    for (int m = 0; m < N; ++m)
      if (!(box.lo[m] < box.hi[m])) degenerate = true;
    if (degenerate) {
      out.push_back(0.0);
      continue;
    }
    try {
      out.push_back(rs_integral(weight, G, box, TagPolicy::midpoint(), 1).value);
    } catch (const std::invalid_argument&) {
      throw std::invalid_argument("g_theta_truncation_probe: insufficient grid coverage");
    }
  }
  return out;
}

GridField g_theta_zero_normalize(const GridField& G) {
  const GridPartition& P = G.partition();
  const int N = P.dim();
  std::vector<int> extents(N);
  for (int m = 0; m < N; ++m) extents[m] = P.nodes(m);

  std::vector<double> out(G.values());
  Point p(N), q(N);
  std::size_t k = 0;
  detail::for_each_index(extents, [&](const std::vector<int>& idx) {
    for (int m = 0; m < N; ++m) p[m] = P.axis(m)[idx[m]];
    double trace = 0.0;
    for (int l = 0; l < N; ++l) {
      q = p;
      double other = 0.0;
      for (int m = 0; m < N; ++m)
        if (m != l) other += p[m];
      q[l] = -other;
      if (!P.contains(q, 1e-9))
        throw std::invalid_argument(
            "g_theta_zero_normalize: hyperplane not represented on grid "
            "(requires grid symmetric about sum(t)=0)");
      trace += G(q);
    }
    out[k++] -= trace / N;
  });
  return GridField(P, std::move(out));
}

}  // namespace rsfield
