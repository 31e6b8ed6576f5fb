#include "rsfield/ou.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include "rsfield/parallel.hpp"

namespace rsfield {

std::string to_string(TransformKind kind) {
  switch (kind) {
    case TransformKind::Lamperti: return "lamperti";
    case TransformKind::InvLamperti: return "inv-lamperti";
    case TransformKind::MTheta: return "m-theta";
    case TransformKind::InvMTheta: return "inv-m-theta";
    case TransformKind::OuSolution: return "ou-solution";
  }
  return "unknown";
}

namespace {

GridField scale_by_exp(const GridField& F, const ThetaVector& theta, double sign) {
  const GridPartition& P = F.partition();
  const int N = P.dim();
  if (theta.dim() != N) throw std::invalid_argument("dimension mismatch with theta");
  std::vector<int> extents(N);
  for (int m = 0; m < N; ++m) extents[m] = P.nodes(m);
  std::vector<double> out(F.values());
  Point p(N);
  std::size_t k = 0;
  detail::for_each_index(extents, [&](const std::vector<int>& idx) {
    for (int m = 0; m < N; ++m) p[m] = P.axis(m)[idx[m]];
    out[k] *= std::exp(sign * theta.dot(p));
    ++k;
  });
  return GridField(P, std::move(out));
}

}  // namespace

TransformedField lamperti(const GridField& X, const ThetaVector& theta) {
  return {scale_by_exp(X, theta, +1.0), theta, TransformKind::Lamperti, "lamperti", 0.0};
}

TransformedField inv_lamperti(const GridField& Y, const ThetaVector& theta) {
  return {scale_by_exp(Y, theta, -1.0), theta, TransformKind::InvLamperti, "inv-lamperti", 0.0};
}

double m_theta_at(const GridField& Y, const ThetaVector& theta, const Point& t, int refinements,
                  int base_cells) {
  const int N = Y.dim();
  if (int(t.size()) != N || theta.dim() != N)
    throw std::invalid_argument("m_theta_at: dimension mismatch");
  TriangleDomain dom = build_domain(t);
  const double S = dom.apex_sum();
  if (S == 0.0) return 0.0;

  // the whole reflected box R(t) must sit inside the sampled grid
  {
    Point lo(N), hi(N);
    for (int m = 0; m < N; ++m) {
      lo[m] = std::min(t[m], dom.reflected[m]);
      hi[m] = std::max(t[m], dom.reflected[m]);
    }
    if (!Y.partition().contains(lo, 1e-9) || !Y.partition().contains(hi, 1e-9))
      throw std::invalid_argument("m_theta_at: T(t) exceeds grid coverage");
  }

  auto weighted = [&](const Point& p) { return Y(p) * std::exp(-theta.dot(p)); };

  double corner = weighted(t);
  {
    Point y(t);
    double singles = 0.0;
    for (int l = 0; l < N; ++l) {
      y[l] = dom.reflected[l];
      singles += weighted(y);
      y[l] = t[l];
    }
    corner -= singles / N;
  }

  double facets = 0.0;
  int n = base_cells;
  for (int k = 1; k < refinements; ++k) n *= 2;
  for (const auto& v : subsets(N)) {
    if (v.is_empty()) continue;
    const auto vm = v.members();
    double coef = 1.0;
    for (int j : vm) coef *= theta[j - 1];
    if (S < 0.0) coef *= v.sign();
    auto integrand = [&](const std::vector<double>& x) {
      Point p(t);
      for (std::size_t j = 0; j < vm.size(); ++j) p[vm[j] - 1] = x[j];
      return weighted(p);
    };
    facets += coef * detail::facet_quadrature(integrand, dom, vm, n);
  }
  return corner + facets;
}

TransformedField m_theta(const GridField& Y, const ThetaVector& theta, int refinements,
                         int base_cells) {
  const GridPartition& P = Y.partition();
  const int N = P.dim();
  std::vector<int> extents(N);
  for (int m = 0; m < N; ++m) extents[m] = P.nodes(m);
  std::vector<Point> nodes;
  nodes.reserve(P.node_count());
  {
    Point p(N);
    detail::for_each_index(extents, [&](const std::vector<int>& idx) {
      for (int m = 0; m < N; ++m) p[m] = P.axis(m)[idx[m]];
      nodes.push_back(p);
    });
  }
  std::vector<double> vals(nodes.size());
  parallel_for(nodes.size(), [&](std::size_t i) {
    vals[i] = m_theta_at(Y, theta, nodes[i], refinements, base_cells);
  });
  return {GridField(P, std::move(vals)), theta, TransformKind::MTheta, "m-theta", 0.0};
}

TransformedField m_theta_inv(const GridField& G, const ThetaVector& theta, double truncation) {
  const int N = G.dim();
  if (theta.dim() != N) throw std::invalid_argument("m_theta_inv: dimension mismatch");
  if (!(truncation > 0.0)) throw std::invalid_argument("m_theta_inv: truncation must be positive");
  const GridPartition& P = G.partition();
  Box box{Point(N, -truncation), P.upper()};
  for (int m = 0; m < N; ++m)
    if (box.lo[m] < P.axis(m).front() - 1e-9)
      throw std::invalid_argument("m_theta_inv: grid does not cover the truncation corner");

  const GridPartition Q = P.clipped(box);
  const GridField g = GridField::sample([&G](const Point& p) { return G(p); }, Q);

  std::vector<int> node_extents(N), cell_extents(N);
  std::size_t node_count = 1;
  for (int m = 0; m < N; ++m) {
    node_extents[m] = Q.nodes(m);
    cell_extents[m] = Q.cells(m);
    node_count *= std::size_t(node_extents[m]);
  }

  // RS sum with midpoint tags, accumulated as prefix sums so that the value
  // at every node is the integral over [-trunc, node] in one pass.
  std::vector<double> vals(node_count, 0.0);
  {
    Point mid(N);
    std::vector<int> node(N);
    detail::for_each_index(cell_extents, [&](const std::vector<int>& cell) {
      for (int m = 0; m < N; ++m) {
        const auto& ax = Q.axis(m);
        mid[m] = 0.5 * (ax[cell[m]] + ax[cell[m] + 1]);
        node[m] = cell[m] + 1;
      }
      vals[detail::linear_index(node_extents, node)] =
          std::exp(theta.dot(mid)) * cell_increment(g, cell);
    });
    for (int axis = 0; axis < N; ++axis) {
      std::size_t stride = 1;
      for (int m = axis + 1; m < N; ++m) stride *= std::size_t(node_extents[m]);
      const std::size_t block = stride * std::size_t(node_extents[axis]);
      for (std::size_t i = 0; i < node_count; ++i)
        if (i % block >= stride) vals[i] += vals[i - stride];
    }
  }
  std::ostringstream os;
  os << "inv-m-theta(trunc=" << truncation << ")";
  return {GridField(Q, std::move(vals)), theta, TransformKind::InvMTheta, os.str(), truncation};
}

TransformedField ou_solve(const GridField& G, const ThetaVector& theta, double truncation) {
  TransformedField y = m_theta_inv(G, theta, truncation);
  TransformedField x{scale_by_exp(y.base, theta, -1.0), theta, TransformKind::OuSolution,
                     "ou-solution", truncation};
  return x;
}

double default_truncation(const ThetaVector& theta, double eps) {
  double s = 0.0;
  for (double th : theta.components) s = std::max(s, std::log(1.0 / eps) / th);
  return s;
}

FieldEnsemble ou_solve_ensemble(const FieldEnsemble& G, const ThetaVector& theta,
                                double truncation) {
  TransformedField first = ou_solve(G.field(0), theta, truncation);
  FieldEnsemble out{first.base.partition(), std::vector<std::vector<double>>(G.size()), G.seed,
                    G.driver + "+ou", G.params};
  out.replications[0] = first.base.values();
  parallel_for(std::size_t(G.size()), [&](std::size_t m) {
    if (m == 0) return;
    out.replications[m] = ou_solve(G.field(int(m)), theta, truncation).base.values();
  });
  return out;
}

FieldEnsemble lamperti_ensemble(const FieldEnsemble& X, const ThetaVector& theta) {
  FieldEnsemble out{X.partition, std::vector<std::vector<double>>(X.size()), X.seed,
                    X.driver + "+lamperti", X.params};
  parallel_for(std::size_t(X.size()), [&](std::size_t m) {
    out.replications[m] = lamperti(X.field(int(m)), theta).base.values();
  });
  return out;
}

double langevin_residual(const GridField& X, const GridField& G, const ThetaVector& theta,
                         const Point& t) {
  const int N = X.dim();
  if (G.dim() != N || theta.dim() != N || int(t.size()) != N)
    throw std::invalid_argument("langevin_residual: dimension mismatch");
  Box box{Point(N, 0.0), t};
  for (int m = 0; m < N; ++m)
    if (!(box.lo[m] < box.hi[m]))
      throw std::invalid_argument("langevin_residual: t must be > 0 componentwise");

  GridPartition PX = X.partition().clipped(box);
  GridPartition PG = G.partition().clipped(box);
  if (!(PX == PG)) throw std::invalid_argument("langevin_residual: misaligned grids");

  ScalarFn one = [](const Point&) { return 1.0; };
  ScalarFn x_eval = [&X](const Point& p) { return X(p); };
  const std::uint32_t full = (1u << N) - 1u;

  double lhs = 0.0;
  for (std::uint32_t umask = 0; umask < (1u << N); ++umask) {
    double coef = 1.0;
    for (int m = 0; m < N; ++m)
      if ((umask >> m) & 1u) coef *= theta[m];
    const std::uint32_t rs = full & ~umask;
    lhs += coef * detail::mixed_sum(one, x_eval, rs, PX, TagPolicy::midpoint());
  }
  const double rhs = rect_increment(G, box.lo, box.hi);
  return std::abs(lhs - rhs);
}

bool equivalence_check(const GridField& X, const GridField& Y, const ThetaVector& theta,
                       const std::vector<Box>& probes, double tol) {
  if (!(X.partition() == Y.partition()))
    throw std::invalid_argument("equivalence_check: fields on different grids");
  GridField Z = X;
  {
    const GridPartition& P = X.partition();
    const int N = P.dim();
    std::vector<int> extents(N);
    for (int m = 0; m < N; ++m) extents[m] = P.nodes(m);
    Point p(N);
    std::size_t k = 0;
    detail::for_each_index(extents, [&](const std::vector<int>& idx) {
      for (int m = 0; m < N; ++m) p[m] = P.axis(m)[idx[m]];
      Z.values()[k] = std::exp(theta.dot(p)) * (X.values()[k] - Y.values()[k]);
      ++k;
    });
  }
  for (const Box& b : probes)
    if (std::abs(rect_increment(Z, b.lo, b.hi)) > tol) return false;
  return true;
}

double homogeneous_solution_check(const std::vector<HomogeneousPart>& parts,
                                  const ThetaVector& theta, const Box& box, int refinements) {
  const int N = box.dim();
  if (theta.dim() != N) throw std::invalid_argument("homogeneous_solution_check: dimension mismatch");
  for (const auto& part : parts)
    if (part.coords.ambient_dim() != N || part.coords.is_full())
      throw std::invalid_argument("homogeneous_solution_check: parts must have |u| < N");

  ScalarFn f = [&parts, &theta](const Point& p) {
    double s = 0.0;
    for (const auto& part : parts) {
      std::vector<double> sub;
      sub.reserve(part.coords.size());
      for (int i : part.coords.members()) sub.push_back(p[i - 1]);
      s += part.fn(sub);
    }
    return std::exp(-theta.dot(p)) * s;
  };
  SmoothFn fd = smooth_from_fd(f, 1e-4);

  const int cells = std::max(2, 1 << refinements);
  const GridPartition P = GridPartition::uniform(box.lo, box.hi, cells);
  std::vector<int> extents(N);
  for (int m = 0; m < N; ++m) extents[m] = P.nodes(m);
  const std::uint32_t full = (1u << N) - 1u;

  double worst = 0.0;
  Point p(N);
  detail::for_each_index(extents, [&](const std::vector<int>& idx) {
    for (int m = 0; m < N; ++m) p[m] = P.axis(m)[idx[m]];
    double resid = 0.0;
    for (std::uint32_t umask = 0; umask < (1u << N); ++umask) {
      double coef = 1.0;
      for (int m = 0; m < N; ++m)
        if ((umask >> m) & 1u) coef *= theta[m];
      resid += coef * fd.partial(full & ~umask, p);
    }
    worst = std::max(worst, std::abs(resid));
  });
  return worst;
}

}  // namespace rsfield
