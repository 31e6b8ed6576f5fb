#ifndef RSFIELD_OU_HPP
#define RSFIELD_OU_HPP

#include <string>

#include "rsfield/fields.hpp"
#include "rsfield/triangle.hpp"

namespace rsfield {

enum class TransformKind { Lamperti, InvLamperti, MTheta, InvMTheta, OuSolution };

std::string to_string(TransformKind kind);

/// A field produced by one of the transforms. Everything is stored over the
/// t-grid; "values at e^t" is interpretation, never a stored exponential grid.
struct TransformedField {
  GridField base;
  ThetaVector theta;
  TransformKind kind;
  std::string provenance;
  double truncation = 0.0;   // meaningful for InvMTheta / OuSolution
  std::uint64_t seed = 0;    // seed of the source ensemble, 0 for deterministic input
};

/// (L_Theta X)(e^t) = e^{Theta.t} X(t), nodewise.
TransformedField lamperti(const GridField& X, const ThetaVector& theta);

/// (L^{-1}_Theta Y)(t) = e^{-Theta.t} Y(e^t), nodewise.
TransformedField inv_lamperti(const GridField& Y, const ThetaVector& theta);

/// G(t) = int_{T(t)} e^{-Theta.u} dY(e^u) (times (-1)^N for sum(t) < 0),
/// evaluated through the expanded corner + facet form. Y must cover the
/// reflected box R(t).
double m_theta_at(const GridField& Y, const ThetaVector& theta, const Point& t,
                  int refinements = 3, int base_cells = 16);
TransformedField m_theta(const GridField& Y, const ThetaVector& theta, int refinements = 3,
                         int base_cells = 16);

/// Y(e^t) = int_{-trunc}^{t} e^{Theta.u} dG(u) over the field's native grid,
/// for every node of the grid clipped at -trunc.
TransformedField m_theta_inv(const GridField& G, const ThetaVector& theta, double truncation);

/// X(t) = e^{-Theta.t} int_{-trunc}^{t} e^{Theta.u} dG(u), the stationary
/// Langevin solution with exponential truncation of the lower limit.
TransformedField ou_solve(const GridField& G, const ThetaVector& theta, double truncation);

/// Truncation that makes max_i e^{-theta_i s} < eps.
double default_truncation(const ThetaVector& theta, double eps = 1e-6);

FieldEnsemble ou_solve_ensemble(const FieldEnsemble& G, const ThetaVector& theta,
                                double truncation);
FieldEnsemble lamperti_ensemble(const FieldEnsemble& X, const ThetaVector& theta);

/// |sum_u prod_{i in u} theta_i int_0^t d_{-u}X ds_u  -  [G]_0^t| at a grid
/// node t, every term discretized on the fields' native grid.
double langevin_residual(const GridField& X, const GridField& G, const ThetaVector& theta,
                         const Point& t);

/// Tests e^{Theta.t}(X - Y) for vanishing rectangular increments on the
/// probe boxes.
bool equivalence_check(const GridField& X, const GridField& Y, const ThetaVector& theta,
                       const std::vector<Box>& probes, double tol);

/// One additive term h^{(u)}(t_u) of a homogeneous solution; |u| < N.
struct HomogeneousPart {
  MultiIndexSet coords;
  std::function<double(const std::vector<double>&)> fn;
};

/// Builds f(t) = e^{-Theta.t} sum h^{(u)}(t_u) and returns the sup over a
/// grid of |sum_u prod theta_i f_{t_{-u}}(t)| with finite-difference
/// partials; near zero for genuine homogeneous solutions.
double homogeneous_solution_check(const std::vector<HomogeneousPart>& parts,
                                  const ThetaVector& theta, const Box& box, int refinements = 3);

}  // namespace rsfield

#endif
