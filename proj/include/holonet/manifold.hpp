#ifndef HOLONET_MANIFOLD_HPP
#define HOLONET_MANIFOLD_HPP

#include <functional>
#include <string>
#include <vector>

#include "holonet/tensor.hpp"

namespace holonet {

enum class ManifoldKind { stiefel, sphere };

// A block is either a Stiefel point (legs ("in", n), ("out", m), n >= m,
// W^dagger W = 1) or a point on the complex unit sphere (leg ("v", p)).
struct ManifoldBlock {
  ManifoldKind kind = ManifoldKind::stiefel;
  DenseTensor value;
};

struct ManifoldPoint {
  std::vector<ManifoldBlock> blocks;
  std::int64_t parameter_count() const;
  double constraint_residual() const;  // max over blocks
};

// Tangents and Euclidean gradients share the block shapes of the point.
using TangentVector = std::vector<DenseTensor>;

using CostFn = std::function<double(const ManifoldPoint&)>;
using GradFn = std::function<TangentVector(const ManifoldPoint&)>;  // Euclidean
using HessVecFn = std::function<TangentVector(const ManifoldPoint&, const TangentVector&)>;

struct OptimizerOptions {
  int max_iters = 500;
  double gtol = 1e-9;
  double ftol = 0.0;  // stop when |cost change| < ftol (0: disabled)
  double initial_step = 1.0;
  int ls_max_backtracks = 40;
};

struct OptimizerReport {
  double final_cost = 0;
  int iterations = 0;
  double gradient_norm = 0;
  bool converged = false;
  int restart_index = 0;
  bool line_search_failed = false;
};

// Closed-form orthogonal Procrustes update: W' = U V^dagger from the SVD of
// the environment E (legs ("in", n), ("out", m)); maximizes Re Tr(W^dagger E).
DenseTensor procrustes_update(const DenseTensor& env);

// Closed-form sphere update T' = E / ||E||.
DenseTensor sphere_update(const DenseTensor& env);

// Tangent-space projection of a Euclidean gradient, blockwise:
// Stiefel: G - W herm(W^dagger G); sphere: G - Re<T, G> T.
TangentVector tangent_project(const ManifoldPoint& point, const TangentVector& euclid);

ManifoldPoint retract(const ManifoldPoint& point, const TangentVector& tangent, double step);

// Projection-based vector transport.
TangentVector vector_transport(const ManifoldPoint& from, const ManifoldPoint& to,
                               const TangentVector& tangent);

double tangent_inner(const TangentVector& a, const TangentVector& b);
double tangent_norm(const TangentVector& a);

// Riemannian conjugate gradients (Polak-Ribiere+ with restart on non-descent,
// Armijo backtracking line search).
std::pair<ManifoldPoint, OptimizerReport> riemannian_cg(const CostFn& cost, const GradFn& grad,
                                                        const ManifoldPoint& init,
                                                        const OptimizerOptions& opts);

struct TrustRegionOptions {
  int max_iters = 200;
  double gtol = 1e-9;
  double ftol = 0.0;
  double initial_radius = 0.0;  // 0: 0.1 * sqrt(parameter count)
  int tcg_max_iters = 50;
};

std::pair<ManifoldPoint, OptimizerReport> trust_region(const CostFn& cost, const GradFn& grad,
                                                       const HessVecFn& hessvec,
                                                       const ManifoldPoint& init,
                                                       const TrustRegionOptions& opts);

}  // namespace holonet

#endif  // HOLONET_MANIFOLD_HPP
