#ifndef HOLONET_FIT_HPP
#define HOLONET_FIT_HPP

#include <vector>

#include "holonet/holo_net.hpp"
#include "holonet/manifold.hpp"
#include "holonet/statevector.hpp"

namespace holonet {

struct BlockId {
  int col = 0, row = 0;
};

// <reference | Psi(n)> via full contraction.
cplx network_overlap(const StateVector& reference, const HoloNet& n);

// Environment (cofactor) of one tensor in the overlap with a dense reference:
// Re<ref|Psi> = Re Tr(W^dagger E) as a function of that block. The network is
// multilinear in its tensors, so E is exact.
DenseTensor environment_gradient(const HoloNet& n, BlockId block, const StateVector& reference);

// Mapping between a network and a product-manifold point: each isometric
// tensor is a Stiefel block over its (IN x OUT) bipartition, the center a
// sphere point. Block order: columns left to right, rows bottom up.
struct NetworkParametrization {
  static NetworkParametrization from(const HoloNet& n);
  ManifoldPoint to_point(const HoloNet& n) const;
  HoloNet to_network(const ManifoldPoint& p) const;
  const std::vector<BlockId>& blocks() const { return ids_; }

 private:
  HoloNet template_;
  std::vector<BlockId> ids_;
  friend struct FitProblem;
};

struct AlternatingNetReport {
  double cost = 0;  // 2 - 2 Re<ref|Psi>
  int sweeps = 0;
  bool converged = false;
};

// Alternating closed-form updates (Procrustes / sphere) over all tensors of n
// against a dense reference; cost is nonincreasing per update.
AlternatingNetReport alternating_sweep_network(HoloNet& n, const StateVector& reference,
                                               int max_sweeps, double ftol = 1e-13);

struct FitOptions {
  int alternating_sweeps = 40;
  int cg_iters_per_chunk = 50;
  int cg_max_chunks = 40;
  double cg_gtol = 1e-10;
  double stall_ftol = 1e-12;  // abandon a restart when a chunk improves less
};

// Best-of-restarts variational fit of a holographic isoTNS to a normalized
// reference vector; minimizes ||Psi - ref||^2 = 2 - 2 Re<ref|Psi>.
std::pair<HoloNet, OptimizerReport> fit_network_to_state(const StateVector& reference,
                                                         const NetLayout& layout, int restarts,
                                                         double tol, Rng& rng,
                                                         const FitOptions& opts = {});

// As above but with explicit extra initial guesses tried before the random
// restarts (used by time-evolution fits for warm starts).
std::pair<HoloNet, OptimizerReport> fit_network_to_state_warm(
    const StateVector& reference, const NetLayout& layout, int restarts, double tol, Rng& rng,
    const std::vector<HoloNet>& warm_starts, const FitOptions& opts = {});

}  // namespace holonet

#endif  // HOLONET_FIT_HPP
