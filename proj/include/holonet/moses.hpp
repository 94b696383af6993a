#ifndef HOLONET_MOSES_HPP
#define HOLONET_MOSES_HPP

#include <vector>

#include "holonet/holo_net.hpp"
#include "holonet/tensor.hpp"

namespace holonet {

// Renyi-1/2 entropy of a bipartition: 2 log sum_i sqrt(lambda_i) over the
// normalized squared singular values.
double renyi_half(const DenseTensor& theta, const std::vector<std::string>& row_legs,
                  const std::vector<std::string>& col_legs);

struct DisentangleOptions {
  bool enabled = true;
  int random_inits = 2;  // Haar starts tried next to the identity
  int max_iters = 60;
  double gtol = 1e-9;
};

// Minimize the Renyi-1/2 entropy of theta' = U theta over unitaries U acting
// on the fused (bu, br) pair. theta carries legs (bu, br, a, r, alpha);
// the bipartition is ((bu, a) | (br, r, alpha)). Never worse than identity.
struct DisentangleResult {
  DenseTensor unitary;  // legs (bu, br, bu', br')
  DenseTensor theta;    // disentangled
  double renyi_half_value = 0;
};
DisentangleResult optimize_disentangler(const DenseTensor& theta, const DisentangleOptions& opts,
                                        Rng& rng);

struct TripartiteResult {
  DenseTensor A;  // legs (l, b, bu, br); isometry from (l, b) onto (bu, br)
  DenseTensor B;  // legs (bu, a, gamma); carries the spectrum upward
  DenseTensor C;  // legs (gamma, br, r, alpha); isometry onto gamma
  double truncation_error = 0;
  DenseTensor disentangler;  // legs (bu, br, bu', br')
  double renyi_half_final = 0;
};

// Appendix-style tripartite split of a five-leg center tensor
// T(l, b, a, r, alpha): QR over ((l, b) | (a, r, alpha)), a disentangler on
// the split bond, then an SVD truncated to spec.chi_max.
TripartiteResult tripartite_decompose(const DenseTensor& T, const TruncationSpec& spec,
                                      const DisentangleOptions& dopts, Rng& rng);

enum class ShiftDirection { left, right };

struct ShiftOptions {
  bool refine = true;
  int refine_sweeps = 200;
  double refine_ftol = 1e-12;
  DisentangleOptions disentangle;
  std::uint64_t seed = 0x6d6f736573ULL;  // disentangler restart stream
};

struct ShiftReport {
  std::vector<double> row_truncation_errors;  // unzip SVDs, then column re-truncations
  std::vector<double> renyi_half;             // per unzip row
  double fidelity_estimate = 1.0;             // |<post|pre>|^2, exact via the two-column overlap
  int refinement_sweeps = 0;
  double refined_cost = 0.0;                  // final two-column distance squared
};

// Move the orthogonality surface one column via the Moses move, then
// optionally refine the two affected columns by alternating optimization.
std::pair<HoloNet, ShiftReport> shift_surface(const HoloNet& n, ShiftDirection dir,
                                              const ShiftOptions& opts = {});

}  // namespace holonet

#endif  // HOLONET_MOSES_HPP
