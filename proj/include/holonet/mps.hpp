#ifndef HOLONET_MPS_HPP
#define HOLONET_MPS_HPP

#include <vector>

#include "holonet/statevector.hpp"
#include "holonet/tensor.hpp"

namespace holonet {

// Matrix product state in isometric (canonical) form. Site tensors carry legs
// (l, p, r); boundary bonds have dim 1. With center = c, tensors left of c
// are left-isometries and tensors right of c are right-isometries.
struct MPS {
  std::vector<DenseTensor> tensors;
  int center = -1;  // -1: no canonical center
  std::int64_t phys_dim = 2;

  int length() const { return static_cast<int>(tensors.size()); }
  std::int64_t bond_dim(int cut) const;  // bond between sites cut-1 and cut (0-based right leg)
  std::int64_t max_bond() const;
  double norm() const;
  void check_valid(double tol = 1e-10) const;
};

MPS mps_from_statevector(const StateVector& psi, const TruncationSpec& spec,
                         double* truncation_error = nullptr);
StateVector mps_to_statevector(const MPS& m);

MPS canonicalize(const MPS& m, int new_center);

// Gate legs (out0, out1, in0, in1); requires center at i or i+1 (0-based bond
// between sites i and i+1). Center ends at i+1 when leave_center_right.
std::pair<MPS, double> apply_two_site_gate_mps(const MPS& m, const DenseTensor& gate, int i,
                                               const TruncationSpec& spec,
                                               bool leave_center_right = true);

// Schmidt values across the bond between sites cut-1 and cut (1-based cut in
// [1, L-1], matching the dense convention).
std::vector<double> schmidt_values_mps(const MPS& m, int cut);
double renyi2_mps(const MPS& m, int cut);

MPS ghz_mps(int L);
MPS w_mps(int L);
MPS random_mps(int L, std::int64_t chi, Rng& rng, std::int64_t d = 2);
MPS product_mps(const std::vector<std::int64_t>& basis_states, std::int64_t d = 2);
cplx overlap_mps(const MPS& a, const MPS& b);

// Variational compression of a dense reference into an MPS of bond cap chi:
// truncated-SVD initialization followed by alternating single-site sweeps.
// Returns the MPS and the squared distance || |m> - |psi> ||^2.
std::pair<MPS, double> fit_mps_to_state(const StateVector& psi, std::int64_t chi, int sweeps = 8);

}  // namespace holonet

#endif  // HOLONET_MPS_HPP
