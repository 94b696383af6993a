#ifndef HOLONET_HOLO_NET_HPP
#define HOLONET_HOLO_NET_HPP

#include <optional>
#include <string>
#include <vector>

#include "holonet/circuit.hpp"
#include "holonet/mps.hpp"
#include "holonet/statevector.hpp"
#include "holonet/tensor.hpp"

namespace holonet {

// Geometry of a holographic isoTNS. Columns are 1-based physical sites; rows
// are 1-based with the physical row at the bottom (row 1). The canonical
// layout gives a wing column at distance k from the surface the height
// W - k + 1 (W = wing width) and the surface column the max adjacent height.
struct NetLayout {
  int L = 2;
  int surface_col = 1;
  std::int64_t d = 2;
  std::int64_t chi = 2;
  std::vector<int> column_heights;  // size L, index col-1
  bool canonical = true;

  int height(int col) const { return column_heights[col - 1]; }
  void check() const;
};

NetLayout build_layout(int L, int surface_col, std::int64_t chi, std::int64_t d = 2);

// Tensor legs: every tensor carries l, r, b, a (dim 1 toward absent
// neighbors); row-1 tensors carry the physical leg p.
//
// Isometry orientation (contract with the conjugate over IN -> identity on
// OUT):
//   right wing:            IN = {r, b, p},    OUT = {l, a}
//   left wing:             IN = {l, b, p},    OUT = {r, a}
//   surface, row < center: IN = {l, r, b, p}, OUT = {a}
//   surface, row > center: IN = {l, r, a},    OUT = {b}
//   center: unit norm, no isometry.
// Horizontal arrows thus point toward the surface and surface arrows toward
// the center; circuit time runs against the arrows.
struct HoloNet {
  NetLayout layout;
  std::vector<std::vector<DenseTensor>> cols;  // cols[c-1][h-1]
  int center_row = 1;

  int L() const { return layout.L; }
  int surface() const { return layout.surface_col; }
  int height(int col) const { return static_cast<int>(cols[col - 1].size()); }
  const DenseTensor& at(int col, int row) const { return cols[col - 1][row - 1]; }
  DenseTensor& at(int col, int row) { return cols[col - 1][row - 1]; }
  bool has(int col, int row) const {
    return col >= 1 && col <= L() && row >= 1 && row <= height(col);
  }

  double norm() const;  // norm of the center tensor
  void normalize_center();
  // IN / OUT leg groups of the tensor at (col, row) under the orientation
  // rules above (legs of dim 1 included).
  std::vector<std::string> in_legs(int col, int row) const;
  std::vector<std::string> out_legs(int col, int row) const;
};

struct ValidationIssue {
  int col = 0, row = 0;
  std::string kind;
  double residual = 0;
};

// Empty report == valid network at tolerance tol.
std::vector<ValidationIssue> validate(const HoloNet& n, double tol);
void require_valid(const HoloNet& n, double tol = 1e-9);

HoloNet random_network(const NetLayout& layout, Rng& rng, int center_row = 1);

StateVector to_statevector(const HoloNet& n);

// <psi| O_{i,i+1} |psi> / <psi|psi> using only the two columns touching the
// operator; requires the surface at i or i+1. Gate legs (out0,out1,in0,in1).
cplx expectation_two_site(const HoloNet& n, const DenseTensor& op, int i);

// Half-chain second Renyi entropy from the four-copy contraction of the
// surface column; requires the surface at floor(L/2) or floor(L/2)+1.
double renyi2_midpoint(const HoloNet& n);

// Exact vertical gauge move of the orthogonality center along the surface.
HoloNet move_center_vertical(const HoloNet& n, int new_row);

// Grow the vertical bonds of a column back to their structural capacity
// (chi-capped on the surface, d elsewhere) without changing the state:
// isometries gain orthonormal completions, receiving legs zero padding.
HoloNet pad_column_bonds(const HoloNet& n, int col);

// Mirror image (column c -> L+1-c, legs l and r swapped).
HoloNet mirrored(const HoloNet& n);

// MPS encoded vertically on the surface at column 1; bulk tensors are
// routing identities.
HoloNet embed_mps_boundary(const MPS& m, std::int64_t chi);

// MPS folded at an interior surface column; overlapping bond pairs are merged
// (dimension up to chi_mps^2).
HoloNet embed_mps_folded(const MPS& m, int surface_col, std::int64_t chi);

// Product of two-qubit states on permuted site pairs (surface at column 1).
// sigma maps logical positions 2..L to physical columns; logical pairs are
// (1,2),(3,4),.... pair_states[k] has legs (q0, q1), q0 on the lower logical
// position. Bulk gates are SWAP/identity routers realizing sigma.
HoloNet permutation_network(int L, const std::vector<int>& sigma,
                            const std::vector<DenseTensor>& pair_states, std::int64_t chi);

// The rainbow permutation with one shared pair state: site i pairs with
// L-i+1; equals permutation_network with the symmetric pairing.
HoloNet rainbow_network(int L, const DenseTensor& pair_state, std::int64_t chi);
std::vector<int> rainbow_permutation(int L);

// Right-standard triangular matchgate circuit as a chi = 2 network.
HoloNet embed_matchgate_circuit(const CircuitDesc& circ);

// Quantum-circuit export: isometries padded to unitaries on ancilla wires;
// executing against run_circuit reproduces to_statevector.
CircuitDesc to_circuit(const HoloNet& n);

}  // namespace holonet

#endif  // HOLONET_HOLO_NET_HPP
