#ifndef HOLONET_GATES_HPP
#define HOLONET_GATES_HPP

#include <string>
#include <vector>

#include "holonet/tensor.hpp"

namespace holonet {

// Pauli matrices with legs (r, c).
DenseTensor pauli_x();
DenseTensor pauli_y();
DenseTensor pauli_z();

// Two-site gate tensors carry legs (out0, out1, in0, in1), all of dim d.
// psi'_{out0 out1} = sum_{in} U_{(out0 out1),(in0 in1)} psi_{in0 in1}.
DenseTensor two_site_gate_from_matrix(const std::vector<cplx>& matrix, std::int64_t d);
DenseTensor identity_two_site_gate(std::int64_t d);
DenseTensor swap_gate(std::int64_t d);
// kron of two single-site operators (legs r,c each) into a two-site gate.
DenseTensor kron_gate(const DenseTensor& a, const DenseTensor& b);

struct Gate {
  DenseTensor op;   // legs out0, out1, in0, in1
  int bond = 1;     // acts on sites (bond, bond+1), 1-based
  int sweep_tag = 0;
};

struct GateSequence {
  int L = 0;
  std::int64_t d = 2;
  std::vector<Gate> gates;

  // Checks unitarity (1e-10) and bond range on insertion.
  void push(DenseTensor op, int bond, int sweep_tag = 0);
  GateSequence reversed() const;
};

enum class ModelKind { tfim, kic };

struct ModelSpec {
  ModelKind kind = ModelKind::tfim;
  double J = 1.0;
  double g = 1.0;
  double h = 0.0;
  int L = 2;
  // boundary: open chain throughout.
  void check() const;
};

// Dense Hamiltonian of the model's static part with legs (r, c) of dim d^L.
// For the KIC this is the Ising part; the kick part is built separately.
DenseTensor dense_hamiltonian(const ModelSpec& spec);

// One first-order Trotter step for the TFIM: per-bond gates exp(-i dt h_bond),
// interior single-site fields split evenly between the two adjacent bonds,
// boundary sites fully absorbed into their unique bond. Ordered left-to-right.
GateSequence tfim_gates(const ModelSpec& spec, double dt);

// One exact Floquet step of the kicked Ising chain: the commuting ZZ layer as
// two-site gates followed by the single-site kick layer embedded into
// two-site gates (kick of site j on bond j; the last site rides bond L-1).
GateSequence kic_step_gates(const ModelSpec& spec);

}  // namespace holonet

#endif  // HOLONET_GATES_HPP
