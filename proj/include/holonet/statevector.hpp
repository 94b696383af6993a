#ifndef HOLONET_STATEVECTOR_HPP
#define HOLONET_STATEVECTOR_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "holonet/circuit.hpp"
#include "holonet/gates.hpp"
#include "holonet/rng.hpp"
#include "holonet/tensor.hpp"

namespace holonet {

// Exact desk-scale reference state. Amplitudes are row-major over sites
// (site 1 most significant).
struct StateVector {
  std::vector<cplx> amplitudes;
  int L = 0;
  std::int64_t d = 2;

  static constexpr std::int64_t kSizeCap = std::int64_t(1) << 20;

  static StateVector zeros_state(int L, std::int64_t d = 2);       // |0...0>
  static StateVector from_amplitudes(std::vector<cplx> amps, int L, std::int64_t d = 2);
  static StateVector haar_random(int L, Rng& rng, std::int64_t d = 2);

  std::int64_t size() const { return static_cast<std::int64_t>(amplitudes.size()); }
  double norm() const;
  void normalize();
  // As a tensor with legs p1..pL.
  DenseTensor as_tensor() const;
  static StateVector from_tensor(const DenseTensor& t, int L, std::int64_t d);
};

cplx inner(const StateVector& a, const StateVector& b);  // <a|b>
double fidelity(const StateVector& a, const StateVector& b);

// Sequential exact application of a two-site gate sequence.
StateVector apply_gates_dense(const StateVector& psi, const GateSequence& seq);
StateVector apply_two_site_dense(const StateVector& psi, const DenseTensor& gate, int bond);
StateVector apply_one_site_dense(const StateVector& psi, const DenseTensor& u, int site);

// Exact evolution: TFIM via dense Hermitian exponentiation, KIC via
// integer-step Floquet composition.
StateVector evolve_exact(const StateVector& psi, const ModelSpec& spec, double t);

// Renyi entropies across the cut between sites (1..cut) and the rest.
double renyi2_dense(const StateVector& psi, int cut);
double renyi_n_dense(const StateVector& psi, int cut, double n);
std::vector<double> schmidt_values_dense(const StateVector& psi, int cut);

// Typical half-chain Renyi-2 entropy of Haar-random states.
double page_value(int L);

// Mean single-site <sigma_x> over the chain.
double mean_sigma_x(const StateVector& psi);
double energy_expectation(const StateVector& psi, const ModelSpec& spec);

// Execute a circuit on its declared ancilla/reference inputs.
StateVector run_circuit(const CircuitDesc& circ);

// Random matchgate circuit in right-standard triangular layout, applied to
// |0...0>. The gate list covers the lower-triangle positions; staircase-edge
// slots are identity.
std::pair<StateVector, CircuitDesc> random_matchgate_state(int L, Rng& rng);
bool is_matchgate(const DenseTensor& gate, double tol = 1e-10);
DenseTensor random_matchgate(Rng& rng);

// Random nearest-neighbor Clifford circuit of depth 7L over H, S, CNOT.
StateVector random_clifford_state(int L, Rng& rng);

}  // namespace holonet

#endif  // HOLONET_STATEVECTOR_HPP
