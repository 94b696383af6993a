#ifndef HOLONET_CIRCUIT_HPP
#define HOLONET_CIRCUIT_HPP

#include <cstdint>
#include <vector>

#include "holonet/tensor.hpp"

namespace holonet {

// A gate on an ordered list of wires. The matrix is stored with fused legs
// (out, in) of dim d^wires.size(), row-major over the wire order.
struct CircuitGate {
  DenseTensor unitary;
  std::vector<int> wires;  // 0-based
  int layer = 0;
};

struct AncillaPrep {
  int wire = 0;
  std::int64_t basis_state = 0;
};

// Gate list in execution order. Wires not named in ancilla_prep start in |0>.
// After all gates, the circuit's state on output_wires (in order) is the
// represented L-site state.
struct CircuitDesc {
  std::int64_t d = 2;
  int n_wires = 0;
  std::vector<CircuitGate> gates;
  std::vector<AncillaPrep> ancilla_prep;
  std::vector<int> output_wires;

  void check_unitarity(double tol = 1e-10) const;
};

}  // namespace holonet

#endif  // HOLONET_CIRCUIT_HPP
