#ifndef HOLONET_EVOLVE_HPP
#define HOLONET_EVOLVE_HPP

#include <map>
#include <string>
#include <vector>

#include "holonet/gates.hpp"
#include "holonet/holo_net.hpp"
#include "holonet/moses.hpp"
#include "holonet/mps.hpp"
#include "holonet/statevector.hpp"

namespace holonet {

struct Trajectory {
  std::vector<double> times;
  // "sx", "s2", "norm" and, with the oracle enabled, "sx_oracle", "s2_oracle".
  std::map<std::string, std::vector<double>> observables;
  std::vector<double> fidelity_vs_oracle;  // empty without the oracle
  // error ledger
  std::vector<double> shift_fidelities;
  std::vector<double> gate_residuals;
  std::vector<double> truncation_errors;
};

// Local variational gate application (alternating sweeps over the two columns
// touching the gate, pre-gate tensors as the initial guess). Requires the
// surface at i or i+1; the center is moved to the physical row internally.
std::pair<HoloNet, double> apply_gate_local(const HoloNet& n, const DenseTensor& gate, int i,
                                            int sweeps = 200, double ftol = 1e-12);

struct StepLedger {
  std::vector<double> shift_fidelities;
  std::vector<double> gate_residuals;
  std::vector<double> shift_truncation_errors;
  int shifts = 0;
};

struct TebdOptions {
  ShiftOptions shift;
  int gate_sweeps = 200;
  double gate_ftol = 1e-12;
  bool oracle = false;  // record exact-evolution observables and fidelity
};

// One sweep of gates. The surface is moved to the left gate site before each
// application (L-2 shifts per step in an alternating-sweep schedule).
std::pair<HoloNet, StepLedger> tebd_step(const HoloNet& n, const GateSequence& gates,
                                         const TebdOptions& opts = {});

// Full first-order-Trotter evolution of a holographic isoTNS. Odd steps sweep
// left to right, even steps right to left. Desk-scale observables (mean
// sigma_x, half-chain Renyi-2, norm) are evaluated from the exact statevector
// of the network; the scalable primitives live in holo_net.
Trajectory tebd_run(const HoloNet& n0, const ModelSpec& spec, double dt, int n_steps,
                    const TebdOptions& opts = {});

// MPS-TEBD baseline with the same gate sequences and observable schema.
Trajectory tebd_run_mps(const MPS& m0, const ModelSpec& spec, double dt, int n_steps,
                        std::int64_t chi, bool oracle = false);

double mps_sigma_x_mean(const MPS& m);

}  // namespace holonet

#endif  // HOLONET_EVOLVE_HPP
