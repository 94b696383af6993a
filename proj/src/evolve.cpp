#include "holonet/evolve.hpp"

#include <algorithm>
#include <cmath>

#include "holonet/two_column.hpp"

namespace holonet {

std::pair<HoloNet, double> apply_gate_local(const HoloNet& n, const DenseTensor& gate, int i,
                                            int sweeps, double ftol) {
  require(i >= 1 && i + 1 <= n.L(), "index-out-of-range", "gate bond out of range");
  require(n.surface() == i || n.surface() == i + 1, "surface-misplaced",
          "surface must sit on one of the gate sites");
  require(is_isometry(gate, {"in0", "in1"}, 1e-10), "gate-not-unitary", "gate is not unitary");

  HoloNet cur = move_center_vertical(n, 1);
  // Restore structural bond capacity on the gate columns so the variational
  // family has the full chi headroom (exact, state-preserving padding).
  cur = pad_column_bonds(pad_column_bonds(cur, i), i + 1);
  auto rungs = make_ref_rungs(column_tensors(cur, i), column_tensors(cur, i + 1), &gate);
  TwoColumnCandidate cand = candidate_from_columns(cur, i);
  AlternatingReport rep = alternating_two_column(cand, rungs, sweeps, ftol);
  write_candidate(cur, i, cand);
  return {cur, rep.cost};
}

std::pair<HoloNet, StepLedger> tebd_step(const HoloNet& n, const GateSequence& gates,
                                         const TebdOptions& opts) {
  HoloNet cur = n;
  StepLedger ledger;
  for (const auto& g : gates.gates) {
    while (cur.surface() < g.bond) {
      auto [next, rep] = shift_surface(cur, ShiftDirection::right, opts.shift);
      cur = std::move(next);
      ledger.shift_fidelities.push_back(rep.fidelity_estimate);
      for (double e : rep.row_truncation_errors) ledger.shift_truncation_errors.push_back(e);
      ++ledger.shifts;
    }
    while (cur.surface() > g.bond) {
      auto [next, rep] = shift_surface(cur, ShiftDirection::left, opts.shift);
      cur = std::move(next);
      ledger.shift_fidelities.push_back(rep.fidelity_estimate);
      for (double e : rep.row_truncation_errors) ledger.shift_truncation_errors.push_back(e);
      ++ledger.shifts;
    }
    auto [after, residual] = apply_gate_local(cur, g.op, g.bond, opts.gate_sweeps, opts.gate_ftol);
    cur = std::move(after);
    ledger.gate_residuals.push_back(residual);
  }
  return {cur, ledger};
}

namespace {

GateSequence step_gates(const ModelSpec& spec, double dt, int step_index) {
  GateSequence seq =
      spec.kind == ModelKind::tfim ? tfim_gates(spec, dt) : kic_step_gates(spec);
  // Odd steps sweep left to right, even steps right to left.
  if (step_index % 2 == 0) seq = seq.reversed();
  return seq;
}

void record_holo(Trajectory& tr, const HoloNet& n, const ModelSpec& spec, double t,
                 const TebdOptions& opts, const StateVector* oracle_state) {
  StateVector psi = to_statevector(n);
  tr.times.push_back(t);
  tr.observables["sx"].push_back(mean_sigma_x(psi));
  tr.observables["s2"].push_back(renyi2_dense(psi, spec.L / 2));
  tr.observables["norm"].push_back(n.norm());
  if (opts.oracle && oracle_state) {
    tr.observables["sx_oracle"].push_back(mean_sigma_x(*oracle_state));
    tr.observables["s2_oracle"].push_back(renyi2_dense(*oracle_state, spec.L / 2));
    tr.fidelity_vs_oracle.push_back(fidelity(psi, *oracle_state));
  }
}

}  // namespace

namespace {

// Exact one-step propagator, diagonalized once per run.
struct ExactStepper {
  ModelSpec spec;
  double dt = 0;
  DenseTensor u;  // legs (r, c); TFIM only
  bool dense = false;

  static ExactStepper make(const ModelSpec& spec, double dt) {
    ExactStepper st;
    st.spec = spec;
    st.dt = dt;
    if (spec.kind == ModelKind::tfim) {
      st.u = expm_hermitian_i(dense_hamiltonian(spec), {"r"}, {"c"}, dt);
      st.dense = true;
    } else {
      require(std::abs(dt - 1.0) < 1e-12, "non-integer-kic-time", "KIC steps have unit time");
    }
    return st;
  }

  StateVector step(const StateVector& psi) const {
    if (dense) {
      DenseTensor v({{"c", psi.size()}}, psi.amplitudes);
      DenseTensor w = contract(u, v, {{"c", "c"}});
      return StateVector::from_amplitudes(w.data(), psi.L, psi.d);
    }
    return apply_gates_dense(psi, kic_step_gates(spec));
  }
};

}  // namespace

Trajectory tebd_run(const HoloNet& n0, const ModelSpec& spec, double dt, int n_steps,
                    const TebdOptions& opts) {
  spec.check();
  require(spec.L == n0.L(), "dimension-mismatch", "model size differs from the network");
  Trajectory tr;
  HoloNet cur = n0;
  StateVector oracle = to_statevector(n0);
  ExactStepper stepper;
  if (opts.oracle && n_steps > 0) stepper = ExactStepper::make(spec, dt);
  record_holo(tr, cur, spec, 0.0, opts, opts.oracle ? &oracle : nullptr);

  for (int step = 1; step <= n_steps; ++step) {
    GateSequence gates = step_gates(spec, dt, step);
    auto [next, ledger] = tebd_step(cur, gates, opts);
    cur = std::move(next);
    for (double f : ledger.shift_fidelities) tr.shift_fidelities.push_back(f);
    for (double r : ledger.gate_residuals) tr.gate_residuals.push_back(r);
    for (double e : ledger.shift_truncation_errors) tr.truncation_errors.push_back(e);
    if (opts.oracle) oracle = stepper.step(oracle);
    record_holo(tr, cur, spec, step * dt, opts, opts.oracle ? &oracle : nullptr);
  }
  return tr;
}

double mps_sigma_x_mean(const MPS& m) {
  require(m.phys_dim == 2, "invalid-dims", "sigma_x is a qubit observable");
  double acc = 0;
  MPS cur = m;
  for (int i = 0; i < m.length(); ++i) {
    cur = canonicalize(cur, i);
    const DenseTensor& a = cur.tensors[i];
    DenseTensor x = pauli_x().renamed({{"r", "po"}, {"c", "pi"}});
    DenseTensor xa = contract(x, a, {{"pi", "p"}}).renamed({{"po", "p"}});
    acc += overlap(a, xa).real();
  }
  return acc / m.length();
}

Trajectory tebd_run_mps(const MPS& m0, const ModelSpec& spec, double dt, int n_steps,
                        std::int64_t chi, bool oracle) {
  spec.check();
  require(spec.L == m0.length(), "dimension-mismatch", "model size differs from the MPS");
  TruncationSpec trunc{chi, 0.0, true};
  Trajectory tr;
  MPS cur = canonicalize(m0, 0);
  StateVector exact = mps_to_statevector(cur);
  ExactStepper stepper;
  if (oracle && n_steps > 0) stepper = ExactStepper::make(spec, dt);

  auto record = [&](double t) {
    tr.times.push_back(t);
    tr.observables["sx"].push_back(mps_sigma_x_mean(cur));
    tr.observables["s2"].push_back(renyi2_mps(cur, spec.L / 2));
    tr.observables["norm"].push_back(cur.norm());
    if (oracle) {
      tr.observables["sx_oracle"].push_back(mean_sigma_x(exact));
      tr.observables["s2_oracle"].push_back(renyi2_dense(exact, spec.L / 2));
      tr.fidelity_vs_oracle.push_back(fidelity(mps_to_statevector(cur), exact));
    }
    (void)t;
  };
  record(0.0);

  for (int step = 1; step <= n_steps; ++step) {
    GateSequence gates = step_gates(spec, dt, step);
    const bool forward = step % 2 == 1;
    for (const auto& g : gates.gates) {
      const int bond0 = g.bond - 1;  // 0-based
      cur = canonicalize(cur, forward ? bond0 : bond0 + 1);
      auto [next, err] = apply_two_site_gate_mps(cur, g.op, bond0, trunc, forward);
      cur = std::move(next);
      tr.truncation_errors.push_back(err);
    }
    if (oracle) exact = stepper.step(exact);
    record(step * dt);
  }
  return tr;
}

}  // namespace holonet
