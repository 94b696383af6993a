#include "holonet/statevector.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace holonet {

namespace {

std::string site_leg(int i) { return "p" + std::to_string(i); }

std::int64_t ipow(std::int64_t b, int e) {
  std::int64_t r = 1;
  while (e-- > 0) r *= b;
  return r;
}

}  // namespace

StateVector StateVector::zeros_state(int L, std::int64_t d) {
  require(L >= 1, "invalid-dims", "L must be >= 1");
  const std::int64_t n = ipow(d, L);
  require(n <= kSizeCap, "cap-exceeded", "d^L exceeds the statevector cap");
  StateVector psi;
  psi.L = L;
  psi.d = d;
  psi.amplitudes.assign(n, cplx(0, 0));
  psi.amplitudes[0] = 1.0;
  return psi;
}

StateVector StateVector::from_amplitudes(std::vector<cplx> amps, int L, std::int64_t d) {
  require(static_cast<std::int64_t>(amps.size()) == ipow(d, L), "length-not-power-of-d",
          "amplitude count must be d^L");
  require(static_cast<std::int64_t>(amps.size()) <= kSizeCap, "cap-exceeded", "d^L exceeds the cap");
  StateVector psi;
  psi.L = L;
  psi.d = d;
  psi.amplitudes = std::move(amps);
  return psi;
}

StateVector StateVector::haar_random(int L, Rng& rng, std::int64_t d) {
  StateVector psi = zeros_state(L, d);
  for (auto& a : psi.amplitudes) a = rng.gaussian_complex();
  psi.normalize();
  return psi;
}

double StateVector::norm() const {
  double s = 0;
  for (const auto& a : amplitudes) s += std::norm(a);
  return std::sqrt(s);
}

void StateVector::normalize() {
  const double n = norm();
  require(n > 0, "zero-tensor", "cannot normalize the zero vector");
  for (auto& a : amplitudes) a /= n;
}

DenseTensor StateVector::as_tensor() const {
  std::vector<Leg> legs;
  for (int i = 1; i <= L; ++i) legs.push_back({site_leg(i), d});
  return DenseTensor(legs, amplitudes);
}

StateVector StateVector::from_tensor(const DenseTensor& t, int L, std::int64_t d) {
  std::vector<std::string> order;
  for (int i = 1; i <= L; ++i) order.push_back(site_leg(i));
  DenseTensor tp = t.transposed(order);
  return from_amplitudes(tp.data(), L, d);
}

cplx inner(const StateVector& a, const StateVector& b) {
  require(a.L == b.L && a.d == b.d, "dimension-mismatch", "inner: shape mismatch");
  cplx s(0, 0);
  for (std::int64_t i = 0; i < a.size(); ++i) s += std::conj(a.amplitudes[i]) * b.amplitudes[i];
  return s;
}

double fidelity(const StateVector& a, const StateVector& b) {
  const double na = a.norm(), nb = b.norm();
  return std::norm(inner(a, b)) / (na * na * nb * nb);
}

StateVector apply_two_site_dense(const StateVector& psi, const DenseTensor& gate, int bond) {
  require(bond >= 1 && bond + 1 <= psi.L, "index-out-of-range", "gate bond out of range");
  DenseTensor state = psi.as_tensor();
  DenseTensor out =
      contract(gate, state, {{"in0", site_leg(bond)}, {"in1", site_leg(bond + 1)}});
  out = out.renamed({{"out0", site_leg(bond)}, {"out1", site_leg(bond + 1)}});
  return StateVector::from_tensor(out, psi.L, psi.d);
}

StateVector apply_one_site_dense(const StateVector& psi, const DenseTensor& u, int site) {
  require(site >= 1 && site <= psi.L, "index-out-of-range", "site out of range");
  DenseTensor out = contract(u, psi.as_tensor(), {{"c", site_leg(site)}});
  out = out.renamed({{"r", site_leg(site)}});
  return StateVector::from_tensor(out, psi.L, psi.d);
}

StateVector apply_gates_dense(const StateVector& psi, const GateSequence& seq) {
  require(seq.L == 0 || seq.L == psi.L, "dimension-mismatch", "gate sequence built for another L");
  StateVector cur = psi;
  for (const auto& g : seq.gates) cur = apply_two_site_dense(cur, g.op, g.bond);
  return cur;
}

StateVector evolve_exact(const StateVector& psi, const ModelSpec& spec, double t) {
  spec.check();
  require(spec.L == psi.L, "dimension-mismatch", "model L differs from state L");
  if (spec.kind == ModelKind::tfim) {
    DenseTensor h = dense_hamiltonian(spec);
    DenseTensor u = expm_hermitian_i(h, {"r"}, {"c"}, t);
    DenseTensor v({{"c", psi.size()}}, psi.amplitudes);
    DenseTensor w = contract(u, v, {{"c", "c"}});
    return StateVector::from_amplitudes(w.data(), psi.L, psi.d);
  }
  // KIC: integer-step Floquet composition.
  const double steps_f = t;
  const int steps = static_cast<int>(std::llround(steps_f));
  require(std::abs(steps_f - steps) < 1e-12 && steps >= 0, "non-integer-kic-time",
          "KIC evolution is defined at integer times");
  StateVector cur = psi;
  GateSequence step = kic_step_gates(spec);
  for (int s = 0; s < steps; ++s) cur = apply_gates_dense(cur, step);
  return cur;
}

std::vector<double> schmidt_values_dense(const StateVector& psi, int cut) {
  require(cut >= 1 && cut <= psi.L - 1, "index-out-of-range", "cut must be in [1, L-1]");
  const std::int64_t rows = ipow(psi.d, cut);
  const std::int64_t cols = psi.size() / rows;
  DenseTensor m({{"a", rows}, {"b", cols}}, psi.amplitudes);
  auto res = svd_truncate(m, {"a"}, {"b"}, TruncationSpec::unbounded());
  return res.singular_values;
}

double renyi_n_dense(const StateVector& psi, int cut, double n) {
  auto sv = schmidt_values_dense(psi, cut);
  double total = 0;
  for (double s : sv) total += s * s;
  require(total > 0, "zero-tensor", "entropy of the zero vector");
  if (std::abs(n - 1.0) < 1e-14) {
    double s1 = 0;
    for (double s : sv) {
      double lam = s * s / total;
      if (lam > 0) s1 -= lam * std::log(lam);
    }
    return s1;
  }
  double acc = 0;
  for (double s : sv) acc += std::pow(s * s / total, n);
  return std::log(acc) / (1.0 - n);
}

double renyi2_dense(const StateVector& psi, int cut) { return renyi_n_dense(psi, cut, 2.0); }

double page_value(int L) {
  require(L >= 2 && L % 2 == 0, "invalid-dims", "page_value defined for even L");
  return (L / 2 - 1) * std::log(2.0);
}

double mean_sigma_x(const StateVector& psi) {
  require(psi.d == 2, "invalid-dims", "mean_sigma_x implemented for qubits");
  const double n2 = psi.norm() * psi.norm();
  double acc = 0;
  for (int site = 1; site <= psi.L; ++site) {
    const std::int64_t bit = ipow(2, psi.L - site);
    cplx s(0, 0);
    for (std::int64_t i = 0; i < psi.size(); ++i)
      s += std::conj(psi.amplitudes[i]) * psi.amplitudes[i ^ bit];
    acc += s.real();
  }
  return acc / (psi.L * n2);
}

double energy_expectation(const StateVector& psi, const ModelSpec& spec) {
  DenseTensor h = dense_hamiltonian(spec);
  DenseTensor v({{"c", psi.size()}}, psi.amplitudes);
  DenseTensor hv = contract(h, v, {{"c", "c"}});
  cplx e(0, 0);
  for (std::int64_t i = 0; i < psi.size(); ++i) e += std::conj(psi.amplitudes[i]) * hv.data()[i];
  return e.real() / (psi.norm() * psi.norm());
}

// --- circuits ---------------------------------------------------------------

void CircuitDesc::check_unitarity(double tol) const {
  for (const auto& g : gates)
    require(is_isometry(g.unitary, {"in"}, tol) && is_isometry(g.unitary, {"out"}, tol),
            "gate-not-unitary", "circuit gate is not unitary");
}

StateVector run_circuit(const CircuitDesc& circ) {
  require(circ.n_wires >= 1, "invalid-dims", "circuit needs wires");
  const std::int64_t total = ipow(circ.d, circ.n_wires);
  require(total <= StateVector::kSizeCap, "cap-exceeded", "circuit register too large");

  auto wire_leg = [](int w) { return "w" + std::to_string(w); };

  // Initial register: |0> everywhere except declared preps.
  std::vector<std::int64_t> init(circ.n_wires, 0);
  for (const auto& p : circ.ancilla_prep) init[p.wire] = p.basis_state;
  DenseTensor state = DenseTensor::basis_vector(wire_leg(0), circ.d, init[0]);
  for (int w = 1; w < circ.n_wires; ++w)
    state = outer(state, DenseTensor::basis_vector(wire_leg(w), circ.d, init[w]));

  for (const auto& g : circ.gates) {
    const int k = static_cast<int>(g.wires.size());
    std::vector<Leg> in_parts, out_parts;
    for (int i = 0; i < k; ++i) {
      in_parts.push_back({"gi" + std::to_string(i), circ.d});
      out_parts.push_back({"go" + std::to_string(i), circ.d});
    }
    DenseTensor gt = split_leg(split_leg(g.unitary, "in", in_parts), "out", out_parts);
    std::vector<std::pair<std::string, std::string>> pairs;
    std::vector<std::pair<std::string, std::string>> renames;
    for (int i = 0; i < k; ++i) {
      pairs.push_back({"gi" + std::to_string(i), wire_leg(g.wires[i])});
      renames.push_back({"go" + std::to_string(i), wire_leg(g.wires[i])});
    }
    state = contract(gt, state, pairs).renamed(renames);
  }

  // Project non-output wires onto |0>; they carry no weight by construction.
  std::vector<bool> is_output(circ.n_wires, false);
  for (int w : circ.output_wires) is_output[w] = true;
  const double norm_before = state.norm();
  for (int w = 0; w < circ.n_wires; ++w) {
    if (is_output[w]) continue;
    DenseTensor bra = DenseTensor::basis_vector(wire_leg(w), circ.d, 0);
    state = contract(bra, state, {{wire_leg(w), wire_leg(w)}});
  }
  require(std::abs(state.norm() - norm_before) < 1e-9 * std::max(1.0, norm_before),
          "numeric-failure", "circuit left weight on non-output wires");

  std::vector<std::pair<std::string, std::string>> to_sites;
  for (std::size_t i = 0; i < circ.output_wires.size(); ++i)
    to_sites.push_back({wire_leg(circ.output_wires[i]), site_leg(static_cast<int>(i) + 1)});
  state = state.renamed(to_sites);
  return StateVector::from_tensor(state, static_cast<int>(circ.output_wires.size()), circ.d);
}

// --- matchgates -------------------------------------------------------------

bool is_matchgate(const DenseTensor& gate, double tol) {
  // Basis (00, 01, 10, 11): even sector {00, 11}, odd sector {01, 10}.
  DenseTensor g = group_legs(gate, {{"r", {"out0", "out1"}}, {"c", {"in0", "in1"}}});
  auto a = [&](std::int64_t i, std::int64_t j) { return g.at({i, j}); };
  double off = 0;
  const std::int64_t even[2] = {0, 3}, odd[2] = {1, 2};
  for (auto i : even)
    for (auto j : odd) off = std::max({off, std::abs(a(i, j)), std::abs(a(j, i))});
  cplx detA = a(0, 0) * a(3, 3) - a(0, 3) * a(3, 0);
  cplx detB = a(1, 1) * a(2, 2) - a(1, 2) * a(2, 1);
  return off <= tol && std::abs(detA - detB) <= tol;
}

DenseTensor random_matchgate(Rng& rng) {
  DenseTensor A = random_isometry(2, 2, rng);
  DenseTensor B = random_isometry(2, 2, rng);
  auto det = [](const DenseTensor& m) {
    return m.data()[0] * m.data()[3] - m.data()[1] * m.data()[2];
  };
  cplx phase = std::sqrt(det(A) / det(B));
  DenseTensor Bf = B.scaled(phase);

  DenseTensor g({{"out0", 2}, {"out1", 2}, {"in0", 2}, {"in1", 2}});
  auto set = [&](std::int64_t r, std::int64_t c, cplx v) {
    g.at({r / 2, r % 2, c / 2, c % 2}) = v;
  };
  set(0, 0, A.data()[0]);
  set(0, 3, A.data()[1]);
  set(3, 0, A.data()[2]);
  set(3, 3, A.data()[3]);
  set(1, 1, Bf.data()[0]);
  set(1, 2, Bf.data()[1]);
  set(2, 1, Bf.data()[2]);
  set(2, 2, Bf.data()[3]);
  return g;
}

std::pair<StateVector, CircuitDesc> random_matchgate_state(int L, Rng& rng) {
  require(L >= 2, "invalid-dims", "need L >= 2");
  CircuitDesc circ;
  circ.d = 2;
  circ.n_wires = L;
  for (int w = 0; w < L; ++w) circ.output_wires.push_back(w);

  // Right-standard triangle: two-qubit matchgates at positions (h, c) with
  // c >= 2 and h + c <= L, executed by ascending anti-diagonal tau = c - h.
  // The gate at (h, c) acts on qubit positions (h+c-2, h+c-1), 0-based.
  struct Slot {
    int tau, h, c;
  };
  std::vector<Slot> slots;
  for (int c = 2; c <= L - 1; ++c)
    for (int h = 1; h + c <= L; ++h) slots.push_back({c - h, h, c});
  std::sort(slots.begin(), slots.end(), [](const Slot& a, const Slot& b) {
    if (a.tau != b.tau) return a.tau < b.tau;
    return a.h > b.h;
  });

  for (const auto& s : slots) {
    DenseTensor g = random_matchgate(rng);
    CircuitGate cg;
    cg.unitary = group_legs(g, {{"out", {"out0", "out1"}}, {"in", {"in0", "in1"}}});
    cg.wires = {s.h + s.c - 2, s.h + s.c - 1};
    cg.layer = s.tau;
    circ.gates.push_back(std::move(cg));
  }

  StateVector psi = StateVector::zeros_state(L);
  for (const auto& cg : circ.gates) {
    DenseTensor g = split_leg(split_leg(cg.unitary, "out", {{"out0", 2}, {"out1", 2}}), "in",
                              {{"in0", 2}, {"in1", 2}});
    psi = apply_two_site_dense(psi, g, cg.wires[0] + 1);
  }
  return {psi, circ};
}

StateVector random_clifford_state(int L, Rng& rng) {
  require(L >= 2, "invalid-dims", "need L >= 2");
  StateVector psi = StateVector::zeros_state(L);

  DenseTensor had({{"r", 2}, {"c", 2}});
  const double isq2 = 1.0 / std::sqrt(2.0);
  had.at({0, 0}) = isq2;
  had.at({0, 1}) = isq2;
  had.at({1, 0}) = isq2;
  had.at({1, 1}) = -isq2;
  DenseTensor phase({{"r", 2}, {"c", 2}});
  phase.at({0, 0}) = 1;
  phase.at({1, 1}) = cplx(0, 1);

  DenseTensor cnot({{"out0", 2}, {"out1", 2}, {"in0", 2}, {"in1", 2}});
  cnot.at({0, 0, 0, 0}) = 1;
  cnot.at({0, 1, 0, 1}) = 1;
  cnot.at({1, 1, 1, 0}) = 1;
  cnot.at({1, 0, 1, 1}) = 1;

  const int depth = 7 * L;
  for (int slot = 0; slot < depth; ++slot) {
    const std::uint64_t kind = rng.uniform_int(3);
    if (kind == 0) {
      psi = apply_one_site_dense(psi, had, 1 + static_cast<int>(rng.uniform_int(L)));
    } else if (kind == 1) {
      psi = apply_one_site_dense(psi, phase, 1 + static_cast<int>(rng.uniform_int(L)));
    } else {
      const int bond = 1 + static_cast<int>(rng.uniform_int(L - 1));
      if (rng.uniform_int(2) == 0) {
        psi = apply_two_site_dense(psi, cnot, bond);
      } else {
        // control on the right site
        DenseTensor flipped = cnot.renamed(
            {{"out0", "out1"}, {"out1", "out0"}, {"in0", "in1"}, {"in1", "in0"}});
        psi = apply_two_site_dense(psi, flipped, bond);
      }
    }
  }

  // Stabilizer property: all nonzero amplitudes share one modulus.
  double top = 0;
  for (const auto& a : psi.amplitudes) top = std::max(top, std::abs(a));
  for (const auto& a : psi.amplitudes) {
    const double m = std::abs(a);
    require(m < 1e-10 || std::abs(m - top) < 1e-10, "numeric-failure",
            "clifford state lost the equal-modulus property");
  }
  return psi;
}

}  // namespace holonet
