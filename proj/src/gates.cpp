#include "holonet/gates.hpp"

#include <cmath>

namespace holonet {

DenseTensor pauli_x() {
  DenseTensor t({{"r", 2}, {"c", 2}});
  t.at({0, 1}) = 1;
  t.at({1, 0}) = 1;
  return t;
}

DenseTensor pauli_y() {
  DenseTensor t({{"r", 2}, {"c", 2}});
  t.at({0, 1}) = cplx(0, -1);
  t.at({1, 0}) = cplx(0, 1);
  return t;
}

DenseTensor pauli_z() {
  DenseTensor t({{"r", 2}, {"c", 2}});
  t.at({0, 0}) = 1;
  t.at({1, 1}) = -1;
  return t;
}

DenseTensor two_site_gate_from_matrix(const std::vector<cplx>& matrix, std::int64_t d) {
  const std::int64_t dd = d * d;
  require(static_cast<std::int64_t>(matrix.size()) == dd * dd, "dimension-mismatch",
          "gate matrix must be d^2 x d^2");
  DenseTensor m({{"r", dd}, {"c", dd}}, matrix);
  return split_leg(split_leg(m, "r", {{"out0", d}, {"out1", d}}), "c", {{"in0", d}, {"in1", d}});
}

DenseTensor identity_two_site_gate(std::int64_t d) {
  DenseTensor g({{"out0", d}, {"out1", d}, {"in0", d}, {"in1", d}});
  for (std::int64_t i = 0; i < d; ++i)
    for (std::int64_t j = 0; j < d; ++j) g.at({i, j, i, j}) = 1;
  return g;
}

DenseTensor swap_gate(std::int64_t d) {
  DenseTensor g({{"out0", d}, {"out1", d}, {"in0", d}, {"in1", d}});
  for (std::int64_t i = 0; i < d; ++i)
    for (std::int64_t j = 0; j < d; ++j) g.at({j, i, i, j}) = 1;
  return g;
}

DenseTensor kron_gate(const DenseTensor& a, const DenseTensor& b) {
  DenseTensor g = outer(a.renamed({{"r", "out0"}, {"c", "in0"}}),
                        b.renamed({{"r", "out1"}, {"c", "in1"}}));
  return g.transposed({"out0", "out1", "in0", "in1"});
}

void GateSequence::push(DenseTensor op, int bond, int sweep_tag) {
  require(bond >= 1 && (L == 0 || bond + 1 <= L), "index-out-of-range", "gate bond out of range");
  require(is_isometry(op, {"in0", "in1"}, 1e-10), "gate-not-unitary", "two-site gate not unitary");
  gates.push_back({std::move(op), bond, sweep_tag});
}

GateSequence GateSequence::reversed() const {
  GateSequence r = *this;
  std::reverse(r.gates.begin(), r.gates.end());
  return r;
}

void ModelSpec::check() const { require(L >= 2, "invalid-dims", "model needs L >= 2"); }

DenseTensor dense_hamiltonian(const ModelSpec& spec) {
  spec.check();
  const int L = spec.L;
  const std::int64_t n = std::int64_t(1) << L;
  DenseTensor h({{"r", n}, {"c", n}});

  auto zval = [&](std::int64_t state, int site) {
    return ((state >> (L - site)) & 1) ? -1.0 : 1.0;
  };

  if (spec.kind == ModelKind::tfim) {
    // H = -J sum sigma^z_i sigma^z_{i+1} - g sum sigma^x_i (open chain)
    for (std::int64_t s = 0; s < n; ++s) {
      double diag = 0;
      for (int i = 1; i < L; ++i) diag -= spec.J * zval(s, i) * zval(s, i + 1);
      h.at({s, s}) += diag;
      for (int i = 1; i <= L; ++i) h.at({s ^ (std::int64_t(1) << (L - i)), s}) += -spec.g;
    }
    return h;
  }
  // KIC Ising part: H_I = J sum sigma^z_i sigma^z_{i+1} (open chain)
  for (std::int64_t s = 0; s < n; ++s) {
    double diag = 0;
    for (int i = 1; i < L; ++i) diag += spec.J * zval(s, i) * zval(s, i + 1);
    h.at({s, s}) = diag;
  }
  return h;
}

GateSequence tfim_gates(const ModelSpec& spec, double dt) {
  spec.check();
  require(spec.kind == ModelKind::tfim, "wrong-kind", "tfim_gates needs a TFIM spec");
  const int L = spec.L;

  DenseTensor zz = kron_gate(pauli_z(), pauli_z());
  DenseTensor xl = kron_gate(pauli_x(), DenseTensor::identity("r", "c", 2));
  DenseTensor xr = kron_gate(DenseTensor::identity("r", "c", 2), pauli_x());

  GateSequence seq;
  seq.L = L;
  seq.d = 2;
  for (int bond = 1; bond < L; ++bond) {
    const double wl = (bond == 1) ? 1.0 : 0.5;
    const double wr = (bond == L - 1) ? 1.0 : 0.5;
    DenseTensor hb({{"out0", 2}, {"out1", 2}, {"in0", 2}, {"in1", 2}});
    for (std::int64_t i = 0; i < hb.size(); ++i)
      hb.data()[i] = -spec.J * zz.data()[i] - spec.g * (wl * xl.data()[i] + wr * xr.data()[i]);
    DenseTensor u = expm_hermitian_i(hb, {"out0", "out1"}, {"in0", "in1"}, dt);
    seq.push(u, bond, bond);
  }
  return seq;
}

GateSequence kic_step_gates(const ModelSpec& spec) {
  spec.check();
  require(spec.kind == ModelKind::kic, "wrong-kind", "kic_step_gates needs a KIC spec");
  const int L = spec.L;

  GateSequence seq;
  seq.L = L;
  seq.d = 2;

  // Ising layer: commuting bond terms, applied left to right.
  DenseTensor zz = kron_gate(pauli_z(), pauli_z()).scaled(spec.J);
  DenseTensor uzz = expm_hermitian_i(zz, {"out0", "out1"}, {"in0", "in1"}, 1.0);
  for (int bond = 1; bond < L; ++bond) seq.push(uzz, bond, 0);

  // Kick layer: single-site exp(-i (g X + h Z)) embedded into two-site gates.
  DenseTensor kick({{"r", 2}, {"c", 2}});
  for (std::int64_t i = 0; i < 4; ++i)
    kick.data()[i] = spec.g * pauli_x().data()[i] + spec.h * pauli_z().data()[i];
  DenseTensor uk = expm_hermitian_i(kick, {"r"}, {"c"}, 1.0);
  DenseTensor id2 = DenseTensor::identity("r", "c", 2);
  for (int site = 1; site <= L; ++site) {
    if (site < L)
      seq.push(kron_gate(uk, id2), site, 1);
    else
      seq.push(kron_gate(id2, uk), L - 1, 1);
  }
  return seq;
}

}  // namespace holonet
