#include "holonet/mps.hpp"

#include <algorithm>
#include <cmath>

namespace holonet {

namespace {

DenseTensor site_tensor(std::int64_t l, std::int64_t d, std::int64_t r) {
  return DenseTensor({{"l", l}, {"p", d}, {"r", r}});
}

}  // namespace

std::int64_t MPS::bond_dim(int cut) const { return tensors[cut].dim("r"); }

std::int64_t MPS::max_bond() const {
  std::int64_t m = 1;
  for (const auto& t : tensors) m = std::max(m, t.dim("r"));
  return m;
}

double MPS::norm() const {
  if (center >= 0) return tensors[center].norm();
  return std::sqrt(std::abs(overlap_mps(*this, *this)));
}

void MPS::check_valid(double tol) const {
  require(!tensors.empty(), "invalid-dims", "empty MPS");
  require(tensors.front().dim("l") == 1 && tensors.back().dim("r") == 1, "dimension-mismatch",
          "boundary bonds must have dim 1");
  for (int i = 0; i < length(); ++i) {
    require(tensors[i].dim("p") == phys_dim, "dimension-mismatch", "physical dim mismatch");
    if (i + 1 < length())
      require(tensors[i].dim("r") == tensors[i + 1].dim("l"), "dimension-mismatch",
              "bond dims disagree at cut " + std::to_string(i));
  }
  if (center >= 0) {
    require(center < length(), "index-out-of-range", "center out of range");
    for (int i = 0; i < length(); ++i) {
      if (i < center)
        require(is_isometry(tensors[i], {"r"}, tol), "isometry-violation",
                "site " + std::to_string(i) + " is not a left isometry");
      if (i > center)
        require(is_isometry(tensors[i], {"l"}, tol), "isometry-violation",
                "site " + std::to_string(i) + " is not a right isometry");
    }
  }
}

MPS mps_from_statevector(const StateVector& psi, const TruncationSpec& spec,
                         double* truncation_error) {
  const std::int64_t d = psi.d;
  const int L = psi.L;
  MPS m;
  m.phys_dim = d;

  double err2 = 0;
  DenseTensor rest({{"l", 1}, {"tail", psi.size()}}, psi.amplitudes);
  std::int64_t tail = psi.size();
  for (int i = 0; i < L - 1; ++i) {
    tail /= d;
    DenseTensor cur = split_leg(rest, "tail", {{"p", d}, {"tail", tail}});
    auto res = svd_truncate(cur, {"l", "p"}, {"tail"}, spec, "s");
    err2 += res.truncation_error * res.truncation_error;
    m.tensors.push_back(res.factors[0].renamed({{"s", "r"}}));
    DenseTensor sv = contract(res.factors[1], res.factors[2], {{"s'", "s'"}});
    rest = sv.renamed({{"s", "l"}});
  }
  m.tensors.push_back(split_leg(rest, "tail", {{"p", d}, {"r", 1}}));
  m.center = L - 1;
  if (truncation_error) *truncation_error = std::sqrt(err2);
  return m;
}

StateVector mps_to_statevector(const MPS& m) {
  DenseTensor acc = m.tensors[0].renamed({{"p", "p1"}});
  for (int i = 1; i < m.length(); ++i) {
    DenseTensor next = m.tensors[i].renamed({{"p", "p" + std::to_string(i + 1)}});
    acc = contract(acc, next, {{"r", "l"}});
  }
  // Strip the trivial boundary legs.
  DenseTensor one({{"x", 1}}, {cplx(1, 0)});
  acc = contract(one, acc, {{"x", "l"}});
  acc = contract(acc, one, {{"r", "x"}});
  return StateVector::from_tensor(acc, m.length(), m.phys_dim);
}

namespace {

// Move the center one site to the right (exact QR gauge move).
void center_right(MPS& m) {
  const int c = m.center;
  auto [q, r] = qr_decompose(m.tensors[c], {"l", "p"}, {"r"}, "b");
  m.tensors[c] = q.renamed({{"b", "r"}});
  m.tensors[c + 1] = contract(r.renamed({{"b", "l"}, {"r", "mid"}}), m.tensors[c + 1], {{"mid", "l"}});
  m.center = c + 1;
}

void center_left(MPS& m) {
  const int c = m.center;
  auto [q, r] = qr_decompose(m.tensors[c], {"p", "r"}, {"l"}, "b");
  m.tensors[c] = q.renamed({{"b", "l"}});
  m.tensors[c - 1] =
      contract(m.tensors[c - 1], r.renamed({{"b", "r"}, {"l", "mid"}}), {{"r", "mid"}});
  m.center = c - 1;
}

}  // namespace

MPS canonicalize(const MPS& m, int new_center) {
  require(new_center >= 0 && new_center < m.length(), "index-out-of-range",
          "center must be in [0, L-1]");
  MPS out = m;
  if (out.center < 0) {
    // Establish right-canonical form from scratch with a left-to-right sweep.
    out.center = 0;
    for (int i = 0; i + 1 < out.length(); ++i) center_right(out);
  }
  while (out.center < new_center) center_right(out);
  while (out.center > new_center) center_left(out);
  return out;
}

std::pair<MPS, double> apply_two_site_gate_mps(const MPS& m, const DenseTensor& gate, int i,
                                               const TruncationSpec& spec, bool leave_center_right) {
  require(i >= 0 && i + 1 < m.length(), "index-out-of-range", "gate bond out of range");
  require(m.center == i || m.center == i + 1, "center-misplaced",
          "center must sit on one of the gate sites");
  require(is_isometry(gate, {"in0", "in1"}, 1e-10), "gate-not-unitary", "gate is not unitary");

  MPS out = m;
  DenseTensor theta = contract(out.tensors[i].renamed({{"p", "q0"}}),
                               out.tensors[i + 1].renamed({{"p", "q1"}}), {{"r", "l"}});
  theta = contract(gate, theta, {{"in0", "q0"}, {"in1", "q1"}});
  auto res = svd_truncate(theta, {"l", "out0"}, {"out1", "r"}, spec, "s");
  if (leave_center_right) {
    out.tensors[i] = res.factors[0].renamed({{"out0", "p"}, {"s", "r"}});
    DenseTensor sv = contract(res.factors[1], res.factors[2], {{"s'", "s'"}});
    out.tensors[i + 1] = sv.renamed({{"s", "l"}, {"out1", "p"}});
    out.center = i + 1;
  } else {
    DenseTensor us = contract(res.factors[0], res.factors[1], {{"s", "s"}});
    out.tensors[i] = us.renamed({{"out0", "p"}, {"s'", "r"}});
    out.tensors[i + 1] = res.factors[2].renamed({{"s'", "l"}, {"out1", "p"}});
    out.center = i;
  }
  return {out, res.truncation_error};
}

std::vector<double> schmidt_values_mps(const MPS& m, int cut) {
  require(cut >= 1 && cut <= m.length() - 1, "index-out-of-range", "cut in [1, L-1]");
  MPS c = canonicalize(m, cut - 1);
  auto res = svd_truncate(c.tensors[cut - 1], {"l", "p"}, {"r"}, TruncationSpec::unbounded());
  return res.singular_values;
}

double renyi2_mps(const MPS& m, int cut) {
  auto sv = schmidt_values_mps(m, cut);
  double total = 0, acc = 0;
  for (double s : sv) total += s * s;
  for (double s : sv) {
    const double lam = s * s / total;
    acc += lam * lam;
  }
  return -std::log(acc);
}

MPS ghz_mps(int L) {
  require(L >= 2, "invalid-dims", "need L >= 2");
  MPS m;
  m.phys_dim = 2;
  DenseTensor first = site_tensor(1, 2, 2);
  first.at({0, 0, 0}) = 1.0 / std::sqrt(2.0);
  first.at({0, 1, 1}) = 1.0 / std::sqrt(2.0);
  m.tensors.push_back(first);
  for (int i = 1; i < L - 1; ++i) {
    DenseTensor mid = site_tensor(2, 2, 2);
    mid.at({0, 0, 0}) = 1;
    mid.at({1, 1, 1}) = 1;
    m.tensors.push_back(mid);
  }
  DenseTensor last = site_tensor(2, 2, 1);
  last.at({0, 0, 0}) = 1;
  last.at({1, 1, 0}) = 1;
  m.tensors.push_back(last);
  m.center = 0;
  return m;
}

MPS w_mps(int L) {
  require(L >= 2, "invalid-dims", "need L >= 2");
  MPS m;
  m.phys_dim = 2;
  // Bond states: 0 = no excitation placed yet, 1 = excitation placed.
  DenseTensor first = site_tensor(1, 2, 2);
  first.at({0, 0, 0}) = 1.0 / std::sqrt(static_cast<double>(L));
  first.at({0, 1, 1}) = 1.0 / std::sqrt(static_cast<double>(L));
  m.tensors.push_back(first);
  for (int i = 1; i < L - 1; ++i) {
    DenseTensor mid = site_tensor(2, 2, 2);
    mid.at({0, 0, 0}) = 1;
    mid.at({1, 0, 1}) = 1;
    mid.at({0, 1, 1}) = 1;
    m.tensors.push_back(mid);
  }
  DenseTensor last = site_tensor(2, 2, 1);
  last.at({1, 0, 0}) = 1;
  last.at({0, 1, 0}) = 1;
  m.tensors.push_back(last);
  m.center = -1;
  return canonicalize(m, 0);
}

MPS random_mps(int L, std::int64_t chi, Rng& rng, std::int64_t d) {
  require(L >= 2, "invalid-dims", "need L >= 2");
  MPS m;
  m.phys_dim = d;
  // Haar right-isometries site by site, bond dims capped by chi and by the
  // exact ranks from either end.
  std::vector<std::int64_t> bonds(L + 1, 1);
  for (int i = 1; i < L; ++i) {
    const double from_left = std::pow(static_cast<double>(d), i);
    const double from_right = std::pow(static_cast<double>(d), L - i);
    double cap = static_cast<double>(chi);
    cap = std::min({cap, from_left, from_right});
    bonds[i] = static_cast<std::int64_t>(cap);
  }
  for (int i = 0; i < L; ++i) {
    DenseTensor w = random_isometry(d * bonds[i + 1], bonds[i], rng);
    DenseTensor t = split_leg(w.renamed({{"out", "l"}}), "in", {{"p", d}, {"r", bonds[i + 1]}});
    m.tensors.push_back(t.transposed({"l", "p", "r"}));
  }
  m.center = 0;
  return m;
}

MPS product_mps(const std::vector<std::int64_t>& basis_states, std::int64_t d) {
  MPS m;
  m.phys_dim = d;
  for (auto b : basis_states) {
    DenseTensor t = site_tensor(1, d, 1);
    t.at({0, b, 0}) = 1;
    m.tensors.push_back(t);
  }
  m.center = 0;
  return m;
}

cplx overlap_mps(const MPS& a, const MPS& b) {
  require(a.length() == b.length(), "dimension-mismatch", "overlap_mps: length mismatch");
  DenseTensor env({{"ta", 1}, {"tb", 1}});
  env.at({0, 0}) = 1;
  for (int i = 0; i < a.length(); ++i) {
    DenseTensor ac = a.tensors[i].conjugated().renamed({{"l", "ta"}, {"r", "na"}});
    DenseTensor bc = b.tensors[i].renamed({{"l", "tb"}, {"r", "nb"}});
    env = contract(env, ac, {{"ta", "ta"}});
    env = contract(env, bc, {{"tb", "tb"}, {"p", "p"}});
    env = env.renamed({{"na", "ta"}, {"nb", "tb"}});
  }
  return env.at({0, 0});
}

std::pair<MPS, double> fit_mps_to_state(const StateVector& psi, std::int64_t chi, int sweeps) {
  MPS m = mps_from_statevector(psi, TruncationSpec::cap(chi));
  m = canonicalize(m, 0);
  const int L = m.length();
  const DenseTensor target = psi.as_tensor();

  auto env_at = [&](const MPS& cur, int site) {
    // Contract conj(psi) with every tensor but `site`; the optimal local
    // tensor in mixed-canonical gauge is the conjugate of this environment.
    DenseTensor blob = target.conjugated();
    DenseTensor one({{"x", 1}}, {cplx(1, 0)});
    for (int i = 0; i < L; ++i) {
      if (i == site) continue;
      DenseTensor t = cur.tensors[i].renamed(
          {{"l", "l" + std::to_string(i)}, {"r", "l" + std::to_string(i + 1)}});
      std::vector<std::pair<std::string, std::string>> pairs = {{"p" + std::to_string(i + 1), "p"}};
      if (blob.has_leg("l" + std::to_string(i)))
        pairs.push_back({"l" + std::to_string(i), "l" + std::to_string(i)});
      blob = contract(blob, t, pairs);
    }
    if (blob.has_leg("l0")) blob = contract(one, blob, {{"x", "l0"}});
    if (blob.has_leg("l" + std::to_string(L))) blob = contract(blob, one, {{"l" + std::to_string(L), "x"}});
    return blob;
  };

  for (int pass = 0; pass < sweeps; ++pass) {
    for (int dir = 0; dir < 2; ++dir) {
      for (int k = 0; k < L; ++k) {
        const int site = dir == 0 ? k : L - 1 - k;
        MPS cur = canonicalize(m, site);
        DenseTensor e = env_at(cur, site);
        std::vector<std::pair<std::string, std::string>> rn;
        rn.push_back({"p" + std::to_string(site + 1), "p"});
        if (e.has_leg("l" + std::to_string(site))) rn.push_back({"l" + std::to_string(site), "l"});
        if (e.has_leg("l" + std::to_string(site + 1)))
          rn.push_back({"l" + std::to_string(site + 1), "r"});
        DenseTensor env = e.renamed(rn).conjugated();
        if (!env.has_leg("l")) env = outer(env, DenseTensor({{"l", 1}}, {cplx(1, 0)}));
        if (!env.has_leg("r")) env = outer(env, DenseTensor({{"r", 1}}, {cplx(1, 0)}));
        std::vector<std::string> order;
        for (const auto& lg : cur.tensors[site].legs()) order.push_back(lg.name);
        cur.tensors[site] = env.transposed(order);
        m = cur;
      }
    }
  }
  // Normalize the center so the returned MPS is a unit state.
  MPS out = m;
  const double w = out.tensors[out.center].norm();
  if (w > 0) out.tensors[out.center] = out.tensors[out.center].scaled(1.0 / w);
  // Exact final error against the dense reference, phase-aligned.
  const cplx ov = inner(psi, mps_to_statevector(out));
  const double err = 2.0 - 2.0 * std::abs(ov);
  return {out, err};
}

}  // namespace holonet
