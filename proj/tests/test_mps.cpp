#include "doctest.h"

#include <cmath>

#include "holonet/mps.hpp"

using namespace holonet;

TEST_CASE("mps_from_statevector: |00> and GHZ(4)") {
  StateVector z = StateVector::zeros_state(2);
  MPS m = mps_from_statevector(z, TruncationSpec::cap(8));
  CHECK(m.length() == 2);
  CHECK(m.bond_dim(0) == 1);
  CHECK(fidelity(mps_to_statevector(m), z) == doctest::Approx(1.0).epsilon(1e-12));

  StateVector ghz = StateVector::zeros_state(4);
  ghz.amplitudes[0] = ghz.amplitudes[15] = 1.0 / std::sqrt(2.0);
  double err = 0;
  MPS g = mps_from_statevector(ghz, TruncationSpec::cap(2), &err);
  CHECK(err == doctest::Approx(0.0).epsilon(1e-12));
  for (int c = 0; c < 3; ++c) CHECK(g.bond_dim(c) == 2);
  CHECK(fidelity(mps_to_statevector(g), ghz) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("mps_from_statevector: truncation error matches per-cut discarded weight") {
  Rng rng(100);
  StateVector psi = StateVector::haar_random(6, rng);

  // chi = 8 admits the full Schmidt rank at L = 6: exact reconstruction.
  double err8 = 0;
  MPS m8 = mps_from_statevector(psi, TruncationSpec::cap(8), &err8);
  CHECK(err8 == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(fidelity(mps_to_statevector(m8), psi) == doctest::Approx(1.0).epsilon(1e-10));

  double err = 0;
  MPS m = mps_from_statevector(psi, TruncationSpec::cap(4), &err);
  StateVector back = mps_to_statevector(m);
  double dist2 = 0;
  for (std::int64_t i = 0; i < psi.size(); ++i)
    dist2 += std::norm(psi.amplitudes[i] - back.amplitudes[i]);
  // First-order: squared distance ~ sum of per-cut discarded weights.
  CHECK(std::sqrt(dist2) == doctest::Approx(err).epsilon(0.05));
  CHECK(err > 1e-4);  // a Haar state at chi 4, L = 6 does truncate
}

TEST_CASE("canonicalize: gauge moves preserve the state") {
  Rng rng(200);
  MPS m = random_mps(8, 4, rng);
  m.check_valid();
  MPS same = canonicalize(m, 0);
  CHECK(std::abs(overlap_mps(same, m) - cplx(1, 0)) < 1e-12);

  MPS g = ghz_mps(4);
  MPS moved = canonicalize(g, 3);
  CHECK(std::abs(overlap_mps(moved, g) - cplx(1, 0)) < 1e-12);
  moved.check_valid(1e-10);

  MPS back = canonicalize(moved, 5 % 4);
  for (int c = 0; c < 8; ++c) {
    MPS at = canonicalize(m, c % 8);
    at.check_valid(1e-10);
  }
}

TEST_CASE("apply_two_site_gate_mps: identity, SWAP, and dense oracle") {
  MPS prod = product_mps({0, 1, 0, 0});
  auto [same, e0] = apply_two_site_gate_mps(prod, identity_two_site_gate(2), 0,
                                            TruncationSpec::unbounded());
  CHECK(e0 == doctest::Approx(0.0));
  CHECK(std::abs(overlap_mps(same, prod) - cplx(1, 0)) < 1e-12);

  auto [swapped, e1] = apply_two_site_gate_mps(prod, swap_gate(2), 0, TruncationSpec::unbounded());
  StateVector sv = mps_to_statevector(swapped);
  CHECK(std::abs(sv.amplitudes[0b1000] - cplx(1, 0)) < 1e-12);

  Rng rng(300);
  MPS m = random_mps(6, 4, rng);
  DenseTensor w = random_isometry(4, 4, rng);
  DenseTensor gate = split_leg(split_leg(w.renamed({{"in", "rr"}, {"out", "cc"}}), "rr",
                                         {{"out0", 2}, {"out1", 2}}),
                               "cc", {{"in0", 2}, {"in1", 2}});
  MPS at = canonicalize(m, 2);
  auto [after, err] = apply_two_site_gate_mps(at, gate, 2, TruncationSpec::unbounded());
  CHECK(err == doctest::Approx(0.0).epsilon(1e-12));
  StateVector dense = apply_two_site_dense(mps_to_statevector(m), gate, 3);
  CHECK(fidelity(mps_to_statevector(after), dense) == doctest::Approx(1.0).epsilon(1e-11));

  CHECK_THROWS_AS(apply_two_site_gate_mps(at, gate, 4, TruncationSpec::unbounded()), Error);
  DenseTensor notu = gate.scaled(2.0);
  CHECK_THROWS_AS(apply_two_site_gate_mps(at, notu, 2, TruncationSpec::unbounded()), Error);
}

TEST_CASE("renyi2_mps: product 0, GHZ log 2, random matches dense") {
  MPS prod = product_mps({0, 0, 0, 0});
  CHECK(renyi2_mps(prod, 2) == doctest::Approx(0.0).epsilon(1e-12));

  MPS g = ghz_mps(6);
  CHECK(renyi2_mps(g, 3) == doctest::Approx(std::log(2.0)).epsilon(1e-12));

  Rng rng(400);
  MPS m = random_mps(7, 4, rng);
  StateVector sv = mps_to_statevector(m);
  for (int cut = 1; cut < 7; ++cut) {
    CHECK(std::abs(renyi2_mps(m, cut) - renyi2_dense(sv, cut)) < 1e-10);
    CHECK(renyi2_mps(m, cut) <= std::log(static_cast<double>(m.bond_dim(cut - 1))) + 1e-12);
  }
}

TEST_CASE("ghz/w states: structure and overlaps") {
  MPS g = ghz_mps(4);
  MPS w = w_mps(4);
  g.check_valid();
  w.check_valid();
  CHECK(w.max_bond() == 2);

  CHECK(std::abs(overlap_mps(g, g) - cplx(1, 0)) < 1e-12);
  CHECK(std::abs(overlap_mps(w, w) - cplx(1, 0)) < 1e-12);
  CHECK(std::abs(overlap_mps(g, w)) < 1e-12);

  StateVector wsv = mps_to_statevector(w);
  for (int site = 1; site <= 4; ++site) {
    const std::int64_t idx = std::int64_t(1) << (4 - site);
    CHECK(std::abs(wsv.amplitudes[idx] - cplx(0.5, 0)) < 1e-12);
  }

  Rng rng(500);
  MPS a = random_mps(6, 3, rng);
  MPS b = random_mps(6, 3, rng);
  cplx via_mps = overlap_mps(a, b);
  cplx via_dense = inner(mps_to_statevector(a), mps_to_statevector(b));
  CHECK(std::abs(via_mps - via_dense) < 1e-12);
}

TEST_CASE("fit_mps_to_state: exact at full rank, monotone-ish under truncation") {
  Rng rng(600);
  StateVector psi = StateVector::haar_random(6, rng);
  auto [m8, e8] = fit_mps_to_state(psi, 8, 4);
  CHECK(e8 < 1e-12);

  auto [m2, e2] = fit_mps_to_state(psi, 2, 6);
  auto [m4, e4] = fit_mps_to_state(psi, 4, 6);
  CHECK(e4 < e2);
  CHECK(e2 < 2.0);
  // The variational fit should not be worse than plain SVD truncation.
  MPS svd2 = mps_from_statevector(psi, TruncationSpec::cap(2));
  const cplx ov = inner(psi, mps_to_statevector(svd2));
  const double n = mps_to_statevector(svd2).norm();
  const double svd_err = 2.0 - 2.0 * std::abs(ov) / n;
  CHECK(e2 <= svd_err + 1e-10);
}
