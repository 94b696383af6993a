#include "doctest.h"

#include <cmath>

#include "holonet/manifold.hpp"
#include "reference_contraction.hpp"

using namespace holonet;
using holonet::testing::random_tensor;

namespace {

double re_tr_wte(const DenseTensor& w, const DenseTensor& e) {
  cplx s(0, 0);
  DenseTensor wt = w.transposed({"in", "out"});
  DenseTensor et = e.transposed({"in", "out"});
  for (std::int64_t i = 0; i < wt.size(); ++i) s += std::conj(wt.data()[i]) * et.data()[i];
  return s.real();
}

}  // namespace

TEST_CASE("procrustes_update: identity and positive-diagonal cases") {
  DenseTensor e1 = DenseTensor::identity("in", "out", 3);
  DenseTensor w1 = procrustes_update(e1);
  double m = 0;
  DenseTensor id = DenseTensor::identity("in", "out", 3);
  for (std::int64_t i = 0; i < w1.size(); ++i)
    m = std::max(m, std::abs(w1.transposed({"in", "out"}).data()[i] - id.data()[i]));
  CHECK(m < 1e-13);

  DenseTensor e2({{"in", 2}, {"out", 2}});
  e2.at({0, 0}) = 3;
  e2.at({1, 1}) = 5;
  DenseTensor w2 = procrustes_update(e2);
  CHECK(std::abs(w2.at({0, 0}) - cplx(1, 0)) < 1e-13);
  CHECK(std::abs(w2.at({1, 1}) - cplx(1, 0)) < 1e-13);
}

TEST_CASE("procrustes_update beats random isometries") {
  Rng rng(1001);
  for (int trial = 0; trial < 200; ++trial) {
    DenseTensor e = random_tensor({{"in", 8}, {"out", 4}}, rng);
    DenseTensor w = procrustes_update(e);
    CHECK(is_isometry(w, {"out"}, 1e-12));
    const double best = re_tr_wte(w, e);
    const int samples = trial < 5 ? 1000 : 50;
    for (int s = 0; s < samples; ++s) {
      DenseTensor cand = random_isometry(8, 4, rng);
      CHECK(re_tr_wte(cand, e) <= best + 1e-12);
    }
  }
}

TEST_CASE("procrustes_update: rank-deficient environment still yields an isometry") {
  DenseTensor e({{"in", 4}, {"out", 3}});
  e.at({0, 0}) = 2.0;  // rank 1
  DenseTensor w = procrustes_update(e);
  CHECK(is_isometry(w, {"out"}, 1e-12));
  CHECK(re_tr_wte(w, e) == doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("sphere_update basics") {
  DenseTensor e({{"v", 2}}, {cplx(3, 0), cplx(4, 0)});
  DenseTensor t = sphere_update(e);
  CHECK(std::abs(t.data()[0] - cplx(0.6, 0)) < 1e-14);
  CHECK(std::abs(t.data()[1] - cplx(0.8, 0)) < 1e-14);

  Rng rng(1002);
  DenseTensor er = random_tensor({{"v", 6}}, rng);
  DenseTensor tr = sphere_update(er);
  cplx ip(0, 0);
  for (int i = 0; i < 6; ++i) ip += std::conj(tr.data()[i]) * er.data()[i];
  for (int s = 0; s < 1000; ++s) {
    DenseTensor cand = random_isometry(6, 1, rng).renamed({{"in", "v"}, {"out", "one"}});
    DenseTensor c = split_leg(cand, "one", {}).rank() == 1 ? cand : cand;  // keep vector shape
    cplx ipc(0, 0);
    for (int i = 0; i < 6; ++i) ipc += std::conj(cand.data()[i]) * er.data()[i];
    CHECK(ipc.real() <= ip.real() + 1e-12);
  }
  DenseTensor zero({{"v", 3}});
  CHECK_THROWS_AS(sphere_update(zero), Error);
}

TEST_CASE("tangent_project: idempotent, correct on special cases") {
  Rng rng(1003);
  DenseTensor w = random_isometry(6, 3, rng);
  ManifoldPoint p;
  p.blocks.push_back({ManifoldKind::stiefel, w});

  // G = W projects to zero.
  TangentVector g0 = tangent_project(p, {w});
  CHECK(tangent_norm(g0) < 1e-12);

  // G orthogonal to the columns of W is unchanged.
  DenseTensor g = random_tensor({{"in", 6}, {"out", 3}}, rng);
  DenseTensor wg = contract(w.conjugated().renamed({{"out", "o"}}), g, {{"in", "in"}});
  DenseTensor corr = contract(w.renamed({{"out", "o"}}), wg, {{"o", "o"}});
  DenseTensor orth = g;
  DenseTensor ct = corr.transposed({"in", "out"});
  for (std::int64_t i = 0; i < g.size(); ++i) orth.data()[i] -= ct.data()[i];
  TangentVector pr = tangent_project(p, {orth});
  double diff = 0;
  for (std::int64_t i = 0; i < orth.size(); ++i)
    diff = std::max(diff, std::abs(pr[0].data()[i] - orth.data()[i]));
  CHECK(diff < 1e-12);

  // Random: projection is a fixed point of itself.
  TangentVector once = tangent_project(p, {g});
  TangentVector twice = tangent_project(p, once);
  double dd = 0;
  for (std::int64_t i = 0; i < once[0].size(); ++i)
    dd = std::max(dd, std::abs(once[0].data()[i] - twice[0].data()[i]));
  CHECK(dd < 1e-12);
}

TEST_CASE("retract: step 0 identity; sphere analytic case; stiefel residual") {
  Rng rng(1004);
  ManifoldPoint p;
  p.blocks.push_back({ManifoldKind::stiefel, random_isometry(5, 2, rng)});
  DenseTensor t0({{"v", 2}}, {cplx(1, 0), cplx(0, 0)});
  p.blocks.push_back({ManifoldKind::sphere, t0});

  TangentVector xi;
  xi.push_back(tangent_project(p, {random_tensor({{"in", 5}, {"out", 2}}, rng),
                                   DenseTensor({{"v", 2}}, {cplx(0, 0), cplx(1, 0)})})[0]);
  xi.push_back(DenseTensor({{"v", 2}}, {cplx(0, 0), cplx(1, 0)}));

  ManifoldPoint same = retract(p, xi, 0.0);
  CHECK(same.constraint_residual() < 1e-12);
  double dmax = 0;
  for (std::int64_t i = 0; i < p.blocks[0].value.size(); ++i)
    dmax = std::max(dmax, std::abs(same.blocks[0].value.data()[i] - p.blocks[0].value.data()[i]));
  CHECK(dmax < 1e-13);

  ManifoldPoint moved = retract(p, xi, 1.0);
  CHECK(moved.constraint_residual() < 1e-12);
  const double isq2 = 1.0 / std::sqrt(2.0);
  CHECK(std::abs(moved.blocks[1].value.data()[0] - cplx(isq2, 0)) < 1e-12);
  CHECK(std::abs(moved.blocks[1].value.data()[1] - cplx(isq2, 0)) < 1e-12);
}

TEST_CASE("vector_transport: projection semantics") {
  Rng rng(1005);
  ManifoldPoint p;
  p.blocks.push_back({ManifoldKind::stiefel, random_isometry(6, 2, rng)});
  TangentVector xi = tangent_project(p, {random_tensor({{"in", 6}, {"out", 2}}, rng)});

  TangentVector same = vector_transport(p, p, xi);
  double dd = 0;
  for (std::int64_t i = 0; i < xi[0].size(); ++i)
    dd = std::max(dd, std::abs(same[0].data()[i] - xi[0].data()[i]));
  CHECK(dd < 1e-12);

  ManifoldPoint q;
  q.blocks.push_back({ManifoldKind::stiefel, random_isometry(6, 2, rng)});
  TangentVector moved = vector_transport(p, q, xi);
  TangentVector re = tangent_project(q, moved);
  dd = 0;
  for (std::int64_t i = 0; i < moved[0].size(); ++i)
    dd = std::max(dd, std::abs(re[0].data()[i] - moved[0].data()[i]));
  CHECK(dd < 1e-12);

  TangentVector zero = vector_transport(p, q, {xi[0].scaled(0.0)});
  CHECK(tangent_norm(zero) < 1e-15);
}

namespace {

// Rayleigh quotient on the complex sphere: f(x) = x^dagger A x.
struct Rayleigh {
  DenseTensor a;  // legs (r, c), Hermitian
  double lambda_min = 0;

  static Rayleigh make(int n, Rng& rng) {
    DenseTensor g = holonet::testing::random_tensor({{"r", n}, {"c", n}}, rng);
    DenseTensor h({{"r", n}, {"c", n}});
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) h.at({i, j}) = (g.at({i, j}) + std::conj(g.at({j, i}))) / 2.0;
    // analytic minimum via svd of (H - shift I): use expm-free eigen through
    // svd_truncate on the Hermitian matrix is not ordered by algebraic value,
    // so diagonalize by power-iteration-free route: shift so H' = H + cI is
    // PSD, then the smallest eigenvalue is c - largest of (cI - H).
    double bound = 0;
    for (int i = 0; i < n; ++i) {
      double row = 0;
      for (int j = 0; j < n; ++j) row += std::abs(h.at({i, j}));
      bound = std::max(bound, row);
    }
    DenseTensor shifted({{"r", n}, {"c", n}});
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        shifted.at({i, j}) = (i == j ? cplx(bound, 0) : cplx(0, 0)) - h.at({i, j});
    auto res = svd_truncate(shifted, {"r"}, {"c"}, TruncationSpec::unbounded());
    Rayleigh r{h, bound - res.singular_values.front()};
    return r;
  }

  double cost(const ManifoldPoint& p) const {
    const DenseTensor& x = p.blocks[0].value;
    DenseTensor ax = contract(a, x.renamed({{"v", "c"}}), {{"c", "c"}});
    cplx s(0, 0);
    for (std::int64_t i = 0; i < x.size(); ++i) s += std::conj(x.data()[i]) * ax.data()[i];
    return s.real();
  }
  TangentVector grad(const ManifoldPoint& p) const {
    const DenseTensor& x = p.blocks[0].value;
    DenseTensor ax = contract(a, x.renamed({{"v", "c"}}), {{"c", "c"}}).renamed({{"r", "v"}});
    return {ax.scaled(2.0)};
  }
  TangentVector hessvec(const ManifoldPoint&, const TangentVector& xi) const {
    DenseTensor axi = contract(a, xi[0].renamed({{"v", "c"}}), {{"c", "c"}}).renamed({{"r", "v"}});
    return {axi.scaled(2.0)};
  }
};

}  // namespace

TEST_CASE("riemannian_cg solves the sphere Rayleigh benchmark") {
  Rng rng(1006);
  Rayleigh prob = Rayleigh::make(4, rng);

  ManifoldPoint init;
  init.blocks.push_back(
      {ManifoldKind::sphere, random_isometry(4, 1, rng).renamed({{"in", "v"}, {"out", "x"}})});
  init.blocks[0].value = group_legs(init.blocks[0].value, {{"v", {"v", "x"}}});

  OptimizerOptions opts;
  opts.max_iters = 500;
  opts.gtol = 1e-12;
  auto [best, rep] = riemannian_cg([&](const ManifoldPoint& p) { return prob.cost(p); },
                                   [&](const ManifoldPoint& p) { return prob.grad(p); }, init, opts);
  CHECK(std::abs(rep.final_cost - prob.lambda_min) < 1e-10);
  CHECK(best.constraint_residual() < 1e-10);

  // Init at the optimum: immediate convergence.
  auto [again, rep2] = riemannian_cg([&](const ManifoldPoint& p) { return prob.cost(p); },
                                     [&](const ManifoldPoint& p) { return prob.grad(p); }, best, opts);
  CHECK(rep2.iterations <= 1);
}

TEST_CASE("trust_region matches the CG optimum and solves Stiefel least squares") {
  Rng rng(1007);
  Rayleigh prob = Rayleigh::make(4, rng);
  ManifoldPoint init;
  init.blocks.push_back(
      {ManifoldKind::sphere, random_isometry(4, 1, rng).renamed({{"in", "v"}, {"out", "x"}})});
  init.blocks[0].value = group_legs(init.blocks[0].value, {{"v", {"v", "x"}}});

  TrustRegionOptions topts;
  topts.max_iters = 200;
  topts.gtol = 1e-11;
  auto [best, rep] = trust_region([&](const ManifoldPoint& p) { return prob.cost(p); },
                                  [&](const ManifoldPoint& p) { return prob.grad(p); },
                                  [&](const ManifoldPoint& p, const TangentVector& v) {
                                    return prob.hessvec(p, v);
                                  },
                                  init, topts);
  CHECK(std::abs(rep.final_cost - prob.lambda_min) < 1e-9);
  CHECK(best.constraint_residual() < 1e-10);

  // Immediate convergence from the optimum.
  auto [b2, rep2] = trust_region([&](const ManifoldPoint& p) { return prob.cost(p); },
                                 [&](const ManifoldPoint& p) { return prob.grad(p); },
                                 [&](const ManifoldPoint& p, const TangentVector& v) {
                                   return prob.hessvec(p, v);
                                 },
                                 best, topts);
  CHECK(rep2.iterations <= 1);

  // Stiefel least squares: min ||W - B||_F^2 over isometries W.
  DenseTensor b = holonet::testing::random_tensor({{"in", 6}, {"out", 3}}, rng);
  auto cost = [&](const ManifoldPoint& p) {
    const DenseTensor w = p.blocks[0].value.transposed({"in", "out"});
    const DenseTensor bb = b.transposed({"in", "out"});
    double s = 0;
    for (std::int64_t i = 0; i < w.size(); ++i) s += std::norm(w.data()[i] - bb.data()[i]);
    return s;
  };
  auto grad = [&](const ManifoldPoint& p) {
    DenseTensor g = p.blocks[0].value.transposed({"in", "out"});
    const DenseTensor bb = b.transposed({"in", "out"});
    for (std::int64_t i = 0; i < g.size(); ++i) g.data()[i] = 2.0 * (g.data()[i] - bb.data()[i]);
    return TangentVector{g};
  };
  auto hv = [&](const ManifoldPoint&, const TangentVector& v) {
    return TangentVector{v[0].scaled(2.0)};
  };
  ManifoldPoint winit;
  winit.blocks.push_back({ManifoldKind::stiefel, random_isometry(6, 3, rng)});
  auto [wbest, wrep] = trust_region(cost, grad, hv, winit, topts);
  CHECK(wrep.gradient_norm < 1e-8);
  CHECK(wbest.constraint_residual() < 1e-10);
  // The closed-form optimum is the Procrustes solution of B.
  DenseTensor wopt = procrustes_update(b);
  ManifoldPoint popt;
  popt.blocks.push_back({ManifoldKind::stiefel, wopt});
  CHECK(cost(wbest) == doctest::Approx(cost(popt)).epsilon(1e-8));
}
