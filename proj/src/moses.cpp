#include "holonet/moses.hpp"

#include <Eigen/Dense>
#include <Eigen/SVD>

#include <algorithm>
#include <cmath>

#include "holonet/manifold.hpp"
#include "holonet/two_column.hpp"

namespace holonet {

namespace {

using MatC = Eigen::Matrix<cplx, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

std::vector<double> singular_values_of(const DenseTensor& theta,
                                       const std::vector<std::string>& rows,
                                       const std::vector<std::string>& cols) {
  auto res = svd_truncate(theta, rows, cols, TruncationSpec::unbounded(), "sv");
  return res.singular_values;
}

double renyi_half_from_sv(const std::vector<double>& sv) {
  double n2 = 0, sum = 0;
  for (double s : sv) {
    n2 += s * s;
    sum += s;
  }
  require(n2 > 0, "zero-tensor", "Renyi-1/2 of the zero tensor");
  // 2 log sum_i sqrt(lambda_i) with lambda_i = s_i^2 / n2.
  return 2.0 * std::log(sum) - std::log(n2);
}

DenseTensor strip1(const DenseTensor& t, const std::string& leg) {
  if (!t.has_leg(leg)) return t;
  DenseTensor one({{"x*", 1}}, {cplx(1, 0)});
  return contract(t, one, {{leg, "x*"}});
}

DenseTensor with_unit_leg(DenseTensor t, const std::string& name) {
  if (t.has_leg(name)) return t;
  return outer(t, DenseTensor({{name, 1}}, {cplx(1, 0)}));
}

}  // namespace

double renyi_half(const DenseTensor& theta, const std::vector<std::string>& row_legs,
                  const std::vector<std::string>& col_legs) {
  return renyi_half_from_sv(singular_values_of(theta, row_legs, col_legs));
}

DisentangleResult optimize_disentangler(const DenseTensor& theta, const DisentangleOptions& opts,
                                        Rng& rng) {
  const std::int64_t dbu = theta.dim("bu"), dbr = theta.dim("br");
  const std::int64_t nb = dbu * dbr;
  const std::vector<std::string> rows = {"bu", "a"};
  const std::vector<std::string> cols = {"br", "r", "alpha"};

  auto apply_u = [&](const DenseTensor& u) {
    // theta' = U theta over the (bu, br) pair; u legs (bu, br, bu', br').
    DenseTensor tp = contract(u, theta.renamed({{"bu", "bu'"}, {"br", "br'"}}),
                              {{"bu'", "bu'"}, {"br'", "br'"}});
    return tp;
  };

  auto cost_of = [&](const DenseTensor& u) {
    return renyi_half_from_sv(singular_values_of(apply_u(u), rows, cols));
  };

  DenseTensor best_u = outer(DenseTensor::identity("bu", "bu'", dbu),
                             DenseTensor::identity("br", "br'", dbr));
  double best_cost = cost_of(best_u);

  if (opts.enabled && nb > 1) {
    // Riemannian CG over the unitary group; the cost is the Renyi-1/2 of the
    // bipartition, its gradient from the SVD with sqrt(lambda + eps)
    // regularization applied to the gradient weights only.
    auto point_of = [&](const DenseTensor& u) {
      ManifoldPoint p;
      p.blocks.push_back(
          {ManifoldKind::stiefel, group_legs(u, {{"in", {"bu", "br"}}, {"out", {"bu'", "br'"}}})});
      return p;
    };
    auto u_of = [&](const ManifoldPoint& p) {
      return split_leg(split_leg(p.blocks[0].value, "in", {{"bu", dbu}, {"br", dbr}}), "out",
                       {{"bu'", dbu}, {"br'", dbr}});
    };
    CostFn cost_fn = [&](const ManifoldPoint& p) { return cost_of(u_of(p)); };
    GradFn grad_fn = [&](const ManifoldPoint& p) -> TangentVector {
      DenseTensor u = u_of(p);
      DenseTensor tp = apply_u(u);
      // SVD of the bipartition.
      DenseTensor m2 = group_legs(tp, {{"R", {"bu", "a"}}, {"C", {"br", "r", "alpha"}}});
      const std::int64_t nr = m2.dim("R"), nc = m2.dim("C");
      Eigen::Map<const MatC> m(m2.data().data(), nr, nc);
      Eigen::JacobiSVD<MatC> svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
      const Eigen::VectorXd s = svd.singularValues();
      double n2 = 0, ssum_reg = 0;
      const double eps = 1e-12;
      Eigen::VectorXd sreg(s.size());
      for (int i = 0; i < s.size(); ++i) {
        sreg(i) = std::sqrt(s(i) * s(i) + eps);
        n2 += s(i) * s(i);
        ssum_reg += sreg(i);
      }
      // d/dM of 2 log sum_i sqrt(s_i^2 + eps) - log n2 under Re inner product.
      Eigen::VectorXd w(s.size());
      for (int i = 0; i < s.size(); ++i)
        w(i) = 2.0 * (s(i) / sreg(i)) / ssum_reg - 2.0 * s(i) / n2;
      MatC gm = svd.matrixU() * w.asDiagonal() * svd.matrixV().adjoint();

      DenseTensor gmat({{"R", nr}, {"C", nc}});
      Eigen::Map<MatC>(gmat.data().data(), nr, nc) = gm;
      DenseTensor gten = split_leg(split_leg(gmat, "R", {{"bu", dbu}, {"a", theta.dim("a")}}), "C",
                                   {{"br", dbr}, {"r", theta.dim("r")}, {"alpha", theta.dim("alpha")}});
      // Chain rule through theta' = U theta.
      DenseTensor gu = contract(gten, theta.conjugated().renamed({{"bu", "bu'"}, {"br", "br'"}}),
                                {{"a", "a"}, {"r", "r"}, {"alpha", "alpha"}});
      return {group_legs(gu, {{"in", {"bu", "br"}}, {"out", {"bu'", "br'"}}})};
    };

    for (int start = 0; start <= opts.random_inits; ++start) {
      DenseTensor u0 = best_u;
      if (start > 0) {
        Rng child = rng.split(start);
        u0 = split_leg(split_leg(random_isometry(nb, nb, child), "in", {{"bu", dbu}, {"br", dbr}}),
                       "out", {{"bu'", dbu}, {"br'", dbr}});
      } else {
        u0 = outer(DenseTensor::identity("bu", "bu'", dbu),
                   DenseTensor::identity("br", "br'", dbr));
      }
      OptimizerOptions copts;
      copts.max_iters = opts.max_iters;
      copts.gtol = opts.gtol;
      copts.ftol = 1e-14;
      auto [pt, rep] = riemannian_cg(cost_fn, grad_fn, point_of(u0), copts);
      DenseTensor u = u_of(pt);
      const double c = cost_of(u);
      if (c < best_cost) {
        best_cost = c;
        best_u = u;
      }
    }
  }

  DisentangleResult res;
  res.unitary = best_u;
  res.theta = apply_u(best_u);
  res.renyi_half_value = best_cost;
  return res;
}

TripartiteResult tripartite_decompose(const DenseTensor& T, const TruncationSpec& spec,
                                      const DisentangleOptions& dopts, Rng& rng) {
  for (const char* leg : {"l", "b", "a", "r", "alpha"})
    require(T.has_leg(leg), "leg-not-found", std::string("tripartite input needs leg ") + leg);
  const std::int64_t dl = T.dim("l"), db = T.dim("b");
  const std::int64_t beta = dl * db;

  auto [q, theta0] = qr_decompose(T, {"l", "b"}, {"a", "r", "alpha"}, "beta", /*full_q=*/true);

  // Split the QR bond into a vertical and a horizontal factor. beta = dl*db,
  // so (min, max) realizes the d^2 -> (d, d) and d -> (1, d) rules.
  const std::int64_t dbu = std::min(dl, db);
  const std::int64_t dbr = std::max(dl, db);
  require(dbu * dbr == beta, "unexpected-leg-dims", "QR bond does not factor");

  DenseTensor A = split_leg(q, "beta", {{"bu", dbu}, {"br", dbr}});
  DenseTensor theta = split_leg(theta0, "beta", {{"bu", dbu}, {"br", dbr}});

  TripartiteResult res;
  if (beta > 1 && dopts.enabled) {
    DisentangleResult dis = optimize_disentangler(theta, dopts, rng);
    theta = dis.theta;
    res.disentangler = dis.unitary;
    res.renyi_half_final = dis.renyi_half_value;
    // A <- Q U^dagger: Q's bond lives on the disentangler's input (primed)
    // slot; the free legs afterwards are the output pair.
    A = contract(A, dis.unitary.conjugated(), {{"bu", "bu'"}, {"br", "br'"}});
  } else {
    res.disentangler = outer(DenseTensor::identity("bu", "bu'", dbu),
                             DenseTensor::identity("br", "br'", dbr));
    res.renyi_half_final = renyi_half(theta, {"bu", "a"}, {"br", "r", "alpha"});
  }

  auto svd = svd_truncate(theta, {"bu", "a"}, {"br", "r", "alpha"}, spec, "gamma");
  res.truncation_error = svd.truncation_error;
  DenseTensor us = contract(svd.factors[0], svd.factors[1], {{"gamma", "gamma"}});
  res.B = us.renamed({{"gamma'", "gamma"}});
  res.C = svd.factors[2].renamed({{"gamma'", "gamma"}});
  res.A = std::move(A);
  return res;
}

namespace {

struct UnzipOut {
  std::vector<DenseTensor> a_col;  // wing tensors, legs (l, r, b, a [, p])
  std::vector<DenseTensor> c_col;  // legs (up, lft, rgt, dwn)
  std::vector<double> errors;
  std::vector<double> renyi;
};

UnzipOut unzip_surface_column(const HoloNet& n0, const TruncationSpec& spec,
                              const DisentangleOptions& dopts, Rng& rng) {
  const int s = n0.surface();
  const int H = n0.height(s);
  UnzipOut out;

  DenseTensor T = n0.at(s, 1);
  T = strip1(T, "b").renamed({{"p", "b"}});
  T = with_unit_leg(T, "alpha");

  for (int h = 1; h <= H; ++h) {
    const bool top = h == H;
    if (!top) {
      Rng row_rng = rng.split(h);
      TripartiteResult tri = tripartite_decompose(T, spec, dopts, row_rng);
      out.errors.push_back(tri.truncation_error);
      out.renyi.push_back(tri.renyi_half_final);
      DenseTensor a = tri.A.renamed({{"bu", "a"}, {"br", "r"}});
      if (h == 1) a = a.renamed({{"b", "p"}});
      a = with_unit_leg(a, "b");
      out.a_col.push_back(a);
      out.c_col.push_back(tri.C.renamed(
          {{"gamma", "up"}, {"br", "lft"}, {"r", "rgt"}, {"alpha", "dwn"}}));
      // Absorb B into the tensor above.
      DenseTensor up = n0.at(s, h + 1);
      DenseTensor merged = contract(tri.B, up, {{"a", "b"}});
      T = merged.renamed({{"bu", "b"}, {"gamma", "alpha"}});
    } else {
      // Top row: a plain bipartition; the remainder tops the new surface.
      auto [qq, th] = qr_decompose(T, {"l", "b"}, {"a", "r", "alpha"}, "j");
      DenseTensor a = qq.renamed({{"j", "r"}});
      if (h == 1) a = a.renamed({{"b", "p"}});
      a = with_unit_leg(with_unit_leg(a, "a"), "b");
      out.a_col.push_back(a);
      out.c_col.push_back(
          th.renamed({{"j", "lft"}, {"a", "up"}, {"r", "rgt"}, {"alpha", "dwn"}}));
      out.errors.push_back(0.0);
      out.renyi.push_back(0.0);
    }
  }
  return out;
}

std::pair<HoloNet, ShiftReport> shift_right(const HoloNet& n_in, const ShiftOptions& opts) {
  const int s = n_in.surface();
  require(s < n_in.L(), "at-boundary", "surface already at the right boundary");
  Rng rng(opts.seed);

  // Keep the pre-shift columns for the refinement reference.
  HoloNet n0 = move_center_vertical(n_in, 1);
  auto ref_left = column_tensors(n0, s);
  auto ref_right = column_tensors(n0, s + 1);

  TruncationSpec spec = TruncationSpec::cap(n0.layout.chi);
  UnzipOut uz = unzip_surface_column(n0, spec, opts.disentangle, rng);
  const int H = n0.height(s);
  const int Hr = n0.height(s + 1);

  HoloNet n = n0;
  ShiftReport rep;
  rep.row_truncation_errors = uz.errors;
  rep.renyi_half = uz.renyi;

  // New left-wing column at s.
  n.cols[s - 1] = uz.a_col;

  // Merged surface column at s+1.
  std::vector<DenseTensor> merged(H);
  for (int h = 1; h <= H; ++h) {
    DenseTensor c = uz.c_col[h - 1];
    if (h <= Hr) {
      DenseTensor phi = n0.at(s + 1, h);
      DenseTensor m = contract(c, phi, {{"rgt", "l"}});
      std::vector<LegGroup> gs;
      gs.push_back({"l", {"lft"}});
      if (m.has_leg("p")) gs.push_back({"p", {"p"}});
      gs.push_back({"r", {"r"}});
      gs.push_back({"b", {"dwn", "b"}});
      gs.push_back({"a", {"up", "a"}});
      merged[h - 1] = group_legs(m, gs);
    } else {
      DenseTensor m = c.renamed({{"lft", "l"}, {"rgt", "r"}, {"dwn", "b"}, {"up", "a"}});
      merged[h - 1] = m;
    }
    merged[h - 1] = merged[h - 1].transposed([&] {
      std::vector<std::string> order = {"l", "r", "b", "a"};
      if (merged[h - 1].has_leg("p")) order.push_back("p");
      return order;
    }());
  }
  n.cols[s] = merged;

  n.layout.surface_col = s + 1;
  n.layout.canonical = false;
  n.layout.column_heights[s - 1] = H;
  n.layout.column_heights[s] = H;
  n.center_row = H;

  // Truncate the merged vertical bonds to chi, sweeping the center down.
  for (int h = H; h >= 2; --h) {
    DenseTensor& t = n.at(s + 1, h);
    std::vector<std::string> rows;
    for (const auto& lg : t.legs())
      if (lg.name != "b") rows.push_back(lg.name);
    auto svd = svd_truncate(t, rows, {"b"}, spec, "nb");
    rep.row_truncation_errors.push_back(svd.truncation_error);
    t = svd.factors[0].renamed({{"nb", "b"}});
    DenseTensor sv = contract(svd.factors[1], svd.factors[2], {{"nb'", "nb'"}});
    DenseTensor& dn = n.at(s + 1, h - 1);
    dn = contract(sv.renamed({{"b", "dead"}}), dn, {{"dead", "a"}}).renamed({{"nb", "a"}});
    n.center_row = h - 1;
  }
  n.normalize_center();

  // Refinement: alternating two-column optimization against the pre-shift
  // columns, from the Moses output as the initial guess.
  auto rungs = make_ref_rungs(ref_left, ref_right, nullptr);
  TwoColumnCandidate cand = candidate_from_columns(n, s);
  if (opts.refine) {
    AlternatingReport ar = alternating_two_column(cand, rungs, opts.refine_sweeps, opts.refine_ftol);
    write_candidate(n, s, cand);
    rep.refinement_sweeps = ar.sweeps;
    rep.refined_cost = ar.cost;
  }
  const cplx ov = two_column_overlap(cand, rungs);
  rep.fidelity_estimate = std::norm(ov);
  return {n, rep};
}

}  // namespace

std::pair<HoloNet, ShiftReport> shift_surface(const HoloNet& n, ShiftDirection dir,
                                              const ShiftOptions& opts) {
  if (dir == ShiftDirection::right) return shift_right(n, opts);
  require(n.surface() > 1, "at-boundary", "surface already at the left boundary");
  auto [shifted, rep] = shift_right(mirrored(n), opts);
  return {mirrored(shifted), rep};
}

}  // namespace holonet
