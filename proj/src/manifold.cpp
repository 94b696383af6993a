#include "holonet/manifold.hpp"

#include <Eigen/Dense>
#include <Eigen/SVD>

#include <algorithm>
#include <cstdio>
#include <cmath>

namespace holonet {

namespace {

// herm(X) over the (out, out') square block of W^dagger G.
DenseTensor stiefel_project(const DenseTensor& w, const DenseTensor& g) {
  DenseTensor wtg = contract(w.conjugated().renamed({{"out", "o1"}}), g.renamed({{"out", "o2"}}),
                             {{"in", "in"}});
  DenseTensor herm(wtg.legs());
  const std::int64_t m = wtg.dim("o1");
  for (std::int64_t i = 0; i < m; ++i)
    for (std::int64_t j = 0; j < m; ++j)
      herm.at({i, j}) = (wtg.at({i, j}) + std::conj(wtg.at({j, i}))) / 2.0;
  DenseTensor corr = contract(w.renamed({{"out", "o1"}}), herm, {{"o1", "o1"}});
  corr = corr.renamed({{"o2", "out"}});
  DenseTensor res = g;
  std::vector<std::string> order;
  for (const auto& lg : g.legs()) order.push_back(lg.name);
  DenseTensor corr_t = corr.transposed(order);
  for (std::int64_t i = 0; i < res.size(); ++i) res.data()[i] -= corr_t.data()[i];
  return res;
}

DenseTensor sphere_project(const DenseTensor& t, const DenseTensor& g) {
  cplx ip(0, 0);
  for (std::int64_t i = 0; i < t.size(); ++i) ip += std::conj(t.data()[i]) * g.data()[i];
  const double re = ip.real();
  DenseTensor res = g;
  for (std::int64_t i = 0; i < res.size(); ++i) res.data()[i] -= re * t.data()[i];
  return res;
}

}  // namespace

std::int64_t ManifoldPoint::parameter_count() const {
  std::int64_t n = 0;
  for (const auto& b : blocks) n += b.value.size();
  return n;
}

double ManifoldPoint::constraint_residual() const {
  double r = 0;
  for (const auto& b : blocks) {
    if (b.kind == ManifoldKind::stiefel)
      r = std::max(r, isometry_residual(b.value, {"out"}));
    else
      r = std::max(r, std::abs(b.value.norm() - 1.0));
  }
  return r;
}

DenseTensor procrustes_update(const DenseTensor& env) {
  require(env.has_leg("in") && env.has_leg("out"), "leg-not-found",
          "procrustes environment needs legs (in, out)");
  const std::int64_t n = env.dim("in"), m = env.dim("out");
  require(n >= m, "dimension-orientation-invalid", "procrustes needs n >= m");
  DenseTensor ep = env.transposed({"in", "out"});
  using Mat = Eigen::Matrix<cplx, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
  Eigen::Map<const Mat> e(ep.data().data(), n, m);
  Eigen::JacobiSVD<Mat> svd(e, Eigen::ComputeThinU | Eigen::ComputeThinV);
  if (svd.info() != Eigen::Success) raise("decomposition-failed", "procrustes SVD failed");
  Mat w = svd.matrixU() * svd.matrixV().adjoint();
  DenseTensor out({{"in", n}, {"out", m}});
  Eigen::Map<Mat>(out.data().data(), n, m) = w;
  return out;
}

DenseTensor sphere_update(const DenseTensor& env) {
  const double n = env.norm();
  require(n > 0, "zero-environment", "sphere update of a zero environment");
  return env.scaled(1.0 / n);
}

TangentVector tangent_project(const ManifoldPoint& point, const TangentVector& euclid) {
  require(point.blocks.size() == euclid.size(), "dimension-mismatch", "tangent_project shapes");
  TangentVector out;
  out.reserve(euclid.size());
  for (std::size_t i = 0; i < euclid.size(); ++i) {
    if (point.blocks[i].kind == ManifoldKind::stiefel)
      out.push_back(stiefel_project(point.blocks[i].value, euclid[i]));
    else
      out.push_back(sphere_project(point.blocks[i].value, euclid[i]));
  }
  return out;
}

ManifoldPoint retract(const ManifoldPoint& point, const TangentVector& tangent, double step) {
  ManifoldPoint out = point;
  for (std::size_t i = 0; i < point.blocks.size(); ++i) {
    DenseTensor moved = point.blocks[i].value;
    std::vector<std::string> order;
    for (const auto& lg : moved.legs()) order.push_back(lg.name);
    const DenseTensor xi = tangent[i].transposed(order);
    for (std::int64_t k = 0; k < moved.size(); ++k) moved.data()[k] += step * xi.data()[k];
    if (point.blocks[i].kind == ManifoldKind::stiefel) {
      auto [q, r] = qr_decompose(moved, {"in"}, {"out"}, "k");
      (void)r;
      out.blocks[i].value = q.renamed({{"k", "out"}});
    } else {
      out.blocks[i].value = sphere_update(moved);
    }
  }
  return out;
}

TangentVector vector_transport(const ManifoldPoint& from, const ManifoldPoint& to,
                               const TangentVector& tangent) {
  (void)from;
  return tangent_project(to, tangent);
}

double tangent_inner(const TangentVector& a, const TangentVector& b) {
  double s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    cplx ip(0, 0);
    const auto& da = a[i].data();
    DenseTensor bt = b[i].transposed([&] {
      std::vector<std::string> order;
      for (const auto& lg : a[i].legs()) order.push_back(lg.name);
      return order;
    }());
    for (std::int64_t k = 0; k < a[i].size(); ++k) ip += std::conj(da[k]) * bt.data()[k];
    s += ip.real();
  }
  return s;
}

double tangent_norm(const TangentVector& a) { return std::sqrt(std::max(0.0, tangent_inner(a, a))); }

namespace {

TangentVector scaled(const TangentVector& a, double f) {
  TangentVector out = a;
  for (auto& t : out) t = t.scaled(f);
  return out;
}

TangentVector axpy(const TangentVector& a, double f, const TangentVector& b) {
  // a + f * b
  TangentVector out = a;
  for (std::size_t i = 0; i < a.size(); ++i) {
    std::vector<std::string> order;
    for (const auto& lg : a[i].legs()) order.push_back(lg.name);
    const DenseTensor bt = b[i].transposed(order);
    for (std::int64_t k = 0; k < a[i].size(); ++k) out[i].data()[k] += f * bt.data()[k];
  }
  return out;
}

}  // namespace

std::pair<ManifoldPoint, OptimizerReport> riemannian_cg(const CostFn& cost, const GradFn& grad,
                                                        const ManifoldPoint& init,
                                                        const OptimizerOptions& opts) {
  ManifoldPoint x = init;
  OptimizerReport rep;
  double f = cost(x);
  TangentVector g = tangent_project(x, grad(x));
  double gnorm = tangent_norm(g);
  TangentVector dir = scaled(g, -1.0);
  double g2_prev = gnorm * gnorm;
  double step = opts.initial_step;

  for (int it = 0; it < opts.max_iters; ++it) {
    rep.iterations = it;
    rep.final_cost = f;
    rep.gradient_norm = gnorm;
    if (gnorm < opts.gtol) {
      rep.converged = true;
      return {x, rep};
    }

    double slope = tangent_inner(g, dir);
    if (slope >= 0) {  // restart on non-descent
      dir = scaled(g, -1.0);
      slope = -g2_prev;
    }

    // Armijo backtracking.
    double t = std::max(step, 1e-14);
    bool accepted = false;
    ManifoldPoint xn = x;
    double fn = f;
    for (int bt = 0; bt < opts.ls_max_backtracks; ++bt) {
      xn = retract(x, dir, t);
      fn = cost(xn);
      if (fn <= f + 1e-4 * t * slope) {
        accepted = true;
        break;
      }
      t *= 0.5;
    }
    if (!accepted) {
      rep.line_search_failed = true;
      rep.converged = false;
      return {x, rep};
    }

    TangentVector g_new = tangent_project(xn, grad(xn));
    const double g2_new = tangent_inner(g_new, g_new);
    TangentVector g_old_at_new = vector_transport(x, xn, g);
    const double beta =
        std::max(0.0, (g2_new - tangent_inner(g_new, g_old_at_new)) / std::max(g2_prev, 1e-300));
    TangentVector dir_t = vector_transport(x, xn, dir);
    dir = axpy(scaled(g_new, -1.0), beta, dir_t);

    const double df = f - fn;
    x = std::move(xn);
    f = fn;
    g = std::move(g_new);
    gnorm = std::sqrt(std::max(0.0, g2_new));
    g2_prev = g2_new;
    step = std::min(4.0 * t, 1.0);
    if (opts.ftol > 0 && df >= 0 && df < opts.ftol) {
      rep.iterations = it + 1;
      rep.final_cost = f;
      rep.gradient_norm = gnorm;
      rep.converged = true;
      return {x, rep};
    }
  }
  rep.final_cost = f;
  rep.gradient_norm = gnorm;
  rep.converged = gnorm < opts.gtol;
  return {x, rep};
}

std::pair<ManifoldPoint, OptimizerReport> trust_region(const CostFn& cost, const GradFn& grad,
                                                       const HessVecFn& hessvec,
                                                       const ManifoldPoint& init,
                                                       const TrustRegionOptions& opts) {
  ManifoldPoint x = init;
  OptimizerReport rep;
  double f = cost(x);
  double radius = opts.initial_radius > 0
                      ? opts.initial_radius
                      : 0.1 * std::sqrt(static_cast<double>(x.parameter_count()));

  // Euclidean Hessian-vector product to Riemannian Hessian: project and add
  // the Weingarten correction of the embedded metric
  //   Stiefel: P(ehess v - v herm(X^dagger egrad)),
  //   sphere:  P(ehess v) - Re<x, egrad> v.
  auto rhess = [&](const ManifoldPoint& p, const TangentVector& egrad_p,
                   const TangentVector& v) {
    TangentVector hv = hessvec(p, v);
    for (std::size_t i = 0; i < p.blocks.size(); ++i) {
      const DenseTensor& xv = p.blocks[i].value;
      if (p.blocks[i].kind == ManifoldKind::stiefel) {
        DenseTensor xg = contract(xv.conjugated().renamed({{"out", "o1"}}),
                                  egrad_p[i].renamed({{"out", "o2"}}), {{"in", "in"}});
        DenseTensor sym(xg.legs());
        const std::int64_t m = xg.dim("o1");
        for (std::int64_t a = 0; a < m; ++a)
          for (std::int64_t b = 0; b < m; ++b)
            sym.at({a, b}) = (xg.at({a, b}) + std::conj(xg.at({b, a}))) / 2.0;
        DenseTensor corr = contract(v[i].renamed({{"out", "o1"}}), sym, {{"o1", "o1"}});
        corr = corr.renamed({{"o2", "out"}});
        std::vector<std::string> order;
        for (const auto& lg : hv[i].legs()) order.push_back(lg.name);
        DenseTensor ct = corr.transposed(order);
        for (std::int64_t k = 0; k < hv[i].size(); ++k) hv[i].data()[k] -= ct.data()[k];
      } else {
        std::vector<std::string> xorder;
        for (const auto& lg : xv.legs()) xorder.push_back(lg.name);
        const DenseTensor eg = egrad_p[i].transposed(xorder);
        cplx ip(0, 0);
        for (std::int64_t k = 0; k < xv.size(); ++k) ip += std::conj(xv.data()[k]) * eg.data()[k];
        std::vector<std::string> order;
        for (const auto& lg : hv[i].legs()) order.push_back(lg.name);
        DenseTensor vt = v[i].transposed(order);
        for (std::int64_t k = 0; k < hv[i].size(); ++k) hv[i].data()[k] -= ip.real() * vt.data()[k];
      }
    }
    return tangent_project(p, hv);
  };

  for (int it = 0; it < opts.max_iters; ++it) {
    rep.iterations = it;
    TangentVector egrad = grad(x);
    TangentVector g = tangent_project(x, egrad);
    const double gnorm = tangent_norm(g);
    rep.gradient_norm = gnorm;
    rep.final_cost = f;
    if (gnorm < opts.gtol) {
      rep.converged = true;
      return {x, rep};
    }
    auto phess = [&](const ManifoldPoint& p, const TangentVector& v) {
      return rhess(p, egrad, v);
    };

    // Steihaug truncated CG on the quadratic model.
    TangentVector eta = scaled(g, 0.0);
    TangentVector r = g;
    TangentVector p = scaled(g, -1.0);
    double r2 = tangent_inner(r, r);
    const double r2_0 = r2;
    bool boundary = false;
    for (int k = 0; k < opts.tcg_max_iters; ++k) {
      TangentVector hp = phess(x, p);
      const double php = tangent_inner(p, hp);
      const double eta2 = tangent_inner(eta, eta);
      const double ep = tangent_inner(eta, p);
      const double p2 = tangent_inner(p, p);
      if (php <= 0) {
        // Negative curvature: go to the boundary.
        const double disc = ep * ep + p2 * (radius * radius - eta2);
        const double tau = (-ep + std::sqrt(std::max(0.0, disc))) / std::max(p2, 1e-300);
        eta = axpy(eta, tau, p);
        boundary = true;
        break;
      }
      const double alpha = r2 / php;
      const double new_eta2 = eta2 + 2 * alpha * ep + alpha * alpha * p2;
      if (new_eta2 >= radius * radius) {
        const double disc = ep * ep + p2 * (radius * radius - eta2);
        const double tau = (-ep + std::sqrt(std::max(0.0, disc))) / std::max(p2, 1e-300);
        eta = axpy(eta, tau, p);
        boundary = true;
        break;
      }
      eta = axpy(eta, alpha, p);
      r = axpy(r, alpha, hp);
      const double r2n = tangent_inner(r, r);
      if (std::sqrt(r2n) <= 0.1 * std::sqrt(r2_0)) {
        r2 = r2n;
        break;
      }
      const double beta = r2n / r2;
      p = axpy(scaled(r, -1.0), beta, p);
      r2 = r2n;
    }

    const double model_drop =
        -(tangent_inner(g, eta) + 0.5 * tangent_inner(eta, phess(x, eta)));
    ManifoldPoint xn = retract(x, eta, 1.0);
    const double fn = cost(xn);
    const double rho = model_drop > 1e-300 ? (f - fn) / model_drop : -1.0;

    // Below the cost's floating-point resolution the ratio test is noise;
    // take the model step on the strength of the (exact) gradient instead.
    const double cost_noise = 1e-13 * std::max(1.0, std::abs(f));
#ifdef HOLONET_TR_TRACE
    std::fprintf(stderr, "it=%d f=%.15g gnorm=%.3e drop=%.3e radius=%.3e rho=%.3f bnd=%d\n", it, f,
                 gnorm, model_drop, radius, rho, (int)boundary);
#endif
    const bool below_noise = model_drop <= cost_noise;
    if (!below_noise) {
      if (rho > 0.75 && boundary) radius *= 2.0;
      if (rho < 0.25) radius *= 0.25;
      if (radius < 1e-13) {
        rep.converged = false;
        return {x, rep};  // stalled
      }
    } else if (boundary) {
      radius *= 2.0;  // model-trusted step was radius-limited
    }
    if (below_noise || rho > 0.1) {
      const double df = f - fn;
      x = std::move(xn);
      f = fn;
      if (!below_noise && opts.ftol > 0 && df >= 0 && df < opts.ftol) {
        rep.final_cost = f;
        rep.converged = true;
        return {x, rep};
      }
    }
  }
  rep.final_cost = f;
  rep.converged = rep.gradient_norm < opts.gtol;
  return {x, rep};
}

}  // namespace holonet
