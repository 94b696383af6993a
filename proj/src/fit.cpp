#include "holonet/fit.hpp"

#include <algorithm>
#include <limits>
#include <cmath>

namespace holonet {

namespace {

std::string bond_name(int c, int h, const std::string& leg) {
  if (leg == "l") return "H" + std::to_string(c - 1) + ":" + std::to_string(h);
  if (leg == "r") return "H" + std::to_string(c) + ":" + std::to_string(h);
  if (leg == "b") return "V" + std::to_string(c) + ":" + std::to_string(h - 1);
  if (leg == "a") return "V" + std::to_string(c) + ":" + std::to_string(h);
  return "p" + std::to_string(c);
}

DenseTensor strip1(const DenseTensor& t, const std::string& leg) {
  if (!t.has_leg(leg)) return t;
  DenseTensor one({{"x*", 1}}, {cplx(1, 0)});
  return contract(t, one, {{leg, "x*"}});
}

// Tensor with legs renamed to global bond names, boundary dim-1 legs stripped.
DenseTensor globalized(const HoloNet& n, int c, int h) {
  DenseTensor t = n.at(c, h);
  if (!n.has(c - 1, h)) t = strip1(t, "l");
  if (!n.has(c + 1, h)) t = strip1(t, "r");
  if (h == 1) t = strip1(t, "b");
  if (h == n.height(c)) t = strip1(t, "a");
  std::vector<std::pair<std::string, std::string>> rn;
  for (const auto& lg : t.legs()) rn.push_back({lg.name, bond_name(c, h, lg.name)});
  return t.renamed(rn);
}

DenseTensor contract_common(const DenseTensor& a, const DenseTensor& b) {
  std::vector<std::pair<std::string, std::string>> pairs;
  for (const auto& lg : a.legs())
    if (b.has_leg(lg.name)) pairs.push_back({lg.name, lg.name});
  return contract(a, b, pairs);
}

}  // namespace

cplx network_overlap(const StateVector& reference, const HoloNet& n) {
  require(reference.L == n.L() && reference.d == n.layout.d, "dimension-mismatch",
          "reference shape mismatch");
  DenseTensor blob = reference.as_tensor().conjugated();
  for (int c = 1; c <= n.L(); ++c)
    for (int h = 1; h <= n.height(c); ++h) blob = contract_common(blob, globalized(n, c, h));
  require(blob.rank() == 0, "numeric-failure", "overlap contraction left open legs");
  return blob.data()[0];
}

DenseTensor environment_gradient(const HoloNet& n, BlockId block, const StateVector& reference) {
  require(n.has(block.col, block.row), "block-not-found",
          "no tensor at (" + std::to_string(block.col) + ", " + std::to_string(block.row) + ")");
  DenseTensor blob = reference.as_tensor().conjugated();
  for (int c = 1; c <= n.L(); ++c)
    for (int h = 1; h <= n.height(c); ++h) {
      if (c == block.col && h == block.row) continue;
      blob = contract_common(blob, globalized(n, c, h));
    }
  // Open legs are the block's global bonds; conjugate and restore local names.
  std::vector<std::pair<std::string, std::string>> rn;
  const DenseTensor& t = n.at(block.col, block.row);
  DenseTensor env = blob.conjugated();
  for (const auto& lg : t.legs()) {
    const std::string global = bond_name(block.col, block.row, lg.name);
    if (env.has_leg(global)) {
      rn.push_back({global, lg.name});
    } else {
      require(lg.dim == 1, "numeric-failure", "environment missing leg " + lg.name);
    }
  }
  env = env.renamed(rn);
  for (const auto& lg : t.legs())
    if (!env.has_leg(lg.name)) env = outer(env, DenseTensor({{lg.name, 1}}, {cplx(1, 0)}));
  require(env.rank() == t.rank(), "numeric-failure", "environment carries extra legs");
  return env;
}

// All environments in one pass: prefix blobs fold conj(ref) with tensors in
// block order, suffixes fold the bare tail of the network; the cofactor at i
// is prefix[i-1] x suffix[i+1]. Tail tensors supplied by `tensor_at` so
// sweeps can see already-updated blocks.
namespace {

std::vector<std::pair<int, int>> block_order(const HoloNet& n) {
  std::vector<std::pair<int, int>> order;
  for (int c = 1; c <= n.L(); ++c)
    for (int h = 1; h <= n.height(c); ++h) order.push_back({c, h});
  return order;
}

std::vector<DenseTensor> tail_suffixes(const HoloNet& n,
                                       const std::vector<std::pair<int, int>>& order) {
  std::vector<DenseTensor> suffix(order.size() + 1, DenseTensor::scalar(1.0));
  for (std::int64_t i = static_cast<std::int64_t>(order.size()) - 1; i >= 0; --i)
    suffix[i] = contract_common(globalized(n, order[i].first, order[i].second), suffix[i + 1]);
  return suffix;
}

DenseTensor env_from_parts(const HoloNet& n, const DenseTensor& prefix, const DenseTensor& suffix,
                           int c, int h) {
  DenseTensor blob = contract_common(prefix, suffix);
  const DenseTensor& t = n.at(c, h);
  DenseTensor env = blob.conjugated();
  std::vector<std::pair<std::string, std::string>> rn;
  for (const auto& lg : t.legs()) {
    const std::string global = bond_name(c, h, lg.name);
    if (env.has_leg(global))
      rn.push_back({global, lg.name});
    else
      require(lg.dim == 1, "numeric-failure", "environment missing leg " + lg.name);
  }
  env = env.renamed(rn);
  for (const auto& lg : t.legs())
    if (!env.has_leg(lg.name)) env = outer(env, DenseTensor({{lg.name, 1}}, {cplx(1, 0)}));
  return env;
}

std::vector<DenseTensor> all_environments(const HoloNet& n, const StateVector& reference) {
  const auto order = block_order(n);
  const auto suffix = tail_suffixes(n, order);
  std::vector<DenseTensor> envs;
  envs.reserve(order.size());
  DenseTensor prefix = reference.as_tensor().conjugated();
  for (std::size_t i = 0; i < order.size(); ++i) {
    envs.push_back(env_from_parts(n, prefix, suffix[i + 1], order[i].first, order[i].second));
    prefix = contract_common(prefix, globalized(n, order[i].first, order[i].second));
  }
  return envs;
}

}  // namespace

// --- parametrization ---------------------------------------------------------

NetworkParametrization NetworkParametrization::from(const HoloNet& n) {
  NetworkParametrization par;
  par.template_ = n;
  for (int c = 1; c <= n.L(); ++c)
    for (int h = 1; h <= n.height(c); ++h) par.ids_.push_back({c, h});
  return par;
}

ManifoldPoint NetworkParametrization::to_point(const HoloNet& n) const {
  ManifoldPoint p;
  for (const auto& id : ids_) {
    const DenseTensor& t = n.at(id.col, id.row);
    const bool center = id.col == n.surface() && id.row == n.center_row;
    if (center) {
      std::vector<LegGroup> all{{"v", {}}};
      for (const auto& lg : t.legs()) all[0].members.push_back(lg.name);
      p.blocks.push_back({ManifoldKind::sphere, group_legs(t, all)});
    } else {
      const auto out = n.out_legs(id.col, id.row);
      LegGroup gin{"in", {}}, gout{"out", {}};
      for (const auto& lg : t.legs()) {
        if (std::find(out.begin(), out.end(), lg.name) != out.end())
          gout.members.push_back(lg.name);
        else
          gin.members.push_back(lg.name);
      }
      p.blocks.push_back({ManifoldKind::stiefel, group_legs(t, {gin, gout})});
    }
  }
  return p;
}

HoloNet NetworkParametrization::to_network(const ManifoldPoint& p) const {
  HoloNet n = template_;
  require(p.blocks.size() == ids_.size(), "dimension-mismatch", "point/block count mismatch");
  for (std::size_t i = 0; i < ids_.size(); ++i) {
    const auto& id = ids_[i];
    DenseTensor& t = n.at(id.col, id.row);
    const bool center = id.col == n.surface() && id.row == n.center_row;
    std::vector<std::string> order;
    for (const auto& lg : t.legs()) order.push_back(lg.name);
    if (center) {
      std::vector<Leg> parts = t.legs();
      t = split_leg(p.blocks[i].value, "v", parts).transposed(order);
    } else {
      const auto out = n.out_legs(id.col, id.row);
      std::vector<Leg> in_parts, out_parts;
      for (const auto& lg : t.legs()) {
        if (std::find(out.begin(), out.end(), lg.name) != out.end())
          out_parts.push_back(lg);
        else
          in_parts.push_back(lg);
      }
      DenseTensor w = p.blocks[i].value;
      t = split_leg(split_leg(w, "in", in_parts), "out", out_parts).transposed(order);
    }
  }
  return n;
}

// --- alternating sweeps -------------------------------------------------------

AlternatingNetReport alternating_sweep_network(HoloNet& n, const StateVector& reference,
                                               int max_sweeps, double ftol) {
  AlternatingNetReport rep;
  double prev = 2.0 - 2.0 * network_overlap(reference, n).real();
  rep.cost = prev;
  const auto order = block_order(n);
  for (int sweep = 0; sweep < max_sweeps; ++sweep) {
    const auto suffix = tail_suffixes(n, order);
    DenseTensor prefix = reference.as_tensor().conjugated();
    for (std::size_t bi = 0; bi < order.size(); ++bi) {
      const auto [c, h] = order[bi];
      {
        DenseTensor env = env_from_parts(n, prefix, suffix[bi + 1], c, h);
        DenseTensor& t = n.at(c, h);
        std::vector<std::string> legorder;
        for (const auto& lg : t.legs()) legorder.push_back(lg.name);
        if (c == n.surface() && h == n.center_row) {
          if (env.norm() == 0) {
            prefix = contract_common(prefix, globalized(n, c, h));
            continue;  // degenerate: keep the old center
          }
          t = sphere_update(env).transposed(legorder);
        } else {
          const auto out = n.out_legs(c, h);
          LegGroup gin{"in", {}}, gout{"out", {}};
          std::vector<Leg> in_parts, out_parts;
          for (const auto& lg : t.legs()) {
            if (std::find(out.begin(), out.end(), lg.name) != out.end()) {
              gout.members.push_back(lg.name);
              out_parts.push_back(lg);
            } else {
              gin.members.push_back(lg.name);
              in_parts.push_back(lg);
            }
          }
          DenseTensor w = procrustes_update(group_legs(env, {gin, gout}));
          t = split_leg(split_leg(w, "in", in_parts), "out", out_parts).transposed(legorder);
        }
      }
      prefix = contract_common(prefix, globalized(n, c, h));
    }
    const double cost = 2.0 - 2.0 * network_overlap(reference, n).real();
    require(cost <= prev + 1e-9, "numeric-failure", "alternating sweep increased the cost");
    rep.sweeps = sweep + 1;
    rep.cost = cost;
    if (prev - cost < ftol) {
      rep.converged = true;
      break;
    }
    prev = cost;
  }
  return rep;
}

// --- best-of-restarts fit -----------------------------------------------------

namespace {

double fit_one(const StateVector& reference, HoloNet& net, const FitOptions& opts, double tol) {
  alternating_sweep_network(net, reference, opts.alternating_sweeps);

  NetworkParametrization par = NetworkParametrization::from(net);
  auto cost_fn = [&](const ManifoldPoint& p) {
    return 2.0 - 2.0 * network_overlap(reference, par.to_network(p)).real();
  };
  auto grad_fn = [&](const ManifoldPoint& p) {
    HoloNet cur = par.to_network(p);
    TangentVector g;
    const auto envs = all_environments(cur, reference);
    for (std::size_t bi = 0; bi < par.blocks().size(); ++bi) {
      const auto& id = par.blocks()[bi];
      const DenseTensor& env = envs[bi];
      const bool center = id.col == cur.surface() && id.row == cur.center_row;
      const DenseTensor& t = cur.at(id.col, id.row);
      if (center) {
        std::vector<LegGroup> all{{"v", {}}};
        for (const auto& lg : t.legs()) all[0].members.push_back(lg.name);
        g.push_back(group_legs(env, all).scaled(-2.0));
      } else {
        const auto out = cur.out_legs(id.col, id.row);
        LegGroup gin{"in", {}}, gout{"out", {}};
        for (const auto& lg : t.legs()) {
          if (std::find(out.begin(), out.end(), lg.name) != out.end())
            gout.members.push_back(lg.name);
          else
            gin.members.push_back(lg.name);
        }
        g.push_back(group_legs(env, {gin, gout}).scaled(-2.0));
      }
    }
    return g;
  };

  ManifoldPoint point = par.to_point(net);
  double cost = cost_fn(point);
  for (int chunk = 0; chunk < opts.cg_max_chunks; ++chunk) {
    OptimizerOptions copts;
    copts.max_iters = opts.cg_iters_per_chunk;
    copts.gtol = opts.cg_gtol;
    auto [next, rep] = riemannian_cg(cost_fn, grad_fn, point, copts);
    point = next;
    const double improved = cost - rep.final_cost;
    cost = rep.final_cost;
    if (cost < tol || rep.converged || rep.gradient_norm < opts.cg_gtol) break;
    if (improved < opts.stall_ftol) break;  // abandon a stalled restart
  }
  net = par.to_network(point);
  return 2.0 - 2.0 * network_overlap(reference, net).real();
}

}  // namespace

std::pair<HoloNet, OptimizerReport> fit_network_to_state_warm(
    const StateVector& reference, const NetLayout& layout, int restarts, double tol, Rng& rng,
    const std::vector<HoloNet>& warm_starts, const FitOptions& opts) {
  require(std::abs(reference.norm() - 1.0) < 1e-9, "invalid-dims",
          "reference must be normalized");
  OptimizerReport rep;
  HoloNet best;
  double best_cost = std::numeric_limits<double>::infinity();
  int index = 0;
  auto consider = [&](HoloNet net, int idx) {
    const double cost = fit_one(reference, net, opts, tol);
    // Ties within 1e-14 keep the earlier restart index.
    if (index == 0 || cost < best_cost - 1e-14) {
      best_cost = cost;
      best = std::move(net);
      rep.restart_index = idx;
    }
    ++index;
    return cost;
  };

  for (std::size_t w = 0; w < warm_starts.size(); ++w) {
    if (consider(warm_starts[w], -static_cast<int>(w) - 1) < tol) break;
  }
  if (best_cost >= tol) {
    for (int r = 0; r < restarts; ++r) {
      Rng child = rng.split(r);
      HoloNet net = random_network(layout, child);
      if (consider(std::move(net), r) < tol) break;
    }
  }
  rep.final_cost = best_cost;
  rep.iterations = index;
  rep.converged = best_cost < tol;
  return {best, rep};
}

std::pair<HoloNet, OptimizerReport> fit_network_to_state(const StateVector& reference,
                                                         const NetLayout& layout, int restarts,
                                                         double tol, Rng& rng,
                                                         const FitOptions& opts) {
  return fit_network_to_state_warm(reference, layout, restarts, tol, rng, {}, opts);
}

}  // namespace holonet
