#include "holonet/holo_net.hpp"

#include <Eigen/Dense>
#include <Eigen/QR>

#include <algorithm>
#include <cmath>

namespace holonet {

void NetLayout::check() const {
  require(L >= 2, "invalid-dims", "layout needs L >= 2");
  require(surface_col >= 1 && surface_col <= L, "invalid-surface", "surface column out of range");
  require(static_cast<int>(column_heights.size()) == L, "invalid-dims", "column_heights size");
  for (int h : column_heights) require(h >= 1, "invalid-dims", "column heights must be >= 1");
  require(d >= 2 && chi >= 1, "invalid-dims", "need d >= 2 and chi >= 1");
}

NetLayout build_layout(int L, int surface_col, std::int64_t chi, std::int64_t d) {
  require(L >= 2, "invalid-dims", "build_layout needs L >= 2");
  require(surface_col >= 1 && surface_col <= L, "invalid-surface",
          "surface column must lie in [1, L]");
  NetLayout lay;
  lay.L = L;
  lay.surface_col = surface_col;
  lay.d = d;
  lay.chi = chi;
  lay.canonical = true;
  lay.column_heights.resize(L);
  for (int c = 1; c <= L; ++c) {
    if (c < surface_col)
      lay.column_heights[c - 1] = c;  // left wing: height grows toward the surface
    else if (c > surface_col)
      lay.column_heights[c - 1] = L - c + 1;
    else
      lay.column_heights[c - 1] = std::max({1, surface_col - 1, L - surface_col});
  }
  lay.check();
  return lay;
}

double HoloNet::norm() const { return at(surface(), center_row).norm(); }

void HoloNet::normalize_center() {
  DenseTensor& c = at(surface(), center_row);
  const double n = c.norm();
  require(n > 0, "zero-tensor", "center tensor has zero norm");
  c = c.scaled(1.0 / n);
}

std::vector<std::string> HoloNet::in_legs(int col, int row) const {
  const bool phys = row == 1;
  if (col > surface()) {
    std::vector<std::string> in = {"r", "b"};
    if (phys) in.push_back("p");
    return in;
  }
  if (col < surface()) {
    std::vector<std::string> in = {"l", "b"};
    if (phys) in.push_back("p");
    return in;
  }
  if (row < center_row) {
    std::vector<std::string> in = {"l", "r", "b"};
    if (phys) in.push_back("p");
    return in;
  }
  if (row > center_row) return {"l", "r", "a"};
  std::vector<std::string> in = {"l", "r", "b", "a"};
  if (phys) in.push_back("p");
  return in;  // center: everything points in
}

std::vector<std::string> HoloNet::out_legs(int col, int row) const {
  if (col > surface()) return {"l", "a"};
  if (col < surface()) return {"r", "a"};
  if (row < center_row) return {"a"};
  if (row > center_row) return {"b"};
  return {};
}

std::vector<ValidationIssue> validate(const HoloNet& n, double tol) {
  std::vector<ValidationIssue> issues;
  auto flag = [&](int c, int h, const std::string& kind, double res) {
    issues.push_back({c, h, kind, res});
  };
  const auto& lay = n.layout;
  if (lay.L != static_cast<int>(n.cols.size())) {
    flag(0, 0, "column-count-mismatch", 0);
    return issues;
  }

  for (int c = 1; c <= n.L(); ++c) {
    if (n.height(c) != lay.height(c)) flag(c, 0, "height-mismatch", 0);
    for (int h = 1; h <= n.height(c); ++h) {
      const DenseTensor& t = n.at(c, h);
      for (const char* leg : {"l", "r", "b", "a"})
        if (!t.has_leg(leg)) flag(c, h, std::string("missing-leg-") + leg, 0);
      if (h == 1 && !t.has_leg("p")) flag(c, h, "missing-physical-leg", 0);
      if (h == 1 && t.has_leg("p") && t.dim("p") != lay.d) flag(c, h, "physical-dim", 0);
      if (h > 1 && t.has_leg("p")) flag(c, h, "unexpected-physical-leg", 0);
      if (issues.size() > 0 && issues.back().col == c && issues.back().row == h &&
          issues.back().kind.rfind("missing", 0) == 0)
        continue;

      // Bond consistency with neighbors; dim-1 legs toward absent neighbors.
      if (n.has(c + 1, h)) {
        if (t.dim("r") != n.at(c + 1, h).dim("l")) flag(c, h, "bond-mismatch-right", 0);
      } else if (t.dim("r") != 1) {
        flag(c, h, "dangling-right-bond", 0);
      }
      if (c == 1 && t.dim("l") != 1) flag(c, h, "dangling-left-bond", 0);
      if (n.has(c, h + 1)) {
        if (t.dim("a") != n.at(c, h + 1).dim("b")) flag(c, h, "bond-mismatch-above", 0);
      } else if (t.dim("a") != 1) {
        flag(c, h, "dangling-above-bond", 0);
      }
      if (h == 1 && t.dim("b") != 1) flag(c, h, "dangling-below-bond", 0);

      if (c == lay.surface_col && h < n.height(c)) {
        if (t.dim("a") > lay.chi) flag(c, h, "surface-bond-exceeds-chi", double(t.dim("a")));
      }
      if (lay.canonical && c != lay.surface_col) {
        for (const char* leg : {"l", "r", "b", "a"})
          if (t.dim(leg) > lay.d) flag(c, h, std::string("wing-bond-exceeds-d-") + leg, 0);
      }

      // Isometry / center-norm checks.
      if (c == lay.surface_col && h == n.center_row) {
        const double res = std::abs(t.norm() - 1.0);
        if (res > tol) flag(c, h, "center-not-normalized", res);
      } else {
        const auto out = n.out_legs(c, h);
        std::int64_t din = 1, dout = 1;
        for (const auto& lg : t.legs()) {
          const bool is_out = std::find(out.begin(), out.end(), lg.name) != out.end();
          (is_out ? dout : din) *= lg.dim;
        }
        if (dout > din) {
          flag(c, h, "isometry-orientation-infeasible", double(dout));
        } else {
          const double res = isometry_residual(t, out);
          if (res > tol) flag(c, h, "isometry-violation", res);
        }
      }
    }
  }
  if (n.center_row < 1 || n.center_row > n.height(lay.surface_col))
    flag(lay.surface_col, n.center_row, "center-out-of-range", 0);
  return issues;
}

void require_valid(const HoloNet& n, double tol) {
  auto issues = validate(n, tol);
  if (!issues.empty()) {
    std::string what = "network invalid:";
    for (const auto& i : issues)
      what += " [" + std::to_string(i.col) + "," + std::to_string(i.row) + "] " + i.kind + " (" +
              std::to_string(i.residual) + ")";
    raise("invalid-network", what);
  }
}

namespace {

// Surface vertical bond dims, feasible for any center row: capacity from
// below and above, capped at chi.
std::vector<std::int64_t> surface_bond_dims(const NetLayout& lay) {
  const int s = lay.surface_col;
  const int H = lay.height(s);
  auto lr = [&](int h) {
    std::int64_t dl = (s > 1 && lay.height(s - 1) >= h) ? lay.d : 1;
    std::int64_t dr = (s < lay.L && lay.height(s + 1) >= h) ? lay.d : 1;
    return dl * dr;
  };
  std::vector<std::int64_t> below(H + 1, 1), above(H + 1, 1), v(H + 1, 1);
  // below[h]: capacity of the bond between rows h and h+1 from underneath.
  below[0] = 1;
  for (int h = 1; h < H; ++h)
    below[h] = std::min(lay.chi, below[h - 1] * lr(h) * (h == 1 ? lay.d : 1));
  above[H] = 1;
  for (int h = H - 1; h >= 1; --h) above[h] = std::min(lay.chi, above[h + 1] * lr(h + 1));
  for (int h = 1; h < H; ++h) v[h] = std::min(below[h], above[h]);
  return v;  // v[h] = dim of bond (row h)-(row h+1); v[0], v[H] = 1
}

}  // namespace

HoloNet random_network(const NetLayout& layout, Rng& rng, int center_row) {
  layout.check();
  require(center_row >= 1 && center_row <= layout.height(layout.surface_col), "row-out-of-range",
          "center row outside the surface");
  HoloNet n;
  n.layout = layout;
  n.center_row = center_row;
  n.cols.resize(layout.L);
  const int s = layout.surface_col;
  const std::int64_t d = layout.d;
  const auto v = surface_bond_dims(layout);

  auto exists = [&](int cc, int hh) {
    return cc >= 1 && cc <= layout.L && hh >= 1 && hh <= layout.height(cc);
  };
  for (int c = 1; c <= layout.L; ++c) {
    const int H = layout.height(c);
    n.cols[c - 1].reserve(H);
    for (int h = 1; h <= H; ++h) {
      const std::int64_t dl = exists(c - 1, h) ? d : 1;
      const std::int64_t dr = exists(c + 1, h) ? d : 1;
      const std::int64_t db = (c == s) ? v[h - 1] : (h > 1 ? d : 1);
      const std::int64_t da = (c == s) ? v[h] : (exists(c, h + 1) ? d : 1);

      std::vector<Leg> legs = {{"l", dl}, {"r", dr}, {"b", db}, {"a", da}};
      if (h == 1) legs.push_back({"p", d});
      DenseTensor t(legs);

      if (c == s && h == n.center_row) {
        for (auto& x : t.data()) x = rng.gaussian_complex();
        const double nn = t.norm();
        t = t.scaled(1.0 / nn);
      } else {
        std::vector<std::string> out = [&] {
          if (c > s) return std::vector<std::string>{"l", "a"};
          if (c < s) return std::vector<std::string>{"r", "a"};
          if (h < n.center_row) return std::vector<std::string>{"a"};
          return std::vector<std::string>{"b"};
        }();
        std::vector<std::string> in;
        std::int64_t din = 1, dout = 1;
        for (const auto& lg : t.legs()) {
          if (std::find(out.begin(), out.end(), lg.name) != out.end())
            dout *= lg.dim;
          else {
            in.push_back(lg.name);
            din *= lg.dim;
          }
        }
        DenseTensor w = random_isometry(din, dout, rng);
        // Unfold the matrix into the tensor's legs: rows run over IN legs in
        // tensor leg order, columns over OUT legs in tensor leg order.
        std::vector<Leg> in_parts, out_parts;
        for (const auto& lg : t.legs())
          if (std::find(out.begin(), out.end(), lg.name) != out.end())
            out_parts.push_back(lg);
          else
            in_parts.push_back(lg);
        DenseTensor unf = split_leg(split_leg(w, "in", in_parts), "out", out_parts);
        std::vector<std::string> order;
        for (const auto& lg : t.legs()) order.push_back(lg.name);
        t = unf.transposed(order);
      }
      n.cols[c - 1].push_back(std::move(t));
    }
  }
  return n;
}

HoloNet move_center_vertical(const HoloNet& n, int new_row) {
  const int s = n.surface();
  require(new_row >= 1 && new_row <= n.height(s), "row-out-of-range",
          "target center row outside the surface column");
  HoloNet out = n;
  while (out.center_row < new_row) {
    const int c = out.center_row;
    DenseTensor& cur = out.at(s, c);
    std::vector<std::string> rows;
    for (const auto& lg : cur.legs())
      if (lg.name != "a") rows.push_back(lg.name);
    auto [q, r] = qr_decompose(cur, rows, {"a"}, "nb");
    cur = q.renamed({{"nb", "a"}});
    DenseTensor& up = out.at(s, c + 1);
    up = contract(r.renamed({{"a", "dead"}}), up, {{"dead", "b"}}).renamed({{"nb", "b"}});
    out.center_row = c + 1;
  }
  while (out.center_row > new_row) {
    const int c = out.center_row;
    DenseTensor& cur = out.at(s, c);
    std::vector<std::string> rows;
    for (const auto& lg : cur.legs())
      if (lg.name != "b") rows.push_back(lg.name);
    auto [q, r] = qr_decompose(cur, rows, {"b"}, "nb");
    cur = q.renamed({{"nb", "b"}});
    DenseTensor& dn = out.at(s, c - 1);
    dn = contract(r.renamed({{"b", "dead"}}), dn, {{"dead", "a"}}).renamed({{"nb", "a"}});
    out.center_row = c - 1;
  }
  return out;
}

HoloNet mirrored(const HoloNet& n) {
  HoloNet m;
  m.layout = n.layout;
  m.layout.surface_col = n.L() + 1 - n.surface();
  m.center_row = n.center_row;
  m.layout.column_heights.assign(n.layout.column_heights.rbegin(), n.layout.column_heights.rend());
  m.cols.resize(n.L());
  for (int c = 1; c <= n.L(); ++c) {
    m.cols[n.L() - c] = n.cols[c - 1];
    for (auto& t : m.cols[n.L() - c]) t = t.renamed({{"l", "r"}, {"r", "l"}});
  }
  return m;
}

}  // namespace holonet

namespace holonet {

namespace {

DenseTensor zero_pad_leg(const DenseTensor& t, const std::string& leg, std::int64_t new_dim) {
  std::vector<Leg> legs = t.legs();
  const std::int64_t idx = t.leg_index(leg);
  const std::int64_t old_dim = legs[idx].dim;
  legs[idx].dim = new_dim;
  DenseTensor out(legs);
  std::vector<std::int64_t> mi(t.rank(), 0);
  for (std::int64_t lin = 0; lin < t.size(); ++lin) {
    std::int64_t rem = lin;
    for (std::int64_t k = t.rank() - 1; k >= 0; --k) {
      mi[k] = rem % t.legs()[k].dim;
      rem /= t.legs()[k].dim;
    }
    out.at(mi) = t.data()[lin];
  }
  (void)old_dim;
  return out;
}

// Extend an isometry along one OUT leg by orthonormal completion; the new
// slices are orthogonal to the old ones, so a zero-padded partner leaves the
// state untouched.
DenseTensor complete_out_leg(const DenseTensor& t, const std::vector<std::string>& out_legs,
                             const std::string& grow, std::int64_t new_dim) {
  std::vector<Leg> in_parts, out_parts;
  for (const auto& lg : t.legs()) {
    if (std::find(out_legs.begin(), out_legs.end(), lg.name) != out_legs.end())
      out_parts.push_back(lg);
    else
      in_parts.push_back(lg);
  }
  LegGroup gin{"in", {}}, gout{"out", {}};
  for (const auto& lg : in_parts) gin.members.push_back(lg.name);
  for (const auto& lg : out_parts) gout.members.push_back(lg.name);
  DenseTensor m = group_legs(t, {gin, gout});
  const std::int64_t nrows = m.dim("in");
  const std::int64_t mcols = m.dim("out");
  std::int64_t new_cols = 1;
  for (const auto& lg : out_parts) new_cols *= (lg.name == grow ? new_dim : lg.dim);
  require(new_cols <= nrows, "dimension-orientation-invalid",
          "bond padding exceeds the isometry capacity");

  using Mat = Eigen::Matrix<cplx, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
  Eigen::Map<const Mat> w(m.data().data(), nrows, mcols);
  Eigen::HouseholderQR<Mat> qr(w);
  Mat q = qr.householderQ() * Mat::Identity(nrows, new_cols);
  for (std::int64_t i = 0; i < mcols; ++i) {
    cplx d = qr.matrixQR()(i, i);
    if (std::abs(d) > 0) q.col(i) *= d / std::abs(d);
  }

  // Scatter old and completion columns into the grown out-layout.
  std::vector<Leg> grown = out_parts;
  for (auto& lg : grown)
    if (lg.name == grow) lg.dim = new_dim;
  DenseTensor res({{"in", nrows}, {"out", new_cols}});
  Eigen::Map<Mat> rm(res.data().data(), nrows, new_cols);
  std::int64_t spare = mcols;
  // old columns: out index over old dims embeds into grown layout
  std::vector<std::int64_t> oi(out_parts.size(), 0);
  auto grown_index = [&](const std::vector<std::int64_t>& v) {
    std::int64_t idx = 0;
    for (std::size_t k = 0; k < grown.size(); ++k) idx = idx * grown[k].dim + v[k];
    return idx;
  };
  std::vector<bool> used(new_cols, false);
  for (std::int64_t o = 0; o < mcols; ++o) {
    std::int64_t rem = o;
    for (std::int64_t k = static_cast<std::int64_t>(out_parts.size()) - 1; k >= 0; --k) {
      oi[k] = rem % out_parts[k].dim;
      rem /= out_parts[k].dim;
    }
    const std::int64_t gi = grown_index(oi);
    rm.col(gi) = q.col(o);
    used[gi] = true;
  }
  for (std::int64_t gi = 0; gi < new_cols; ++gi)
    if (!used[gi]) rm.col(gi) = q.col(spare++);

  DenseTensor unf = split_leg(split_leg(res, "in", in_parts), "out", grown);
  std::vector<std::string> order;
  for (const auto& lg : t.legs()) order.push_back(lg.name);
  return unf.transposed(order);
}

}  // namespace

HoloNet pad_column_bonds(const HoloNet& n, int col) {
  HoloNet out = n;
  const int H = out.height(col);
  if (H <= 1) return out;
  const std::int64_t cap = (col == out.surface()) ? out.layout.chi : out.layout.d;

  // Feasible bond dims: on the isometric side the out-product may not exceed
  // the in-product; on a receiving side anything up to the rank bound of the
  // remaining legs is useful. Grow to a fixpoint over a few sweeps.
  std::vector<std::int64_t> target(H + 1, 1);
  for (int h = 1; h < H; ++h) target[h] = out.at(col, h).dim("a");
  auto tensor_cap = [&](int h, const std::string& leg) {
    const DenseTensor& t = out.at(col, h);
    const auto outs = out.out_legs(col, h);
    const bool is_out = std::find(outs.begin(), outs.end(), leg) != outs.end();
    std::int64_t in_prod = 1, other_out = 1, all_other = 1;
    for (const auto& lg : t.legs()) {
      std::int64_t dim = lg.dim;
      if (lg.name == "b" && h > 1) dim = target[h - 1];
      if (lg.name == "a" && h < H) dim = target[h];
      if (lg.name == leg) continue;
      all_other *= dim;
      const bool lg_out = std::find(outs.begin(), outs.end(), lg.name) != outs.end();
      if (lg_out)
        other_out *= dim;
      else
        in_prod *= dim;
    }
    return is_out ? in_prod / other_out : all_other;
  };
  for (int pass = 0; pass < 4; ++pass)
    for (int h = 1; h < H; ++h) {
      const std::int64_t want =
          std::min({cap, tensor_cap(h, "a"), tensor_cap(h + 1, "b")});
      target[h] = std::max(target[h], want);
    }

  // Bonds owned by the lower tensor depend on the bond below being grown
  // first (bottom-up); bonds owned by the upper tensor on the bond above
  // (top-down). Two ordered passes cover both orientation segments.
  auto pad_bond = [&](int h, bool want_lower_owner) {
    const std::int64_t cur = out.at(col, h).dim("a");
    if (target[h] == cur) return;
    const auto out_lo = out.out_legs(col, h);
    const bool lower_owns = std::find(out_lo.begin(), out_lo.end(), "a") != out_lo.end();
    if (lower_owns != want_lower_owner) return;
    if (lower_owns) {
      out.at(col, h) = complete_out_leg(out.at(col, h), out_lo, "a", target[h]);
      out.at(col, h + 1) = zero_pad_leg(out.at(col, h + 1), "b", target[h]);
    } else {
      const auto out_up = out.out_legs(col, h + 1);
      require(std::find(out_up.begin(), out_up.end(), "b") != out_up.end(), "numeric-failure",
              "bond has no isometric side to complete");
      out.at(col, h + 1) = complete_out_leg(out.at(col, h + 1), out_up, "b", target[h]);
      out.at(col, h) = zero_pad_leg(out.at(col, h), "a", target[h]);
    }
  };
  for (int h = 1; h < H; ++h) pad_bond(h, true);
  for (int h = H - 1; h >= 1; --h) pad_bond(h, false);
  return out;
}

}  // namespace holonet
