#include <algorithm>
#include <cmath>

#include "holonet/holo_net.hpp"
#include "holonet/manifold.hpp"
#include "holonet/two_column.hpp"

namespace holonet {

namespace {

DenseTensor strip_leg(const DenseTensor& t, const std::string& leg) {
  if (!t.has_leg(leg)) return t;
  require(t.dim(leg) == 1, "dimension-mismatch", "cannot strip non-trivial leg " + leg);
  DenseTensor one({{"x*", 1}}, {cplx(1, 0)});
  return contract(t, one, {{leg, "x*"}});
}

// Contract over every leg name the two tensors share.
DenseTensor contract_common(const DenseTensor& a, const DenseTensor& b) {
  std::vector<std::pair<std::string, std::string>> pairs;
  for (const auto& lg : a.legs())
    if (b.has_leg(lg.name)) pairs.push_back({lg.name, lg.name});
  return contract(a, b, pairs);
}

}  // namespace

StateVector to_statevector(const HoloNet& n) {
  const auto& lay = n.layout;
  double logd = static_cast<double>(lay.L) * std::log2(static_cast<double>(lay.d));
  require(logd <= 20.0 + 1e-9, "size-cap-exceeded", "d^L exceeds the 2^20 statevector cap");

  DenseTensor blob = DenseTensor::scalar(1.0);
  for (int c = 1; c <= lay.L; ++c) {
    for (int h = 1; h <= n.height(c); ++h) {
      DenseTensor t = n.at(c, h);
      if (!n.has(c - 1, h)) t = strip_leg(t, "l");
      if (!n.has(c + 1, h)) t = strip_leg(t, "r");
      if (h == 1) t = strip_leg(t, "b");
      if (h == n.height(c)) t = strip_leg(t, "a");

      std::vector<std::pair<std::string, std::string>> rn;
      if (t.has_leg("l")) rn.push_back({"l", "x" + std::to_string(h)});
      if (t.has_leg("r")) rn.push_back({"r", "nx" + std::to_string(h)});
      if (t.has_leg("b")) rn.push_back({"b", "va"});
      if (t.has_leg("a")) rn.push_back({"a", "nva"});
      if (t.has_leg("p")) rn.push_back({"p", "p" + std::to_string(c)});
      t = t.renamed(rn);

      blob = contract_common(blob, t);
      if (blob.has_leg("nva")) blob = blob.renamed({{"nva", "va"}});
    }
    std::vector<std::pair<std::string, std::string>> back;
    for (const auto& lg : blob.legs())
      if (lg.name.rfind("nx", 0) == 0) back.push_back({lg.name, "x" + lg.name.substr(2)});
    if (!back.empty()) blob = blob.renamed(back);
  }
  return StateVector::from_tensor(blob, lay.L, lay.d);
}

// --- two-column machinery ---------------------------------------------------

namespace {

// Reference tensor of one row, legs renamed to the rung convention.
DenseTensor ref_side_tensor(const DenseTensor& t, int side) {
  std::vector<std::pair<std::string, std::string>> rn;
  if (side == 0) {
    rn = {{"l", "eL"}, {"r", "mm"}, {"b", "rv0"}, {"a", "nrv0"}};
  } else {
    rn = {{"l", "mm"}, {"r", "eR"}, {"b", "rv1"}, {"a", "nrv1"}};
  }
  if (t.has_leg("p")) rn.push_back({"p", side == 0 ? "p0" : "p1"});
  return t.renamed(rn);
}

DenseTensor cand_side_tensor(const DenseTensor& t, int side) {
  std::vector<std::pair<std::string, std::string>> rn;
  if (side == 0) {
    rn = {{"l", "eL"}, {"r", "m"}, {"b", "cv0"}, {"a", "ncv0"}};
  } else {
    rn = {{"l", "m"}, {"r", "eR"}, {"b", "cv1"}, {"a", "ncv1"}};
  }
  if (t.has_leg("p")) rn.push_back({"p", side == 0 ? "p0" : "p1"});
  return t.renamed(rn).conjugated();
}

DenseTensor unit_env(const std::vector<std::string>& names) {
  DenseTensor e = DenseTensor::scalar(1.0);
  for (const auto& nm : names) e = outer(e, DenseTensor({{nm, 1}}, {cplx(1, 0)}));
  return e;
}

}  // namespace

std::vector<DenseTensor> make_ref_rungs(const std::vector<std::optional<DenseTensor>>& left,
                                        const std::vector<std::optional<DenseTensor>>& right,
                                        const DenseTensor* gate) {
  const int rows = static_cast<int>(std::max(left.size(), right.size()));
  std::vector<DenseTensor> rungs;
  rungs.reserve(rows);
  for (int h = 0; h < rows; ++h) {
    const bool hl = h < static_cast<int>(left.size()) && left[h].has_value();
    const bool hr = h < static_cast<int>(right.size()) && right[h].has_value();
    require(hl || hr, "invalid-dims", "empty rung");
    DenseTensor rung = DenseTensor::scalar(1.0);
    if (hl) rung = contract_common(rung, ref_side_tensor(*left[h], 0));
    if (hr) rung = contract_common(rung, ref_side_tensor(*right[h], 1));
    if (hl && !hr) rung = strip_leg(rung, "mm");
    if (hr && !hl) rung = strip_leg(rung, "mm");
    if (h == 0 && gate != nullptr) {
      rung = contract(*gate, rung, {{"in0", "p0"}, {"in1", "p1"}});
      rung = rung.renamed({{"out0", "p0"}, {"out1", "p1"}});
    }
    rungs.push_back(std::move(rung));
  }
  return rungs;
}

namespace {

// One bottom-up transfer step: env over (cv0, cv1, rv0, rv1).
DenseTensor transfer_row(const DenseTensor& env, const TwoColumnCandidate& cand,
                         const std::vector<DenseTensor>& ref, int h) {
  DenseTensor out = env;
  const bool hl = h < static_cast<int>(cand.left.size()) && cand.left[h].has_value();
  const bool hr = h < static_cast<int>(cand.right.size()) && cand.right[h].has_value();
  if (hl) out = contract_common(out, cand_side_tensor(cand.left[h]->t, 0));
  if (hr) out = contract_common(out, cand_side_tensor(cand.right[h]->t, 1));
  if (hl && !hr) out = strip_leg(out, "m");
  if (!hl && hr) out = strip_leg(out, "m");
  out = contract_common(out, ref[h]);
  for (const char* nm : {"eL", "eR", "p0", "p1", "m", "mm"}) out = strip_leg(out, nm);
  std::vector<std::pair<std::string, std::string>> back;
  for (const auto& lg : out.legs())
    if (lg.name.rfind("n", 0) == 0) back.push_back({lg.name, lg.name.substr(1)});
  if (!back.empty()) out = out.renamed(back);
  return out;
}

// Top-down transfer: env over (tcv0, tcv1, trv0, trv1) facing downward.
DenseTensor transfer_row_down(const DenseTensor& env, const TwoColumnCandidate& cand,
                              const std::vector<DenseTensor>& ref, int h) {
  DenseTensor out = env;
  const bool hl = h < static_cast<int>(cand.left.size()) && cand.left[h].has_value();
  const bool hr = h < static_cast<int>(cand.right.size()) && cand.right[h].has_value();
  auto flip = [](DenseTensor t, int side) {
    std::vector<std::pair<std::string, std::string>> rn;
    const std::string cv = side == 0 ? "cv0" : "cv1";
    if (t.has_leg(cv)) rn.push_back({cv, "n-t" + cv});
    const std::string ncv = side == 0 ? "ncv0" : "ncv1";
    if (t.has_leg(ncv)) rn.push_back({ncv, "t" + cv});
    return t.renamed(rn);
  };
  if (hl) out = contract_common(out, flip(cand_side_tensor(cand.left[h]->t, 0), 0));
  if (hr) out = contract_common(out, flip(cand_side_tensor(cand.right[h]->t, 1), 1));
  if (hl != hr) out = strip_leg(out, "m");
  DenseTensor r = ref[h];
  std::vector<std::pair<std::string, std::string>> rn;
  if (r.has_leg("rv0")) rn.push_back({"rv0", "n-trv0"});
  if (r.has_leg("nrv0")) rn.push_back({"nrv0", "trv0"});
  if (r.has_leg("rv1")) rn.push_back({"rv1", "n-trv1"});
  if (r.has_leg("nrv1")) rn.push_back({"nrv1", "trv1"});
  out = contract_common(out, r.renamed(rn));
  for (const char* nm : {"eL", "eR", "p0", "p1", "m", "mm"}) out = strip_leg(out, nm);
  std::vector<std::pair<std::string, std::string>> back;
  for (const auto& lg : out.legs())
    if (lg.name.rfind("n-t", 0) == 0) back.push_back({lg.name, lg.name.substr(2)});
  if (!back.empty()) out = out.renamed(back);
  return out;
}

}  // namespace

cplx two_column_overlap(const TwoColumnCandidate& cand, const std::vector<DenseTensor>& ref) {
  DenseTensor env = unit_env({"cv0", "cv1", "rv0", "rv1"});
  const int rows = static_cast<int>(ref.size());
  for (int h = 0; h < rows; ++h) env = transfer_row(env, cand, ref, h);
  for (const char* nm : {"cv0", "cv1", "rv0", "rv1"})
    if (env.has_leg(nm)) env = strip_leg(env, nm);
  require(env.rank() == 0, "numeric-failure", "two-column overlap left open legs");
  return env.data()[0];
}

DenseTensor two_column_environment(const TwoColumnCandidate& cand,
                                   const std::vector<DenseTensor>& ref, int side, int row) {
  const int rows = static_cast<int>(ref.size());
  DenseTensor bottom = unit_env({"cv0", "cv1", "rv0", "rv1"});
  for (int h = 0; h < row; ++h) bottom = transfer_row(bottom, cand, ref, h);
  DenseTensor top = unit_env({"tcv0", "tcv1", "trv0", "trv1"});
  for (int h = rows - 1; h > row; --h) top = transfer_row_down(top, cand, ref, h);

  // Assemble the cofactor at `row`: everything except the target tensor.
  DenseTensor acc = bottom;
  const int other = 1 - side;
  const bool has_other = other == 0
                             ? (row < static_cast<int>(cand.left.size()) && cand.left[row])
                             : (row < static_cast<int>(cand.right.size()) && cand.right[row]);
  if (has_other) {
    const auto& slot = other == 0 ? *cand.left[row] : *cand.right[row];
    DenseTensor o = cand_side_tensor(slot.t, other);
    o = o.renamed({{other == 0 ? "ncv0" : "ncv1", other == 0 ? "tcv0" : "tcv1"}});
    acc = contract_common(acc, o);
  } else {
    acc = strip_leg(strip_leg(acc, other == 0 ? "cv0" : "cv1"), "m");
    // top side of the absent column is trivial as well
  }
  DenseTensor r = ref[row];
  r = r.renamed([&] {
    std::vector<std::pair<std::string, std::string>> rn;
    if (r.has_leg("nrv0")) rn.push_back({"nrv0", "trv0"});
    if (r.has_leg("nrv1")) rn.push_back({"nrv1", "trv1"});
    return rn;
  }());
  acc = contract_common(acc, r);
  acc = contract_common(acc, top);

  // Strip bonds that never met a partner (structurally trivial), then rename
  // the target's open legs to tensor conventions and pad missing dim-1 legs.
  for (const char* nm : {side == 0 ? "eR" : "eL", "p1", "p0", "mm"}) {
    if ((side == 0 && std::string(nm) == "p0") || (side == 1 && std::string(nm) == "p1")) continue;
    acc = strip_leg(acc, nm);
  }
  std::vector<std::pair<std::string, std::string>> rn;
  const std::string cv = side == 0 ? "cv0" : "cv1";
  const std::string tcv = side == 0 ? "tcv0" : "tcv1";
  if (acc.has_leg(cv)) rn.push_back({cv, "b"});
  if (acc.has_leg(tcv)) rn.push_back({tcv, "a"});
  if (acc.has_leg("eL") && side == 0) rn.push_back({"eL", "l"});
  if (acc.has_leg("eR") && side == 1) rn.push_back({"eR", "r"});
  if (acc.has_leg("m")) rn.push_back({"m", side == 0 ? "r" : "l"});
  if (acc.has_leg("p0") && side == 0) rn.push_back({"p0", "p"});
  if (acc.has_leg("p1") && side == 1) rn.push_back({"p1", "p"});
  acc = acc.renamed(rn);

  const auto& target = side == 0 ? cand.left[row]->t : cand.right[row]->t;
  for (const auto& lg : target.legs()) {
    if (acc.has_leg(lg.name)) continue;
    require(lg.dim == 1, "numeric-failure", "environment missing non-trivial leg " + lg.name);
    acc = outer(acc, DenseTensor({{lg.name, 1}}, {cplx(1, 0)}));
  }
  for (const char* nm : {"cv1", "cv0", "tcv1", "tcv0", "rv0", "rv1", "trv0", "trv1"})
    acc = strip_leg(acc, nm);
  return acc;
}

AlternatingReport alternating_two_column(TwoColumnCandidate& cand,
                                         const std::vector<DenseTensor>& ref, int max_sweeps,
                                         double ftol) {
  AlternatingReport rep;
  double prev_cost = 2.0 - 2.0 * two_column_overlap(cand, ref).real();
  rep.cost = prev_cost;
  const int rows = static_cast<int>(ref.size());

  for (int sweep = 0; sweep < max_sweeps; ++sweep) {
    for (int h = 0; h < rows; ++h) {
      for (int side = 0; side < 2; ++side) {
        auto& col = side == 0 ? cand.left : cand.right;
        if (h >= static_cast<int>(col.size()) || !col[h]) continue;
        TwoColumnSlot& slot = *col[h];
        DenseTensor env = two_column_environment(cand, ref, side, h);
        if (slot.is_center) {
          slot.t = sphere_update(env).transposed([&] {
            std::vector<std::string> order;
            for (const auto& lg : slot.t.legs()) order.push_back(lg.name);
            return order;
          }());
        } else {
          // Procrustes over (IN x OUT) of this tensor's isometry orientation.
          std::vector<LegGroup> in_group{{"in", {}}}, out_group{{"out", {}}};
          std::vector<Leg> in_parts, out_parts;
          for (const auto& lg : slot.t.legs()) {
            const bool is_out =
                std::find(slot.out.begin(), slot.out.end(), lg.name) != slot.out.end();
            if (is_out) {
              out_group[0].members.push_back(lg.name);
              out_parts.push_back(lg);
            } else {
              in_group[0].members.push_back(lg.name);
              in_parts.push_back(lg);
            }
          }
          std::vector<LegGroup> both = {in_group[0], out_group[0]};
          DenseTensor emat = group_legs(env, both);
          DenseTensor w = procrustes_update(emat);
          DenseTensor unf = split_leg(split_leg(w, "in", in_parts), "out", out_parts);
          slot.t = unf.transposed([&] {
            std::vector<std::string> order;
            for (const auto& lg : slot.t.legs()) order.push_back(lg.name);
            return order;
          }());
        }
      }
    }
    const double cost = 2.0 - 2.0 * two_column_overlap(cand, ref).real();
    require(cost <= prev_cost + 1e-10, "numeric-failure",
            "alternating update increased the two-column cost");
    rep.sweeps = sweep + 1;
    rep.cost = cost;
    if (prev_cost - cost < ftol) {
      rep.converged = true;
      break;
    }
    prev_cost = cost;
  }
  return rep;
}

std::vector<std::optional<DenseTensor>> column_tensors(const HoloNet& n, int c) {
  std::vector<std::optional<DenseTensor>> col;
  for (int h = 1; h <= n.height(c); ++h) col.push_back(n.at(c, h));
  return col;
}

TwoColumnCandidate candidate_from_columns(const HoloNet& n, int c0) {
  TwoColumnCandidate cand;
  for (int side = 0; side < 2; ++side) {
    const int c = c0 + side;
    auto& col = side == 0 ? cand.left : cand.right;
    for (int h = 1; h <= n.height(c); ++h) {
      TwoColumnSlot slot;
      slot.t = n.at(c, h);
      slot.out = n.out_legs(c, h);
      slot.is_center = (c == n.surface() && h == n.center_row);
      col.push_back(std::move(slot));
    }
  }
  return cand;
}

void write_candidate(HoloNet& n, int c0, const TwoColumnCandidate& cand) {
  for (int side = 0; side < 2; ++side) {
    const int c = c0 + side;
    const auto& col = side == 0 ? cand.left : cand.right;
    require(static_cast<int>(col.size()) == n.height(c), "dimension-mismatch",
            "candidate height mismatch");
    for (int h = 1; h <= n.height(c); ++h) {
      require(col[h - 1].has_value(), "dimension-mismatch", "candidate slot missing");
      n.at(c, h) = col[h - 1]->t;
    }
  }
}

// --- local expectation values ------------------------------------------------

cplx expectation_two_site(const HoloNet& n, const DenseTensor& op, int i) {
  require(i >= 1 && i + 1 <= n.L(), "index-out-of-range", "operator bond out of range");
  require(n.surface() == i || n.surface() == i + 1, "surface-misplaced",
          "the orthogonality surface must sit on one of the operator sites");
  TwoColumnCandidate cand = candidate_from_columns(n, i);
  auto rungs = make_ref_rungs(column_tensors(n, i), column_tensors(n, i + 1), &op);
  const cplx val = two_column_overlap(cand, rungs);
  const double nn = n.norm();
  return val / (nn * nn);
}

// --- midpoint Renyi-2 ---------------------------------------------------------

double renyi2_midpoint(const HoloNet& n) {
  const int m = n.L() / 2;
  const int s = n.surface();
  require(s == m || s == m + 1, "surface-not-at-midpoint",
          "surface must be at floor(L/2) or floor(L/2)+1");
  const bool cut_right = (s == m);  // cut between columns m and m+1

  DenseTensor env = unit_env({"v1", "v2", "v3", "v4"});
  for (int h = 1; h <= n.height(s); ++h) {
    const DenseTensor& t = n.at(s, h);
    const bool phys = t.has_leg("p");
    auto ren = [&](int copy, const char* pname) {
      std::vector<std::pair<std::string, std::string>> rn = {
          {"l", copy == 1 || copy == 4 ? "lA" : "lB"},
          {"r", copy == 1 || copy == 2 ? "rA" : "rB"},
          {"b", "v" + std::to_string(copy)},
          {"a", "nv" + std::to_string(copy)}};
      if (phys) rn.push_back({"p", pname});
      return rn;
    };
    // copies 1, 3 are kets; 2, 4 are bras.
    env = contract_common(env, t.renamed(ren(1, "pA")));
    env = contract_common(env, t.conjugated().renamed(ren(2, cut_right ? "pB" : "pA")));
    env = contract_common(env, t.renamed(ren(3, cut_right ? "pB" : "pC")));
    env = contract_common(env, t.conjugated().renamed(ren(4, cut_right ? "pA" : "pC")));
    env = env.renamed({{"nv1", "v1"}, {"nv2", "v2"}, {"nv3", "v3"}, {"nv4", "v4"}});
  }
  for (const char* nm : {"v1", "v2", "v3", "v4"})
    env = strip_leg(env, nm);
  require(env.rank() == 0, "numeric-failure", "midpoint contraction left open legs");

  const double nn = n.norm();
  const double purity = env.data()[0].real() / std::pow(nn, 4.0);
  require(purity > 0, "numeric-failure", "nonpositive purity");
  return -std::log(purity);
}

}  // namespace holonet
