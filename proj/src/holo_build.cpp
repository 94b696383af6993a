#include <algorithm>
#include <cmath>

#include "holonet/holo_net.hpp"

namespace holonet {

namespace {

DenseTensor with_unit_leg(DenseTensor t, const std::string& name) {
  if (t.has_leg(name)) return t;
  return outer(t, DenseTensor({{name, 1}}, {cplx(1, 0)}));
}

DenseTensor canonical_legs(DenseTensor t, bool physical) {
  for (const char* nm : {"l", "r", "b", "a"}) t = with_unit_leg(t, nm);
  if (physical) t = with_unit_leg(t, "p");
  std::vector<std::string> order = {"l", "r", "b", "a"};
  if (physical) order.push_back("p");
  return t.transposed(order);
}

// Identity/SWAP routers. In circuit time a right-wing tensor maps inputs
// (l, a) to outputs (r, b|p); "cross" turns both worldlines (identity gate in
// the register picture), "pass" keeps them straight (a SWAP).
DenseTensor router(bool left_wing, bool cross, bool physical, std::int64_t turn_dim,
                   std::int64_t straight_dim) {
  const std::string inner = left_wing ? "r" : "l";
  const std::string outer_h = left_wing ? "l" : "r";
  const std::string down = physical ? "p" : "b";
  DenseTensor t;
  if (cross) {
    t = outer(DenseTensor::identity(inner, down, turn_dim),
              DenseTensor::identity("a", outer_h, straight_dim));
  } else {
    t = outer(DenseTensor::identity(inner, outer_h, turn_dim),
              DenseTensor::identity("a", down, straight_dim));
  }
  return canonical_legs(std::move(t), physical);
}

}  // namespace

// Vertical encoding of an MPS on the surface column at sc (1-based): the
// physical row holds sites sc-1, sc, sc+1; row h holds the folded pair
// (sc-h, sc+h). Boundary surfaces degenerate to the one-sided chain.
namespace {

std::vector<DenseTensor> vertical_surface_from_mps(const MPS& m_in, int sc) {
  const int L = m_in.length();
  MPS m = canonicalize(m_in, sc - 1);
  const std::int64_t d = m.phys_dim;

  auto site = [&](int idx0) -> const DenseTensor& { return m.tensors[idx0]; };
  const int H = std::max({1, sc - 1, L - sc});
  std::vector<DenseTensor> rows;
  rows.reserve(H);

  // Row 1: contract the center site with its neighbors.
  {
    DenseTensor blob = site(sc - 1).renamed({{"l", "cl"}, {"p", "p"}, {"r", "cr"}});
    std::vector<LegGroup> agroup{{"a", {}}};
    if (sc - 2 >= 0) {
      DenseTensor lf = site(sc - 2).renamed({{"l", "ol"}, {"p", "l"}, {"r", "cl"}});
      blob = contract(lf, blob, {{"cl", "cl"}});
      agroup[0].members.push_back("ol");
    } else {
      blob = contract(DenseTensor({{"x", 1}}, {cplx(1, 0)}), blob, {{"x", "cl"}});
    }
    if (sc <= L - 1) {
      DenseTensor rf = site(sc).renamed({{"l", "cr"}, {"p", "r"}, {"r", "orr"}});
      blob = contract(blob, rf, {{"cr", "cr"}});
      agroup[0].members.push_back("orr");
    } else {
      blob = contract(blob, DenseTensor({{"x", 1}}, {cplx(1, 0)}), {{"cr", "x"}});
    }
    if (!agroup[0].members.empty()) {
      std::vector<LegGroup> gs;
      for (const auto& lg : blob.legs()) {
        if (std::find(agroup[0].members.begin(), agroup[0].members.end(), lg.name) ==
            agroup[0].members.end())
          gs.push_back({lg.name, {lg.name}});
      }
      gs.push_back(agroup[0]);
      blob = group_legs(blob, gs).renamed({{agroup[0].name, "a"}});
    }
    rows.push_back(canonical_legs(blob, true));
  }

  for (int h = 2; h <= H; ++h) {
    const int li = sc - 1 - h, ri = sc - 1 + h;
    DenseTensor blob = DenseTensor::scalar(1.0);
    std::vector<std::string> bgroup, agroup;
    if (li >= 0) {
      blob = outer(blob, site(li).renamed({{"l", "la"}, {"p", "l"}, {"r", "lb"}}));
      bgroup.push_back("lb");
      agroup.push_back("la");
    }
    if (ri <= L - 1) {
      blob = outer(blob, site(ri).renamed({{"l", "rb"}, {"p", "r"}, {"r", "ra"}}));
      bgroup.push_back("rb");
      agroup.push_back("ra");
    }
    std::vector<LegGroup> gs;
    for (const auto& lg : blob.legs()) {
      if (std::find(bgroup.begin(), bgroup.end(), lg.name) != bgroup.end()) continue;
      if (std::find(agroup.begin(), agroup.end(), lg.name) != agroup.end()) continue;
      gs.push_back({lg.name, {lg.name}});
    }
    gs.push_back({"b", bgroup});
    gs.push_back({"a", agroup});
    blob = group_legs(blob, gs);
    rows.push_back(canonical_legs(blob, false));
  }
  return rows;
}

// Node settings for one routed wing. Row h of a wing of width W spans slots
// 1..W-h+1 (slot = distance from the surface); the wire entering row h exits
// at the slot where it is inserted among the wires from rows above.
// cross[h-1][j-1] = true: turn (identity); false: pass (swap).
std::vector<std::vector<bool>> wing_routing(int width, const std::vector<int>& target_slot) {
  std::vector<std::vector<bool>> cross(width);
  std::vector<std::pair<int, int>> placed;  // (row, target slot), rows above
  for (int h = width; h >= 1; --h) {
    int pos = 0;
    for (const auto& [hh, tt] : placed)
      if (tt < target_slot[h - 1]) ++pos;
    cross[h - 1].assign(width - h + 1, false);
    for (int j = pos; j < width - h + 1; ++j) cross[h - 1][j] = true;
    placed.push_back({h, target_slot[h - 1]});
  }
  return cross;
}

void fill_routed_wing(HoloNet& n, bool left_wing, const std::vector<int>& target_slot) {
  const int s = n.surface();
  const int width = left_wing ? s - 1 : n.L() - s;
  if (width == 0) return;
  auto cross = wing_routing(width, target_slot);
  const std::int64_t d = n.layout.d;
  for (int j = 1; j <= width; ++j) {
    const int c = left_wing ? s - j : s + j;
    const int H = width - j + 1;
    n.cols[c - 1].clear();
    for (int h = 1; h <= H; ++h) {
      const bool is_cross = cross[h - 1][j - 1];
      const bool phys = h == 1;
      // Straight-through dim: the vertical payload above/horizontal beyond.
      const std::int64_t turn = d;
      const std::int64_t straight = (h + j == width + 1) ? 1 : d;
      n.cols[c - 1].push_back(router(left_wing, is_cross, phys, turn, straight));
    }
  }
}

std::vector<int> identity_slots(int width) {
  std::vector<int> t(width);
  for (int h = 1; h <= width; ++h) t[h - 1] = h;
  return t;
}

}  // namespace

HoloNet embed_mps_folded(const MPS& m, int surface_col, std::int64_t chi) {
  const int L = m.length();
  NetLayout lay = build_layout(L, surface_col, chi, m.phys_dim);
  HoloNet n;
  n.layout = lay;
  n.center_row = 1;
  n.cols.assign(L, {});
  n.cols[surface_col - 1] = vertical_surface_from_mps(m, surface_col);
  for (const auto& t : n.cols[surface_col - 1])
    require(t.dim("a") <= chi, "chi-insufficient",
            "surface bond " + std::to_string(t.dim("a")) + " exceeds chi");
  fill_routed_wing(n, true, identity_slots(surface_col - 1));
  fill_routed_wing(n, false, identity_slots(L - surface_col));
  return n;
}

HoloNet embed_mps_boundary(const MPS& m, std::int64_t chi) {
  require(m.max_bond() <= chi, "chi-insufficient", "network chi below the MPS bond dimension");
  return embed_mps_folded(m, 1, chi);
}

std::vector<int> rainbow_permutation(int L) {
  require(L >= 2 && L % 2 == 0, "invalid-permutation", "rainbow pairing needs even L");
  // sigma[i] = physical column of logical position i+2.
  std::vector<int> sigma(L - 1);
  for (int k = 1; 2 * k <= L; ++k) {
    sigma[2 * k - 2] = L - k + 1;             // logical 2k
    if (2 * k + 1 <= L) sigma[2 * k - 1] = k + 1;  // logical 2k+1
  }
  return sigma;
}

HoloNet permutation_network(int L, const std::vector<int>& sigma,
                            const std::vector<DenseTensor>& pair_states, std::int64_t chi) {
  require(L >= 2 && L % 2 == 0, "invalid-permutation", "pure pairing needs even L");
  require(static_cast<int>(sigma.size()) == L - 1, "invalid-permutation",
          "sigma must map logical positions 2..L");
  std::vector<bool> seen(L + 1, false);
  for (int v : sigma) {
    require(v >= 2 && v <= L && !seen[v], "invalid-permutation", "sigma is not a bijection");
    seen[v] = true;
  }
  require(static_cast<int>(pair_states.size()) == L / 2, "invalid-permutation",
          "need L/2 pair states");

  // Logical MPS: pairs on logical positions (1,2), (3,4), ...
  MPS logical;
  logical.phys_dim = 2;
  for (int k = 0; k < L / 2; ++k) {
    DenseTensor pair = pair_states[k];
    require(pair.has_leg("q0") && pair.has_leg("q1") && pair.dim("q0") == 2 && pair.dim("q1") == 2,
            "invalid-dims", "pair states carry legs (q0, q1) of dim 2");
    const double nn = pair.norm();
    require(nn > 0, "zero-tensor", "zero pair state");
    pair = pair.scaled(1.0 / nn);
    auto res = svd_truncate(pair, {"q0"}, {"q1"}, TruncationSpec::unbounded(), "k");
    DenseTensor first = res.factors[0].renamed({{"q0", "p"}, {"k", "r"}});
    DenseTensor sv = contract(res.factors[1], res.factors[2], {{"k'", "k'"}});
    DenseTensor second = sv.renamed({{"k", "l"}, {"q1", "p"}});
    logical.tensors.push_back(with_unit_leg(first, "l").transposed({"l", "p", "r"}));
    logical.tensors.push_back(with_unit_leg(second, "r").transposed({"l", "p", "r"}));
  }
  logical.center = -1;
  logical = canonicalize(logical, 0);

  NetLayout lay = build_layout(L, 1, chi, 2);
  HoloNet n;
  n.layout = lay;
  n.center_row = 1;
  n.cols.assign(L, {});
  n.cols[0] = vertical_surface_from_mps(logical, 1);
  for (const auto& t : n.cols[0])
    require(t.dim("a") <= chi, "chi-insufficient", "pair encoding exceeds chi");

  std::vector<int> slots(L - 1);
  for (int h = 1; h <= L - 1; ++h) slots[h - 1] = sigma[h - 1] - 1;  // column sc + slot
  fill_routed_wing(n, false, slots);
  return n;
}

HoloNet rainbow_network(int L, const DenseTensor& pair_state, std::int64_t chi) {
  std::vector<DenseTensor> pairs(L / 2, pair_state);
  return permutation_network(L, rainbow_permutation(L), pairs, chi);
}

HoloNet embed_matchgate_circuit(const CircuitDesc& circ) {
  const int L = circ.n_wires;
  require(L >= 2 && circ.d == 2, "layout-mismatch", "matchgate embedding needs qubit wires");
  NetLayout lay = build_layout(L, 1, 2, 2);
  HoloNet n;
  n.layout = lay;
  n.center_row = 1;
  n.cols.assign(L, {});

  // Surface: the |0...0> reference column.
  {
    auto& col = n.cols[0];
    const int H = lay.height(1);
    for (int h = 1; h <= H; ++h) {
      DenseTensor t = DenseTensor::basis_vector("r", 2, 0);
      if (h == 1) t = outer(t, DenseTensor::basis_vector("p", 2, 0));
      col.push_back(canonical_legs(t, h == 1));
    }
  }

  // Expected interior slots: (h, c) with c >= 2 and h + c <= L.
  std::vector<std::vector<bool>> seen(L + 2, std::vector<bool>(L + 2, false));
  int expected = (L - 1) * (L - 2) / 2;
  require(static_cast<int>(circ.gates.size()) == expected, "layout-mismatch",
          "gate count does not match the right-standard triangle");

  for (int c = 2; c <= L; ++c) n.cols[c - 1].resize(lay.height(c));

  for (const auto& g : circ.gates) {
    require(g.wires.size() == 2 && g.wires[1] == g.wires[0] + 1, "layout-mismatch",
            "matchgate circuit gates act on adjacent wires");
    const int p = g.wires[0] + 1;
    const int tau = g.layer;
    require((p - tau + 1) % 2 == 0, "layout-mismatch", "gate position/layer inconsistent");
    const int h = (p - tau + 1) / 2;
    const int c = (p + tau + 1) / 2;
    require(c >= 2 && h >= 1 && h + c <= L, "layout-mismatch", "gate outside the triangle");
    require(!seen[h][c], "layout-mismatch", "duplicate gate position");
    seen[h][c] = true;

    DenseTensor gt = split_leg(split_leg(g.unitary, "out", {{"ob", 2}, {"orr", 2}}), "in",
                               {{"il", 2}, {"ia", 2}});
    require(is_matchgate(gt.renamed({{"ob", "out0"}, {"orr", "out1"}, {"il", "in0"}, {"ia", "in1"}}),
                         1e-10),
            "gate-not-matchgate", "block-structure residual too large");
    DenseTensor t = gt.renamed({{"ob", h == 1 ? "p" : "b"}, {"orr", "r"}, {"il", "l"}, {"ia", "a"}});
    n.at(c, h) = canonical_legs(t, h == 1);
  }
  for (int c = 2; c <= L; ++c)
    for (int h = 1; h <= lay.height(c); ++h) {
      if (h + c <= L) {
        require(seen[h][c], "layout-mismatch", "missing gate at an interior slot");
        continue;
      }
      // Staircase edge: identity routing into the physical row / cap.
      n.at(c, h) = router(false, true, h == 1, 2, 1);
    }
  return n;
}

}  // namespace holonet
