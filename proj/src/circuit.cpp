#include <Eigen/Dense>
#include <Eigen/QR>

#include <algorithm>
#include <cmath>
#include <map>
#include <string>

#include "holonet/holo_net.hpp"

namespace holonet {

namespace {

using MatC = Eigen::Matrix<cplx, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

int wires_for(std::int64_t dim, std::int64_t d) {
  int w = 0;
  std::int64_t cap = 1;
  while (cap < dim) {
    cap *= d;
    ++w;
  }
  return w;
}

std::int64_t ipow(std::int64_t b, int e) {
  std::int64_t r = 1;
  while (e-- > 0) r *= b;
  return r;
}

struct BondKey {
  std::string id;
  bool operator<(const BondKey& o) const { return id < o.id; }
};

BondKey bond_of(int c, int h, const std::string& leg) {
  if (leg == "l") return {"h:" + std::to_string(c - 1) + ":" + std::to_string(h)};
  if (leg == "r") return {"h:" + std::to_string(c) + ":" + std::to_string(h)};
  if (leg == "b") return {"v:" + std::to_string(c) + ":" + std::to_string(h - 1)};
  if (leg == "a") return {"v:" + std::to_string(c) + ":" + std::to_string(h)};
  return {"p:" + std::to_string(c)};
}

}  // namespace

CircuitDesc to_circuit(const HoloNet& n) {
  const auto& lay = n.layout;
  const int s = lay.surface_col;
  CircuitDesc circ;
  circ.d = lay.d;

  // Reverse-arrow topological order: center, surface spreading from the
  // center, then wings column by column away from the surface, top to bottom.
  std::vector<std::pair<int, int>> order;
  order.push_back({s, n.center_row});
  for (int h = n.center_row - 1; h >= 1; --h) order.push_back({s, h});
  for (int h = n.center_row + 1; h <= n.height(s); ++h) order.push_back({s, h});
  for (int c = s - 1; c >= 1; --c)
    for (int h = n.height(c); h >= 1; --h) order.push_back({c, h});
  for (int c = s + 1; c <= lay.L; ++c)
    for (int h = n.height(c); h >= 1; --h) order.push_back({c, h});

  std::map<BondKey, std::vector<int>> groups;  // bond -> wire list
  int next_wire = 0;
  int layer = 0;

  for (const auto& [c, h] : order) {
    const DenseTensor& t = n.at(c, h);
    const auto out_names = n.out_legs(c, h);
    std::vector<std::string> in_names, out_used;
    std::vector<Leg> in_parts, out_parts;
    for (const auto& lg : t.legs()) {
      const bool is_out = std::find(out_names.begin(), out_names.end(), lg.name) != out_names.end();
      if (lg.dim == 1) continue;  // trivial legs carry no wires
      if (is_out) {
        out_used.push_back(lg.name);
        out_parts.push_back(lg);
      } else {
        in_names.push_back(lg.name);
        in_parts.push_back(lg);
      }
    }

    std::vector<int> wires;
    for (const auto& nm : out_used) {
      auto it = groups.find(bond_of(c, h, nm));
      require(it != groups.end(), "numeric-failure", "circuit order broke a dependency");
      for (int w : it->second) wires.push_back(w);
      groups.erase(it);
    }
    int needed = 0;
    std::vector<int> in_wire_counts;
    for (const auto& lg : in_parts) {
      const int w = wires_for(lg.dim, lay.d);
      in_wire_counts.push_back(w);
      needed += w;
    }
    while (static_cast<int>(wires.size()) < needed) {
      circ.ancilla_prep.push_back({next_wire, 0});
      wires.push_back(next_wire++);
    }
    const int k = static_cast<int>(wires.size());
    require(k <= 22, "cap-exceeded", "circuit gate too wide");
    const std::int64_t D = ipow(lay.d, k);

    // Designated input index of an OUT-leg assignment (ancillas at zero).
    std::vector<int> out_wire_counts;
    for (const auto& lg : out_parts) out_wire_counts.push_back(wires_for(lg.dim, lay.d));

    // Encode per-leg values group by group over the wire list.
    auto input_index = [&](const std::vector<std::int64_t>& ovals) {
      std::int64_t idx = 0;
      int slot = 0;
      for (std::size_t oi = 0; oi < out_parts.size(); ++oi) {
        idx = idx * ipow(lay.d, out_wire_counts[oi]) + ovals[oi];
        slot += out_wire_counts[oi];
      }
      for (; slot < k; ++slot) idx *= lay.d;  // ancilla wires are zero
      return idx;
    };
    auto output_index = [&](const std::vector<std::int64_t>& ivals) {
      std::int64_t idx = 0;
      int slot = 0;
      for (std::size_t ii = 0; ii < in_parts.size(); ++ii) {
        const std::int64_t cap = ipow(lay.d, in_wire_counts[ii]);
        idx = idx * cap + ivals[ii];
        slot += in_wire_counts[ii];
      }
      for (; slot < k; ++slot) idx *= lay.d;  // extras output |0>
      return idx;
    };

    // Tensor as a matrix (IN x OUT) in tensor leg order.
    std::int64_t din = 1, dout = 1;
    for (const auto& lg : in_parts) din *= lg.dim;
    for (const auto& lg : out_parts) dout *= lg.dim;
    std::vector<LegGroup> gs;
    LegGroup gin{"IN", {}}, gout{"OUT", {}};
    for (const auto& lg : t.legs()) {
      if (lg.dim == 1) continue;
      if (std::find(out_names.begin(), out_names.end(), lg.name) != out_names.end())
        gout.members.push_back(lg.name);
      else
        gin.members.push_back(lg.name);
    }
    DenseTensor squeezed = t;
    for (const auto& lg : t.legs())
      if (lg.dim == 1) {
        DenseTensor one({{"x**", 1}}, {cplx(1, 0)});
        squeezed = contract(squeezed, one, {{lg.name, "x**"}});
      }
    std::vector<LegGroup> both;
    if (!gin.members.empty()) both.push_back(gin);
    if (!gout.members.empty()) both.push_back(gout);
    DenseTensor mt = both.empty() ? squeezed : group_legs(squeezed, both);

    // Scatter the isometry columns into the D x D frame, then complete.
    MatC u = MatC::Zero(D, D);
    std::vector<bool> taken(D, false);
    std::vector<std::int64_t> ovals(out_parts.size(), 0);
    for (std::int64_t o = 0; o < dout; ++o) {
      std::int64_t rem = o;
      for (std::int64_t oi = static_cast<std::int64_t>(out_parts.size()) - 1; oi >= 0; --oi) {
        ovals[oi] = rem % out_parts[oi].dim;
        rem /= out_parts[oi].dim;
      }
      const std::int64_t col = input_index(ovals);
      taken[col] = true;
      std::vector<std::int64_t> ivals(in_parts.size(), 0);
      for (std::int64_t i = 0; i < din; ++i) {
        std::int64_t rem2 = i;
        for (std::int64_t ii = static_cast<std::int64_t>(in_parts.size()) - 1; ii >= 0; --ii) {
          ivals[ii] = rem2 % in_parts[ii].dim;
          rem2 /= in_parts[ii].dim;
        }
        cplx val;
        if (mt.rank() == 2)
          val = mt.at({i, o});
        else if (mt.rank() == 1)
          val = gin.members.empty() ? mt.at({o}) : mt.at({i});
        else
          val = mt.data()[0];
        u(output_index(ivals), col) += val;
      }
    }

    // Orthonormal completion for the remaining input columns.
    MatC c0(D, dout);
    {
      std::int64_t cc = 0;
      for (std::int64_t col = 0; col < D; ++col)
        if (taken[col]) c0.col(cc++) = u.col(col);
    }
    Eigen::HouseholderQR<MatC> qr(c0);
    MatC qfull = qr.householderQ() * MatC::Identity(D, D);
    for (std::int64_t i = 0; i < dout; ++i) {
      cplx dgn = qr.matrixQR()(i, i);
      if (std::abs(dgn) > 0) qfull.col(i) *= dgn / std::abs(dgn);
    }
    std::int64_t spare = dout;
    for (std::int64_t col = 0; col < D; ++col)
      if (!taken[col]) u.col(col) = qfull.col(spare++);

    CircuitGate cg;
    cg.wires = wires;
    cg.layer = layer++;
    cg.unitary = DenseTensor({{"out", D}, {"in", D}});
    Eigen::Map<MatC>(cg.unitary.data().data(), D, D) = u;
    circ.gates.push_back(std::move(cg));

    // Bind output wires to the IN legs, extras discarded as |0>.
    int slot = 0;
    for (std::size_t ii = 0; ii < in_parts.size(); ++ii) {
      std::vector<int> gw(wires.begin() + slot, wires.begin() + slot + in_wire_counts[ii]);
      groups[bond_of(c, h, in_parts[ii].name)] = gw;
      slot += in_wire_counts[ii];
    }
  }

  circ.n_wires = next_wire;
  circ.output_wires.resize(lay.L);
  for (int c = 1; c <= lay.L; ++c) {
    auto it = groups.find(BondKey{"p:" + std::to_string(c)});
    require(it != groups.end() && it->second.size() == 1, "numeric-failure",
            "physical wire missing after circuit construction");
    circ.output_wires[c - 1] = it->second[0];
  }
  return circ;
}

}  // namespace holonet
