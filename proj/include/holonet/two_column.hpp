#ifndef HOLONET_TWO_COLUMN_HPP
#define HOLONET_TWO_COLUMN_HPP

#include <optional>
#include <vector>

#include "holonet/holo_net.hpp"
#include "holonet/tensor.hpp"

namespace holonet {

// Machinery for overlaps and alternating optimization restricted to two
// adjacent columns, with everything outside collapsed by the isometric
// constraints. Rows are indexed from the physical row up; either side may be
// absent at a row (ragged geometries).

struct TwoColumnSlot {
  DenseTensor t;
  std::vector<std::string> out;  // OUT legs of the isometry (empty for center)
  bool is_center = false;
};

struct TwoColumnCandidate {
  std::vector<std::optional<TwoColumnSlot>> left, right;
  int rows() const { return static_cast<int>(std::max(left.size(), right.size())); }
};

// Reference rungs: per-row merge of a column pair, with an optional two-site
// gate (legs out0,out1,in0,in1) folded into the physical row.
std::vector<DenseTensor> make_ref_rungs(const std::vector<std::optional<DenseTensor>>& left,
                                        const std::vector<std::optional<DenseTensor>>& right,
                                        const DenseTensor* gate = nullptr);

// <candidate | reference>.
cplx two_column_overlap(const TwoColumnCandidate& cand, const std::vector<DenseTensor>& ref);

// Cofactor environment E of the tensor at (side, row): the overlap equals
// Tr(W^dagger E) as a function of that tensor. side: 0 = left, 1 = right.
DenseTensor two_column_environment(const TwoColumnCandidate& cand,
                                   const std::vector<DenseTensor>& ref, int side, int row);

struct AlternatingReport {
  double cost = 0;  // 2 - 2 Re<cand|ref>
  int sweeps = 0;
  bool converged = false;
};

// Bottom-up alternating Procrustes/sphere sweeps; cost is nonincreasing per
// update for this multilinear overlap.
AlternatingReport alternating_two_column(TwoColumnCandidate& cand,
                                         const std::vector<DenseTensor>& ref, int max_sweeps,
                                         double ftol);

// Adapters between networks and column pairs (columns c0, c0+1).
TwoColumnCandidate candidate_from_columns(const HoloNet& n, int c0);
std::vector<std::optional<DenseTensor>> column_tensors(const HoloNet& n, int c);
void write_candidate(HoloNet& n, int c0, const TwoColumnCandidate& cand);

}  // namespace holonet

#endif  // HOLONET_TWO_COLUMN_HPP
