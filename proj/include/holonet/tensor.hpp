#ifndef HOLONET_TENSOR_HPP
#define HOLONET_TENSOR_HPP

#include <complex>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "holonet/error.hpp"
#include "holonet/rng.hpp"

namespace holonet {

using cplx = std::complex<double>;

struct Leg {
  std::string name;
  std::int64_t dim = 1;
};

// Dense complex tensor with named legs, data row-major over the leg order.
// Contraction and reshapes address legs by name, never by position.
class DenseTensor {
 public:
  DenseTensor() = default;
  explicit DenseTensor(std::vector<Leg> legs);
  DenseTensor(std::vector<Leg> legs, std::vector<cplx> data);

  static DenseTensor scalar(cplx value);
  // Identity map between two legs of equal dimension.
  static DenseTensor identity(const std::string& a, const std::string& b, std::int64_t dim);
  // Basis vector |index> on a single leg.
  static DenseTensor basis_vector(const std::string& leg, std::int64_t dim, std::int64_t index);

  const std::vector<Leg>& legs() const { return legs_; }
  std::int64_t rank() const { return static_cast<std::int64_t>(legs_.size()); }
  std::int64_t size() const { return static_cast<std::int64_t>(data_.size()); }
  std::int64_t dim(const std::string& leg) const { return legs_[leg_index(leg)].dim; }
  bool has_leg(const std::string& leg) const;
  std::int64_t leg_index(const std::string& leg) const;

  const std::vector<cplx>& data() const { return data_; }
  std::vector<cplx>& data() { return data_; }
  cplx& at(const std::vector<std::int64_t>& idx);
  const cplx& at(const std::vector<std::int64_t>& idx) const;

  DenseTensor renamed(const std::vector<std::pair<std::string, std::string>>& from_to) const;
  DenseTensor conjugated() const;
  // Permute legs into the given name order (must be a permutation of all legs).
  DenseTensor transposed(const std::vector<std::string>& order) const;
  DenseTensor scaled(cplx factor) const;

  double norm() const;      // Frobenius
  double max_abs() const;

 private:
  std::vector<Leg> legs_;
  std::vector<cplx> data_;
};

struct TruncationSpec {
  std::int64_t chi_max = 1;
  double sv_cutoff = 0.0;   // relative to the largest singular value
  bool renormalize = false;

  static TruncationSpec unbounded() { return {INT64_C(1) << 40, 0.0, false}; }
  static TruncationSpec cap(std::int64_t chi) { return {chi, 0.0, false}; }
  void check() const;
};

struct DecompositionResult {
  std::vector<DenseTensor> factors;   // U, diag(S), V for SVD
  double truncation_error = 0.0;      // sqrt of discarded weight of the normalized spectrum
  std::int64_t retained_dim = 0;
  std::vector<double> singular_values;  // retained, descending
};

// --- contraction & reshapes -----------------------------------------------

// Sum over the paired legs; result carries the unpaired legs of a then b.
DenseTensor contract(const DenseTensor& a, const DenseTensor& b,
                     const std::vector<std::pair<std::string, std::string>>& pairs);

// Full inner product <a|b> over identically named legs (a is conjugated).
cplx overlap(const DenseTensor& a, const DenseTensor& b);

// Tensor product (legs of a then b; names must not collide).
DenseTensor outer(const DenseTensor& a, const DenseTensor& b);

struct LegGroup {
  std::string name;
  std::vector<std::string> members;
};

// Fuse leg groups into single legs (row-major within each group).
DenseTensor group_legs(const DenseTensor& t, const std::vector<LegGroup>& groups);
// Inverse of group_legs for one fused leg.
DenseTensor split_leg(const DenseTensor& t, const std::string& leg, const std::vector<Leg>& parts);

// --- factorizations --------------------------------------------------------

// QR over the bipartition (row_legs | col_legs). Q carries row_legs + bond,
// R carries bond + col_legs; R's diagonal is made real nonnegative.
// With full_q, Q is square over the row space (R zero-padded).
std::pair<DenseTensor, DenseTensor> qr_decompose(const DenseTensor& t,
                                                 const std::vector<std::string>& row_legs,
                                                 const std::vector<std::string>& col_legs,
                                                 const std::string& bond_name,
                                                 bool full_q = false);

// Truncated SVD over (row_legs | col_legs). Factors are U (row_legs, bond),
// diag(S) (bond, bond'), V (bond', col_legs). Degenerate clusters at the cut
// are kept together up to the chi_max hard cap.
DecompositionResult svd_truncate(const DenseTensor& t,
                                 const std::vector<std::string>& row_legs,
                                 const std::vector<std::string>& col_legs,
                                 const TruncationSpec& spec,
                                 const std::string& bond_name = "s");

// True iff the map from out_legs (domain) into the remaining legs is an
// isometry: contracting t with conj(t) over the remaining legs gives the
// identity on out_legs within tol (max norm).
bool is_isometry(const DenseTensor& t, const std::vector<std::string>& out_legs, double tol);
double isometry_residual(const DenseTensor& t, const std::vector<std::string>& out_legs);

// Haar-random isometry W with legs ("in", in_dim), ("out", out_dim), W†W = 1.
DenseTensor random_isometry(std::int64_t in_dim, std::int64_t out_dim, Rng& rng);

// exp(-i * scale * H) for Hermitian H over (row_legs | col_legs).
DenseTensor expm_hermitian_i(const DenseTensor& h,
                             const std::vector<std::string>& row_legs,
                             const std::vector<std::string>& col_legs,
                             double scale);

}  // namespace holonet

#endif  // HOLONET_TENSOR_HPP
