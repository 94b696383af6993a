#include "holonet/tensor.hpp"

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>
#include <Eigen/Householder>
#include <Eigen/QR>
#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

namespace holonet {

using MatC = Eigen::Matrix<cplx, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using MapC = Eigen::Map<MatC>;
using ConstMapC = Eigen::Map<const MatC>;

namespace {

std::int64_t product_dims(const std::vector<Leg>& legs) {
  std::int64_t p = 1;
  for (const auto& l : legs) p *= l.dim;
  return p;
}

void check_unique_names(const std::vector<Leg>& legs) {
  std::set<std::string> seen;
  for (const auto& l : legs) {
    require(l.dim >= 1, "invalid-dims", "leg '" + l.name + "' has nonpositive dim");
    require(seen.insert(l.name).second, "duplicate-leg", "leg '" + l.name + "' repeated");
  }
}

}  // namespace

DenseTensor::DenseTensor(std::vector<Leg> legs) : legs_(std::move(legs)) {
  check_unique_names(legs_);
  data_.assign(product_dims(legs_), cplx(0, 0));
}

DenseTensor::DenseTensor(std::vector<Leg> legs, std::vector<cplx> data)
    : legs_(std::move(legs)), data_(std::move(data)) {
  check_unique_names(legs_);
  require(static_cast<std::int64_t>(data_.size()) == product_dims(legs_), "dimension-mismatch",
          "data length does not match product of leg dims");
}

DenseTensor DenseTensor::scalar(cplx value) { return DenseTensor({}, {value}); }

DenseTensor DenseTensor::identity(const std::string& a, const std::string& b, std::int64_t dim) {
  DenseTensor t({{a, dim}, {b, dim}});
  for (std::int64_t i = 0; i < dim; ++i) t.data_[i * dim + i] = 1.0;
  return t;
}

DenseTensor DenseTensor::basis_vector(const std::string& leg, std::int64_t dim, std::int64_t index) {
  DenseTensor t({{leg, dim}});
  t.data_[index] = 1.0;
  return t;
}

bool DenseTensor::has_leg(const std::string& leg) const {
  for (const auto& l : legs_)
    if (l.name == leg) return true;
  return false;
}

std::int64_t DenseTensor::leg_index(const std::string& leg) const {
  for (std::size_t i = 0; i < legs_.size(); ++i)
    if (legs_[i].name == leg) return static_cast<std::int64_t>(i);
  raise("leg-not-found", "no leg named '" + leg + "'");
}

cplx& DenseTensor::at(const std::vector<std::int64_t>& idx) {
  std::int64_t off = 0;
  for (std::size_t i = 0; i < legs_.size(); ++i) off = off * legs_[i].dim + idx[i];
  return data_[off];
}

const cplx& DenseTensor::at(const std::vector<std::int64_t>& idx) const {
  return const_cast<DenseTensor*>(this)->at(idx);
}

DenseTensor DenseTensor::renamed(const std::vector<std::pair<std::string, std::string>>& from_to) const {
  // Resolve every source against the original names first, so overlapping
  // rename sets (for example swapping two legs) behave as expected.
  DenseTensor t = *this;
  for (const auto& [from, to] : from_to) t.legs_[leg_index(from)].name = to;
  check_unique_names(t.legs_);
  return t;
}

DenseTensor DenseTensor::conjugated() const {
  DenseTensor t = *this;
  for (auto& v : t.data_) v = std::conj(v);
  return t;
}

DenseTensor DenseTensor::transposed(const std::vector<std::string>& order) const {
  require(order.size() == legs_.size(), "invalid-permutation", "transpose order must cover all legs");
  std::vector<std::int64_t> perm(order.size());
  for (std::size_t i = 0; i < order.size(); ++i) perm[i] = leg_index(order[i]);

  bool already = true;
  for (std::size_t i = 0; i < perm.size(); ++i) already = already && perm[i] == static_cast<std::int64_t>(i);
  if (already) return *this;

  std::vector<Leg> new_legs(order.size());
  for (std::size_t i = 0; i < order.size(); ++i) new_legs[i] = legs_[perm[i]];

  // Strides of the old layout, gathered in new-leg order.
  std::vector<std::int64_t> old_stride(legs_.size(), 1);
  for (std::int64_t i = static_cast<std::int64_t>(legs_.size()) - 2; i >= 0; --i)
    old_stride[i] = old_stride[i + 1] * legs_[i + 1].dim;
  std::vector<std::int64_t> gathered(order.size());
  for (std::size_t i = 0; i < order.size(); ++i) gathered[i] = old_stride[perm[i]];

  DenseTensor out(new_legs);
  const std::int64_t n = size();
  const std::int64_t r = rank();
  std::vector<std::int64_t> idx(r, 0);
  std::int64_t src = 0;
  for (std::int64_t lin = 0; lin < n; ++lin) {
    out.data_[lin] = data_[src];
    for (std::int64_t k = r - 1; k >= 0; --k) {
      if (++idx[k] < new_legs[k].dim) {
        src += gathered[k];
        break;
      }
      src -= gathered[k] * (new_legs[k].dim - 1);
      idx[k] = 0;
    }
  }
  return out;
}

DenseTensor DenseTensor::scaled(cplx factor) const {
  DenseTensor t = *this;
  for (auto& v : t.data_) v *= factor;
  return t;
}

double DenseTensor::norm() const {
  double s = 0;
  for (const auto& v : data_) s += std::norm(v);
  return std::sqrt(s);
}

double DenseTensor::max_abs() const {
  double m = 0;
  for (const auto& v : data_) m = std::max(m, std::abs(v));
  return m;
}

void TruncationSpec::check() const {
  require(chi_max >= 1, "invalid-truncation", "chi_max must be >= 1");
  require(sv_cutoff >= 0.0 && sv_cutoff < 1.0, "invalid-truncation", "sv_cutoff must be in [0, 1)");
}

// --- contraction ------------------------------------------------------------

DenseTensor contract(const DenseTensor& a, const DenseTensor& b,
                     const std::vector<std::pair<std::string, std::string>>& pairs) {
  std::vector<std::string> a_con, b_con;
  std::int64_t k = 1;
  for (const auto& [la, lb] : pairs) {
    require(a.has_leg(la), "leg-not-found", "contract: '" + la + "' not in first tensor");
    require(b.has_leg(lb), "leg-not-found", "contract: '" + lb + "' not in second tensor");
    require(a.dim(la) == b.dim(lb), "dimension-mismatch",
            "contract: '" + la + "' (" + std::to_string(a.dim(la)) + ") vs '" + lb + "' (" +
                std::to_string(b.dim(lb)) + ")");
    a_con.push_back(la);
    b_con.push_back(lb);
    k *= a.dim(la);
  }

  std::vector<std::string> a_free, b_free;
  std::vector<Leg> out_legs;
  for (const auto& l : a.legs())
    if (std::find(a_con.begin(), a_con.end(), l.name) == a_con.end()) {
      a_free.push_back(l.name);
      out_legs.push_back(l);
    }
  for (const auto& l : b.legs())
    if (std::find(b_con.begin(), b_con.end(), l.name) == b_con.end()) {
      b_free.push_back(l.name);
      out_legs.push_back(l);
    }
  check_unique_names(out_legs);

  std::vector<std::string> a_order = a_free;
  a_order.insert(a_order.end(), a_con.begin(), a_con.end());
  std::vector<std::string> b_order = b_con;
  b_order.insert(b_order.end(), b_free.begin(), b_free.end());

  DenseTensor ap = a.transposed(a_order);
  DenseTensor bp = b.transposed(b_order);

  const std::int64_t m = ap.size() / k;
  const std::int64_t n = bp.size() / k;
  DenseTensor out(out_legs);
  ConstMapC ma(ap.data().data(), m, k);
  ConstMapC mb(bp.data().data(), k, n);
  MapC mo(out.data().data(), m, n);
  mo.noalias() = ma * mb;
  return out;
}

cplx overlap(const DenseTensor& a, const DenseTensor& b) {
  require(a.rank() == b.rank(), "dimension-mismatch", "overlap: rank mismatch");
  std::vector<std::string> order;
  for (const auto& l : a.legs()) order.push_back(l.name);
  DenseTensor bp = b.transposed(order);
  for (std::size_t i = 0; i < order.size(); ++i)
    require(a.legs()[i].dim == bp.legs()[i].dim, "dimension-mismatch", "overlap: leg dims differ");
  cplx s(0, 0);
  const auto& da = a.data();
  const auto& db = bp.data();
  for (std::size_t i = 0; i < da.size(); ++i) s += std::conj(da[i]) * db[i];
  return s;
}

DenseTensor outer(const DenseTensor& a, const DenseTensor& b) { return contract(a, b, {}); }

DenseTensor group_legs(const DenseTensor& t, const std::vector<LegGroup>& groups) {
  std::vector<std::string> order;
  std::vector<Leg> new_legs;
  std::int64_t covered = 0;
  for (const auto& g : groups) {
    std::int64_t dim = 1;
    for (const auto& m : g.members) {
      order.push_back(m);
      dim *= t.dim(m);
      ++covered;
    }
    new_legs.push_back({g.name, dim});
  }
  require(covered == t.rank(), "partition-incomplete", "group_legs: groups must partition all legs");
  DenseTensor tp = t.transposed(order);
  return DenseTensor(new_legs, tp.data());
}

DenseTensor split_leg(const DenseTensor& t, const std::string& leg, const std::vector<Leg>& parts) {
  std::int64_t idx = t.leg_index(leg);
  std::int64_t prod = 1;
  for (const auto& p : parts) prod *= p.dim;
  require(prod == t.dim(leg), "dimension-mismatch", "split_leg: part dims must multiply to the leg dim");
  std::vector<Leg> new_legs;
  for (std::int64_t i = 0; i < t.rank(); ++i) {
    if (i == idx)
      new_legs.insert(new_legs.end(), parts.begin(), parts.end());
    else
      new_legs.push_back(t.legs()[i]);
  }
  return DenseTensor(new_legs, t.data());
}

// --- factorizations ---------------------------------------------------------

namespace {

struct MatrixView {
  DenseTensor permuted;
  std::int64_t rows = 1, cols = 1;
  std::vector<Leg> row_legs, col_legs;
};

MatrixView as_matrix(const DenseTensor& t, const std::vector<std::string>& row_legs,
                     const std::vector<std::string>& col_legs) {
  require(row_legs.size() + col_legs.size() == static_cast<std::size_t>(t.rank()),
          "partition-incomplete", "bipartition must cover all legs");
  std::vector<std::string> order = row_legs;
  order.insert(order.end(), col_legs.begin(), col_legs.end());
  MatrixView v;
  v.permuted = t.transposed(order);
  for (const auto& n : row_legs) {
    v.row_legs.push_back({n, t.dim(n)});
    v.rows *= t.dim(n);
  }
  for (const auto& n : col_legs) {
    v.col_legs.push_back({n, t.dim(n)});
    v.cols *= t.dim(n);
  }
  return v;
}

}  // namespace

std::pair<DenseTensor, DenseTensor> qr_decompose(const DenseTensor& t,
                                                 const std::vector<std::string>& row_legs,
                                                 const std::vector<std::string>& col_legs,
                                                 const std::string& bond_name, bool full_q) {
  MatrixView v = as_matrix(t, row_legs, col_legs);
  ConstMapC m(v.permuted.data().data(), v.rows, v.cols);

  Eigen::HouseholderQR<MatC> qr(m);
  const std::int64_t k = full_q ? v.rows : std::min(v.rows, v.cols);
  MatC q = qr.householderQ() * MatC::Identity(v.rows, k);
  MatC r = MatC::Zero(k, v.cols);
  auto rt = qr.matrixQR().topRows(std::min(v.rows, v.cols)).triangularView<Eigen::Upper>();
  r.topRows(std::min(v.rows, v.cols)) = rt;

  // Fix gauge: real nonnegative diagonal of R.
  for (std::int64_t i = 0; i < std::min(k, v.cols); ++i) {
    cplx d = r(i, i);
    if (std::abs(d) > 0) {
      cplx ph = d / std::abs(d);
      q.col(i) *= ph;
      r.row(i) *= std::conj(ph);
    }
  }

  std::vector<Leg> q_legs = v.row_legs;
  q_legs.push_back({bond_name, k});
  DenseTensor Q(q_legs);
  MapC(Q.data().data(), v.rows, k) = q;

  std::vector<Leg> r_legs = {{bond_name, k}};
  r_legs.insert(r_legs.end(), v.col_legs.begin(), v.col_legs.end());
  DenseTensor R(r_legs);
  MapC(R.data().data(), k, v.cols) = r;
  return {Q, R};
}

DecompositionResult svd_truncate(const DenseTensor& t, const std::vector<std::string>& row_legs,
                                 const std::vector<std::string>& col_legs, const TruncationSpec& spec,
                                 const std::string& bond_name) {
  spec.check();
  MatrixView v = as_matrix(t, row_legs, col_legs);
  ConstMapC m(v.permuted.data().data(), v.rows, v.cols);

  Eigen::JacobiSVD<MatC> svd;
  svd.compute(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
  if (svd.info() != Eigen::Success) raise("decomposition-failed", "SVD did not converge");

  Eigen::VectorXd s = svd.singularValues();
  const std::int64_t full = s.size();
  double total_sq = 0;
  for (std::int64_t i = 0; i < full; ++i) total_sq += s(i) * s(i);

  std::int64_t k = full;
  if (total_sq > 0) {
    // Numerical rank: exact zeros never count toward the retained dimension.
    const double floor = std::max(spec.sv_cutoff, 1e-14) * s(0);
    while (k > 1 && s(k - 1) < floor) --k;
  }
  k = std::min(k, spec.chi_max);
  // Keep degenerate clusters together, up to the chi_max hard cap.
  while (k > 0 && k < full && k < spec.chi_max) {
    const double gap = s(k - 1) - s(k);
    if (s(k - 1) > 0 && gap / s(k - 1) < 1e-12)
      ++k;
    else
      break;
  }
  k = std::max<std::int64_t>(k, 1);

  double discarded = 0;
  for (std::int64_t i = k; i < full; ++i) discarded += s(i) * s(i);
  const double err = total_sq > 0 ? std::sqrt(discarded / total_sq) : 0.0;

  MatC u = svd.matrixU().leftCols(k);
  MatC w = svd.matrixV().leftCols(k);  // columns of V, so t = U S W^dagger

  // Fix gauge: largest-magnitude entry of each left singular vector real positive.
  for (std::int64_t i = 0; i < k; ++i) {
    std::int64_t arg = 0;
    double best = 0;
    for (std::int64_t rix = 0; rix < v.rows; ++rix)
      if (std::abs(u(rix, i)) > best) {
        best = std::abs(u(rix, i));
        arg = rix;
      }
    if (best > 0) {
      cplx ph = u(arg, i) / best;
      u.col(i) *= std::conj(ph);
      w.col(i) *= std::conj(ph);
    }
  }

  std::vector<double> kept(k);
  double kept_sq = 0;
  for (std::int64_t i = 0; i < k; ++i) {
    kept[i] = s(i);
    kept_sq += s(i) * s(i);
  }
  if (spec.renormalize && kept_sq > 0) {
    const double rescale = 1.0 / std::sqrt(kept_sq);
    for (auto& x : kept) x *= rescale;
  }

  const std::string bond_l = bond_name;
  const std::string bond_r = bond_name + "'";

  std::vector<Leg> u_legs = v.row_legs;
  u_legs.push_back({bond_l, k});
  DenseTensor U(u_legs);
  MapC(U.data().data(), v.rows, k) = u;

  DenseTensor S({{bond_l, k}, {bond_r, k}});
  for (std::int64_t i = 0; i < k; ++i) S.data()[i * k + i] = kept[i];

  std::vector<Leg> v_legs = {{bond_r, k}};
  v_legs.insert(v_legs.end(), v.col_legs.begin(), v.col_legs.end());
  DenseTensor V(v_legs);
  MapC(V.data().data(), k, v.cols) = w.adjoint();

  DecompositionResult res;
  res.factors = {std::move(U), std::move(S), std::move(V)};
  res.truncation_error = err;
  res.retained_dim = k;
  res.singular_values = std::move(kept);
  return res;
}

double isometry_residual(const DenseTensor& t, const std::vector<std::string>& out_legs) {
  std::vector<std::string> in_legs;
  std::int64_t out_dim = 1, in_dim = 1;
  for (const auto& l : t.legs()) {
    if (std::find(out_legs.begin(), out_legs.end(), l.name) == out_legs.end()) {
      in_legs.push_back(l.name);
      in_dim *= l.dim;
    } else {
      out_dim *= l.dim;
    }
  }
  for (const auto& n : out_legs)
    require(t.has_leg(n), "leg-not-found", "is_isometry: '" + n + "'");
  require(out_dim <= in_dim, "dimension-orientation-invalid",
          "out dims (" + std::to_string(out_dim) + ") exceed in dims (" + std::to_string(in_dim) + ")");

  MatrixView v = as_matrix(t, in_legs, out_legs);
  ConstMapC m(v.permuted.data().data(), v.rows, v.cols);
  MatC g = m.adjoint() * m;
  g -= MatC::Identity(v.cols, v.cols);
  return g.cwiseAbs().maxCoeff();
}

bool is_isometry(const DenseTensor& t, const std::vector<std::string>& out_legs, double tol) {
  return isometry_residual(t, out_legs) <= tol;
}

DenseTensor random_isometry(std::int64_t in_dim, std::int64_t out_dim, Rng& rng) {
  require(in_dim >= out_dim && out_dim >= 1, "invalid-dims",
          "random_isometry needs in_dim >= out_dim >= 1");
  MatC g(in_dim, out_dim);
  for (std::int64_t i = 0; i < in_dim; ++i)
    for (std::int64_t j = 0; j < out_dim; ++j) g(i, j) = rng.gaussian_complex();

  Eigen::HouseholderQR<MatC> qr(g);
  MatC q = qr.householderQ() * MatC::Identity(in_dim, out_dim);
  // Phase-fix with the sign of R's diagonal to get the Haar distribution.
  for (std::int64_t j = 0; j < out_dim; ++j) {
    cplx d = qr.matrixQR()(j, j);
    if (std::abs(d) > 0) q.col(j) *= d / std::abs(d);
  }
  DenseTensor W({{"in", in_dim}, {"out", out_dim}});
  MapC(W.data().data(), in_dim, out_dim) = q;
  return W;
}

DenseTensor expm_hermitian_i(const DenseTensor& h, const std::vector<std::string>& row_legs,
                             const std::vector<std::string>& col_legs, double scale) {
  MatrixView v = as_matrix(h, row_legs, col_legs);
  require(v.rows == v.cols, "dimension-mismatch", "expm: bipartition must be square");
  ConstMapC m(v.permuted.data().data(), v.rows, v.cols);
  const double herm_res = (m - m.adjoint()).cwiseAbs().maxCoeff();
  require(herm_res <= 1e-10 * std::max(1.0, m.cwiseAbs().maxCoeff()), "not-hermitian",
          "expm input deviates from Hermitian by " + std::to_string(herm_res));

  Eigen::SelfAdjointEigenSolver<MatC> es((m + m.adjoint()) / 2.0);
  if (es.info() != Eigen::Success) raise("decomposition-failed", "eigendecomposition failed");
  Eigen::VectorXcd phases(v.rows);
  for (std::int64_t i = 0; i < v.rows; ++i)
    phases(i) = std::exp(cplx(0, -scale * es.eigenvalues()(i)));
  MatC u = es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint();

  std::vector<Leg> legs = v.row_legs;
  legs.insert(legs.end(), v.col_legs.begin(), v.col_legs.end());
  DenseTensor out(legs);
  MapC(out.data().data(), v.rows, v.cols) = u;
  return out;
}

}  // namespace holonet
