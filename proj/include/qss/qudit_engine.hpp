#pragma once

// Dense simulation of pure states, density matrices and Kraus maps on products of
// qudit registers. Register 0 is the most significant digit of a basis index, so
// |0>|1> on two qubits is basis index 1.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <functional>
#include <numbers>
#include <numeric>
#include <set>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>
#include <unsupported/Eigen/KroneckerProduct>

#include "qss/error.hpp"

namespace qss {

template <typename Real>
using CMatrixT = Eigen::Matrix<std::complex<Real>, Eigen::Dynamic, Eigen::Dynamic>;
template <typename Real>
using CVectorT = Eigen::Matrix<std::complex<Real>, Eigen::Dynamic, 1>;
template <typename Real>
using RVectorT = Eigen::Matrix<Real, Eigen::Dynamic, 1>;

using CMatrix = CMatrixT<double>;
using CVector = CVectorT<double>;
using RVector = RVectorT<double>;

/// Validation tolerances. For double these are the documented 1e-12 / 1e-10 bounds.
template <typename Real>
struct Tolerance {
  static constexpr Real kEps = std::numeric_limits<Real>::epsilon();
  static constexpr Real norm = std::max(Real(1e-12), Real(100) * kEps);
  static constexpr Real matrix = std::max(Real(1e-10), Real(1000) * kEps);
};

/// Local dimensions and names of an ordered list of registers.
class RegisterShape {
 public:
  static constexpr std::size_t kDefaultCap = std::size_t{1} << 20;

  RegisterShape(std::vector<int> dims, std::vector<std::string> labels = {},
                std::size_t cap = kDefaultCap)
      : dims_(std::move(dims)), labels_(std::move(labels)) {
    if (dims_.empty()) throw Error(ErrorCode::InvalidArgument, "register shape needs at least one register");
    std::size_t total = 1;
    for (int d : dims_) {
      if (d < 1) throw Error(ErrorCode::InvalidArgument, "register dimensions must be positive");
      total *= static_cast<std::size_t>(d);
      if (total > cap) {
        throw Error(ErrorCode::ShapeCapExceeded, "product of register dims exceeds cap " + std::to_string(cap));
      }
    }
    if (labels_.empty()) {
      for (std::size_t i = 0; i < dims_.size(); ++i) labels_.push_back("R" + std::to_string(i));
    }
    if (labels_.size() != dims_.size()) throw Error(ErrorCode::InvalidArgument, "one label per register required");
    total_ = static_cast<Eigen::Index>(total);
  }

  std::size_t size() const noexcept { return dims_.size(); }
  Eigen::Index total() const noexcept { return total_; }
  const std::vector<int>& dims() const noexcept { return dims_; }
  const std::vector<std::string>& labels() const noexcept { return labels_; }
  int dim(std::size_t i) const { return dims_.at(i); }

  Eigen::Index dim_of(std::span<const int> regs) const {
    Eigen::Index d = 1;
    for (int r : regs) d *= dims_.at(static_cast<std::size_t>(r));
    return d;
  }

  RegisterShape select(std::span<const int> regs) const {
    std::vector<int> dims;
    std::vector<std::string> labels;
    for (int r : regs) {
      dims.push_back(dims_.at(static_cast<std::size_t>(r)));
      labels.push_back(labels_.at(static_cast<std::size_t>(r)));
    }
    return {std::move(dims), std::move(labels)};
  }

  RegisterShape concat(const RegisterShape& other) const {
    std::vector<int> dims = dims_;
    std::vector<std::string> labels = labels_;
    dims.insert(dims.end(), other.dims_.begin(), other.dims_.end());
    labels.insert(labels.end(), other.labels_.begin(), other.labels_.end());
    return {std::move(dims), std::move(labels)};
  }

  friend bool operator==(const RegisterShape& a, const RegisterShape& b) {
    return a.dims_ == b.dims_ && a.labels_ == b.labels_;
  }

 private:
  std::vector<int> dims_;
  std::vector<std::string> labels_;
  Eigen::Index total_ = 1;
};

namespace detail {

inline void check_register_list(const RegisterShape& shape, std::span<const int> regs) {
  std::set<int> seen;
  for (int r : regs) {
    if (r < 0 || static_cast<std::size_t>(r) >= shape.size()) {
      throw Error(ErrorCode::InvalidArgument, "register index " + std::to_string(r) + " out of range");
    }
    if (!seen.insert(r).second) throw Error(ErrorCode::InvalidArgument, "register index repeated");
  }
}

inline void check_permutation(const RegisterShape& shape, std::span<const int> perm) {
  if (perm.size() != shape.size()) throw Error(ErrorCode::InvalidArgument, "permutation length mismatch");
  check_register_list(shape, perm);
}

/// src[new_index] = old_index for the reordering where new register i is old register perm[i].
inline std::vector<Eigen::Index> permutation_sources(const RegisterShape& shape, std::span<const int> perm) {
  const std::size_t n = shape.size();
  std::vector<Eigen::Index> old_stride(n);
  Eigen::Index s = 1;
  for (std::size_t i = n; i-- > 0;) {
    old_stride[i] = s;
    s *= shape.dim(i);
  }
  std::vector<Eigen::Index> src(static_cast<std::size_t>(shape.total()));
  std::vector<int> digits(n, 0);
  for (Eigen::Index idx = 0; idx < shape.total(); ++idx) {
    Eigen::Index old = 0;
    for (std::size_t k = 0; k < n; ++k) old += digits[k] * old_stride[static_cast<std::size_t>(perm[k])];
    src[static_cast<std::size_t>(idx)] = old;
    for (std::size_t k = n; k-- > 0;) {
      if (++digits[k] < shape.dim(static_cast<std::size_t>(perm[k]))) break;
      digits[k] = 0;
    }
  }
  return src;
}

/// Order that moves `targets` (in the given order) behind all other registers.
inline std::vector<int> targets_last(std::size_t n, std::span<const int> targets) {
  std::vector<int> order;
  for (int r = 0; r < static_cast<int>(n); ++r) {
    if (std::find(targets.begin(), targets.end(), r) == targets.end()) order.push_back(r);
  }
  order.insert(order.end(), targets.begin(), targets.end());
  return order;
}

inline std::vector<int> inverse_permutation(std::span<const int> perm) {
  std::vector<int> inv(perm.size());
  for (std::size_t i = 0; i < perm.size(); ++i) inv[static_cast<std::size_t>(perm[i])] = static_cast<int>(i);
  return inv;
}

template <typename Real>
RVectorT<Real> clipped_eigenvalues(const CMatrixT<Real>& m) {
  Eigen::SelfAdjointEigenSolver<CMatrixT<Real>> solver(m, Eigen::EigenvaluesOnly);
  RVectorT<Real> ev = solver.eigenvalues();
  for (Eigen::Index i = 0; i < ev.size(); ++i) {
    if (ev(i) < -Tolerance<Real>::matrix) {
      throw Error(ErrorCode::InvalidState, "eigenvalue " + std::to_string(static_cast<double>(ev(i))) +
                                               " below positivity tolerance");
    }
    if (ev(i) < 0) ev(i) = 0;
  }
  return ev;
}

template <typename Real>
CMatrixT<Real> psd_sqrt(const CMatrixT<Real>& m) {
  Eigen::SelfAdjointEigenSolver<CMatrixT<Real>> solver(m);
  RVectorT<Real> ev = solver.eigenvalues();
  for (Eigen::Index i = 0; i < ev.size(); ++i) ev(i) = ev(i) > 0 ? std::sqrt(ev(i)) : Real(0);
  return solver.eigenvectors() * ev.asDiagonal() * solver.eigenvectors().adjoint();
}

}  // namespace detail

template <typename Real>
class BasicDensityMatrix;

/// Normalized amplitude vector over a RegisterShape.
template <typename Real>
class BasicPureState {
 public:
  BasicPureState(RegisterShape shape, CVectorT<Real> amplitudes)
      : shape_(std::move(shape)), amplitudes_(std::move(amplitudes)) {
    if (amplitudes_.size() != shape_.total()) {
      throw Error(ErrorCode::DimMismatch, "amplitude count does not match register shape");
    }
    if (std::abs(amplitudes_.norm() - Real(1)) > Tolerance<Real>::norm) {
      throw Error(ErrorCode::InvalidState, "state is not normalized");
    }
  }

  static BasicPureState basis(RegisterShape shape, std::span<const int> digits) {
    if (digits.size() != shape.size()) throw Error(ErrorCode::DimMismatch, "one digit per register required");
    Eigen::Index idx = 0;
    for (std::size_t i = 0; i < digits.size(); ++i) {
      if (digits[i] < 0 || digits[i] >= shape.dim(i)) throw Error(ErrorCode::InvalidArgument, "digit out of range");
      idx = idx * shape.dim(i) + digits[i];
    }
    CVectorT<Real> amps = CVectorT<Real>::Zero(shape.total());
    amps(idx) = Real(1);
    return {std::move(shape), std::move(amps)};
  }

  /// Normalizes `amplitudes` first; throws InvalidState for a zero vector.
  static BasicPureState normalized(RegisterShape shape, CVectorT<Real> amplitudes) {
    const Real n = amplitudes.norm();
    if (n == Real(0)) throw Error(ErrorCode::InvalidState, "zero vector cannot be normalized");
    amplitudes /= n;
    return {std::move(shape), std::move(amplitudes)};
  }

  const RegisterShape& shape() const noexcept { return shape_; }
  const CVectorT<Real>& amplitudes() const noexcept { return amplitudes_; }

  BasicDensityMatrix<Real> density() const;

 private:
  RegisterShape shape_;
  CVectorT<Real> amplitudes_;
};

/// Hermitian, positive semidefinite, unit-trace matrix over a RegisterShape.
template <typename Real>
class BasicDensityMatrix {
 public:
  BasicDensityMatrix(RegisterShape shape, CMatrixT<Real> matrix)
      : shape_(std::move(shape)), matrix_(std::move(matrix)) {
    if (matrix_.rows() != shape_.total() || matrix_.cols() != shape_.total()) {
      throw Error(ErrorCode::DimMismatch, "matrix side does not match register shape");
    }
    constexpr Real tol = Tolerance<Real>::matrix;
    if ((matrix_ - matrix_.adjoint()).cwiseAbs().maxCoeff() > tol) {
      throw Error(ErrorCode::InvalidState, "density matrix is not Hermitian");
    }
    if (std::abs(matrix_.trace() - std::complex<Real>(1)) > tol) {
      throw Error(ErrorCode::InvalidState, "density matrix trace differs from 1");
    }
    (void)detail::clipped_eigenvalues<Real>(matrix_);
  }

  /// Skips validation. Only for results of operations that preserve the invariants.
  static BasicDensityMatrix trusted(RegisterShape shape, CMatrixT<Real> matrix) {
    return BasicDensityMatrix(std::move(shape), std::move(matrix), TrustedTag{});
  }

  static BasicDensityMatrix maximally_mixed(RegisterShape shape) {
    const Eigen::Index n = shape.total();
    return trusted(std::move(shape), CMatrixT<Real>::Identity(n, n) / Real(n));
  }

  const RegisterShape& shape() const noexcept { return shape_; }
  const CMatrixT<Real>& matrix() const noexcept { return matrix_; }
  Eigen::Index dim() const noexcept { return matrix_.rows(); }

 private:
  struct TrustedTag {};
  BasicDensityMatrix(RegisterShape shape, CMatrixT<Real> matrix, TrustedTag)
      : shape_(std::move(shape)), matrix_(std::move(matrix)) {}

  RegisterShape shape_;
  CMatrixT<Real> matrix_;
};

template <typename Real>
BasicDensityMatrix<Real> BasicPureState<Real>::density() const {
  return BasicDensityMatrix<Real>::trusted(shape_, amplitudes_ * amplitudes_.adjoint());
}

using PureState = BasicPureState<double>;
using DensityMatrix = BasicDensityMatrix<double>;

// ---------------------------------------------------------------------------
// Composition and reordering

template <typename Real>
BasicPureState<Real> tensor(const BasicPureState<Real>& a, const BasicPureState<Real>& b) {
  RegisterShape shape = a.shape().concat(b.shape());
  CVectorT<Real> amps = Eigen::kroneckerProduct(a.amplitudes(), b.amplitudes()).eval();
  return {std::move(shape), std::move(amps)};
}

template <typename Real>
BasicDensityMatrix<Real> tensor(const BasicDensityMatrix<Real>& a, const BasicDensityMatrix<Real>& b) {
  RegisterShape shape = a.shape().concat(b.shape());
  CMatrixT<Real> m = Eigen::kroneckerProduct(a.matrix(), b.matrix()).eval();
  return BasicDensityMatrix<Real>::trusted(std::move(shape), std::move(m));
}

/// New register i is old register perm[i].
template <typename Real>
BasicPureState<Real> permute(const BasicPureState<Real>& s, std::span<const int> perm) {
  detail::check_permutation(s.shape(), perm);
  const auto src = detail::permutation_sources(s.shape(), perm);
  CVectorT<Real> out(s.amplitudes().size());
  for (std::size_t i = 0; i < src.size(); ++i) out(static_cast<Eigen::Index>(i)) = s.amplitudes()(src[i]);
  return {s.shape().select(perm), std::move(out)};
}

template <typename Real>
BasicDensityMatrix<Real> permute(const BasicDensityMatrix<Real>& rho, std::span<const int> perm) {
  detail::check_permutation(rho.shape(), perm);
  const auto src = detail::permutation_sources(rho.shape(), perm);
  const auto n = static_cast<Eigen::Index>(src.size());
  CMatrixT<Real> out(n, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    for (Eigen::Index i = 0; i < n; ++i) {
      out(i, j) = rho.matrix()(src[static_cast<std::size_t>(i)], src[static_cast<std::size_t>(j)]);
    }
  }
  return BasicDensityMatrix<Real>::trusted(rho.shape().select(perm), std::move(out));
}

// ---------------------------------------------------------------------------
// Marginals

/// Marginal on `keep` (registers appear in the order listed).
template <typename Real>
BasicDensityMatrix<Real> partial_trace(const BasicDensityMatrix<Real>& rho, std::span<const int> keep) {
  if (keep.empty()) throw Error(ErrorCode::EmptyKeepSet, "partial trace must keep at least one register");
  detail::check_register_list(rho.shape(), keep);
  // Traced registers first, kept registers last (fastest varying).
  const auto order = detail::targets_last(rho.shape().size(), keep);
  const BasicDensityMatrix<Real> moved = permute(rho, order);
  const Eigen::Index k = rho.shape().dim_of(keep);
  const Eigen::Index r = rho.dim() / k;
  CMatrixT<Real> out = CMatrixT<Real>::Zero(k, k);
  for (Eigen::Index b = 0; b < r; ++b) out += moved.matrix().block(b * k, b * k, k, k);
  return BasicDensityMatrix<Real>::trusted(rho.shape().select(keep), std::move(out));
}

template <typename Real>
BasicDensityMatrix<Real> partial_trace(const BasicPureState<Real>& psi, std::span<const int> keep) {
  if (keep.empty()) throw Error(ErrorCode::EmptyKeepSet, "partial trace must keep at least one register");
  detail::check_register_list(psi.shape(), keep);
  const auto order = detail::targets_last(psi.shape().size(), keep);
  const BasicPureState<Real> moved = permute(psi, order);
  const Eigen::Index k = psi.shape().dim_of(keep);
  const Eigen::Index r = psi.shape().total() / k;
  // Column-major map: column b holds the kept-register amplitudes for traced index b.
  Eigen::Map<const CMatrixT<Real>> m(moved.amplitudes().data(), k, r);
  CMatrixT<Real> out = m * m.adjoint();
  return BasicDensityMatrix<Real>::trusted(psi.shape().select(keep), std::move(out));
}

// ---------------------------------------------------------------------------
// Unitaries and Kraus maps

template <typename Real>
bool is_unitary(const CMatrixT<Real>& u, Real tol = Tolerance<Real>::matrix) {
  if (u.rows() != u.cols()) return false;
  return ((u.adjoint() * u) - CMatrixT<Real>::Identity(u.rows(), u.cols())).cwiseAbs().maxCoeff() <= tol;
}

namespace detail {

/// Computes (I_rest ⊗ op) x where the op acts on the fastest-varying block of size op.cols().
template <typename Real>
CMatrixT<Real> left_apply_last(const CMatrixT<Real>& op, const CMatrixT<Real>& x) {
  const Eigen::Index in = op.cols();
  const Eigen::Index rest = x.rows() / in;
  Eigen::Map<const CMatrixT<Real>> view(x.data(), in, rest * x.cols());
  CMatrixT<Real> y = op * view;
  return Eigen::Map<CMatrixT<Real>>(y.data(), op.rows() * rest, x.cols());
}

inline void check_target_dim(const RegisterShape& shape, std::span<const int> targets, Eigen::Index dim) {
  if (targets.empty()) throw Error(ErrorCode::InvalidArgument, "no target registers");
  check_register_list(shape, targets);
  if (shape.dim_of(targets) != dim) {
    throw Error(ErrorCode::DimMismatch, "operator dimension " + std::to_string(dim) +
                                            " does not match target dimension " +
                                            std::to_string(shape.dim_of(targets)));
  }
}

}  // namespace detail

template <typename Real>
BasicPureState<Real> apply_unitary(const BasicPureState<Real>& s, const CMatrixT<Real>& u,
                                   std::span<const int> targets) {
  if (!is_unitary(u)) throw Error(ErrorCode::NotUnitary, "operator is not unitary");
  detail::check_target_dim(s.shape(), targets, u.cols());
  const auto order = detail::targets_last(s.shape().size(), targets);
  const BasicPureState<Real> moved = permute(s, order);
  CMatrixT<Real> amps = detail::left_apply_last<Real>(u, moved.amplitudes());
  CVectorT<Real> v = amps.col(0);
  // Renormalize to absorb rounding; u is unitary to 1e-10 so this is a no-op in exact arithmetic.
  v /= v.norm();
  return permute(BasicPureState<Real>(moved.shape(), std::move(v)), detail::inverse_permutation(order));
}

template <typename Real>
BasicDensityMatrix<Real> apply_unitary(const BasicDensityMatrix<Real>& rho, const CMatrixT<Real>& u,
                                       std::span<const int> targets) {
  if (!is_unitary(u)) throw Error(ErrorCode::NotUnitary, "operator is not unitary");
  detail::check_target_dim(rho.shape(), targets, u.cols());
  const auto order = detail::targets_last(rho.shape().size(), targets);
  const BasicDensityMatrix<Real> moved = permute(rho, order);
  CMatrixT<Real> half = detail::left_apply_last<Real>(u, moved.matrix());
  CMatrixT<Real> full = detail::left_apply_last<Real>(u, CMatrixT<Real>(half.adjoint())).adjoint();
  return permute(BasicDensityMatrix<Real>::trusted(moved.shape(), std::move(full)),
                 detail::inverse_permutation(order));
}

/// Permutation matrix |v> -> |f(v)> over the label tuples of `shape`.
template <typename Real = double>
CMatrixT<Real> classical_reversible_unitary(const std::function<std::vector<int>(const std::vector<int>&)>& f,
                                            const RegisterShape& shape) {
  const Eigen::Index n = shape.total();
  const std::size_t regs = shape.size();
  auto encode = [&](const std::vector<int>& digits) {
    if (digits.size() != regs) throw Error(ErrorCode::NotBijective, "image tuple has wrong length");
    Eigen::Index idx = 0;
    for (std::size_t i = 0; i < regs; ++i) {
      if (digits[i] < 0 || digits[i] >= shape.dim(i)) throw Error(ErrorCode::NotBijective, "image label out of range");
      idx = idx * shape.dim(i) + digits[i];
    }
    return idx;
  };
  CMatrixT<Real> u = CMatrixT<Real>::Zero(n, n);
  std::vector<bool> hit(static_cast<std::size_t>(n), false);
  Eigen::Index images = 0;
  std::vector<int> digits(regs, 0);
  for (Eigen::Index col = 0; col < n; ++col) {
    const Eigen::Index row = encode(f(digits));
    if (!hit[static_cast<std::size_t>(row)]) {
      hit[static_cast<std::size_t>(row)] = true;
      ++images;
    }
    u(row, col) = Real(1);
    for (std::size_t k = regs; k-- > 0;) {
      if (++digits[k] < shape.dim(k)) break;
      digits[k] = 0;
    }
  }
  if (images != n) throw Error(ErrorCode::NotBijective, "map is not a bijection on basis labels");
  return u;
}

/// Sum_i (K_i ⊗ I) rho (K_i ⊗ I)^† with the Kraus operators acting on `targets`.
/// The output registers (`out_shape`) take the position of the smallest target index;
/// the remaining registers keep their relative order.
template <typename Real>
BasicDensityMatrix<Real> apply_kraus(const BasicDensityMatrix<Real>& rho, std::span<const CMatrixT<Real>> ops,
                                     std::span<const int> targets, const RegisterShape& out_shape) {
  if (ops.empty()) throw Error(ErrorCode::InvalidArgument, "empty Kraus set");
  detail::check_target_dim(rho.shape(), targets, ops.front().cols());
  for (const auto& k : ops) {
    if (k.cols() != ops.front().cols() || k.rows() != out_shape.total()) {
      throw Error(ErrorCode::DimMismatch, "Kraus operator dimensions disagree with channel shape");
    }
  }
  const std::size_t n = rho.shape().size();
  const auto order = detail::targets_last(n, targets);
  const BasicDensityMatrix<Real> moved = permute(rho, order);

  std::vector<int> rest(order.begin(), order.end() - static_cast<std::ptrdiff_t>(targets.size()));
  const RegisterShape rest_shape = rest.empty() ? RegisterShape({1}, {"_"}) : rho.shape().select(rest);
  const Eigen::Index out_dim = rest_shape.total() * out_shape.total();
  CMatrixT<Real> acc = CMatrixT<Real>::Zero(out_dim, out_dim);
  for (const auto& k : ops) {
    CMatrixT<Real> half = detail::left_apply_last<Real>(k, moved.matrix());
    acc += detail::left_apply_last<Real>(k, CMatrixT<Real>(half.adjoint())).adjoint();
  }
  if (rest.empty()) return BasicDensityMatrix<Real>::trusted(out_shape, std::move(acc));

  // Currently (rest..., out...). Move outputs to where the first target sat.
  const int anchor = *std::min_element(targets.begin(), targets.end());
  const int before = static_cast<int>(std::count_if(rest.begin(), rest.end(), [&](int r) { return r < anchor; }));
  const int n_rest = static_cast<int>(rest.size());
  const int n_out = static_cast<int>(out_shape.size());
  std::vector<int> final_order;
  for (int i = 0; i < before; ++i) final_order.push_back(i);
  for (int i = 0; i < n_out; ++i) final_order.push_back(n_rest + i);
  for (int i = before; i < n_rest; ++i) final_order.push_back(i);
  return permute(BasicDensityMatrix<Real>::trusted(rest_shape.concat(out_shape), std::move(acc)), final_order);
}

// ---------------------------------------------------------------------------
// Information quantities

/// F(rho, sigma) = || sqrt(rho) sqrt(sigma) ||_1^2, clamped to [0, 1].
template <typename Real>
Real fidelity(const BasicDensityMatrix<Real>& rho, const BasicDensityMatrix<Real>& sigma) {
  if (rho.shape().dims() != sigma.shape().dims()) throw Error(ErrorCode::ShapeMismatch, "fidelity of mismatched shapes");
  const CMatrixT<Real> prod = detail::psd_sqrt<Real>(rho.matrix()) * detail::psd_sqrt<Real>(sigma.matrix());
  Eigen::JacobiSVD<CMatrixT<Real>> svd(prod);
  const Real tn = svd.singularValues().sum();
  return std::clamp(tn * tn, Real(0), Real(1));
}

template <typename Real>
Real trace_distance(const BasicDensityMatrix<Real>& rho, const BasicDensityMatrix<Real>& sigma) {
  if (rho.shape().dims() != sigma.shape().dims()) {
    throw Error(ErrorCode::ShapeMismatch, "trace distance of mismatched shapes");
  }
  Eigen::SelfAdjointEigenSolver<CMatrixT<Real>> solver(rho.matrix() - sigma.matrix(), Eigen::EigenvaluesOnly);
  return solver.eigenvalues().cwiseAbs().sum() / Real(2);
}

/// Shannon entropy in bits of a probability vector, with 0 log 0 = 0.
template <typename Real>
Real shannon_bits(const RVectorT<Real>& p) {
  Real h = 0;
  for (Eigen::Index i = 0; i < p.size(); ++i) {
    if (p(i) > 0) h -= p(i) * std::log2(p(i));
  }
  return h;
}

template <typename Real>
Real von_neumann_entropy(const BasicDensityMatrix<Real>& rho) {
  return shannon_bits<Real>(detail::clipped_eigenvalues<Real>(rho.matrix()));
}

/// I(A'>B) = H(B) - H(A'B), where A' are the `reference` registers and B the rest.
template <typename Real>
Real coherent_information(const BasicDensityMatrix<Real>& rho, std::span<const int> reference) {
  detail::check_register_list(rho.shape(), reference);
  std::vector<int> output;
  for (int r = 0; r < static_cast<int>(rho.shape().size()); ++r) {
    if (std::find(reference.begin(), reference.end(), r) == reference.end()) output.push_back(r);
  }
  if (reference.empty() || output.empty()) {
    throw Error(ErrorCode::InvalidArgument, "coherent information needs a nontrivial cut");
  }
  return von_neumann_entropy(partial_trace(rho, output)) - von_neumann_entropy(rho);
}

// ---------------------------------------------------------------------------
// Entanglement resources

template <typename Real = double>
BasicPureState<Real> maximally_entangled(int d) {
  if (d < 2) throw Error(ErrorCode::InvalidArgument, "maximally entangled state needs d >= 2");
  CVectorT<Real> amps = CVectorT<Real>::Zero(d * d);
  for (int j = 0; j < d; ++j) amps(j * d + j) = Real(1) / std::sqrt(Real(d));
  return {RegisterShape({d, d}, {"A'", "A"}), std::move(amps)};
}

/// Purification with a single reference register "R" (dimension = dim rho) placed first:
/// sum_k sqrt(lambda_k) |k>_R |e_k>.
template <typename Real>
BasicPureState<Real> purify(const BasicDensityMatrix<Real>& rho) {
  Eigen::SelfAdjointEigenSolver<CMatrixT<Real>> solver(rho.matrix());
  const Eigen::Index n = rho.dim();
  CVectorT<Real> amps(n * n);
  for (Eigen::Index k = 0; k < n; ++k) {
    const Real lambda = solver.eigenvalues()(k);
    if (lambda < -Tolerance<Real>::matrix) throw Error(ErrorCode::InvalidState, "negative eigenvalue in purify");
    const Real w = lambda > 0 ? std::sqrt(lambda) : Real(0);
    amps.segment(k * n, n) = w * solver.eigenvectors().col(k);
  }
  RegisterShape shape = RegisterShape({static_cast<int>(n)}, {"R"}).concat(rho.shape());
  return BasicPureState<Real>::normalized(std::move(shape), std::move(amps));
}

/// Cyclic shift X|j> = |j+1 mod d>.
template <typename Real = double>
CMatrixT<Real> shift_operator(int d) {
  CMatrixT<Real> x = CMatrixT<Real>::Zero(d, d);
  for (int j = 0; j < d; ++j) x((j + 1) % d, j) = Real(1);
  return x;
}

/// Clock Z|j> = omega^j |j>, omega = exp(2 pi i / d).
template <typename Real = double>
CMatrixT<Real> clock_operator(int d) {
  CMatrixT<Real> z = CMatrixT<Real>::Zero(d, d);
  for (int j = 0; j < d; ++j) z(j, j) = std::polar(Real(1), Real(2) * std::numbers::pi_v<Real> * Real(j) / Real(d));
  return z;
}

/// X^a Z^b.
template <typename Real = double>
CMatrixT<Real> weyl_operator(int d, int a, int b) {
  CMatrixT<Real> x = CMatrixT<Real>::Identity(d, d);
  CMatrixT<Real> z = CMatrixT<Real>::Identity(d, d);
  const CMatrixT<Real> xs = shift_operator<Real>(d);
  const CMatrixT<Real> zs = clock_operator<Real>(d);
  for (int i = 0; i < a; ++i) x = xs * x;
  for (int i = 0; i < b; ++i) z = zs * z;
  return x * z;
}

/// Teleports `input` through `resource` (must be the canonical |Phi_d>). The generalized Bell
/// measurement on (input, resource half 1) is summed over all d^2 outcomes; outcome (a, b)
/// projects on (X^a Z^b ⊗ I)|Phi> and is corrected by X^a Z^b on resource half 2.
template <typename Real>
BasicDensityMatrix<Real> teleport(const BasicDensityMatrix<Real>& input, const BasicPureState<Real>& resource) {
  const auto d = static_cast<int>(input.dim());
  if (resource.shape().size() != 2 || resource.shape().dim(0) != d || resource.shape().dim(1) != d) {
    throw Error(ErrorCode::DimMismatch, "resource must be a d x d maximally entangled pair");
  }
  const BasicPureState<Real> phi = maximally_entangled<Real>(d);
  if (std::abs(std::abs(phi.amplitudes().dot(resource.amplitudes())) - Real(1)) > Tolerance<Real>::matrix) {
    throw Error(ErrorCode::InvalidArgument, "resource is not the canonical maximally entangled state");
  }
  // Joint state on (C, R1, R2); R2 is the fastest-varying index.
  const CMatrixT<Real> joint = Eigen::kroneckerProduct(input.matrix(), resource.density().matrix()).eval();
  CMatrixT<Real> out = CMatrixT<Real>::Zero(d, d);
  for (int a = 0; a < d; ++a) {
    for (int b = 0; b < d; ++b) {
      const CMatrixT<Real> w = weyl_operator<Real>(d, a, b);
      const CVectorT<Real> bell = Eigen::kroneckerProduct(w, CMatrixT<Real>::Identity(d, d)) * phi.amplitudes();
      // (<bell| ⊗ I_R2) joint (|bell> ⊗ I_R2)
      const CMatrixT<Real> proj = Eigen::kroneckerProduct(bell, CMatrixT<Real>::Identity(d, d)).eval();
      const CMatrixT<Real> branch = proj.adjoint() * joint * proj;
      out += w * branch * w.adjoint();
    }
  }
  out = (out + out.adjoint()).eval() / Real(2);
  return BasicDensityMatrix<Real>::trusted(RegisterShape({d}, {"B"}), std::move(out));
}

}  // namespace qss
