#include "qss/finite_field.hpp"

#include <algorithm>
#include <string>

namespace qss {

namespace {

std::int64_t reduce(std::int64_t v, std::int64_t q) {
  std::int64_t r = v % q;
  return r < 0 ? r + q : r;
}

void require_same_modulus(std::int64_t a, std::int64_t b) {
  if (a != b) {
    throw Error(ErrorCode::ModulusMismatch,
                "moduli " + std::to_string(a) + " and " + std::to_string(b) + " differ");
  }
}

}  // namespace

bool is_prime(std::int64_t n) {
  if (n < 2) return false;
  for (std::int64_t d = 2; d * d <= n; ++d) {
    if (n % d == 0) return false;
  }
  return true;
}

FqElement::FqElement(std::int64_t value, std::int64_t modulus) : modulus_(modulus) {
  if (modulus > kMaxModulus || !is_prime(modulus)) {
    throw Error(ErrorCode::NotPrime, "modulus " + std::to_string(modulus) + " is not a prime <= 2^16");
  }
  value_ = reduce(value, modulus);
}

FqElement operator+(FqElement a, FqElement b) {
  require_same_modulus(a.modulus_, b.modulus_);
  return {(a.value_ + b.value_) % a.modulus_, a.modulus_, FqElement::Unchecked{}};
}

FqElement operator-(FqElement a, FqElement b) {
  require_same_modulus(a.modulus_, b.modulus_);
  return {reduce(a.value_ - b.value_, a.modulus_), a.modulus_, FqElement::Unchecked{}};
}

FqElement operator*(FqElement a, FqElement b) {
  require_same_modulus(a.modulus_, b.modulus_);
  return {(a.value_ * b.value_) % a.modulus_, a.modulus_, FqElement::Unchecked{}};
}

FqElement operator-(FqElement a) {
  return {reduce(-a.value_, a.modulus_), a.modulus_, FqElement::Unchecked{}};
}

FqElement FqElement::pow(std::uint64_t exponent) const {
  std::int64_t result = 1 % modulus_;
  std::int64_t base = value_;
  while (exponent > 0) {
    if (exponent & 1U) result = (result * base) % modulus_;
    base = (base * base) % modulus_;
    exponent >>= 1U;
  }
  return {result, modulus_, Unchecked{}};
}

FqElement field_inv(FqElement x) {
  if (x.value() == 0) throw Error(ErrorCode::ZeroInverse, "zero has no inverse");
  // Fermat: x^{q-2} = x^{-1} for prime q.
  return x.pow(static_cast<std::uint64_t>(x.modulus() - 2));
}

FqMatrix::FqMatrix(Eigen::Index rows, Eigen::Index cols, std::int64_t modulus)
    : entries_(Storage::Zero(rows, cols)), modulus_(modulus) {
  if (rows <= 0 || cols <= 0) throw Error(ErrorCode::ShapeMismatch, "matrix dimensions must be positive");
  (void)FqElement(0, modulus);
}

FqMatrix::FqMatrix(Storage entries, std::int64_t modulus) : entries_(std::move(entries)), modulus_(modulus) {
  if (entries_.rows() <= 0 || entries_.cols() <= 0) {
    throw Error(ErrorCode::ShapeMismatch, "matrix dimensions must be positive");
  }
  (void)FqElement(0, modulus);
  entries_ = entries_.unaryExpr([modulus](std::int64_t v) { return reduce(v, modulus); });
}

FqMatrix::FqMatrix(Eigen::Index rows, Eigen::Index cols, std::span<const FqElement> entries)
    : FqMatrix(rows, cols, entries.empty() ? 2 : entries.front().modulus()) {
  if (static_cast<Eigen::Index>(entries.size()) != rows * cols) {
    throw Error(ErrorCode::ShapeMismatch, "entry count does not match rows x cols");
  }
  for (Eigen::Index i = 0; i < rows * cols; ++i) {
    require_same_modulus(entries[i].modulus(), modulus_);
    entries_(i / cols, i % cols) = entries[i].value();
  }
}

FqMatrix FqMatrix::identity(Eigen::Index n, std::int64_t modulus) {
  return FqMatrix(Storage::Identity(n, n), modulus);
}

FqMatrix FqMatrix::column(std::span<const std::int64_t> values, std::int64_t modulus) {
  FqMatrix m(static_cast<Eigen::Index>(values.size()), 1, modulus);
  for (std::size_t i = 0; i < values.size(); ++i) m.set(static_cast<Eigen::Index>(i), 0, values[i]);
  return m;
}

FqElement FqMatrix::at(Eigen::Index r, Eigen::Index c) const {
  return {entries_(r, c), modulus_, FqElement::Unchecked{}};
}

void FqMatrix::set(Eigen::Index r, Eigen::Index c, std::int64_t value) {
  entries_(r, c) = reduce(value, modulus_);
}

FqMatrix FqMatrix::select_rows(std::span<const int> rows) const {
  Storage out(static_cast<Eigen::Index>(rows.size()), entries_.cols());
  for (std::size_t i = 0; i < rows.size(); ++i) out.row(static_cast<Eigen::Index>(i)) = entries_.row(rows[i]);
  return {std::move(out), modulus_};
}

FqMatrix FqMatrix::select_cols(std::span<const int> cols) const {
  Storage out(entries_.rows(), static_cast<Eigen::Index>(cols.size()));
  for (std::size_t i = 0; i < cols.size(); ++i) out.col(static_cast<Eigen::Index>(i)) = entries_.col(cols[i]);
  return {std::move(out), modulus_};
}

FqMatrix vandermonde(std::span<const FqElement> points, int degree) {
  if (degree < 1) throw Error(ErrorCode::InvalidArgument, "degree must be >= 1");
  if (points.empty()) throw Error(ErrorCode::InvalidArgument, "no evaluation points");
  const std::int64_t q = points.front().modulus();
  for (std::size_t i = 0; i < points.size(); ++i) {
    require_same_modulus(points[i].modulus(), q);
    for (std::size_t j = 0; j < i; ++j) {
      if (points[i] == points[j]) {
        throw Error(ErrorCode::DuplicatePoints, "evaluation point " + std::to_string(points[i].value()) + " repeated");
      }
    }
  }
  FqMatrix m(static_cast<Eigen::Index>(points.size()), degree, q);
  for (std::size_t k = 0; k < points.size(); ++k) {
    const auto r = static_cast<Eigen::Index>(k);
    m.set(r, 0, points[k].pow(static_cast<std::uint64_t>(degree - 1)).value());
    for (int i = 1; i < degree; ++i) m.set(r, i, points[k].pow(static_cast<std::uint64_t>(i - 1)).value());
  }
  return m;
}

FqMatrix mat_mul(const FqMatrix& a, const FqMatrix& b) {
  require_same_modulus(a.modulus(), b.modulus());
  if (a.cols() != b.rows()) throw Error(ErrorCode::ShapeMismatch, "inner dimensions differ");
  // Entries are < 2^16, so row-column sums stay far below int64 overflow.
  FqMatrix::Storage product = a.entries() * b.entries();
  return {std::move(product), a.modulus()};
}

FqMatrix mat_inverse(const FqMatrix& m) {
  if (m.rows() != m.cols()) throw Error(ErrorCode::ShapeMismatch, "inverse of a non-square matrix");
  const Eigen::Index n = m.rows();
  const std::int64_t q = m.modulus();
  FqMatrix::Storage work(n, 2 * n);
  work.leftCols(n) = m.entries();
  work.rightCols(n) = FqMatrix::Storage::Identity(n, n);

  for (Eigen::Index col = 0; col < n; ++col) {
    Eigen::Index pivot = col;
    while (pivot < n && work(pivot, col) == 0) ++pivot;
    if (pivot == n) throw Error(ErrorCode::SingularMatrix, "matrix is singular over F_" + std::to_string(q));
    work.row(col).swap(work.row(pivot));

    const std::int64_t inv = field_inv(FqElement(work(col, col), q)).value();
    work.row(col) = work.row(col).unaryExpr([&](std::int64_t v) { return v * inv % q; });
    for (Eigen::Index r = 0; r < n; ++r) {
      if (r == col || work(r, col) == 0) continue;
      const std::int64_t factor = work(r, col);
      for (Eigen::Index c = 0; c < 2 * n; ++c) work(r, c) = reduce(work(r, c) - factor * work(col, c), q);
    }
  }
  return {work.rightCols(n), q};
}

std::vector<std::int64_t> solve(const FqMatrix& a, std::span<const std::int64_t> rhs) {
  if (static_cast<Eigen::Index>(rhs.size()) != a.rows()) {
    throw Error(ErrorCode::ShapeMismatch, "right-hand side length differs from row count");
  }
  const FqMatrix x = mat_mul(mat_inverse(a), FqMatrix::column(rhs, a.modulus()));
  std::vector<std::int64_t> out(static_cast<std::size_t>(x.rows()));
  for (Eigen::Index i = 0; i < x.rows(); ++i) out[static_cast<std::size_t>(i)] = x.entries()(i, 0);
  return out;
}

}  // namespace qss
