#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "qss/error.hpp"

namespace qss {

bool is_prime(std::int64_t n);

/// Element of the prime field F_q. Values are always kept reduced in [0, q).
class FqElement {
 public:
  static constexpr std::int64_t kMaxModulus = 1 << 16;

  /// Reduces `value` modulo `modulus`; throws NotPrime unless `modulus` is a prime <= 2^16.
  FqElement(std::int64_t value, std::int64_t modulus);

  std::int64_t value() const noexcept { return value_; }
  std::int64_t modulus() const noexcept { return modulus_; }

  friend FqElement operator+(FqElement a, FqElement b);
  friend FqElement operator-(FqElement a, FqElement b);
  friend FqElement operator*(FqElement a, FqElement b);
  friend FqElement operator-(FqElement a);
  friend bool operator==(const FqElement&, const FqElement&) = default;

  FqElement pow(std::uint64_t exponent) const;

 private:
  struct Unchecked {};
  FqElement(std::int64_t value, std::int64_t modulus, Unchecked) : value_(value), modulus_(modulus) {}

  std::int64_t value_;
  std::int64_t modulus_;

  friend class FqMatrix;
  friend FqElement field_inv(FqElement x);
};

/// Multiplicative inverse; throws ZeroInverse for x = 0.
FqElement field_inv(FqElement x);

/// Dense matrix over F_q. Entries live in an Eigen int64 matrix and are always reduced.
class FqMatrix {
 public:
  using Storage = Eigen::Matrix<std::int64_t, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

  FqMatrix(Eigen::Index rows, Eigen::Index cols, std::int64_t modulus);
  /// Entries are reduced modulo `modulus`.
  FqMatrix(Storage entries, std::int64_t modulus);
  /// Row-major list of elements; all must share one modulus.
  FqMatrix(Eigen::Index rows, Eigen::Index cols, std::span<const FqElement> entries);

  static FqMatrix identity(Eigen::Index n, std::int64_t modulus);
  static FqMatrix column(std::span<const std::int64_t> values, std::int64_t modulus);

  Eigen::Index rows() const noexcept { return entries_.rows(); }
  Eigen::Index cols() const noexcept { return entries_.cols(); }
  std::int64_t modulus() const noexcept { return modulus_; }

  FqElement at(Eigen::Index r, Eigen::Index c) const;
  void set(Eigen::Index r, Eigen::Index c, std::int64_t value);
  const Storage& entries() const noexcept { return entries_; }

  /// Rows selected in the given order.
  FqMatrix select_rows(std::span<const int> rows) const;
  FqMatrix select_cols(std::span<const int> cols) const;

  friend bool operator==(const FqMatrix& a, const FqMatrix& b) {
    return a.modulus_ == b.modulus_ && a.entries_.rows() == b.entries_.rows() &&
           a.entries_.cols() == b.entries_.cols() && a.entries_ == b.entries_;
  }

 private:
  Storage entries_;
  std::int64_t modulus_;
};

/// Column-major convention for the secret: s multiplies x^{degree-1}, so row k is
/// (x_k^{degree-1}, 1, x_k, ..., x_k^{degree-2}) applied to (s, a_1, ..., a_{degree-1}).
FqMatrix vandermonde(std::span<const FqElement> points, int degree);

FqMatrix mat_mul(const FqMatrix& a, const FqMatrix& b);

/// Gauss-Jordan inverse with exact field inverses. Throws SingularMatrix / ShapeMismatch.
FqMatrix mat_inverse(const FqMatrix& m);

/// Solves a·x = rhs for square invertible a.
std::vector<std::int64_t> solve(const FqMatrix& a, std::span<const std::int64_t> rhs);

}  // namespace qss
