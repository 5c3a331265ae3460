#include <catch2/catch_amalgamated.hpp>

#include <bit>
#include <random>

#include "oracles.hpp"
#include "test_util.hpp"
#include "qss/finite_field.hpp"

using namespace qss;

namespace {

FqMatrix mat(std::int64_t q, std::initializer_list<std::initializer_list<std::int64_t>> rows) {
  const auto r = static_cast<Eigen::Index>(rows.size());
  const auto c = static_cast<Eigen::Index>(rows.begin()->size());
  FqMatrix m(r, c, q);
  Eigen::Index i = 0;
  for (const auto& row : rows) {
    Eigen::Index j = 0;
    for (std::int64_t v : row) m.set(i, j++, v);
    ++i;
  }
  return m;
}

}  // namespace

TEST_CASE("field_inv", "[finite_field]") {
  CHECK(field_inv(FqElement(1, 3)).value() == 1);
  CHECK(field_inv(FqElement(2, 3)).value() == 2);
  CHECK(field_inv(FqElement(3, 5)).value() == oracle::inverse_by_scan(3, 5));
  CHECK(field_inv(FqElement(3, 5)).value() == 2);
  CHECK(code_of([] { (void)field_inv(FqElement(0, 7)); }) == ErrorCode::ZeroInverse);
}

TEST_CASE("field elements reject composite moduli and reduce values", "[finite_field]") {
  CHECK(code_of([] { (void)FqElement(1, 4); }) == ErrorCode::NotPrime);
  CHECK(code_of([] { (void)FqElement(1, 1); }) == ErrorCode::NotPrime);
  CHECK(FqElement(-1, 5).value() == 4);
  CHECK(FqElement(12, 5).value() == 2);
  CHECK(code_of([] { (void)(FqElement(1, 3) + FqElement(1, 5)); }) == ErrorCode::ModulusMismatch);
}

TEST_CASE("field ops agree with integer arithmetic mod q (exhaustive)", "[finite_field][property]") {
  for (std::int64_t q : {2, 3, 5, 7}) {
    for (std::int64_t a = 0; a < q; ++a) {
      for (std::int64_t b = 0; b < q; ++b) {
        const FqElement x(a, q), y(b, q);
        CHECK((x + y).value() == (a + b) % q);
        CHECK((x * y).value() == (a * b) % q);
        CHECK((x - y).value() == ((a - b) % q + q) % q);
      }
      if (a != 0) CHECK((FqElement(a, q) * field_inv(FqElement(a, q))).value() == 1);
    }
  }
}

TEST_CASE("vandermonde follows the secret-first convention", "[finite_field]") {
  const std::vector<FqElement> pts{FqElement(0, 3), FqElement(1, 3), FqElement(2, 3)};
  const FqMatrix m = vandermonde(pts, 2);
  CHECK(m == mat(3, {{0, 1}, {1, 1}, {2, 1}}));

  auto shares = [&](std::int64_t s, std::int64_t a) {
    const std::vector<std::int64_t> coeffs{s, a};
    const FqMatrix y = mat_mul(m, FqMatrix::column(coeffs, 3));
    return std::vector<std::int64_t>{y.entries()(0, 0), y.entries()(1, 0), y.entries()(2, 0)};
  };
  CHECK(shares(1, 0) == std::vector<std::int64_t>{0, 1, 2});
  CHECK(shares(2, 0) == std::vector<std::int64_t>{0, 2, 1});
  for (std::int64_t a = 0; a < 3; ++a) CHECK(shares(0, a) == std::vector<std::int64_t>{a, a, a});

  const std::vector<FqElement> dup{FqElement(1, 5), FqElement(1, 5)};
  CHECK(code_of([&] { (void)vandermonde(dup, 2); }) == ErrorCode::DuplicatePoints);
}

TEST_CASE("mat_inverse", "[finite_field]") {
  CHECK(mat_inverse(FqMatrix::identity(3, 5)) == FqMatrix::identity(3, 5));

  const FqMatrix a = mat(3, {{1, 0}, {1, 1}});
  const FqMatrix inv = mat_inverse(a);
  CHECK(mat_mul(a, inv) == FqMatrix::identity(2, 3));
  CHECK(inv == mat(3, {{1, 0}, {2, 1}}));

  CHECK(code_of([] { (void)mat_inverse(mat(3, {{1, 1}, {1, 1}})); }) == ErrorCode::SingularMatrix);
  CHECK(code_of([] { (void)mat_inverse(mat(3, {{1, 1, 0}, {1, 1, 2}})); }) == ErrorCode::ShapeMismatch);
}

TEST_CASE("mat_mul and solve", "[finite_field]") {
  const FqMatrix a = mat(7, {{3, 5, 1}, {2, 0, 6}});
  CHECK(mat_mul(a, FqMatrix::identity(3, 7)) == a);
  CHECK(code_of([&] { (void)mat_mul(a, a); }) == ErrorCode::ShapeMismatch);

  const std::vector<std::int64_t> rhs{1, 2};
  const auto x = solve(mat(3, {{1, 0}, {1, 1}}), rhs);
  CHECK(x == std::vector<std::int64_t>{1, 1});
  // substitute back
  CHECK((1 * x[0] + 0 * x[1]) % 3 == 1);
  CHECK((1 * x[0] + 1 * x[1]) % 3 == 2);

  // Row vector (x^{t-1}, 1, ..., x^{t-2}) against (s, a) gives p(x).
  const std::vector<FqElement> pts{FqElement(4, 5)};
  const FqMatrix row = vandermonde(pts, 3);
  const std::vector<std::int64_t> coeffs{2, 3, 1};  // p(x) = 2x^2 + 3 + x
  const FqMatrix y = mat_mul(row, FqMatrix::column(coeffs, 5));
  CHECK(y.entries()(0, 0) == (2 * 16 + 3 + 4) % 5);
}

TEST_CASE("random invertible matrices invert (property)", "[finite_field][property]") {
  std::mt19937_64 rng(7);
  int checked = 0;
  for (std::int64_t q : {2, 3, 5, 7, 11}) {
    std::uniform_int_distribution<std::int64_t> dist(0, q - 1);
    for (int trial = 0; trial < 60; ++trial) {
      const Eigen::Index n = 1 + trial % 4;
      FqMatrix m(n, n, q);
      for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < n; ++j) m.set(i, j, dist(rng));
      try {
        const FqMatrix inv = mat_inverse(m);
        CHECK(mat_mul(m, inv) == FqMatrix::identity(n, q));
        CHECK(mat_mul(inv, m) == FqMatrix::identity(n, q));
        ++checked;
      } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::SingularMatrix);
      }
    }
  }
  CHECK(checked > 150);
}

TEST_CASE("any t rows of a 2t-1 point vandermonde are invertible", "[finite_field][property]") {
  for (int t = 1; t <= 3; ++t) {
    for (std::int64_t q : {5, 7}) {
      std::vector<FqElement> pts;
      for (int i = 0; i < 2 * t - 1; ++i) pts.emplace_back(i + 1, q);
      const FqMatrix m = vandermonde(pts, t);
      const int n = 2 * t - 1;
      for (unsigned mask = 0; mask < (1U << n); ++mask) {
        if (std::popcount(mask) != t) continue;
        std::vector<int> rows;
        for (int i = 0; i < n; ++i)
          if (mask & (1U << i)) rows.push_back(i);
        CHECK_NOTHROW(mat_inverse(m.select_rows(rows)));
      }
    }
  }
}
