#pragma once

// Independent reference computations for the unit and acceptance tests. Nothing here
// calls into the library's engine; everything is explicit loops over basis indices.

#include <algorithm>
#include <cmath>
#include <complex>
#include <tuple>
#include <cstdint>
#include <vector>

namespace oracle {

using cplx = std::complex<double>;
using Vec = std::vector<cplx>;
using Mat = std::vector<std::vector<cplx>>;

/// Brute-force modular inverse by scanning y in [1, q).
inline std::int64_t inverse_by_scan(std::int64_t x, std::int64_t q) {
  for (std::int64_t y = 1; y < q; ++y) {
    if ((x * y) % q == 1) return y;
  }
  return -1;
}

/// CGL99 encoding of alpha|0> + beta|1> + gamma|2>, written out ket by ket.
inline Vec cgl99_encoded(cplx alpha, cplx beta, cplx gamma) {
  Vec v(27, 0.0);
  const double n = 1.0 / std::sqrt(3.0);
  auto idx = [](int a, int b, int c) { return a * 9 + b * 3 + c; };
  for (auto [a, b, c] : {std::tuple{0, 0, 0}, {1, 1, 1}, {2, 2, 2}}) v[idx(a, b, c)] += alpha * n;
  for (auto [a, b, c] : {std::tuple{0, 1, 2}, {1, 2, 0}, {2, 0, 1}}) v[idx(a, b, c)] += beta * n;
  for (auto [a, b, c] : {std::tuple{0, 2, 1}, {1, 0, 2}, {2, 1, 0}}) v[idx(a, b, c)] += gamma * n;
  return v;
}

/// Marginal of a pure state on one register of a product of `dims`, by explicit summation.
inline Mat single_register_marginal(const Vec& psi, const std::vector<int>& dims, std::size_t keep) {
  const int dk = dims[keep];
  Mat out(static_cast<std::size_t>(dk), std::vector<cplx>(static_cast<std::size_t>(dk), 0.0));
  std::size_t total = 1;
  for (int d : dims) total *= static_cast<std::size_t>(d);
  auto digits = [&](std::size_t index) {
    std::vector<int> dg(dims.size());
    for (std::size_t r = dims.size(); r-- > 0;) {
      dg[r] = static_cast<int>(index % static_cast<std::size_t>(dims[r]));
      index /= static_cast<std::size_t>(dims[r]);
    }
    return dg;
  };
  for (std::size_t i = 0; i < total; ++i) {
    const auto di = digits(i);
    for (std::size_t j = 0; j < total; ++j) {
      const auto dj = digits(j);
      bool same_rest = true;
      for (std::size_t r = 0; r < dims.size(); ++r) {
        if (r != keep && di[r] != dj[r]) same_rest = false;
      }
      if (same_rest) out[static_cast<std::size_t>(di[keep])][static_cast<std::size_t>(dj[keep])] += psi[i] * std::conj(psi[j]);
    }
  }
  return out;
}

/// max |a_ij - b_ij|.
inline double max_abs_diff(const Mat& a, const Mat& b) {
  double m = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (std::size_t j = 0; j < a[i].size(); ++j) m = std::max(m, std::abs(a[i][j] - b[i][j]));
  }
  return m;
}

/// sum_i |<i|psi>|^2-weighted overlap |<phi|psi>|^2.
inline double overlap_sq(const Vec& a, const Vec& b) {
  cplx s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += std::conj(a[i]) * b[i];
  return std::norm(s);
}

}  // namespace oracle
