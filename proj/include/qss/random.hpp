#pragma once

#include <random>

#include "qss/qudit_engine.hpp"

namespace qss {

using Rng = std::mt19937_64;

template <typename Real = double>
CVectorT<Real> complex_gaussian_vector(Eigen::Index n, Rng& rng) {
  std::normal_distribution<Real> normal(Real(0), Real(1));
  CVectorT<Real> v(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const Real re = normal(rng);
    const Real im = normal(rng);
    v(i) = {re, im};
  }
  return v;
}

/// Haar-random pure state (normalized complex Gaussian vector).
template <typename Real = double>
BasicPureState<Real> random_pure_state(const RegisterShape& shape, Rng& rng) {
  return BasicPureState<Real>::normalized(shape, complex_gaussian_vector<Real>(shape.total(), rng));
}

/// Ginibre-ensemble density matrix G G^† / tr(G G^†), full rank with probability 1.
template <typename Real = double>
BasicDensityMatrix<Real> random_density_matrix(const RegisterShape& shape, Rng& rng) {
  const Eigen::Index n = shape.total();
  CMatrixT<Real> g(n, n);
  for (Eigen::Index c = 0; c < n; ++c) g.col(c) = complex_gaussian_vector<Real>(n, rng);
  CMatrixT<Real> m = g * g.adjoint();
  m /= m.trace().real();
  m = (m + m.adjoint()).eval() / Real(2);
  return BasicDensityMatrix<Real>::trusted(shape, std::move(m));
}

/// Haar-random unitary via QR of a Ginibre matrix with the phase of R's diagonal removed.
template <typename Real = double>
CMatrixT<Real> random_unitary(Eigen::Index n, Rng& rng) {
  CMatrixT<Real> g(n, n);
  for (Eigen::Index c = 0; c < n; ++c) g.col(c) = complex_gaussian_vector<Real>(n, rng);
  Eigen::HouseholderQR<CMatrixT<Real>> qr(g);
  CMatrixT<Real> q = qr.householderQ();
  const CMatrixT<Real> r = qr.matrixQR().template triangularView<Eigen::Upper>();
  for (Eigen::Index i = 0; i < n; ++i) {
    const std::complex<Real> d = r(i, i);
    if (std::abs(d) > 0) q.col(i) *= d / std::abs(d);
  }
  return q;
}

}  // namespace qss
