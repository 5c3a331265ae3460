#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <numbers>

#include "oracles.hpp"
#include "qss/channels.hpp"
#include "qss/qudit_engine.hpp"
#include "qss/random.hpp"
#include "test_util.hpp"

using namespace qss;
using Catch::Matchers::WithinAbs;

namespace {

PureState ket(std::vector<int> dims, std::vector<int> digits) {
  return PureState::basis(RegisterShape(std::move(dims)), digits);
}

double max_diff(const CMatrix& a, const CMatrix& b) { return (a - b).cwiseAbs().maxCoeff(); }

}  // namespace

TEST_CASE("tensor and permute", "[engine]") {
  const PureState s = tensor(ket({2}, {0}), ket({2}, {1}));
  CHECK(max_diff(s.amplitudes(), ket({2, 2}, {0, 1}).amplitudes()) == 0.0);

  const std::vector<int> swap{1, 0};
  CHECK(max_diff(permute(s, swap).amplitudes(), ket({2, 2}, {1, 0}).amplitudes()) == 0.0);

  Rng rng(11);
  const RegisterShape shape({2, 3, 5}, {"a", "b", "c"});
  const std::vector<int> perm{2, 0, 1};
  const std::vector<int> inv{1, 2, 0};
  for (int i = 0; i < 20; ++i) {
    const PureState psi = random_pure_state(shape, rng);
    const PureState moved = permute(psi, perm);
    CHECK(moved.shape().dims() == std::vector<int>{5, 2, 3});
    CHECK(max_diff(permute(moved, inv).amplitudes(), psi.amplitudes()) < 1e-15);
    const DensityMatrix rho = random_density_matrix(shape, rng);
    CHECK(max_diff(permute(permute(rho, perm), inv).matrix(), rho.matrix()) < 1e-15);
  }
  CHECK(code_of([] { (void)RegisterShape({1 << 11, 1 << 10}); }) == ErrorCode::ShapeCapExceeded);
}

TEST_CASE("states validate their invariants", "[engine]") {
  CVector v(2);
  v << 1.0, 1.0;
  CHECK(code_of([&] { (void)PureState(RegisterShape({2}), v); }) == ErrorCode::InvalidState);
  CMatrix m(2, 2);
  m << 0.5, 0.1, 0.2, 0.5;
  CHECK(code_of([&] { (void)DensityMatrix(RegisterShape({2}), m); }) == ErrorCode::InvalidState);
  m << 1.5, 0.0, 0.0, -0.5;
  CHECK(code_of([&] { (void)DensityMatrix(RegisterShape({2}), m); }) == ErrorCode::InvalidState);
  m << 0.5, 0.0, 0.0, 0.5;
  CHECK_NOTHROW(DensityMatrix(RegisterShape({2}), m));
}

TEST_CASE("partial_trace", "[engine]") {
  for (int d : {2, 3, 5}) {
    const DensityMatrix marginal = partial_trace(maximally_entangled(d).density(), std::vector<int>{0});
    CHECK(max_diff(marginal.matrix(), CMatrix::Identity(d, d) / d) < 1e-15);
  }
  Rng rng(3);
  const DensityMatrix rho = random_density_matrix(RegisterShape({3}), rng);
  const DensityMatrix sigma = random_density_matrix(RegisterShape({2, 2}), rng);
  CHECK(max_diff(partial_trace(tensor(rho, sigma), std::vector<int>{0}).matrix(), rho.matrix()) < 1e-12);
  CHECK(max_diff(partial_trace(tensor(rho, sigma), std::vector<int>{1, 2}).matrix(), sigma.matrix()) < 1e-12);
  CHECK(code_of([&] { (void)partial_trace(rho, std::vector<int>{}); }) == ErrorCode::EmptyKeepSet);

  SECTION("single CGL99 share marginal matches the brute-force 27-dim oracle") {
    const PureState secret = random_pure_state(RegisterShape({3}), rng);
    const auto& a = secret.amplitudes();
    const oracle::Vec enc = oracle::cgl99_encoded(a(0), a(1), a(2));
    CVector amps(27);
    for (int i = 0; i < 27; ++i) amps(i) = enc[static_cast<std::size_t>(i)];
    const PureState encoded(RegisterShape({3, 3, 3}), amps);
    for (int keep = 0; keep < 3; ++keep) {
      const oracle::Mat brute = oracle::single_register_marginal(enc, {3, 3, 3}, static_cast<std::size_t>(keep));
      const DensityMatrix lib = partial_trace(encoded, std::vector<int>{keep});
      for (int i = 0; i < 3; ++i) {
        for (int j = 0; j < 3; ++j) {
          CHECK(std::abs(lib.matrix()(i, j) - brute[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)]) < 1e-14);
          CHECK(std::abs(brute[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] - (i == j ? 1.0 / 3 : 0.0)) < 1e-14);
        }
      }
    }
  }
}

TEST_CASE("apply_unitary", "[engine]") {
  const CMatrix add = classical_reversible_unitary(
      [](const std::vector<int>& v) { return std::vector<int>{v[0], (v[0] + v[1]) % 3}; }, RegisterShape({3, 3}));
  const PureState out = apply_unitary(ket({3, 3}, {1, 2}), add, std::vector<int>{0, 1});
  CHECK(max_diff(out.amplitudes(), ket({3, 3}, {1, 0}).amplitudes()) == 0.0);

  // Targets in reversed order: register 1 is the control.
  const PureState rev = apply_unitary(ket({3, 3}, {1, 2}), add, std::vector<int>{1, 0});
  CHECK(max_diff(rev.amplitudes(), ket({3, 3}, {0, 2}).amplitudes()) == 0.0);

  Rng rng(5);
  const RegisterShape shape({2, 3, 2});
  for (int i = 0; i < 10; ++i) {
    const PureState psi = random_pure_state(shape, rng);
    const std::vector<int> targets{2, 1};
    CHECK(max_diff(apply_unitary(psi, CMatrix(CMatrix::Identity(6, 6)), targets).amplitudes(), psi.amplitudes()) < 1e-15);
    const CMatrix u = random_unitary(6, rng);
    const PureState back = apply_unitary(apply_unitary(psi, u, targets), CMatrix(u.adjoint()), targets);
    CHECK(max_diff(back.amplitudes(), psi.amplitudes()) < 1e-13);

    // Density route agrees with the pure route.
    const DensityMatrix via_rho = apply_unitary(psi.density(), u, targets);
    CHECK(max_diff(via_rho.matrix(), apply_unitary(psi, u, targets).density().matrix()) < 1e-13);
  }
  CMatrix not_unitary = CMatrix::Identity(2, 2);
  not_unitary(0, 0) = 2.0;
  CHECK(code_of([&] { (void)apply_unitary(ket({2}, {0}), not_unitary, std::vector<int>{0}); }) ==
        ErrorCode::NotUnitary);
  CHECK(code_of([&] { (void)apply_unitary(ket({2, 2}, {0, 0}), CMatrix(CMatrix::Identity(3, 3)), std::vector<int>{0}); }) ==
        ErrorCode::DimMismatch);
}

TEST_CASE("classical_reversible_unitary", "[engine]") {
  const RegisterShape two_qutrits({3, 3});
  const CMatrix id = classical_reversible_unitary([](const std::vector<int>& v) { return v; }, two_qutrits);
  CHECK(max_diff(id, CMatrix::Identity(9, 9)) == 0.0);

  // v -> L v for L = [[1,0],[1,1]] over F_3
  const CMatrix lin = classical_reversible_unitary(
      [](const std::vector<int>& v) { return std::vector<int>{v[0], (v[0] + v[1]) % 3}; }, two_qutrits);
  CHECK(is_unitary(lin));

  // (s, a) -> (s, a + tau(s)) for an arbitrary tau
  const std::vector<int> tau{2, 0, 1};
  const CMatrix trans = classical_reversible_unitary(
      [&](const std::vector<int>& v) { return std::vector<int>{v[0], (v[1] + tau[static_cast<std::size_t>(v[0])]) % 3}; },
      two_qutrits);
  CHECK(is_unitary(trans));

  CHECK(code_of([&] {
          (void)classical_reversible_unitary([](const std::vector<int>& v) { return std::vector<int>{v[0], 0}; },
                                             two_qutrits);
        }) == ErrorCode::NotBijective);
}

TEST_CASE("fidelity", "[engine]") {
  const DensityMatrix zero = ket({2}, {0}).density();
  const DensityMatrix one = ket({2}, {1}).density();
  CHECK_THAT(fidelity(zero, zero), WithinAbs(1.0, 1e-12));
  CHECK_THAT(fidelity(zero, one), WithinAbs(0.0, 1e-12));
  CHECK_THAT(fidelity(zero, DensityMatrix::maximally_mixed(RegisterShape({2}))), WithinAbs(0.5, 1e-12));
  CHECK(code_of([&] { (void)fidelity(zero, ket({3}, {0}).density()); }) == ErrorCode::ShapeMismatch);
}

TEST_CASE("entropy and coherent information", "[engine]") {
  CHECK_THAT(von_neumann_entropy(DensityMatrix::maximally_mixed(RegisterShape({3}))),
             WithinAbs(1.5849625007211561, 1e-12));
  for (int d : {2, 3, 4}) {
    const std::vector<int> ref{0};
    CHECK_THAT(coherent_information(maximally_entangled(d).density(), ref), WithinAbs(std::log2(d), 1e-12));
    const DensityMatrix mixed = tensor(DensityMatrix::maximally_mixed(RegisterShape({d})),
                                       DensityMatrix::maximally_mixed(RegisterShape({d})));
    CHECK_THAT(coherent_information(mixed, ref), WithinAbs(-std::log2(d), 1e-12));
  }
}

TEST_CASE("maximally_entangled and purify", "[engine]") {
  const PureState phi = maximally_entangled(2);
  CVector expected = CVector::Zero(4);
  expected(0) = expected(3) = 1.0 / std::sqrt(2.0);
  CHECK(max_diff(phi.amplitudes(), expected) < 1e-15);

  for (int d : {2, 3}) {
    const DensityMatrix mixed = DensityMatrix::maximally_mixed(RegisterShape({d}));
    const PureState p = purify(mixed);
    CHECK(p.shape().labels().front() == "R");
    CHECK(max_diff(partial_trace(p, std::vector<int>{1}).matrix(), mixed.matrix()) < 1e-14);
  }
  Rng rng(9);
  const PureState psi = random_pure_state(RegisterShape({3}), rng);
  const PureState p = purify(psi.density());
  CHECK_THAT(fidelity(partial_trace(p, std::vector<int>{1}), psi.density()), WithinAbs(1.0, 1e-12));
  // Trivial reference branch: reference marginal is pure.
  CHECK_THAT(von_neumann_entropy(partial_trace(p, std::vector<int>{0})), WithinAbs(0.0, 1e-9));
}

TEST_CASE("teleport", "[engine]") {
  const PureState phi2 = maximally_entangled(2);
  const DensityMatrix zero = ket({2}, {0}).density();
  CHECK_THAT(fidelity(teleport(zero, phi2), zero), WithinAbs(1.0, 1e-12));

  Rng rng(13);
  const PureState phi3 = maximally_entangled(3);
  for (int i = 0; i < 5; ++i) {
    const DensityMatrix in = random_pure_state(RegisterShape({3}), rng).density();
    const DensityMatrix out = teleport(in, phi3);
    CHECK(fidelity(out, in) >= 1 - 1e-10);
    CHECK(max_diff(out.matrix(), in.matrix()) < 1e-12);
  }
  for (int d : {2, 3, 5}) {
    const DensityMatrix mixed = DensityMatrix::maximally_mixed(RegisterShape({d}));
    CHECK(max_diff(teleport(mixed, maximally_entangled(d)).matrix(), mixed.matrix()) < 1e-12);
  }
  CHECK(code_of([&] { (void)teleport(zero, phi3); }) == ErrorCode::DimMismatch);
}

TEST_CASE("weyl operators", "[engine]") {
  for (int d : {2, 3, 5}) {
    const CMatrix x = shift_operator(d);
    const CMatrix z = clock_operator(d);
    const std::complex<double> w = std::polar(1.0, 2 * std::numbers::pi / d);
    CHECK(max_diff(z * x, w * x * z) < 1e-14);
    CHECK(is_unitary(weyl_operator(d, 1, 2)));
  }
}

// ---------------------------------------------------------------------------
// Randomized property suite (fixed seeds, >= 200 cases).

TEST_CASE("property: channel and marginal maps keep density-matrix invariants", "[engine][property]") {
  Rng rng(2024);
  const std::vector<KrausChannel> channels{dephasing(3, 0.3), depolarizing(3, 0.4), identity_channel(3)};
  for (int trial = 0; trial < 210; ++trial) {
    const RegisterShape shape({3, 2});
    const DensityMatrix rho = random_density_matrix(shape, rng);
    const KrausChannel& ch = channels[static_cast<std::size_t>(trial) % channels.size()];
    const DensityMatrix out = apply_channel(rho, ch, std::vector<int>{0});
    CHECK_NOTHROW(DensityMatrix(out.shape(), out.matrix()));
    CHECK(std::abs(out.matrix().trace() - 1.0) < 1e-12);
    const DensityMatrix marg = partial_trace(out, std::vector<int>{1});
    CHECK_NOTHROW(DensityMatrix(marg.shape(), marg.matrix()));
    // The channel on register 0 does not touch register 1's marginal.
    CHECK(max_diff(marg.matrix(), partial_trace(rho, std::vector<int>{1}).matrix()) < 1e-12);
  }
}

TEST_CASE("property: fidelity symmetries", "[engine][property]") {
  Rng rng(77);
  for (int trial = 0; trial < 200; ++trial) {
    const RegisterShape shape({trial % 2 == 0 ? 2 : 3});
    const PureState a = random_pure_state(shape, rng);
    const PureState b = random_pure_state(shape, rng);
    const double pure_f = std::norm(a.amplitudes().dot(b.amplitudes()));
    CHECK_THAT(fidelity(a.density(), b.density()), WithinAbs(pure_f, 1e-9));

    const DensityMatrix r = random_density_matrix(shape, rng);
    const DensityMatrix s = random_density_matrix(shape, rng);
    const double f = fidelity(r, s);
    CHECK(f >= 0.0);
    CHECK(f <= 1.0);
    CHECK_THAT(fidelity(s, r), WithinAbs(f, 1e-10));
    const CMatrix u = random_unitary(shape.total(), rng);
    const std::vector<int> t{0};
    CHECK_THAT(fidelity(apply_unitary(r, u, t), apply_unitary(s, u, t)), WithinAbs(f, 1e-10));
  }
}

TEST_CASE("property: entropy bounds and additivity", "[engine][property]") {
  Rng rng(4242);
  for (int trial = 0; trial < 200; ++trial) {
    const DensityMatrix r = random_density_matrix(RegisterShape({2}), rng);
    const DensityMatrix s = random_density_matrix(RegisterShape({3}), rng);
    const double hr = von_neumann_entropy(r);
    const double hs = von_neumann_entropy(s);
    CHECK(hr >= -1e-12);
    CHECK(hr <= 1.0 + 1e-12);
    CHECK(hs <= std::log2(3.0) + 1e-12);
    CHECK_THAT(von_neumann_entropy(tensor(r, s)), WithinAbs(hr + hs, 1e-10));
    const CMatrix u = random_unitary(3, rng);
    CHECK_THAT(von_neumann_entropy(apply_unitary(s, u, std::vector<int>{0})), WithinAbs(hs, 1e-10));

    // Pure joint state: I(A'>B) = H(B). Product state: I(A'>B) = -H(A').
    const PureState joint = random_pure_state(RegisterShape({2, 3}), rng);
    const std::vector<int> ref{0};
    CHECK_THAT(coherent_information(joint.density(), ref),
               WithinAbs(von_neumann_entropy(partial_trace(joint, std::vector<int>{1})), 1e-9));
    CHECK_THAT(coherent_information(tensor(r, s), ref), WithinAbs(-hr, 1e-10));
  }
}

TEST_CASE("property: partial trace consistency", "[engine][property]") {
  Rng rng(99);
  for (int trial = 0; trial < 200; ++trial) {
    const DensityMatrix a = random_density_matrix(RegisterShape({2}), rng);
    const DensityMatrix b = random_density_matrix(RegisterShape({3}), rng);
    CHECK(max_diff(partial_trace(tensor(a, b), std::vector<int>{0}).matrix(), a.matrix()) < 1e-12);
    // Pure-state route and density route agree.
    const PureState psi = random_pure_state(RegisterShape({2, 3, 2}), rng);
    const std::vector<int> keep{2, 0};
    CHECK(max_diff(partial_trace(psi, keep).matrix(), partial_trace(psi.density(), keep).matrix()) < 1e-13);
  }
}
