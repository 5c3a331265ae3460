#include "qss/schemes.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <stdexcept>
#include <string>

#include "qss/random.hpp"

namespace qss {

namespace {

std::int64_t ipow(std::int64_t base, int exp) {
  std::int64_t r = 1;
  for (int i = 0; i < exp; ++i) r *= base;
  return r;
}

RegisterShape share_shape(const ThresholdSchemeSpec& scheme) {
  std::vector<std::string> labels;
  for (int j = 1; j <= scheme.n_shares(); ++j) {
    labels.push_back(j <= scheme.participants() ? "B" + std::to_string(j)
                                                : "V" + std::to_string(j - scheme.participants()));
  }
  return {std::vector<int>(static_cast<std::size_t>(scheme.n_shares()), scheme.q()), std::move(labels)};
}

/// Digits of `index` in base q, most significant first.
std::vector<int> digits_of(std::int64_t index, int q, int width) {
  std::vector<int> d(static_cast<std::size_t>(width));
  for (int i = width - 1; i >= 0; --i) {
    d[static_cast<std::size_t>(i)] = static_cast<int>(index % q);
    index /= q;
  }
  return d;
}

std::vector<int> shares_in(const ThresholdSchemeSpec& scheme, Subset set) {
  std::vector<int> out = members(set);
  if (!out.empty() && out.back() > scheme.participants()) {
    throw Error(ErrorCode::InvalidArgument, "set " + format_subset(set) + " names a participant beyond K");
  }
  return out;
}

}  // namespace

ThresholdSchemeSpec::ThresholdSchemeSpec(int q, int t, int k, std::vector<std::int64_t> points)
    : q_(q), t_(t), k_(k), points_(std::move(points)) {
  if (q > FqElement::kMaxModulus || !is_prime(q)) {
    throw Error(ErrorCode::NotPrime, "scheme modulus " + std::to_string(q) + " is not prime");
  }
  if (t < 1 || k < t) throw Error(ErrorCode::InvalidArgument, "threshold requires 1 <= t <= K");
  if (2 * t <= k) {
    throw Error(ErrorCode::CloningViolation,
                "(" + std::to_string(t) + "," + std::to_string(k) + ") threshold violates 2t > K");
  }
  if (q < 2 * t - 1) {
    throw Error(ErrorCode::InvalidArgument, "q = " + std::to_string(q) + " has fewer than 2t-1 distinct points");
  }
  if (points_.empty()) {
    points_.resize(static_cast<std::size_t>(2 * t - 1));
    std::iota(points_.begin(), points_.end(), 0);
  }
  if (static_cast<int>(points_.size()) != 2 * t - 1) {
    throw Error(ErrorCode::InvalidArgument, "scheme needs exactly 2t-1 evaluation points");
  }
  std::set<std::int64_t> seen;
  for (std::int64_t& p : points_) {
    p = FqElement(p, q).value();
    if (!seen.insert(p).second) throw Error(ErrorCode::DuplicatePoints, "evaluation points must be distinct");
  }
}

std::vector<FqElement> ThresholdSchemeSpec::field_points() const {
  std::vector<FqElement> out;
  for (std::int64_t p : points_) out.emplace_back(p, q_);
  return out;
}

FqMatrix ThresholdSchemeSpec::share_matrix() const {
  const auto pts = field_points();
  return vandermonde(pts, t_);
}

CMatrix encoding_isometry(const ThresholdSchemeSpec& scheme) {
  const int q = scheme.q();
  const int n = scheme.n_shares();
  const int t = scheme.t();
  const FqMatrix m = scheme.share_matrix();
  const std::int64_t rows = ipow(q, n);
  const std::int64_t randomness = ipow(q, t - 1);

  CMatrix f = CMatrix::Zero(rows, q);
  std::vector<std::int64_t> coeffs(static_cast<std::size_t>(t));
  for (int s = 0; s < q; ++s) {
    coeffs[0] = s;
    for (std::int64_t a = 0; a < randomness; ++a) {
      const auto a_digits = digits_of(a, q, t - 1);
      std::copy(a_digits.begin(), a_digits.end(), coeffs.begin() + 1);
      const FqMatrix shares = mat_mul(m, FqMatrix::column(coeffs, q));
      std::int64_t index = 0;
      for (int k = 0; k < n; ++k) index = index * q + shares.entries()(k, 0);
      f(index, s) += 1.0;
    }
  }
  // |f(s)> has q^{t-1} distinct unit terms, so its norm is q^{(t-1)/2}.
  const double expected = std::sqrt(static_cast<double>(randomness));
  for (int s = 0; s < q; ++s) {
    if (std::abs(f.col(s).norm() - expected) > 1e-12) {
      throw std::logic_error("encoding branch norm differs from q^{(t-1)/2}");
    }
  }
  return f / expected;
}

EncodedSecret encode(const ThresholdSchemeSpec& scheme, const PureState& input) {
  const RegisterShape& in = input.shape();
  const bool with_reference = in.size() == 2;
  if (in.size() > 2 || in.dims().back() != scheme.q()) {
    throw Error(ErrorCode::DimMismatch, "secret register must have dimension q = " + std::to_string(scheme.q()));
  }
  const Eigen::Index ref_dim = with_reference ? in.dim(0) : 1;
  const CMatrix f = encoding_isometry(scheme);
  const CMatrix lifted = Eigen::kroneckerProduct(CMatrix::Identity(ref_dim, ref_dim), f).eval();
  CVector amps = lifted * input.amplitudes();

  RegisterShape shape = share_shape(scheme);
  if (with_reference) shape = RegisterShape({in.dim(0)}, {in.labels().front()}).concat(shape);
  return {PureState::normalized(std::move(shape), std::move(amps)), scheme, with_reference};
}

KrausChannel encoding_channel(const ThresholdSchemeSpec& scheme) {
  const KrausChannel full({encoding_isometry(scheme)}, share_shape(scheme));
  std::vector<int> real(static_cast<std::size_t>(scheme.participants()));
  std::iota(real.begin(), real.end(), 0);
  return marginal(full, real);
}

DecoderCircuit build_decoder(const ThresholdSchemeSpec& scheme, Subset qualified_set,
                             std::optional<std::vector<int>> witnesses) {
  const std::vector<int> t_members = shares_in(scheme, qualified_set);
  if (!scheme.access().is_qualified(qualified_set)) {
    throw Error(ErrorCode::NotQualified, format_subset(qualified_set) + " is not a qualified set");
  }
  const int t = scheme.t();
  const int q = scheme.q();
  std::vector<int> w = witnesses ? *witnesses : std::vector<int>(t_members.begin(), t_members.begin() + t);
  if (static_cast<int>(w.size()) != t || std::set<int>(w.begin(), w.end()).size() != w.size()) {
    throw Error(ErrorCode::InvalidArgument, "decoder needs exactly t distinct witnesses");
  }
  for (int x : w) {
    if (std::find(t_members.begin(), t_members.end(), x) == t_members.end()) {
      throw Error(ErrorCode::InvalidArgument, "witness " + std::to_string(x) + " is not in the qualified set");
    }
  }

  const std::vector<FqElement> pts = scheme.field_points();
  std::vector<FqElement> witness_points;
  for (int x : w) witness_points.push_back(pts[static_cast<std::size_t>(x - 1)]);
  const FqMatrix interp = mat_inverse(vandermonde(witness_points, t));

  const RegisterShape witness_shape(std::vector<int>(static_cast<std::size_t>(t), q));
  DecoderCircuit circuit;
  circuit.witnesses = w;
  circuit.interpolate = classical_reversible_unitary(
      [&](const std::vector<int>& y) {
        std::vector<int> coeffs(y.size());
        for (int r = 0; r < t; ++r) {
          std::int64_t acc = 0;
          for (int c = 0; c < t; ++c) acc += interp.entries()(r, c) * y[static_cast<std::size_t>(c)];
          coeffs[static_cast<std::size_t>(r)] = static_cast<int>(acc % q);
        }
        return coeffs;
      },
      witness_shape);

  // Every non-witness share (in T, outside T, or virtual) reads c_j s + d_j . a with
  // c_j = x_j^{t-1} and d_j = (1, x_j, ..., x_j^{t-2}). Solving D tau = c removes s from them.
  std::vector<std::int64_t> tau(static_cast<std::size_t>(t - 1), 0);
  if (t > 1) {
    FqMatrix d(t - 1, t - 1, q);
    std::vector<std::int64_t> c;
    int row = 0;
    for (int j = 1; j <= scheme.n_shares(); ++j) {
      if (std::find(w.begin(), w.end(), j) != w.end()) continue;
      const FqElement x = pts[static_cast<std::size_t>(j - 1)];
      c.push_back(x.pow(static_cast<std::uint64_t>(t - 1)).value());
      for (int i = 0; i < t - 1; ++i) d.set(row, i, x.pow(static_cast<std::uint64_t>(i)).value());
      ++row;
    }
    try {
      tau = solve(d, c);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::SingularMatrix) throw;
      throw Error(ErrorCode::SingularResidual, "non-witness coefficient matrix is singular");
    }
  }
  circuit.tau_direction = tau;
  circuit.translate = classical_reversible_unitary(
      [&](const std::vector<int>& v) {
        std::vector<int> out = v;
        for (int i = 1; i < t; ++i) {
          out[static_cast<std::size_t>(i)] =
              static_cast<int>((v[static_cast<std::size_t>(i)] + v[0] * tau[static_cast<std::size_t>(i - 1)]) % q);
        }
        return out;
      },
      witness_shape);
  return circuit;
}

PureState apply_decoder(const EncodedSecret& encoded, const DecoderCircuit& decoder) {
  std::vector<int> targets;
  for (int w : decoder.witnesses) targets.push_back(encoded.share_register(w));
  return apply_unitary(encoded.state, decoder.unitary(), targets);
}

CMatrix modular_add_gate(int q) {
  return classical_reversible_unitary([q](const std::vector<int>& v) { return std::vector<int>{v[0], (v[0] + v[1]) % q}; },
                                      RegisterShape({q, q}));
}

PairDecodeResult cgl99_pair_decode(const EncodedSecret& encoded, Subset pair) {
  const ThresholdSchemeSpec& scheme = encoded.scheme;
  if (scheme.q() != 3 || scheme.t() != 2 || scheme.participants() != 3) {
    throw Error(ErrorCode::DimMismatch, "pair decoding applies to the (2,3) qutrit scheme only");
  }
  const std::vector<int> p = shares_in(scheme, pair);
  if (p.size() != 2) throw Error(ErrorCode::NotQualified, "pair decoding needs exactly two shares");

  int i = p[0];
  int j = p[1];
  const auto& x = scheme.points();
  if ((x[static_cast<std::size_t>(j - 1)] - x[static_cast<std::size_t>(i - 1)] + 3) % 3 != 1) std::swap(i, j);

  const CMatrix add = modular_add_gate(3);
  const std::vector<int> first{encoded.share_register(i), encoded.share_register(j)};
  const std::vector<int> second{encoded.share_register(j), encoded.share_register(i)};
  PureState out = apply_unitary(apply_unitary(encoded.state, add, first), add, second);

  std::vector<int> residual;
  for (int k = 1; k <= 3; ++k) {
    if (k != i) residual.push_back(k);
  }
  return {std::move(out), i, residual};
}

RecoveryReport verify_recovery(const ThresholdSchemeSpec& scheme, Subset qualified_set, int trials,
                               std::uint64_t seed, std::optional<std::vector<int>> witnesses) {
  const DecoderCircuit decoder = build_decoder(scheme, qualified_set, std::move(witnesses));
  const int q = scheme.q();
  RecoveryReport report;

  const PureState phi = maximally_entangled(q);
  const EncodedSecret entangled = encode(scheme, phi);
  const PureState decoded = apply_decoder(entangled, decoder);
  const std::vector<int> keep{0, entangled.share_register(decoder.secret_share())};
  report.entanglement_fidelity = fidelity(partial_trace(decoded, keep), phi.density());
  report.min_fidelity = report.entanglement_fidelity;

  Rng rng(seed);
  for (int trial = 0; trial < trials; ++trial) {
    const PureState secret = random_pure_state(RegisterShape({q}, {"S"}), rng);
    const EncodedSecret enc = encode(scheme, secret);
    const PureState out = apply_decoder(enc, decoder);
    const std::vector<int> reg{enc.share_register(decoder.secret_share())};
    const double f = fidelity(partial_trace(out, reg), secret.density());
    report.min_fidelity = std::min(report.min_fidelity, f);
  }
  report.trials = trials + 1;
  return report;
}

SecrecyReport verify_secrecy(const ThresholdSchemeSpec& scheme, Subset unqualified_set) {
  const std::vector<int> z = shares_in(scheme, unqualified_set);
  if (scheme.access().is_qualified(unqualified_set)) {
    throw Error(ErrorCode::IsQualified, format_subset(unqualified_set) + " is qualified");
  }
  SecrecyReport report;
  if (z.empty()) return report;

  const int q = scheme.q();
  const EncodedSecret entangled = encode(scheme, maximally_entangled(q));
  std::vector<int> keep{0};
  for (int share : z) keep.push_back(entangled.share_register(share));
  const DensityMatrix joint = partial_trace(entangled.state, keep);
  std::vector<int> z_regs(z.size());
  std::iota(z_regs.begin(), z_regs.end(), 1);
  const std::vector<int> ref{0};
  const DensityMatrix product = tensor(partial_trace(joint, ref), partial_trace(joint, z_regs));
  report.decoupling_defect = trace_distance(joint, product);

  std::vector<DensityMatrix> marginals;
  for (int s = 0; s < q; ++s) {
    const std::vector<int> digit{s};
    const EncodedSecret enc = encode(scheme, PureState::basis(RegisterShape({q}, {"S"}), digit));
    std::vector<int> regs;
    for (int share : z) regs.push_back(enc.share_register(share));
    marginals.push_back(partial_trace(enc.state, regs));
  }
  for (const DensityMatrix& m : marginals) {
    report.basis_spread = std::max(report.basis_spread, trace_distance(m, marginals.front()));
  }
  return report;
}

}  // namespace qss
