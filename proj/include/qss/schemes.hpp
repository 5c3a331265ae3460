#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "qss/access_structure.hpp"
#include "qss/channels.hpp"
#include "qss/finite_field.hpp"
#include "qss/qudit_engine.hpp"

namespace qss {

/// (t, K) threshold scheme over F_q. Internally 2t-1 evaluation points are always used;
/// shares K+1..2t-1 are virtual (generated, never distributed).
class ThresholdSchemeSpec {
 public:
  /// `points` defaults to 0, 1, ..., 2t-2. Requires q prime, 2t > K >= t, q >= 2t-1.
  ThresholdSchemeSpec(int q, int t, int k, std::vector<std::int64_t> points = {});

  int q() const noexcept { return q_; }
  int t() const noexcept { return t_; }
  int participants() const noexcept { return k_; }
  int n_shares() const noexcept { return 2 * t_ - 1; }
  int virtual_shares() const noexcept { return n_shares() - k_; }
  const std::vector<std::int64_t>& points() const noexcept { return points_; }

  std::vector<FqElement> field_points() const;
  /// (2t-1) x t share matrix M: shares = M (s, a)^T.
  FqMatrix share_matrix() const;
  AccessStructure access() const { return AccessStructure::from_threshold(t_, k_); }

  friend bool operator==(const ThresholdSchemeSpec&, const ThresholdSchemeSpec&) = default;

 private:
  int q_;
  int t_;
  int k_;
  std::vector<std::int64_t> points_;
};

/// Encoded state on registers (S'?, B_1..B_K, V_1..). Share j (1-based over all 2t-1
/// shares) lives at register `share_register(j)`.
struct EncodedSecret {
  PureState state;
  ThresholdSchemeSpec scheme;
  bool has_reference = false;

  int share_register(int share) const { return (has_reference ? 1 : 0) + share - 1; }
};

/// The (unnormalized-by-construction) isometry |s> -> |f(s)> / q^{(t-1)/2} as a
/// q^{2t-1} x q matrix over all 2t-1 share registers.
CMatrix encoding_isometry(const ThresholdSchemeSpec& scheme);

/// Encodes a secret. `input` is either a single register of dimension q (S) or two
/// registers (S', S) with S of dimension q; S' is passed through untouched.
EncodedSecret encode(const ThresholdSchemeSpec& scheme, const PureState& input);

/// Channel S -> B_1..B_K: encoding followed by discarding the virtual shares.
KrausChannel encoding_channel(const ThresholdSchemeSpec& scheme);

/// Decoding circuit U_tau · U_L acting on the witness share registers (in witness order).
/// After it runs, the first witness holds the secret in product with every other register.
struct DecoderCircuit {
  std::vector<int> witnesses;  // 1-based share indices, size t
  CMatrix interpolate;         // U_L: share values -> (s, a)
  CMatrix translate;           // U_tau: |s>|a> -> |s>|a + tau(s)>
  std::vector<std::int64_t> tau_direction;  // tau(s) = s * tau_direction

  CMatrix unitary() const { return translate * interpolate; }
  int secret_share() const { return witnesses.front(); }
};

/// Throws NotQualified unless T (over the K real participants) is qualified.
/// `witnesses` defaults to the t smallest members of T.
DecoderCircuit build_decoder(const ThresholdSchemeSpec& scheme, Subset qualified_set,
                             std::optional<std::vector<int>> witnesses = std::nullopt);

PureState apply_decoder(const EncodedSecret& encoded, const DecoderCircuit& decoder);

/// |c>|x> -> |c>|x + c mod q> on (control, target).
CMatrix modular_add_gate(int q);

struct PairDecodeResult {
  PureState state;
  int secret_share;                 // 1-based share index now holding the secret
  std::vector<int> residual_shares; // remaining two shares, ascending
};

/// Two modular-addition gates on the (2,3) qutrit scheme: share_j += share_i, then
/// share_i += share_j, with the pair oriented so that x_j - x_i = 1 (mod 3).
PairDecodeResult cgl99_pair_decode(const EncodedSecret& encoded, Subset pair);

struct RecoveryReport {
  double min_fidelity = 1;           // over the entangled trial and all random trials
  double entanglement_fidelity = 1;  // maximally entangled S'S input
  int trials = 0;
};

/// Encode, decode with `build_decoder`, compare the recovered secret (and S') with the input.
RecoveryReport verify_recovery(const ThresholdSchemeSpec& scheme, Subset qualified_set, int trials,
                               std::uint64_t seed, std::optional<std::vector<int>> witnesses = std::nullopt);

struct SecrecyReport {
  double decoupling_defect = 0;  // || rho_{S'Z} - rho_{S'} ⊗ rho_Z ||_tr
  double basis_spread = 0;       // max_s || rho_Z(s) - rho_Z(0) ||_tr
  double defect() const { return std::max(decoupling_defect, basis_spread); }
};

/// Throws IsQualified when Z is qualified.
SecrecyReport verify_secrecy(const ThresholdSchemeSpec& scheme, Subset unqualified_set);

}  // namespace qss
