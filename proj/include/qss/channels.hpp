#pragma once

#include <span>
#include <string>
#include <vector>

#include "qss/access_structure.hpp"
#include "qss/qudit_engine.hpp"

namespace qss {

/// CPTP map in Kraus form from a single input space (dimension in_dim) to `out_shape`.
class KrausChannel {
 public:
  /// Throws InvalidArgument unless sum_i K_i^† K_i = I within 1e-10.
  KrausChannel(std::vector<CMatrix> ops, RegisterShape out_shape);

  const std::vector<CMatrix>& ops() const noexcept { return ops_; }
  Eigen::Index in_dim() const noexcept { return ops_.front().cols(); }
  Eigen::Index out_dim() const noexcept { return ops_.front().rows(); }
  const RegisterShape& out_shape() const noexcept { return out_shape_; }

  /// max |sum K^† K - I|.
  double completeness_defect() const;

 private:
  std::vector<CMatrix> ops_;
  RegisterShape out_shape_;
};

KrausChannel identity_channel(int d);
/// {sqrt(1-q) I, sqrt(q) Z} with Z the clock operator diag(1, w, ..., w^{d-1}).
KrausChannel dephasing(int d, double q);
/// rho -> (1-p) rho + p I/d, realized with the d^2 Weyl operators.
KrausChannel depolarizing(int d, double p);

/// Kraus set of a ⊗ b; the output registers are concatenated.
KrausChannel tensor_product(const KrausChannel& a, const KrausChannel& b);
/// n-fold tensor power (all Kraus index tuples).
KrausChannel tensor_power(const KrausChannel& ch, int n);
/// second ∘ first.
KrausChannel compose(const KrausChannel& second, const KrausChannel& first);

/// Applies `ch` to the `targets` registers of rho (output registers replace the targets).
DensityMatrix apply_channel(const DensityMatrix& rho, const KrausChannel& ch, std::span<const int> targets);
/// Applies `ch` to a state whose whole space is the channel input.
DensityMatrix apply_channel(const DensityMatrix& rho, const KrausChannel& ch);

/// Marginal of `broadcast` on output registers `keep` (0-based, in the order given),
/// as an explicit Kraus set: (<e|_traced ⊗ I) K_i for every traced basis vector e.
KrausChannel marginal(const KrausChannel& broadcast, std::span<const int> keep);

/// Complementary-channel output: the environment state [tr(K_i rho K_j^†)]_{ij}.
CMatrix environment_state(const KrausChannel& ch, const CMatrix& rho);

struct FamilyMember {
  std::string label;
  KrausChannel channel;
};

/// Indexed family {N^(l)} sharing one input dimension.
class CompoundFamily {
 public:
  explicit CompoundFamily(std::vector<FamilyMember> members);

  Eigen::Index input_dim() const noexcept { return members_.front().channel.in_dim(); }
  const std::vector<FamilyMember>& members() const noexcept { return members_; }
  std::size_t size() const noexcept { return members_.size(); }

 private:
  std::vector<FamilyMember> members_;
};

/// One member per qualified set: the minimal qualified sets plus the full set, or every
/// qualified set when `all_qualified` is set. Output register k-1 of the broadcast belongs
/// to participant k. Labels use letters ("ab", "abc").
CompoundFamily compound_from_access(const KrausChannel& broadcast, const AccessStructure& access,
                                    bool all_qualified = false);

struct ChannelSpec {
  std::string label;
  std::string kind;  // identity | dephasing | depolarizing
  double param = 0;  // q for dephasing, p for depolarizing
};

KrausChannel make_channel(int d, const ChannelSpec& spec);
CompoundFamily direct_family(int d, const std::vector<ChannelSpec>& specs);

}  // namespace qss
