#include "qss/channels.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

namespace qss {

namespace {

constexpr double kCompletenessTol = 1e-10;

void check_probability(double p, const char* name) {
  if (!(p >= 0.0 && p <= 1.0)) {
    throw Error(ErrorCode::ParamOutOfRange, std::string(name) + " = " + std::to_string(p) + " not in [0,1]");
  }
}

void check_dim(int d) {
  if (d < 2) throw Error(ErrorCode::ParamOutOfRange, "channel dimension must be >= 2");
}

}  // namespace

KrausChannel::KrausChannel(std::vector<CMatrix> ops, RegisterShape out_shape)
    : ops_(std::move(ops)), out_shape_(std::move(out_shape)) {
  if (ops_.empty()) throw Error(ErrorCode::InvalidArgument, "Kraus set is empty");
  for (const CMatrix& k : ops_) {
    if (k.rows() != ops_.front().rows() || k.cols() != ops_.front().cols()) {
      throw Error(ErrorCode::DimMismatch, "Kraus operators differ in shape");
    }
  }
  if (out_shape_.total() != out_dim()) throw Error(ErrorCode::DimMismatch, "output shape does not match Kraus rows");
  if (completeness_defect() > kCompletenessTol) {
    throw Error(ErrorCode::InvalidArgument, "Kraus operators are not trace preserving");
  }
}

double KrausChannel::completeness_defect() const {
  CMatrix sum = CMatrix::Zero(in_dim(), in_dim());
  for (const CMatrix& k : ops_) sum.noalias() += k.adjoint() * k;
  return (sum - CMatrix::Identity(in_dim(), in_dim())).cwiseAbs().maxCoeff();
}

KrausChannel identity_channel(int d) {
  check_dim(d);
  return {{CMatrix::Identity(d, d)}, RegisterShape({d}, {"B"})};
}

KrausChannel dephasing(int d, double q) {
  check_dim(d);
  check_probability(q, "dephasing q");
  return {{std::sqrt(1.0 - q) * CMatrix::Identity(d, d), std::sqrt(q) * clock_operator(d)},
          RegisterShape({d}, {"B"})};
}

KrausChannel depolarizing(int d, double p) {
  check_dim(d);
  check_probability(p, "depolarizing p");
  const double d2 = static_cast<double>(d) * d;
  std::vector<CMatrix> ops;
  ops.push_back(std::sqrt(1.0 - p + p / d2) * CMatrix::Identity(d, d));
  for (int a = 0; a < d; ++a) {
    for (int b = 0; b < d; ++b) {
      if (a == 0 && b == 0) continue;
      ops.push_back(std::sqrt(p / d2) * weyl_operator(d, a, b));
    }
  }
  return {std::move(ops), RegisterShape({d}, {"B"})};
}

KrausChannel tensor_product(const KrausChannel& a, const KrausChannel& b) {
  std::vector<CMatrix> ops;
  ops.reserve(a.ops().size() * b.ops().size());
  for (const CMatrix& ka : a.ops()) {
    for (const CMatrix& kb : b.ops()) ops.emplace_back(Eigen::kroneckerProduct(ka, kb).eval());
  }
  return {std::move(ops), a.out_shape().concat(b.out_shape())};
}

KrausChannel tensor_power(const KrausChannel& ch, int n) {
  if (n < 1) throw Error(ErrorCode::InvalidArgument, "tensor power needs n >= 1");
  KrausChannel out = ch;
  for (int i = 1; i < n; ++i) out = tensor_product(out, ch);
  return out;
}

KrausChannel compose(const KrausChannel& second, const KrausChannel& first) {
  if (second.in_dim() != first.out_dim()) throw Error(ErrorCode::DimMismatch, "composition dimensions differ");
  std::vector<CMatrix> ops;
  for (const CMatrix& k2 : second.ops()) {
    for (const CMatrix& k1 : first.ops()) ops.emplace_back(k2 * k1);
  }
  return {std::move(ops), second.out_shape()};
}

DensityMatrix apply_channel(const DensityMatrix& rho, const KrausChannel& ch, std::span<const int> targets) {
  return apply_kraus<double>(rho, std::span<const CMatrix>(ch.ops()), targets, ch.out_shape());
}

DensityMatrix apply_channel(const DensityMatrix& rho, const KrausChannel& ch) {
  std::vector<int> all(rho.shape().size());
  std::iota(all.begin(), all.end(), 0);
  return apply_channel(rho, ch, all);
}

KrausChannel marginal(const KrausChannel& broadcast, std::span<const int> keep) {
  const RegisterShape& out = broadcast.out_shape();
  if (keep.empty()) throw Error(ErrorCode::EmptyKeepSet, "marginal must keep at least one output register");
  detail::check_register_list(out, keep);
  const auto order = detail::targets_last(out.size(), keep);
  const auto src = detail::permutation_sources(out, order);
  const Eigen::Index kept = out.dim_of(keep);
  const Eigen::Index traced = out.total() / kept;

  std::vector<CMatrix> ops;
  ops.reserve(broadcast.ops().size() * static_cast<std::size_t>(traced));
  for (const CMatrix& k : broadcast.ops()) {
    // Rows reordered as (traced, kept) with kept fastest.
    CMatrix reordered(k.rows(), k.cols());
    for (Eigen::Index i = 0; i < k.rows(); ++i) reordered.row(i) = k.row(src[static_cast<std::size_t>(i)]);
    for (Eigen::Index e = 0; e < traced; ++e) {
      CMatrix block = reordered.middleRows(e * kept, kept);
      if (block.cwiseAbs().maxCoeff() > 0) ops.push_back(std::move(block));
    }
  }
  return {std::move(ops), out.select(keep)};
}

CMatrix environment_state(const KrausChannel& ch, const CMatrix& rho) {
  if (rho.rows() != ch.in_dim()) throw Error(ErrorCode::DimMismatch, "input dimension differs from channel");
  const auto n = static_cast<Eigen::Index>(ch.ops().size());
  std::vector<CMatrix> applied;
  applied.reserve(ch.ops().size());
  for (const CMatrix& k : ch.ops()) applied.emplace_back(k * rho);
  CMatrix env(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      // tr(K_i rho K_j^†)
      env(i, j) = (applied[static_cast<std::size_t>(i)] * ch.ops()[static_cast<std::size_t>(j)].adjoint()).trace();
    }
  }
  return env;
}

CompoundFamily::CompoundFamily(std::vector<FamilyMember> members) : members_(std::move(members)) {
  if (members_.empty()) throw Error(ErrorCode::EmptyFamily, "compound family needs at least one member");
  std::set<std::string> labels;
  for (const FamilyMember& m : members_) {
    if (!labels.insert(m.label).second) throw Error(ErrorCode::InvalidArgument, "duplicate member label " + m.label);
    if (m.channel.in_dim() != members_.front().channel.in_dim()) {
      throw Error(ErrorCode::DimMismatch, "family members have different input dimensions");
    }
  }
}

CompoundFamily compound_from_access(const KrausChannel& broadcast, const AccessStructure& access, bool all_qualified) {
  if (static_cast<int>(broadcast.out_shape().size()) != access.participants()) {
    throw Error(ErrorCode::StructureMismatch, "broadcast has " + std::to_string(broadcast.out_shape().size()) +
                                                  " output registers but the structure has " +
                                                  std::to_string(access.participants()) + " participants");
  }
  access.require_valid();
  std::vector<Subset> sets = all_qualified ? access.qualified() : access.minimal_qualified();
  if (!all_qualified && std::find(sets.begin(), sets.end(), access.full_set()) == sets.end()) {
    sets.push_back(access.full_set());
  }
  std::vector<FamilyMember> members;
  for (Subset t : sets) {
    std::vector<int> keep;
    for (int p : qss::members(t)) keep.push_back(p - 1);
    members.push_back({letter_label(t), marginal(broadcast, keep)});
  }
  return CompoundFamily(std::move(members));
}

KrausChannel make_channel(int d, const ChannelSpec& spec) {
  if (spec.kind == "identity") return identity_channel(d);
  if (spec.kind == "dephasing") return dephasing(d, spec.param);
  if (spec.kind == "depolarizing") return depolarizing(d, spec.param);
  throw Error(ErrorCode::UnknownKind, "unknown channel kind '" + spec.kind + "'");
}

CompoundFamily direct_family(int d, const std::vector<ChannelSpec>& specs) {
  if (specs.empty()) throw Error(ErrorCode::EmptyFamily, "family spec list is empty");
  std::vector<FamilyMember> members;
  for (const ChannelSpec& s : specs) members.push_back({s.label, make_channel(d, s)});
  return CompoundFamily(std::move(members));
}

}  // namespace qss
