#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "qss/error.hpp"

namespace qss {

/// Subset of participants [K]; bit k-1 set means participant k belongs to it.
using Subset = std::uint32_t;

Subset subset_of(const std::vector<int>& participants);  // 1-based participants
std::vector<int> members(Subset s);                        // 1-based, ascending
int subset_size(Subset s);
/// "{1,2}" style.
std::string format_subset(Subset s);
/// "ab" style (participant k -> letter 'a' + k - 1); used for compound-family labels.
std::string letter_label(Subset s);

struct StructureReport {
  bool upward_closed = false;
  bool no_disjoint_qualified = false;
  bool self_dual = false;

  bool valid() const { return upward_closed && no_disjoint_qualified; }
};

/// Family of qualified subsets of [K]. The family is stored as given; validate() reports
/// whether it satisfies the structure axioms.
class AccessStructure {
 public:
  static constexpr int kMaxParticipants = 20;

  /// Qualified = { T : |T| >= t }. Throws CloningViolation unless 2t > K.
  static AccessStructure from_threshold(int t, int k);
  static AccessStructure from_qualified(int k, const std::vector<Subset>& qualified);

  int participants() const noexcept { return k_; }
  Subset full_set() const noexcept { return k_ == 32 ? ~Subset{0} : (Subset{1} << k_) - 1; }
  Subset complement(Subset t) const { return full_set() & ~t; }

  bool is_qualified(Subset t) const { return t <= full_set() && member_[t]; }
  /// Ascending by bitmask.
  const std::vector<Subset>& qualified() const& noexcept { return qualified_; }
  std::vector<Subset> qualified() && { return std::move(qualified_); }

  StructureReport validate() const;
  /// Throws StructureMismatch when upward closure or no-cloning fails.
  void require_valid() const;

  /// Inclusion-minimal qualified sets.
  std::vector<Subset> minimal_qualified() const;
  /// Inclusion-maximal non-qualified sets (the adversary structure's maximal elements).
  std::vector<Subset> maximal_unqualified() const;

 private:
  AccessStructure(int k, std::vector<Subset> qualified);

  int k_;
  std::vector<Subset> qualified_;
  std::vector<bool> member_;
};

}  // namespace qss
