#include "qss/access_structure.hpp"

#include <algorithm>
#include <bit>

namespace qss {

Subset subset_of(const std::vector<int>& participants) {
  Subset s = 0;
  for (int p : participants) {
    if (p < 1 || p > AccessStructure::kMaxParticipants) {
      throw Error(ErrorCode::InvalidArgument, "participant index " + std::to_string(p) + " out of range");
    }
    s |= Subset{1} << (p - 1);
  }
  return s;
}

std::vector<int> members(Subset s) {
  std::vector<int> out;
  for (int k = 0; k < 32; ++k) {
    if (s & (Subset{1} << k)) out.push_back(k + 1);
  }
  return out;
}

int subset_size(Subset s) { return std::popcount(s); }

std::string format_subset(Subset s) {
  std::string out = "{";
  bool first = true;
  for (int p : members(s)) {
    if (!first) out += ",";
    out += std::to_string(p);
    first = false;
  }
  return out + "}";
}

std::string letter_label(Subset s) {
  std::string out;
  for (int p : members(s)) {
    if (p > 26) return format_subset(s);
    out += static_cast<char>('a' + p - 1);
  }
  return out;
}

AccessStructure::AccessStructure(int k, std::vector<Subset> qualified) : k_(k) {
  if (k < 1) throw Error(ErrorCode::InvalidArgument, "need at least one participant");
  if (k > kMaxParticipants) {
    throw Error(ErrorCode::ParticipantCapExceeded, std::to_string(k) + " participants exceed cap of 20");
  }
  member_.assign(std::size_t{1} << k, false);
  for (Subset t : qualified) {
    if (t > full_set()) throw Error(ErrorCode::InvalidArgument, "qualified set references participant > K");
    member_[t] = true;
  }
  for (Subset t = 0; t <= full_set(); ++t) {
    if (member_[t]) qualified_.push_back(t);
  }
}

AccessStructure AccessStructure::from_threshold(int t, int k) {
  if (k < 1 || t < 1 || t > k) {
    throw Error(ErrorCode::InvalidArgument, "threshold requires 1 <= t <= K");
  }
  if (2 * t <= k) {
    throw Error(ErrorCode::CloningViolation,
                "(" + std::to_string(t) + "," + std::to_string(k) + ") threshold violates 2t > K");
  }
  if (k > kMaxParticipants) {
    throw Error(ErrorCode::ParticipantCapExceeded, std::to_string(k) + " participants exceed cap of 20");
  }
  std::vector<Subset> sets;
  const Subset full = (Subset{1} << k) - 1;
  for (Subset s = 0; s <= full; ++s) {
    if (subset_size(s) >= t) sets.push_back(s);
  }
  return {k, std::move(sets)};
}

AccessStructure AccessStructure::from_qualified(int k, const std::vector<Subset>& qualified) {
  return {k, qualified};
}

StructureReport AccessStructure::validate() const {
  StructureReport report{true, true, true};
  const Subset full = full_set();
  for (Subset t = 0; t <= full; ++t) {
    const bool q = member_[t];
    if (q) {
      // Adding any single participant must stay qualified; induction covers all supersets.
      for (int p = 0; p < k_; ++p) {
        if (!member_[t | (Subset{1} << p)]) report.upward_closed = false;
      }
      if (member_[full & ~t]) report.no_disjoint_qualified = false;
    }
    if (q == member_[full & ~t]) report.self_dual = false;
  }
  // Disjoint qualified pairs are only caught via complements when the family is upward closed.
  if (!report.upward_closed && report.no_disjoint_qualified) {
    for (std::size_t i = 0; i < qualified_.size() && report.no_disjoint_qualified; ++i) {
      for (std::size_t j = i; j < qualified_.size(); ++j) {
        if ((qualified_[i] & qualified_[j]) == 0) {
          report.no_disjoint_qualified = false;
          break;
        }
      }
    }
  }
  return report;
}

void AccessStructure::require_valid() const {
  const StructureReport r = validate();
  if (!r.upward_closed) throw Error(ErrorCode::StructureMismatch, "access structure is not upward closed");
  if (!r.no_disjoint_qualified) throw Error(ErrorCode::CloningViolation, "access structure has disjoint qualified sets");
}

std::vector<Subset> AccessStructure::minimal_qualified() const {
  std::vector<Subset> out;
  for (Subset t : qualified_) {
    bool minimal = true;
    for (int p = 0; p < k_ && minimal; ++p) {
      const Subset bit = Subset{1} << p;
      if ((t & bit) && member_[t & ~bit]) minimal = false;
    }
    if (minimal) out.push_back(t);
  }
  return out;
}

std::vector<Subset> AccessStructure::maximal_unqualified() const {
  std::vector<Subset> out;
  for (Subset t = 0; t <= full_set(); ++t) {
    if (member_[t]) continue;
    bool maximal = true;
    for (int p = 0; p < k_ && maximal; ++p) {
      const Subset bit = Subset{1} << p;
      if (!(t & bit) && !member_[t | bit]) maximal = false;
    }
    if (maximal) out.push_back(t);
  }
  return out;
}

}  // namespace qss
