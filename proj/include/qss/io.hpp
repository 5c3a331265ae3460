#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "qss/access_structure.hpp"
#include "qss/capacity.hpp"
#include "qss/channels.hpp"
#include "qss/schemes.hpp"

namespace qss::io {

using nlohmann::json;

inline constexpr const char* kSchemaVersion = "qss-report/1";

/// {"q": int, "t": int, "K": int, "points": [int] (optional)}
ThresholdSchemeSpec scheme_from_json(const json& j);
json to_json(const ThresholdSchemeSpec& scheme);

/// {"K": int, "threshold": int} | {"threshold": [t, K]} | {"K": int, "qualified": [[int]]}
AccessStructure access_from_json(const json& j);

struct FamilyDescriptor {
  int d = 0;  // input dimension of every member
  CompoundFamily family;
  std::vector<ChannelSpec> direct_specs;  // empty for broadcast-derived families
  /// Set when every member is a dephasing channel given directly.
  std::optional<std::vector<double>> dephasing_q;
};

/// {"d": int, "members": [{"label", "kind", "q" | "p"}]} or
/// {"d": int, "broadcast": {"per_share": [{"kind", "q" | "p"}], "encode": scheme (optional)},
///  "access": access descriptor, "all_qualified": bool (optional)}
FamilyDescriptor family_from_json(const json& j);
/// Rebuilds a direct family with `label`'s parameter replaced.
FamilyDescriptor with_member_param(const FamilyDescriptor& base, const std::string& label, double value);

json to_json(const DensityMatrix& rho);
json to_json(const CapacityReport& report);

json read_json_file(const std::string& path);

}  // namespace qss::io
