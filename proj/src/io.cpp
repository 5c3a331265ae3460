#include "qss/io.hpp"

#include <fstream>
#include <sstream>

namespace qss::io {

namespace {

template <typename T>
T require(const json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) throw Error(ErrorCode::ParseError, std::string("missing field '") + key + "'");
  try {
    return j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw Error(ErrorCode::ParseError, std::string("field '") + key + "': " + e.what());
  }
}

ChannelSpec channel_spec_from_json(const json& j, std::string label) {
  ChannelSpec spec;
  spec.label = std::move(label);
  spec.kind = require<std::string>(j, "kind");
  if (spec.kind == "dephasing") {
    spec.param = require<double>(j, "q");
  } else if (spec.kind == "depolarizing") {
    spec.param = require<double>(j, "p");
  } else if (spec.kind != "identity") {
    throw Error(ErrorCode::UnknownKind, "unknown channel kind '" + spec.kind + "'");
  }
  return spec;
}

FamilyDescriptor direct_descriptor(int d, std::vector<ChannelSpec> specs) {
  CompoundFamily family = direct_family(d, specs);
  std::optional<std::vector<double>> qs = std::vector<double>{};
  for (const ChannelSpec& s : specs) {
    if (s.kind == "dephasing") {
      qs->push_back(s.param);
    } else if (s.kind == "identity") {
      qs->push_back(0.0);
    } else {
      qs.reset();
      break;
    }
  }
  return {d, std::move(family), std::move(specs), std::move(qs)};
}

}  // namespace

ThresholdSchemeSpec scheme_from_json(const json& j) {
  const int q = require<int>(j, "q");
  const int t = require<int>(j, "t");
  const int k = require<int>(j, "K");
  std::vector<std::int64_t> points;
  if (j.contains("points")) points = require<std::vector<std::int64_t>>(j, "points");
  return {q, t, k, std::move(points)};
}

json to_json(const ThresholdSchemeSpec& scheme) {
  return {{"q", scheme.q()}, {"t", scheme.t()}, {"K", scheme.participants()}, {"points", scheme.points()}};
}

AccessStructure access_from_json(const json& j) {
  if (j.contains("threshold") && j.at("threshold").is_array()) {
    const auto tk = require<std::vector<int>>(j, "threshold");
    if (tk.size() != 2) throw Error(ErrorCode::ParseError, "threshold array must be [t, K]");
    return AccessStructure::from_threshold(tk[0], tk[1]);
  }
  const int k = require<int>(j, "K");
  if (j.contains("threshold")) return AccessStructure::from_threshold(require<int>(j, "threshold"), k);
  const auto sets = require<std::vector<std::vector<int>>>(j, "qualified");
  std::vector<Subset> masks;
  for (const auto& s : sets) {
    for (int p : s) {
      if (p < 1 || p > k) throw Error(ErrorCode::ParseError, "participant " + std::to_string(p) + " not in [1, K]");
    }
    masks.push_back(subset_of(s));
  }
  return AccessStructure::from_qualified(k, masks);
}

FamilyDescriptor family_from_json(const json& j) {
  const int d = require<int>(j, "d");
  if (j.contains("members")) {
    const json& members = j.at("members");
    if (!members.is_array()) throw Error(ErrorCode::ParseError, "'members' must be an array");
    std::vector<ChannelSpec> specs;
    for (const json& m : members) specs.push_back(channel_spec_from_json(m, require<std::string>(m, "label")));
    return direct_descriptor(d, std::move(specs));
  }
  if (!j.contains("broadcast") || !j.contains("access")) {
    throw Error(ErrorCode::ParseError, "family needs 'members' or 'broadcast' + 'access'");
  }
  const json& b = j.at("broadcast");
  const auto per_share = require<std::vector<json>>(b, "per_share");
  if (per_share.empty()) throw Error(ErrorCode::ParseError, "'per_share' is empty");
  std::optional<KrausChannel> noise;
  for (std::size_t k = 0; k < per_share.size(); ++k) {
    KrausChannel ch = make_channel(d, channel_spec_from_json(per_share[k], "B" + std::to_string(k + 1)));
    ch = KrausChannel(ch.ops(), RegisterShape({d}, {"B" + std::to_string(k + 1)}));
    noise = noise ? tensor_product(*noise, ch) : ch;
  }
  KrausChannel broadcast = *noise;
  if (b.contains("encode")) {
    const ThresholdSchemeSpec scheme = scheme_from_json(b.at("encode"));
    if (scheme.q() != d || scheme.participants() != static_cast<int>(per_share.size())) {
      throw Error(ErrorCode::StructureMismatch, "encoder must have q = d and K = number of per-share channels");
    }
    broadcast = compose(broadcast, encoding_channel(scheme));
  }
  const AccessStructure access = access_from_json(j.at("access"));
  const bool all = j.value("all_qualified", false);
  CompoundFamily family = compound_from_access(broadcast, access, all);
  const int input_dim = static_cast<int>(family.input_dim());
  return {input_dim, std::move(family), {}, std::nullopt};
}

FamilyDescriptor with_member_param(const FamilyDescriptor& base, const std::string& label, double value) {
  if (base.direct_specs.empty()) throw Error(ErrorCode::InvalidArgument, "sweeps need a direct member list");
  std::vector<ChannelSpec> specs = base.direct_specs;
  bool found = false;
  for (ChannelSpec& s : specs) {
    if (s.label == label) {
      if (s.kind == "identity") throw Error(ErrorCode::InvalidArgument, "identity member has no parameter");
      s.param = value;
      found = true;
    }
  }
  if (!found) throw Error(ErrorCode::InvalidArgument, "no member labelled '" + label + "'");
  return direct_descriptor(base.d, std::move(specs));
}

json to_json(const DensityMatrix& rho) {
  json re = json::array();
  json im = json::array();
  for (Eigen::Index i = 0; i < rho.dim(); ++i) {
    json rr = json::array();
    json ir = json::array();
    for (Eigen::Index k = 0; k < rho.dim(); ++k) {
      rr.push_back(rho.matrix()(i, k).real());
      ir.push_back(rho.matrix()(i, k).imag());
    }
    re.push_back(std::move(rr));
    im.push_back(std::move(ir));
  }
  return {{"dims", rho.shape().dims()}, {"real", std::move(re)}, {"imag", std::move(im)}};
}

json to_json(const CapacityReport& report) {
  return {{"value_bits", report.value_bits},
          {"per_member_bits", report.per_member_bits},
          {"argmax_input", to_json(report.argmax_input)},
          {"method", report.method},
          {"iterations", report.iterations},
          {"evaluations", report.evaluations},
          {"tolerance", report.tolerance},
          {"seed", report.seed},
          {"converged", report.converged}};
}

json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::ParseError, "cannot read '" + path + "'");
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::ParseError, "'" + path + "': " + e.what());
  }
}

}  // namespace qss::io
