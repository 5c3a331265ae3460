#include "commands.hpp"

#include <cmath>
#include <fstream>
#include <future>
#include <iostream>
#include <sstream>

#include "qss/capacity.hpp"
#include "qss/io.hpp"
#include "qss/random.hpp"
#include "qss/schemes.hpp"

namespace qss::cli {

namespace {

using json = nlohmann::json;

void emit(const RunConfig& config, const std::string& text) {
  if (config.output_path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(config.output_path, std::ios::binary);
  if (!out) throw Error(ErrorCode::InvalidArgument, "cannot write '" + config.output_path + "'");
  out << text;
}

void emit_json(const RunConfig& config, const json& report) { emit(config, report.dump(2) + "\n"); }

double tolerance_of(const RunConfig& config, double fallback) {
  const double tol = config.tolerance.value_or(fallback);
  if (!(tol > 0)) throw Error(ErrorCode::InvalidArgument, "tolerance must be positive");
  return tol;
}

void require_json_format(const RunConfig& config) {
  if (config.format != "json") throw Error(ErrorCode::InvalidArgument, "this command only writes json");
}

json header(const char* command) { return {{"schema", io::kSchemaVersion}, {"command", command}}; }

std::vector<std::string> member_labels(const CompoundFamily& family) {
  std::vector<std::string> labels;
  for (const FamilyMember& m : family.members()) labels.push_back(m.label);
  return labels;
}

std::string csv_number(double v) {
  std::ostringstream s;
  s.precision(12);
  s << v;
  return s.str();
}

struct Evaluated {
  CapacityReport report;
  std::optional<ClosedForm> closed_form;
  std::optional<double> gap;
};

Evaluated evaluate(const io::FamilyDescriptor& fd, std::uint64_t seed) {
  OptimizerOptions opts;
  opts.seed = seed;
  Evaluated e{maximize_min_coherent_info(fd.family, opts), std::nullopt, std::nullopt};
  if (fd.dephasing_q) {
    e.closed_form = dephasing_capacity_closed_form(fd.d, *fd.dephasing_q);
    e.gap = std::abs(e.report.value_bits - e.closed_form->value_bits);
  }
  return e;
}

}  // namespace

int verify_scheme(const RunConfig& config) {
  require_json_format(config);
  const ThresholdSchemeSpec scheme = io::scheme_from_json(io::read_json_file(config.input_path));
  const double tol = tolerance_of(config, 1e-9);
  const int trials = config.trials.value_or(20);
  if (trials < 0) throw Error(ErrorCode::InvalidArgument, "trials must be non-negative");

  const AccessStructure access = scheme.access();
  std::vector<std::future<RecoveryReport>> recoveries;
  for (Subset set : access.qualified()) {
    recoveries.push_back(std::async(std::launch::async, [&scheme, set, trials, &config] {
      return verify_recovery(scheme, set, trials, config.seed);
    }));
  }
  std::vector<std::future<SecrecyReport>> secrecies;
  for (Subset set : access.maximal_unqualified()) {
    secrecies.push_back(std::async(std::launch::async, [&scheme, set] { return verify_secrecy(scheme, set); }));
  }

  bool pass = true;
  double min_fidelity = 1;
  double max_defect = 0;
  json recovery = json::array();
  for (std::size_t i = 0; i < recoveries.size(); ++i) {
    const RecoveryReport r = recoveries[i].get();
    const bool ok = r.min_fidelity >= 1 - tol;
    pass = pass && ok;
    min_fidelity = std::min(min_fidelity, r.min_fidelity);
    recovery.push_back({{"set", format_subset(access.qualified()[i])},
                        {"min_fidelity", r.min_fidelity},
                        {"entanglement_fidelity", r.entanglement_fidelity},
                        {"trials", r.trials},
                        {"pass", ok}});
  }
  json secrecy = json::array();
  const std::vector<Subset> unqualified = access.maximal_unqualified();
  for (std::size_t i = 0; i < secrecies.size(); ++i) {
    const SecrecyReport s = secrecies[i].get();
    const bool ok = s.defect() <= tol;
    pass = pass && ok;
    max_defect = std::max(max_defect, s.defect());
    secrecy.push_back({{"set", format_subset(unqualified[i])},
                       {"decoupling_defect", s.decoupling_defect},
                       {"basis_spread", s.basis_spread},
                       {"pass", ok}});
  }

  json report = header("verify-scheme");
  report["scheme"] = io::to_json(scheme);
  report["seed"] = config.seed;
  report["tolerance"] = tol;
  report["recovery"] = std::move(recovery);
  report["secrecy"] = std::move(secrecy);
  report["min_fidelity"] = min_fidelity;
  report["max_defect"] = max_defect;
  report["pass"] = pass;
  emit_json(config, report);
  return pass ? kPass : kVerificationFailed;
}

int capacity(const RunConfig& config) {
  require_json_format(config);
  const io::FamilyDescriptor fd = io::family_from_json(io::read_json_file(config.input_path));
  const double tol = tolerance_of(config, 1e-3);
  if (config.n != 1 && config.n != 2) throw Error(ErrorCode::InvalidArgument, "--n must be 1 or 2");

  const Evaluated e = evaluate(fd, config.seed);
  const double rate = product_input_rate(fd.family, e.report.argmax_input, config.n);
  const bool pass = !e.gap || *e.gap <= tol;

  json report = header("capacity");
  report["d"] = fd.d;
  report["members"] = member_labels(fd.family);
  report["optimizer"] = io::to_json(e.report);
  report["closed_form"] = e.closed_form ? json{{"value_bits", e.closed_form->value_bits},
                                               {"certified", e.closed_form->certified}}
                                        : json(nullptr);
  report["gap"] = e.gap ? json(*e.gap) : json(nullptr);
  report["tolerance"] = tol;
  report["product_input_rate"] = {{"n", config.n}, {"value_bits", rate}};
  report["pass"] = pass;
  emit_json(config, report);
  return pass ? kPass : kVerificationFailed;
}

int sweep(const RunConfig& config) {
  if (config.format != "json" && config.format != "csv") {
    throw Error(ErrorCode::InvalidArgument, "format must be json or csv");
  }
  const json input = io::read_json_file(config.input_path);
  const io::FamilyDescriptor base = io::family_from_json(input);
  if (!input.contains("sweep")) throw Error(ErrorCode::ParseError, "missing field 'sweep'");
  const json& spec = input.at("sweep");
  if (!spec.is_object() || !spec.contains("label") || !spec.contains("values") || !spec.at("label").is_string() ||
      !spec.at("values").is_array()) {
    throw Error(ErrorCode::ParseError, "'sweep' needs a string 'label' and an array 'values'");
  }
  const std::string label = spec.at("label").get<std::string>();
  std::vector<double> values;
  for (const json& v : spec.at("values")) {
    if (!v.is_number()) throw Error(ErrorCode::ParseError, "sweep values must be numbers");
    values.push_back(v.get<double>());
  }
  const double tol = tolerance_of(config, 1e-3);
  const std::vector<std::string> labels = member_labels(base.family);

  bool pass = true;
  json rows = json::array();
  std::ostringstream csv;
  csv << "param";
  for (const std::string& l : labels) csv << ',' << l;
  csv << ",min_bits,closed_form,gap\n";
  for (double v : values) {
    const Evaluated e = evaluate(io::with_member_param(base, label, v), config.seed);
    if (e.gap && *e.gap > tol) pass = false;
    rows.push_back({{"param", v},
                    {"per_member_bits", e.report.per_member_bits},
                    {"min_bits", e.report.value_bits},
                    {"closed_form", e.closed_form ? json(e.closed_form->value_bits) : json(nullptr)},
                    {"gap", e.gap ? json(*e.gap) : json(nullptr)}});
    csv << csv_number(v);
    for (const std::string& l : labels) csv << ',' << csv_number(e.report.per_member_bits.at(l));
    csv << ',' << csv_number(e.report.value_bits) << ','
        << (e.closed_form ? csv_number(e.closed_form->value_bits) : "") << ','
        << (e.gap ? csv_number(*e.gap) : "") << '\n';
  }

  if (config.format == "csv") {
    emit(config, csv.str());
  } else {
    json report = header("sweep");
    report["label"] = label;
    report["members"] = labels;
    report["seed"] = config.seed;
    report["tolerance"] = tol;
    report["rows"] = std::move(rows);
    report["pass"] = pass;
    emit_json(config, report);
  }
  return pass ? kPass : kVerificationFailed;
}

int teleport_demo(const RunConfig& config) {
  require_json_format(config);
  int d = 3;
  std::string states = "random";
  if (!config.input_path.empty()) {
    const json input = io::read_json_file(config.input_path);
    d = input.value("d", d);
    states = input.value("states", states);
  }
  if (d != 2 && d != 3 && d != 5) throw Error(ErrorCode::ParamOutOfRange, "teleport-demo supports d in {2, 3, 5}");
  const double tol = tolerance_of(config, 1e-10);
  const int count = states == "random" ? config.trials.value_or(10) : 1;
  if (count < 1) throw Error(ErrorCode::InvalidArgument, "trials must be positive");

  const RegisterShape shape({d}, {"S"});
  std::vector<DensityMatrix> inputs;
  if (states == "random") {
    Rng rng(config.seed);
    for (int i = 0; i < count; ++i) inputs.push_back(random_pure_state(shape, rng).density());
  } else if (states == "plus") {
    inputs.push_back(PureState::normalized(shape, CVector::Ones(d)).density());
  } else if (states == "maximally_mixed") {
    inputs.push_back(DensityMatrix::maximally_mixed(shape));
  } else {
    throw Error(ErrorCode::UnknownKind, "states must be random, plus or maximally_mixed");
  }

  const PureState resource = maximally_entangled(d);
  json fidelities = json::array();
  double min_fidelity = 1;
  for (const DensityMatrix& in : inputs) {
    const double f = fidelity(teleport(in, resource), in);
    fidelities.push_back(f);
    min_fidelity = std::min(min_fidelity, f);
  }
  const bool pass = min_fidelity >= 1 - tol;

  json report = header("teleport-demo");
  report["d"] = d;
  report["states"] = states;
  report["count"] = count;
  report["seed"] = config.seed;
  report["tolerance"] = tol;
  report["fidelities"] = std::move(fidelities);
  report["min_fidelity"] = min_fidelity;
  report["pass"] = pass;
  emit_json(config, report);
  return pass ? kPass : kVerificationFailed;
}

}  // namespace qss::cli
