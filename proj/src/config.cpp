#include "ssg/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <json.hpp>
#include <sstream>

#include "ssg/error.hpp"
#include "ssg/spectral_analysis.hpp"

namespace ssg {

namespace {

using nlohmann::json;

[[noreturn]] void invalid(const std::string& path, const std::string& message) {
  throw Error(ErrorCode::config_invalid, path + ": " + message);
}

const json& require(const json& obj, const char* key, const std::string& path) {
  if (!obj.contains(key)) invalid(path + key, "missing");
  return obj.at(key);
}

double number(const json& v, const std::string& path) {
  if (!v.is_number()) invalid(path, "must be a number");
  return v.get<double>();
}

int integer(const json& v, const std::string& path) {
  if (!v.is_number_integer()) invalid(path, "must be an integer");
  return v.get<int>();
}

void only_keys(const json& obj, std::initializer_list<const char*> keys, const std::string& path) {
  if (!obj.is_object()) invalid(path.empty() ? "<root>" : path, "must be an object");
  for (const auto& [key, value] : obj.items()) {
    (void)value;
    if (std::none_of(keys.begin(), keys.end(), [&](const char* k) { return key == k; })) {
      invalid(path + key, "unknown field");
    }
  }
}

const std::pair<Analysis, const char*> kAnalysisNames[] = {
    {Analysis::spectrum, "spectrum"},         {Analysis::weyl, "weyl"},
    {Analysis::renewal, "renewal"},           {Analysis::localization, "localization"},
    {Analysis::resistance, "resistance"},     {Analysis::sg_compare, "sg-compare"},
};

SequenceConfig parse_sequence(const json& j) {
  SequenceConfig s;
  if (!j.is_object()) invalid("sequence", "must be an object");
  const std::string kind = require(j, "kind", "sequence.").is_string() ? j.at("kind").get<std::string>() : "";
  if (kind == "constant") {
    only_keys(j, {"kind", "r"}, "sequence.");
    s.kind = SequenceKind::constant;
    s.rs = {number(require(j, "r", "sequence."), "sequence.r")};
    s.limit_r = s.rs.front();
  } else if (kind == "periodic" || kind == "general") {
    s.kind = kind == "periodic" ? SequenceKind::periodic : SequenceKind::general;
    if (s.kind == SequenceKind::periodic) {
      only_keys(j, {"kind", "rs"}, "sequence.");
    } else {
      only_keys(j, {"kind", "rs", "limit_r"}, "sequence.");
    }
    const json& rs = require(j, "rs", "sequence.");
    if (!rs.is_array() || rs.empty()) invalid("sequence.rs", "must be a non-empty array");
    s.rs.clear();
    for (std::size_t i = 0; i < rs.size(); ++i) s.rs.push_back(number(rs[i], "sequence.rs[" + std::to_string(i) + "]"));
    s.limit_r = s.kind == SequenceKind::general ? number(require(j, "limit_r", "sequence."), "sequence.limit_r") : 0.0;
  } else {
    invalid("sequence.kind", "must be one of constant, periodic, general");
  }
  return s;
}

}  // namespace

std::string_view to_string(BoundaryMode mode) {
  switch (mode) {
    case BoundaryMode::dirichlet: return "dirichlet";
    case BoundaryMode::neumann: return "neumann";
    case BoundaryMode::both: return "both";
  }
  return "dirichlet";
}

std::string_view to_string(Analysis analysis) {
  for (const auto& [a, name] : kAnalysisNames) {
    if (a == analysis) return name;
  }
  return "spectrum";
}

CompatibleSequence SequenceConfig::build() const {
  switch (kind) {
    case SequenceKind::constant: return CompatibleSequence::constant(rs.front());
    case SequenceKind::periodic: return CompatibleSequence::periodic(rs);
    case SequenceKind::general: return CompatibleSequence::general(rs, limit_r);
  }
  return CompatibleSequence::constant(rs.front());
}

bool RunConfig::wants(Analysis a) const { return std::find(analyses.begin(), analyses.end(), a) != analyses.end(); }

void validate(const RunConfig& c) {
  if (c.sequence.rs.empty()) invalid("sequence.rs", "must be non-empty");
  if (c.sequence.kind == SequenceKind::constant && c.sequence.rs.size() != 1) invalid("sequence.r", "constant sequences carry one r");
  for (std::size_t i = 0; i < c.sequence.rs.size(); ++i) {
    const double r = c.sequence.rs[i];
    const std::string path = c.sequence.kind == SequenceKind::constant ? "sequence.r" : "sequence.rs[" + std::to_string(i) + "]";
    if (!(r > 0.0)) invalid(path, "r must be > 0");
    if (r > 0.6 + 1e-15) invalid(path, "r must be <= 3/5");
    if (r >= 0.6 - 1e-15 && c.level > 0) invalid(path, "r = 3/5 gives rho = 0 and no line conductance");
  }
  if (c.sequence.kind == SequenceKind::general) {
    if (!(c.sequence.limit_r >= 1.0 / 3.0 - 1e-15 && c.sequence.limit_r <= 0.6 + 1e-15)) {
      invalid("sequence.limit_r", "limit_r must lie in [1/3, 3/5]");
    }
    if (static_cast<int>(c.sequence.rs.size()) < c.level) {
      invalid("sequence.rs", "a general sequence needs at least `level` values");
    }
  }
  if (c.level < 0 || c.level > 9) invalid("level", "must lie in 0..9");
  if (c.subdivisions < 1) invalid("subdivisions", "must be >= 1");
  if (!(c.eta > 0.0)) invalid("measure.eta", "eta must be > 0");
  if (c.eta > 1.0) invalid("measure.eta", "eta must be <= 1");
  if (!(c.beta > 0.0)) invalid("measure.beta", "beta must be > 0");
  if (!(c.beta < 1.0 / 3.0)) invalid("measure.beta", "beta must be < 1/3");
  if (!(c.alpha > 0.0 && c.alpha < 1.0)) invalid("alpha", "must lie in (0, 1)");
  if (c.analyses.empty()) invalid("analyses", "must name at least one analysis");
  const auto& t = c.tolerances;
  if (!(t.cluster_rel >= 0.0)) invalid("tolerances.cluster_rel", "must be >= 0");
  if (!(t.cluster_abs_floor > 0.0)) invalid("tolerances.cluster_abs_floor", "must be > 0");
  if (!(t.residual >= 0.0)) invalid("tolerances.residual", "must be >= 0");
  if (!(t.resolved_shift > 0.0)) invalid("tolerances.resolved_shift", "must be > 0");
  if (!(t.lower_slack >= 0.0 && t.lower_slack < 1.0)) invalid("tolerances.lower_slack", "must lie in [0, 1)");
  if (c.points_per_decade < 1) invalid("grid.points_per_decade", "must be >= 1");
  if (c.points_per_window < 1) invalid("grid.points_per_window", "must be >= 1");
  if (!(c.fit_decades > 0.0)) invalid("grid.fit_decades", "must be > 0");
  if (c.max_depth < 0) invalid("localization.max_depth", "must be >= 0");
  if (c.output.empty()) invalid("output", "must be a non-empty path");

  const bool spectral = c.wants(Analysis::weyl) || c.wants(Analysis::renewal);
  if (spectral && c.eta == 1.0) {
    const double r = c.sequence.kind == SequenceKind::general ? c.sequence.limit_r : c.sequence.build().effective_r();
    if (!(c.beta > 1.0 / (9.0 * r))) invalid("measure.beta", "line measure needs beta > 1/(9r)");
  }
  if (c.wants(Analysis::renewal)) {
    if (c.eta != 1.0) invalid("measure.eta", "renewal analysis needs eta = 1");
    if (c.sequence.kind == SequenceKind::general) invalid("sequence.kind", "renewal analysis needs a constant or periodic sequence");
  }
  if (c.wants(Analysis::localization)) {
    if (c.subdivisions % 2 != 0) invalid("subdivisions", "s must be even");
    if (c.level < 1) invalid("level", "localization needs level >= 1");
  }
}

RunConfig parse_config(std::string_view text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::config_invalid, std::string("<document>: ") + e.what());
  }
  only_keys(j, {"sequence", "level", "subdivisions", "measure", "alpha", "boundary", "analyses", "tolerances", "grid",
                "refine", "localization", "dump_matrix", "output"},
            "");
  RunConfig c;
  c.sequence = parse_sequence(require(j, "sequence", ""));
  c.level = integer(require(j, "level", ""), "level");
  if (j.contains("subdivisions")) c.subdivisions = integer(j["subdivisions"], "subdivisions");
  const json& measure = require(j, "measure", "");
  only_keys(measure, {"eta", "beta"}, "measure.");
  c.eta = number(require(measure, "eta", "measure."), "measure.eta");
  c.beta = number(require(measure, "beta", "measure."), "measure.beta");
  if (j.contains("alpha")) c.alpha = number(j["alpha"], "alpha");
  if (j.contains("boundary")) {
    const std::string b = j["boundary"].is_string() ? j["boundary"].get<std::string>() : "";
    if (b == "dirichlet") c.boundary = BoundaryMode::dirichlet;
    else if (b == "neumann") c.boundary = BoundaryMode::neumann;
    else if (b == "both") c.boundary = BoundaryMode::both;
    else invalid("boundary", "must be one of dirichlet, neumann, both");
  }
  if (j.contains("analyses")) {
    const json& list = j["analyses"];
    if (!list.is_array()) invalid("analyses", "must be an array");
    c.analyses.clear();
    for (std::size_t i = 0; i < list.size(); ++i) {
      const std::string name = list[i].is_string() ? list[i].get<std::string>() : "";
      const auto* hit = std::find_if(std::begin(kAnalysisNames), std::end(kAnalysisNames),
                                     [&](const auto& p) { return name == p.second; });
      if (hit == std::end(kAnalysisNames)) invalid("analyses[" + std::to_string(i) + "]", "unknown analysis '" + name + "'");
      if (!c.wants(hit->first)) c.analyses.push_back(hit->first);
    }
  }
  if (j.contains("tolerances")) {
    const json& t = j["tolerances"];
    only_keys(t, {"cluster_rel", "cluster_abs_floor", "residual", "resolved_shift", "lower_slack"}, "tolerances.");
    if (t.contains("cluster_rel")) c.tolerances.cluster_rel = number(t["cluster_rel"], "tolerances.cluster_rel");
    if (t.contains("cluster_abs_floor")) c.tolerances.cluster_abs_floor = number(t["cluster_abs_floor"], "tolerances.cluster_abs_floor");
    if (t.contains("residual")) c.tolerances.residual = number(t["residual"], "tolerances.residual");
    if (t.contains("resolved_shift")) c.tolerances.resolved_shift = number(t["resolved_shift"], "tolerances.resolved_shift");
    if (t.contains("lower_slack")) c.tolerances.lower_slack = number(t["lower_slack"], "tolerances.lower_slack");
  }
  if (j.contains("grid")) {
    const json& g = j["grid"];
    only_keys(g, {"points_per_decade", "points_per_window", "fit_decades"}, "grid.");
    if (g.contains("points_per_decade")) c.points_per_decade = integer(g["points_per_decade"], "grid.points_per_decade");
    if (g.contains("points_per_window")) c.points_per_window = integer(g["points_per_window"], "grid.points_per_window");
    if (g.contains("fit_decades")) c.fit_decades = number(g["fit_decades"], "grid.fit_decades");
  }
  if (j.contains("refine")) {
    if (!j["refine"].is_boolean()) invalid("refine", "must be true or false");
    c.refine = j["refine"].get<bool>();
  }
  if (j.contains("localization")) {
    only_keys(j["localization"], {"max_depth"}, "localization.");
    if (j["localization"].contains("max_depth")) c.max_depth = integer(j["localization"]["max_depth"], "localization.max_depth");
  }
  if (j.contains("dump_matrix")) {
    if (!j["dump_matrix"].is_boolean()) invalid("dump_matrix", "must be true or false");
    c.dump_matrix = j["dump_matrix"].get<bool>();
  }
  if (j.contains("output")) {
    if (!j["output"].is_string()) invalid("output", "must be a string");
    c.output = j["output"].get<std::string>();
  }
  validate(c);
  return c;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::io_failure, "cannot read " + path.string());
  std::ostringstream text;
  text << in.rdbuf();
  return parse_config(text.str());
}

std::string serialize_config(const RunConfig& c) {
  json j;
  json seq;
  switch (c.sequence.kind) {
    case SequenceKind::constant:
      seq = {{"kind", "constant"}, {"r", c.sequence.rs.front()}};
      break;
    case SequenceKind::periodic:
      seq = {{"kind", "periodic"}, {"rs", c.sequence.rs}};
      break;
    case SequenceKind::general:
      seq = {{"kind", "general"}, {"rs", c.sequence.rs}, {"limit_r", c.sequence.limit_r}};
      break;
  }
  j["sequence"] = seq;
  j["level"] = c.level;
  j["subdivisions"] = c.subdivisions;
  j["measure"] = {{"eta", c.eta}, {"beta", c.beta}};
  j["alpha"] = c.alpha;
  j["boundary"] = std::string(to_string(c.boundary));
  j["analyses"] = json::array();
  for (auto a : c.analyses) j["analyses"].push_back(std::string(to_string(a)));
  j["tolerances"] = {{"cluster_rel", c.tolerances.cluster_rel},
                     {"cluster_abs_floor", c.tolerances.cluster_abs_floor},
                     {"residual", c.tolerances.residual},
                     {"resolved_shift", c.tolerances.resolved_shift},
                     {"lower_slack", c.tolerances.lower_slack}};
  j["grid"] = {{"points_per_decade", c.points_per_decade},
               {"points_per_window", c.points_per_window},
               {"fit_decades", c.fit_decades}};
  j["refine"] = c.refine;
  j["localization"] = {{"max_depth", c.max_depth}};
  j["dump_matrix"] = c.dump_matrix;
  j["output"] = c.output;
  return j.dump(2) + "\n";
}

}  // namespace ssg
