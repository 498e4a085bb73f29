#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "ssg/matching_pairs.hpp"

namespace ssg {

enum class BoundaryMode { dirichlet, neumann, both };
enum class Analysis { spectrum, weyl, renewal, localization, resistance, sg_compare };

std::string_view to_string(BoundaryMode mode);
std::string_view to_string(Analysis analysis);

struct SequenceConfig {
  SequenceKind kind = SequenceKind::constant;
  /// One value for constant sequences, one period for periodic ones, the prefix for general ones.
  std::vector<double> rs{0.5};
  /// Declared limit; only read for general sequences.
  double limit_r = 0.5;

  CompatibleSequence build() const;
  /// limit_r takes part only for general sequences.
  bool operator==(const SequenceConfig& o) const {
    return kind == o.kind && rs == o.rs && (kind != SequenceKind::general || limit_r == o.limit_r);
  }
};

struct Tolerances {
  double cluster_rel = 1e-8;
  double cluster_abs_floor = 1e-6;
  double residual = 1e-8;
  /// Allowed relative change of N under s -> 2s when locating resolved_max.
  double resolved_shift = 0.01;
  /// Slack on the 1/16 lower bound for the slice eigenvalue.
  double lower_slack = 0.2;
  bool operator==(const Tolerances&) const = default;
};

struct RunConfig {
  SequenceConfig sequence;
  int level = 4;
  int subdivisions = 4;
  double eta = 1.0;
  double beta = 0.25;
  double alpha = 1.0 / 3.0;
  BoundaryMode boundary = BoundaryMode::dirichlet;
  std::vector<Analysis> analyses{Analysis::spectrum};
  Tolerances tolerances;
  int points_per_decade = 64;
  int points_per_window = 64;
  /// Decades below resolved_max covered by the exponent fit.
  double fit_decades = 2.0;
  /// Compute the s -> 2s spectrum to locate resolved_max; otherwise the whole spectrum counts as resolved.
  bool refine = true;
  int max_depth = 2;
  /// Also write vertices.csv, edges.csv and the stiffness triplets for `build`.
  bool dump_matrix = false;
  std::string output = "out";

  bool wants(Analysis a) const;
  bool operator==(const RunConfig&) const = default;
};

/// Parses and validates a JSON run description. Every violation is reported as
/// ConfigInvalid with the offending field path, before anything is computed.
RunConfig parse_config(std::string_view text);
RunConfig load_config(const std::filesystem::path& path);
/// Canonical JSON with every field present; parse_config(serialize_config(c)) == c.
std::string serialize_config(const RunConfig& config);
/// Re-runs the cross-field checks; throws ConfigInvalid.
void validate(const RunConfig& config);

}  // namespace ssg
