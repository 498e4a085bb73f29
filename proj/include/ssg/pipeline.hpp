#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "ssg/config.hpp"

namespace ssg {

/// Runs every analysis named in the config and writes its artifacts plus
/// summary.json into out_dir. Identical configs give byte-identical files.
/// Returns the written file names in the order they were written.
std::vector<std::string> run(const RunConfig& config, const std::filesystem::path& out_dir);

/// Graph export: vertices.csv (vertex_id,x,y), edges.csv (u,v,conductance) and,
/// with dump_matrix, stiffness.txt holding "row col value" triplets.
std::vector<std::string> run_build(const RunConfig& config, const std::filesystem::path& out_dir);

/// The same config restricted to a single analysis, as used by the CLI subcommands.
RunConfig only(const RunConfig& config, Analysis analysis);

}  // namespace ssg
