#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <sstream>

#include "ssg/config.hpp"
#include "ssg/geometry.hpp"
#include "ssg/pipeline.hpp"

using namespace ssg;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const char* base = std::getenv("SSG_TEST_TMP");
  const fs::path dir = fs::path(base ? base : fs::temp_directory_path().string()) / name;
  fs::remove_all(dir);
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

RunConfig small() {
  RunConfig c;
  c.level = 3;
  c.subdivisions = 2;
  return c;
}

}  // namespace

TEST_CASE("spectrum only") {
  const auto dir = scratch("spectrum");
  const auto files = run(small(), dir);
  CHECK(files == std::vector<std::string>{"spectrum.csv", "summary.json"});
  std::size_t entries = 0;
  for ([[maybe_unused]] const auto& e : fs::directory_iterator(dir)) ++entries;
  CHECK(entries == 2);
}

TEST_CASE("deterministic outputs") {
  RunConfig c = small();
  c.boundary = BoundaryMode::both;
  c.analyses = {Analysis::spectrum, Analysis::weyl, Analysis::renewal, Analysis::localization, Analysis::resistance};
  const auto a = scratch("det_a");
  const auto b = scratch("det_b");
  const auto fa = run(c, a);
  const auto fb = run(c, b);
  REQUIRE(fa == fb);
  for (const auto& f : fa) CHECK(slurp(a / f) == slurp(b / f));

  const auto summary = nlohmann::json::parse(slurp(a / "summary.json"));
  CHECK(summary["spectrum"]["interlacing"]["holds"] == true);
  CHECK(summary["resistance"]["R12"].get<double>() == doctest::Approx(2.0 / 3.0).epsilon(1e-10));
  CHECK(parse_config(summary["config"].dump()) == c);
  CHECK(slurp(a / "spectrum.csv").rfind("index,eigenvalue,cluster_id,multiplicity\n", 0) == 0);
}

TEST_CASE("build export") {
  RunConfig c = small();
  c.dump_matrix = true;
  const auto dir = scratch("build");
  const auto files = run_build(c, dir);
  CHECK(files == std::vector<std::string>{"vertices.csv", "edges.csv", "stiffness.txt", "summary.json"});
  std::ifstream in(dir / "vertices.csv");
  std::string line;
  std::size_t lines = 0;
  while (std::getline(in, line)) ++lines;
  CHECK(lines == ssg_vertex_count(3, 2) + 1);
}

TEST_CASE("sg compare") {
  RunConfig c = small();
  c.level = 5;
  c.analyses = {Analysis::sg_compare};
  const auto dir = scratch("sg");
  run(c, dir);
  const auto summary = nlohmann::json::parse(slurp(dir / "summary.json"));
  CHECK(summary["sg_compare"]["d_s"].get<double>() == doctest::Approx(std::log(9.0) / std::log(5.0)));
  CHECK(summary["sg_compare"]["fit"]["slope"].is_number());
}
