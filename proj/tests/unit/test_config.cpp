#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <string>

#include "ssg/config.hpp"
#include "ssg/error.hpp"

using namespace ssg;

namespace {

std::string message_of(const std::string& text) {
  try {
    parse_config(text);
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::config_invalid);
    return e.what();
  }
  FAIL("config accepted: " << text);
  return {};
}

bool contains(const std::string& haystack, const std::string& needle) {
  return haystack.find(needle) != std::string::npos;
}

const std::string kMinimal =
    R"({"sequence": {"kind": "constant", "r": 0.5}, "level": 4, "measure": {"eta": 1, "beta": 0.25}})";

}  // namespace

TEST_CASE("minimal config") {
  const RunConfig c = parse_config(kMinimal);
  CHECK(c.level == 4);
  CHECK(c.subdivisions == 4);
  CHECK(c.eta == 1.0);
  CHECK(c.beta == 0.25);
  CHECK(c.boundary == BoundaryMode::dirichlet);
  CHECK(c.analyses == std::vector<Analysis>{Analysis::spectrum});
  CHECK(c.sequence.build() == CompatibleSequence::constant(0.5));
}

TEST_CASE("round trip") {
  RunConfig c = parse_config(kMinimal);
  c.sequence.kind = SequenceKind::periodic;
  c.sequence.rs = {0.4, 0.55};
  c.boundary = BoundaryMode::both;
  c.analyses = {Analysis::spectrum, Analysis::sg_compare, Analysis::resistance};
  c.tolerances.cluster_rel = 3e-9;
  c.alpha = 0.1;
  c.fit_decades = 1.5;
  const std::string text = serialize_config(c);
  CHECK(parse_config(text) == c);
  CHECK(serialize_config(parse_config(text)) == text);
}

TEST_CASE("validation errors") {
  CHECK(contains(message_of(R"({"sequence": {"kind": "constant", "r": 0.5}, "level": 3, "measure": {"eta": 1, "beta": 0.4}})"),
                 "beta must be < 1/3"));
  CHECK(contains(message_of(R"({"sequence": {"kind": "constant", "r": 0.5}, "level": 3, "measure": {"eta": 0, "beta": 0.2}})"),
                 "measure.eta"));
  CHECK(contains(message_of(R"({"sequence": {"kind": "constant", "r": 0.5}, "level": 3, "subdivisions": 3, "measure": {"eta": 1, "beta": 0.25},
                               "analyses": ["localization"]})"),
                 "s must be even"));
  CHECK(contains(message_of(R"({"sequence": {"kind": "constant", "r": 0.5}, "level": 3, "measure": {"eta": 1, "beta": 0.25}, "levle": 3})"), "levle"));
  CHECK(contains(message_of(R"({"sequence": {"kind": "constant", "r": 0.7}, "level": 3, "measure": {"eta": 1, "beta": 0.25}})"), "sequence"));
  CHECK(contains(message_of(R"({"sequence": {"kind": "constant", "r": 0.5}, "level": 3, "measure": {"eta": 0.5, "beta": 0.2},
                               "analyses": ["renewal"]})"),
                 "renewal"));
  CHECK(contains(message_of(R"({"sequence": {"kind": "constant", "r": 0.5}, "level": 3, "measure": {"eta": 1, "beta": 0.2},
                               "analyses": ["weyl"]})"),
                 "beta"));
  CHECK(contains(message_of(R"({"sequence": {"kind": "general", "rs": [0.5, 0.5], "limit_r": 0.5}, "level": 4, "measure": {"eta": 1, "beta": 0.25}})"),
                 "sequence"));
  CHECK(contains(message_of(R"({"sequence": {"kind": "constant", "r": 0.5}, "level": 3, "measure": {"eta": 1, "beta": 0.25}, "analyses": ["nope"]})"), "analyses"));
  CHECK(contains(message_of("{not json"), "ConfigInvalid"));
}

TEST_CASE("load") {
  try {
    load_config("/nonexistent/ssg.json");
    FAIL("no error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::io_failure);
  }
}
