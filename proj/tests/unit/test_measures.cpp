#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "ssg/error.hpp"
#include "ssg/measures.hpp"

using namespace ssg;

TEST_CASE("measure spec") {
  CHECK_THROWS_AS(MeasureSpec(0.0, 0.2), Error);
  CHECK_THROWS_AS(MeasureSpec(1.1, 0.2), Error);
  CHECK_THROWS_AS(MeasureSpec(0.5, 1.0 / 3.0), Error);
  CHECK_THROWS_AS(MeasureSpec(0.5, 0.0), Error);
  CHECK(MeasureSpec(1.0, 0.25).a() == doctest::Approx(1.0 / 12.0));
}

TEST_CASE("cell mass") {
  CHECK(cell_mass(MeasureSpec(1.0, 1.0 / 6.0), 2) == doctest::Approx(1.0 / 36.0).epsilon(1e-15));
  CHECK(cell_mass(MeasureSpec(0.5, 1.0 / 6.0), 1) == doctest::Approx(0.25).epsilon(1e-15));
  CHECK(cell_mass(MeasureSpec(0.3, 0.2), 0) == doctest::Approx(1.0));
  for (double eta : {0.1, 0.5, 0.9, 1.0}) {
    for (int n = 0; n <= 8; ++n) {
      const double v = cell_mass(MeasureSpec(eta, 0.3), n);
      CHECK(v >= (1.0 - eta) * std::pow(3.0, -n) - 1e-16);
      CHECK(v <= std::pow(3.0, -n) + 1e-16);
    }
  }
}

TEST_CASE("lumped masses") {
  const auto seq = CompatibleSequence::constant(0.5);
  for (int m = 0; m <= 4; ++m) {
    for (int s : {1, 2, 5}) {
      for (double eta : {0.2, 1.0}) {
        for (double beta : {0.05, 1.0 / 6.0, 0.3}) {
          const auto g = build_ssg_graph(seq, m, s);
          const auto mass = lump_measure(g, MeasureSpec(eta, beta));
          CHECK(mass.total() == doctest::Approx(1.0).epsilon(1e-12));
          CHECK(mass.values().minCoeff() > 0.0);
        }
      }
    }
  }

  // m = 1, s = 2, eta = 1, beta = 1/6: every generation-1 edge carries a = 1/6.
  const auto g = build_ssg_graph(seq, 1, 2);
  const auto mass = lump_measure(g, MeasureSpec(1.0, 1.0 / 6.0));
  for (const auto& e : g.line_edges()) {
    REQUIRE(e.chain.size() == 3);
    CHECK(mass[e.chain[1]] == doctest::Approx(1.0 / 12.0).epsilon(1e-14));
    CHECK(mass[e.chain[0]] == doctest::Approx(1.0 / 24.0 + 1.0 / 18.0).epsilon(1e-14));
    CHECK(mass[e.chain[2]] == doctest::Approx(1.0 / 24.0 + 1.0 / 18.0).epsilon(1e-14));
  }

  // Close to beta = 1/3 the line part vanishes.
  const auto near = lump_measure(build_ssg_graph(seq, 2, 2), MeasureSpec(1.0, 1.0 / 3.0 - 1e-12));
  for (std::size_t v = 0; v < near.size(); ++v) {
    const auto& id = build_ssg_graph(seq, 2, 2).vertices()[v];
    if (std::holds_alternative<LineNode>(id)) CHECK(near[v] < 1e-11);
  }

  const auto sg = lump_measure(build_sg_graph(3), MeasureSpec(1.0, 0.25));
  CHECK(sg.total() == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("rescaled eta") {
  for (int n = 0; n <= 6; ++n) CHECK(rescaled_eta(MeasureSpec(1.0, 0.2), n) == 1.0);
  const MeasureSpec spec(0.5, 1.0 / 6.0);
  CHECK(rescaled_eta(spec, 1) == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
  double prev = rescaled_eta(spec, 0);
  for (int n = 1; n <= 20; ++n) {
    const double v = rescaled_eta(spec, n);
    CHECK(v < prev);
    prev = v;
  }
  CHECK(prev < 1e-5);

  // mu(K_w)^{-1} mu restricted to K_w is mu with the rescaled weight.
  for (int n = 1; n <= 4; ++n) {
    const MeasureSpec inner(rescaled_eta(spec, n), spec.beta());
    for (int k = 0; k <= 3; ++k) {
      CHECK(cell_mass(spec, n + k) / cell_mass(spec, n) == doctest::Approx(cell_mass(inner, k)).epsilon(1e-13));
    }
  }
}
