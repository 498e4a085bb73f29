#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <map>
#include <set>

#include "ssg/error.hpp"
#include "ssg/geometry.hpp"

using namespace ssg;

namespace {

const auto kHalf = CompatibleSequence::constant(0.5);

std::size_t count_kind(const SsgGraph& g, EdgeKind kind) {
  return static_cast<std::size_t>(
      std::count_if(g.edges().begin(), g.edges().end(), [&](const Edge& e) { return e.kind == kind; }));
}

}  // namespace

TEST_CASE("words") {
  const Word w = Word::parse("213");
  CHECK(w.size() == 3);
  CHECK(w.str() == "213");
  CHECK(Word::parse("").empty());
  CHECK(Word::from_rank(w.rank(), 3) == w);
  CHECK(Word::parse("111").rank() == 0);
  CHECK(Word::parse("333").rank() == 26);
  CHECK(w.has_prefix(Word::parse("21")));
  CHECK_FALSE(w.has_prefix(Word::parse("3")));
  CHECK(Word::repeated(2, 2) == Word::parse("22"));
}

TEST_CASE("ssg graph counts") {
  const auto g11 = build_ssg_graph(kHalf, 1, 1);
  CHECK(g11.vertex_count() == 9);
  CHECK(g11.edges().size() == 12);
  CHECK(count_kind(g11, EdgeKind::line) == 3);

  const auto g14 = build_ssg_graph(kHalf, 1, 4);
  CHECK(g14.vertex_count() == 18);

  const auto g21 = build_ssg_graph(kHalf, 2, 1);
  CHECK(g21.vertex_count() == 27);
  CHECK(g21.line_edges().size() == 12);
  std::map<int, int> per_generation;
  for (const auto& e : g21.line_edges()) ++per_generation[e.generation];
  CHECK(per_generation[1] == 3);
  CHECK(per_generation[2] == 9);

  for (int m = 0; m <= 4; ++m) {
    for (int s : {1, 2, 3, 4}) {
      const auto g = build_ssg_graph(kHalf, m, s);
      CHECK(g.vertex_count() == ssg_vertex_count(m, s));
      CHECK(g.cells().size() == static_cast<std::size_t>(std::pow(3, m)));
      // 3 triangle edges per cell, s segments per line edge.
      CHECK(g.edges().size() == 3 * g.cells().size() + static_cast<std::size_t>(s) * g.line_edges().size());
    }
  }
}

TEST_CASE("ssg conductances") {
  const auto seq = CompatibleSequence::periodic({0.4, 0.5});
  const auto g = build_ssg_graph(seq, 2, 3);
  const auto t = scalings(seq, 2);
  for (const auto& e : g.edges()) {
    if (e.kind == EdgeKind::triangle) {
      CHECK(e.conductance == doctest::Approx(1.0 / t.delta[1]).epsilon(1e-14));
    } else {
      CHECK(e.conductance == doctest::Approx(3.0 / t.gamma[e.generation - 1]).epsilon(1e-14));
    }
  }
  const auto g1 = build_ssg_graph(kHalf, 1, 1);
  for (const auto& e : g1.edges()) {
    if (e.kind == EdgeKind::triangle) CHECK(e.conductance == doctest::Approx(2.0));
  }
}

TEST_CASE("ssg graph errors") {
  CHECK_THROWS_AS(build_ssg_graph(kHalf, 1, 0), Error);
  CHECK_THROWS_AS(build_ssg_graph(CompatibleSequence::general({0.5}, 0.5), 2, 1), Error);
  CHECK_THROWS_AS(build_ssg_graph(CompatibleSequence::constant(0.6), 1, 1), Error);
}

TEST_CASE("sg graph") {
  const auto g0 = build_sg_graph(0);
  CHECK(g0.vertex_count() == 3);
  CHECK(g0.edges().size() == 3);
  CHECK(g0.edges()[0].conductance == 1.0);
  const auto g1 = build_sg_graph(1);
  CHECK(g1.vertex_count() == 6);
  CHECK(g1.edges().size() == 9);
  CHECK(g1.edges()[0].conductance == doctest::Approx(5.0 / 3.0));
  for (int m = 0; m <= 5; ++m) {
    const auto g = build_sg_graph(m);
    const auto p = static_cast<std::size_t>(std::pow(3, m));
    CHECK(g.vertex_count() == 3 * (p + 1) / 2);
    CHECK(g.edges().size() == 3 * p);
  }
}

TEST_CASE("symmetry group") {
  const Corner c{Word::parse("13"), 2};
  const auto rotated = apply_symmetry(SymmetryElement::sigma, VertexId{c}, 1);
  CHECK(std::get<Corner>(rotated) == Corner{Word::parse("21"), 3});
  const Corner p{Word::parse("1"), 1};
  CHECK(std::get<Corner>(apply_symmetry(SymmetryElement::tau, VertexId{p}, 1)) == p);

  for (auto a : kDihedralGroup) {
    CHECK(compose(a, inverse(a)) == SymmetryElement::id);
    for (auto b : kDihedralGroup) {
      for (int letter = 1; letter <= 3; ++letter) {
        CHECK(act_on_letter(compose(a, b), letter) == act_on_letter(a, act_on_letter(b, letter)));
      }
    }
  }

  for (int s : {1, 2, 3}) {
    const auto g = build_ssg_graph(kHalf, 3, s);
    for (auto a : kDihedralGroup) {
      const auto pa = apply_symmetry(a, g);
      CHECK(std::set<std::size_t>(pa.begin(), pa.end()).size() == g.vertex_count());
      // Edges map onto edges with the same conductance.
      std::map<std::pair<std::size_t, std::size_t>, double> edges;
      for (const auto& e : g.edges()) edges[{std::min(e.u, e.v), std::max(e.u, e.v)}] = e.conductance;
      for (const auto& e : g.edges()) {
        const auto key = std::make_pair(std::min(pa[e.u], pa[e.v]), std::max(pa[e.u], pa[e.v]));
        REQUIRE(edges.count(key) == 1);
        CHECK(edges[key] == e.conductance);
      }
    }
    const auto s1 = apply_symmetry(SymmetryElement::sigma, g);
    for (std::size_t v = 0; v < g.vertex_count(); ++v) CHECK(s1[s1[s1[v]]] == v);
  }
}

TEST_CASE("cell vertex sets") {
  const auto g = build_ssg_graph(kHalf, 2, 3);
  const auto all = cell_vertex_set(g, Word());
  CHECK(all.size() == g.vertex_count());
  const auto c1 = cell_vertex_set(g, Word::parse("1"));
  const auto c2 = cell_vertex_set(g, Word::parse("2"));
  CHECK(c1.size() == 9 + 3 * 2);
  std::vector<std::size_t> both;
  std::set_intersection(c1.begin(), c1.end(), c2.begin(), c2.end(), std::back_inserter(both));
  CHECK(both.empty());
  CHECK(cell_vertex_set(g, Word::parse("12")).size() == 3);
  CHECK_THROWS_AS(cell_vertex_set(g, Word::parse("121")), Error);
}

TEST_CASE("sixth domain") {
  for (int m : {1, 2, 3}) {
    const auto g = build_ssg_graph(kHalf, m, 2);
    const auto d = sixth_domain(g);
    std::vector<int> hits(g.vertex_count(), 0);
    for (const auto& s : d.slices) {
      for (auto v : s) ++hits[v];
    }
    for (std::size_t v = 0; v < g.vertex_count(); ++v) {
      CHECK(hits[v] >= 1);
      if (d.on_line[v]) CHECK(hits[v] >= 2);
      if (!d.on_line[v]) CHECK(hits[v] == 1);
    }
    // The bisector through p1 carries p1 and the midpoint node of the generation-1 line opposite p1.
    const auto p1 = g.outer_corners()[0];
    CHECK(d.on_line[p1]);
    int midpoints = 0;
    for (const auto& e : g.line_edges()) {
      if (e.generation == 1 && d.on_line[e.chain[e.chain.size() / 2]]) ++midpoints;
    }
    CHECK(midpoints == 3);
    const auto sigma = apply_symmetry(SymmetryElement::sigma, g);
    for (int i = 0; i < 6; ++i) {
      std::set<std::size_t> image;
      for (auto v : d.slices[i]) image.insert(sigma[v]);
      const auto& target = d.slices[(i + 2) % 6];
      CHECK(image == std::set<std::size_t>(target.begin(), target.end()));
    }
  }
  CHECK_THROWS_AS(sixth_domain(build_ssg_graph(kHalf, 2, 3)), Error);
}
