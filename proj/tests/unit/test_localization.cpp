#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "ssg/error.hpp"
#include "ssg/localization.hpp"

using namespace ssg;

namespace {

const auto kHalf = CompatibleSequence::constant(0.5);
const MeasureSpec kLine(1.0, 0.25);

struct System {
  SsgGraph graph;
  MassVector mass;
  DiscreteForm neumann;
  DiscreteForm dirichlet;
};

System make_system(int level, int s, const MeasureSpec& spec, const CompatibleSequence& seq = kHalf) {
  auto g = build_ssg_graph(seq, level, s);
  auto mass = lump_measure(g, spec);
  auto n = make_form(g, mass);
  auto d = apply_dirichlet(n, g.outer_corners());
  return {std::move(g), std::move(mass), std::move(n), std::move(d)};
}

}  // namespace

TEST_CASE("dirichlet-neumann pairs") {
  const auto sys = make_system(2, 2, kLine);
  const auto spec = solve_generalized(sys.dirichlet, true, Problem::dirichlet);
  const auto pairs = find_dn_eigenpairs(spec, sys.neumann, 1e-8);
  REQUIRE_FALSE(pairs.empty());
  for (const auto& p : pairs) {
    CHECK(p.lambda > 1e-6);
    CHECK(residual(sys.neumann, p.lambda, p.vector) <= 1e-8);
    for (auto c : sys.graph.outer_corners()) CHECK(p.vector[static_cast<Eigen::Index>(c)] == 0.0);
    Eigen::VectorXd rows(sys.dirichlet.dimension());
    for (Eigen::Index i = 0; i < rows.size(); ++i) rows[i] = p.vector[static_cast<Eigen::Index>(sys.dirichlet.free[static_cast<std::size_t>(i)])];
    CHECK(residual(sys.dirichlet, p.lambda, rows) <= 1e-8);
  }
  CHECK(find_dn_eigenpairs(spec, sys.neumann, 0.0).empty());
}

TEST_CASE("slice gluing") {
  const auto sys = make_system(3, 2, kLine);
  const auto slices = sixth_domain(sys.graph);
  const auto form = slice_problem(sys.graph, sys.mass, slices);
  const auto spec = solve_generalized(form, true, Problem::dirichlet);
  const Eigen::VectorXd phi = zero_extend(form, spec.vectors->col(0), sys.graph.vertex_count());
  const Eigen::VectorXd glued = glue_prelocalized(sys.graph, slices, phi);

  const auto sigma = apply_symmetry(SymmetryElement::sigma, sys.graph);
  const auto tau = apply_symmetry(SymmetryElement::tau, sys.graph);
  for (std::size_t v = 0; v < sys.graph.vertex_count(); ++v) {
    const auto i = static_cast<Eigen::Index>(v);
    CHECK(glued[static_cast<Eigen::Index>(sigma[v])] == doctest::Approx(glued[i]).epsilon(1e-14));
    CHECK(glued[static_cast<Eigen::Index>(tau[v])] == doctest::Approx(-glued[i]).epsilon(1e-14));
  }
  CHECK(residual(sys.neumann, spec.values[0], glued) <= 1e-8);

  Eigen::VectorXd bad = phi;
  bad[static_cast<Eigen::Index>(sys.graph.outer_corners()[0])] = 1.0;
  CHECK_THROWS_AS(glue_prelocalized(sys.graph, slices, bad), Error);
}

TEST_CASE("transplant") {
  const auto big = make_system(3, 2, kLine);
  const auto small = make_system(2, 2, kLine);
  const auto spec = solve_generalized(small.dirichlet, true, Problem::dirichlet);
  const auto pairs = find_dn_eigenpairs(spec, small.neumann, 1e-8);
  REQUIRE_FALSE(pairs.empty());
  const auto& p = pairs.front();
  for (const char* cell : {"1", "2", "3"}) {
    const auto t = transplant_to_cell(p.vector, p.lambda, Word::parse(cell), small.graph, big.graph, big.mass, kLine);
    CHECK(t.eigenvalue == doctest::Approx(8.0 * p.lambda).epsilon(1e-14));
    CHECK(t.support_fraction == 0.0);
    CHECK(residual(big.neumann, t.eigenvalue, t.function) <= 1e-8);
    const auto inside = cell_vertex_set(big.graph, Word::parse(cell));
    for (std::size_t v = 0; v < big.graph.vertex_count(); ++v) {
      if (!std::binary_search(inside.begin(), inside.end(), v)) CHECK(t.function[static_cast<Eigen::Index>(v)] == 0.0);
    }
  }
  CHECK_THROWS_AS(
      transplant_to_cell(p.vector, p.lambda, Word::parse("12"), small.graph, big.graph, big.mass, kLine), Error);
  const auto other = make_system(2, 4, kLine);
  CHECK_THROWS_AS(
      transplant_to_cell(p.vector, p.lambda, Word::parse("1"), small.graph, other.graph, other.mass, kLine), Error);
}

TEST_CASE("bounds") {
  const auto sys = make_system(4, 2, kLine);
  const auto rec = bounds_check(sys.graph, kLine, sixth_domain(sys.graph));
  CHECK(rec.upper == doctest::Approx(3072.0).epsilon(1e-14));
  CHECK(rec.lower == 0.0625);
  CHECK(rec.test_mass >= std::pow(0.25, 3));
  CHECK(rec.test_mass >= rec.test_cell_mass);
  CHECK(rec.test_rayleigh >= rec.lambda_sixth_min);
  CHECK(rec.upper_holds);
  CHECK(rec.lower_holds);

  const auto odd = make_system(3, 3, kLine);
  CHECK_THROWS_AS(bounds_check(odd.graph, kLine, SliceDecomposition{}), Error);
}

TEST_CASE("localize") {
  const auto rep = localize(kHalf, 3, 2, kLine, {1, 1e-8, {}});
  CHECK_FALSE(rep.dn_pairs.empty());
  REQUIRE(rep.glued.has_value());
  CHECK(rep.glued->residual <= 1e-8);
  REQUIRE(rep.depths.size() == 2);
  CHECK(rep.depths[1].multiplicity >= 3);
  CHECK(rep.depths[1].nu == doctest::Approx(8.0 * rep.depths[1].source_lambda).epsilon(1e-12));
  CHECK(rep.rate == doctest::Approx(8.0));
  CHECK(rep.c1 <= rep.c2);
}
