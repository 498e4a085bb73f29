#include "ssg/localization.hpp"

#include <Eigen/SVD>
#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "ssg/error.hpp"
#include "ssg/spectral_analysis.hpp"

namespace ssg {

namespace {

using Triplet = Eigen::Triplet<double>;

constexpr double kBoundaryTol = 1e-12;

std::vector<Eigen::Index> rows_by_vertex(const DiscreteForm& form, std::size_t vertex_count) {
  std::vector<Eigen::Index> row(vertex_count, -1);
  for (std::size_t i = 0; i < form.free.size(); ++i) {
    if (form.free[i] >= vertex_count) throw Error(ErrorCode::invalid_argument, "form row outside the graph");
    row[form.free[i]] = static_cast<Eigen::Index>(i);
  }
  return row;
}

Eigen::VectorXd restrict_to(const DiscreteForm& form, const Eigen::VectorXd& values) {
  Eigen::VectorXd out(static_cast<Eigen::Index>(form.dimension()));
  for (std::size_t i = 0; i < form.free.size(); ++i) out[static_cast<Eigen::Index>(i)] = values[static_cast<Eigen::Index>(form.free[i])];
  return out;
}

double rayleigh(const DiscreteForm& form, const Eigen::VectorXd& u) {
  return u.dot(form.stiffness * u) / u.dot(form.mass.cwiseProduct(u));
}

struct Source {
  Eigen::VectorXd vector;
  double lambda = 0.0;
  double residual = 0.0;
};

// Lowest D-N eigenpair of the Dirichlet problem at V_0, falling back to the
// glued slice eigenfunction when the eigenspace search finds nothing.
std::optional<Source> lowest_dn(const SsgGraph& graph, const MassVector& mass, double tol, ClusterOptions clusters) {
  const DiscreteForm full = make_form(graph, mass);
  const auto& outer = graph.outer_corners();
  const DiscreteForm dform = apply_dirichlet(full, outer);
  const Spectrum spectrum = solve_generalized(dform, true, Problem::dirichlet);
  const auto pairs = find_dn_eigenpairs(spectrum, full, tol, clusters);
  if (!pairs.empty()) return Source{pairs.front().vector, pairs.front().lambda, std::max(pairs.front().residual_d, pairs.front().residual_n)};
  if (graph.subdivisions() % 2 != 0) return std::nullopt;
  const SliceDecomposition slices = sixth_domain(graph);
  const DiscreteForm sform = slice_problem(graph, mass, slices);
  if (sform.dimension() == 0) return std::nullopt;
  const Spectrum sspec = solve_generalized(sform, true, Problem::dirichlet);
  Eigen::VectorXd phi = glue_prelocalized(graph, slices, zero_extend(sform, sspec.vectors->col(0), graph.vertex_count()));
  phi /= std::sqrt(phi.dot(full.mass.cwiseProduct(phi)));
  const double lambda = sspec.values[0];
  return Source{phi, lambda, residual(full, lambda, phi)};
}

}  // namespace

Eigen::VectorXd zero_extend(const DiscreteForm& form, const Eigen::VectorXd& rows, std::size_t vertex_count) {
  if (rows.size() != static_cast<Eigen::Index>(form.dimension())) {
    throw Error(ErrorCode::invalid_argument, "vector length does not match the form");
  }
  Eigen::VectorXd out = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(vertex_count));
  for (std::size_t i = 0; i < form.free.size(); ++i) {
    if (form.free[i] >= vertex_count) throw Error(ErrorCode::invalid_argument, "form row outside the graph");
    out[static_cast<Eigen::Index>(form.free[i])] = rows[static_cast<Eigen::Index>(i)];
  }
  return out;
}

std::vector<DnPair> find_dn_eigenpairs(const Spectrum& dirichlet, const DiscreteForm& neumann_form, double tol,
                                       ClusterOptions clusters) {
  if (!dirichlet.vectors) throw Error(ErrorCode::invalid_argument, "D-N search needs Dirichlet eigenvectors");
  const std::size_t n = neumann_form.dimension();
  std::size_t max_vertex = 0;
  for (auto v : neumann_form.free) max_vertex = std::max(max_vertex, v);
  const auto neumann_row = rows_by_vertex(neumann_form, n == 0 ? 0 : max_vertex + 1);

  std::vector<Eigen::Index> kept(dirichlet.free.size());
  std::vector<bool> interior(n, false);
  for (std::size_t i = 0; i < dirichlet.free.size(); ++i) {
    const std::size_t v = dirichlet.free[i];
    if (v >= neumann_row.size() || neumann_row[v] < 0) {
      throw Error(ErrorCode::invalid_argument, "Dirichlet row " + std::to_string(v) + " missing from the Neumann form");
    }
    kept[i] = neumann_row[v];
    interior[static_cast<std::size_t>(kept[i])] = true;
  }
  std::vector<Eigen::Index> removed;
  for (std::size_t r = 0; r < n; ++r) {
    if (!interior[r]) removed.push_back(static_cast<Eigen::Index>(r));
  }

  std::vector<DnPair> out;
  const Eigen::MatrixXd& vectors = *dirichlet.vectors;
  for (const auto& cluster : cluster_multiplicities(dirichlet.values, clusters)) {
    const auto c = static_cast<Eigen::Index>(cluster.count);
    Eigen::MatrixXd basis = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(n), c);
    for (Eigen::Index j = 0; j < c; ++j) {
      const auto col = static_cast<Eigen::Index>(cluster.members[static_cast<std::size_t>(j)]);
      for (std::size_t i = 0; i < kept.size(); ++i) basis(kept[i], j) = vectors(static_cast<Eigen::Index>(i), col);
    }
    Eigen::MatrixXd combos = Eigen::MatrixXd::Identity(c, c);
    if (!removed.empty()) {
      const Eigen::MatrixXd flux_all = neumann_form.stiffness * basis;
      Eigen::MatrixXd flux(static_cast<Eigen::Index>(removed.size()), c);
      for (std::size_t r = 0; r < removed.size(); ++r) flux.row(static_cast<Eigen::Index>(r)) = flux_all.row(removed[r]);
      Eigen::JacobiSVD<Eigen::MatrixXd> svd(flux, Eigen::ComputeFullV);
      combos = svd.matrixV();
    }
    for (Eigen::Index j = 0; j < c; ++j) {
      Eigen::VectorXd u = basis * combos.col(j);
      const double norm = std::sqrt(u.dot(neumann_form.mass.cwiseProduct(u)));
      if (!(norm > 0.0)) continue;
      u /= norm;
      const double lambda = rayleigh(neumann_form, u);
      const Eigen::VectorXd r = neumann_form.stiffness * u - lambda * neumann_form.mass.cwiseProduct(u);
      const double denom = neumann_form.mass.cwiseProduct(u).norm();
      double interior_sq = 0.0;
      for (auto row : kept) interior_sq += r[row] * r[row];
      const double res_d = std::sqrt(interior_sq) / denom;
      const double res_n = r.norm() / denom;
      if (res_d <= tol && res_n <= tol) out.push_back({lambda, res_d, res_n, std::move(u)});
    }
  }
  std::stable_sort(out.begin(), out.end(), [](const DnPair& a, const DnPair& b) { return a.lambda < b.lambda; });
  return out;
}

DiscreteForm slice_problem(const SsgGraph& graph, const MassVector& mass, const SliceDecomposition& slices) {
  const std::size_t n = graph.vertex_count();
  if (mass.size() != n || slices.on_line.size() != n) {
    throw Error(ErrorCode::invalid_argument, "mass or slices do not match the graph");
  }
  DiscreteForm form;
  std::vector<Eigen::Index> row(n, -1);
  for (auto v : slices.slices[0]) {
    if (slices.on_line[v]) continue;
    row[v] = static_cast<Eigen::Index>(form.free.size());
    form.free.push_back(v);
  }
  const auto dim = static_cast<Eigen::Index>(form.free.size());
  std::vector<std::vector<std::size_t>> mirrors;
  for (auto g : {SymmetryElement::tau, SymmetryElement::tau_sigma, SymmetryElement::tau_sigma2}) {
    mirrors.push_back(apply_symmetry(g, graph));
  }

  std::vector<Triplet> triplets;
  Eigen::VectorXd diag = Eigen::VectorXd::Zero(dim);
  for (const auto& e : graph.edges()) {
    const Eigen::Index a = row[e.u];
    const Eigen::Index b = row[e.v];
    if (a >= 0 && b >= 0) {
      triplets.emplace_back(a, b, -e.conductance);
      triplets.emplace_back(b, a, -e.conductance);
      diag[a] += e.conductance;
      diag[b] += e.conductance;
      continue;
    }
    if (a < 0 && b < 0) continue;
    const std::size_t inside = a >= 0 ? e.u : e.v;
    const std::size_t outside = a >= 0 ? e.v : e.u;
    const Eigen::Index r = std::max(a, b);
    if (slices.on_line[outside]) {
      diag[r] += e.conductance;
      continue;
    }
    bool mirrored = false;
    for (const auto& perm : mirrors) mirrored = mirrored || perm[inside] == outside;
    if (!mirrored) {
      throw Error(ErrorCode::topology_mismatch, "edge leaves slice 1 without crossing a bisecting line");
    }
    diag[r] += 2.0 * e.conductance;
  }
  for (Eigen::Index i = 0; i < dim; ++i) triplets.emplace_back(i, i, diag[i]);
  form.stiffness.resize(dim, dim);
  form.stiffness.setFromTriplets(triplets.begin(), triplets.end());
  form.mass.resize(dim);
  for (Eigen::Index i = 0; i < dim; ++i) form.mass[i] = mass[form.free[static_cast<std::size_t>(i)]];
  return form;
}

Eigen::VectorXd glue_prelocalized(const SsgGraph& graph, const SliceDecomposition& slices, const Eigen::VectorXd& phi) {
  const std::size_t n = graph.vertex_count();
  if (phi.size() != static_cast<Eigen::Index>(n)) throw Error(ErrorCode::invalid_argument, "phi must live on all vertices");
  for (std::size_t v = 0; v < n; ++v) {
    const bool inside = !slices.on_line[v] && slices.slice_of[v] == 1;
    if (!inside && std::abs(phi[static_cast<Eigen::Index>(v)]) > kBoundaryTol) {
      throw Error(ErrorCode::nonvanishing_boundary,
                  "phi = " + std::to_string(phi[static_cast<Eigen::Index>(v)]) + " at " + to_string(graph.vertices()[v]));
    }
  }
  const auto tau = apply_symmetry(SymmetryElement::tau, graph);
  std::vector<std::vector<std::size_t>> rotations;
  for (auto g : {SymmetryElement::id, SymmetryElement::sigma, SymmetryElement::sigma2}) rotations.push_back(apply_symmetry(g, graph));
  Eigen::VectorXd out = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(n));
  for (std::size_t v = 0; v < n; ++v) {
    double sum = 0.0;
    for (const auto& rot : rotations) {
      const std::size_t image = rot[v];
      sum += phi[static_cast<Eigen::Index>(image)] - phi[static_cast<Eigen::Index>(tau[image])];
    }
    out[static_cast<Eigen::Index>(v)] = sum;
  }
  return out;
}

Transplant transplant_to_cell(const Eigen::VectorXd& u, double lambda, const Word& w, const SsgGraph& small,
                              const SsgGraph& big, const MassVector& big_mass, const MeasureSpec& spec) {
  const int n = static_cast<int>(w.size());
  if (small.topology() != Topology::ssg || big.topology() != Topology::ssg) {
    throw Error(ErrorCode::cell_mismatch, "transplanting needs stretched-gasket graphs");
  }
  if (small.level() + n != big.level() || small.subdivisions() != big.subdivisions()) {
    throw Error(ErrorCode::cell_mismatch, "small graph must have level m - |w| and the same subdivisions");
  }
  if (!small.sequence() || !big.sequence() || !(*small.sequence() == shift(*big.sequence(), static_cast<std::size_t>(n)))) {
    throw Error(ErrorCode::cell_mismatch, "small graph must be built from the shifted sequence");
  }
  if (u.size() != static_cast<Eigen::Index>(small.vertex_count()) || big_mass.size() != big.vertex_count()) {
    throw Error(ErrorCode::cell_mismatch, "vector or mass length does not match the graphs");
  }
  const double scale = std::max(1.0, u.cwiseAbs().maxCoeff());
  for (auto v : small.outer_corners()) {
    if (std::abs(u[static_cast<Eigen::Index>(v)]) > kBoundaryTol * scale) {
      throw Error(ErrorCode::nonvanishing_boundary, "u must vanish on the outer corners");
    }
  }

  Transplant out;
  out.function = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(big.vertex_count()));
  for (std::size_t v = 0; v < small.vertex_count(); ++v) {
    VertexId id = small.vertices()[v];
    if (auto* c = std::get_if<Corner>(&id)) {
      c->word = w.concat(c->word);
    } else {
      auto& node = std::get<LineNode>(id);
      node.word = w.concat(node.word);
    }
    const auto target = big.index_of(id);
    if (!target) throw Error(ErrorCode::cell_mismatch, "address map left the big graph");
    out.function[static_cast<Eigen::Index>(*target)] = u[static_cast<Eigen::Index>(v)];
  }
  const double delta = scalings(*big.sequence(), static_cast<std::size_t>(n)).delta_at(static_cast<std::size_t>(n));
  out.eigenvalue = lambda / (delta * cell_mass(spec, n));

  std::vector<bool> inside(big.vertex_count(), false);
  for (auto v : cell_vertex_set(big, w)) inside[v] = true;
  double total = 0.0;
  double outside = 0.0;
  for (std::size_t v = 0; v < big.vertex_count(); ++v) {
    const double x = out.function[static_cast<Eigen::Index>(v)];
    const double e = big_mass[v] * x * x;
    total += e;
    if (!inside[v]) outside += e;
  }
  out.support_fraction = total > 0.0 ? outside / total : 0.0;
  return out;
}

BoundsRecord bounds_check(const SsgGraph& graph, const MeasureSpec& spec, const SliceDecomposition& slices,
                          double lower_slack) {
  if (graph.topology() != Topology::ssg || graph.subdivisions() % 2 != 0) {
    throw Error(ErrorCode::slice_unavailable, "slice problem needs a stretched gasket with even subdivisions");
  }
  if (graph.level() < 3) throw Error(ErrorCode::slice_unavailable, "the test function needs level >= 3");
  const auto& seq = *graph.sequence();
  const MassVector mass = lump_measure(graph, spec);
  const DiscreteForm form = slice_problem(graph, mass, slices);

  BoundsRecord b;
  b.lower_slack = lower_slack;
  b.lambda_sixth_min = solve_generalized(form, false, Problem::dirichlet).values[0];
  const double kappa1 = check_conditions(seq, static_cast<std::size_t>(graph.level())).kappa_1;
  const double r = seq.limit_r();
  const double beta = spec.beta();
  b.upper = 6.0 / (kappa1 * r * r * r * beta * beta * beta);

  b.test_cell = Word::parse("122");
  const auto rows = rows_by_vertex(form, graph.vertex_count());
  std::map<std::size_t, double> ones;
  for (auto v : cell_vertex_set(graph, b.test_cell)) {
    if (rows[v] < 0) throw Error(ErrorCode::slice_unavailable, "test cell is not inside slice 1");
    ones[static_cast<std::size_t>(rows[v])] = 1.0;
  }
  const Eigen::VectorXd u = harmonic_extension(form.stiffness, ones);
  b.test_energy = u.dot(form.stiffness * u);
  b.test_mass = u.dot(form.mass.cwiseProduct(u));
  b.test_rayleigh = b.test_energy / b.test_mass;
  b.test_cell_mass = cell_mass(spec, 3);
  b.upper_holds = b.lambda_sixth_min <= b.upper && b.test_rayleigh <= b.upper;
  b.lower_holds = b.lambda_sixth_min >= b.lower * (1.0 - lower_slack);
  return b;
}

LocalizationReport localize(const CompatibleSequence& seq, int level, int subdivisions, const MeasureSpec& spec,
                            LocalizationOptions options) {
  const SsgGraph big = build_ssg_graph(seq, level, subdivisions);
  const MassVector mass = lump_measure(big, spec);
  const DiscreteForm full = make_form(big, mass);
  const DiscreteForm dform = apply_dirichlet(full, big.outer_corners());
  const Spectrum dspec = solve_generalized(dform, true, Problem::dirichlet);

  LocalizationReport report;
  report.dn_pairs = find_dn_eigenpairs(dspec, full, options.tol, options.clusters);

  auto multiplicity_at = [&](double nu) {
    std::size_t count = 0;
    const double width = options.clusters.rel_tol * std::max(std::abs(nu), options.clusters.abs_floor);
    for (Eigen::Index i = 0; i < dspec.values.size(); ++i) count += std::abs(dspec.values[i] - nu) <= width ? 1 : 0;
    return count;
  };

  const bool even = subdivisions % 2 == 0;
  if (even && level >= 1) {
    const SliceDecomposition slices = sixth_domain(big);
    const DiscreteForm sform = slice_problem(big, mass, slices);
    if (sform.dimension() > 0) {
      const Spectrum sspec = solve_generalized(sform, true, Problem::dirichlet);
      const Eigen::VectorXd phi = zero_extend(sform, sspec.vectors->col(0), big.vertex_count());
      const Eigen::VectorXd glued = glue_prelocalized(big, slices, phi);
      GluedRecord g;
      g.lambda = sspec.values[0];
      g.residual = residual(dform, g.lambda, restrict_to(dform, glued));
      g.residual_neumann = residual(full, g.lambda, glued);
      const auto sigma = apply_symmetry(SymmetryElement::sigma, big);
      const auto tau = apply_symmetry(SymmetryElement::tau, big);
      const double peak = glued.cwiseAbs().maxCoeff();
      for (std::size_t v = 0; v < big.vertex_count(); ++v) {
        const auto i = static_cast<Eigen::Index>(v);
        g.rotation_error = std::max(g.rotation_error, std::abs(glued[static_cast<Eigen::Index>(sigma[v])] - glued[i]) / peak);
        g.reflection_error = std::max(g.reflection_error, std::abs(glued[static_cast<Eigen::Index>(tau[v])] + glued[i]) / peak);
      }
      report.glued = g;
    }
    if (level >= 3) report.bounds = bounds_check(big, spec, slices);
  }

  if (!report.dn_pairs.empty()) {
    const auto& p = report.dn_pairs.front();
    report.depths.push_back({0, p.lambda, p.lambda, std::max(p.residual_d, p.residual_n),
                             std::max(p.residual_d, p.residual_n), multiplicity_at(p.lambda), 0.0});
  }
  for (int n = 1; n <= std::min(options.max_depth, level - 1); ++n) {
    const CompatibleSequence shifted = shift(seq, static_cast<std::size_t>(n));
    const SsgGraph small = build_ssg_graph(shifted, level - n, subdivisions);
    const MeasureSpec small_spec(rescaled_eta(spec, n), spec.beta());
    const auto source = lowest_dn(small, lump_measure(small, small_spec), options.tol, options.clusters);
    if (!source) continue;
    const Word w = Word::repeated(1, static_cast<std::size_t>(n));
    const Transplant t = transplant_to_cell(source->vector, source->lambda, w, small, big, mass, spec);
    DepthRecord d;
    d.depth = n;
    d.nu = t.eigenvalue;
    d.source_lambda = source->lambda;
    d.source_residual = source->residual;
    d.residual = residual(dform, t.eigenvalue, restrict_to(dform, t.function));
    d.multiplicity = multiplicity_at(t.eigenvalue);
    d.support_fraction = t.support_fraction;
    report.depths.push_back(d);
  }

  const double r = seq.effective_r();
  report.rate = spec.eta() < 1.0 ? 3.0 / r : 1.0 / (spec.beta() * r);
  if (!report.depths.empty()) {
    report.c1 = std::numeric_limits<double>::infinity();
    report.c2 = 0.0;
    for (const auto& d : report.depths) {
      const double c = d.nu / std::pow(report.rate, d.depth);
      report.c1 = std::min(report.c1, c);
      report.c2 = std::max(report.c2, c);
    }
  }
  return report;
}

}  // namespace ssg
