#include "ssg/eigensolve.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/QR>
#include <algorithm>
#include <array>
#include <cmath>
#include <string>

#include "ssg/error.hpp"

namespace ssg {

namespace {

using Triplet = Eigen::Triplet<double>;

Eigen::VectorXd dense_eigenvalues(const SparseMatrix& k, const Eigen::VectorXd& mass) {
  DiscreteForm block{k, mass, std::vector<std::size_t>(static_cast<std::size_t>(mass.size()))};
  return solve_generalized(block, false, Problem::dirichlet).values;
}

// Character of the trivial, sign and two-dimensional representations of D3.
double character(int rep, SymmetryElement g) {
  if (rep == 0) return 1.0;
  if (rep == 1) return is_reflection(g) ? -1.0 : 1.0;
  if (g == SymmetryElement::id) return 2.0;
  return is_reflection(g) ? 0.0 : -1.0;
}

}  // namespace

Spectrum solve_generalized(const DiscreteForm& form, bool want_vectors, Problem problem) {
  const auto n = static_cast<Eigen::Index>(form.dimension());
  for (Eigen::Index i = 0; i < n; ++i) {
    if (!(form.mass[i] > 0.0)) {
      throw Error(ErrorCode::non_positive_mass, "row " + std::to_string(i) + " has mass " + std::to_string(form.mass[i]));
    }
  }
  const Eigen::VectorXd scale = form.mass.cwiseSqrt().cwiseInverse();
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index col = 0; col < form.stiffness.outerSize(); ++col) {
    for (SparseMatrix::InnerIterator it(form.stiffness, col); it; ++it) {
      a(it.row(), col) = it.value() * scale[it.row()] * scale[col];
    }
  }

  Spectrum spectrum;
  spectrum.problem = problem;
  spectrum.free = form.free;
  if (n == 0) return spectrum;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver;
  solver.compute(a, want_vectors ? Eigen::ComputeEigenvectors : Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) throw Error(ErrorCode::singular_system, "symmetric eigensolver did not converge");
  spectrum.values = solver.eigenvalues();
  if (want_vectors) spectrum.vectors = scale.asDiagonal() * solver.eigenvectors();
  return spectrum;
}

Spectrum solve_by_symmetry(const SsgGraph& graph, const DiscreteForm& form, Problem problem) {
  const std::size_t rows = form.dimension();
  std::vector<Eigen::Index> row_of(graph.vertex_count(), -1);
  for (std::size_t i = 0; i < rows; ++i) row_of[form.free[i]] = static_cast<Eigen::Index>(i);

  std::array<std::vector<Eigen::Index>, 6> act;
  for (std::size_t gi = 0; gi < 6; ++gi) {
    const auto perm = apply_symmetry(kDihedralGroup[gi], graph);
    act[gi].resize(rows);
    for (std::size_t i = 0; i < rows; ++i) {
      const Eigen::Index image = row_of[perm[form.free[i]]];
      if (image < 0) return solve_generalized(form, false, problem);
      act[gi][i] = image;
    }
  }

  // Orthonormal per-orbit bases of the isotypic components; for the
  // two-dimensional representation only the tau-even partner is kept.
  std::array<std::vector<Triplet>, 3> basis;
  std::array<std::vector<double>, 3> block_mass;
  std::vector<bool> seen(rows, false);
  for (std::size_t start = 0; start < rows; ++start) {
    if (seen[start]) continue;
    std::vector<Eigen::Index> orbit;
    for (std::size_t gi = 0; gi < 6; ++gi) {
      const Eigen::Index r = act[gi][start];
      if (std::find(orbit.begin(), orbit.end(), r) == orbit.end()) orbit.push_back(r);
    }
    std::sort(orbit.begin(), orbit.end());
    const auto k = static_cast<Eigen::Index>(orbit.size());
    const double m = form.mass[orbit.front()];
    for (auto r : orbit) {
      seen[static_cast<std::size_t>(r)] = true;
      if (std::abs(form.mass[r] - m) > 1e-12 * std::abs(m)) return solve_generalized(form, false, problem);
    }
    auto local = [&](Eigen::Index r) {
      return static_cast<Eigen::Index>(std::find(orbit.begin(), orbit.end(), r) - orbit.begin());
    };
    std::array<Eigen::MatrixXd, 6> perm_local;
    for (std::size_t gi = 0; gi < 6; ++gi) {
      perm_local[gi] = Eigen::MatrixXd::Zero(k, k);
      for (Eigen::Index i = 0; i < k; ++i) perm_local[gi](local(act[gi][static_cast<std::size_t>(orbit[i])]), i) = 1.0;
    }
    for (int rep = 0; rep < 3; ++rep) {
      Eigen::MatrixXd proj = Eigen::MatrixXd::Zero(k, k);
      for (std::size_t gi = 0; gi < 6; ++gi) proj += character(rep, kDihedralGroup[gi]) * perm_local[gi];
      proj *= (rep == 2 ? 2.0 : 1.0) / 6.0;
      if (rep == 2) proj = 0.5 * (Eigen::MatrixXd::Identity(k, k) + perm_local[3]) * proj;
      Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(proj);
      qr.setThreshold(1e-10);
      const Eigen::Index rank = qr.rank();
      const Eigen::MatrixXd q = qr.householderQ() * Eigen::MatrixXd::Identity(k, rank);
      for (Eigen::Index c = 0; c < rank; ++c) {
        const auto col = static_cast<Eigen::Index>(block_mass[static_cast<std::size_t>(rep)].size());
        for (Eigen::Index i = 0; i < k; ++i) {
          if (q(i, c) != 0.0) basis[static_cast<std::size_t>(rep)].emplace_back(orbit[i], col, q(i, c));
        }
        block_mass[static_cast<std::size_t>(rep)].push_back(m);
      }
    }
  }

  std::vector<double> values;
  values.reserve(rows);
  std::size_t counted = 0;
  for (int rep = 0; rep < 3; ++rep) {
    const auto& bm = block_mass[static_cast<std::size_t>(rep)];
    const auto dim = static_cast<Eigen::Index>(bm.size());
    counted += bm.size() * (rep == 2 ? 2 : 1);
    if (dim == 0) continue;
    SparseMatrix b(static_cast<Eigen::Index>(rows), dim);
    b.setFromTriplets(basis[static_cast<std::size_t>(rep)].begin(), basis[static_cast<std::size_t>(rep)].end());
    const SparseMatrix reduced = SparseMatrix(b.transpose() * form.stiffness) * b;
    const Eigen::VectorXd ev = dense_eigenvalues(reduced, Eigen::Map<const Eigen::VectorXd>(bm.data(), dim));
    for (Eigen::Index i = 0; i < ev.size(); ++i) {
      values.push_back(ev[i]);
      if (rep == 2) values.push_back(ev[i]);
    }
  }
  if (counted != rows) throw Error(ErrorCode::singular_system, "symmetry blocks do not cover the form");
  std::sort(values.begin(), values.end());

  Spectrum spectrum;
  spectrum.problem = problem;
  spectrum.free = form.free;
  spectrum.values = Eigen::Map<const Eigen::VectorXd>(values.data(), static_cast<Eigen::Index>(values.size()));
  return spectrum;
}

std::vector<MultiplicityCluster> cluster_multiplicities(const Eigen::VectorXd& values, ClusterOptions options) {
  std::vector<MultiplicityCluster> clusters;
  for (Eigen::Index i = 0; i < values.size(); ++i) {
    const double x = values[i];
    if (!clusters.empty()) {
      auto& open = clusters.back();
      const double rep = open.representative;
      if (std::abs(x - rep) <= options.rel_tol * std::max(std::abs(rep), options.abs_floor)) {
        ++open.count;
        open.members.push_back(static_cast<std::size_t>(i));
        continue;
      }
    }
    clusters.push_back({x, 1, {static_cast<std::size_t>(i)}});
  }
  return clusters;
}

double residual(const DiscreteForm& form, double lambda, const Eigen::VectorXd& u) {
  if (u.size() != static_cast<Eigen::Index>(form.dimension())) {
    throw Error(ErrorCode::invalid_argument, "vector length does not match the form");
  }
  const Eigen::VectorXd mu = form.mass.cwiseProduct(u);
  const double denom = mu.norm();
  if (!(denom > 0.0)) throw Error(ErrorCode::zero_vector, "M u vanishes");
  return (form.stiffness * u - lambda * mu).norm() / denom;
}

}  // namespace ssg
