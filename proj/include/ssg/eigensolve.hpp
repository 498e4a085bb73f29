#pragma once

#include <Eigen/Core>
#include <cstddef>
#include <optional>
#include <vector>

#include "ssg/assembly.hpp"

namespace ssg {

enum class Problem { dirichlet, neumann };

/// Ascending generalized eigenvalues of K u = lambda M u, optionally with
/// M-orthonormal eigenvectors stored column-wise in the form's row order.
struct Spectrum {
  Eigen::VectorXd values;
  std::optional<Eigen::MatrixXd> vectors;
  Problem problem = Problem::dirichlet;
  /// Graph vertex of each row, copied from the form.
  std::vector<std::size_t> free;

  std::size_t size() const noexcept { return static_cast<std::size_t>(values.size()); }
};

/// Dense solve of the symmetric reduction M^{-1/2} K M^{-1/2} (Householder
/// tridiagonalization followed by implicit QL).
Spectrum solve_generalized(const DiscreteForm& form, bool want_vectors, Problem problem);

/// Eigenvalues only, computed block by block in a D3 symmetry-adapted basis
/// (trivial, sign, and one copy of the two-dimensional representation, whose
/// eigenvalues are then listed twice). Roughly 20x cheaper than the full dense
/// solve. Falls back to solve_generalized when the form's rows or masses are not
/// invariant under the symmetry group of the graph.
Spectrum solve_by_symmetry(const SsgGraph& graph, const DiscreteForm& form, Problem problem);

struct MultiplicityCluster {
  double representative = 0.0;
  std::size_t count = 0;
  std::vector<std::size_t> members;
};

struct ClusterOptions {
  double rel_tol = 1e-8;
  double abs_floor = 1e-6;
};

/// Greedy pass over a sorted list: a value joins the open cluster while
/// |lambda - rep| <= rel_tol * max(|rep|, abs_floor), rep being the cluster's first value.
std::vector<MultiplicityCluster> cluster_multiplicities(const Eigen::VectorXd& values, ClusterOptions options = {});

/// ||K u - lambda M u||_2 / ||M u||_2. Throws ZeroVector when M u vanishes.
double residual(const DiscreteForm& form, double lambda, const Eigen::VectorXd& u);

}  // namespace ssg
