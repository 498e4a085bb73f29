#pragma once

#include <Eigen/Core>
#include <Eigen/SparseCore>
#include <cstddef>
#include <map>
#include <span>
#include <vector>

#include "ssg/geometry.hpp"
#include "ssg/measures.hpp"

namespace ssg {

using SparseMatrix = Eigen::SparseMatrix<double>;

/// Stiffness K, diagonal mass M and the graph vertex behind each row.
struct DiscreteForm {
  SparseMatrix stiffness;
  Eigen::VectorXd mass;
  /// free[i] is the graph vertex of row i.
  std::vector<std::size_t> free;

  std::size_t dimension() const noexcept { return free.size(); }
};

/// K[u][v] = -c for every edge (u, v, c), diagonal = negated off-diagonal row sum.
SparseMatrix stiffness_matrix(const SsgGraph& graph);

/// Unconstrained (Neumann) form on all vertices.
DiscreteForm make_form(const SsgGraph& graph, const MassVector& mass);

/// Deletes the rows and columns of the given graph vertices.
DiscreteForm apply_dirichlet(const DiscreteForm& form, std::span<const std::size_t> boundary);

/// Sum over edges of c (u_a - u_b)^2.
double edge_energy(const SsgGraph& graph, const Eigen::VectorXd& u);

/// Potential difference for a unit current from p to q.
double effective_resistance(const SsgGraph& graph, std::size_t p, std::size_t q);

/// Minimiser of u^T K u with prescribed values on the given vertices.
Eigen::VectorXd harmonic_extension(const SsgGraph& graph, const std::map<std::size_t, double>& boundary_values);

/// Same for an arbitrary symmetric positive semidefinite K; rows whose diagonal
/// exceeds their off-diagonal sum count as grounded.
Eigen::VectorXd harmonic_extension(const SparseMatrix& stiffness, const std::map<std::size_t, double>& boundary_values);

bool is_connected(const SsgGraph& graph);

}  // namespace ssg
