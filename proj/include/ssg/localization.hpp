#pragma once

#include <Eigen/Core>
#include <cstddef>
#include <optional>
#include <vector>

#include "ssg/assembly.hpp"
#include "ssg/eigensolve.hpp"
#include "ssg/geometry.hpp"
#include "ssg/matching_pairs.hpp"
#include "ssg/measures.hpp"

namespace ssg {

/// A vector that is an eigenfunction of both the Dirichlet and the Neumann problem.
struct DnPair {
  double lambda = 0.0;
  double residual_d = 0.0;
  double residual_n = 0.0;
  /// Values on all graph vertices (rows of the Neumann form), M-normalized.
  Eigen::VectorXd vector;
};

/// Zero-extends each Dirichlet eigenspace (a cluster of eigenvalues) to the
/// Neumann rows and keeps the combinations whose flux through the removed rows
/// vanishes. A pair is returned when both residuals are <= tol.
std::vector<DnPair> find_dn_eigenpairs(const Spectrum& dirichlet, const DiscreteForm& neumann_form, double tol,
                                       ClusterOptions clusters = {});

/// Values on every graph vertex from a vector on the form's rows.
Eigen::VectorXd zero_extend(const DiscreteForm& form, const Eigen::VectorXd& rows, std::size_t vertex_count);

/// Dirichlet problem on slice 1: rows are its off-line vertices, edges into
/// bisecting lines are grounded, and a triangle edge cut by a bisector (no node
/// on the line) is replaced by twice its conductance to ground, which is exact
/// for functions odd under the reflection in that bisector.
DiscreteForm slice_problem(const SsgGraph& graph, const MassVector& mass, const SliceDecomposition& slices);

/// Phi = sum over g in {id, sigma, sigma^2} of phi o g - phi o tau o g, with phi
/// supported in slice 1. Throws NonvanishingBoundary if phi exceeds 1e-12 on a
/// bisecting line or outside slice 1.
Eigen::VectorXd glue_prelocalized(const SsgGraph& graph, const SliceDecomposition& slices, const Eigen::VectorXd& phi);

struct Transplant {
  Eigen::VectorXd function;
  double eigenvalue = 0.0;
  /// Mass-weighted share of ||u||^2 outside the cell.
  double support_fraction = 0.0;
};

/// Copies u from the level-(m - n) graph of the shifted sequence into K_w by the
/// address map and rescales the eigenvalue by 1 / (delta_n mu(K_w)). Throws
/// CellMismatch when the two graphs do not fit together and NonvanishingBoundary
/// when u does not vanish on the small graph's outer corners.
Transplant transplant_to_cell(const Eigen::VectorXd& u, double lambda, const Word& w, const SsgGraph& small,
                              const SsgGraph& big, const MassVector& big_mass, const MeasureSpec& spec);

struct BoundsRecord {
  double lambda_sixth_min = 0.0;
  double lower = 1.0 / 16.0;
  double lower_slack = 0.2;
  double upper = 0.0;
  /// Test function: 1 on test_cell, 0 on the slice boundary, harmonic elsewhere.
  Word test_cell;
  double test_rayleigh = 0.0;
  double test_energy = 0.0;
  double test_mass = 0.0;
  /// mu(K_w) of the test cell, a lower bound for test_mass.
  double test_cell_mass = 0.0;
  bool upper_holds = false;
  bool lower_holds = false;
};

/// Smallest slice-1 Dirichlet eigenvalue against 1/16 (with slack) and
/// 6 / (kappa_1 r^3 beta^3). Throws SliceUnavailable for odd s or levels below 3.
BoundsRecord bounds_check(const SsgGraph& graph, const MeasureSpec& spec, const SliceDecomposition& slices,
                          double lower_slack = 0.2);

struct DepthRecord {
  int depth = 0;
  double nu = 0.0;
  /// Eigenvalue of the source pair on the level-(m - n) graph.
  double source_lambda = 0.0;
  double source_residual = 0.0;
  double residual = 0.0;
  std::size_t multiplicity = 0;
  double support_fraction = 0.0;
};

struct GluedRecord {
  double lambda = 0.0;
  double residual = 0.0;
  double residual_neumann = 0.0;
  double rotation_error = 0.0;
  double reflection_error = 0.0;
};

struct LocalizationReport {
  std::vector<DnPair> dn_pairs;
  std::optional<GluedRecord> glued;
  std::vector<DepthRecord> depths;
  std::optional<BoundsRecord> bounds;
  /// nu_n / rate^n over the recorded depths; rate is 3/r for eta < 1 and 1/(beta r) for eta = 1.
  double rate = 0.0;
  double c1 = 0.0;
  double c2 = 0.0;
};

struct LocalizationOptions {
  int max_depth = 2;
  double tol = 1e-8;
  ClusterOptions clusters;
};

/// Builds the level-m graph, finds its D-N pairs, glues a slice eigenfunction,
/// transplants the lowest D-N pair of each level-(m - n) system into K_{1^n}
/// and checks the eigenvalue bounds.
LocalizationReport localize(const CompatibleSequence& seq, int level, int subdivisions, const MeasureSpec& spec,
                            LocalizationOptions options = {});

}  // namespace ssg
