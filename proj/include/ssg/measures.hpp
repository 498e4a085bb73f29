#pragma once

#include <Eigen/Core>
#include <cstddef>

#include "ssg/geometry.hpp"

namespace ssg {

/// Two-part measure mu_eta = eta mu_l + (1 - eta) mu_f. The line part gives
/// mass a beta^{k-1} to each generation-k line edge with a = 1/3 - beta; the
/// fractal part gives 3^{-n} to every n-cell.
class MeasureSpec {
 public:
  /// Throws InvalidArgument unless eta in (0, 1] and beta in (0, 1/3).
  MeasureSpec(double eta, double beta);

  double eta() const noexcept { return eta_; }
  double beta() const noexcept { return beta_; }
  double a() const noexcept { return 1.0 / 3.0 - beta_; }

 private:
  double eta_;
  double beta_;
};

/// mu_eta(K_w) for |w| = n: eta beta^n + (1 - eta) 3^{-n}.
double cell_mass(const MeasureSpec& spec, int depth);

/// Per-vertex lumped masses aligned with a graph's vertex ordering.
class MassVector {
 public:
  explicit MassVector(Eigen::VectorXd values);

  const Eigen::VectorXd& values() const noexcept { return values_; }
  std::size_t size() const noexcept { return static_cast<std::size_t>(values_.size()); }
  double operator[](std::size_t v) const { return values_[static_cast<Eigen::Index>(v)]; }
  double total() const { return values_.sum(); }

 private:
  Eigen::VectorXd values_;
};

/// Each level-m cell's mass goes in equal thirds to its corners; each line
/// segment's mass goes in halves to its two end nodes. On the classical gasket
/// the MeasureSpec argument is ignored and every cell carries 3^{-m}.
MassVector lump_measure(const SsgGraph& graph, const MeasureSpec& spec);

/// Weight eta^{(n)} with mu_eta(K_w)^{-1} mu_eta o G_w = mu_{eta^{(n)}}, |w| = n.
double rescaled_eta(const MeasureSpec& spec, int depth);

}  // namespace ssg
