#include "ssg/measures.hpp"

#include <cmath>
#include <string>

#include "ssg/error.hpp"

namespace ssg {

MeasureSpec::MeasureSpec(double eta, double beta) : eta_(eta), beta_(beta) {
  if (!(eta > 0.0 && eta <= 1.0)) {
    throw Error(ErrorCode::invalid_argument, "eta must lie in (0, 1], got " + std::to_string(eta));
  }
  if (!(beta > 0.0 && beta < 1.0 / 3.0)) {
    throw Error(ErrorCode::invalid_argument, "beta must lie in (0, 1/3), got " + std::to_string(beta));
  }
}

double cell_mass(const MeasureSpec& spec, int depth) {
  return spec.eta() * std::pow(spec.beta(), depth) + (1.0 - spec.eta()) * std::pow(3.0, -depth);
}

MassVector::MassVector(Eigen::VectorXd values) : values_(std::move(values)) {
  for (Eigen::Index i = 0; i < values_.size(); ++i) {
    if (!(values_[i] > 0.0)) {
      throw Error(ErrorCode::non_positive_mass, "vertex " + std::to_string(i) + " has non-positive mass");
    }
  }
}

MassVector lump_measure(const SsgGraph& graph, const MeasureSpec& spec) {
  Eigen::VectorXd mass = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(graph.vertex_count()));
  const int m = graph.level();
  const double per_cell = graph.topology() == Topology::sg ? std::pow(3.0, -m) : cell_mass(spec, m);
  for (const auto& cell : graph.cells()) {
    for (auto v : cell) mass[static_cast<Eigen::Index>(v)] += per_cell / 3.0;
  }
  if (graph.topology() == Topology::ssg) {
    const double s = graph.subdivisions();
    for (const auto& line : graph.line_edges()) {
      const double segment = spec.eta() * spec.a() * std::pow(spec.beta(), line.generation - 1) / s;
      for (std::size_t q = 0; q + 1 < line.chain.size(); ++q) {
        mass[static_cast<Eigen::Index>(line.chain[q])] += segment / 2.0;
        mass[static_cast<Eigen::Index>(line.chain[q + 1])] += segment / 2.0;
      }
    }
  }
  return MassVector(std::move(mass));
}

double rescaled_eta(const MeasureSpec& spec, int depth) {
  const double line = spec.eta() * std::pow(3.0 * spec.beta(), depth);
  return line / (line + (1.0 - spec.eta()));
}

}  // namespace ssg
