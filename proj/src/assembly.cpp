#include "ssg/assembly.hpp"

#include <Eigen/SparseCholesky>
#include <algorithm>
#include <cmath>
#include <queue>
#include <string>

#include "ssg/error.hpp"

namespace ssg {

namespace {

using Triplet = Eigen::Triplet<double>;

// Components of the free vertices (w.r.t. the sparsity pattern of K) that touch
// neither a fixed vertex nor a grounded row leave the reduced system singular.
void require_anchored(const SparseMatrix& k, const std::vector<bool>& fixed) {
  const Eigen::Index n = k.rows();
  std::vector<int> seen(static_cast<std::size_t>(n), 0);
  for (Eigen::Index start = 0; start < n; ++start) {
    if (fixed[static_cast<std::size_t>(start)] || seen[static_cast<std::size_t>(start)]) continue;
    bool anchored = false;
    std::queue<Eigen::Index> todo;
    todo.push(start);
    seen[static_cast<std::size_t>(start)] = 1;
    while (!todo.empty()) {
      const Eigen::Index v = todo.front();
      todo.pop();
      double diag = 0.0;
      double off = 0.0;
      for (SparseMatrix::InnerIterator it(k, v); it; ++it) {
        if (it.row() == v) {
          diag = it.value();
          continue;
        }
        off += std::abs(it.value());
        if (it.value() == 0.0) continue;
        const auto w = static_cast<std::size_t>(it.row());
        if (fixed[w]) {
          anchored = true;
        } else if (!seen[w]) {
          seen[w] = 1;
          todo.push(it.row());
        }
      }
      if (diag > off * (1.0 + 1e-12)) anchored = true;
    }
    if (!anchored) throw Error(ErrorCode::singular_system, "a component has no boundary vertex");
  }
}

}  // namespace

SparseMatrix stiffness_matrix(const SsgGraph& graph) {
  const auto n = static_cast<Eigen::Index>(graph.vertex_count());
  std::vector<Triplet> triplets;
  triplets.reserve(graph.edges().size() * 4);
  for (const auto& e : graph.edges()) {
    const auto u = static_cast<Eigen::Index>(e.u);
    const auto v = static_cast<Eigen::Index>(e.v);
    triplets.emplace_back(u, v, -e.conductance);
    triplets.emplace_back(v, u, -e.conductance);
    triplets.emplace_back(u, u, e.conductance);
    triplets.emplace_back(v, v, e.conductance);
  }
  SparseMatrix k(n, n);
  k.setFromTriplets(triplets.begin(), triplets.end());
  k.makeCompressed();
  return k;
}

DiscreteForm make_form(const SsgGraph& graph, const MassVector& mass) {
  if (mass.size() != graph.vertex_count()) {
    throw Error(ErrorCode::invalid_argument, "mass vector does not match the graph");
  }
  DiscreteForm form;
  form.stiffness = stiffness_matrix(graph);
  form.mass = mass.values();
  form.free.resize(graph.vertex_count());
  for (std::size_t v = 0; v < form.free.size(); ++v) form.free[v] = v;
  return form;
}

DiscreteForm apply_dirichlet(const DiscreteForm& form, std::span<const std::size_t> boundary) {
  const std::size_t n = form.dimension();
  std::vector<bool> removed(n, false);
  for (auto b : boundary) {
    auto it = std::find(form.free.begin(), form.free.end(), b);
    if (it == form.free.end()) {
      throw Error(ErrorCode::invalid_argument, "boundary vertex " + std::to_string(b) + " is not a free vertex");
    }
    removed[static_cast<std::size_t>(it - form.free.begin())] = true;
  }
  std::vector<Eigen::Index> new_row(n, -1);
  DiscreteForm out;
  for (std::size_t i = 0; i < n; ++i) {
    if (removed[i]) continue;
    new_row[i] = static_cast<Eigen::Index>(out.free.size());
    out.free.push_back(form.free[i]);
  }
  if (out.free.empty()) throw Error(ErrorCode::all_vertices_removed, "Dirichlet set covers every vertex");

  const auto dim = static_cast<Eigen::Index>(out.free.size());
  std::vector<Triplet> triplets;
  for (Eigen::Index col = 0; col < form.stiffness.outerSize(); ++col) {
    const Eigen::Index c = new_row[static_cast<std::size_t>(col)];
    if (c < 0) continue;
    for (SparseMatrix::InnerIterator it(form.stiffness, col); it; ++it) {
      const Eigen::Index r = new_row[static_cast<std::size_t>(it.row())];
      if (r >= 0) triplets.emplace_back(r, c, it.value());
    }
  }
  out.stiffness.resize(dim, dim);
  out.stiffness.setFromTriplets(triplets.begin(), triplets.end());
  out.stiffness.makeCompressed();
  out.mass.resize(dim);
  for (std::size_t i = 0; i < n; ++i) {
    if (new_row[i] >= 0) out.mass[new_row[i]] = form.mass[static_cast<Eigen::Index>(i)];
  }
  return out;
}

double edge_energy(const SsgGraph& graph, const Eigen::VectorXd& u) {
  double total = 0.0;
  for (const auto& e : graph.edges()) {
    const double d = u[static_cast<Eigen::Index>(e.u)] - u[static_cast<Eigen::Index>(e.v)];
    total += e.conductance * d * d;
  }
  return total;
}

bool is_connected(const SsgGraph& graph) {
  const std::size_t n = graph.vertex_count();
  if (n == 0) return true;
  std::vector<std::vector<std::size_t>> adj(n);
  for (const auto& e : graph.edges()) {
    adj[e.u].push_back(e.v);
    adj[e.v].push_back(e.u);
  }
  std::vector<bool> seen(n, false);
  std::queue<std::size_t> todo;
  todo.push(0);
  seen[0] = true;
  std::size_t count = 1;
  while (!todo.empty()) {
    const auto v = todo.front();
    todo.pop();
    for (auto w : adj[v]) {
      if (!seen[w]) {
        seen[w] = true;
        ++count;
        todo.push(w);
      }
    }
  }
  return count == n;
}

double effective_resistance(const SsgGraph& graph, std::size_t p, std::size_t q) {
  const std::size_t n = graph.vertex_count();
  if (p >= n || q >= n) throw Error(ErrorCode::invalid_argument, "vertex index out of range");
  if (p == q) throw Error(ErrorCode::invalid_argument, "effective resistance needs two distinct vertices");
  if (!is_connected(graph)) throw Error(ErrorCode::singular_system, "graph is disconnected");

  // Ground q and inject a unit current at p: K_red x = e_p.
  DiscreteForm form{stiffness_matrix(graph), Eigen::VectorXd::Ones(static_cast<Eigen::Index>(n)), {}};
  form.free.resize(n);
  for (std::size_t v = 0; v < n; ++v) form.free[v] = v;
  const std::size_t grounded[] = {q};
  const DiscreteForm reduced = apply_dirichlet(form, grounded);

  Eigen::SimplicialLDLT<SparseMatrix> solver(reduced.stiffness);
  if (solver.info() != Eigen::Success) throw Error(ErrorCode::singular_system, "Kirchhoff factorization failed");
  const auto row = static_cast<Eigen::Index>(std::find(reduced.free.begin(), reduced.free.end(), p) - reduced.free.begin());
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(reduced.stiffness.rows());
  rhs[row] = 1.0;
  const Eigen::VectorXd x = solver.solve(rhs);
  const double res = (reduced.stiffness * x - rhs).norm();
  if (!(res <= 1e-12 * std::max(1.0, reduced.stiffness.norm() * x.norm()))) {
    throw Error(ErrorCode::singular_system, "Kirchhoff residual too large");
  }
  return x[row];
}

Eigen::VectorXd harmonic_extension(const SparseMatrix& k, const std::map<std::size_t, double>& boundary_values) {
  const auto n = static_cast<std::size_t>(k.rows());
  std::vector<bool> fixed(n, false);
  Eigen::VectorXd u = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(n));
  for (const auto& [v, value] : boundary_values) {
    if (v >= n) throw Error(ErrorCode::invalid_argument, "boundary vertex out of range");
    fixed[v] = true;
    u[static_cast<Eigen::Index>(v)] = value;
  }
  require_anchored(k, fixed);

  std::vector<Eigen::Index> row(n, -1);
  Eigen::Index dim = 0;
  for (std::size_t v = 0; v < n; ++v) {
    if (!fixed[v]) row[v] = dim++;
  }
  if (dim == 0) return u;
  std::vector<Triplet> triplets;
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(dim);
  for (Eigen::Index col = 0; col < k.outerSize(); ++col) {
    for (SparseMatrix::InnerIterator it(k, col); it; ++it) {
      const Eigen::Index r = row[static_cast<std::size_t>(it.row())];
      if (r < 0) continue;
      const Eigen::Index c = row[static_cast<std::size_t>(col)];
      if (c >= 0) {
        triplets.emplace_back(r, c, it.value());
      } else {
        rhs[r] -= it.value() * u[col];
      }
    }
  }
  SparseMatrix kff(dim, dim);
  kff.setFromTriplets(triplets.begin(), triplets.end());
  Eigen::SimplicialLDLT<SparseMatrix> solver(kff);
  if (solver.info() != Eigen::Success) throw Error(ErrorCode::singular_system, "harmonic extension factorization failed");
  const Eigen::VectorXd x = solver.solve(rhs);
  for (std::size_t v = 0; v < n; ++v) {
    if (row[v] >= 0) u[static_cast<Eigen::Index>(v)] = x[row[v]];
  }
  return u;
}

Eigen::VectorXd harmonic_extension(const SsgGraph& graph, const std::map<std::size_t, double>& boundary_values) {
  if (boundary_values.empty()) throw Error(ErrorCode::singular_system, "harmonic extension needs boundary values");
  return harmonic_extension(stiffness_matrix(graph), boundary_values);
}

}  // namespace ssg
