#pragma once

#include <array>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <tuple>
#include <variant>
#include <vector>

#include "ssg/matching_pairs.hpp"

namespace ssg {

/// Finite word over the alphabet {1, 2, 3}; the empty word addresses the whole set.
class Word {
 public:
  Word() = default;
  explicit Word(std::vector<std::uint8_t> letters);
  /// Parses digits such as "123"; the empty string gives the empty word.
  static Word parse(std::string_view digits);
  static Word repeated(std::uint8_t letter, std::size_t count);

  std::size_t size() const noexcept { return letters_.size(); }
  bool empty() const noexcept { return letters_.empty(); }
  std::uint8_t operator[](std::size_t k) const { return letters_[k]; }
  const std::vector<std::uint8_t>& letters() const noexcept { return letters_; }

  Word appended(std::uint8_t letter) const;
  Word concat(const Word& tail) const;
  bool has_prefix(const Word& prefix) const;
  /// Position of the word among all words of the same length in lexicographic order.
  std::size_t rank() const;
  static Word from_rank(std::size_t rank, std::size_t length);
  std::string str() const;

  auto operator<=>(const Word&) const = default;

 private:
  std::vector<std::uint8_t> letters_;
};

/// The point G_w(p_i) of a top-level cell.
struct Corner {
  Word word;
  int index = 1;
  auto operator<=>(const Corner&) const = default;
};

/// Interior node at segment position 1..s-1 on the line edge e_i^w, counted from
/// the endpoint that lies in the lower-indexed sub-cell.
struct LineNode {
  Word word;
  int edge = 1;
  int position = 1;
  auto operator<=>(const LineNode&) const = default;
};

using VertexId = std::variant<Corner, LineNode>;

std::string to_string(const VertexId& id);

enum class Topology { ssg, sg };
enum class EdgeKind { triangle, line };

struct Edge {
  std::size_t u = 0;
  std::size_t v = 0;
  double conductance = 0.0;
  EdgeKind kind = EdgeKind::triangle;
  /// Generation k of the line edge this segment belongs to; 0 for triangle edges.
  int generation = 0;
};

struct Point {
  double x = 0.0;
  double y = 0.0;
};

/// Subdivided line edge e_i^w of generation |w| + 1, stored as its vertex chain
/// from the canonical start corner to the end corner.
struct LineEdge {
  Word word;
  int index = 1;
  int generation = 1;
  std::vector<std::size_t> chain;
};

/// Level-m graph approximation. For the stretched gasket, 3^m disjoint cells are
/// joined by subdivided line edges; for the classical gasket, cells touch at
/// shared corners.
class SsgGraph {
 public:
  int level() const noexcept { return level_; }
  int subdivisions() const noexcept { return subdivisions_; }
  Topology topology() const noexcept { return topology_; }
  double alpha() const noexcept { return alpha_; }
  const std::optional<CompatibleSequence>& sequence() const noexcept { return sequence_; }

  std::size_t vertex_count() const noexcept { return vertices_.size(); }
  const std::vector<VertexId>& vertices() const noexcept { return vertices_; }
  const std::vector<Edge>& edges() const noexcept { return edges_; }
  const std::vector<Point>& coords() const noexcept { return coords_; }
  /// Corner indices of each level-m cell, cells in lexicographic word order.
  const std::vector<std::array<std::size_t, 3>>& cells() const noexcept { return cells_; }
  const std::vector<LineEdge>& line_edges() const noexcept { return line_edges_; }
  /// The three outer corners p_1, p_2, p_3.
  const std::array<std::size_t, 3>& outer_corners() const noexcept { return outer_; }

  /// Index of a vertex id, or nothing if the id does not name a vertex of this graph.
  std::optional<std::size_t> index_of(const VertexId& id) const;
  /// Index of the corner G_w(p_i) with |w| = level.
  std::size_t corner_index(const Word& w, int i) const;

  friend SsgGraph build_ssg_graph(const CompatibleSequence&, int, int, double);
  friend SsgGraph build_sg_graph(int);

 private:
  int level_ = 0;
  int subdivisions_ = 1;
  Topology topology_ = Topology::ssg;
  double alpha_ = 1.0 / 3.0;
  std::optional<CompatibleSequence> sequence_;
  std::vector<VertexId> vertices_;
  std::vector<Edge> edges_;
  std::vector<Point> coords_;
  std::vector<std::array<std::size_t, 3>> cells_;
  std::vector<LineEdge> line_edges_;
  std::array<std::size_t, 3> outer_{};
  std::vector<std::size_t> line_base_;
  std::map<std::tuple<Word, int, int>, std::size_t> sg_index_;
};

/// Triangle edges carry conductance 1/delta_m; a generation-k line edge is a
/// chain of s segments, each of conductance s/gamma_k. Coordinates use the
/// contraction ratio (1 - alpha)/2 and do not influence any matrix.
SsgGraph build_ssg_graph(const CompatibleSequence& seq, int level, int subdivisions,
                         double alpha = 1.0 / 3.0);

/// Classical gasket, corners identified where cells touch; conductance (5/3)^m.
SsgGraph build_sg_graph(int level);

/// Closed-form vertex count 3^{m+1} + (s-1)(3^{m+1} - 3)/2.
std::size_t ssg_vertex_count(int level, int subdivisions);

enum class SymmetryElement { id, sigma, sigma2, tau, tau_sigma, tau_sigma2 };

inline constexpr std::array<SymmetryElement, 6> kDihedralGroup = {
    SymmetryElement::id,  SymmetryElement::sigma,     SymmetryElement::sigma2,
    SymmetryElement::tau, SymmetryElement::tau_sigma, SymmetryElement::tau_sigma2};

/// sigma is the 120 degree rotation p1 -> p2 -> p3, tau the reflection fixing p1.
int act_on_letter(SymmetryElement g, int letter);
/// The element a o b (apply b first).
SymmetryElement compose(SymmetryElement a, SymmetryElement b);
SymmetryElement inverse(SymmetryElement g);
bool is_reflection(SymmetryElement g);

VertexId apply_symmetry(SymmetryElement g, const VertexId& id, int subdivisions);
/// perm[v] is the index of g(v). A function f transforms as (f o g)(v) = f(perm[v]).
std::vector<std::size_t> apply_symmetry(SymmetryElement g, const SsgGraph& graph);

/// Vertices of the cell K_w: corners with prefix w and the interior nodes of line
/// edges inside the cell. Sorted ascending. Throws WordTooLong if |w| > level.
std::vector<std::size_t> cell_vertex_set(const SsgGraph& graph, const Word& w);

/// Six fundamental domains cut out by the three bisecting lines, labeled
/// counterclockwise from the bisector through p1 (slice 1 lies left of it).
/// Slices are closed: vertices on a bisecting line belong to both neighbours.
struct SliceDecomposition {
  std::array<std::vector<std::size_t>, 6> slices;
  std::array<std::vector<std::size_t>, 6> boundaries;
  std::vector<bool> on_line;
  /// Slice of each off-line vertex (1..6); 0 for on-line vertices.
  std::vector<int> slice_of;
};

/// Requires an even subdivision count so that bisected line edges carry a midpoint node.
SliceDecomposition sixth_domain(const SsgGraph& graph);

}  // namespace ssg
