#include "ssg/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "ssg/error.hpp"

namespace ssg {

namespace {

std::size_t pow3(int k) {
  std::size_t p = 1;
  for (int i = 0; i < k; ++i) p *= 3;
  return p;
}

const std::array<Point, 3>& outer_points() {
  static const std::array<Point, 3> p = {Point{0.0, 1.0 / std::sqrt(3.0)},
                                         Point{-0.5, -0.5 / std::sqrt(3.0)},
                                         Point{0.5, -0.5 / std::sqrt(3.0)}};
  return p;
}

Point image_of(const Word& w, int i, double ratio) {
  const auto& p = outer_points();
  Point x = p[i - 1];
  for (std::size_t k = w.size(); k-- > 0;) {
    const Point& c = p[w[k] - 1];
    x = {ratio * (x.x - c.x) + c.x, ratio * (x.y - c.y) + c.y};
  }
  return x;
}

// The two letters other than i, in ascending order.
std::pair<int, int> other_letters(int i) {
  switch (i) {
    case 1: return {2, 3};
    case 2: return {1, 3};
    default: return {1, 2};
  }
}

using SgKey = std::tuple<Word, int, int>;

// On the classical gasket G_{uj}(p_i) = G_{ui}(p_j); strip trailing copies of i
// and key the point by the junction it sits on.
SgKey sg_key(const Word& w, int i) {
  std::size_t len = w.size();
  while (len > 0 && w[len - 1] == i) --len;
  if (len == 0) return {Word{}, i, 0};
  const int j = w[len - 1];
  std::vector<std::uint8_t> prefix(w.letters().begin(), w.letters().begin() + static_cast<long>(len - 1));
  return {Word(std::move(prefix)), std::min(i, j), std::max(i, j)};
}

void check_letter(int letter) {
  if (letter < 1 || letter > 3) throw Error(ErrorCode::invalid_argument, "letters must be 1, 2 or 3");
}

using LetterPerm = std::array<int, 3>;

LetterPerm perm_of(SymmetryElement g) {
  switch (g) {
    case SymmetryElement::id: return {1, 2, 3};
    case SymmetryElement::sigma: return {2, 3, 1};
    case SymmetryElement::sigma2: return {3, 1, 2};
    case SymmetryElement::tau: return {1, 3, 2};
    case SymmetryElement::tau_sigma: return {3, 2, 1};
    case SymmetryElement::tau_sigma2: return {2, 1, 3};
  }
  return {1, 2, 3};
}

SymmetryElement element_of(const LetterPerm& p) {
  for (auto g : kDihedralGroup) {
    if (perm_of(g) == p) return g;
  }
  throw Error(ErrorCode::invalid_argument, "not a permutation of {1,2,3}");
}

Word map_word(SymmetryElement g, const Word& w) {
  std::vector<std::uint8_t> letters(w.letters());
  for (auto& l : letters) l = static_cast<std::uint8_t>(act_on_letter(g, l));
  return Word(std::move(letters));
}

}  // namespace

Word::Word(std::vector<std::uint8_t> letters) : letters_(std::move(letters)) {
  for (auto l : letters_) check_letter(l);
}

Word Word::parse(std::string_view digits) {
  std::vector<std::uint8_t> letters;
  for (char c : digits) {
    if (c < '1' || c > '3') throw Error(ErrorCode::invalid_argument, "word letters must be 1, 2 or 3");
    letters.push_back(static_cast<std::uint8_t>(c - '0'));
  }
  return Word(std::move(letters));
}

Word Word::repeated(std::uint8_t letter, std::size_t count) {
  return Word(std::vector<std::uint8_t>(count, letter));
}

Word Word::appended(std::uint8_t letter) const {
  check_letter(letter);
  Word out = *this;
  out.letters_.push_back(letter);
  return out;
}

Word Word::concat(const Word& tail) const {
  Word out = *this;
  out.letters_.insert(out.letters_.end(), tail.letters_.begin(), tail.letters_.end());
  return out;
}

bool Word::has_prefix(const Word& prefix) const {
  return prefix.size() <= size() && std::equal(prefix.letters_.begin(), prefix.letters_.end(), letters_.begin());
}

std::size_t Word::rank() const {
  std::size_t r = 0;
  for (auto l : letters_) r = 3 * r + (l - 1);
  return r;
}

Word Word::from_rank(std::size_t rank, std::size_t length) {
  std::vector<std::uint8_t> letters(length);
  for (std::size_t k = length; k-- > 0;) {
    letters[k] = static_cast<std::uint8_t>(rank % 3 + 1);
    rank /= 3;
  }
  return Word(std::move(letters));
}

std::string Word::str() const {
  std::string s;
  for (auto l : letters_) s.push_back(static_cast<char>('0' + l));
  return s;
}

std::string to_string(const VertexId& id) {
  std::ostringstream os;
  if (const auto* c = std::get_if<Corner>(&id)) {
    os << "c:" << c->word.str() << ":" << c->index;
  } else {
    const auto& n = std::get<LineNode>(id);
    os << "l:" << n.word.str() << ":" << n.edge << ":" << n.position;
  }
  return os.str();
}

std::size_t ssg_vertex_count(int level, int subdivisions) {
  const std::size_t corners = pow3(level + 1);
  return corners + static_cast<std::size_t>(subdivisions - 1) * (corners - 3) / 2;
}

std::size_t SsgGraph::corner_index(const Word& w, int i) const {
  auto idx = index_of(Corner{w, i});
  if (!idx) throw Error(ErrorCode::invalid_argument, "no corner " + w.str() + ":" + std::to_string(i));
  return *idx;
}

std::optional<std::size_t> SsgGraph::index_of(const VertexId& id) const {
  if (const auto* c = std::get_if<Corner>(&id)) {
    if (c->word.size() != static_cast<std::size_t>(level_) || c->index < 1 || c->index > 3) return std::nullopt;
    if (topology_ == Topology::sg) {
      auto it = sg_index_.find(sg_key(c->word, c->index));
      if (it == sg_index_.end()) return std::nullopt;
      return it->second;
    }
    return 3 * c->word.rank() + static_cast<std::size_t>(c->index - 1);
  }
  const auto& n = std::get<LineNode>(id);
  if (topology_ == Topology::sg) return std::nullopt;
  const int k = static_cast<int>(n.word.size()) + 1;
  if (k > level_ || n.edge < 1 || n.edge > 3 || n.position < 1 || n.position >= subdivisions_) return std::nullopt;
  const std::size_t edge = 3 * n.word.rank() + static_cast<std::size_t>(n.edge - 1);
  return line_base_[k] + edge * static_cast<std::size_t>(subdivisions_ - 1) +
         static_cast<std::size_t>(n.position - 1);
}

SsgGraph build_ssg_graph(const CompatibleSequence& seq, int level, int subdivisions, double alpha) {
  if (level < 0) throw Error(ErrorCode::invalid_argument, "level must be >= 0");
  if (subdivisions < 1) throw Error(ErrorCode::invalid_argument, "subdivisions must be >= 1");
  if (!(alpha > 0.0 && alpha < 1.0)) throw Error(ErrorCode::invalid_argument, "alpha must lie in (0, 1)");
  const auto table = scalings(seq, static_cast<std::size_t>(level));
  for (int k = 1; k <= level; ++k) {
    if (!(table.gamma_at(k) > 0.0)) {
      throw Error(ErrorCode::gamma_zero,
                  "gamma_" + std::to_string(k) + " = 0 (r = 3/5), line conductance undefined");
    }
  }

  SsgGraph g;
  g.level_ = level;
  g.subdivisions_ = subdivisions;
  g.topology_ = Topology::ssg;
  g.alpha_ = alpha;
  g.sequence_ = seq;
  const double ratio = (1.0 - alpha) / 2.0;
  const std::size_t n_cells = pow3(level);
  const std::size_t n_vertices = ssg_vertex_count(level, subdivisions);
  g.vertices_.reserve(n_vertices);
  g.coords_.reserve(n_vertices);

  for (std::size_t c = 0; c < n_cells; ++c) {
    const Word w = Word::from_rank(c, static_cast<std::size_t>(level));
    for (int i = 1; i <= 3; ++i) {
      g.vertices_.push_back(Corner{w, i});
      g.coords_.push_back(image_of(w, i, ratio));
    }
    g.cells_.push_back({3 * c, 3 * c + 1, 3 * c + 2});
  }

  const double triangle_conductance = 1.0 / table.delta_at(static_cast<std::size_t>(level));
  for (const auto& cell : g.cells_) {
    g.edges_.push_back({cell[0], cell[1], triangle_conductance, EdgeKind::triangle, 0});
    g.edges_.push_back({cell[0], cell[2], triangle_conductance, EdgeKind::triangle, 0});
    g.edges_.push_back({cell[1], cell[2], triangle_conductance, EdgeKind::triangle, 0});
  }

  g.line_base_.assign(static_cast<std::size_t>(level) + 2, 0);
  g.line_base_[1] = 3 * n_cells;
  for (int k = 1; k <= level; ++k) {
    g.line_base_[k + 1] = g.line_base_[k] + pow3(k) * static_cast<std::size_t>(subdivisions - 1);
  }

  for (int k = 1; k <= level; ++k) {
    const double segment_conductance = subdivisions / table.gamma_at(static_cast<std::size_t>(k));
    const std::size_t depth = static_cast<std::size_t>(k - 1);
    const std::size_t tail = static_cast<std::size_t>(level - k);
    for (std::size_t r = 0; r < pow3(k - 1); ++r) {
      const Word w = Word::from_rank(r, depth);
      for (int i = 1; i <= 3; ++i) {
        const auto [j, l] = other_letters(i);
        // e_i^w joins G_{wj}(p_l) to G_{wl}(p_j); both are fixed points of the
        // repeated letter, hence level-m corners.
        const Word start_word = w.appended(static_cast<std::uint8_t>(j)).concat(Word::repeated(static_cast<std::uint8_t>(l), tail));
        const Word end_word = w.appended(static_cast<std::uint8_t>(l)).concat(Word::repeated(static_cast<std::uint8_t>(j), tail));
        const std::size_t start = g.corner_index(start_word, l);
        const std::size_t end = g.corner_index(end_word, j);
        LineEdge line{w, i, k, {start}};
        const Point a = g.coords_[start];
        const Point b = g.coords_[end];
        for (int pos = 1; pos < subdivisions; ++pos) {
          const double t = static_cast<double>(pos) / subdivisions;
          line.chain.push_back(g.vertices_.size());
          g.vertices_.push_back(LineNode{w, i, pos});
          g.coords_.push_back({(1 - t) * a.x + t * b.x, (1 - t) * a.y + t * b.y});
        }
        line.chain.push_back(end);
        for (std::size_t q = 0; q + 1 < line.chain.size(); ++q) {
          g.edges_.push_back({line.chain[q], line.chain[q + 1], segment_conductance, EdgeKind::line, k});
        }
        g.line_edges_.push_back(std::move(line));
      }
    }
  }

  for (int i = 1; i <= 3; ++i) {
    g.outer_[i - 1] = g.corner_index(Word::repeated(static_cast<std::uint8_t>(i), static_cast<std::size_t>(level)), i);
  }
  return g;
}

SsgGraph build_sg_graph(int level) {
  if (level < 0) throw Error(ErrorCode::invalid_argument, "level must be >= 0");
  SsgGraph g;
  g.level_ = level;
  g.subdivisions_ = 1;
  g.topology_ = Topology::sg;
  g.alpha_ = 0.0;
  const std::size_t n_cells = pow3(level);
  for (std::size_t c = 0; c < n_cells; ++c) {
    const Word w = Word::from_rank(c, static_cast<std::size_t>(level));
    std::array<std::size_t, 3> cell{};
    for (int i = 1; i <= 3; ++i) {
      auto [it, inserted] = g.sg_index_.try_emplace(sg_key(w, i), g.vertices_.size());
      if (inserted) {
        g.vertices_.push_back(Corner{w, i});
        g.coords_.push_back(image_of(w, i, 0.5));
      }
      cell[i - 1] = it->second;
    }
    g.cells_.push_back(cell);
  }
  const double conductance = std::pow(5.0 / 3.0, level);
  for (const auto& cell : g.cells_) {
    g.edges_.push_back({cell[0], cell[1], conductance, EdgeKind::triangle, 0});
    g.edges_.push_back({cell[0], cell[2], conductance, EdgeKind::triangle, 0});
    g.edges_.push_back({cell[1], cell[2], conductance, EdgeKind::triangle, 0});
  }
  for (int i = 1; i <= 3; ++i) {
    g.outer_[i - 1] = g.corner_index(Word::repeated(static_cast<std::uint8_t>(i), static_cast<std::size_t>(level)), i);
  }
  return g;
}

int act_on_letter(SymmetryElement g, int letter) {
  check_letter(letter);
  return perm_of(g)[letter - 1];
}

SymmetryElement compose(SymmetryElement a, SymmetryElement b) {
  LetterPerm p{};
  for (int l = 1; l <= 3; ++l) p[l - 1] = act_on_letter(a, act_on_letter(b, l));
  return element_of(p);
}

SymmetryElement inverse(SymmetryElement g) {
  for (auto h : kDihedralGroup) {
    if (compose(g, h) == SymmetryElement::id) return h;
  }
  return SymmetryElement::id;
}

bool is_reflection(SymmetryElement g) {
  return g == SymmetryElement::tau || g == SymmetryElement::tau_sigma || g == SymmetryElement::tau_sigma2;
}

VertexId apply_symmetry(SymmetryElement g, const VertexId& id, int subdivisions) {
  if (const auto* c = std::get_if<Corner>(&id)) {
    return Corner{map_word(g, c->word), act_on_letter(g, c->index)};
  }
  const auto& n = std::get<LineNode>(id);
  const auto [j, l] = other_letters(n.edge);
  // The canonical start lies in sub-cell j; it lands in sub-cell g(j).
  const bool reversed = act_on_letter(g, j) > act_on_letter(g, l);
  return LineNode{map_word(g, n.word), act_on_letter(g, n.edge), reversed ? subdivisions - n.position : n.position};
}

std::vector<std::size_t> apply_symmetry(SymmetryElement g, const SsgGraph& graph) {
  std::vector<std::size_t> perm(graph.vertex_count());
  for (std::size_t v = 0; v < perm.size(); ++v) {
    auto idx = graph.index_of(apply_symmetry(g, graph.vertices()[v], graph.subdivisions()));
    if (!idx) throw Error(ErrorCode::invalid_argument, "symmetry image missing from graph");
    perm[v] = *idx;
  }
  return perm;
}

std::vector<std::size_t> cell_vertex_set(const SsgGraph& graph, const Word& w) {
  const int m = graph.level();
  const int n = static_cast<int>(w.size());
  if (n > m) {
    throw Error(ErrorCode::word_too_long,
                "word of length " + std::to_string(n) + " on a level-" + std::to_string(m) + " graph");
  }
  std::vector<std::size_t> out;
  const std::size_t r = w.rank();
  if (graph.topology() == Topology::sg) {
    const std::size_t span = pow3(m - n);
    for (std::size_t c = r * span; c < (r + 1) * span; ++c) {
      for (auto v : graph.cells()[c]) out.push_back(v);
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
  }

  const std::size_t span = pow3(m - n);
  for (std::size_t v = 3 * r * span; v < 3 * (r + 1) * span; ++v) out.push_back(v);
  const std::size_t interior = static_cast<std::size_t>(graph.subdivisions() - 1);
  // Line edges of generation k > n inside the cell form one contiguous block per generation.
  for (int k = n + 1; k <= m; ++k) {
    const std::size_t words = pow3(k - 1 - n);
    const std::size_t first_edge = 3 * r * words;
    const std::size_t edges = 3 * words;
    const std::size_t base = 3 * pow3(m);
    std::size_t offset = base;
    for (int q = 1; q < k; ++q) offset += pow3(q) * interior;
    for (std::size_t v = offset + first_edge * interior; v < offset + (first_edge + edges) * interior; ++v) {
      out.push_back(v);
    }
  }
  return out;
}

SliceDecomposition sixth_domain(const SsgGraph& graph) {
  if (graph.topology() != Topology::ssg) {
    throw Error(ErrorCode::topology_mismatch, "six-slice decomposition is defined for the stretched gasket");
  }
  if (graph.subdivisions() % 2 != 0) {
    throw Error(ErrorCode::midline_node_missing, "subdivisions must be even so bisected lines carry a midpoint node");
  }
  const std::size_t n = graph.vertex_count();
  SliceDecomposition d;
  d.on_line.assign(n, false);
  d.slice_of.assign(n, 0);
  // A vertex lies on a bisecting line exactly when the reflection in that line fixes it.
  for (auto g : {SymmetryElement::tau, SymmetryElement::tau_sigma, SymmetryElement::tau_sigma2}) {
    const auto perm = apply_symmetry(g, graph);
    for (std::size_t v = 0; v < n; ++v) {
      if (perm[v] == v) d.on_line[v] = true;
    }
  }
  for (std::size_t v = 0; v < n; ++v) {
    const Point p = graph.coords()[v];
    double deg = std::atan2(p.y, p.x) * 180.0 / std::numbers::pi - 90.0;
    deg = std::fmod(deg + 720.0, 360.0);
    if (d.on_line[v]) {
      const int ray = static_cast<int>(std::lround(deg / 60.0)) % 6;
      const int after = ray + 1;
      const int before = (ray + 5) % 6 + 1;
      d.slices[after - 1].push_back(v);
      d.slices[before - 1].push_back(v);
      d.boundaries[after - 1].push_back(v);
      d.boundaries[before - 1].push_back(v);
    } else {
      const int s = std::min(5, static_cast<int>(deg / 60.0)) + 1;
      d.slice_of[v] = s;
      d.slices[s - 1].push_back(v);
    }
  }
  for (auto& s : d.slices) std::sort(s.begin(), s.end());
  for (auto& b : d.boundaries) std::sort(b.begin(), b.end());
  return d;
}

}  // namespace ssg
