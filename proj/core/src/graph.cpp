#include "loopforge/graph.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <numbers>
#include <sstream>

namespace loopforge {

namespace {

int mod_positive(int a, int m) {
  int r = a % m;
  return r < 0 ? r + m : r;
}

// Reduce a coordinate into the window (-M/2, M/2].
int wrap_window(int x, int M) {
  int r = mod_positive(x, M);
  return r > M / 2 ? r - M : r;
}

bool valid_side(int s) { return s == 1 || (s > 1 && s % 2 == 0); }

}  // namespace

GraphSpec::GraphSpec(int n_vertices, std::vector<Edge> edges, std::vector<int> parity,
                     Vertex origin, std::vector<std::array<int, 3>> coords)
    : n_vertices_(n_vertices),
      edges_(std::move(edges)),
      parity_(std::move(parity)),
      origin_(origin),
      coords_(std::move(coords)) {
  if (static_cast<int>(parity_.size()) != n_vertices_)
    throw std::invalid_argument("GraphSpec: parity size mismatch");
  if (!coords_.empty() && static_cast<int>(coords_.size()) != n_vertices_)
    throw std::invalid_argument("GraphSpec: coords size mismatch");
  if (n_vertices_ > 0 && (origin_ < 0 || origin_ >= n_vertices_))
    throw std::invalid_argument("GraphSpec: origin out of range");
  if (n_vertices_ > 0 && parity_[origin_] != 0)
    throw std::invalid_argument("GraphSpec: origin must have even parity");
  incident_.assign(n_vertices_, {});
  for (EdgeId e = 0; e < static_cast<int>(edges_.size()); ++e) {
    const Edge& ed = edges_[e];
    if (ed.u < 0 || ed.u >= n_vertices_ || ed.v < 0 || ed.v >= n_vertices_)
      throw std::invalid_argument("GraphSpec: edge endpoint out of range");
    if (parity_[ed.u] == parity_[ed.v])
      throw std::invalid_argument("GraphSpec: edge joins vertices of equal parity");
    incident_[ed.u].push_back(e);
    incident_[ed.v].push_back(e);
  }
}

std::vector<EdgeId> GraphSpec::edges_between(Vertex u, Vertex v) const {
  std::vector<EdgeId> out;
  for (EdgeId e : incident_[u])
    if (edges_[e].other(u) == v) out.push_back(e);
  return out;
}

int GraphSpec::graph_distance(Vertex a, Vertex b) const {
  if (a == b) return 0;
  std::vector<int> dist(n_vertices_, -1);
  std::deque<Vertex> queue{a};
  dist[a] = 0;
  while (!queue.empty()) {
    Vertex x = queue.front();
    queue.pop_front();
    for (EdgeId e : incident_[x]) {
      Vertex y = edges_[e].other(x);
      if (dist[y] < 0) {
        dist[y] = dist[x] + 1;
        if (y == b) return dist[y];
        queue.push_back(y);
      }
    }
  }
  return dist[b];
}

std::string GraphSpec::to_json() const {
  std::ostringstream os;
  os << "{\"vertices\":" << n_vertices_ << ",\"coords\":[";
  for (Vertex v = 0; v < n_vertices_; ++v) {
    if (v) os << ",";
    if (has_coords())
      os << "[" << coords_[v][0] << "," << coords_[v][1] << "," << coords_[v][2] << "]";
    else
      os << "[" << v << ",0,0]";
  }
  os << "],\"edges\":[";
  for (EdgeId e = 0; e < edge_count(); ++e) {
    if (e) os << ",";
    os << "[" << edges_[e].u << "," << edges_[e].v << "," << e << "]";
  }
  os << "],\"parity\":[";
  for (Vertex v = 0; v < n_vertices_; ++v) {
    if (v) os << ",";
    os << parity_[v];
  }
  os << "],\"origin\":" << origin_ << "}";
  return os.str();
}

SlabTorus::SlabTorus(int L, int K) : L_(L), K_(K) {
  if (!valid_side(L) || !valid_side(K))
    throw std::invalid_argument("SlabTorus: L and K must be even or 1");
  const int n = L * L * K;
  std::vector<std::array<int, 3>> coords(n);
  std::vector<int> parity(n);
  auto index_of = [&](int a1, int a2, int a3) { return (a3 * L + a2) * L + a1; };
  const int lo_l = L == 1 ? 0 : -(L / 2) + 1;
  const int lo_k = K == 1 ? 0 : -(K / 2) + 1;
  for (int a3 = 0; a3 < K; ++a3)
    for (int a2 = 0; a2 < L; ++a2)
      for (int a1 = 0; a1 < L; ++a1) {
        int v = index_of(a1, a2, a3);
        coords[v] = {a1 + lo_l, a2 + lo_l, a3 + lo_k};
        parity[v] = mod_positive(coords[v][0] + coords[v][1] + coords[v][2], 2);
      }
  auto at = [&](int x1, int x2, int x3) {
    return index_of(mod_positive(x1 - lo_l, L), mod_positive(x2 - lo_l, L),
                    mod_positive(x3 - lo_k, K));
  };
  std::vector<Edge> edges;
  const std::array<int, 3> sides{L, L, K};
  for (int v = 0; v < n; ++v) {
    auto c = coords[v];
    for (int axis = 0; axis < 3; ++axis) {
      if (sides[axis] <= 1) continue;
      std::array<int, 3> d = c;
      d[axis] += 1;
      edges.push_back(Edge{v, at(d[0], d[1], d[2])});
    }
  }
  Vertex origin = at(0, 0, 0);
  graph_ = GraphSpec(n, std::move(edges), std::move(parity), origin, std::move(coords));
}

Vertex SlabTorus::vertex_at(int x1, int x2, int x3) const {
  int w1 = wrap_window(x1, L_);
  int w2 = wrap_window(x2, L_);
  int w3 = wrap_window(x3, K_);
  const int lo_l = L_ == 1 ? 0 : -(L_ / 2) + 1;
  const int lo_k = K_ == 1 ? 0 : -(K_ / 2) + 1;
  return ((w3 - lo_k) * L_ + (w2 - lo_l)) * L_ + (w1 - lo_l);
}

int SlabTorus::distance(Vertex a, Vertex b) const {
  auto ca = coord(a);
  auto cb = coord(b);
  int d = 0;
  const std::array<int, 3> sides{L_, L_, K_};
  for (int i = 0; i < 3; ++i) {
    int gap = std::abs(mod_positive(cb[i] - ca[i], sides[i]));
    d += std::min(gap, sides[i] - gap);
  }
  return d;
}

std::array<int, 3> SlabTorus::displacement(Vertex a, Vertex b) const {
  auto ca = coord(a);
  auto cb = coord(b);
  return {wrap_window(cb[0] - ca[0], L_), wrap_window(cb[1] - ca[1], L_),
          wrap_window(cb[2] - ca[2], K_)};
}

Vertex SlabTorus::translate(Vertex v, const std::array<int, 3>& d) const {
  auto c = coord(v);
  return vertex_at(c[0] + d[0], c[1] + d[1], c[2] + d[2]);
}

Vertex reflect(const SlabTorus& t, const ReflectionPlane& p, Vertex x) {
  if (p.axis < 1 || p.axis > 3) throw std::invalid_argument("reflect: axis must be 1, 2 or 3");
  if (mod_positive(p.twice_offset, 2) != 1)
    throw std::invalid_argument("reflect: plane must pass through edge midpoints");
  if (t.side(p.axis) <= 1)
    throw std::invalid_argument("reflect: no reflection plane along a collapsed axis");
  auto c = t.coord(x);
  c[p.axis - 1] = p.twice_offset - c[p.axis - 1];
  return t.vertex_at(c[0], c[1], c[2]);
}

std::vector<ReflectionPlane> reflection_planes(const SlabTorus& t) {
  std::vector<ReflectionPlane> out;
  for (int axis = 1; axis <= 3; ++axis) {
    int side = t.side(axis);
    if (side <= 1) continue;
    for (int m = -(side / 2) + 1; m <= side / 2; ++m) out.push_back({axis, 2 * m - 1});
  }
  return out;
}

std::vector<FourierMode> dual_modes(const SlabTorus& t) {
  std::vector<FourierMode> out;
  out.reserve(static_cast<size_t>(t.L()) * t.L() * t.K());
  const std::array<int, 3> sides{t.L(), t.L(), t.K()};
  auto window = [](int side) {
    std::vector<int> ns;
    if (side == 1) return std::vector<int>{0};
    for (int n = -(side / 2) + 1; n <= side / 2; ++n) ns.push_back(n);
    return ns;
  };
  auto in_cone = [](int n, int side) {
    // n in (-side/4, side/4]
    return 4 * n > -side && 4 * n <= side;
  };
  for (int n3 : window(sides[2]))
    for (int n2 : window(sides[1]))
      for (int n1 : window(sides[0])) {
        FourierMode m;
        m.n = {n1, n2, n3};
        m.k = {2 * std::numbers::pi * n1 / sides[0], 2 * std::numbers::pi * n2 / sides[1],
               2 * std::numbers::pi * n3 / sides[2]};
        m.positive_cone =
            in_cone(n1, sides[0]) && in_cone(n2, sides[1]) && in_cone(n3, sides[2]);
        out.push_back(m);
      }
  return out;
}

SlabTorus build_slab_torus(int L, int K) { return SlabTorus(L, K); }

GraphSpec build_preset(const std::string& name) {
  if (name == "K2") {
    return GraphSpec(2, {{0, 1}}, {0, 1}, 0, {{{0, 0, 0}}, {{1, 0, 0}}});
  }
  if (name == "C4") {
    return GraphSpec(4, {{0, 1}, {1, 2}, {2, 3}, {3, 0}}, {0, 1, 0, 1}, 0,
                     {{{0, 0, 0}}, {{1, 0, 0}}, {{1, 1, 0}}, {{0, 1, 0}}});
  }
  if (name == "P4") {
    return GraphSpec(4, {{0, 1}, {1, 2}, {2, 3}}, {0, 1, 0, 1}, 0,
                     {{{0, 0, 0}}, {{1, 0, 0}}, {{2, 0, 0}}, {{3, 0, 0}}});
  }
  throw std::invalid_argument("build_preset: unknown preset '" + name + "'");
}

GraphSpec build_open_grid(int w, int h) {
  if (w < 1 || h < 1) throw std::invalid_argument("build_open_grid: sides must be >= 1");
  const int n = w * h;
  std::vector<std::array<int, 3>> coords(n);
  std::vector<int> parity(n);
  auto at = [&](int i, int j) { return j * w + i; };
  for (int j = 0; j < h; ++j)
    for (int i = 0; i < w; ++i) {
      coords[at(i, j)] = {i, j, 0};
      parity[at(i, j)] = (i + j) % 2;
    }
  std::vector<Edge> edges;
  for (int j = 0; j < h; ++j)
    for (int i = 0; i < w; ++i) {
      if (i + 1 < w) edges.push_back({at(i, j), at(i + 1, j)});
      if (j + 1 < h) edges.push_back({at(i, j), at(i, j + 1)});
    }
  return GraphSpec(n, std::move(edges), std::move(parity), 0, std::move(coords));
}

EnlargedGraph::EnlargedGraph(GraphSpec base) : base_(std::move(base)) {}

Vertex EnlargedGraph::aux_vertex(EdgeId e) const {
  if (is_ghost_edge(e)) return e - base_.edge_count();
  if (is_source_edge(e)) return e - base_.edge_count() - base_.vertex_count();
  throw std::invalid_argument("aux_vertex: not an auxiliary edge");
}

EnlargedGraph enlarge(const GraphSpec& g) { return EnlargedGraph(g); }

}  // namespace loopforge
