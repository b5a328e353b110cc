#pragma once

#include <array>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace loopforge {

using Vertex = int;
using EdgeId = int;

inline constexpr Vertex kNoVertex = -1;
inline constexpr EdgeId kNoEdge = -1;

/// Thrown when an exact computation would exceed its enumeration budget.
class BudgetExceeded : public std::runtime_error {
 public:
  explicit BudgetExceeded(const std::string& what) : std::runtime_error(what) {}
};

struct Edge {
  Vertex u = kNoVertex;
  Vertex v = kNoVertex;
  Vertex other(Vertex w) const { return w == u ? v : u; }
  bool touches(Vertex w) const { return u == w || v == w; }
};

/// Finite bipartite (multi)graph with dense vertex indices and a
/// distinguished even origin. Immutable after construction.
class GraphSpec {
 public:
  GraphSpec() = default;
  GraphSpec(int n_vertices, std::vector<Edge> edges, std::vector<int> parity,
            Vertex origin, std::vector<std::array<int, 3>> coords = {});

  int vertex_count() const { return n_vertices_; }
  int edge_count() const { return static_cast<int>(edges_.size()); }
  const Edge& edge(EdgeId e) const { return edges_[e]; }
  const std::vector<Edge>& edges() const { return edges_; }
  int parity(Vertex v) const { return parity_[v]; }
  Vertex origin() const { return origin_; }
  const std::vector<EdgeId>& incident(Vertex v) const { return incident_[v]; }
  int degree(Vertex v) const { return static_cast<int>(incident_[v].size()); }
  std::vector<EdgeId> edges_between(Vertex u, Vertex v) const;

  bool has_coords() const { return !coords_.empty(); }
  const std::array<int, 3>& coord(Vertex v) const { return coords_[v]; }

  /// BFS graph distance; -1 when disconnected.
  int graph_distance(Vertex a, Vertex b) const;

  /// JSON dump: {vertices, coords, edges:[[u,v,edge_id]], parity, origin}.
  std::string to_json() const;

 private:
  int n_vertices_ = 0;
  std::vector<Edge> edges_;
  std::vector<int> parity_;
  Vertex origin_ = kNoVertex;
  std::vector<std::array<int, 3>> coords_;
  std::vector<std::vector<EdgeId>> incident_;
};

/// The L x L x K slab torus, periodic in all directions. Sides of length 2
/// produce two distinct parallel edges per wrapped pair; K=1 collapses the
/// third direction entirely.
class SlabTorus {
 public:
  SlabTorus(int L, int K);

  int L() const { return L_; }
  int K() const { return K_; }
  const GraphSpec& graph() const { return graph_; }

  /// Coordinates wrap into the windows (-L/2, L/2] x (-L/2, L/2] x (-K/2, K/2].
  Vertex vertex_at(int x1, int x2, int x3) const;
  std::array<int, 3> coord(Vertex v) const { return graph_.coord(v); }
  int side(int axis) const { return axis == 3 ? K_ : L_; }

  /// Torus graph distance (sum of wrapped coordinate gaps).
  int distance(Vertex a, Vertex b) const;

  /// Displacement b - a wrapped into the coordinate windows.
  std::array<int, 3> displacement(Vertex a, Vertex b) const;
  Vertex translate(Vertex v, const std::array<int, 3>& d) const;

 private:
  int L_ = 0;
  int K_ = 0;
  GraphSpec graph_;
};

/// Reflection through a plane orthogonal to a coordinate axis, passing
/// through edge midpoints (plane coordinate = twice_offset/2 with
/// twice_offset odd).
struct ReflectionPlane {
  int axis = 1;        // 1|2|3
  int twice_offset = 1;  // odd: plane at twice_offset/2
};

Vertex reflect(const SlabTorus& t, const ReflectionPlane& p, Vertex x);

/// All reflection planes of the torus (both offsets per axis pair of sites).
std::vector<ReflectionPlane> reflection_planes(const SlabTorus& t);

struct FourierMode {
  std::array<int, 3> n{0, 0, 0};
  std::array<double, 3> k{0.0, 0.0, 0.0};
  bool positive_cone = false;
};

/// The Fourier dual torus: exactly L*L*K modes with components in (-pi, pi].
std::vector<FourierMode> dual_modes(const SlabTorus& t);

SlabTorus build_slab_torus(int L, int K);

/// Preset fixture graphs: "K2", "C4", "P4".
GraphSpec build_preset(const std::string& name);
GraphSpec build_open_grid(int w, int h);

/// Base graph plus ghost vertex g and source vertex s, each adjacent to every
/// base vertex. Edge ids: base edges keep their ids, ghost edge of x is
/// E + x, source edge of x is E + V + x.
class EnlargedGraph {
 public:
  explicit EnlargedGraph(GraphSpec base);

  const GraphSpec& base() const { return base_; }
  Vertex ghost() const { return base_.vertex_count(); }
  Vertex source() const { return base_.vertex_count() + 1; }
  int vertex_count() const { return base_.vertex_count() + 2; }
  int edge_count() const { return base_.edge_count() + 2 * base_.vertex_count(); }

  EdgeId ghost_edge(Vertex x) const { return base_.edge_count() + x; }
  EdgeId source_edge(Vertex x) const { return base_.edge_count() + base_.vertex_count() + x; }
  bool is_base_edge(EdgeId e) const { return e < base_.edge_count(); }
  bool is_ghost_edge(EdgeId e) const {
    return e >= base_.edge_count() && e < base_.edge_count() + base_.vertex_count();
  }
  bool is_source_edge(EdgeId e) const { return e >= base_.edge_count() + base_.vertex_count(); }
  /// The base vertex an auxiliary edge hangs off.
  Vertex aux_vertex(EdgeId e) const;

 private:
  GraphSpec base_;
};

EnlargedGraph enlarge(const GraphSpec& g);

}  // namespace loopforge
