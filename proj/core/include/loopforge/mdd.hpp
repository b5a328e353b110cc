#pragma once

#include <vector>

#include "loopforge/graph.hpp"
#include "loopforge/weights.hpp"

namespace loopforge {

/// A monomer double-dimer configuration: a monomer set plus a blue and a red
/// perfect matching of the remaining vertices.
struct MddConfiguration {
  std::vector<bool> monomer;      // per vertex
  std::vector<EdgeId> blue_at;    // per vertex, kNoEdge when monomer
  std::vector<EdgeId> red_at;

  static MddConfiguration all_monomer(const GraphSpec& g);
  static MddConfiguration from_matchings(const GraphSpec& g, const std::vector<EdgeId>& blue,
                                         const std::vector<EdgeId>& red);

  std::vector<EdgeId> blue_edges(const GraphSpec& g) const;
  std::vector<EdgeId> red_edges(const GraphSpec& g) const;
  std::vector<Vertex> monomers() const;
  int monomer_count() const;

  void validate(const GraphSpec& g) const;
  bool operator==(const MddConfiguration&) const = default;

  std::string to_json(const GraphSpec& g) const;
  static MddConfiguration from_json(const GraphSpec& g, const std::string& json);
};

struct Loop {
  std::vector<Vertex> vertices;  // in traversal order
  int length() const { return static_cast<int>(vertices.size()); }
};

/// Loops partition the non-monomer vertices; a blue+red superposition on one
/// edge is a 2-loop.
std::vector<Loop> decompose_loops(const GraphSpec& g, const MddConfiguration& cfg);
int loop_count(const GraphSpec& g, const MddConfiguration& cfg);
/// |L_x|: number of vertices on the loop through x, 0 when x is a monomer.
int loop_length_at(const GraphSpec& g, const MddConfiguration& cfg, Vertex x);
/// Per-vertex loop labels (-1 for monomers); loop ids index decompose_loops.
std::vector<int> loop_labels(const GraphSpec& g, const MddConfiguration& cfg);

/// Unnormalized weight rho^|M| * N^{#loops}.
double mdd_weight(const GraphSpec& g, const MddConfiguration& cfg, const ModelParams& params);

/// A permutation with d(x, pi(x)) in {0, 1}; fixed points are the monomers.
struct Permutation {
  std::vector<Vertex> image;

  std::vector<Vertex> fixed_points() const;
  int fixed_point_count() const;
  void validate(const GraphSpec& g) const;
  bool operator==(const Permutation&) const = default;
};

/// Bijection with spatial permutations: from each even vertex the loop is
/// traversed along its blue dimer first.
Permutation to_permutation(const GraphSpec& g, const MddConfiguration& cfg);
MddConfiguration from_permutation(const GraphSpec& g, const Permutation& p);

/// All monomer double-dimer configurations of a small graph.
std::vector<MddConfiguration> enumerate_mdd_configurations(const GraphSpec& g,
                                                           int max_vertices = 16);

}  // namespace loopforge
