#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "loopforge/graph.hpp"
#include "loopforge/weights.hpp"

namespace loopforge {

/// Dimer multiplicities on the enlarged graph, per colour. The matching at a
/// vertex pairs its blue dimer instances with its red instances; instances at
/// a vertex are ordered by (edge id, copy index).
struct MultiOccConfiguration {
  // mult[e] = {m1, m2}; e indexes enlarged-graph edges.
  std::vector<std::array<int, 2>> mult;
  // matchings[x][i] = index of the red instance paired with blue instance i.
  std::vector<std::vector<int>> matchings;

  static MultiOccConfiguration empty(const EnlargedGraph& g);

  int m(EdgeId e, int colour) const { return mult[e][colour - 1]; }
  void set_m(EdgeId e, int colour, int value) { mult[e][colour - 1] = value; }

  std::string to_json(const EnlargedGraph& g) const;
};

/// True when the multiplicities lie in the dimer-cardinality set: equal blue
/// and red incident counts at every base vertex and ghost multiplicities in
/// r N_0.
bool in_sigma_r(const EnlargedGraph& g, const MultiOccConfiguration& w, int r);

/// n_x: number of same-colour dimers incident to x, ghost and source edges
/// included. Throws when the two colours disagree.
int local_time(const EnlargedGraph& g, const MultiOccConfiguration& w, Vertex x);
int local_time_colour(const EnlargedGraph& g, const MultiOccConfiguration& w, Vertex x,
                      int colour);
/// k_x = n_x - m^2_{x,g}.
int k_of(const EnlargedGraph& g, const MultiOccConfiguration& w, Vertex x);

/// The source vector (per colour): (dw)^i_x = m^i_{{x,s}}.
std::array<std::vector<int>, 2> source_vector(const EnlargedGraph& g,
                                              const MultiOccConfiguration& w);

/// nu_{beta,h,r}(m): per-edge products over base and ghost edges.
double nu_weight(const EnlargedGraph& g, const MultiOccConfiguration& w,
                 const ModelParams& params);

/// mu_{beta,h,r}(w) = nu(m) * prod_x U(k_x)/n_x!, independent of the matching.
double multiocc_weight(const EnlargedGraph& g, const MultiOccConfiguration& w,
                       const ModelParams& params, const WeightFunction& U);

/// Number of match functions of m: prod_x n_x!.
double matching_count(const EnlargedGraph& g, const MultiOccConfiguration& w);

/// Enumerates every matching assignment of w (budget: prod n_x! <= budget)
/// and returns them as filled-in configurations.
std::vector<MultiOccConfiguration> enumerate_matchings(const EnlargedGraph& g,
                                                       const MultiOccConfiguration& w,
                                                       long budget = 1000000);

/// Paths of a fully matched configuration: closed loops plus open walks with
/// endpoints at ghost/source. Vertex sequences list base vertices only.
struct MultiOccPaths {
  std::vector<std::vector<Vertex>> loops;
  std::vector<std::vector<Vertex>> walks;
};
MultiOccPaths trace_paths(const EnlargedGraph& g, const MultiOccConfiguration& w);

}  // namespace loopforge
