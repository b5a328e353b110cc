#pragma once

#include <array>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "loopforge/graph.hpp"
#include "loopforge/mdd.hpp"
#include "loopforge/multiocc.hpp"
#include "loopforge/rational.hpp"
#include "loopforge/weights.hpp"

namespace loopforge {

/// Estimated or exact two-point values indexed by displacement vertex
/// (value(o, x) stored at x). error = 0 for exact entries.
struct TwoPointTable {
  std::string kind;  // C_G | G | G1 | G2 | P_connect
  std::string graph_desc;
  std::string params_desc;
  std::string method;
  std::vector<double> value;
  std::vector<double> error;
  std::vector<uint8_t> defined;

  void validate() const;
  std::string to_json() const;
  static TwoPointTable from_json(const std::string& json);
};

/// Exact number of perfect matchings by backtracking (|V| <= 24).
long long enum_dimer_covers(const GraphSpec& g, int max_vertices = 24);

/// Perfect matchings of G minus the vertex set `removed`.
long long enum_dimer_covers_minus(const GraphSpec& g, const std::vector<Vertex>& removed,
                                  int max_vertices = 24);

/// |Pfaffian| of the Kasteleyn-oriented adjacency matrix of an open grid,
/// in exact integer arithmetic.
long long fkt_count(int w, int h);

/// C_G(x,y) = |D_G({x,y})| / |D_G|.
Rational monomer_correlation(const GraphSpec& g, Vertex x, Vertex y);

/// Exact monomer double-dimer sums on a small graph (|V| <= 16).
struct MddExact {
  Rational partition;                 // Z_{G,rho,N}
  Rational expected_loop_len_origin;  // E|L_o|
  std::vector<Rational> p_connect;    // P(o <-> x); entry at o = P(o on a loop)
  std::vector<Rational> two_point;    // G(o,x); entry at o = 0 by convention
  std::vector<Rational> probabilities;  // P(omega) per enumerated configuration
  std::vector<MddConfiguration> configurations;
};
MddExact mdd_exact(const GraphSpec& g, const Rational& rho, int n_colors,
                   int max_vertices = 16);

/// Per-vertex constraints for constrained multi-occupancy sums.
struct MultiOccQuery {
  std::array<std::vector<int>, 2> source;  // fixed source-edge multiplicities
  std::vector<int> u_shift;                // shift of the U argument at x (<= 0)
  std::vector<int> exact_k;                // -1 free, else require k_x == value
  std::vector<uint8_t> require_n_zero;     // force n_x == 0

  static MultiOccQuery closed(const GraphSpec& g);
};

struct ZPathOptions {
  int cutoff_ghost = 6;     // cap on m^i_{x,g}/r
  long long budget = 200000000;
};

template <typename Scalar>
struct ConstrainedSum {
  Scalar value{};
  double tail_bound = 0.0;  // truncation bound; 0 when the sum is exact
  long long terms = 0;
};

/// Sum of nu(m) * prod_x U(k_x + shift_x) over m in Sigma_r matching the
/// query. Matchings are counted by prod_x n_x!, cancelling the 1/n_x! in the
/// measure. Scalar is double or Rational; beta and h must be exactly
/// representable for the Rational instantiation.
template <typename Scalar>
ConstrainedSum<Scalar> multiocc_sum(const GraphSpec& g, const ModelParams& params,
                                    const WeightFunction& U, const MultiOccQuery& query,
                                    const ZPathOptions& opts = {});

/// As multiocc_sum, additionally accumulating sum of weight * f(m) where m is
/// indexed by enlarged-graph edge id.
template <typename Scalar>
std::pair<ConstrainedSum<Scalar>, Scalar> multiocc_sum_with(
    const GraphSpec& g, const ModelParams& params, const WeightFunction& U,
    const MultiOccQuery& query,
    const std::function<Scalar(const std::vector<std::array<int, 2>>&)>& f,
    const ZPathOptions& opts = {});

/// Z^path: total weight of source-free configurations.
template <typename Scalar>
ConstrainedSum<Scalar> zpath_exact(const GraphSpec& g, const ModelParams& params,
                                   const WeightFunction& U, const ZPathOptions& opts = {});

/// G^(1)(x,y) = mu(x -> y) / Z^path at h = 0; the walk event fixes one colour
/// class per parity (both end dimers blue at odd distance, blue at x / red at
/// y at even distance).
Rational g1_exact(const GraphSpec& g, const Rational& beta, const WeightFunction& U, Vertex x,
                  Vertex y, const ZPathOptions& opts = {});

/// G^(2)(x,y) = P(x <-> y): probability a loop visits both, by literal
/// matching enumeration (sum n_x budget).
Rational g2_exact(const GraphSpec& g, const Rational& beta, const WeightFunction& U, Vertex x,
                  Vertex y, const ZPathOptions& opts = {});

/// Magnetisation <cos(r s_o^1)> via the graphical expansion.
double magnetisation_exact(const GraphSpec& g, const ModelParams& params,
                           const WeightFunction& U, const ZPathOptions& opts = {});

/// P(n_z = 0 for all z in A) and P(k_z = p for all z in A) under the closed
/// multi-occupancy measure.
double prob_local_time_zero(const GraphSpec& g, const ModelParams& params,
                            const WeightFunction& U, const std::vector<Vertex>& A,
                            const ZPathOptions& opts = {});
double prob_k_equals(const GraphSpec& g, const ModelParams& params, const WeightFunction& U,
                     const std::vector<Vertex>& A, int p, const ZPathOptions& opts = {});

/// E[ (1/m^i_{{o,z}}) 1{m^i_{{o,z}} > 0} ] for the neighbour identity.
double neighbour_inverse_multiplicity(const GraphSpec& g, const ModelParams& params,
                                      const WeightFunction& U, EdgeId edge, int colour,
                                      const ZPathOptions& opts = {});

}  // namespace loopforge
