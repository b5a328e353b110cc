#include "loopforge/multiocc.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace loopforge {

namespace {

double factorial_d(int n) {
  double f = 1.0;
  for (int i = 2; i <= n; ++i) f *= i;
  return f;
}

}  // namespace

MultiOccConfiguration MultiOccConfiguration::empty(const EnlargedGraph& g) {
  MultiOccConfiguration w;
  w.mult.assign(g.edge_count(), {0, 0});
  w.matchings.assign(g.base().vertex_count(), {});
  return w;
}

std::string MultiOccConfiguration::to_json(const EnlargedGraph& g) const {
  std::ostringstream os;
  os << "{\"mult\":{";
  bool first = true;
  for (EdgeId e = 0; e < static_cast<int>(mult.size()); ++e) {
    if (mult[e][0] == 0 && mult[e][1] == 0) continue;
    if (!first) os << ",";
    first = false;
    os << "\"" << e << "\":[" << mult[e][0] << "," << mult[e][1] << "]";
  }
  os << "},\"matchings\":[";
  for (Vertex x = 0; x < g.base().vertex_count(); ++x) {
    if (x) os << ",";
    os << "[";
    for (size_t i = 0; i < matchings[x].size(); ++i) {
      if (i) os << ",";
      os << matchings[x][i];
    }
    os << "]";
  }
  os << "]}";
  return os.str();
}

int local_time_colour(const EnlargedGraph& g, const MultiOccConfiguration& w, Vertex x,
                      int colour) {
  int n = 0;
  for (EdgeId e : g.base().incident(x)) n += w.m(e, colour);
  n += w.m(g.ghost_edge(x), colour);
  n += w.m(g.source_edge(x), colour);
  return n;
}

bool in_sigma_r(const EnlargedGraph& g, const MultiOccConfiguration& w, int r) {
  for (Vertex x = 0; x < g.base().vertex_count(); ++x) {
    if (local_time_colour(g, w, x, 1) != local_time_colour(g, w, x, 2)) return false;
    for (int colour : {1, 2})
      if (w.m(g.ghost_edge(x), colour) % std::max(r, 1) != 0) return false;
  }
  return true;
}

int local_time(const EnlargedGraph& g, const MultiOccConfiguration& w, Vertex x) {
  int n1 = local_time_colour(g, w, x, 1);
  int n2 = local_time_colour(g, w, x, 2);
  if (n1 != n2)
    throw std::invalid_argument("local_time: blue/red counts differ (Sigma_r violated)");
  return n1;
}

int k_of(const EnlargedGraph& g, const MultiOccConfiguration& w, Vertex x) {
  return local_time(g, w, x) - w.m(g.ghost_edge(x), 2);
}

std::array<std::vector<int>, 2> source_vector(const EnlargedGraph& g,
                                              const MultiOccConfiguration& w) {
  std::array<std::vector<int>, 2> dw;
  for (int c : {0, 1}) dw[c].assign(g.base().vertex_count(), 0);
  for (Vertex x = 0; x < g.base().vertex_count(); ++x)
    for (int c : {1, 2}) dw[c - 1][x] = w.m(g.source_edge(x), c);
  return dw;
}

double nu_weight(const EnlargedGraph& g, const MultiOccConfiguration& w,
                 const ModelParams& params) {
  double nu = 1.0;
  for (int colour : {1, 2}) {
    for (EdgeId e = 0; e < g.base().edge_count(); ++e) {
      int m = w.m(e, colour);
      nu *= std::pow(params.beta, m) / factorial_d(m);
    }
    for (Vertex x = 0; x < g.base().vertex_count(); ++x) {
      int m = w.m(g.ghost_edge(x), colour);
      if (m % std::max(params.r, 1) != 0)
        throw std::invalid_argument("nu_weight: ghost multiplicity not a multiple of r");
      int j = m / std::max(params.r, 1);
      nu *= std::pow(params.beta * params.h, j) / factorial_d(j);
    }
  }
  return nu;
}

double multiocc_weight(const EnlargedGraph& g, const MultiOccConfiguration& w,
                       const ModelParams& params, const WeightFunction& U) {
  if (!in_sigma_r(g, w, params.r))
    throw std::invalid_argument("multiocc_weight: configuration outside Sigma_r");
  double weight = nu_weight(g, w, params);
  for (Vertex x = 0; x < g.base().vertex_count(); ++x) {
    int n = local_time(g, w, x);
    weight *= U(k_of(g, w, x)) / factorial_d(n);
  }
  return weight;
}

double matching_count(const EnlargedGraph& g, const MultiOccConfiguration& w) {
  double count = 1.0;
  for (Vertex x = 0; x < g.base().vertex_count(); ++x) count *= factorial_d(local_time(g, w, x));
  return count;
}

std::vector<MultiOccConfiguration> enumerate_matchings(const EnlargedGraph& g,
                                                       const MultiOccConfiguration& w,
                                                       long budget) {
  const int n_base = g.base().vertex_count();
  if (matching_count(g, w) > static_cast<double>(budget))
    throw BudgetExceeded("enumerate_matchings: too many match functions");
  std::vector<MultiOccConfiguration> out;
  MultiOccConfiguration current = w;
  std::function<void(Vertex)> rec = [&](Vertex x) {
    if (x == n_base) {
      out.push_back(current);
      return;
    }
    int n = local_time(g, w, x);
    std::vector<int> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    do {
      current.matchings[x] = perm;
      rec(x + 1);
    } while (std::next_permutation(perm.begin(), perm.end()));
  };
  rec(0);
  return out;
}

MultiOccPaths trace_paths(const EnlargedGraph& g, const MultiOccConfiguration& w) {
  const int n_base = g.base().vertex_count();
  // One instance per dimer copy. End 0/1 are the edge endpoints; aux ends
  // (ghost or source) are marked kNoVertex.
  struct Instance {
    int colour;
    std::array<Vertex, 2> end;
  };
  std::vector<Instance> instances;
  // Per vertex, instance-ends in canonical (edge id, copy) order.
  struct EndRef {
    int inst;
    int side;
  };
  std::vector<std::vector<EndRef>> blue_ends(n_base), red_ends(n_base);
  for (EdgeId e = 0; e < g.edge_count(); ++e) {
    Vertex a, b;
    if (g.is_base_edge(e)) {
      a = g.base().edge(e).u;
      b = g.base().edge(e).v;
    } else {
      a = g.aux_vertex(e);
      b = kNoVertex;
    }
    for (int colour : {1, 2}) {
      for (int copy = 0; copy < w.m(e, colour); ++copy) {
        int id = static_cast<int>(instances.size());
        instances.push_back({colour, {a, b}});
        auto& lists = colour == 1 ? blue_ends : red_ends;
        lists[a].push_back({id, 0});
        if (b != kNoVertex) lists[b].push_back({id, 1});
      }
    }
  }
  // Pairing maps per instance end: partner instance-end or {-1,-1}.
  std::vector<std::array<EndRef, 2>> partner(instances.size(), {EndRef{-1, -1}, EndRef{-1, -1}});
  for (Vertex x = 0; x < n_base; ++x) {
    const auto& perm = w.matchings[x];
    if (perm.size() != blue_ends[x].size() || blue_ends[x].size() != red_ends[x].size())
      throw std::invalid_argument("trace_paths: matching size mismatch at a vertex");
    for (size_t i = 0; i < perm.size(); ++i) {
      EndRef be = blue_ends[x][i];
      EndRef re = red_ends[x][perm[i]];
      partner[be.inst][be.side] = re;
      partner[re.inst][re.side] = be;
    }
  }
  std::vector<bool> visited(instances.size(), false);
  MultiOccPaths paths;
  // Walk through instances: enter instance at `enter_side`, exit at the other
  // side, follow the pairing. Returns true when the traversal closes on the
  // starting end.
  auto traverse = [&](int inst0, int side0, std::vector<Vertex>& verts) {
    int inst = inst0;
    int enter_side = side0;
    while (true) {
      visited[inst] = true;
      int exit_side = 1 - enter_side;
      Vertex at = instances[inst].end[exit_side];
      if (at == kNoVertex) return false;  // open end at ghost/source
      verts.push_back(at);
      EndRef next = partner[inst][exit_side];
      if (next.inst == inst0 && next.side == side0) return true;
      inst = next.inst;
      enter_side = next.side;
    }
  };
  // Open walks start at aux ends (side 1 with end[1] == kNoVertex).
  for (int i = 0; i < static_cast<int>(instances.size()); ++i) {
    if (visited[i] || instances[i].end[1] != kNoVertex) continue;
    std::vector<Vertex> verts;
    traverse(i, 1, verts);
    paths.walks.push_back(std::move(verts));
  }
  for (int i = 0; i < static_cast<int>(instances.size()); ++i) {
    if (visited[i]) continue;
    std::vector<Vertex> verts;
    if (traverse(i, 0, verts))
      paths.loops.push_back(std::move(verts));
    else
      paths.walks.push_back(std::move(verts));
  }
  return paths;
}

}  // namespace loopforge
