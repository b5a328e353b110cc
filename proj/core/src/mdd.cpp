#include "loopforge/mdd.hpp"

#include <cmath>
#include <functional>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace loopforge {

MddConfiguration MddConfiguration::all_monomer(const GraphSpec& g) {
  MddConfiguration cfg;
  cfg.monomer.assign(g.vertex_count(), true);
  cfg.blue_at.assign(g.vertex_count(), kNoEdge);
  cfg.red_at.assign(g.vertex_count(), kNoEdge);
  return cfg;
}

MddConfiguration MddConfiguration::from_matchings(const GraphSpec& g,
                                                  const std::vector<EdgeId>& blue,
                                                  const std::vector<EdgeId>& red) {
  MddConfiguration cfg = all_monomer(g);
  for (EdgeId e : blue) {
    const Edge& ed = g.edge(e);
    cfg.blue_at[ed.u] = e;
    cfg.blue_at[ed.v] = e;
  }
  for (EdgeId e : red) {
    const Edge& ed = g.edge(e);
    cfg.red_at[ed.u] = e;
    cfg.red_at[ed.v] = e;
  }
  for (Vertex v = 0; v < g.vertex_count(); ++v)
    cfg.monomer[v] = cfg.blue_at[v] == kNoEdge && cfg.red_at[v] == kNoEdge;
  cfg.validate(g);
  return cfg;
}

std::vector<EdgeId> MddConfiguration::blue_edges(const GraphSpec& g) const {
  std::vector<EdgeId> out;
  for (Vertex v = 0; v < g.vertex_count(); ++v)
    if (blue_at[v] != kNoEdge && g.edge(blue_at[v]).u == v) out.push_back(blue_at[v]);
  return out;
}

std::vector<EdgeId> MddConfiguration::red_edges(const GraphSpec& g) const {
  std::vector<EdgeId> out;
  for (Vertex v = 0; v < g.vertex_count(); ++v)
    if (red_at[v] != kNoEdge && g.edge(red_at[v]).u == v) out.push_back(red_at[v]);
  return out;
}

std::vector<Vertex> MddConfiguration::monomers() const {
  std::vector<Vertex> out;
  for (Vertex v = 0; v < static_cast<int>(monomer.size()); ++v)
    if (monomer[v]) out.push_back(v);
  return out;
}

int MddConfiguration::monomer_count() const {
  int n = 0;
  for (bool m : monomer) n += m ? 1 : 0;
  return n;
}

void MddConfiguration::validate(const GraphSpec& g) const {
  if (static_cast<int>(monomer.size()) != g.vertex_count())
    throw std::invalid_argument("MddConfiguration: size mismatch");
  for (Vertex v = 0; v < g.vertex_count(); ++v) {
    if (monomer[v]) {
      if (blue_at[v] != kNoEdge || red_at[v] != kNoEdge)
        throw std::invalid_argument("MddConfiguration: monomer carries a dimer");
      continue;
    }
    for (EdgeId e : {blue_at[v], red_at[v]}) {
      if (e == kNoEdge)
        throw std::invalid_argument("MddConfiguration: uncovered non-monomer vertex");
      if (!g.edge(e).touches(v))
        throw std::invalid_argument("MddConfiguration: dimer not incident to vertex");
      Vertex w = g.edge(e).other(v);
      if (monomer[w]) throw std::invalid_argument("MddConfiguration: dimer touches a monomer");
    }
    Vertex bu = g.edge(blue_at[v]).other(v);
    if (blue_at[bu] != blue_at[v])
      throw std::invalid_argument("MddConfiguration: blue matching inconsistent");
    Vertex ru = g.edge(red_at[v]).other(v);
    if (red_at[ru] != red_at[v])
      throw std::invalid_argument("MddConfiguration: red matching inconsistent");
  }
}

std::string MddConfiguration::to_json(const GraphSpec& g) const {
  std::ostringstream os;
  os << "{\"monomers\":[";
  bool first = true;
  for (Vertex v : monomers()) {
    if (!first) os << ",";
    first = false;
    os << v;
  }
  os << "],\"blue\":[";
  first = true;
  for (EdgeId e : blue_edges(g)) {
    if (!first) os << ",";
    first = false;
    os << e;
  }
  os << "],\"red\":[";
  first = true;
  for (EdgeId e : red_edges(g)) {
    if (!first) os << ",";
    first = false;
    os << e;
  }
  os << "]}";
  return os.str();
}

MddConfiguration MddConfiguration::from_json(const GraphSpec& g, const std::string& json) {
  auto j = nlohmann::json::parse(json);
  MddConfiguration cfg = from_matchings(g, j.at("blue").get<std::vector<EdgeId>>(),
                                        j.at("red").get<std::vector<EdgeId>>());
  std::vector<Vertex> monomers = j.at("monomers").get<std::vector<Vertex>>();
  for (Vertex v : monomers)
    if (!cfg.monomer[v])
      throw std::invalid_argument("MddConfiguration: monomer list inconsistent with matchings");
  if (static_cast<int>(monomers.size()) != cfg.monomer_count())
    throw std::invalid_argument("MddConfiguration: monomer list incomplete");
  return cfg;
}

std::vector<Loop> decompose_loops(const GraphSpec& g, const MddConfiguration& cfg) {
  std::vector<Loop> loops;
  std::vector<bool> seen(g.vertex_count(), false);
  for (Vertex start = 0; start < g.vertex_count(); ++start) {
    if (seen[start] || cfg.monomer[start]) continue;
    Loop loop;
    Vertex v = start;
    bool follow_blue = true;
    do {
      loop.vertices.push_back(v);
      seen[v] = true;
      EdgeId e = follow_blue ? cfg.blue_at[v] : cfg.red_at[v];
      v = g.edge(e).other(v);
      follow_blue = !follow_blue;
    } while (v != start || !follow_blue);
    loops.push_back(std::move(loop));
  }
  return loops;
}

int loop_count(const GraphSpec& g, const MddConfiguration& cfg) {
  return static_cast<int>(decompose_loops(g, cfg).size());
}

int loop_length_at(const GraphSpec& g, const MddConfiguration& cfg, Vertex x) {
  if (cfg.monomer[x]) return 0;
  Vertex v = x;
  bool follow_blue = true;
  int len = 0;
  do {
    ++len;
    EdgeId e = follow_blue ? cfg.blue_at[v] : cfg.red_at[v];
    v = g.edge(e).other(v);
    follow_blue = !follow_blue;
  } while (v != x || !follow_blue);
  return len;
}

std::vector<int> loop_labels(const GraphSpec& g, const MddConfiguration& cfg) {
  std::vector<int> label(g.vertex_count(), -1);
  auto loops = decompose_loops(g, cfg);
  for (int i = 0; i < static_cast<int>(loops.size()); ++i)
    for (Vertex v : loops[i].vertices) label[v] = i;
  return label;
}

double mdd_weight(const GraphSpec& g, const MddConfiguration& cfg, const ModelParams& params) {
  double w = std::pow(params.rho, cfg.monomer_count());
  if (params.n_colors != 1) w *= std::pow(params.n_colors, loop_count(g, cfg));
  return w;
}

std::vector<Vertex> Permutation::fixed_points() const {
  std::vector<Vertex> out;
  for (Vertex v = 0; v < static_cast<int>(image.size()); ++v)
    if (image[v] == v) out.push_back(v);
  return out;
}

int Permutation::fixed_point_count() const {
  int n = 0;
  for (Vertex v = 0; v < static_cast<int>(image.size()); ++v) n += image[v] == v ? 1 : 0;
  return n;
}

void Permutation::validate(const GraphSpec& g) const {
  if (static_cast<int>(image.size()) != g.vertex_count())
    throw std::invalid_argument("Permutation: size mismatch");
  std::vector<bool> hit(image.size(), false);
  for (Vertex v = 0; v < g.vertex_count(); ++v) {
    Vertex w = image[v];
    if (w < 0 || w >= g.vertex_count() || hit[w])
      throw std::invalid_argument("Permutation: not a bijection");
    hit[w] = true;
    if (w != v && g.edges_between(v, w).empty())
      throw std::invalid_argument("Permutation: step is not an edge");
  }
}

Permutation to_permutation(const GraphSpec& g, const MddConfiguration& cfg) {
  Permutation p;
  p.image.resize(g.vertex_count());
  for (Vertex v = 0; v < g.vertex_count(); ++v) {
    if (cfg.monomer[v]) {
      p.image[v] = v;
      continue;
    }
    EdgeId e = g.parity(v) == 0 ? cfg.blue_at[v] : cfg.red_at[v];
    p.image[v] = g.edge(e).other(v);
  }
  return p;
}

MddConfiguration from_permutation(const GraphSpec& g, const Permutation& p) {
  p.validate(g);
  MddConfiguration cfg = MddConfiguration::all_monomer(g);
  for (Vertex v = 0; v < g.vertex_count(); ++v) {
    Vertex w = p.image[v];
    if (w == v) continue;
    cfg.monomer[v] = false;
    auto ids = g.edges_between(v, w);
    EdgeId e = ids.front();
    if (g.parity(v) == 0)
      cfg.blue_at[v] = cfg.blue_at[w] = e;
    else
      cfg.red_at[v] = cfg.red_at[w] = e;
  }
  cfg.validate(g);
  return cfg;
}

std::vector<MddConfiguration> enumerate_mdd_configurations(const GraphSpec& g,
                                                           int max_vertices) {
  if (g.vertex_count() > max_vertices)
    throw BudgetExceeded("enumerate_mdd_configurations: graph too large");
  // Enumerate matchings of the subgraph spanned by the non-monomer set, twice.
  std::vector<MddConfiguration> out;
  const int n = g.vertex_count();
  std::function<void(std::vector<bool>&, Vertex)> rec_subset =
      [&](std::vector<bool>& in_m, Vertex v) {
        if (v == n) {
          // Collect matchings of the complement of M.
          std::vector<std::vector<EdgeId>> matchings;
          std::vector<EdgeId> current;
          std::vector<bool> covered = in_m;  // monomers count as covered
          std::function<void()> rec_match = [&]() {
            Vertex first = kNoVertex;
            for (Vertex w = 0; w < n; ++w)
              if (!covered[w]) {
                first = w;
                break;
              }
            if (first == kNoVertex) {
              matchings.push_back(current);
              return;
            }
            for (EdgeId e : g.incident(first)) {
              Vertex other = g.edge(e).other(first);
              if (covered[other]) continue;
              covered[first] = covered[other] = true;
              current.push_back(e);
              rec_match();
              current.pop_back();
              covered[first] = covered[other] = false;
            }
          };
          rec_match();
          for (const auto& blue : matchings)
            for (const auto& red : matchings) out.push_back(MddConfiguration::from_matchings(g, blue, red));
          return;
        }
        in_m[v] = false;
        rec_subset(in_m, v + 1);
        in_m[v] = true;
        rec_subset(in_m, v + 1);
        in_m[v] = false;
      };
  std::vector<bool> in_m(n, false);
  rec_subset(in_m, 0);
  return out;
}

}  // namespace loopforge
