#include "loopforge/exact.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <sstream>

#include "json.hpp"
#include "loopforge/parallel.hpp"

namespace loopforge {

namespace {

double factorial_d(int n) {
  double f = 1.0;
  for (int i = 2; i <= n; ++i) f *= i;
  return f;
}

// Backtracking matching counter over the lowest-index uncovered vertex.
long long count_matchings_rec(const GraphSpec& g, std::vector<bool>& covered, Vertex from) {
  Vertex first = kNoVertex;
  for (Vertex v = from; v < g.vertex_count(); ++v)
    if (!covered[v]) {
      first = v;
      break;
    }
  if (first == kNoVertex) return 1;
  long long total = 0;
  for (EdgeId e : g.incident(first)) {
    Vertex other = g.edge(e).other(first);
    if (covered[other]) continue;
    covered[first] = covered[other] = true;
    total += count_matchings_rec(g, covered, first + 1);
    covered[first] = covered[other] = false;
  }
  return total;
}

std::vector<std::vector<EdgeId>> list_matchings(const GraphSpec& g,
                                                const std::vector<bool>& removed) {
  std::vector<std::vector<EdgeId>> out;
  std::vector<EdgeId> current;
  std::vector<bool> covered = removed;
  std::function<void()> rec = [&]() {
    Vertex first = kNoVertex;
    for (Vertex v = 0; v < g.vertex_count(); ++v)
      if (!covered[v]) {
        first = v;
        break;
      }
    if (first == kNoVertex) {
      out.push_back(current);
      return;
    }
    for (EdgeId e : g.incident(first)) {
      Vertex other = g.edge(e).other(first);
      if (covered[other]) continue;
      covered[first] = covered[other] = true;
      current.push_back(e);
      rec();
      current.pop_back();
      covered[first] = covered[other] = false;
    }
  };
  rec();
  return out;
}

}  // namespace

void TwoPointTable::validate() const {
  if (value.size() != error.size() || value.size() != defined.size())
    throw std::invalid_argument("TwoPointTable: size mismatch");
  for (size_t i = 0; i < value.size(); ++i) {
    if (!defined[i]) continue;
    if (value[i] < 0.0) throw std::invalid_argument("TwoPointTable: negative entry");
    if ((kind == "C_G" || kind == "P_connect") && value[i] > 1.0 + 1e-12)
      throw std::invalid_argument("TwoPointTable: probability entry above one");
  }
}

std::string TwoPointTable::to_json() const {
  nlohmann::json j;
  j["kind"] = kind;
  j["graph"] = graph_desc;
  j["params"] = params_desc;
  j["method"] = method;
  j["value"] = value;
  j["error"] = error;
  j["defined"] = std::vector<int>(defined.begin(), defined.end());
  return j.dump();
}

TwoPointTable TwoPointTable::from_json(const std::string& json) {
  auto j = nlohmann::json::parse(json);
  TwoPointTable t;
  t.kind = j.at("kind").get<std::string>();
  t.graph_desc = j.at("graph").get<std::string>();
  t.params_desc = j.at("params").get<std::string>();
  t.method = j.at("method").get<std::string>();
  t.value = j.at("value").get<std::vector<double>>();
  t.error = j.at("error").get<std::vector<double>>();
  auto d = j.at("defined").get<std::vector<int>>();
  t.defined.assign(d.begin(), d.end());
  return t;
}

long long enum_dimer_covers(const GraphSpec& g, int max_vertices) {
  if (g.vertex_count() > max_vertices)
    throw BudgetExceeded("enum_dimer_covers: vertex budget exceeded");
  if (g.vertex_count() % 2 != 0) return 0;
  if (g.vertex_count() == 0) return 1;
  // Parallel over the first vertex's edge choices; combined in edge order.
  Vertex first = 0;
  const auto& branches = g.incident(first);
  if (branches.empty()) return 0;
  int n_chunks = static_cast<int>(branches.size());
  return parallel_chunks<long long>(
      n_chunks, 0LL,
      [&](int c) -> long long {
        EdgeId e = branches[c];
        Vertex other = g.edge(e).other(first);
        if (other == first) return 0;
        std::vector<bool> covered(g.vertex_count(), false);
        covered[first] = covered[other] = true;
        return count_matchings_rec(g, covered, first + 1);
      },
      [](long long a, long long b) { return a + b; });
}

long long enum_dimer_covers_minus(const GraphSpec& g, const std::vector<Vertex>& removed,
                                  int max_vertices) {
  if (g.vertex_count() > max_vertices)
    throw BudgetExceeded("enum_dimer_covers_minus: vertex budget exceeded");
  std::vector<bool> covered(g.vertex_count(), false);
  for (Vertex v : removed) covered[v] = true;
  return count_matchings_rec(g, covered, 0);
}

long long fkt_count(int w, int h) {
  if (w < 1 || h < 1) throw std::invalid_argument("fkt_count: grid sides must be >= 1");
  const int n = w * h;
  if (n % 2 != 0) return 0;
  auto at = [&](int i, int j) { return j * w + i; };
  // Kasteleyn orientation: horizontal edges east (+1), vertical edges up with
  // sign alternating by column; every unit face gets an odd clockwise count.
  std::vector<std::vector<BigInt>> a(n, std::vector<BigInt>(n, 0));
  for (int j = 0; j < h; ++j)
    for (int i = 0; i < w; ++i) {
      if (i + 1 < w) {
        a[at(i, j)][at(i + 1, j)] = 1;
        a[at(i + 1, j)][at(i, j)] = -1;
      }
      if (j + 1 < h) {
        int s = (i % 2 == 0) ? 1 : -1;
        a[at(i, j)][at(i, j + 1)] = s;
        a[at(i, j + 1)][at(i, j)] = -s;
      }
    }
  // Bareiss fraction-free elimination: exact integer determinant.
  BigInt prev = 1;
  int sign = 1;
  for (int k = 0; k < n; ++k) {
    if (a[k][k] == 0) {
      int pivot = -1;
      for (int r = k + 1; r < n; ++r)
        if (a[r][k] != 0) {
          pivot = r;
          break;
        }
      if (pivot < 0) return 0;  // singular: no matchings
      std::swap(a[k], a[pivot]);
      sign = -sign;
    }
    for (int r = k + 1; r < n; ++r)
      for (int c = k + 1; c < n; ++c) a[r][c] = (a[r][c] * a[k][k] - a[r][k] * a[k][c]) / prev;
    prev = a[k][k];
  }
  BigInt det = sign * a[n - 1][n - 1];
  if (det < 0) det = -det;
  BigInt root = boost::multiprecision::sqrt(det);
  if (root * root != det) throw std::runtime_error("fkt_count: determinant is not a square");
  return root.convert_to<long long>();
}

Rational monomer_correlation(const GraphSpec& g, Vertex x, Vertex y) {
  if (x == y) throw std::invalid_argument("monomer_correlation: vertices must differ");
  long long total = enum_dimer_covers(g);
  if (total == 0) throw std::invalid_argument("monomer_correlation: graph has no dimer cover");
  long long removed = enum_dimer_covers_minus(g, {x, y});
  return Rational(removed) / total;
}

MddExact mdd_exact(const GraphSpec& g, const Rational& rho, int n_colors, int max_vertices) {
  const int n = g.vertex_count();
  if (n > max_vertices || n > 20) throw BudgetExceeded("mdd_exact: vertex budget exceeded");
  MddExact out;
  out.partition = 0;
  out.expected_loop_len_origin = 0;
  out.p_connect.assign(n, Rational(0));
  out.two_point.assign(n, Rational(0));
  const Vertex o = g.origin();
  const bool store = n <= 8;

  // Closed sector: all (M, d1, d2).
  std::vector<Rational> rho_pow(n + 1), n_pow(2 * n + 2);
  rho_pow[0] = 1;
  for (int i = 1; i <= n; ++i) rho_pow[i] = rho_pow[i - 1] * rho;
  n_pow[0] = 1;
  for (int i = 1; i < static_cast<int>(n_pow.size()); ++i) n_pow[i] = n_pow[i - 1] * n_colors;

  std::vector<Rational> weights_store;
  for (unsigned mask = 0; mask < (1u << n); ++mask) {
    std::vector<bool> removed(n, false);
    int m_count = 0;
    for (int v = 0; v < n; ++v)
      if (mask & (1u << v)) {
        removed[v] = true;
        ++m_count;
      }
    auto matchings = list_matchings(g, removed);
    if (matchings.empty()) continue;
    for (const auto& blue : matchings)
      for (const auto& red : matchings) {
        auto cfg = MddConfiguration::from_matchings(g, blue, red);
        auto loops = decompose_loops(g, cfg);
        Rational weight = rho_pow[m_count] * n_pow[loops.size()];
        out.partition += weight;
        int len_o = 0;
        auto labels = loop_labels(g, cfg);
        for (const auto& loop : loops) {
          bool through_o = false;
          for (Vertex v : loop.vertices)
            if (v == o) through_o = true;
          if (through_o) {
            len_o = loop.length();
            for (Vertex v : loop.vertices) out.p_connect[v] += weight;
          }
        }
        out.expected_loop_len_origin += weight * len_o;
        if (store) {
          out.configurations.push_back(cfg);
          weights_store.push_back(weight);
        }
      }
  }
  if (out.partition == 0) throw std::invalid_argument("mdd_exact: empty configuration space");
  out.expected_loop_len_origin /= out.partition;
  for (Vertex v = 0; v < n; ++v) out.p_connect[v] /= out.partition;
  if (store) {
    out.probabilities.reserve(weights_store.size());
    for (const auto& w : weights_store) out.probabilities.push_back(w / out.partition);
  }

  // Walk sector for the two-point function G(o, x).
  for (Vertex x = 0; x < n; ++x) {
    if (x == o) continue;  // G(o,o) := 0 by convention
    bool odd = g.parity(o) != g.parity(x);
    Rational numerator = 0;
    for (unsigned mask = 0; mask < (1u << n); ++mask) {
      if (mask & (1u << o) || mask & (1u << x)) continue;
      std::vector<bool> removed(n, false);
      int m_count = 0;
      for (int v = 0; v < n; ++v)
        if (mask & (1u << v)) {
          removed[v] = true;
          ++m_count;
        }
      // d1 omits both endpoints at odd distance, one each at even distance.
      std::vector<bool> rm1 = removed, rm2 = removed;
      if (odd) {
        rm1[o] = rm1[x] = true;
      } else {
        rm1[o] = true;
        rm2[x] = true;
      }
      auto blues = list_matchings(g, rm1);
      if (blues.empty()) continue;
      auto reds = list_matchings(g, rm2);
      if (reds.empty()) continue;
      for (const auto& blue : blues)
        for (const auto& red : reds) {
          // Count closed loops of the superposition (walk vertices excluded).
          std::vector<EdgeId> blue_at(n, kNoEdge), red_at(n, kNoEdge);
          for (EdgeId e : blue) {
            blue_at[g.edge(e).u] = e;
            blue_at[g.edge(e).v] = e;
          }
          for (EdgeId e : red) {
            red_at[g.edge(e).u] = e;
            red_at[g.edge(e).v] = e;
          }
          // Trace the walk from o: at o the missing colour starts the walk.
          std::vector<bool> on_walk(n, false);
          Vertex v = o;
          bool follow_blue = blue_at[o] != kNoEdge;
          on_walk[o] = true;
          while (true) {
            EdgeId e = follow_blue ? blue_at[v] : red_at[v];
            if (e == kNoEdge) break;
            v = g.edge(e).other(v);
            on_walk[v] = true;
            follow_blue = !follow_blue;
          }
          int loops = 0;
          std::vector<bool> seen(n, false);
          for (Vertex s = 0; s < n; ++s) {
            if (seen[s] || removed[s] || on_walk[s] || blue_at[s] == kNoEdge) continue;
            Vertex u = s;
            bool fb = true;
            do {
              seen[u] = true;
              EdgeId e = fb ? blue_at[u] : red_at[u];
              u = g.edge(e).other(u);
              fb = !fb;
            } while (u != s || !fb);
            ++loops;
          }
          numerator += rho_pow[m_count] * n_pow[loops];
        }
    }
    out.two_point[x] = numerator / out.partition;
  }
  return out;
}

MultiOccQuery MultiOccQuery::closed(const GraphSpec& g) {
  MultiOccQuery q;
  q.source[0].assign(g.vertex_count(), 0);
  q.source[1].assign(g.vertex_count(), 0);
  q.u_shift.assign(g.vertex_count(), 0);
  q.exact_k.assign(g.vertex_count(), -1);
  q.require_n_zero.assign(g.vertex_count(), 0);
  return q;
}

namespace {

template <typename Scalar>
Scalar scalar_from_double(double x) {
  if constexpr (std::is_same_v<Scalar, Rational>)
    return Rational(x);
  else
    return x;
}

// Constrained DFS over multiplicities. Slot order: per vertex x ascending,
// first the ghost pair of x, then the base edges whose larger endpoint is x.
template <typename Scalar>
class MultiOccEnumerator {
 public:
  MultiOccEnumerator(const GraphSpec& g, const ModelParams& params, const WeightFunction& U,
                     const MultiOccQuery& query, const ZPathOptions& opts,
                     const std::function<Scalar(const std::vector<std::array<int, 2>>&)>* f)
      : g_(g), en_(enlarge(g)), params_(params), U_(U), query_(query), opts_(opts), f_(f) {
    params_.validate();
    n_ = g_.vertex_count();
    support_ = U_.support_bound();
    beta_ = scalar_from_double<Scalar>(params_.beta);
    beta_h_ = scalar_from_double<Scalar>(params_.beta * params_.h);
    // Per-vertex caps on the local time.
    cap_n_.assign(n_, 0);
    max_ghost_steps_ = (params_.h > 0.0 && params_.beta > 0.0) ? opts_.cutoff_ghost : 0;
    for (Vertex x = 0; x < n_; ++x) {
      int cap;
      if (query_.require_n_zero[x])
        cap = 0;
      else if (query_.exact_k[x] >= 0)
        cap = query_.exact_k[x] + params_.r * max_ghost_steps_;
      else
        cap = support_ - query_.u_shift[x] + params_.r * max_ghost_steps_;
      cap_n_[x] = std::max(cap, 0);
    }
    int max_mult = 0;
    for (Vertex x = 0; x < n_; ++x) {
      max_mult = std::max(max_mult, cap_n_[x]);
      max_mult = std::max(max_mult, query_.source[0][x]);
      max_mult = std::max(max_mult, query_.source[1][x]);
    }
    pow_beta_.resize(max_mult + 1);
    pow_beta_h_.resize(max_ghost_steps_ + 1);
    inv_fact_.resize(std::max(max_mult, max_ghost_steps_) + 1);
    Scalar p = 1;
    for (int i = 0; i <= max_mult; ++i) {
      pow_beta_[i] = p;
      p = p * beta_;
    }
    p = 1;
    for (int i = 0; i <= max_ghost_steps_; ++i) {
      pow_beta_h_[i] = p;
      p = p * beta_h_;
    }
    for (int i = 0; i < static_cast<int>(inv_fact_.size()); ++i)
      inv_fact_[i] = Scalar(1) / scalar_from_double<Scalar>(factorial_d(i));
    u_val_.resize(support_ + 1);
    for (int i = 0; i <= support_; ++i) u_val_[i] = scalar_from_double<Scalar>(U_(i));

    // Slot schedule.
    for (Vertex x = 0; x < n_; ++x) {
      slots_.push_back({SlotKind::Ghost, x});
      for (EdgeId e : g_.incident(x)) {
        Vertex other = g_.edge(e).other(x);
        if (std::max(g_.edge(e).u, g_.edge(e).v) != x) continue;
        if (other == x) continue;
        slots_.push_back({SlotKind::BaseEdge, e});
      }
      last_slot_of_[x] = static_cast<int>(slots_.size()) - 1;
    }
    // Vertex completion at slot index.
    complete_at_.assign(slots_.size(), std::vector<Vertex>{});
    std::vector<int> last(n_, -1);
    for (int s = 0; s < static_cast<int>(slots_.size()); ++s) {
      if (slots_[s].kind == SlotKind::Ghost)
        last[slots_[s].id] = std::max(last[slots_[s].id], s);
      else {
        const Edge& e = g_.edge(slots_[s].id);
        last[e.u] = std::max(last[e.u], s);
        last[e.v] = std::max(last[e.v], s);
      }
    }
    for (Vertex x = 0; x < n_; ++x)
      if (last[x] >= 0) complete_at_[last[x]].push_back(x);

    n1_.assign(n_, 0);
    n2_.assign(n_, 0);
    ghost2_.assign(n_, 0);
    for (Vertex x = 0; x < n_; ++x) {
      n1_[x] = query_.source[0][x];
      n2_[x] = query_.source[1][x];
    }
    mult_.assign(en_.edge_count(), {0, 0});
    for (Vertex x = 0; x < n_; ++x) {
      mult_[en_.source_edge(x)] = {query_.source[0][x], query_.source[1][x]};
    }
  }

  ConstrainedSum<Scalar> run(Scalar* f_accum) {
    sum_ = Scalar(0);
    f_sum_ = Scalar(0);
    nodes_ = 0;
    dfs(0, Scalar(1));
    ConstrainedSum<Scalar> out;
    out.value = sum_;
    out.terms = nodes_;
    out.tail_bound = tail_bound();
    if (f_accum) *f_accum = f_sum_;
    return out;
  }

 private:
  enum class SlotKind { Ghost, BaseEdge };
  struct Slot {
    SlotKind kind;
    int id;  // vertex for Ghost, edge for BaseEdge
  };

  double tail_bound() const {
    if (params_.h <= 0.0 || params_.beta <= 0.0) return 0.0;
    // Discarded configurations have some ghost step count j > J. Dropping the
    // Sigma_r constraint and U <= 1 bounds the lost mass by
    // 2 |V| * T(J) * exp(2 beta |E| + 2 beta h |V|), with T the factor tail.
    int J = max_ghost_steps_;
    double bh = params_.beta * params_.h;
    double t = std::pow(bh, J + 1) / factorial_d(J + 1) * std::exp(bh);
    return 2.0 * n_ * t * std::exp(2.0 * params_.beta * g_.edge_count() + 2.0 * bh * n_);
  }

  bool check_vertex(Vertex x) const {
    if (n1_[x] != n2_[x]) return false;
    int k = n1_[x] - ghost2_[x];
    if (k < 0) return false;
    if (query_.require_n_zero[x] && n1_[x] != 0) return false;
    if (query_.exact_k[x] >= 0 && k != query_.exact_k[x]) return false;
    return true;
  }

  Scalar vertex_factor(Vertex x) const {
    int k = n1_[x] - ghost2_[x] + query_.u_shift[x];
    if (k < 0 || k > support_) return Scalar(0);
    return u_val_[k];
  }

  void dfs(int slot, Scalar acc) {
    if (++nodes_ > opts_.budget) throw BudgetExceeded("multiocc_sum: node budget exceeded");
    if (acc == Scalar(0)) return;
    if (slot == static_cast<int>(slots_.size())) {
      sum_ += acc;
      if (f_) f_sum_ += acc * (*f_)(mult_);
      return;
    }
    const Slot& s = slots_[slot];
    if (s.kind == SlotKind::Ghost) {
      Vertex x = s.id;
      EdgeId ge = en_.ghost_edge(x);
      for (int j1 = 0; j1 <= max_ghost_steps_; ++j1) {
        int m1 = j1 * params_.r;
        if (n1_[x] + m1 > cap_n_[x]) break;
        for (int j2 = 0; j2 <= max_ghost_steps_; ++j2) {
          int m2 = j2 * params_.r;
          if (n2_[x] + m2 > cap_n_[x]) break;
          n1_[x] += m1;
          n2_[x] += m2;
          ghost2_[x] = m2;
          mult_[ge] = {m1, m2};
          finish_slot(slot, acc * pow_beta_h_[j1] * inv_fact_[j1] * pow_beta_h_[j2] *
                                inv_fact_[j2]);
          n1_[x] -= m1;
          n2_[x] -= m2;
          ghost2_[x] = 0;
          mult_[ge] = {0, 0};
        }
      }
    } else {
      EdgeId e = s.id;
      Vertex u = g_.edge(e).u, v = g_.edge(e).v;
      int cap1 = std::min(cap_n_[u] - n1_[u], cap_n_[v] - n1_[v]);
      for (int m1 = 0; m1 <= cap1; ++m1) {
        int cap2 = std::min(cap_n_[u] - n2_[u], cap_n_[v] - n2_[v]);
        for (int m2 = 0; m2 <= cap2; ++m2) {
          n1_[u] += m1;
          n1_[v] += m1;
          n2_[u] += m2;
          n2_[v] += m2;
          mult_[e] = {m1, m2};
          finish_slot(slot, acc * pow_beta_[m1] * inv_fact_[m1] * pow_beta_[m2] * inv_fact_[m2]);
          n1_[u] -= m1;
          n1_[v] -= m1;
          n2_[u] -= m2;
          n2_[v] -= m2;
          mult_[e] = {0, 0};
        }
      }
    }
  }

  void finish_slot(int slot, Scalar acc) {
    if (acc == Scalar(0)) return;
    for (Vertex x : complete_at_[slot]) {
      if (!check_vertex(x)) return;
      acc = acc * vertex_factor(x);
      if (acc == Scalar(0)) return;
    }
    dfs(slot + 1, acc);
  }

  const GraphSpec& g_;
  EnlargedGraph en_;
  ModelParams params_;
  const WeightFunction& U_;
  MultiOccQuery query_;
  ZPathOptions opts_;
  const std::function<Scalar(const std::vector<std::array<int, 2>>&)>* f_;

  int n_ = 0;
  int support_ = 0;
  int max_ghost_steps_ = 0;
  Scalar beta_{}, beta_h_{};
  std::vector<Scalar> pow_beta_, pow_beta_h_, inv_fact_, u_val_;
  std::vector<Slot> slots_;
  std::map<Vertex, int> last_slot_of_;
  std::vector<std::vector<Vertex>> complete_at_;
  std::vector<int> n1_, n2_, ghost2_, cap_n_;
  std::vector<std::array<int, 2>> mult_;
  Scalar sum_{}, f_sum_{};
  long long nodes_ = 0;
};

}  // namespace

template <typename Scalar>
ConstrainedSum<Scalar> multiocc_sum(const GraphSpec& g, const ModelParams& params,
                                    const WeightFunction& U, const MultiOccQuery& query,
                                    const ZPathOptions& opts) {
  MultiOccEnumerator<Scalar> e(g, params, U, query, opts, nullptr);
  return e.run(nullptr);
}

template <typename Scalar>
std::pair<ConstrainedSum<Scalar>, Scalar> multiocc_sum_with(
    const GraphSpec& g, const ModelParams& params, const WeightFunction& U,
    const MultiOccQuery& query,
    const std::function<Scalar(const std::vector<std::array<int, 2>>&)>& f,
    const ZPathOptions& opts) {
  MultiOccEnumerator<Scalar> e(g, params, U, query, opts, &f);
  Scalar f_accum{};
  auto sum = e.run(&f_accum);
  return {sum, f_accum};
}

template ConstrainedSum<double> multiocc_sum<double>(const GraphSpec&, const ModelParams&,
                                                     const WeightFunction&,
                                                     const MultiOccQuery&, const ZPathOptions&);
template ConstrainedSum<Rational> multiocc_sum<Rational>(const GraphSpec&, const ModelParams&,
                                                         const WeightFunction&,
                                                         const MultiOccQuery&,
                                                         const ZPathOptions&);
template std::pair<ConstrainedSum<double>, double> multiocc_sum_with<double>(
    const GraphSpec&, const ModelParams&, const WeightFunction&, const MultiOccQuery&,
    const std::function<double(const std::vector<std::array<int, 2>>&)>&, const ZPathOptions&);
template std::pair<ConstrainedSum<Rational>, Rational> multiocc_sum_with<Rational>(
    const GraphSpec&, const ModelParams&, const WeightFunction&, const MultiOccQuery&,
    const std::function<Rational(const std::vector<std::array<int, 2>>&)>&,
    const ZPathOptions&);

template <typename Scalar>
ConstrainedSum<Scalar> zpath_exact(const GraphSpec& g, const ModelParams& params,
                                   const WeightFunction& U, const ZPathOptions& opts) {
  return multiocc_sum<Scalar>(g, params, U, MultiOccQuery::closed(g), opts);
}

template ConstrainedSum<double> zpath_exact<double>(const GraphSpec&, const ModelParams&,
                                                    const WeightFunction&, const ZPathOptions&);
template ConstrainedSum<Rational> zpath_exact<Rational>(const GraphSpec&, const ModelParams&,
                                                        const WeightFunction&,
                                                        const ZPathOptions&);

Rational g1_exact(const GraphSpec& g, const Rational& beta, const WeightFunction& U, Vertex x,
                  Vertex y, const ZPathOptions& opts) {
  if (x == y) throw std::invalid_argument("g1_exact: vertices must differ");
  ModelParams params;
  params.beta = to_double(beta);
  params.h = 0.0;
  params.r = 1;
  MultiOccQuery q = MultiOccQuery::closed(g);
  bool odd = g.parity(x) != g.parity(y);
  if (odd) {
    q.source[0][x] = 1;
    q.source[0][y] = 1;
  } else {
    q.source[0][x] = 1;
    q.source[1][y] = 1;
  }
  auto numerator = multiocc_sum<Rational>(g, params, U, q, opts);
  auto z = zpath_exact<Rational>(g, params, U, opts);
  if (z.value == 0) throw std::invalid_argument("g1_exact: vanishing partition function");
  return numerator.value / z.value;
}

Rational g2_exact(const GraphSpec& g, const Rational& beta, const WeightFunction& U, Vertex x,
                  Vertex y, const ZPathOptions& opts) {
  if (x == y) throw std::invalid_argument("g2_exact: vertices must differ");
  ModelParams params;
  params.beta = to_double(beta);
  params.h = 0.0;
  params.r = 1;
  EnlargedGraph en = enlarge(g);
  // For each closed m, the fraction of match functions joining x and y.
  auto frac_connecting = [&](const std::vector<std::array<int, 2>>& mult) -> Rational {
    MultiOccConfiguration w = MultiOccConfiguration::empty(en);
    w.mult = mult;
    long long total_n = 0;
    for (Vertex v = 0; v < g.vertex_count(); ++v) total_n += local_time(en, w, v);
    if (total_n > 2 * 12)
      throw BudgetExceeded("g2_exact: local time budget for matching enumeration");
    auto all = enumerate_matchings(en, w);
    long long connecting = 0;
    for (const auto& filled : all) {
      auto paths = trace_paths(en, filled);
      for (const auto& loop : paths.loops) {
        bool has_x = false, has_y = false;
        for (Vertex v : loop)
          if (v == x)
            has_x = true;
          else if (v == y)
            has_y = true;
        if (has_x && has_y) {
          ++connecting;
          break;
        }
      }
    }
    return Rational(connecting) / static_cast<long long>(all.size());
  };
  auto [z, conn] = multiocc_sum_with<Rational>(g, params, U, MultiOccQuery::closed(g),
                                               frac_connecting, opts);
  if (z.value == 0) throw std::invalid_argument("g2_exact: vanishing partition function");
  return conn / z.value;
}

double magnetisation_exact(const GraphSpec& g, const ModelParams& params,
                           const WeightFunction& U, const ZPathOptions& opts) {
  const Vertex o = g.origin();
  MultiOccQuery q1 = MultiOccQuery::closed(g);
  q1.source[0][o] = params.r;
  auto s1 = multiocc_sum<double>(g, params, U, q1, opts);
  MultiOccQuery q2 = MultiOccQuery::closed(g);
  q2.source[1][o] = params.r;
  q2.u_shift[o] = -params.r;
  auto s2 = multiocc_sum<double>(g, params, U, q2, opts);
  auto z = zpath_exact<double>(g, params, U, opts);
  return (s1.value + s2.value) / (2.0 * z.value);
}

double prob_local_time_zero(const GraphSpec& g, const ModelParams& params,
                            const WeightFunction& U, const std::vector<Vertex>& A,
                            const ZPathOptions& opts) {
  MultiOccQuery q = MultiOccQuery::closed(g);
  for (Vertex z : A) q.require_n_zero[z] = 1;
  auto restricted = multiocc_sum<double>(g, params, U, q, opts);
  auto z = zpath_exact<double>(g, params, U, opts);
  return restricted.value / z.value;
}

double prob_k_equals(const GraphSpec& g, const ModelParams& params, const WeightFunction& U,
                     const std::vector<Vertex>& A, int p, const ZPathOptions& opts) {
  MultiOccQuery q = MultiOccQuery::closed(g);
  for (Vertex z : A) q.exact_k[z] = p;
  auto restricted = multiocc_sum<double>(g, params, U, q, opts);
  auto z = zpath_exact<double>(g, params, U, opts);
  return restricted.value / z.value;
}

double neighbour_inverse_multiplicity(const GraphSpec& g, const ModelParams& params,
                                      const WeightFunction& U, EdgeId edge, int colour,
                                      const ZPathOptions& opts) {
  auto f = [&](const std::vector<std::array<int, 2>>& mult) -> double {
    int m = mult[edge][colour - 1];
    return m > 0 ? 1.0 / m : 0.0;
  };
  auto [z, acc] = multiocc_sum_with<double>(g, params, U, MultiOccQuery::closed(g), f, opts);
  return acc / z.value;
}

}  // namespace loopforge
