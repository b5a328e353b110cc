#include "loopforge/spin.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "loopforge/parallel.hpp"

namespace loopforge {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

struct KahanSum {
  double hi = 0.0;
  double lo = 0.0;
  void add(double x) {
    double y = x - lo;
    double t = hi + y;
    lo = (t - hi) - y;
    hi = t;
  }
};

struct ComplexAcc {
  KahanSum re, im;
  void add(const Complex& z) {
    re.add(z.real());
    im.add(z.imag());
  }
  Complex value() const { return {re.hi, im.hi}; }
};

int sigma_of_parity(int parity) { return parity == 0 ? 1 : -1; }

// Shared quadrature tables for one (graph, params, U, Q, offset) tuple.
struct QuadTables {
  int Q = 0;
  std::vector<double> theta;      // absolute angles
  std::vector<Complex> edge_exp;  // exp(beta e^{i 2 pi d / Q})
  std::vector<Complex> expdiff;   // e^{i 2 pi d / Q}
  std::array<std::vector<Complex>, 2> gamma;   // per parity, by difference
  std::array<std::vector<Complex>, 2> dgamma;  // (d1 - d2) gamma, by difference
  std::vector<double> field;                   // e^{2 beta h cos(r theta_a)}

  QuadTables(const ModelParams& p, const WeightFunction& U, int Q_, double offset) : Q(Q_) {
    theta.resize(Q);
    edge_exp.resize(Q);
    expdiff.resize(Q);
    field.resize(Q);
    for (int a = 0; a < Q; ++a) {
      theta[a] = kTwoPi * a / Q + offset;
      double d = kTwoPi * a / Q;
      expdiff[a] = std::polar(1.0, d);
      edge_exp[a] = std::exp(p.beta * expdiff[a]);
      field[a] = std::exp(2.0 * p.beta * p.h * std::cos(p.r * theta[a]));
    }
    const double norm = 1.0 / (kTwoPi * kTwoPi);
    for (int par : {0, 1}) {
      int sigma = sigma_of_parity(par);
      gamma[par].assign(Q, 0.0);
      dgamma[par].assign(Q, 0.0);
      for (int d = 0; d < Q; ++d) {
        Complex gsum = 0.0, dsum = 0.0;
        for (int n = 0; n <= U.support_bound(); ++n) {
          if (U(n) == 0.0) continue;
          Complex w = std::polar(1.0, -sigma * n * kTwoPi * d / Q);
          gsum += U(n) * w;
          dsum += U(n) * Complex(0.0, -2.0 * sigma * n) * w;
        }
        gamma[par][d] = norm * gsum;
        dgamma[par][d] = norm * dsum;
      }
    }
  }
};

int mod_q(int x, int Q) {
  int r = x % Q;
  return r < 0 ? r + Q : r;
}

enum class VertexMode { Normal, DH1, DH2 };

// Per-observable, per-vertex factor: the vertex's share of the integrand.
struct VertexEval {
  VertexMode mode = VertexMode::Normal;
  std::vector<Complex> table;   // gamma*field*scalars (or psi replacement)
  std::vector<Complex> dtable;  // (D gamma)*field*scalars, DH modes only
};

struct ObsEval {
  std::vector<VertexEval> vertex;  // size |V|
  std::vector<Vertex> dh_vertices;
};

ObsEval build_obs_eval(const GraphSpec& g, const ModelParams& params, const WeightFunction& U,
                       const QuadTables& t, const SpinObservable& obs) {
  const int Q = t.Q;
  const int n = g.vertex_count();
  ObsEval out;
  out.vertex.resize(n);
  std::vector<int> dh_count(n, 0);
  std::vector<int> psi_kind(n, -1);  // -1 none, else exponent; psi0 stored as kind flag
  std::vector<bool> psi0_flag(n, false);
  for (const auto& f : obs.factors) {
    if (f.kind == SpinFactor::Kind::DH) ++dh_count[f.vertex];
    if (f.kind == SpinFactor::Kind::Psi0) psi0_flag[f.vertex] = true;
    if (f.kind == SpinFactor::Kind::PsiP) psi_kind[f.vertex] = f.exponent;
  }
  for (Vertex z = 0; z < n; ++z) {
    if (dh_count[z] > 2)
      throw std::invalid_argument("spin observable: more than two dH factors at one vertex");
    if ((psi0_flag[z] || psi_kind[z] >= 0) && dh_count[z] > 0)
      throw std::invalid_argument("spin observable: psi and dH at the same vertex");
    if (psi0_flag[z] && psi_kind[z] >= 0)
      throw std::invalid_argument("spin observable: two psi replacements at one vertex");
    auto& ve = out.vertex[z];
    int par = g.parity(z);
    int sigma = sigma_of_parity(par);
    ve.table.resize(Q * Q);
    if (psi0_flag[z]) {
      double c = U(0) / (kTwoPi * kTwoPi);
      std::fill(ve.table.begin(), ve.table.end(), Complex(c, 0.0));
    } else if (psi_kind[z] >= 0) {
      int p = psi_kind[z];
      for (int a = 0; a < Q; ++a)
        for (int b = 0; b < Q; ++b)
          ve.table[a * Q + b] = std::polar(1.0 / (kTwoPi * kTwoPi),
                                           -sigma * p * kTwoPi * mod_q(a - b, Q) / Q) *
                                t.field[a];
    } else {
      for (int a = 0; a < Q; ++a)
        for (int b = 0; b < Q; ++b)
          ve.table[a * Q + b] = t.gamma[par][mod_q(a - b, Q)] * t.field[a];
    }
    if (dh_count[z] > 0) {
      ve.mode = dh_count[z] == 1 ? VertexMode::DH1 : VertexMode::DH2;
      ve.dtable.resize(Q * Q);
      for (int a = 0; a < Q; ++a)
        for (int b = 0; b < Q; ++b)
          ve.dtable[a * Q + b] = t.dgamma[par][mod_q(a - b, Q)] * t.field[a];
      out.dh_vertices.push_back(z);
    }
  }
  // Scalar factors multiply both tables.
  for (const auto& f : obs.factors) {
    if (f.kind == SpinFactor::Kind::Psi0 || f.kind == SpinFactor::Kind::PsiP ||
        f.kind == SpinFactor::Kind::DH)
      continue;
    auto& ve = out.vertex[f.vertex];
    int sigma = sigma_of_parity(g.parity(f.vertex));
    for (int a = 0; a < Q; ++a)
      for (int b = 0; b < Q; ++b) {
        Complex s;
        switch (f.kind) {
          case SpinFactor::Kind::PowerS1:
            s = std::polar(1.0, sigma * f.exponent * t.theta[a]);
            break;
          case SpinFactor::Kind::PowerS2:
            s = std::polar(1.0, -sigma * f.exponent * t.theta[b]);
            break;
          case SpinFactor::Kind::Cos1:
            s = std::cos(f.exponent * t.theta[a]);
            break;
          case SpinFactor::Kind::Sin1:
            s = std::sin(f.exponent * t.theta[a]);
            break;
          default:
            s = 1.0;
        }
        ve.table[a * Q + b] *= s;
        if (!ve.dtable.empty()) ve.dtable[a * Q + b] *= s;
      }
  }
  return out;
}

bool is_simple_chain(const GraphSpec& g, std::vector<Vertex>& order, bool& cycle) {
  const int n = g.vertex_count();
  if (n < 2) return false;
  int deg1 = 0;
  for (Vertex v = 0; v < n; ++v) {
    if (g.degree(v) > 2 || g.degree(v) == 0) return false;
    if (g.degree(v) == 1) ++deg1;
    for (EdgeId e : g.incident(v))
      if (g.edge(e).other(v) == v) return false;
  }
  if (deg1 != 0 && deg1 != 2) return false;
  cycle = deg1 == 0;
  Vertex start = 0;
  if (!cycle)
    for (Vertex v = 0; v < n; ++v)
      if (g.degree(v) == 1) {
        start = v;
        break;
      }
  order.clear();
  order.push_back(start);
  Vertex prev = kNoVertex;
  Vertex cur = start;
  while (static_cast<int>(order.size()) < n) {
    Vertex next = kNoVertex;
    for (EdgeId e : g.incident(cur)) {
      Vertex w = g.edge(e).other(cur);
      if (w != prev) {
        next = w;
        break;
      }
    }
    if (next == kNoVertex) return false;
    // multi-edges (two parallel edges) would revisit; reject
    if (std::find(order.begin(), order.end(), next) != order.end()) return false;
    order.push_back(next);
    prev = cur;
    cur = next;
  }
  if (cycle) {
    // last must connect back to start by exactly one edge
    if (g.edges_between(order.back(), start).size() != 1) return false;
  }
  // all consecutive pairs single edges
  for (size_t i = 0; i + 1 < order.size(); ++i)
    if (g.edges_between(order[i], order[i + 1]).size() != 1) return false;
  return true;
}

// vec'[s'] = sum_s vec[s] E_sigma(s, s'), separably over the two angle axes.
void apply_edge_operator(const QuadTables& t, int sigma, const std::vector<Complex>& vec,
                         std::vector<Complex>& out, std::vector<Complex>& scratch) {
  const int Q = t.Q;
  // stage 1: over b:  tmp[a][b'] = sum_b vec[a][b] * edge_exp[(-sigma (b - b')) mod Q]
  scratch.assign(Q * Q, 0.0);
  for (int a = 0; a < Q; ++a)
    for (int bp = 0; bp < Q; ++bp) {
      Complex acc = 0.0;
      const Complex* row = vec.data() + a * Q;
      for (int b = 0; b < Q; ++b) acc += row[b] * t.edge_exp[mod_q(-sigma * (b - bp), Q)];
      scratch[a * Q + bp] = acc;
    }
  // stage 2: over a:  out[a'][b'] = sum_a tmp[a][b'] * edge_exp[(sigma (a - a')) mod Q]
  out.assign(Q * Q, 0.0);
  for (int ap = 0; ap < Q; ++ap)
    for (int bp = 0; bp < Q; ++bp) {
      Complex acc = 0.0;
      for (int a = 0; a < Q; ++a) acc += scratch[a * Q + bp] * t.edge_exp[mod_q(sigma * (a - ap), Q)];
      out[ap * Q + bp] = acc;
    }
}

Complex contract_path(const GraphSpec& g, const QuadTables& t, const ObsEval& obs,
                      const std::vector<Vertex>& order) {
  const int Q = t.Q;
  std::vector<Complex> vec = obs.vertex[order[0]].table;
  std::vector<Complex> next, scratch;
  for (size_t i = 0; i + 1 < order.size(); ++i) {
    int sigma = sigma_of_parity(g.parity(order[i]));
    apply_edge_operator(t, sigma, vec, next, scratch);
    const auto& vt = obs.vertex[order[i + 1]].table;
    for (int s = 0; s < Q * Q; ++s) next[s] *= vt[s];
    vec.swap(next);
  }
  ComplexAcc acc;
  for (int s = 0; s < Q * Q; ++s) acc.add(vec[s]);
  return acc.value();
}

Complex contract_cycle(const GraphSpec& g, const QuadTables& t, const ObsEval& obs,
                       const std::vector<Vertex>& order) {
  const int Q = t.Q;
  const int n = static_cast<int>(order.size());
  // Condition on the state of order[0]; propagate a path and close the loop.
  ComplexAcc trace;
  std::vector<Complex> vec(Q * Q), next, scratch;
  const auto& v0 = obs.vertex[order[0]].table;
  int sigma_last = sigma_of_parity(g.parity(order[n - 1]));
  for (int s0 = 0; s0 < Q * Q; ++s0) {
    if (v0[s0] == Complex(0.0, 0.0)) continue;
    std::fill(vec.begin(), vec.end(), Complex(0.0, 0.0));
    vec[s0] = v0[s0];
    for (int i = 0; i + 1 < n; ++i) {
      int sigma = sigma_of_parity(g.parity(order[i]));
      apply_edge_operator(t, sigma, vec, next, scratch);
      const auto& vt = obs.vertex[order[i + 1]].table;
      for (int s = 0; s < Q * Q; ++s) next[s] *= vt[s];
      vec.swap(next);
    }
    // closing edge from order[n-1] back to order[0] in state s0
    int a0 = s0 / Q, b0 = s0 % Q;
    Complex acc = 0.0;
    for (int s = 0; s < Q * Q; ++s) {
      if (vec[s] == Complex(0.0, 0.0)) continue;
      int a = s / Q, b = s % Q;
      acc += vec[s] * t.edge_exp[mod_q(sigma_last * (a - a0), Q)] *
             t.edge_exp[mod_q(-sigma_last * (b - b0), Q)];
    }
    trace.add(acc);
  }
  return trace.value();
}

// Dense tensor-product trapezoid sum; handles DH factors pointwise.
std::vector<Complex> dense_sums(const GraphSpec& g, const ModelParams& params,
                                const QuadTables& t, const std::vector<ObsEval>& obs,
                                long long budget) {
  const int Q = t.Q;
  const int n = g.vertex_count();
  double total_points = std::pow(static_cast<double>(Q) * Q, n);
  if (total_points > static_cast<double>(budget))
    throw BudgetExceeded("spin quadrature: grid budget exceeded");
  bool any_dh = false;
  for (const auto& o : obs)
    if (!o.dh_vertices.empty()) any_dh = true;

  const long long per_chunk = static_cast<long long>(total_points) / (Q * Q);
  // chunk over the state of vertex 0
  auto run_chunk = [&](int chunk) {
    std::vector<ComplexAcc> acc(obs.size());
    std::vector<int> av(n, 0), bv(n, 0);
    av[0] = chunk / Q;
    bv[0] = chunk % Q;
    std::vector<Complex> dh_val(n);
    long long inner = per_chunk;
    std::vector<int> state(n, 0);  // odometer over vertices 1..n-1
    for (long long it = 0; it < inner; ++it) {
      long long rest = it;
      for (int z = 1; z < n; ++z) {
        int s = static_cast<int>(rest % (Q * Q));
        rest /= (Q * Q);
        av[z] = s / Q;
        bv[z] = s % Q;
      }
      Complex edgeprod = 1.0;
      for (EdgeId e = 0; e < g.edge_count(); ++e) {
        Vertex u = g.edge(e).u, v = g.edge(e).v;
        int sigma = sigma_of_parity(g.parity(u));
        edgeprod *= t.edge_exp[mod_q(sigma * (av[u] - av[v]), Q)] *
                    t.edge_exp[mod_q(-sigma * (bv[u] - bv[v]), Q)];
      }
      // dH pointwise values where needed
      if (any_dh) {
        for (Vertex z = 0; z < n; ++z) dh_val[z] = 0.0;
        for (size_t j = 0; j < obs.size(); ++j)
          for (Vertex z : obs[j].dh_vertices) {
            if (dh_val[z] != Complex(0.0, 0.0)) continue;
            int sigma = sigma_of_parity(g.parity(z));
            Complex sum = 0.0;
            for (EdgeId e : g.incident(z)) {
              Vertex y = g.edge(e).other(z);
              sum += t.expdiff[mod_q(sigma * (av[z] - av[y]), Q)];
              sum += t.expdiff[mod_q(-sigma * (bv[z] - bv[y]), Q)];
            }
            Complex val = params.beta * Complex(0.0, sigma) * sum;
            val += -2.0 * params.beta * params.h * params.r *
                   std::sin(params.r * t.theta[av[z]]);
            dh_val[z] = val;  // D_z beta H
          }
      }
      for (size_t j = 0; j < obs.size(); ++j) {
        Complex val = edgeprod;
        for (Vertex z = 0; z < n; ++z) {
          const auto& ve = obs[j].vertex[z];
          int s = av[z] * Q + bv[z];
          switch (ve.mode) {
            case VertexMode::Normal:
              val *= ve.table[s];
              break;
            case VertexMode::DH1:
              val *= -(ve.dtable[s] + ve.table[s] * dh_val[z]);
              break;
            case VertexMode::DH2: {
              if (std::abs(ve.table[s]) < 1e-14)
                throw std::invalid_argument(
                    "spin quadrature: diagonal dH factor needs a nonvanishing gamma");
              Complex b = ve.dtable[s] / ve.table[s] + dh_val[z];
              val *= b * b * ve.table[s];
              break;
            }
          }
        }
        acc[j].add(val);
      }
    }
    std::vector<Complex> out(obs.size());
    for (size_t j = 0; j < obs.size(); ++j) out[j] = acc[j].value();
    return out;
  };

  return parallel_chunks<std::vector<Complex>>(
      Q * Q, std::vector<Complex>(obs.size(), 0.0), run_chunk,
      [&](std::vector<Complex> a, std::vector<Complex> b) {
        if (a.size() != obs.size()) return b;
        for (size_t j = 0; j < obs.size(); ++j) a[j] += b[j];
        return a;
      });
}

}  // namespace

int QuadratureSpec::effective_points(int n_vertices) const {
  if (points > 0) return points;
  return n_vertices <= 2 ? 64 : 16;
}

SpinObservable SpinObservable::power(Vertex x, int component, int p) {
  SpinObservable o;
  o.factors.push_back({component == 1 ? SpinFactor::Kind::PowerS1 : SpinFactor::Kind::PowerS2,
                       x, p});
  return o;
}
SpinObservable SpinObservable::cos1(Vertex x, int ell) {
  return {{{SpinFactor::Kind::Cos1, x, ell}}};
}
SpinObservable SpinObservable::sin1(Vertex x, int ell) {
  return {{{SpinFactor::Kind::Sin1, x, ell}}};
}
SpinObservable SpinObservable::psi0(Vertex x) { return {{{SpinFactor::Kind::Psi0, x, 0}}}; }
SpinObservable SpinObservable::psi_p(Vertex x, int p) {
  return {{{SpinFactor::Kind::PsiP, x, p}}};
}
SpinObservable SpinObservable::dh(Vertex x) { return {{{SpinFactor::Kind::DH, x, 0}}}; }

SpinObservable SpinObservable::operator*(const SpinObservable& other) const {
  SpinObservable o = *this;
  o.factors.insert(o.factors.end(), other.factors.begin(), other.factors.end());
  return o;
}

SpinBatchResult spin_expect_batch(const GraphSpec& g, const ModelParams& params,
                                  const WeightFunction& U,
                                  const std::vector<SpinObservable>& observables,
                                  const QuadratureSpec& q) {
  params.validate();
  if (g.vertex_count() < 1)
    throw std::invalid_argument("spin_expect_batch: empty spin system");
  const int Q = q.effective_points(g.vertex_count());
  if (Q < 8) throw std::invalid_argument("spin_expect_batch: need Q >= 8");
  QuadTables tables(params, U, Q, q.grid_offset);

  std::vector<ObsEval> evals;
  evals.push_back(build_obs_eval(g, params, U, tables, SpinObservable::one()));
  bool any_dh = false;
  for (const auto& obs : observables) {
    evals.push_back(build_obs_eval(g, params, U, tables, obs));
    if (!evals.back().dh_vertices.empty()) any_dh = true;
  }

  std::vector<Vertex> order;
  bool cycle = false;
  bool chain = is_simple_chain(g, order, cycle);
  std::vector<Complex> sums(evals.size());
  std::string method;
  if (chain && !any_dh) {
    method = "transfer";
    for (size_t j = 0; j < evals.size(); ++j)
      sums[j] = cycle ? contract_cycle(g, tables, evals[j], order)
                      : contract_path(g, tables, evals[j], order);
  } else {
    method = "grid";
    sums = dense_sums(g, params, tables, evals, q.budget);
  }

  double cell = std::pow(kTwoPi / Q, 2.0 * g.vertex_count());
  Complex z = sums[0] * cell;
  if (std::abs(z) < 1e-300) throw std::runtime_error("spin_expect_batch: vanishing Z^spin");
  SpinBatchResult out;
  out.z_spin = z.real();
  out.z_imag = z.imag();
  out.points_per_angle = Q;
  out.method = method;
  out.expectations.reserve(observables.size());
  for (size_t j = 1; j < evals.size(); ++j) out.expectations.push_back(sums[j] / sums[0]);
  return out;
}

Complex spin_expect(const GraphSpec& g, const ModelParams& params, const WeightFunction& U,
                    const SpinObservable& obs, const QuadratureSpec& q) {
  return spin_expect_batch(g, params, U, {obs}, q).expectations[0];
}

double z_spin(const GraphSpec& g, const ModelParams& params, const WeightFunction& U,
              const QuadratureSpec& q) {
  return spin_expect_batch(g, params, U, {}, q).z_spin;
}

std::string IdentityReport::to_json() const {
  std::ostringstream os;
  os.precision(17);
  os << "{\"identity\":\"" << identity << "\",\"graph\":\"" << graph << "\",\"params\":\""
     << params << "\",\"lhs\":" << lhs << ",\"rhs\":" << rhs << ",\"abs_err\":" << abs_err
     << ",\"tolerance\":" << tolerance << ",\"pass\":" << (pass ? "true" : "false") << "}";
  return os.str();
}

IdentityReport make_report(const std::string& identity, const std::string& graph,
                           const std::string& params, double lhs, double rhs,
                           double tolerance) {
  IdentityReport r;
  r.identity = identity;
  r.graph = graph;
  r.params = params;
  r.lhs = lhs;
  r.rhs = rhs;
  r.abs_err = std::abs(lhs - rhs);
  r.tolerance = tolerance;
  r.pass = r.abs_err <= tolerance;
  return r;
}

SourceSpec SourceSpec::zero(const GraphSpec& g) {
  SourceSpec s;
  s.u1.assign(g.vertex_count(), 0);
  s.u2.assign(g.vertex_count(), 0);
  return s;
}

int SourceSpec::plus(int component, Vertex x) const {
  int u = component == 1 ? u1[x] : u2[x];
  return std::max(u, 0);
}

int SourceSpec::minus(int component, Vertex x) const {
  int u = component == 1 ? u1[x] : u2[x];
  return std::min(u, 0);
}

std::string params_desc(const ModelParams& p, const WeightFunction& U) {
  std::ostringstream os;
  os << "beta=" << p.beta << ",h=" << p.h << ",r=" << p.r << ",U=" << U.tag();
  return os.str();
}

namespace {
std::string graph_desc(const GraphSpec& g) {
  std::ostringstream os;
  os << "|V|=" << g.vertex_count() << ",|E|=" << g.edge_count();
  return os.str();
}
}  // namespace

IdentityReport verify_conversion(const GraphSpec& g, const ModelParams& params,
                                 const WeightFunction& U, const SourceSpec& src,
                                 const QuadratureSpec& q, double tolerance) {
  SpinObservable obs;
  for (Vertex x = 0; x < g.vertex_count(); ++x) {
    if (src.u1[x] != 0) obs = obs * SpinObservable::power(x, 1, src.u1[x]);
    if (src.u2[x] != 0) obs = obs * SpinObservable::power(x, 2, src.u2[x]);
  }
  Complex lhs = spin_expect(g, params, U, obs, q);

  MultiOccQuery query = MultiOccQuery::closed(g);
  for (Vertex x = 0; x < g.vertex_count(); ++x) {
    query.source[0][x] = src.plus(1, x) - src.minus(2, x);
    query.source[1][x] = src.plus(2, x) - src.minus(1, x);
    query.u_shift[x] = src.minus(1, x) + src.minus(2, x);
  }
  auto numerator = multiocc_sum<double>(g, params, U, query);
  auto z = zpath_exact<double>(g, params, U);
  double rhs = numerator.value / z.value;

  auto rep = make_report("prop-conversion", graph_desc(g), params_desc(params, U), lhs.real(),
                         rhs, tolerance);
  rep.abs_err = std::max(rep.abs_err, std::abs(lhs.imag()));
  rep.pass = rep.abs_err <= tolerance;
  return rep;
}

std::vector<IdentityReport> verify_local_time(const GraphSpec& g, const ModelParams& params,
                                              const WeightFunction& U,
                                              const std::vector<Vertex>& A, int p,
                                              const QuadratureSpec& q, double tolerance) {
  SpinObservable obs0, obsp;
  for (Vertex z : A) {
    obs0 = obs0 * SpinObservable::psi0(z);
    obsp = obsp * SpinObservable::psi_p(z, p);
  }
  auto batch = spin_expect_batch(g, params, U, {obs0, obsp}, q);
  double rhs0 = prob_local_time_zero(g, params, U, A);
  double rhsp = prob_k_equals(g, params, U, A, p);
  std::vector<IdentityReport> out;
  auto r0 = make_report("prop-local-time: P(n=0 on A)", graph_desc(g), params_desc(params, U),
                        batch.expectations[0].real(), rhs0, tolerance);
  r0.abs_err = std::max(r0.abs_err, std::abs(batch.expectations[0].imag()));
  r0.pass = r0.abs_err <= tolerance;
  out.push_back(r0);
  auto rp = make_report("prop-local-time: P(k=p on A)", graph_desc(g), params_desc(params, U),
                        batch.expectations[1].real(), rhsp, tolerance);
  rp.abs_err = std::max(rp.abs_err, std::abs(batch.expectations[1].imag()));
  rp.pass = rp.abs_err <= tolerance;
  out.push_back(rp);
  return out;
}

std::vector<IdentityReport> verify_zero_averages(const GraphSpec& g, const ModelParams& params,
                                                 const WeightFunction& U,
                                                 const QuadratureSpec& q, double tolerance) {
  if (params.h != 0.0)
    throw std::invalid_argument("verify_zero_averages: requires h = 0");
  const Vertex o = g.origin();
  std::vector<std::pair<std::string, SpinObservable>> cases;
  for (int n : {1, 2}) {
    cases.push_back({"<(S_o^1)^" + std::to_string(n) + ">", SpinObservable::power(o, 1, n)});
    cases.push_back({"<(conj S_o^1)^" + std::to_string(n) + ">",
                     SpinObservable::power(o, 1, -n)});
    cases.push_back({"<(S_o^2)^" + std::to_string(n) + ">", SpinObservable::power(o, 2, n)});
  }
  // one odd-parity pair and, when present, one same-parity pair
  Vertex odd_partner = kNoVertex, even_partner = kNoVertex;
  for (Vertex v = 0; v < g.vertex_count(); ++v) {
    if (v == o) continue;
    if (g.parity(v) != g.parity(o) && odd_partner == kNoVertex) odd_partner = v;
    if (g.parity(v) == g.parity(o) && even_partner == kNoVertex) even_partner = v;
  }
  if (odd_partner != kNoVertex)
    cases.push_back({"<conj(S_o^1) S_y^1>, opposite parity",
                     SpinObservable::power(o, 1, -1) * SpinObservable::power(odd_partner, 1, 1)});
  if (even_partner != kNoVertex) {
    cases.push_back({"<S_o^1 S_y^1>, same parity",
                     SpinObservable::power(o, 1, 1) * SpinObservable::power(even_partner, 1, 1)});
    cases.push_back(
        {"<(S_o^1 S_y^1)^2>, same parity",
         SpinObservable::power(o, 1, 2) * SpinObservable::power(even_partner, 1, 2)});
  }
  std::vector<SpinObservable> obs;
  for (auto& c : cases) obs.push_back(c.second);
  auto batch = spin_expect_batch(g, params, U, obs, q);
  std::vector<IdentityReport> out;
  for (size_t i = 0; i < cases.size(); ++i) {
    auto rep = make_report("prop-zero-average: " + cases[i].first, graph_desc(g),
                           params_desc(params, U), std::abs(batch.expectations[i]), 0.0,
                           tolerance);
    out.push_back(rep);
  }
  return out;
}

double magnetisation(const GraphSpec& g, const ModelParams& params, const WeightFunction& U,
                     const QuadratureSpec& q) {
  return spin_expect(g, params, U, SpinObservable::cos1(g.origin(), params.r), q).real();
}

double p_neighbour(const GraphSpec& g, const ModelParams& params, const WeightFunction& U,
                   Vertex z, const QuadratureSpec& q) {
  const Vertex o = g.origin();
  auto batch = spin_expect_batch(
      g, params, U,
      {SpinObservable::power(o, 1, 1) * SpinObservable::power(z, 1, 1),
       SpinObservable::power(o, 2, 1) * SpinObservable::power(z, 2, 1)},
      q);
  return params.beta * (batch.expectations[0].real() + batch.expectations[1].real());
}

std::vector<IdentityReport> verify_AB_identities(const GraphSpec& g, const ModelParams& params,
                                                 const WeightFunction& U,
                                                 const QuadratureSpec& q, double tolerance) {
  const Vertex o = g.origin();
  Vertex y = g.edge(g.incident(o).front()).other(o);  // a neighbour of the origin
  double m = magnetisation(g, params, U, q);
  double p_y = p_neighbour(g, params, U, y, q);

  std::vector<SpinObservable> obs = {
      SpinObservable::sin1(o, params.r) * SpinObservable::dh(o),
      SpinObservable::sin1(o, params.r) * SpinObservable::dh(y),
      SpinObservable::dh(o) * SpinObservable::dh(y),
  };
  // The diagonal <B_o B_o> integrand divides by gamma; only evaluate it for
  // weights whose gamma never vanishes on the grid (single-term series).
  int positive_terms = 0;
  for (int n = 0; n <= U.support_bound(); ++n)
    if (U(n) > 0.0) ++positive_terms;
  bool diagonal_ok = positive_terms == 1;
  if (diagonal_ok) obs.push_back(SpinObservable::dh(o) * SpinObservable::dh(o));

  auto batch = spin_expect_batch(g, params, U, obs, q);
  std::vector<IdentityReport> out;
  auto push = [&](const std::string& name, Complex lhs, double rhs) {
    auto rep = make_report(name, graph_desc(g), params_desc(params, U), lhs.real(), rhs,
                           tolerance);
    rep.abs_err = std::max(rep.abs_err, std::abs(lhs.imag()));
    rep.pass = rep.abs_err <= tolerance;
    out.push_back(rep);
  };
  push("lemma-identities: <A_o B_o> = r m", batch.expectations[0], params.r * m);
  push("lemma-identities: <A_o B_y> = 0 off-diagonal", batch.expectations[1], 0.0);
  push("lemma-identities: <B_o B_y> = -p_y for y ~ o", batch.expectations[2],
       -static_cast<double>(g.edges_between(o, y).size()) * p_y);
  if (diagonal_ok) {
    double rhs = 0.0;
    for (EdgeId e : g.incident(o)) rhs += p_neighbour(g, params, U, g.edge(e).other(o), q);
    rhs += 2.0 * params.beta * params.h * params.r * params.r * m;
    push("lemma-identities: <B_o B_o> diagonal", batch.expectations[3], rhs);
  }
  return out;
}

double bogoliubov_BB(const GraphSpec& g, const ModelParams& params, const WeightFunction& U,
                     const std::vector<double>& k_dot_z, const QuadratureSpec& q) {
  const Vertex o = g.origin();
  double m = magnetisation(g, params, U, q);
  double sum = 0.0;
  size_t i = 0;
  for (EdgeId e : g.incident(o)) {
    Vertex z = g.edge(e).other(o);
    double kz = i < k_dot_z.size() ? k_dot_z[i] : 0.0;
    sum += p_neighbour(g, params, U, z, q) * (1.0 - std::cos(kz));
    ++i;
  }
  return sum + 2.0 * params.beta * params.h * params.r * params.r * m;
}

MagnExpansionReport verify_magn_expansion(const GraphSpec& g, double beta, int r,
                                          const WeightFunction& U, double h_tilde,
                                          const QuadratureSpec& q, double tolerance) {
  ModelParams with_field;
  with_field.beta = beta;
  with_field.r = r;
  with_field.h = h_tilde / g.vertex_count();
  double m = magnetisation(g, with_field, U, q);

  ModelParams no_field = with_field;
  no_field.h = 0.0;
  const Vertex o = g.origin();
  std::vector<SpinObservable> obs;
  for (Vertex x = 0; x < g.vertex_count(); ++x)
    obs.push_back(SpinObservable::cos1(o, r) * SpinObservable::cos1(x, r));
  auto batch = spin_expect_batch(g, no_field, U, obs, q);
  double sum = 0.0;
  for (const auto& e : batch.expectations) sum += e.real();
  double rhs = beta * h_tilde / g.vertex_count() * sum;

  MagnExpansionReport out;
  out.inequality = make_report("magnetisation-expansion lower bound", graph_desc(g),
                               params_desc(with_field, U), m, rhs, tolerance);
  out.inequality.pass = m >= rhs - tolerance;
  out.slope = h_tilde > 0.0 ? m / h_tilde : 0.0;
  return out;
}

}  // namespace loopforge
