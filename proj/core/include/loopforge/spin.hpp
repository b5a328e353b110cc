#pragma once

#include <complex>
#include <string>
#include <vector>

#include "loopforge/exact.hpp"
#include "loopforge/graph.hpp"
#include "loopforge/weights.hpp"

namespace loopforge {

using Complex = std::complex<double>;

struct QuadratureSpec {
  int points = 0;            // points per angle; 0 = auto (64 for |V|<=2, 12 for |V|<=4)
  double grid_offset = 0.0;  // common shift of every angle (rotation tests)
  long long budget = 3000000000LL;  // grid-point budget for the dense path
  double beta_certified = 0.75;     // accuracy guarantee holds for beta <= this

  int effective_points(int n_vertices) const;
};

/// One multiplicative factor of a spin observable.
struct SpinFactor {
  enum class Kind {
    PowerS1,   // (S_x^1)^exponent, negative exponent = conjugate power
    PowerS2,   // (S_x^2)^exponent
    Cos1,      // cos(exponent * s_x^1)
    Sin1,      // sin(exponent * s_x^1)
    Psi0,      // psi_x: U(0) e^{-2 beta h cos(r s_x^1)} / ((2pi)^2 gamma_x)
    PsiP,      // psi_{p,x}: (conj(S_x^1 S_x^2))^p / ((2pi)^2 gamma_x)
    DH,        // B_x = -(d/ds1 - d/ds2) log(gamma_x e^{beta H})
  };
  Kind kind;
  Vertex vertex;
  int exponent = 1;
};

struct SpinObservable {
  std::vector<SpinFactor> factors;

  static SpinObservable one() { return {}; }
  static SpinObservable power(Vertex x, int component, int p);
  static SpinObservable cos1(Vertex x, int ell);
  static SpinObservable sin1(Vertex x, int ell);
  static SpinObservable psi0(Vertex x);
  static SpinObservable psi_p(Vertex x, int p);
  static SpinObservable dh(Vertex x);
  SpinObservable operator*(const SpinObservable& other) const;
};

struct SpinBatchResult {
  double z_spin = 0.0;  // real part; imaginary part must vanish
  double z_imag = 0.0;
  std::vector<Complex> expectations;
  int points_per_angle = 0;
  std::string method;  // "transfer" or "grid"
};

/// Tensor-product trapezoid quadrature of the complex spin measure. All
/// expectations share one evaluation of Z^spin. Uses a transfer-matrix
/// contraction on paths and cycles when no DH factor is present, and the
/// dense grid otherwise; both evaluate the identical trapezoid sum.
SpinBatchResult spin_expect_batch(const GraphSpec& g, const ModelParams& params,
                                  const WeightFunction& U,
                                  const std::vector<SpinObservable>& observables,
                                  const QuadratureSpec& q = {});

Complex spin_expect(const GraphSpec& g, const ModelParams& params, const WeightFunction& U,
                    const SpinObservable& obs, const QuadratureSpec& q = {});

double z_spin(const GraphSpec& g, const ModelParams& params, const WeightFunction& U,
              const QuadratureSpec& q = {});

/// Verification report for one identity; serialized as
/// {identity, graph, params, lhs, rhs, abs_err, tolerance, pass}.
struct IdentityReport {
  std::string identity;
  std::string graph;
  std::string params;
  double lhs = 0.0;
  double rhs = 0.0;
  double abs_err = 0.0;
  double tolerance = 0.0;
  bool pass = false;

  std::string to_json() const;
};

IdentityReport make_report(const std::string& identity, const std::string& graph,
                           const std::string& params, double lhs, double rhs, double tolerance);

/// Integer source exponents u^1, u^2 per vertex for Prop.-conversion checks.
struct SourceSpec {
  std::vector<int> u1, u2;

  static SourceSpec zero(const GraphSpec& g);
  int plus(int component, Vertex x) const;
  int minus(int component, Vertex x) const;
};

std::string params_desc(const ModelParams& p, const WeightFunction& U);

/// <prod (S^1)^{u1} (S^2)^{u2}> against the constrained multi-occupancy sum.
IdentityReport verify_conversion(const GraphSpec& g, const ModelParams& params,
                                 const WeightFunction& U, const SourceSpec& src,
                                 const QuadratureSpec& q = {}, double tolerance = 1e-8);

/// <prod psi_z> = P(n_z = 0) and <prod psi_{p,z}> = P(k_z = p) over z in A.
std::vector<IdentityReport> verify_local_time(const GraphSpec& g, const ModelParams& params,
                                              const WeightFunction& U,
                                              const std::vector<Vertex>& A, int p,
                                              const QuadratureSpec& q = {},
                                              double tolerance = 1e-8);

/// Averages that vanish identically at h = 0.
std::vector<IdentityReport> verify_zero_averages(const GraphSpec& g, const ModelParams& params,
                                                 const WeightFunction& U,
                                                 const QuadratureSpec& q = {},
                                                 double tolerance = 1e-10);

/// m = <cos(r s_o^1)>.
double magnetisation(const GraphSpec& g, const ModelParams& params, const WeightFunction& U,
                     const QuadratureSpec& q = {});

/// p_z = beta (<e^{i(s_o^1 - s_z^1)}> + <e^{-i(s_o^2 - s_z^2)}>) for z ~ o.
double p_neighbour(const GraphSpec& g, const ModelParams& params, const WeightFunction& U,
                   Vertex z, const QuadratureSpec& q = {});

/// The A/B identities: <A_o B_y> = r m delta_{oy}, <B_o B_y> = -p_y for
/// neighbours, and on gamma-nonvanishing weights the diagonal
/// <B_o B_o> = sum_z p_z + 2 beta h r^2 m.
std::vector<IdentityReport> verify_AB_identities(const GraphSpec& g, const ModelParams& params,
                                                 const WeightFunction& U,
                                                 const QuadratureSpec& q = {},
                                                 double tolerance = 1e-8);

/// <B o B>(k) assembled from the identities; k_dot_z lists k . z per
/// neighbour z of the origin.
double bogoliubov_BB(const GraphSpec& g, const ModelParams& params, const WeightFunction& U,
                     const std::vector<double>& k_dot_z, const QuadratureSpec& q = {});

struct MagnExpansionReport {
  IdentityReport inequality;  // m >= (beta h_tilde / |V|) sum_x <cos cos>_{h=0}
  double slope;               // m / h_tilde, recorded only
};

MagnExpansionReport verify_magn_expansion(const GraphSpec& g, double beta, int r,
                                          const WeightFunction& U, double h_tilde,
                                          const QuadratureSpec& q = {},
                                          double tolerance = 1e-9);

}  // namespace loopforge
