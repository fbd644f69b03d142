#pragma once

#include <optional>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "ricci/flow.hpp"
#include "ricci/graph.hpp"

namespace ricci {

// ---------------------------------------------------------------------------
// Density condition: constant-curvature weights exist iff every proper,
// non-empty vertex subset is strictly sparser than the whole graph,
//   max |E(Ω)| / |Ω|  <  |E| / |V|.
// All comparisons are exact.
// ---------------------------------------------------------------------------

enum class DensityMethod { brute_force, max_flow };
std::string_view to_string(DensityMethod m);

struct DensityCertificate {
  bool satisfied = false;
  Rational global_density;
  Rational max_proper_density;
  // Present iff !satisfied; its density equals max_proper_density.
  std::optional<VertexSubset> witness;
  DensityMethod method = DensityMethod::brute_force;
};

inline constexpr std::size_t kBruteForceVertexLimit = 24;

// Enumerates all 2^|V| - 2 proper subsets. Ties are broken towards the
// smallest bitmask. Throws SizeError above kBruteForceVertexLimit vertices.
DensityCertificate check_condition_brute(const Graph& g);

// Densest-subgraph max-flow (Goldberg's construction, integer capacities)
// on G - v for every vertex v, iterated to the exact optimum ratio.
DensityCertificate check_condition_flow(const Graph& g);

// Alias for the flow checker.
DensityCertificate check_condition(const Graph& g);

// ---------------------------------------------------------------------------
// Graphs whose constant-curvature weights are themselves constant.
// ---------------------------------------------------------------------------

struct ConstantWeightClass {
  enum class Kind { regular, semi_regular_bipartite, neither };
  Kind kind = Kind::neither;
  std::size_t a = 0;  // regular: the degree; bipartite: degree of vertex 0's side
  std::size_t b = 0;  // bipartite: degree of the other side

  bool operator==(const ConstantWeightClass&) const = default;
};

ConstantWeightClass classify_constant_weight(const Graph& g);
std::string describe(const ConstantWeightClass& c);

// ---------------------------------------------------------------------------
// Convex potential functional
//   H(g) = (|E|/|V|) sum g + 1/2 sum_u sum_{v~u} psi(g(v) - g(u)) - 1/2 sum d(z) g(z)
// with psi(t) = ln(1 + e^t). Its critical points with sum g = 0 give masses
// m = e^g solving sum_{y~x} m(y)/(m(x)+m(y)) = |E|/|V|.
// ---------------------------------------------------------------------------

struct HValue {
  double value = 0.0;
  Eigen::VectorXd gradient;
};

HValue evaluate_H(const Graph& g, const Eigen::VectorXd& potentials);
Eigen::MatrixXd hessian_H(const Graph& g, const Eigen::VectorXd& potentials);

struct UniformizeOptions {
  double tol = 1e-10;       // on ||grad H||_inf
  double step_tol = 1e-6;   // last Newton step, ||s||_inf
  std::size_t max_iter = 100;
};

struct UniformizationResult {
  Eigen::VectorXd g_star;  // zero mean
  Eigen::VectorXd m_star;  // e^{g_star}
  WeightVector weights;    // (|V|/|E|) m(x) m(y) / (m(x) + m(y))
  double gradient_norm = 0.0;
  double vertex_residual = 0.0;  // max_x |sum_{y~x} 1/(1+e^{g(x)-g(y)}) - |E|/|V||
  double edge_residual = 0.0;    // max_e |w_e (1/m(x) + 1/m(y)) - |V|/|E||
  std::size_t iterations = 0;
};

// Damped Newton on the zero-mean subspace, starting at g = 0. Success needs
// both the gradient and the Newton step to be small; when the condition
// fails H has no minimizer and the iterates drift off, ending in
// DivergenceError either at max_iter or once the potential gap across some
// edge is too large for the logistic to resolve. Throws NotApplicable if girth < 6.
UniformizationResult solve_constant_weights(const Graph& g, const UniformizeOptions& opts = {});

// Runs the flow from unit weights towards a target. A converged report has
// its limit curvature re-verified against the target to 1e-6; a
// non-converged one means "not attained within t_max", which proves nothing.
// Throws NotApplicable if girth < 6 and ConsistencyError unless
// sum(target) = 2(|V| - |E|) within 1e-9.
ConvergenceReport attainability_probe(const Graph& g, const PrescribedCurvature& target,
                                      const IntegratorOptions& opts = {});

}  // namespace ricci
