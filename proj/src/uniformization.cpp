#include "ricci/uniformization.hpp"

#include <cmath>
#include <sstream>

#include "ricci/errors.hpp"

namespace ricci {

namespace {

// ln(1 + e^t) without overflow.
double softplus(double t) { return std::max(t, 0.0) + std::log1p(std::exp(-std::abs(t))); }

// 1 / (1 + e^{-t})
double logistic(double t) {
  if (t >= 0.0) return 1.0 / (1.0 + std::exp(-t));
  const double e = std::exp(t);
  return e / (1.0 + e);
}

void check_potentials(const Graph& g, const Eigen::VectorXd& pot) {
  if (static_cast<std::size_t>(pot.size()) != g.vertex_count())
    throw ValidationError("potential vector has the wrong length");
  if (!pot.allFinite()) throw ValidationError("potentials must be finite");
}

// Beyond this potential gap across an edge the logistic is 1 to machine
// precision, so H is numerically flat there and any "solution" is an artifact
// of the iterates running off to infinity.
constexpr double kSaturatedGap = 35.0;

double max_edge_gap(const Graph& g, const Eigen::VectorXd& pot) {
  double gap = 0.0;
  for (const auto& e : g.edges())
    gap = std::max(gap, std::abs(pot(static_cast<Eigen::Index>(e.u)) - pot(static_cast<Eigen::Index>(e.v))));
  return gap;
}

double ratio_edges_per_vertex(const Graph& g) {
  return static_cast<double>(g.edge_count()) / static_cast<double>(g.vertex_count());
}

}  // namespace

HValue evaluate_H(const Graph& g, const Eigen::VectorXd& pot) {
  check_potentials(g, pot);
  const double gamma = ratio_edges_per_vertex(g);
  const auto n = static_cast<Eigen::Index>(g.vertex_count());
  HValue out{0.0, Eigen::VectorXd::Constant(n, gamma)};
  out.value = gamma * pot.sum();
  for (const auto& e : g.edges()) {
    const auto u = static_cast<Eigen::Index>(e.u);
    const auto v = static_cast<Eigen::Index>(e.v);
    const double t = pot(v) - pot(u);
    // Both orientations of the double sum, and the degree term of each end.
    out.value += 0.5 * (softplus(t) + softplus(-t)) - 0.5 * (pot(u) + pot(v));
    // d/dg(u): -1/(1 + e^{g(u) - g(v)}) = -logistic(g(v) - g(u))
    const double su = logistic(t);
    out.gradient(u) -= su;
    out.gradient(v) -= 1.0 - su;
  }
  return out;
}

Eigen::MatrixXd hessian_H(const Graph& g, const Eigen::VectorXd& pot) {
  check_potentials(g, pot);
  const auto n = static_cast<Eigen::Index>(g.vertex_count());
  Eigen::MatrixXd h = Eigen::MatrixXd::Zero(n, n);
  for (const auto& e : g.edges()) {
    const auto u = static_cast<Eigen::Index>(e.u);
    const auto v = static_cast<Eigen::Index>(e.v);
    const double s = logistic(pot(u) - pot(v));
    const double c = s * (1.0 - s);
    h(u, u) += c;
    h(v, v) += c;
    h(u, v) -= c;
    h(v, u) -= c;
  }
  return h;
}

UniformizationResult solve_constant_weights(const Graph& g, const UniformizeOptions& opts) {
  if (!girth_at_least(g, 6))
    throw NotApplicable("constant-curvature weights are only solved for girth >= 6");

  const auto n = static_cast<Eigen::Index>(g.vertex_count());
  const Eigen::MatrixXd ones = Eigen::MatrixXd::Constant(n, n, 1.0 / static_cast<double>(n));
  Eigen::VectorXd pot = Eigen::VectorXd::Zero(n);
  HValue current = evaluate_H(g, pot);
  double last_step = 0.0;
  std::size_t iter = 0;

  for (;; ++iter) {
    const double grad_norm = current.gradient.lpNorm<Eigen::Infinity>();
    if (grad_norm <= opts.tol && last_step <= opts.step_tol) break;
    if (iter >= opts.max_iter) {
      std::ostringstream msg;
      msg << "Newton iteration did not converge in " << opts.max_iter
          << " iterations (|grad H|_inf = " << grad_norm << ", last step " << last_step
          << ", potential spread " << pot.maxCoeff() - pot.minCoeff() << ")";
      throw DivergenceError(msg.str());
    }
    // Adding the all-ones projector makes the system definite without
    // changing the solution on the zero-mean subspace.
    const Eigen::MatrixXd system = hessian_H(g, pot) + ones;
    Eigen::VectorXd step = system.ldlt().solve(-current.gradient);
    step.array() -= step.mean();
    if (!step.allFinite()) throw DivergenceError("Newton system became singular");

    double scale = 1.0;
    while (true) {
      const Eigen::VectorXd trial = pot + scale * step;
      HValue next = evaluate_H(g, trial);
      if (next.value < current.value ||
          next.gradient.lpNorm<Eigen::Infinity>() < grad_norm) {
        pot = trial;
        current = std::move(next);
        break;
      }
      scale *= 0.5;
      if (scale < 1e-12) throw DivergenceError("Newton line search could not decrease H");
    }
    last_step = scale * step.lpNorm<Eigen::Infinity>();
    if (max_edge_gap(g, pot) > kSaturatedGap) {
      std::ostringstream msg;
      msg << "Newton iterates diverged after " << iter + 1 << " iterations (potential gap across an edge exceeds "
          << kSaturatedGap << ")";
      throw DivergenceError(msg.str());
    }
  }

  UniformizationResult res;
  res.iterations = iter;
  res.gradient_norm = current.gradient.lpNorm<Eigen::Infinity>();
  res.g_star = pot.array() - pot.mean();
  res.m_star = res.g_star.array().exp();
  const double v_over_e = 1.0 / ratio_edges_per_vertex(g);
  std::vector<double> w(g.edge_count());
  for (EdgeIndex i = 0; i < g.edge_count(); ++i) {
    const double mx = res.m_star(static_cast<Eigen::Index>(g.edge(i).u));
    const double my = res.m_star(static_cast<Eigen::Index>(g.edge(i).v));
    w[i] = v_over_e * mx * my / (mx + my);
  }
  res.weights = WeightVector(std::move(w));

  res.vertex_residual = evaluate_H(g, res.g_star).gradient.lpNorm<Eigen::Infinity>();
  const auto mass = vertex_masses(g, res.weights);
  for (EdgeIndex i = 0; i < g.edge_count(); ++i) {
    const auto [x, y] = g.edge(i);
    const double lhs = res.weights[i] * (1.0 / mass[x] + 1.0 / mass[y]);
    res.edge_residual = std::max(res.edge_residual, std::abs(lhs - v_over_e));
  }
  return res;
}

ConvergenceReport attainability_probe(const Graph& g, const PrescribedCurvature& target,
                                      const IntegratorOptions& opts) {
  if (!girth_at_least(g, 6)) throw NotApplicable("attainability probe requires girth >= 6");
  if (target.size() != g.edge_count()) throw ValidationError("target has the wrong length");
  if (!is_consistent(g, target, 1e-9))
    throw ConsistencyError("prescribed curvature must sum to 2(|V| - |E|)");

  const auto traj = integrate(g, WeightVector::constant(g.edge_count()), target, opts);
  auto report = convergence_report(traj, target, opts.tol);
  if (report.converged) {
    const auto check = curvature_vector(g, *report.limit_weights, CurvatureMethod::closed_form);
    for (std::size_t i = 0; i < check.size(); ++i) {
      if (std::abs(check[i] - target.values[i]) > 1e-6) {
        report.converged = false;
        report.limit_weights.reset();
        report.limit_curvature.reset();
        break;
      }
    }
  }
  return report;
}

}  // namespace ricci
