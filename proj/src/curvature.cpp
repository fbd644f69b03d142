#include "ricci/curvature.hpp"

#include <map>
#include <string>

#include "ricci/errors.hpp"
#include "ricci/lp_solver.hpp"

namespace ricci {

namespace {

double closed_form_unchecked(const Graph& g, const WeightVector& w, const std::vector<double>& mass,
                             EdgeIndex i) {
  const auto [x, y] = g.edge(i);
  return 2.0 * w[i] * (1.0 / mass[x] + 1.0 / mass[y]) - 2.0;
}

void require_girth6(const Graph& g, const char* what) {
  if (!girth_at_least(g, 6))
    throw GirthError(std::string(what) + " requires girth >= 6 (girth is " +
                     std::to_string(*girth(g)) + ")");
}

void check_edge(const Graph& g, EdgeIndex i) {
  if (i >= g.edge_count()) throw ValidationError("edge index " + std::to_string(i) + " out of range");
}

double lipschitz_lp_unchecked(const Graph& g, const WeightVector& w, const std::vector<double>& mass,
                              EdgeIndex i) {
  const std::size_t n = g.vertex_count();
  const auto [x, y] = g.edge(i);

  lp::LinearProgram prog;
  prog.objective.assign(n, 0.0);
  // Lap f(v) = sum_z (w_vz / m(v)) f(z) - f(v)
  const auto add_laplacian = [&](Vertex v, double sign) {
    for (const auto& inc : g.neighbors(v)) prog.objective[inc.neighbor] += sign * w[inc.edge] / mass[v];
    prog.objective[v] -= sign;
  };
  add_laplacian(x, 1.0);
  add_laplacian(y, -1.0);

  // |f(u) - f(v)| <= 1 is enough: hop distance is the path metric of unit edges.
  for (const auto& e : g.edges()) {
    lp::Constraint c;
    c.coefficients.assign(n, 0.0);
    c.coefficients[e.u] = 1.0;
    c.coefficients[e.v] = -1.0;
    c.relation = lp::Relation::less_equal;
    c.bound = 1.0;
    prog.constraints.push_back(c);
    c.coefficients[e.u] = -1.0;
    c.coefficients[e.v] = 1.0;
    prog.constraints.push_back(std::move(c));
  }
  prog.bounds.assign(n, lp::VariableBounds::free());
  prog.bounds[x] = {0.0, 0.0};
  prog.bounds[y] = {1.0, 1.0};

  const auto sol = lp::solve(prog);
  if (sol.status != lp::Status::optimal)
    throw NumericalFailure("curvature LP for edge " + std::to_string(i) + " was not solved to optimality");
  return sol.value;
}

double alpha_oracle_unchecked(const Graph& g, const WeightVector& w, const std::vector<double>& mass,
                              EdgeIndex i, double alpha) {
  const auto [x, y] = g.edge(i);
  const auto measure = [&](Vertex c) {
    std::map<Vertex, double> mu;
    mu[c] += alpha;
    for (const auto& inc : g.neighbors(c)) mu[inc.neighbor] += (1.0 - alpha) * w[inc.edge] / mass[c];
    return std::vector<std::pair<Vertex, double>>(mu.begin(), mu.end());
  };
  const auto src = measure(x);
  const auto dst = measure(y);
  const std::size_t ns = src.size();
  const std::size_t nd = dst.size();

  lp::LinearProgram prog;
  prog.objective.resize(ns * nd);
  for (std::size_t a = 0; a < ns; ++a) {
    const auto dist = hop_distances_from(g, src[a].first);
    for (std::size_t b = 0; b < nd; ++b) prog.objective[a * nd + b] = static_cast<double>(dist[dst[b].first]);
  }
  for (std::size_t a = 0; a < ns; ++a) {
    lp::Constraint c;
    c.coefficients.assign(ns * nd, 0.0);
    for (std::size_t b = 0; b < nd; ++b) c.coefficients[a * nd + b] = 1.0;
    c.relation = lp::Relation::equal;
    c.bound = src[a].second;
    prog.constraints.push_back(std::move(c));
  }
  for (std::size_t b = 0; b < nd; ++b) {
    lp::Constraint c;
    c.coefficients.assign(ns * nd, 0.0);
    for (std::size_t a = 0; a < ns; ++a) c.coefficients[a * nd + b] = 1.0;
    c.relation = lp::Relation::equal;
    c.bound = dst[b].second;
    prog.constraints.push_back(std::move(c));
  }
  const auto sol = lp::solve(prog);
  if (sol.status != lp::Status::optimal)
    throw NumericalFailure("transport LP for edge " + std::to_string(i) + " was not solved to optimality");
  // d(x, y) = 1 for an edge.
  return (1.0 - sol.value) / (1.0 - alpha);
}

}  // namespace

std::string_view to_string(CurvatureMethod m) {
  switch (m) {
    case CurvatureMethod::automatic: return "auto";
    case CurvatureMethod::closed_form: return "closed_form";
    case CurvatureMethod::lipschitz_lp: return "lipschitz_lp";
    case CurvatureMethod::alpha_oracle: return "alpha_oracle";
  }
  return "unknown";
}

double curvature_closed_form(const Graph& g, const WeightVector& w, EdgeIndex i) {
  check_edge(g, i);
  require_girth6(g, "closed-form curvature");
  return closed_form_unchecked(g, w, vertex_masses(g, w), i);
}

double curvature_lp(const Graph& g, const WeightVector& w, EdgeIndex i) {
  check_edge(g, i);
  return lipschitz_lp_unchecked(g, w, vertex_masses(g, w), i);
}

double curvature_alpha_oracle(const Graph& g, const WeightVector& w, EdgeIndex i, double alpha) {
  check_edge(g, i);
  if (!(alpha > 0.0 && alpha < 1.0)) throw ValidationError("alpha must lie in (0, 1)");
  return alpha_oracle_unchecked(g, w, vertex_masses(g, w), i, alpha);
}

CurvatureEvaluator::CurvatureEvaluator(const Graph& g, CurvatureMethod selector, double alpha)
    : g_(&g), method_(selector), alpha_(alpha), girth6_(girth_at_least(g, 6)) {
  if (method_ == CurvatureMethod::automatic)
    method_ = girth6_ ? CurvatureMethod::closed_form : CurvatureMethod::lipschitz_lp;
  if (method_ == CurvatureMethod::closed_form) require_girth6(g, "closed-form curvature");
  if (method_ == CurvatureMethod::alpha_oracle && !(alpha_ > 0.0 && alpha_ < 1.0))
    throw ValidationError("alpha must lie in (0, 1)");
}

CurvatureVector CurvatureEvaluator::operator()(const WeightVector& w) const {
  const auto mass = vertex_masses(*g_, w);
  CurvatureVector out;
  out.method = method_;
  out.values.resize(g_->edge_count());
  for (EdgeIndex i = 0; i < g_->edge_count(); ++i) {
    switch (method_) {
      case CurvatureMethod::closed_form:
        out.values[i] = closed_form_unchecked(*g_, w, mass, i);
        break;
      case CurvatureMethod::lipschitz_lp:
        out.values[i] = lipschitz_lp_unchecked(*g_, w, mass, i);
        break;
      case CurvatureMethod::alpha_oracle:
        out.values[i] = alpha_oracle_unchecked(*g_, w, mass, i, alpha_);
        break;
      case CurvatureMethod::automatic:
        break;
    }
  }
  return out;
}

CurvatureVector curvature_vector(const Graph& g, const WeightVector& w, CurvatureMethod method,
                                 double alpha) {
  return CurvatureEvaluator(g, method, alpha)(w);
}

CurvatureJacobian curvature_jacobian(const Graph& g, const WeightVector& w) {
  require_girth6(g, "curvature Jacobian");
  const auto mass = vertex_masses(g, w);
  const auto n = static_cast<Eigen::Index>(g.edge_count());
  CurvatureJacobian jac{Eigen::MatrixXd::Zero(n, n)};
  for (EdgeIndex i = 0; i < g.edge_count(); ++i) {
    const auto [x, y] = g.edge(i);
    for (Vertex end : {x, y}) {
      const double m2 = mass[end] * mass[end];
      for (const auto& inc : g.neighbors(end)) {
        if (inc.edge == i) continue;
        jac.matrix(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(inc.edge)) =
            -2.0 * w[i] * w[inc.edge] / m2;
      }
    }
    const auto row = static_cast<Eigen::Index>(i);
    jac.matrix(row, row) = -jac.matrix.row(row).sum();
  }
  return jac;
}

}  // namespace ricci
