#pragma once

#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "ricci/graph.hpp"

namespace ricci {

enum class CurvatureMethod {
  automatic,     // closed_form when girth >= 6, otherwise lipschitz_lp
  closed_form,   // 2 w_e (1/m(x) + 1/m(y)) - 2, girth >= 6 only
  lipschitz_lp,  // inf of the Laplacian gradient over 1-Lipschitz potentials
  alpha_oracle,  // idleness-alpha transport distance, test oracle
};

std::string_view to_string(CurvatureMethod m);

struct CurvatureVector {
  std::vector<double> values;
  CurvatureMethod method = CurvatureMethod::closed_form;

  std::size_t size() const noexcept { return values.size(); }
  double operator[](EdgeIndex i) const { return values[i]; }
};

// J(i, j) = d kappa_i / d log(w_j). Symmetric, PSD, rows sum to zero.
struct CurvatureJacobian {
  Eigen::MatrixXd matrix;
};

inline constexpr double kDefaultAlpha = 0.99;

// Throws GirthError if girth(g) < 6.
double curvature_closed_form(const Graph& g, const WeightVector& w, EdgeIndex i);

// Limit-free form as a linear program in f(z), z in V:
//   minimize  Lap f(x) - Lap f(y)
//   s.t.      |f(u) - f(v)| <= 1 for every edge, f(y) - f(x) = 1, f(x) = 0.
// Valid on any graph. Throws NumericalFailure from the simplex.
double curvature_lp(const Graph& g, const WeightVector& w, EdgeIndex i);

// (1/(1-alpha)) (1 - W(m_x^alpha, m_y^alpha)) with W from a transport LP
// under hop distance. alpha must lie in (0, 1).
double curvature_alpha_oracle(const Graph& g, const WeightVector& w, EdgeIndex i,
                              double alpha = kDefaultAlpha);

// Computes all edges with one method. Caches the girth check, so prefer it
// over repeated free-function calls inside hot loops (the flow integrator).
class CurvatureEvaluator {
 public:
  explicit CurvatureEvaluator(const Graph& g, CurvatureMethod selector = CurvatureMethod::automatic,
                              double alpha = kDefaultAlpha);

  CurvatureVector operator()(const WeightVector& w) const;
  CurvatureMethod method() const noexcept { return method_; }
  bool girth_at_least_6() const noexcept { return girth6_; }
  const Graph& graph() const noexcept { return *g_; }

 private:
  const Graph* g_;
  CurvatureMethod method_;
  double alpha_;
  bool girth6_;
};

CurvatureVector curvature_vector(const Graph& g, const WeightVector& w,
                                 CurvatureMethod method = CurvatureMethod::automatic,
                                 double alpha = kDefaultAlpha);

// Throws GirthError if girth(g) < 6. The diagonal is the negated off-diagonal
// row sum.
CurvatureJacobian curvature_jacobian(const Graph& g, const WeightVector& w);

}  // namespace ricci
