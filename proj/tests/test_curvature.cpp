#include <doctest.h>

#include <cmath>

#include "corpus.hpp"
#include "ricci/curvature.hpp"
#include "ricci/errors.hpp"
#include "ricci/lp_solver.hpp"
#include "ricci/uniformization.hpp"

using namespace ricci;
using ricci::testing::corpus;
using ricci::testing::girth6_corpus;
using ricci::testing::random_weights;

namespace {

// Same program as curvature_lp but with |f(u) - f(v)| <= d(u, v) for every pair.
double curvature_all_pairs_lp(const Graph& g, const WeightVector& w, EdgeIndex i) {
  const std::size_t n = g.vertex_count();
  const auto [x, y] = g.edge(i);
  const auto m = vertex_masses(g, w);
  lp::LinearProgram prog;
  prog.objective.assign(n, 0.0);
  for (const auto& inc : g.neighbors(x)) {
    prog.objective[inc.neighbor] += w[inc.edge] / m[x];
    prog.objective[x] -= w[inc.edge] / m[x];
  }
  for (const auto& inc : g.neighbors(y)) {
    prog.objective[inc.neighbor] -= w[inc.edge] / m[y];
    prog.objective[y] += w[inc.edge] / m[y];
  }
  prog.bounds.assign(n, lp::VariableBounds::free());
  for (Vertex u = 0; u < n; ++u) {
    const auto d = hop_distances_from(g, u);
    for (Vertex v = u + 1; v < n; ++v) {
      std::vector<double> row(n, 0.0);
      row[u] = 1.0;
      row[v] = -1.0;
      prog.constraints.push_back({row, lp::Relation::less_equal, static_cast<double>(d[v])});
      prog.constraints.push_back({row, lp::Relation::greater_equal, -static_cast<double>(d[v])});
    }
  }
  std::vector<double> fx(n, 0.0), fy(n, 0.0);
  fx[x] = 1.0;
  fy[y] = 1.0;
  prog.constraints.push_back({fx, lp::Relation::equal, 0.0});
  prog.constraints.push_back({fy, lp::Relation::equal, 1.0});
  const auto s = lp::solve(prog);
  REQUIRE(s.status == lp::Status::optimal);
  return s.value;
}

// Diagonal of the Jacobian from its own formula rather than the row sum.
double jacobian_diagonal(const Graph& g, const WeightVector& w, EdgeIndex i) {
  const auto [x, y] = g.edge(i);
  const double mx = vertex_mass(g, w, x), my = vertex_mass(g, w, y), wi = w[i];
  return 2 * wi * (1 / mx + 1 / my) - 2 * wi * wi * (1 / (mx * mx) + 1 / (my * my));
}

std::vector<double> log_of(const WeightVector& w) {
  std::vector<double> r;
  for (double v : w.values()) r.push_back(std::log(v));
  return r;
}

WeightVector exp_of(const std::vector<double>& r) {
  std::vector<double> w;
  for (double v : r) w.push_back(std::exp(v));
  return WeightVector(std::move(w));
}

}  // namespace

TEST_CASE("closed form examples") {
  const auto k2 = builders::path(2);
  for (double w : {0.1, 1.0, 7.5}) CHECK(curvature_closed_form(k2, WeightVector::constant(1, w), 0) == doctest::Approx(2.0));
  const auto c6 = builders::cycle(6);
  for (EdgeIndex i = 0; i < 6; ++i) CHECK(std::abs(curvature_closed_form(c6, WeightVector::constant(6), i)) < 1e-15);
  const auto p3 = builders::path(3);
  CHECK(curvature_closed_form(p3, WeightVector::constant(2), 0) == doctest::Approx(1.0));
  CHECK(curvature_closed_form(p3, WeightVector::constant(2), 1) == doctest::Approx(1.0));
  const auto star = builders::star(3);
  for (EdgeIndex i = 0; i < 3; ++i) CHECK(curvature_closed_form(star, WeightVector::constant(3), i) == doctest::Approx(2.0 / 3.0));
  CHECK_THROWS_AS(curvature_closed_form(builders::complete(3), WeightVector::constant(3), 0), GirthError);
  CHECK_THROWS_AS(curvature_vector(builders::cycle(5), WeightVector::constant(5), CurvatureMethod::closed_form),
                  GirthError);
}

TEST_CASE("lp examples") {
  const auto k2 = builders::path(2);
  CHECK(curvature_lp(k2, WeightVector::constant(1, 3.0), 0) == doctest::Approx(2.0).epsilon(1e-12));
  // K_3 unit weights: the known value is 3/2.
  const auto k3 = builders::complete(3);
  const auto w = WeightVector::constant(3);
  for (EdgeIndex i = 0; i < 3; ++i) {
    CHECK(curvature_lp(k3, w, i) == doctest::Approx(1.5));
    CHECK(std::abs(curvature_lp(k3, w, i) - curvature_alpha_oracle(k3, w, i, 0.99)) <= 1e-6);
  }
  // K_n unit weights: n / (n - 1).
  const auto k4 = builders::complete(4);
  CHECK(curvature_lp(k4, WeightVector::constant(6), 0) == doctest::Approx(4.0 / 3.0));
}

TEST_CASE("alpha oracle examples") {
  CHECK(curvature_alpha_oracle(builders::path(2), WeightVector::constant(1), 0, 0.75) == doctest::Approx(2.0));
  const auto c6 = builders::cycle(6);
  for (EdgeIndex i = 0; i < 6; ++i)
    CHECK(std::abs(curvature_alpha_oracle(c6, WeightVector::constant(6), i, 0.99)) <= 1e-6);
  const auto p3 = builders::path(3);
  for (double a : {0.9, 0.99})
    for (EdgeIndex i = 0; i < 2; ++i)
      CHECK(std::abs(curvature_alpha_oracle(p3, WeightVector::constant(2), i, a) - 1.0) <= 1e-6);
  CHECK_THROWS_AS(curvature_alpha_oracle(p3, WeightVector::constant(2), 0, 1.0), ValidationError);
  CHECK_THROWS_AS(curvature_alpha_oracle(p3, WeightVector::constant(2), 0, 0.0), ValidationError);
}

TEST_CASE("curvature vector examples") {
  const auto d = builders::dumbbell(6, 6);
  const auto sol = solve_constant_weights(d);
  const auto k = curvature_vector(d, sol.weights);
  CHECK(k.method == CurvatureMethod::closed_form);
  for (double v : k.values) CHECK(std::abs(v + 2.0 / 13.0) <= 1e-8);

  std::mt19937_64 rng(1);
  for (const auto& tree : {builders::path(5), builders::star(4)}) {
    const auto kv = curvature_vector(tree, random_weights(tree.edge_count(), rng));
    double sum = 0;
    for (double v : kv.values) sum += v;
    CHECK(sum == doctest::Approx(2.0).epsilon(1e-12));
  }

  const auto gp = builders::generalized_petersen(8, 3);
  for (double v : curvature_vector(gp, WeightVector::constant(24)).values) CHECK(v == doctest::Approx(-2.0 / 3.0));
  CHECK(curvature_vector(builders::complete(3), WeightVector::constant(3)).method == CurvatureMethod::lipschitz_lp);
}

TEST_CASE("closed form agrees with the lp on girth six graphs") {
  std::mt19937_64 rng(2);
  for (const auto& [name, g] : girth6_corpus()) {
    CAPTURE(name);
    for (int trial = 0; trial < 3; ++trial) {
      const auto w = random_weights(g.edge_count(), rng);
      const auto a = curvature_vector(g, w, CurvatureMethod::closed_form);
      const auto b = curvature_vector(g, w, CurvatureMethod::lipschitz_lp);
      for (EdgeIndex i = 0; i < g.edge_count(); ++i) CHECK(std::abs(a[i] - b[i]) <= 1e-8);
    }
  }
}

TEST_CASE("lp agrees with the alpha oracle") {
  std::mt19937_64 rng(4);
  for (const auto& [name, g] : corpus()) {
    if (g.edge_count() > 24) continue;
    CAPTURE(name);
    const auto w = random_weights(g.edge_count(), rng, 0.5, 2.0);
    const auto a = curvature_vector(g, w, CurvatureMethod::lipschitz_lp);
    const auto b = curvature_vector(g, w, CurvatureMethod::alpha_oracle, 0.99);
    for (EdgeIndex i = 0; i < g.edge_count(); ++i) CHECK(std::abs(a[i] - b[i]) <= 1e-4);
  }
}

TEST_CASE("edge constraints suffice") {
  std::mt19937_64 rng(6);
  const std::vector<Graph> graphs{builders::complete(4), builders::cycle(5), builders::tadpole(4, 2),
                                  builders::generalized_petersen(5, 2), builders::dumbbell(3, 4)};
  for (const auto& g : graphs) {
    const auto w = random_weights(g.edge_count(), rng);
    for (EdgeIndex i = 0; i < g.edge_count(); ++i)
      CHECK(std::abs(curvature_lp(g, w, i) - curvature_all_pairs_lp(g, w, i)) <= 1e-9);
  }
}

TEST_CASE("bounds and scale invariance") {
  std::mt19937_64 rng(8);
  for (const auto& [name, g] : corpus()) {
    if (g.edge_count() > 30) continue;
    CAPTURE(name);
    const auto w = random_weights(g.edge_count(), rng, 0.05, 20.0);
    const auto k = curvature_vector(g, w);
    for (double v : k.values) {
      CHECK(v >= -2.0 - 1e-12);
      CHECK(v <= 2.0 + 1e-12);
    }
    for (double c : {0.1, 3.0, 100.0}) {
      const auto ks = curvature_vector(g, w.scaled(c));
      for (EdgeIndex i = 0; i < g.edge_count(); ++i) CHECK(std::abs(ks[i] - k[i]) <= 1e-9);
    }
  }
}

TEST_CASE("total curvature") {
  std::mt19937_64 rng(9);
  for (const auto& [name, g] : girth6_corpus()) {
    CAPTURE(name);
    const double expected = 2.0 * (static_cast<double>(g.vertex_count()) - static_cast<double>(g.edge_count()));
    for (int trial = 0; trial < 100; ++trial) {
      const auto k = curvature_vector(g, random_weights(g.edge_count(), rng, 0.01, 100.0));
      double sum = 0;
      for (double v : k.values) {
        sum += v;
        CHECK(v > -2.0);
        CHECK(v <= 2.0);
        if (g.edge_count() > 1) CHECK(v < 2.0);
      }
      CHECK(std::abs(sum - expected) <= 1e-9);
    }
  }
}

TEST_CASE("jacobian examples") {
  const auto jk2 = curvature_jacobian(builders::path(2), WeightVector::constant(1)).matrix;
  REQUIRE(jk2.rows() == 1);
  CHECK(jk2(0, 0) == 0.0);
  const auto jp3 = curvature_jacobian(builders::path(3), WeightVector::constant(2)).matrix;
  CHECK(jp3(0, 0) == doctest::Approx(0.5));
  CHECK(jp3(0, 1) == doctest::Approx(-0.5));
  CHECK(jp3(1, 0) == doctest::Approx(-0.5));
  CHECK(jp3(1, 1) == doctest::Approx(0.5));
  CHECK_THROWS_AS(curvature_jacobian(builders::complete(4), WeightVector::constant(6)), GirthError);
}

TEST_CASE("jacobian structure and finite differences") {
  std::mt19937_64 rng(10);
  for (const auto& [name, g] : girth6_corpus()) {
    CAPTURE(name);
    const auto w = random_weights(g.edge_count(), rng);
    const Eigen::MatrixXd j = curvature_jacobian(g, w).matrix;
    const auto n = j.rows();
    CHECK((j - j.transpose()).cwiseAbs().maxCoeff() <= 1e-14);
    CHECK((j * Eigen::VectorXd::Ones(n)).norm() <= 1e-9);
    for (Eigen::Index a = 0; a < n; ++a) {
      CHECK(j(a, a) >= 0.0);
      CHECK(j(a, a) == doctest::Approx(jacobian_diagonal(g, w, static_cast<EdgeIndex>(a))).epsilon(1e-12));
      for (Eigen::Index b = 0; b < n; ++b)
        if (a != b) CHECK(j(a, b) <= 0.0);
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(j);
    CHECK(es.eigenvalues().minCoeff() >= -1e-9);
    if (n > 1) {
      Eigen::FullPivLU<Eigen::MatrixXd> lu(j);
      lu.setThreshold(1e-10);
      CHECK(lu.rank() == n - 1);
    }

    const auto r = log_of(w);
    const double h = 1e-6;
    for (Eigen::Index c = 0; c < n; ++c) {
      auto up = r, down = r;
      up[static_cast<std::size_t>(c)] += h;
      down[static_cast<std::size_t>(c)] -= h;
      const auto ku = curvature_vector(g, exp_of(up));
      const auto kd = curvature_vector(g, exp_of(down));
      for (Eigen::Index a = 0; a < n; ++a) {
        const double fd = (ku[static_cast<std::size_t>(a)] - kd[static_cast<std::size_t>(a)]) / (2 * h);
        CHECK(std::abs(fd - j(a, c)) <= 1e-5);
      }
    }
  }
}

TEST_CASE("local lipschitz continuity") {
  std::mt19937_64 rng(12);
  for (const auto& g : {builders::dumbbell(6, 6), builders::complete(4), builders::tadpole(6, 1)}) {
    double worst = 0;
    for (int trial = 0; trial < 20; ++trial) {
      const auto a = random_weights(g.edge_count(), rng, 0.5, 2.0);
      const auto b = random_weights(g.edge_count(), rng, 0.5, 2.0);
      const auto ka = curvature_vector(g, a), kb = curvature_vector(g, b);
      double dk = 0, dw = 0;
      for (EdgeIndex i = 0; i < g.edge_count(); ++i) {
        dk = std::max(dk, std::abs(ka[i] - kb[i]));
        dw = std::max(dw, std::abs(a[i] - b[i]));
      }
      worst = std::max(worst, dk / dw);
    }
    CHECK(std::isfinite(worst));
    CHECK(worst < 50.0);
  }
}

TEST_CASE("evaluator caches the selector") {
  const auto g = builders::complete(4);
  const CurvatureEvaluator ev(g);
  CHECK(ev.method() == CurvatureMethod::lipschitz_lp);
  CHECK_FALSE(ev.girth_at_least_6());
  const CurvatureEvaluator ev6(builders::cycle(6));
  CHECK(ev6.method() == CurvatureMethod::closed_form);
  CHECK_THROWS_AS(ev6(WeightVector::constant(5)), ValidationError);
}
