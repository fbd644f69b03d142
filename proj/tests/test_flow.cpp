#include <doctest.h>

#include <cmath>
#include <sstream>

#include "corpus.hpp"
#include "ricci/errors.hpp"
#include "ricci/flow.hpp"
#include "ricci/uniformization.hpp"

using namespace ricci;
using ricci::testing::girth6_corpus;
using ricci::testing::random_weights;

namespace {

// kappa_e = 2 w_e (1/m(x) + 1/m(y)) - 2 written out again for the oracle.
std::vector<double> closed_form(const Graph& g, const std::vector<double>& w) {
  std::vector<double> m(g.vertex_count(), 0.0);
  for (EdgeIndex i = 0; i < g.edge_count(); ++i) {
    m[g.edge(i).u] += w[i];
    m[g.edge(i).v] += w[i];
  }
  std::vector<double> k(w.size());
  for (EdgeIndex i = 0; i < g.edge_count(); ++i) k[i] = 2 * w[i] * (1 / m[g.edge(i).u] + 1 / m[g.edge(i).v]) - 2;
  return k;
}

enum class Form { classical, normalized };

// Plain RK4 directly in w for dw/dt = -kappa w (classical) or
// dw/dt = -kappa w + w (kappa . w) (normalized).
std::vector<std::vector<double>> direct_rk4(const Graph& g, std::vector<double> w, Form form, double dt,
                                            std::size_t steps, std::size_t every) {
  const auto rhs = [&](const std::vector<double>& x) {
    const auto k = closed_form(g, x);
    double dot = 0;
    for (std::size_t i = 0; i < x.size(); ++i) dot += k[i] * x[i];
    std::vector<double> out(x.size());
    for (std::size_t i = 0; i < x.size(); ++i)
      out[i] = -k[i] * x[i] + (form == Form::normalized ? x[i] * dot : 0.0);
    return out;
  };
  const auto axpy = [](const std::vector<double>& x, const std::vector<double>& d, double a) {
    auto y = x;
    for (std::size_t i = 0; i < x.size(); ++i) y[i] += a * d[i];
    return y;
  };
  std::vector<std::vector<double>> out{w};
  for (std::size_t s = 1; s <= steps; ++s) {
    const auto k1 = rhs(w);
    const auto k2 = rhs(axpy(w, k1, dt / 2));
    const auto k3 = rhs(axpy(w, k2, dt / 2));
    const auto k4 = rhs(axpy(w, k3, dt));
    for (std::size_t i = 0; i < w.size(); ++i) w[i] += dt / 6 * (k1[i] + 2 * k2[i] + 2 * k3[i] + k4[i]);
    if (s % every == 0) out.push_back(w);
  }
  return out;
}

double sum_of(const std::vector<double>& v) {
  double s = 0;
  for (double x : v) s += x;
  return s;
}

}  // namespace

TEST_CASE("average curvature") {
  CHECK(average_curvature_exact(builders::dumbbell(6, 6)) == Rational(-2, 13));
  CHECK(average_curvature(builders::dumbbell(6, 6)) == doctest::Approx(-2.0 / 13.0));
  CHECK(average_curvature_exact(builders::path(5)) == Rational(2, 4));
  CHECK(average_curvature_exact(builders::star(3)) == Rational(2, 3));
  CHECK(average_curvature_exact(builders::tadpole(6, 1)) == Rational(0));
  CHECK(average_curvature_exact(builders::generalized_petersen(8, 3)) == Rational(-2, 3));
  CHECK_THROWS_AS(average_curvature(builders::complete(4)), GirthError);
  CHECK_THROWS_AS(PrescribedCurvature::average(builders::complete(3)), GirthError);
}

TEST_CASE("flow right-hand side") {
  const auto c6 = builders::cycle(6);
  for (double v : flow_rhs(c6, std::vector<double>(6, 0.0), PrescribedCurvature::average(c6)))
    CHECK(std::abs(v) < 1e-15);
  const auto k2 = builders::path(2);
  CHECK(std::abs(flow_rhs(k2, std::vector<double>{1.7}, PrescribedCurvature::custom({2.0}))[0]) < 1e-15);

  const auto d = builders::dumbbell(6, 6);
  const auto rhs = flow_rhs(d, std::vector<double>(13, 0.0), PrescribedCurvature::average(d));
  // Bridge: 2 (1/3 + 1/3) - 2 = -2/3.
  CHECK(rhs[12] == doctest::Approx(-(-2.0 / 3.0 + 2.0 / 13.0)));
  CHECK_THROWS_AS(flow_rhs(d, std::vector<double>(12, 0.0), PrescribedCurvature::average(d)), ValidationError);
}

TEST_CASE("lyapunov value") {
  const auto d = builders::dumbbell(6, 6);
  const auto target = PrescribedCurvature::average(d);
  const auto k = closed_form(d, std::vector<double>(13, 1.0));
  double expected = 0;
  for (double v : k) expected += (v + 2.0 / 13.0) * (v + 2.0 / 13.0);
  CHECK(lyapunov(curvature_vector(d, WeightVector::constant(13)), target) == doctest::Approx(expected));
  CHECK(lyapunov(curvature_vector(d, WeightVector::constant(13)),
                 PrescribedCurvature::custom(curvature_vector(d, WeightVector::constant(13)).values)) == 0.0);
}

TEST_CASE("stationary cycle") {
  const auto c6 = builders::cycle(6);
  IntegratorOptions o;
  o.t_max = 10;
  o.tol = 0;  // no early stop
  const auto traj = integrate(c6, WeightVector::constant(6), PrescribedCurvature::average(c6), o);
  CHECK(traj.termination == Termination::reached_t_max);
  CHECK(traj.final_sample().t == doctest::Approx(10.0));
  for (const auto& s : traj.samples)
    for (double r : s.log_weights) CHECK(std::abs(r) <= 1e-9);
  const auto rep = convergence_report(traj, PrescribedCurvature::average(c6), 1e-8);
  CHECK(rep.converged);
  CHECK(rep.residual <= 1e-12);
  CHECK_FALSE(rep.rate.has_value());
}

TEST_CASE("early convergence stops the run") {
  const auto c6 = builders::cycle(6);
  const auto traj = integrate(c6, WeightVector::constant(6), PrescribedCurvature::zero(c6));
  CHECK(traj.termination == Termination::converged);
  CHECK(traj.samples.size() == 1);

  const auto gp = builders::generalized_petersen(8, 3);
  std::mt19937_64 rng(21);
  const auto t2 = integrate(gp, random_weights(24, rng, 0.5, 1.5), PrescribedCurvature::average(gp), {60, 1e-2, 1e-8, 10});
  CHECK(t2.termination == Termination::converged);
  CHECK(convergence_report(t2, PrescribedCurvature::average(gp), 1e-8).converged);
}

TEST_CASE("dumbbell bottleneck") {
  const auto d = builders::dumbbell(6, 6);
  const auto target = PrescribedCurvature::average(d);
  const auto traj = integrate(d, WeightVector::constant(13), target);
  const auto w = traj.weights_at(traj.samples.size() - 1);
  CHECK(traj.final_sample().t == doctest::Approx(30.0));
  CHECK(w[12] > 2.5);
  // The four cycle edges touching the bridge end near 1.56 and the other
  // eight drop below one.
  for (EdgeIndex i : {0u, 5u, 6u, 11u}) CHECK(w[i] == doctest::Approx(1.561).epsilon(1e-3));
  for (EdgeIndex i : {1u, 2u, 3u, 4u, 7u, 8u, 9u, 10u}) CHECK(w[i] < 1.0);
  for (EdgeIndex i = 0; i < 12; ++i) CHECK(w[i] < w[12] / 1.5);
  const auto rep = convergence_report(traj, target, 1e-3);
  CHECK(rep.converged);
  REQUIRE(rep.rate.has_value());
  CHECK(*rep.rate < 0.0);
  CHECK(*rep.r_squared >= 0.98);
  REQUIRE(rep.limit_weights.has_value());
  CHECK((*rep.limit_weights)[12] == w[12]);
}

TEST_CASE("tadpole never settles") {
  // No positive limit exists: the pendant weight collapses and the residual
  // only decays algebraically (roughly 0.9 / t), never exponentially.
  const auto t = builders::tadpole(6, 1);
  const auto target = PrescribedCurvature::average(t);
  IntegratorOptions o;
  o.t_max = 200;
  const auto traj = integrate(t, WeightVector::constant(7), target, o);
  CHECK(traj.termination == Termination::reached_t_max);
  const auto rep = convergence_report(traj, target, 1e-3);
  CHECK_FALSE(rep.converged);
  CHECK(rep.residual > 1e-3);
  CHECK_FALSE(rep.limit_weights.has_value());

  const std::size_t half = traj.samples.size() / 2;
  const auto mid = traj.weights_at(half), last = traj.weights_at(traj.samples.size() - 1);
  CHECK(last[6] / last[0] < mid[6] / mid[0]);
  CHECK(last[6] < 0.02);
  const double r_mid = std::sqrt(traj.samples[half].lyapunov);
  const double r_end = std::sqrt(traj.final_sample().lyapunov);
  // Halving the remaining error took the entire second half of the run.
  CHECK(r_end / r_mid > 0.3);
}

TEST_CASE("conservation, positivity and monotone lyapunov") {
  std::mt19937_64 rng(13);
  for (const auto& [name, g] : girth6_corpus()) {
    CAPTURE(name);
    const auto target = PrescribedCurvature::average(g);
    REQUIRE(is_consistent(g, target));
    const auto traj = integrate(g, random_weights(g.edge_count(), rng, 0.5, 1.5), target);
    CHECK(traj.message.empty());
    const double s0 = sum_of(traj.samples.front().log_weights);
    for (std::size_t i = 0; i < traj.samples.size(); ++i) {
      const auto& s = traj.samples[i];
      CHECK(std::abs(sum_of(s.log_weights) - s0) <= 1e-6);
      for (double r : s.log_weights) CHECK(std::isfinite(std::exp(r)));
      if (i > 0) {
        CHECK(s.t > traj.samples[i - 1].t);
        CHECK(s.lyapunov <= traj.samples[i - 1].lyapunov + 1e-6);
        CHECK(s.potential_drop >= traj.samples[i - 1].potential_drop);
      }
    }
  }
}

TEST_CASE("equilibria stay put") {
  std::mt19937_64 rng(14);
  for (const auto& g : {builders::generalized_petersen(8, 3), builders::dumbbell(6, 6), builders::path(4)}) {
    const auto w = random_weights(g.edge_count(), rng);
    const auto target = PrescribedCurvature::custom(curvature_vector(g, w).values);
    IntegratorOptions o;
    o.t_max = 10;
    o.tol = 0;
    const auto traj = integrate(g, w, target, o);
    for (const auto& s : traj.samples)
      for (EdgeIndex i = 0; i < g.edge_count(); ++i) CHECK(std::abs(s.log_weights[i] - std::log(w[i])) <= 1e-8);
  }
}

TEST_CASE("limit is unique up to scale") {
  const auto d = builders::dumbbell(6, 6);
  const auto target = PrescribedCurvature::average(d);
  std::mt19937_64 rng(15);
  // Random starts excite the slow mode that moves mass across the bridge
  // (rate about 0.06), hence the long horizon.
  IntegratorOptions o;
  o.t_max = 300;
  const auto a = integrate(d, random_weights(13, rng, 0.5, 2.0), target, o);
  const auto b = integrate(d, random_weights(13, rng, 0.5, 2.0), target, o);
  const auto wa = a.weights_at(a.samples.size() - 1).normalized();
  const auto wb = b.weights_at(b.samples.size() - 1).normalized();
  for (EdgeIndex i = 0; i < 13; ++i) CHECK(std::abs(wa[i] - wb[i]) <= 1e-5);

  const auto direct = solve_constant_weights(d).weights.normalized();
  for (EdgeIndex i = 0; i < 13; ++i) CHECK(std::abs(wa[i] - direct[i]) <= 1e-5);
}

TEST_CASE("gauge transforms") {
  const auto p3 = builders::path(3);
  const auto target = PrescribedCurvature::average(p3);
  const WeightVector w0({1.0, 3.0});
  IntegratorOptions o;
  o.t_max = 5;
  o.tol = 0;
  const auto traj = integrate(p3, w0, target, o);

  const auto un = gauge_to_unnormalized(p3, traj, target);
  const auto classical = direct_rk4(p3, {1.0, 3.0}, Form::classical, 1e-2, 500, 10);
  REQUIRE(classical.size() == un.samples.size());
  for (std::size_t s = 0; s < un.samples.size(); ++s)
    for (EdgeIndex i = 0; i < 2; ++i) CHECK(std::abs(std::exp(un.samples[s].log_weights[i]) - classical[s][i]) <= 1e-5);

  const auto nor = gauge_to_normalized(p3, traj, target);
  const auto normalized = direct_rk4(p3, {0.25, 0.75}, Form::normalized, 1e-2, 500, 10);
  REQUIRE(normalized.size() == nor.samples.size());
  for (std::size_t s = 0; s < nor.samples.size(); ++s) {
    double total = 0;
    for (EdgeIndex i = 0; i < 2; ++i) {
      const double w = std::exp(nor.samples[s].log_weights[i]);
      total += w;
      CHECK(std::abs(w - normalized[s][i]) <= 1e-5);
    }
    CHECK(std::abs(total - 1.0) <= 1e-12);
  }

  // Zero target: the unnormalized transform is the identity.
  const auto zt = PrescribedCurvature::zero(p3);
  const auto zero_run = integrate(p3, w0, zt, o);
  const auto same = gauge_to_unnormalized(p3, zero_run, zt);
  for (std::size_t s = 0; s < same.samples.size(); ++s)
    for (EdgeIndex i = 0; i < 2; ++i) CHECK(same.samples[s].log_weights[i] == zero_run.samples[s].log_weights[i]);

  // K_2 with target 2: exp(-2t).
  const auto k2 = builders::path(2);
  const auto k2t = PrescribedCurvature::custom({2.0});
  const auto k2run = gauge_to_unnormalized(k2, integrate(k2, WeightVector::constant(1), k2t, o), k2t);
  for (const auto& s : k2run.samples) CHECK(std::exp(s.log_weights[0]) == doctest::Approx(std::exp(-2 * s.t)).epsilon(1e-12));

  // C_6 at equilibrium: 1/6 everywhere.
  const auto c6 = builders::cycle(6);
  const auto ceq = gauge_to_normalized(c6, integrate(c6, WeightVector::constant(6), PrescribedCurvature::zero(c6), o),
                                       PrescribedCurvature::zero(c6));
  for (const auto& s : ceq.samples)
    for (double r : s.log_weights) CHECK(std::exp(r) == doctest::Approx(1.0 / 6.0).epsilon(1e-12));
}

TEST_CASE("normalized gauge on a random trajectory sums to one") {
  const auto d = builders::dumbbell(6, 6);
  std::mt19937_64 rng(16);
  const auto target = PrescribedCurvature::average(d);
  const auto nor = gauge_to_normalized(d, integrate(d, random_weights(13, rng), target), target);
  for (const auto& s : nor.samples) {
    double total = 0;
    for (double r : s.log_weights) total += std::exp(r);
    CHECK(std::abs(total - 1.0) <= 1e-12);
  }
}

TEST_CASE("step failure is reported, not thrown") {
  const auto d = builders::dumbbell(6, 6);
  IntegratorOptions o;
  o.max_log_change = 1e-9;
  o.min_dt = 1e-3;
  FlowTrajectory traj;
  CHECK_NOTHROW(traj = integrate(d, WeightVector::constant(13), PrescribedCurvature::average(d), o));
  CHECK(traj.termination == Termination::step_failure);
  CHECK_FALSE(traj.message.empty());
  CHECK(traj.samples.size() >= 1);
}

TEST_CASE("inconsistent targets warn") {
  const auto c6 = builders::cycle(6);
  const auto target = PrescribedCurvature::custom(std::vector<double>(6, 0.1));
  CHECK_FALSE(is_consistent(c6, target));
  IntegratorOptions o;
  o.t_max = 1;
  const auto traj = integrate(c6, WeightVector::constant(6), target, o);
  CHECK_FALSE(traj.message.empty());
  CHECK(traj.termination == Termination::reached_t_max);
}

TEST_CASE("flow on a girth three graph uses the lp") {
  const auto k4 = builders::complete(4);
  IntegratorOptions o;
  o.t_max = 0.5;
  o.dt = 0.05;
  o.sample_every = 2;
  std::mt19937_64 rng(18);
  const auto traj = integrate(k4, random_weights(6, rng, 0.5, 1.5), PrescribedCurvature::zero(k4), o);
  CHECK(traj.method == CurvatureMethod::lipschitz_lp);
  CHECK(traj.final_sample().t == doctest::Approx(0.5));
}

TEST_CASE("input checks") {
  const auto c6 = builders::cycle(6);
  IntegratorOptions o;
  o.dt = 0;
  CHECK_THROWS_AS(integrate(c6, WeightVector::constant(6), PrescribedCurvature::zero(c6), o), ValidationError);
  CHECK_THROWS_AS(integrate(c6, WeightVector::constant(5), PrescribedCurvature::zero(c6)), ValidationError);
  CHECK_THROWS_AS(integrate(c6, WeightVector::constant(6), PrescribedCurvature::custom({0.0})), ValidationError);
}

TEST_CASE("trajectory csv") {
  const auto p3 = builders::path(3);
  IntegratorOptions o;
  o.t_max = 0.2;
  o.tol = 0;
  const auto traj = integrate(p3, WeightVector({1.0, 2.0}), PrescribedCurvature::average(p3), o);
  std::ostringstream a, b;
  write_trajectory_csv(a, traj);
  write_trajectory_csv(b, integrate(p3, WeightVector({1.0, 2.0}), PrescribedCurvature::average(p3), o));
  CHECK(a.str() == b.str());
  std::istringstream in(a.str());
  std::string header;
  std::getline(in, header);
  CHECK(header == "t,omega_0,omega_1,kappa_0,kappa_1,lyapunov");
  std::size_t rows = 0;
  for (std::string line; std::getline(in, line);) ++rows;
  CHECK(rows == traj.samples.size());
}
