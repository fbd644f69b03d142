#pragma once

#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include <boost/rational.hpp>

#include "ricci/curvature.hpp"
#include "ricci/graph.hpp"

namespace ricci {

using Rational = boost::rational<long long>;

enum class TargetKind { zero, average, custom };

struct PrescribedCurvature {
  std::vector<double> values;
  TargetKind kind = TargetKind::custom;

  static PrescribedCurvature zero(const Graph& g);
  // Every entry is 2(|V|/|E| - 1). Throws GirthError if girth < 6.
  static PrescribedCurvature average(const Graph& g);
  static PrescribedCurvature custom(std::vector<double> values);

  std::size_t size() const noexcept { return values.size(); }
};

// 2(|V|/|E| - 1); throws GirthError when girth < 6.
double average_curvature(const Graph& g);
Rational average_curvature_exact(const Graph& g);

// True when sum(target) = 2(|V| - |E|) within tol.
bool is_consistent(const Graph& g, const PrescribedCurvature& target, double tol = 1e-12);

// d r / dt = -(kappa(e^r) - target) in log-weight coordinates.
std::vector<double> flow_rhs(const Graph& g, std::span<const double> log_weights,
                             const PrescribedCurvature& target);

struct IntegratorOptions {
  double t_max = 30.0;
  double dt = 1e-2;
  double tol = 1e-8;               // early stop on ||kappa - target||_inf; 0 disables it
  std::size_t sample_every = 10;   // in nominal steps
  double max_log_change = 0.5;     // step is halved if any r_i moves further
  double min_dt = 1e-12;
};

struct FlowSample {
  double t = 0.0;
  std::vector<double> log_weights;
  CurvatureVector kappa;
  double lyapunov = 0.0;        // sum (kappa_i - target_i)^2
  double potential_drop = 0.0;  // integral of lyapunov over [0, t]
};

enum class Termination { reached_t_max, converged, step_failure };
std::string_view to_string(Termination t);

struct FlowTrajectory {
  std::vector<FlowSample> samples;
  IntegratorOptions options;
  CurvatureMethod method = CurvatureMethod::closed_form;
  Termination termination = Termination::reached_t_max;
  std::string message;  // set on step_failure or for consistency warnings

  const FlowSample& final_sample() const { return samples.back(); }
  WeightVector weights_at(std::size_t sample) const;
};

// Classic RK4 on r = ln w with fixed step dt and recursive halving when a
// step would move some r_i by more than max_log_change. A step failure does
// not throw: the trajectory up to the failure is returned with
// termination == step_failure.
FlowTrajectory integrate(const Graph& g, const WeightVector& w0, const PrescribedCurvature& target,
                         const IntegratorOptions& opts = {});

// w~_i(t) = exp(-t target_i) w_i(t): solution of dw/dt = -kappa w. Curvature
// and lyapunov (against a zero target) are recomputed for the new weights;
// potential_drop is carried over from the source samples.
FlowTrajectory gauge_to_unnormalized(const Graph& g, const FlowTrajectory& traj,
                                     const PrescribedCurvature& target);

// The unnormalized weights rescaled to sum to one at every sample: solution
// of dw/dt = -w kappa + w (kappa . w).
FlowTrajectory gauge_to_normalized(const Graph& g, const FlowTrajectory& traj,
                                   const PrescribedCurvature& target);

struct ConvergenceReport {
  bool converged = false;
  std::optional<WeightVector> limit_weights;
  std::optional<CurvatureVector> limit_curvature;
  std::optional<double> rate;       // slope of ln ||kappa - target||_2 against t
  std::optional<double> r_squared;  // coefficient of determination of that fit
  std::size_t fitted_samples = 0;
  double residual = 0.0;            // final ||kappa - target||_inf
};

ConvergenceReport convergence_report(const FlowTrajectory& traj, const PrescribedCurvature& target,
                                     double tol);

double lyapunov(const CurvatureVector& kappa, const PrescribedCurvature& target);

// Header "t,omega_0..,kappa_0..,lyapunov", one row per sample.
void write_trajectory_csv(std::ostream& out, const FlowTrajectory& traj);

}  // namespace ricci
