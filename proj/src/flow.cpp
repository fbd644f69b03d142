#include "ricci/flow.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <fmt/format.h>

#include "ricci/errors.hpp"

namespace ricci {

namespace {

struct StepFailed {
  std::string reason;
};

double sup_distance(const CurvatureVector& kappa, const PrescribedCurvature& target) {
  double worst = 0.0;
  for (std::size_t i = 0; i < kappa.size(); ++i)
    worst = std::max(worst, std::abs(kappa[i] - target.values[i]));
  return worst;
}

WeightVector exp_weights(std::span<const double> r) {
  std::vector<double> w(r.size());
  std::transform(r.begin(), r.end(), w.begin(), [](double x) { return std::exp(x); });
  return WeightVector(std::move(w));
}

void check_target(const Graph& g, const PrescribedCurvature& target) {
  if (target.size() != g.edge_count())
    throw ValidationError("prescribed curvature has " + std::to_string(target.size()) +
                          " entries, graph has " + std::to_string(g.edge_count()) + " edges");
}

class Integrator {
 public:
  Integrator(const Graph& g, const PrescribedCurvature& target, const IntegratorOptions& opts)
      : eval_(g), target_(target), opts_(opts) {}

  CurvatureMethod method() const { return eval_.method(); }

  CurvatureVector curvature(std::span<const double> r) const {
    WeightVector w;
    try {
      w = exp_weights(r);
    } catch (const ValidationError&) {
      throw StepFailed{"weights left the representable positive range"};
    }
    return eval_(w);
  }

  std::vector<double> rhs(const CurvatureVector& kappa) const {
    std::vector<double> d(kappa.size());
    for (std::size_t i = 0; i < d.size(); ++i) d[i] = -(kappa[i] - target_.values[i]);
    return d;
  }

  // Advances r over h, starting from the slope k1 at r. Returns the integral
  // of |rhs|^2 over the step.
  double advance(std::vector<double>& r, const std::vector<double>& k1, double h) const {
    const std::size_t n = r.size();
    std::vector<double> stage(n);
    const auto eval_at = [&](const std::vector<double>& k, double c) {
      for (std::size_t i = 0; i < n; ++i) stage[i] = r[i] + c * k[i];
      return rhs(curvature(stage));
    };
    const auto k2 = eval_at(k1, h / 2);
    const auto k3 = eval_at(k2, h / 2);
    const auto k4 = eval_at(k3, h);
    std::vector<double> delta(n);
    double max_change = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      delta[i] = h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
      max_change = std::max(max_change, std::abs(delta[i]));
    }
    if (!std::isfinite(max_change) || max_change > opts_.max_log_change) {
      const double half = h / 2;
      if (half < opts_.min_dt)
        throw StepFailed{fmt::format("step halving reached dt = {:.3g} below the minimum", half)};
      double drop = advance(r, k1, half);
      drop += advance(r, rhs(curvature(r)), half);
      return drop;
    }
    const auto sq = [](const std::vector<double>& k) {
      return std::inner_product(k.begin(), k.end(), k.begin(), 0.0);
    };
    for (std::size_t i = 0; i < n; ++i) r[i] += delta[i];
    return h / 6.0 * (sq(k1) + 2.0 * sq(k2) + 2.0 * sq(k3) + sq(k4));
  }

 private:
  CurvatureEvaluator eval_;
  const PrescribedCurvature& target_;
  const IntegratorOptions& opts_;
};

FlowTrajectory transform_trajectory(const Graph& g, const FlowTrajectory& traj,
                                    const PrescribedCurvature& target, bool normalize) {
  check_target(g, target);
  const CurvatureEvaluator eval(g);
  const auto zero = PrescribedCurvature::zero(g);
  FlowTrajectory out;
  out.options = traj.options;
  out.method = eval.method();
  out.termination = traj.termination;
  out.message = traj.message;
  for (const auto& s : traj.samples) {
    FlowSample t;
    t.t = s.t;
    t.log_weights.resize(s.log_weights.size());
    for (std::size_t i = 0; i < s.log_weights.size(); ++i)
      t.log_weights[i] = s.log_weights[i] - s.t * target.values[i];
    if (normalize) {
      const double top = *std::max_element(t.log_weights.begin(), t.log_weights.end());
      double sum = 0.0;
      for (double x : t.log_weights) sum += std::exp(x - top);
      const double log_total = top + std::log(sum);
      for (double& x : t.log_weights) x -= log_total;
    }
    t.kappa = eval(exp_weights(t.log_weights));
    t.lyapunov = lyapunov(t.kappa, zero);
    t.potential_drop = s.potential_drop;
    out.samples.push_back(std::move(t));
  }
  return out;
}

}  // namespace

std::string_view to_string(Termination t) {
  switch (t) {
    case Termination::reached_t_max: return "reached_t_max";
    case Termination::converged: return "converged";
    case Termination::step_failure: return "step_failure";
  }
  return "unknown";
}

PrescribedCurvature PrescribedCurvature::zero(const Graph& g) {
  return {std::vector<double>(g.edge_count(), 0.0), TargetKind::zero};
}

PrescribedCurvature PrescribedCurvature::average(const Graph& g) {
  return {std::vector<double>(g.edge_count(), average_curvature(g)), TargetKind::average};
}

PrescribedCurvature PrescribedCurvature::custom(std::vector<double> values) {
  return {std::move(values), TargetKind::custom};
}

Rational average_curvature_exact(const Graph& g) {
  if (!girth_at_least(g, 6)) throw GirthError("average curvature requires girth >= 6");
  const auto v = static_cast<long long>(g.vertex_count());
  const auto e = static_cast<long long>(g.edge_count());
  return Rational(2) * (Rational(v, e) - Rational(1));
}

double average_curvature(const Graph& g) {
  return boost::rational_cast<double>(average_curvature_exact(g));
}

bool is_consistent(const Graph& g, const PrescribedCurvature& target, double tol) {
  const double total = std::accumulate(target.values.begin(), target.values.end(), 0.0);
  const double expected = 2.0 * (static_cast<double>(g.vertex_count()) - static_cast<double>(g.edge_count()));
  return std::abs(total - expected) <= tol;
}

std::vector<double> flow_rhs(const Graph& g, std::span<const double> log_weights,
                             const PrescribedCurvature& target) {
  check_target(g, target);
  if (log_weights.size() != g.edge_count()) throw ValidationError("log-weight vector has the wrong length");
  const auto kappa = curvature_vector(g, exp_weights(log_weights));
  std::vector<double> d(kappa.size());
  for (std::size_t i = 0; i < d.size(); ++i) d[i] = -(kappa[i] - target.values[i]);
  return d;
}

WeightVector FlowTrajectory::weights_at(std::size_t sample) const {
  return exp_weights(samples.at(sample).log_weights);
}

FlowTrajectory integrate(const Graph& g, const WeightVector& w0, const PrescribedCurvature& target,
                         const IntegratorOptions& opts) {
  check_compatible(g, w0);
  check_target(g, target);
  if (!(opts.dt > 0.0) || !(opts.t_max > 0.0) || opts.sample_every == 0 || !(opts.tol >= 0.0))
    throw ValidationError("integrator options must be positive");

  Integrator integ(g, target, opts);
  FlowTrajectory traj;
  traj.options = opts;
  traj.method = integ.method();
  if (integ.method() == CurvatureMethod::closed_form && !is_consistent(g, target, 1e-9))
    traj.message = "prescribed curvature does not sum to 2(|V|-|E|); log-weight sum is not conserved";

  std::vector<double> r(w0.size());
  std::transform(w0.values().begin(), w0.values().end(), r.begin(), [](double x) { return std::log(x); });

  double t = 0.0;
  double drop = 0.0;
  auto kappa = integ.curvature(r);
  const auto record = [&] {
    const double g_value = lyapunov(kappa, target);
    traj.samples.push_back({t, r, kappa, g_value, drop});
  };
  record();
  if (opts.tol > 0.0 && sup_distance(kappa, target) <= opts.tol) {
    traj.termination = Termination::converged;
    return traj;
  }

  const double end_slack = 1e-12 * std::max(1.0, opts.t_max);
  std::size_t step = 0;
  bool recorded_last = true;
  while (t < opts.t_max - end_slack) {
    const double h = std::min(opts.dt, opts.t_max - t);
    try {
      drop += integ.advance(r, integ.rhs(kappa), h);
      ++step;
      t = std::min(opts.t_max, static_cast<double>(step) * opts.dt);
      if (opts.t_max - t <= end_slack) t = opts.t_max;
      kappa = integ.curvature(r);
    } catch (const StepFailed& failure) {
      traj.termination = Termination::step_failure;
      traj.message = failure.reason;
      if (!recorded_last) record();
      return traj;
    }
    recorded_last = false;
    if (step % opts.sample_every == 0) {
      record();
      recorded_last = true;
    }
    if (opts.tol > 0.0 && sup_distance(kappa, target) <= opts.tol) {
      if (!recorded_last) record();
      traj.termination = Termination::converged;
      return traj;
    }
  }
  if (!recorded_last) record();
  traj.termination = Termination::reached_t_max;
  return traj;
}

FlowTrajectory gauge_to_unnormalized(const Graph& g, const FlowTrajectory& traj,
                                     const PrescribedCurvature& target) {
  return transform_trajectory(g, traj, target, false);
}

FlowTrajectory gauge_to_normalized(const Graph& g, const FlowTrajectory& traj,
                                   const PrescribedCurvature& target) {
  return transform_trajectory(g, traj, target, true);
}

double lyapunov(const CurvatureVector& kappa, const PrescribedCurvature& target) {
  if (kappa.size() != target.size()) throw ValidationError("curvature and target lengths differ");
  double sum = 0.0;
  for (std::size_t i = 0; i < kappa.size(); ++i) {
    const double d = kappa[i] - target.values[i];
    sum += d * d;
  }
  return sum;
}

ConvergenceReport convergence_report(const FlowTrajectory& traj, const PrescribedCurvature& target,
                                     double tol) {
  if (traj.samples.empty()) throw ValidationError("empty trajectory");
  ConvergenceReport rep;
  const auto& last = traj.final_sample();
  rep.residual = sup_distance(last.kappa, target);
  rep.converged = rep.residual <= tol;
  if (rep.converged) {
    rep.limit_weights = traj.weights_at(traj.samples.size() - 1);
    rep.limit_curvature = last.kappa;
  }

  std::vector<double> ts;
  std::vector<double> ys;
  for (std::size_t s = traj.samples.size() / 2; s < traj.samples.size(); ++s) {
    const double norm = std::sqrt(lyapunov(traj.samples[s].kappa, target));
    if (norm <= 1e-12) continue;
    ts.push_back(traj.samples[s].t);
    ys.push_back(std::log(norm));
  }
  rep.fitted_samples = ts.size();
  if (ts.size() >= 2) {
    const double n = static_cast<double>(ts.size());
    const double mt = std::accumulate(ts.begin(), ts.end(), 0.0) / n;
    const double my = std::accumulate(ys.begin(), ys.end(), 0.0) / n;
    double stt = 0.0, sty = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < ts.size(); ++i) {
      stt += (ts[i] - mt) * (ts[i] - mt);
      sty += (ts[i] - mt) * (ys[i] - my);
      syy += (ys[i] - my) * (ys[i] - my);
    }
    if (stt > 0.0) {
      rep.rate = sty / stt;
      rep.r_squared = syy > 0.0 ? (sty * sty) / (stt * syy) : 1.0;
    }
  }
  return rep;
}

void write_trajectory_csv(std::ostream& out, const FlowTrajectory& traj) {
  const std::size_t n = traj.samples.empty() ? 0 : traj.samples.front().log_weights.size();
  out << "t";
  for (std::size_t i = 0; i < n; ++i) out << ",omega_" << i;
  for (std::size_t i = 0; i < n; ++i) out << ",kappa_" << i;
  out << ",lyapunov\n";
  for (const auto& s : traj.samples) {
    out << fmt::format("{:.10g}", s.t);
    for (double r : s.log_weights) out << fmt::format(",{:.15g}", std::exp(r));
    for (double k : s.kappa.values) out << fmt::format(",{:.15g}", k);
    out << fmt::format(",{:.15g}\n", s.lyapunov);
  }
}

}  // namespace ricci
