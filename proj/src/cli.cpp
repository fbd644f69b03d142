#include "ricci/cli.hpp"

#include <cmath>
#include <fstream>
#include <random>
#include <sstream>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "ricci/builders.hpp"
#include "ricci/curvature.hpp"
#include "ricci/errors.hpp"
#include "ricci/graph_io.hpp"
#include "ricci/svg_plot.hpp"
#include "ricci/uniformization.hpp"

namespace ricci::cli {

namespace {

using nlohmann::json;

struct Input {
  std::string name;
  LoadedGraph loaded;
};

Input load_input(const RunConfig& cfg) {
  if (cfg.builtin && cfg.graph_file) throw ValidationError("give either --graph or --builtin, not both");
  if (cfg.builtin) {
    auto g = builders::builtin(*cfg.builtin);
    const auto n = g.edge_count();
    return {*cfg.builtin, {std::move(g), WeightVector::constant(n)}};
  }
  if (cfg.graph_file) return {*cfg.graph_file, load_graph_file(*cfg.graph_file)};
  throw ValidationError("one of --graph or --builtin is required");
}

std::string rational_text(const Rational& r) {
  if (r.denominator() == 1) return std::to_string(r.numerator());
  return std::to_string(r.numerator()) + "/" + std::to_string(r.denominator());
}

json rational_json(const Rational& r) {
  return {{"exact", rational_text(r)}, {"value", boost::rational_cast<double>(r)}};
}

json edge_json(const Graph& g, EdgeIndex i) {
  return {{"index", i}, {"u", g.label(g.edge(i).u)}, {"v", g.label(g.edge(i).v)}};
}

json graph_summary(const Input& in) {
  const auto& g = in.loaded.graph;
  return {{"name", in.name}, {"vertices", g.vertex_count()}, {"edges", g.edge_count()}};
}

json certificate_json(const Graph& g, const DensityCertificate& cert) {
  json j{{"satisfied", cert.satisfied},
         {"global_density", rational_json(cert.global_density)},
         {"max_proper_density", rational_json(cert.max_proper_density)},
         {"method", std::string(to_string(cert.method))}};
  if (cert.witness) {
    const auto& st = cert.witness->stats();
    json members = json::array();
    for (Vertex x : cert.witness->members()) members.push_back(g.label(x));
    j["witness"] = {{"vertices", members},
                    {"size", st.size},
                    {"inner_edges", st.inner_edges},
                    {"boundary_edges", st.boundary_edges}};
  } else {
    j["witness"] = nullptr;
  }
  return j;
}

PrescribedCurvature make_target(const RunConfig& cfg, const Graph& g) {
  if (cfg.target == "zero") return PrescribedCurvature::zero(g);
  if (cfg.target == "average") return PrescribedCurvature::average(g);
  std::ifstream in(cfg.target);
  if (!in) throw ParseError("cannot open target file '" + cfg.target + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  try {
    return PrescribedCurvature::custom(parse_edge_values(buf.str(), g.edge_count()));
  } catch (const ParseError& e) {
    throw ParseError(cfg.target + ": " + e.what());
  }
}

WeightVector initial_weights(const RunConfig& cfg, const Input& in) {
  if (!cfg.random_init) return in.loaded.weights;
  std::mt19937_64 rng(cfg.seed);
  std::uniform_real_distribution<double> dist(0.5, 1.5);
  std::vector<double> w(in.loaded.graph.edge_count());
  for (auto& x : w) x = dist(rng);
  return WeightVector(std::move(w));
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw ParseError("cannot write '" + path + "'");
  out << text;
}

}  // namespace

CommandResult cmd_info(const RunConfig& cfg) {
  const auto in = load_input(cfg);
  const auto& g = in.loaded.graph;
  json rep{{"command", "info"}, {"graph", graph_summary(in)}};
  const auto len = girth(g);
  rep["girth"] = len ? json(*len) : json("infinite");
  rep["average_curvature"] = girth_at_least(g, 6) ? rational_json(average_curvature_exact(g)) : json(nullptr);
  rep["classification"] = describe(classify_constant_weight(g));
  rep["density_certificate"] = certificate_json(g, check_condition(g));
  return {std::move(rep), kSuccess};
}

CommandResult cmd_curvature(const RunConfig& cfg) {
  const auto in = load_input(cfg);
  const auto& g = in.loaded.graph;
  const auto& w = in.loaded.weights;
  const CurvatureEvaluator eval(g);
  const auto kappa = eval(w);
  std::optional<CurvatureVector> reference;
  if (cfg.verify) {
    reference = eval.girth_at_least_6() ? curvature_vector(g, w, CurvatureMethod::lipschitz_lp)
                                        : curvature_vector(g, w, CurvatureMethod::alpha_oracle);
  }
  json rows = json::array();
  double max_delta = 0.0;
  for (EdgeIndex i = 0; i < g.edge_count(); ++i) {
    auto row = edge_json(g, i);
    row["weight"] = w[i];
    row["kappa"] = kappa[i];
    row["method"] = std::string(to_string(kappa.method));
    if (reference) {
      const double d = std::abs(kappa[i] - (*reference)[i]);
      row["delta"] = d;
      max_delta = std::max(max_delta, d);
    }
    rows.push_back(std::move(row));
  }
  json rep{{"command", "curvature"}, {"graph", graph_summary(in)},
           {"method", std::string(to_string(kappa.method))}, {"edges", rows}};
  if (reference) {
    rep["verify"] = {{"reference_method", std::string(to_string(reference->method))},
                     {"max_delta", max_delta}};
  }
  return {std::move(rep), kSuccess};
}

CommandResult cmd_flow(const RunConfig& cfg) {
  const auto in = load_input(cfg);
  const auto& g = in.loaded.graph;
  const auto target = make_target(cfg, g);
  const auto w0 = initial_weights(cfg, in);
  const auto traj = integrate(g, w0, target, cfg.integrator);
  const auto conv = convergence_report(traj, target, cfg.report_tol);

  if (cfg.csv_path) {
    std::ostringstream csv;
    write_trajectory_csv(csv, traj);
    write_text(*cfg.csv_path, csv.str());
  }
  if (cfg.plot_path) {
    std::optional<double> asymptote;
    if (target.kind != TargetKind::custom) asymptote = target.values.empty() ? 0.0 : target.values.front();
    write_text(*cfg.plot_path, plot::render_svg(plot::trajectory_panels(g, traj, asymptote)));
  }

  const auto final_w = traj.weights_at(traj.samples.size() - 1);
  const auto& final_k = traj.final_sample().kappa;
  json edges = json::array();
  for (EdgeIndex i = 0; i < g.edge_count(); ++i) {
    auto row = edge_json(g, i);
    row["initial_weight"] = w0[i];
    row["final_weight"] = final_w[i];
    row["final_kappa"] = final_k[i];
    row["target"] = target.values[i];
    edges.push_back(std::move(row));
  }
  json convergence{{"converged", conv.converged},
                   {"residual", conv.residual},
                   {"tolerance", cfg.report_tol},
                   {"rate", conv.rate ? json(*conv.rate) : json(nullptr)},
                   {"r_squared", conv.r_squared ? json(*conv.r_squared) : json(nullptr)},
                   {"fitted_samples", conv.fitted_samples}};
  json rep{{"command", "flow"},
           {"graph", graph_summary(in)},
           {"target", cfg.target},
           {"method", std::string(to_string(traj.method))},
           {"integrator",
            {{"dt", cfg.integrator.dt},
             {"t_max", cfg.integrator.t_max},
             {"tol", cfg.integrator.tol},
             {"sample_every", cfg.integrator.sample_every}}},
           {"random_init", cfg.random_init},
           {"seed", cfg.seed},
           {"termination", std::string(to_string(traj.termination))},
           {"final_time", traj.final_sample().t},
           {"samples", traj.samples.size()},
           {"convergence", convergence},
           {"edges", edges}};
  if (!traj.message.empty()) rep["message"] = traj.message;
  if (girth_at_least(g, 6)) {
    double drift = 0.0;
    double base = 0.0;
    for (double r : traj.samples.front().log_weights) base += r;
    for (const auto& s : traj.samples) {
      double sum = 0.0;
      for (double r : s.log_weights) sum += r;
      drift = std::max(drift, std::abs(sum - base));
    }
    rep["log_weight_sum_drift"] = drift;
  }
  if (cfg.stratify) {
    json above = json::array();
    for (EdgeIndex i = 0; i < g.edge_count(); ++i) {
      if (final_w[i] > *cfg.stratify) {
        auto row = edge_json(g, i);
        row["final_weight"] = final_w[i];
        above.push_back(std::move(row));
      }
    }
    rep["stratify"] = {{"threshold", *cfg.stratify}, {"edges_above", above}};
  }
  return {std::move(rep), traj.termination == Termination::step_failure ? kNumericalFailure : kSuccess};
}

CommandResult cmd_uniformize(const RunConfig& cfg) {
  const auto in = load_input(cfg);
  const auto& g = in.loaded.graph;
  json rep{{"command", "uniformize"}, {"graph", graph_summary(in)}};
  const auto cert = check_condition(g);
  rep["density_certificate"] = certificate_json(g, cert);
  if (!girth_at_least(g, 6)) {
    rep["status"] = "not_applicable";
    rep["message"] = "constant-curvature weights are only solved on graphs of girth >= 6";
    return {std::move(rep), kConditionFailure};
  }
  if (!cert.satisfied) {
    rep["status"] = "condition_failed";
    rep["message"] = "a proper subset is at least as dense as the graph; no constant-curvature weights exist";
    return {std::move(rep), kConditionFailure};
  }
  const auto res = solve_constant_weights(g, UniformizeOptions{});
  const auto kappa = curvature_vector(g, res.weights, CurvatureMethod::closed_form);
  const double kbar = average_curvature(g);
  double deviation = 0.0;
  for (double k : kappa.values) deviation = std::max(deviation, std::abs(k - kbar));

  json potentials = json::array();
  for (Vertex x = 0; x < g.vertex_count(); ++x)
    potentials.push_back({{"vertex", g.label(x)},
                          {"g", res.g_star(static_cast<Eigen::Index>(x))},
                          {"m", res.m_star(static_cast<Eigen::Index>(x))}});
  json edges = json::array();
  for (EdgeIndex i = 0; i < g.edge_count(); ++i) {
    auto row = edge_json(g, i);
    row["weight"] = res.weights[i];
    row["kappa"] = kappa[i];
    edges.push_back(std::move(row));
  }
  rep["status"] = "solved";
  rep["newton"] = {{"iterations", res.iterations},
                   {"gradient_norm", res.gradient_norm},
                   {"vertex_residual", res.vertex_residual},
                   {"edge_residual", res.edge_residual}};
  rep["constant_curvature"] = rational_json(average_curvature_exact(g));
  rep["max_curvature_deviation"] = deviation;
  rep["potentials"] = potentials;
  rep["edges"] = edges;
  return {std::move(rep), kSuccess};
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Lin-Lu-Yau curvature, prescribed-curvature Ricci flow and constant-curvature weights",
               "ricci-uniform"};
  app.require_subcommand(1);
  RunConfig cfg;

  const auto add_common = [&](CLI::App* sub) {
    auto* graph = sub->add_option("--graph", cfg.graph_file, "graph file (edge list or JSON)");
    auto* builtin = sub->add_option("--builtin", cfg.builtin, "builtin graph name")
                        ->check(CLI::IsMember(builders::builtin_names()));
    graph->excludes(builtin);
    sub->add_option("--report", cfg.report_path, "write the report here instead of stdout");
  };
  auto* info = app.add_subcommand("info", "graph structure, average curvature, density condition");
  auto* curv = app.add_subcommand("curvature", "per-edge curvature table");
  auto* flow = app.add_subcommand("flow", "integrate the prescribed-curvature flow");
  auto* unif = app.add_subcommand("uniformize", "solve for constant-curvature weights");
  for (auto* sub : {info, curv, flow, unif}) add_common(sub);

  curv->add_flag("--verify", cfg.verify, "cross-check against an independent method");
  flow->add_option("--target", cfg.target, "zero | average | FILE of 'edge_index value' lines");
  flow->add_option("--dt", cfg.integrator.dt, "RK4 step")->check(CLI::PositiveNumber);
  flow->add_option("--t-max", cfg.integrator.t_max, "final time")->check(CLI::PositiveNumber);
  flow->add_option("--tol", cfg.integrator.tol, "stop once |kappa - target|_inf <= tol")
      ->check(CLI::NonNegativeNumber);
  flow->add_option("--report-tol", cfg.report_tol, "residual bound for converged=true")
      ->check(CLI::NonNegativeNumber);
  flow->add_option("--sample-every", cfg.integrator.sample_every, "record every N steps")
      ->check(CLI::PositiveNumber);
  flow->add_option("--seed", cfg.seed, "seed for --random-init");
  flow->add_flag("--random-init", cfg.random_init, "initial weights uniform on [0.5, 1.5]");
  flow->add_option("--csv", cfg.csv_path, "trajectory CSV output");
  flow->add_option("--plot", cfg.plot_path, "SVG plot output");
  flow->add_option("--stratify", cfg.stratify, "list edges whose final weight exceeds this");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kSuccess;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kInputError;
  }

  CommandResult result;
  try {
    if (info->parsed()) cfg.command = "info", result = cmd_info(cfg);
    else if (curv->parsed()) cfg.command = "curvature", result = cmd_curvature(cfg);
    else if (flow->parsed()) cfg.command = "flow", result = cmd_flow(cfg);
    else cfg.command = "uniformize", result = cmd_uniformize(cfg);
  } catch (const ParseError& e) {
    err << "input error: " << e.what() << "\n";
    return kInputError;
  } catch (const ValidationError& e) {
    err << "input error: " << e.what() << "\n";
    return kInputError;
  } catch (const GirthError& e) {
    err << "input error: " << e.what() << "\n";
    return kInputError;
  } catch (const ConsistencyError& e) {
    err << "input error: " << e.what() << "\n";
    return kInputError;
  } catch (const NotApplicable& e) {
    err << "not applicable: " << e.what() << "\n";
    return kConditionFailure;
  } catch (const Error& e) {
    err << "numerical failure: " << e.what() << "\n";
    return kNumericalFailure;
  }

  const std::string text = result.report.dump(2) + "\n";
  if (cfg.report_path) {
    try {
      write_text(*cfg.report_path, text);
    } catch (const ParseError& e) {
      err << "output error: " << e.what() << "\n";
      return kInputError;
    }
  } else {
    out << text;
  }
  return result.exit_code;
}

}  // namespace ricci::cli
