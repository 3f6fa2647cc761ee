// Command-line workbench over the library: dispatches the standard
// experiments and writes machine-readable reports.  Exit codes are a stable
// contract: 0 pass, 1 property failure, 2 usage or config error, 3 numerical
// failure.

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <numbers>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "fraclap/config.hpp"
#include "fraclap/fraclap.hpp"
#include "fraclap/report.hpp"

namespace {

using namespace fraclap;
using nlohmann::json;

constexpr int kExitPass = 0;
constexpr int kExitPropertyFailure = 1;
constexpr int kExitUsage = 2;
constexpr int kExitNumerical = 3;

constexpr int kSchemaVersion = 1;

struct CliOptions {
  std::string config_path;
  std::string out_dir;
  std::string format;
  std::uint64_t seed = 0;
  bool seed_set = false;
  int refine = 1;
};

// Resolved execution context: config with flag overrides already applied.
struct Context {
  ExperimentConfig cfg;
  std::filesystem::path out;
  std::string format;
  std::uint64_t seed = 0;
};

Context make_context(const CliOptions& opt) {
  Context ctx;
  if (!opt.config_path.empty()) ctx.cfg = load_config(opt.config_path);
  if (!opt.out_dir.empty()) ctx.cfg.output.dir = opt.out_dir;
  if (!opt.format.empty()) ctx.cfg.output.format = opt.format;
  if (opt.seed_set) ctx.cfg.quadrature.seed = opt.seed;
  if (opt.refine < 1) throw ConfigError("--refine must be a positive integer");
  if (opt.refine > 1) {
    ctx.cfg.quadrature = ctx.cfg.quadrature.refined(opt.refine);
    ctx.cfg.embedding.tab_samples *= opt.refine;
  }
  ctx.cfg.params.validate();
  ctx.cfg.quadrature.validate();
  ctx.out = ctx.cfg.output.dir;
  ctx.format = ctx.cfg.output.format;
  ctx.seed = ctx.cfg.quadrature.seed;
  return ctx;
}

std::filesystem::path write_command_report(const Context& ctx, const std::string& basename,
                                           json j, const std::string& csv) {
  std::filesystem::create_directories(ctx.out);
  j["schema_version"] = kSchemaVersion;
  if (ctx.format == "json") {
    const auto path = ctx.out / (basename + ".json");
    report::write_text_atomic(path, j.dump(2) + "\n");
    return path;
  }
  const auto path = ctx.out / (basename + ".csv");
  report::write_text_atomic(path, "schema_version," + std::to_string(kSchemaVersion) + "\n" + csv);
  return path;
}

double unit_sphere_area(int n) {
  return 2.0 * std::pow(std::numbers::pi, 0.5 * n) / std::tgamma(0.5 * n);
}

// ---------------------------------------------------------------- commands

int cmd_verify_nonuniqueness(const Context& ctx) {
  const ProblemParams& params = ctx.cfg.params;
  const QuadratureSpec& spec = ctx.cfg.quadrature;
  const int n = params.n;

  const ScalarField u = nontrivial_solution_field(params);
  const double scale = kernel_constants(params).boundary_blowup;

  // The field is annihilated by the operator despite being nonzero: probe
  // the principal value well inside the ball, relative to the field's scale.
  std::vector<double> pv_values;
  double pv_worst = 0.0;
  for (int k = 1; k <= 10; ++k) {
    Point x(n);
    const double rho = 0.7 * k / 10.0;
    x[k % n] = (k % 2 == 0) ? rho : -rho;
    const double pv = frac_laplacian_pv(u, x, params, spec);
    pv_values.push_back(pv);
    pv_worst = std::max(pv_worst, std::abs(pv));
  }
  const double pv_bound = 1e-2 * scale;
  const bool pv_pass = pv_worst <= pv_bound;

  // The same field carries positive boundary trace, which is what excludes
  // it from the uniqueness class.
  const std::vector<double> schedule = ctx.cfg.trace.schedule();
  const TraceReport trace = trace_limit_estimate(u, schedule, params, spec);
  const double target =
      scale * unit_sphere_area(n) * std::pow(2.0, params.s - 1.0) / params.s;
  const bool trace_pass = trace.classification == TraceClass::positive &&
                          std::abs(trace.extrapolated_limit - target) <= 0.05 * target;

  // Negative control: a volume potential of a smooth bump must classify as
  // trace-zero on the same schedule.
  const ScalarField bump{[](const Point& p) { return std::exp(-p.norm_sq() / 0.18); }, n,
                         Support::global, Smoothness::smooth};
  const ScalarField control_field = tabulated_radial_field(
      [&](double rho) {
        Point x(n);
        x[0] = rho;
        return green_potential(bump, x, params, spec);
      },
      n, 32, params.s, TabulationGrid::boundary_refined);
  const TraceReport control = trace_limit_estimate(control_field, schedule, params, spec);
  const bool control_pass = control.classification == TraceClass::zero;

  const bool pass = pv_pass && trace_pass && control_pass;

  json j{{"params", report::to_json(params)},
         {"boundary_constant", scale},
         {"pv", {{"values", pv_values}, {"bound", pv_bound}, {"worst", pv_worst}, {"pass", pv_pass}}},
         {"trace", report::to_json(trace)},
         {"trace_target", target},
         {"trace_pass", trace_pass},
         {"control_classification", to_string(control.classification)},
         {"control_pass", control_pass},
         {"pass", pass}};

  std::string csv = "pass," + std::string(pass ? "true" : "false") + "\nboundary_constant," +
                    std::to_string(scale) + "\npv_worst," + std::to_string(pv_worst) +
                    "\npv_bound," + std::to_string(pv_bound) + "\ntrace_target," +
                    std::to_string(target) + "\ncontrol_classification," +
                    to_string(control.classification) + "\n\n" + report::to_csv(trace);

  const auto path = write_command_report(ctx, "nonuniqueness", std::move(j), csv);
  std::printf("nonuniqueness: %s (pv worst %.3e vs bound %.3e, trace %s, limit %.6g vs %.6g)\n",
              pass ? "pass" : "FAIL", pv_worst, pv_bound,
              to_string(trace.classification), trace.extrapolated_limit, target);
  std::printf("report: %s\n", path.string().c_str());
  return pass ? kExitPass : kExitPropertyFailure;
}

int cmd_trace(const Context& ctx) {
  if (ctx.cfg.fields.u.empty())
    throw ConfigError("trace needs a probe field expression under fields.u");
  const ScalarField u = parse_field(ctx.cfg.fields.u, ctx.cfg.params);
  const TraceReport rep =
      trace_limit_estimate(u, ctx.cfg.trace.schedule(), ctx.cfg.params, ctx.cfg.quadrature);
  json j{{"params", report::to_json(ctx.cfg.params)},
         {"field", ctx.cfg.fields.u},
         {"trace", report::to_json(rep)}};
  const auto path = write_command_report(ctx, "trace", std::move(j), report::to_csv(rep));
  std::printf("trace: %s (fit exponent %.3f, limit %.6g)\n",
              to_string(rep.classification), rep.fit_exponent, rep.extrapolated_limit);
  std::printf("report: %s\n", path.string().c_str());
  return kExitPass;
}

int cmd_embedding_table(const Context& ctx) {
  const ProblemParams& params = ctx.cfg.params;
  const double q = ctx.cfg.embedding.q > 0.0 ? ctx.cfg.embedding.q : params.q;
  validate_embedding_exponents(params, q);

  const EmbeddingTable base = embedding_table(params, q, ctx.cfg.embedding.t_values,
                                              ctx.cfg.quadrature, ctx.cfg.embedding.tab_samples);
  const EmbeddingTable fine =
      embedding_table(params, q, ctx.cfg.embedding.t_values, ctx.cfg.quadrature.refined(2),
                      2 * ctx.cfg.embedding.tab_samples);
  const double drift = ratio_column_drift(base, fine);
  const bool pass = std::isfinite(base.max_ratio()) && drift <= 0.10;

  json j{{"base", report::to_json(base)},
         {"refined", report::to_json(fine)},
         {"ratio_drift", drift},
         {"pass", pass}};
  std::string csv = "pass," + std::string(pass ? "true" : "false") + "\nratio_drift," +
                    std::to_string(drift) + "\n\n" + report::to_csv(base) + "\nrefined\n" +
                    report::to_csv(fine);
  const auto path = write_command_report(ctx, "embedding", std::move(j), csv);
  std::printf("embedding: %s (max ratio %.6g, refinement drift %.2f%%)\n",
              pass ? "pass" : "FAIL", base.max_ratio(), 100.0 * drift);
  std::printf("report: %s\n", path.string().c_str());
  return pass ? kExitPass : kExitPropertyFailure;
}

int cmd_solve(const Context& ctx) {
  const ProblemParams& params = ctx.cfg.params;
  const QuadratureSpec& spec = ctx.cfg.quadrature;
  const int n = params.n;
  if (ctx.cfg.fields.f.empty())
    throw ConfigError("solve needs a forcing expression under fields.f");

  const ScalarField f = parse_field(ctx.cfg.fields.f, params);
  CoefficientBundle coeffs = zero_coefficients(n);
  if (!ctx.cfg.fields.b.empty()) {
    if (static_cast<int>(ctx.cfg.fields.b.size()) != n)
      throw ConfigError("fields.b needs exactly one component per dimension");
    std::vector<ScalarField> comps;
    for (const auto& expr : ctx.cfg.fields.b) comps.push_back(parse_field(expr, params));
    coeffs.b = VectorField{std::move(comps)};
  }
  if (!ctx.cfg.fields.c.empty()) coeffs.c = parse_field(ctx.cfg.fields.c, params);

  DiscreteSolution sol = solve(f, coeffs, params, spec, ctx.cfg.solver);
  sol.f_desc = ctx.cfg.fields.f;
  for (const auto& expr : ctx.cfg.fields.b)
    sol.b_desc += (sol.b_desc.empty() ? "" : ", ") + expr;
  sol.c_desc = ctx.cfg.fields.c;

  const double residual = residual_norm(sol, f, coeffs, params, spec);
  const double ratio = apriori_ratio(sol, f, params, spec);
  const double forcing_norm = weighted_lp_norm(f, 1.0, params.r, params, spec);

  double value_max = 0.0, grad_max = 0.0, weighted_grad_max = 0.0;
  for (std::size_t i = 0; i < sol.nodes.size(); ++i) {
    value_max = std::max(value_max, std::abs(sol.values[i]));
    if (!sol.gradients.empty()) {
      const double g = sol.gradients[i].norm();
      grad_max = std::max(grad_max, g);
      weighted_grad_max = std::max(
          weighted_grad_max, std::pow(1.0 - sol.nodes[i].norm(), params.r) * g);
    }
  }

  json summary{{"params", report::to_json(params)},
               {"converged", sol.converged},
               {"iterations", sol.iterations_used},
               {"tau_path", sol.tau_path},
               {"residual", residual},
               {"forcing_norm_l1r", forcing_norm},
               {"apriori_ratio", ratio},
               {"value_node_max", value_max}};
  if (!sol.gradients.empty()) {
    summary["gradient_node_max"] = grad_max;
    summary["weighted_gradient_node_max"] = weighted_grad_max;
  }
  std::string summary_csv =
      "converged," + std::string(sol.converged ? "true" : "false") + "\niterations," +
      std::to_string(sol.iterations_used) + "\nresidual," + std::to_string(residual) +
      "\nforcing_norm_l1r," + std::to_string(forcing_norm) + "\napriori_ratio," +
      std::to_string(ratio) + "\nvalue_node_max," + std::to_string(value_max) + "\n";

  // Everything computed; only now touch the filesystem.
  std::filesystem::create_directories(ctx.out);
  std::filesystem::path sol_path;
  if (ctx.format == "json") {
    sol_path = ctx.out / "solution.json";
    json sj = report::to_json(sol);
    sj["schema_version"] = kSchemaVersion;
    report::write_text_atomic(sol_path, sj.dump(2) + "\n");
  } else {
    sol_path = ctx.out / "solution.csv";
    report::write_text_atomic(sol_path, "schema_version," + std::to_string(kSchemaVersion) +
                                            "\n" + report::to_csv(sol));
  }
  const auto sum_path = write_command_report(ctx, "solve_summary", std::move(summary), summary_csv);

  std::printf("solve: converged=%s iterations=%d residual=%.3e apriori_ratio=%.4f\n",
              sol.converged ? "true" : "false", sol.iterations_used, residual, ratio);
  std::printf("report: %s and %s\n", sol_path.string().c_str(), sum_path.string().c_str());
  return kExitPass;
}

int cmd_properties(const Context& ctx) {
  const QuadratureSpec& spec = ctx.cfg.quadrature;
  std::vector<PropertyResult> suite = run_property_suite(spec, ctx.seed);

  // Fault-injection control: a deliberately corrupted kernel constant must
  // trip the normalization check, otherwise the check itself is broken.
  {
    const ProblemParams pc{.n = 2, .s = 0.75};
    const KernelConstants backup = kernel_constants(pc);
    detail::kernel_constants_mutable(pc).poisson_norm *= 1.1;
    PropertyResult corrupted;
    try {
      corrupted = check_normalizations(pc, spec);
    } catch (...) {
      detail::kernel_constants_mutable(pc) = backup;
      throw;
    }
    detail::kernel_constants_mutable(pc) = backup;
    PropertyResult control;
    control.name = "corrupted-constant-control";
    control.samples = corrupted.samples;
    control.worst = corrupted.worst;
    control.pass = !corrupted.pass;
    if (control.pass) {
      control.detail = "corruption detected: " + corrupted.detail;
    } else {
      control.violations = 1;
      control.detail = "a 10% corrupted constant went undetected";
    }
    suite.push_back(control);
  }

  bool all = true;
  for (const auto& r : suite) {
    all = all && r.pass;
    std::printf("  %-46s %s  (samples %ld, violations %ld, worst %.3e)\n", r.name.c_str(),
                r.pass ? "pass" : "FAIL", r.samples, r.violations, r.worst);
    if (!r.pass && !r.detail.empty()) std::printf("    counterexample: %s\n", r.detail.c_str());
  }

  json j{{"seed", ctx.seed}, {"results", report::to_json(suite)}, {"pass", all}};
  std::string csv = "seed," + std::to_string(ctx.seed) + "\npass," +
                    std::string(all ? "true" : "false") + "\n\n" + report::to_csv(suite);
  const auto path = write_command_report(ctx, "properties", std::move(j), csv);
  std::printf("properties: %s\n", all ? "pass" : "FAIL");
  std::printf("report: %s\n", path.string().c_str());
  return all ? kExitPass : kExitPropertyFailure;
}

int cmd_kernel_eval(const Context& ctx) {
  const ProblemParams& params = ctx.cfg.params;
  const int n = params.n;
  const KernelConstants kc = kernel_constants(params);

  json green_rows = json::array();
  std::string csv;
  for (int i = 0; i < n; ++i) csv += "x" + std::to_string(i) + ",";
  for (int i = 0; i < n; ++i) csv += "y" + std::to_string(i) + ",";
  csv += "green,gradient_norm,gap_ratio\n";
  for (int i = 0; i < 5; ++i) {
    Point x(n);
    x[0] = 0.2 * i;
    for (int jx = 1; jx <= 4; ++jx) {
      Point y(n);
      y[jx % n] = -0.9 + 0.45 * jx;
      if (distance(x, y) < 1e-12) continue;
      const double g = green_function(x, y, params);
      const double gn = green_gradient(x, y, params).norm();
      const double m = gap_ratio(x, y);
      green_rows.push_back(json{{"x", report::to_json(x)},
                                {"y", report::to_json(y)},
                                {"green", g},
                                {"gradient_norm", gn},
                                {"gap_ratio", m}});
      for (int k = 0; k < n; ++k) csv += report::detail::csv_num(x[k]) + ",";
      for (int k = 0; k < n; ++k) csv += report::detail::csv_num(y[k]) + ",";
      csv += report::detail::csv_num(g) + "," + report::detail::csv_num(gn) + "," +
             report::detail::csv_num(m) + "\n";
    }
  }

  json poisson_rows = json::array();
  for (int i = 0; i < 4; ++i) {
    Point x(n);
    x[0] = -0.6 + 0.3 * i;
    Point w(n);
    w[(i + 1) % n] = 1.5;
    poisson_rows.push_back(json{{"x", report::to_json(x)},
                                {"w", report::to_json(w)},
                                {"poisson", poisson_kernel(x, w, params)}});
  }

  json j{{"params", report::to_json(params)},
         {"constants",
          {{"pv_norm", kc.pv_norm},
           {"poisson_norm", kc.poisson_norm},
           {"green_norm", kc.green_norm},
           {"boundary_blowup", kc.boundary_blowup}}},
         {"green_samples", green_rows},
         {"poisson_samples", poisson_rows}};
  const auto path = write_command_report(ctx, "kernel_eval", std::move(j), csv);
  std::printf("kernel-eval: %zu green samples, constants pv=%.6g poisson=%.6g green=%.6g\n",
              green_rows.size(), kc.pv_norm, kc.poisson_norm, kc.green_norm);
  std::printf("report: %s\n", path.string().c_str());
  return kExitPass;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"fractional-order Dirichlet workbench on the unit ball"};
  app.require_subcommand(1);

  CliOptions opt;
  app.add_option("--config", opt.config_path, "JSON experiment configuration file");
  app.add_option("--out", opt.out_dir, "output directory (overrides config)");
  app.add_option("--format", opt.format, "report format: json or csv")
      ->check(CLI::IsMember({"json", "csv"}));
  auto* seed_opt = app.add_option("--seed", opt.seed, "seed override (quadrature and suites)");
  app.add_option("--refine", opt.refine, "resolution multiplier for all quadrature");

  auto* sub_verify =
      app.add_subcommand("verify-nonuniqueness",
                         "check the boundary-singular field: operator annihilates it, trace "
                         "stays positive");
  auto* sub_trace = app.add_subcommand("trace", "trace functional of fields.u over the schedule");
  auto* sub_embed =
      app.add_subcommand("embedding-table", "weighted norm ratios for a boundary family");
  auto* sub_solve = app.add_subcommand("solve", "run the continuation solver on fields.f/b/c");
  auto* sub_props = app.add_subcommand("properties", "randomized kernel inequality suite");
  auto* sub_kernel = app.add_subcommand("kernel-eval", "tabulate kernels and constants");
  for (auto* s : {sub_verify, sub_trace, sub_embed, sub_solve, sub_props, sub_kernel})
    s->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }
  opt.seed_set = seed_opt->count() > 0;

  try {
    const Context ctx = make_context(opt);
    if (sub_verify->parsed()) return cmd_verify_nonuniqueness(ctx);
    if (sub_trace->parsed()) return cmd_trace(ctx);
    if (sub_embed->parsed()) return cmd_embedding_table(ctx);
    if (sub_solve->parsed()) return cmd_solve(ctx);
    if (sub_props->parsed()) return cmd_properties(ctx);
    if (sub_kernel->parsed()) return cmd_kernel_eval(ctx);
    std::fprintf(stderr, "error: no subcommand selected\n");
    return kExitUsage;
  } catch (const ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return kExitUsage;
  } catch (const ParseError& e) {
    std::fprintf(stderr, "expression error: %s\n", e.what());
    return kExitUsage;
  } catch (const ParamError& e) {
    std::fprintf(stderr, "parameter error: %s\n", e.what());
    return kExitUsage;
  } catch (const DimensionMismatchError& e) {
    std::fprintf(stderr, "dimension error: %s\n", e.what());
    return kExitUsage;
  } catch (const Error& e) {
    std::fprintf(stderr, "numerical failure: %s\n", e.what());
    return kExitNumerical;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "failure: %s\n", e.what());
    return kExitNumerical;
  }
}
