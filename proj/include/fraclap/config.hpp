#ifndef FRACLAP_CONFIG_HPP
#define FRACLAP_CONFIG_HPP

#include <fstream>
#include <initializer_list>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "fraclap/errors.hpp"
#include "fraclap/params.hpp"
#include "fraclap/quadrature.hpp"
#include "fraclap/solver.hpp"

namespace fraclap {

// Trace shell schedule: eps_start * 2^-k for k = 0 .. levels-1.
struct TraceConfig {
  double eps_start = 0.125;
  int levels = 6;

  std::vector<double> schedule() const {
    if (levels < 3) throw ConfigError("trace.levels must be at least 3");
    if (!(eps_start > 0.0) || eps_start > 0.125)
      throw ConfigError("trace.eps_start must lie in (0, 0.125]");
    std::vector<double> eps(levels);
    for (int k = 0; k < levels; ++k) eps[k] = eps_start * std::pow(2.0, -k);
    return eps;
  }
};

struct EmbeddingConfig {
  double q = 0.0;  // 0 means: default to params.q
  std::vector<double> t_values = {0.05, 0.1, 0.15, 0.2, 0.25, 0.3, 0.35, 0.4};
  int tab_samples = 48;
};

// Field expressions stay as source text here; commands parse them against
// the final dimension so a bad expression surfaces with its position.
struct FieldConfig {
  std::string f;               // forcing
  std::vector<std::string> b;  // drift components
  std::string c;               // reaction coefficient
  std::string g;               // boundary datum
  std::string u;               // probe field for norm/trace commands
};

struct OutputConfig {
  std::string format = "json";  // "json" or "csv"
  std::string dir = ".";
};

struct ExperimentConfig {
  ProblemParams params;
  QuadratureSpec quadrature;
  SolverSpec solver;
  FieldConfig fields;
  TraceConfig trace;
  EmbeddingConfig embedding;
  OutputConfig output;
};

namespace detail {

using json = nlohmann::json;

inline void require_known_keys(const json& obj, const std::string& path,
                               std::initializer_list<const char*> allowed) {
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    bool known = false;
    for (const char* k : allowed) known = known || it.key() == k;
    if (!known)
      throw ConfigError("unknown key \"" + (path.empty() ? it.key() : path + "." + it.key()) +
                        "\"");
  }
}

template <typename T>
void read_key(const json& obj, const std::string& path, const char* key, T& target) {
  if (!obj.contains(key)) return;
  try {
    target = obj.at(key).get<T>();
  } catch (const json::exception&) {
    throw ConfigError("key \"" + path + "." + key + "\" has the wrong type");
  }
}

inline void read_scheme(const json& obj, const std::string& path, Scheme& target) {
  if (!obj.contains("scheme")) return;
  const json& v = obj.at("scheme");
  if (!v.is_string()) throw ConfigError("key \"" + path + ".scheme\" must be a string");
  const std::string name = v.get<std::string>();
  if (name == "auto")
    target = Scheme::auto_select;
  else if (name == "tensor")
    target = Scheme::tensor;
  else if (name == "monte-carlo")
    target = Scheme::monte_carlo;
  else
    throw ConfigError("key \"" + path +
                      ".scheme\" must be one of auto, tensor, monte-carlo");
}

}  // namespace detail

// Parse a full experiment configuration.  Every key must be recognized;
// anything unknown names its full path in the error.  Numeric validation
// beyond types (parameter ranges etc.) happens in the usual validate()
// calls so the CLI can map both failures to the same exit code.
inline ExperimentConfig parse_config(const nlohmann::json& root) {
  using detail::read_key;
  if (!root.is_object()) throw ConfigError("configuration root must be an object");
  detail::require_known_keys(
      root, "", {"params", "quadrature", "solver", "fields", "trace", "embedding", "output"});

  ExperimentConfig cfg;

  if (root.contains("params")) {
    const auto& o = root.at("params");
    if (!o.is_object()) throw ConfigError("\"params\" must be an object");
    detail::require_known_keys(o, "params", {"n", "s", "r", "p", "q"});
    read_key(o, "params", "n", cfg.params.n);
    read_key(o, "params", "s", cfg.params.s);
    read_key(o, "params", "r", cfg.params.r);
    read_key(o, "params", "p", cfg.params.p);
    read_key(o, "params", "q", cfg.params.q);
  }

  if (root.contains("quadrature")) {
    const auto& o = root.at("quadrature");
    if (!o.is_object()) throw ConfigError("\"quadrature\" must be an object");
    detail::require_known_keys(o, "quadrature",
                               {"scheme", "radial_points", "angular_points", "mc_samples",
                                "pv_inner_radius", "split_radius", "tail_radius", "seed",
                                "origin_levels", "boundary_levels"});
    detail::read_scheme(o, "quadrature", cfg.quadrature.scheme);
    read_key(o, "quadrature", "radial_points", cfg.quadrature.radial_points);
    read_key(o, "quadrature", "angular_points", cfg.quadrature.angular_points);
    read_key(o, "quadrature", "mc_samples", cfg.quadrature.mc_samples);
    read_key(o, "quadrature", "pv_inner_radius", cfg.quadrature.pv_inner_radius);
    read_key(o, "quadrature", "split_radius", cfg.quadrature.split_radius);
    read_key(o, "quadrature", "tail_radius", cfg.quadrature.tail_radius);
    read_key(o, "quadrature", "seed", cfg.quadrature.seed);
    read_key(o, "quadrature", "origin_levels", cfg.quadrature.origin_levels);
    read_key(o, "quadrature", "boundary_levels", cfg.quadrature.boundary_levels);
  }

  if (root.contains("solver")) {
    const auto& o = root.at("solver");
    if (!o.is_object()) throw ConfigError("\"solver\" must be an object");
    detail::require_known_keys(
        o, "solver", {"radial_levels", "angular_points", "max_picard_iters", "tol", "tau_steps"});
    read_key(o, "solver", "radial_levels", cfg.solver.radial_levels);
    read_key(o, "solver", "angular_points", cfg.solver.angular_points);
    read_key(o, "solver", "max_picard_iters", cfg.solver.max_picard_iters);
    read_key(o, "solver", "tol", cfg.solver.tol);
    read_key(o, "solver", "tau_steps", cfg.solver.tau_steps);
  }

  if (root.contains("fields")) {
    const auto& o = root.at("fields");
    if (!o.is_object()) throw ConfigError("\"fields\" must be an object");
    detail::require_known_keys(o, "fields", {"f", "b", "c", "g", "u"});
    read_key(o, "fields", "f", cfg.fields.f);
    read_key(o, "fields", "b", cfg.fields.b);
    read_key(o, "fields", "c", cfg.fields.c);
    read_key(o, "fields", "g", cfg.fields.g);
    read_key(o, "fields", "u", cfg.fields.u);
  }

  if (root.contains("trace")) {
    const auto& o = root.at("trace");
    if (!o.is_object()) throw ConfigError("\"trace\" must be an object");
    detail::require_known_keys(o, "trace", {"eps_start", "levels"});
    read_key(o, "trace", "eps_start", cfg.trace.eps_start);
    read_key(o, "trace", "levels", cfg.trace.levels);
  }

  if (root.contains("embedding")) {
    const auto& o = root.at("embedding");
    if (!o.is_object()) throw ConfigError("\"embedding\" must be an object");
    detail::require_known_keys(o, "embedding", {"q", "t_values", "tab_samples"});
    read_key(o, "embedding", "q", cfg.embedding.q);
    read_key(o, "embedding", "t_values", cfg.embedding.t_values);
    read_key(o, "embedding", "tab_samples", cfg.embedding.tab_samples);
  }

  if (root.contains("output")) {
    const auto& o = root.at("output");
    if (!o.is_object()) throw ConfigError("\"output\" must be an object");
    detail::require_known_keys(o, "output", {"format", "dir"});
    read_key(o, "output", "format", cfg.output.format);
    read_key(o, "output", "dir", cfg.output.dir);
    if (cfg.output.format != "json" && cfg.output.format != "csv")
      throw ConfigError("output.format must be json or csv");
  }

  return cfg;
}

inline ExperimentConfig parse_config_text(const std::string& text) {
  nlohmann::json root;
  try {
    root = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError(std::string("configuration is not valid JSON: ") + e.what());
  }
  return parse_config(root);
}

inline ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open configuration file " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config_text(buf.str());
}

}  // namespace fraclap

#endif  // FRACLAP_CONFIG_HPP
