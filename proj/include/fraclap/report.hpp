#ifndef FRACLAP_REPORT_HPP
#define FRACLAP_REPORT_HPP

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "fraclap/embedding.hpp"
#include "fraclap/errors.hpp"
#include "fraclap/potentials.hpp"
#include "fraclap/properties.hpp"
#include "fraclap/solver.hpp"
#include "fraclap/weighted_norms.hpp"

namespace fraclap {
namespace report {

using nlohmann::json;

inline json to_json(const ProblemParams& p) {
  return {{"n", p.n}, {"s", p.s}, {"r", p.r}, {"p", p.p}, {"q", p.q}};
}

inline json to_json(const TraceReport& rep) {
  return {{"eps", rep.eps_schedule},
          {"values", rep.values},
          {"classification", to_string(rep.classification)},
          {"fit_exponent", rep.fit_exponent},
          {"extrapolated_limit", rep.extrapolated_limit}};
}

inline json to_json(const Point& x) {
  json a = json::array();
  for (int i = 0; i < x.dim(); ++i) a.push_back(x[i]);
  return a;
}

inline json to_json(const DiscreteSolution& sol) {
  json nodes = json::array(), grads = json::array();
  for (const auto& x : sol.nodes) nodes.push_back(to_json(x));
  for (const auto& g : sol.gradients) grads.push_back(to_json(g));
  json j{{"params", to_json(sol.params)},
         {"forcing", sol.f_desc},
         {"drift", sol.b_desc},
         {"reaction", sol.c_desc},
         {"converged", sol.converged},
         {"iterations", sol.iterations_used},
         {"tau_path", sol.tau_path},
         {"coefficient_bound", sol.lambda_bound},
         {"final_increment", sol.final_increment},
         {"nodes", nodes},
         {"values", sol.values}};
  if (!sol.gradients.empty()) j["gradients"] = grads;
  return j;
}

inline json to_json(const EmbeddingRow& row, bool gradient_column) {
  json j{{"t", row.t},
         {"source_norm", row.source_norm},
         {"potential_norm", row.potential_norm},
         {"ratio", row.ratio}};
  if (gradient_column) {
    j["gradient_max"] = row.gradient_max;
    j["gradient_ratio"] = row.gradient_ratio;
  }
  return j;
}

inline json to_json(const EmbeddingTable& table) {
  json rows = json::array();
  for (const auto& row : table.rows) rows.push_back(to_json(row, table.gradient_column));
  json j{{"params", to_json(table.params)},
         {"q", table.q},
         {"gradient_column", table.gradient_column},
         {"max_ratio", table.max_ratio()},
         {"rows", rows}};
  if (table.gradient_column) j["max_gradient_ratio"] = table.max_gradient_ratio();
  return j;
}

inline json to_json(const PropertyResult& res) {
  json j{{"name", res.name},
         {"pass", res.pass},
         {"samples", res.samples},
         {"violations", res.violations},
         {"worst", res.worst}};
  if (!res.detail.empty()) j["detail"] = res.detail;
  return j;
}

inline json to_json(const std::vector<PropertyResult>& suite) {
  json a = json::array();
  for (const auto& r : suite) a.push_back(to_json(r));
  return a;
}

inline json to_json(const NormalizationReport& rep) {
  return {{"poisson_deviation", rep.poisson_deviation},
          {"dirichlet_deviation", rep.dirichlet_deviation},
          {"poisson_ok", rep.poisson_ok},
          {"dirichlet_ok", rep.dirichlet_ok}};
}

namespace detail {

inline std::string csv_num(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

}  // namespace detail

// CSV layout used throughout: an optional key,value preamble, a blank line,
// then one header row and the data rows.
inline std::string to_csv(const TraceReport& rep) {
  std::ostringstream os;
  os << "classification," << to_string(rep.classification) << "\n"
     << "fit_exponent," << detail::csv_num(rep.fit_exponent) << "\n"
     << "extrapolated_limit," << detail::csv_num(rep.extrapolated_limit) << "\n\n"
     << "eps,value\n";
  for (std::size_t i = 0; i < rep.values.size(); ++i)
    os << detail::csv_num(rep.eps_schedule[i]) << "," << detail::csv_num(rep.values[i]) << "\n";
  return os.str();
}

inline std::string to_csv(const EmbeddingTable& table) {
  std::ostringstream os;
  os << "p," << detail::csv_num(table.params.p) << "\n"
     << "q," << detail::csv_num(table.q) << "\n"
     << "r," << detail::csv_num(table.params.r) << "\n\n"
     << "t,source_norm,potential_norm,ratio";
  if (table.gradient_column) os << ",gradient_max,gradient_ratio";
  os << "\n";
  for (const auto& row : table.rows) {
    os << detail::csv_num(row.t) << "," << detail::csv_num(row.source_norm) << ","
       << detail::csv_num(row.potential_norm) << "," << detail::csv_num(row.ratio);
    if (table.gradient_column)
      os << "," << detail::csv_num(row.gradient_max) << ","
         << detail::csv_num(row.gradient_ratio);
    os << "\n";
  }
  return os.str();
}

inline std::string to_csv(const DiscreteSolution& sol) {
  const int n = sol.params.n;
  std::ostringstream os;
  os << "converged," << (sol.converged ? "true" : "false") << "\n"
     << "iterations," << sol.iterations_used << "\n"
     << "final_increment," << detail::csv_num(sol.final_increment) << "\n\n";
  for (int i = 0; i < n; ++i) os << "x" << i << ",";
  os << "value";
  const bool grads = !sol.gradients.empty();
  if (grads)
    for (int i = 0; i < n; ++i) os << ",grad" << i;
  os << "\n";
  for (std::size_t k = 0; k < sol.nodes.size(); ++k) {
    for (int i = 0; i < n; ++i) os << detail::csv_num(sol.nodes[k][i]) << ",";
    os << detail::csv_num(sol.values[k]);
    if (grads)
      for (int i = 0; i < n; ++i) os << "," << detail::csv_num(sol.gradients[k][i]);
    os << "\n";
  }
  return os.str();
}

inline std::string to_csv(const std::vector<PropertyResult>& suite) {
  std::ostringstream os;
  os << "name,pass,samples,violations,worst\n";
  for (const auto& r : suite)
    os << r.name << "," << (r.pass ? "true" : "false") << "," << r.samples << ","
       << r.violations << "," << detail::csv_num(r.worst) << "\n";
  return os.str();
}

// All report files land via temp-and-rename so a failed run never leaves a
// partial file behind.  Content must be fully materialized by the caller
// first; serialization of an already computed report cannot throw.
inline void write_text_atomic(const std::filesystem::path& path, const std::string& content) {
  const std::filesystem::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw ConfigError("cannot open " + tmp.string() + " for writing");
    out << content;
    if (!out.flush()) throw ConfigError("short write to " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

// Writes <dir>/<basename>.<ext> in the requested format.  Returns the path.
template <typename Report>
std::filesystem::path write_report(const std::filesystem::path& dir, const std::string& basename,
                                   const std::string& format, const Report& rep) {
  std::filesystem::create_directories(dir);
  if (format == "json") {
    const std::filesystem::path p = dir / (basename + ".json");
    write_text_atomic(p, to_json(rep).dump(2) + "\n");
    return p;
  }
  if (format == "csv") {
    const std::filesystem::path p = dir / (basename + ".csv");
    write_text_atomic(p, to_csv(rep));
    return p;
  }
  throw ConfigError("output format must be json or csv");
}

}  // namespace report
}  // namespace fraclap

#endif  // FRACLAP_REPORT_HPP
