// End-to-end tests of the command-line tool: exit codes, report files,
// format switches, determinism.  The binary path arrives via the
// FRACLAP_CLI_PATH compile definition.

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <catch2/catch_amalgamated.hpp>
#include <json.hpp>

#ifndef FRACLAP_CLI_PATH
#error "FRACLAP_CLI_PATH must point at the CLI binary"
#endif

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

int run_cli(const std::string& args) {
  const std::string cmd = std::string(FRACLAP_CLI_PATH) + " " + args + " >/dev/null 2>&1";
  const int st = std::system(cmd.c_str());
  return WIFEXITED(st) ? WEXITSTATUS(st) : -1;
}

fs::path fresh_dir(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "fraclap_cli_tests" / name;
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string write_config(const fs::path& dir, const std::string& body) {
  const fs::path p = dir / "config.json";
  std::ofstream out(p);
  out << body;
  return p.string();
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

}  // namespace

TEST_CASE("kernel-eval writes a versioned report", "[cli]") {
  const fs::path dir = fresh_dir("kernel_eval");
  REQUIRE(run_cli("kernel-eval --out " + dir.string()) == 0);
  const json j = json::parse(slurp(dir / "kernel_eval.json"));
  CHECK(j.at("schema_version") == 1);
  CHECK(j.at("constants").at("green_norm").get<double>() > 0.0);
  CHECK(j.at("constants").at("boundary_blowup").get<double>() > 0.0);
  REQUIRE(j.at("green_samples").is_array());
  CHECK(j.at("green_samples").size() > 10);
  for (const auto& row : j.at("green_samples")) CHECK(row.at("green").get<double>() > 0.0);
  for (const auto& row : j.at("poisson_samples")) CHECK(row.at("poisson").get<double>() > 0.0);
}

TEST_CASE("csv format switch produces csv", "[cli]") {
  const fs::path dir = fresh_dir("kernel_eval_csv");
  REQUIRE(run_cli("kernel-eval --out " + dir.string() + " --format csv") == 0);
  CHECK_FALSE(fs::exists(dir / "kernel_eval.json"));
  const std::string text = slurp(dir / "kernel_eval.csv");
  CHECK(text.rfind("schema_version,1\n", 0) == 0);
  CHECK(text.find("green,gradient_norm,gap_ratio") != std::string::npos);
}

TEST_CASE("verify-nonuniqueness passes at the default parameter point", "[cli]") {
  const fs::path dir = fresh_dir("nonuniqueness");
  REQUIRE(run_cli("verify-nonuniqueness --out " + dir.string()) == 0);
  const json j = json::parse(slurp(dir / "nonuniqueness.json"));
  CHECK(j.at("pass") == true);
  CHECK(j.at("trace").at("classification") == "positive");
  CHECK(j.at("control_classification") == "zero");
  CHECK(j.at("pv").at("worst").get<double>() < j.at("pv").at("bound").get<double>());
}

TEST_CASE("trace classifies a configured field", "[cli]") {
  const fs::path dir = fresh_dir("trace");
  const std::string cfg = write_config(dir, R"json({
    "params": {"n": 2, "s": 0.75},
    "fields": {"u": "inside((1-|x|^2)^(-0.25))"},
    "output": {"dir": ")json" + dir.string() + R"json("}
  })json");
  REQUIRE(run_cli("trace --config " + cfg) == 0);
  const json j = json::parse(slurp(dir / "trace.json"));
  CHECK(j.at("trace").at("classification") == "positive");
  CHECK(j.at("trace").at("values").size() == 6);
}

TEST_CASE("solve writes solution and summary", "[cli]") {
  const fs::path dir = fresh_dir("solve");
  const std::string cfg = write_config(dir, R"({
    "params": {"n": 2, "s": 0.75, "r": 0.5, "p": 2.0},
    "solver": {"radial_levels": 4, "angular_points": 8, "tol": 1e-7, "tau_steps": 2},
    "fields": {"f": "1"},
    "output": {"dir": ")" + dir.string() + R"("}
  })");
  REQUIRE(run_cli("solve --config " + cfg) == 0);
  const json sol = json::parse(slurp(dir / "solution.json"));
  CHECK(sol.at("converged") == true);
  CHECK(sol.at("values").size() == 1 + 4 * 8);
  CHECK(sol.at("tau_path") == json::array({0.5, 1.0}));
  const json sum = json::parse(slurp(dir / "solve_summary.json"));
  CHECK(sum.at("residual").get<double>() < 0.05);
  const double ratio = sum.at("apriori_ratio").get<double>();
  CHECK(ratio > 0.5);
  CHECK(ratio < 1.5);
}

TEST_CASE("malformed input exits 2 and leaves no files", "[cli]") {
  const fs::path dir = fresh_dir("bad_inputs");
  const fs::path out = dir / "out";

  SECTION("broken JSON") {
    const std::string cfg = write_config(dir, "{nope");
    CHECK(run_cli("solve --config " + cfg + " --out " + out.string()) == 2);
  }
  SECTION("unknown key") {
    const std::string cfg = write_config(dir, R"({"params": {"sigma": 1}})");
    CHECK(run_cli("solve --config " + cfg + " --out " + out.string()) == 2);
  }
  SECTION("wrong type") {
    const std::string cfg = write_config(dir, R"({"params": {"n": "two"}})");
    CHECK(run_cli("solve --config " + cfg + " --out " + out.string()) == 2);
  }
  SECTION("malformed field expression") {
    const std::string cfg = write_config(dir, R"({"fields": {"f": "1 + * 2"}})");
    CHECK(run_cli("solve --config " + cfg + " --out " + out.string()) == 2);
  }
  SECTION("missing forcing") {
    const std::string cfg = write_config(dir, R"({})");
    CHECK(run_cli("solve --config " + cfg + " --out " + out.string()) == 2);
  }
  SECTION("missing config file") {
    CHECK(run_cli("solve --config " + (dir / "absent.json").string() + " --out " +
                  out.string()) == 2);
  }
  SECTION("usage errors") {
    CHECK(run_cli("") == 2);
    CHECK(run_cli("no-such-command") == 2);
    CHECK(run_cli("kernel-eval --format xml --out " + out.string()) == 2);
  }
  CHECK_FALSE(fs::exists(out));
}

TEST_CASE("numerical failure exits 3 and leaves no files", "[cli]") {
  const fs::path dir = fresh_dir("numerical");
  const fs::path out = dir / "out";
  // Reaction large enough that single-step continuation cannot contract.
  const std::string cfg = write_config(dir, R"({
    "params": {"n": 2, "s": 0.75, "r": 0.5, "p": 2.0},
    "solver": {"radial_levels": 4, "angular_points": 8, "tol": 1e-7, "tau_steps": 1},
    "fields": {"f": "1", "c": "40"}
  })");
  CHECK(run_cli("solve --config " + cfg + " --out " + out.string()) == 3);
  CHECK_FALSE(fs::exists(out));
}

TEST_CASE("properties suite passes and is seed deterministic", "[cli]") {
  const fs::path a = fresh_dir("props_a");
  const fs::path b = fresh_dir("props_b");
  REQUIRE(run_cli("properties --seed 5 --out " + a.string()) == 0);
  REQUIRE(run_cli("properties --seed 5 --out " + b.string()) == 0);
  CHECK(slurp(a / "properties.json") == slurp(b / "properties.json"));

  const json j = json::parse(slurp(a / "properties.json"));
  CHECK(j.at("pass") == true);
  CHECK(j.at("seed") == 5);
  bool saw_control = false;
  for (const auto& row : j.at("results")) {
    CHECK(row.at("pass") == true);
    saw_control = saw_control || row.at("name") == "corrupted-constant-control";
  }
  CHECK(saw_control);
}

TEST_CASE("embedding-table reports refinement stability", "[cli]") {
  const fs::path dir = fresh_dir("embedding");
  const std::string cfg = write_config(dir, R"({
    "params": {"n": 2, "s": 0.75, "r": 0.5, "p": 1.0},
    "embedding": {"q": 1.2, "t_values": [0.2, 0.4], "tab_samples": 12},
    "output": {"dir": ")" + dir.string() + R"("}
  })");
  REQUIRE(run_cli("embedding-table --config " + cfg) == 0);
  const json j = json::parse(slurp(dir / "embedding.json"));
  CHECK(j.at("pass") == true);
  CHECK(j.at("ratio_drift").get<double>() <= 0.10);
  CHECK(j.at("base").at("rows").size() == 2);
  CHECK(j.at("refined").at("rows").size() == 2);

  // The critical exponent is rejected as a usage error.
  const std::string bad = write_config(dir, R"({
    "params": {"n": 2, "s": 0.75, "r": 0.5, "p": 1.0},
    "embedding": {"q": 4.0, "t_values": [0.2], "tab_samples": 12}
  })");
  CHECK(run_cli("embedding-table --config " + bad + " --out " + dir.string()) == 2);
}

TEST_CASE("refine flag is accepted and reruns cleanly", "[cli]") {
  const fs::path dir = fresh_dir("refine");
  CHECK(run_cli("kernel-eval --refine 2 --out " + dir.string()) == 0);
  CHECK(fs::exists(dir / "kernel_eval.json"));
  // Idempotent rerun overwrites in place.
  CHECK(run_cli("kernel-eval --refine 2 --out " + dir.string()) == 0);
}
