#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <json.hpp>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>

namespace fs = std::filesystem;

namespace {

struct CliResult {
  int exit_code;
  std::string out;
};

std::string bin_path() {
  const char* p = std::getenv("PATHLAW_BIN");
  REQUIRE(p != nullptr);
  return p;
}

CliResult run_cli(const std::string& args) {
  const fs::path out_file =
      fs::temp_directory_path() / "pathlaw_cli_test_stdout.txt";
  const std::string cmd =
      bin_path() + " " + args + " > " + out_file.string() + " 2>/dev/null";
  const int raw = std::system(cmd.c_str());
  CliResult res;
  res.exit_code = WEXITSTATUS(raw);
  std::ifstream f(out_file);
  res.out.assign(std::istreambuf_iterator<char>(f),
                 std::istreambuf_iterator<char>());
  return res;
}

int count_lines(const std::string& s) {
  int n = 0;
  for (char c : s)
    if (c == '\n') ++n;
  return n;
}

}  // namespace

TEST_CASE("list prints one line per experiment") {
  const CliResult r = run_cli("list");
  CHECK(r.exit_code == 0);
  CHECK(count_lines(r.out) == 19);
}

TEST_CASE("list --format json yields nineteen entries") {
  const CliResult r = run_cli("list --format json");
  CHECK(r.exit_code == 0);
  const auto doc = nlohmann::json::parse(r.out);
  REQUIRE(doc.is_array());
  CHECK(doc.size() == 19);
  bool dufresne_marked = false;
  for (const auto& entry : doc)
    if (entry["id"] == "DUFRESNE")
      for (const auto& req : entry["required_params"])
        if (req.get<std::string>().find("mu>0") != std::string::npos)
          dufresne_marked = true;
  CHECK(dufresne_marked);
}

TEST_CASE("unknown flags exit with the usage code") {
  CHECK(run_cli("list --bogus").exit_code == 2);
}

TEST_CASE("run of the algebra suite succeeds and reports the residual") {
  const CliResult r = run_cli("run --id ALG_SUITE --seed 7 --format json");
  CHECK(r.exit_code == 0);
  CHECK(r.out.find("max_residual") != std::string::npos);
  const auto doc = nlohmann::json::parse(r.out);
  CHECK(doc["overall_pass"] == true);
  CHECK(doc["reports"][0]["spec"]["seed"] == 7);
}

TEST_CASE("small runs always record their p-values") {
  const CliResult r =
      run_cli("run --id THM_MAIN --n-paths 1000 --n-steps 128 --seed 5");
  CHECK((r.exit_code == 0 || r.exit_code == 1));
  const auto doc = nlohmann::json::parse(r.out);
  int with_p = 0;
  for (const auto& t : doc["reports"][0]["tests"])
    if (t.contains("p_value")) ++with_p;
  CHECK(with_p >= 5);
}

TEST_CASE("unknown experiment ids are rejected before simulation") {
  CHECK(run_cli("run --id NOT_AN_EXPERIMENT").exit_code == 2);
}

TEST_CASE("unwritable output directories are rejected before simulation") {
  CHECK(run_cli("run --id THM_MAIN --out /proc/definitely/not/writable")
            .exit_code == 2);
}

TEST_CASE("statistical failure surfaces as exit code 1") {
  // a tiny truncation horizon breaks the limiting-functional identity
  const CliResult r = run_cli(
      "run --id DUFRESNE --truncation-T 0.1 --n-paths 5000 --n-steps 256");
  CHECK(r.exit_code == 1);
}

TEST_CASE("config file values apply but flags win") {
  const fs::path cfg = fs::temp_directory_path() / "pathlaw_test_cfg.ini";
  {
    std::ofstream f(cfg);
    f << "seed=1\n"
      << "n-paths=500\n"
      << "n-steps=64\n";
  }
  const CliResult r = run_cli("run --id QREV --config " + cfg.string() +
                              " --seed 7");
  CHECK((r.exit_code == 0 || r.exit_code == 1));
  const auto doc = nlohmann::json::parse(r.out);
  CHECK(doc["reports"][0]["spec"]["seed"] == 7);      // flag beats file
  CHECK(doc["reports"][0]["spec"]["n_paths"] == 500); // file applies
  CHECK(doc["reports"][0]["spec"]["n_steps"] == 64);
}

TEST_CASE("csv output flattens one row per test") {
  const CliResult r = run_cli(
      "run --id QREV --n-paths 500 --n-steps 64 --seed 9 --format csv");
  CHECK((r.exit_code == 0 || r.exit_code == 1));
  CHECK(r.out.rfind("experiment,test_name,statistic,p_value", 0) == 0);
  CHECK(r.out.find("QREV,") != std::string::npos);
  CHECK(r.out.find("\r\n") != std::string::npos);
}

TEST_CASE("per-experiment files land in the output directory") {
  const fs::path dir = fs::temp_directory_path() / "pathlaw_cli_out";
  fs::remove_all(dir);
  const CliResult r = run_cli("run --id QREV --n-paths 500 --n-steps 64 "
                              "--seed 9 --out " +
                              dir.string());
  CHECK((r.exit_code == 0 || r.exit_code == 1));
  CHECK(fs::exists(dir / "QREV.json"));
  CHECK(fs::exists(dir / "summary.json"));
  std::ifstream f(dir / "summary.json");
  const auto doc = nlohmann::json::parse(f);
  CHECK(doc.contains("build_id"));
  CHECK(doc["seed"] == 9);
  CHECK(doc["experiments"][0]["spec"]["n_paths"] == 500);
  fs::remove_all(dir);
}
