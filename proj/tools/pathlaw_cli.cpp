// Command-line front end: list experiments, run them with overrides, and
// emit machine-readable reports. Exit codes: 0 all selected experiments
// pass, 1 any statistical test fails, 2 configuration error.

#include <CLI11.hpp>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <optional>
#include <iostream>
#include <string>
#include <vector>

#include "pathlaw/experiments.hpp"
#include "pathlaw/report_io.hpp"

#ifndef PATHLAW_BUILD_ID
#define PATHLAW_BUILD_ID "unversioned"
#endif

namespace fs = std::filesystem;
using namespace pathlaw;

namespace {

int cmd_list(const std::string& format) {
  if (format == "json") {
    std::cout << "[";
    const auto& infos = list_experiments();
    for (std::size_t i = 0; i < infos.size(); ++i) {
      if (i) std::cout << ",";
      std::cout << "{\"id\":\"" << to_string(infos[i].id)
                << "\",\"description\":\"" << infos[i].description
                << "\",\"required_params\":[";
      for (std::size_t j = 0; j < infos[i].required_params.size(); ++j) {
        if (j) std::cout << ",";
        std::cout << '"' << infos[i].required_params[j] << '"';
      }
      std::cout << "]}";
    }
    std::cout << "]\n";
    return 0;
  }
  for (const ExperimentInfo& info : list_experiments()) {
    std::string req;
    for (std::size_t j = 0; j < info.required_params.size(); ++j) {
      if (j) req += ",";
      req += info.required_params[j];
    }
    std::cout << to_string(info.id) << "\t" << (req.empty() ? "-" : req)
              << "\t" << info.description << "\n";
  }
  return 0;
}

// Values read from the flat key=value config file; command-line flags win.
struct ConfigValues {
  std::vector<std::string> ids;
  std::optional<std::uint64_t> seed;
  std::optional<long> n_paths;
  std::optional<int> n_steps;
  std::optional<double> t_horizon, mu, x, alpha, u, truncation, family_alpha;
  std::optional<std::vector<double>> marginals;
  std::optional<int> workers;
  std::optional<std::string> format, out;
};

std::vector<std::string> split_commas(const std::string& s) {
  std::vector<std::string> parts;
  std::string cur;
  for (char c : s) {
    if (c == ',') {
      parts.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  parts.push_back(cur);
  return parts;
}

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r");
  const auto b = s.find_last_not_of(" \t\r");
  return a == std::string::npos ? "" : s.substr(a, b - a + 1);
}

ConfigValues parse_config_file(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw ConfigError("cannot read config file '" + path + "'");
  ConfigValues cfg;
  std::string line;
  int line_no = 0;
  while (std::getline(f, line)) {
    ++line_no;
    const std::string stripped = trim(line);
    if (stripped.empty() || stripped[0] == '#') continue;
    const auto eq = stripped.find('=');
    if (eq == std::string::npos)
      throw ConfigError("config line " + std::to_string(line_no) +
                        ": expected key=value");
    const std::string key = trim(stripped.substr(0, eq));
    const std::string value = trim(stripped.substr(eq + 1));
    try {
      if (key == "id") {
        for (const std::string& part : split_commas(value))
          cfg.ids.push_back(trim(part));
      } else if (key == "seed") {
        cfg.seed = std::stoull(value);
      } else if (key == "n-paths") {
        cfg.n_paths = std::stol(value);
      } else if (key == "n-steps") {
        cfg.n_steps = std::stoi(value);
      } else if (key == "t") {
        cfg.t_horizon = std::stod(value);
      } else if (key == "mu") {
        cfg.mu = std::stod(value);
      } else if (key == "x") {
        cfg.x = std::stod(value);
      } else if (key == "alpha") {
        cfg.alpha = std::stod(value);
      } else if (key == "u") {
        cfg.u = std::stod(value);
      } else if (key == "truncation-T") {
        cfg.truncation = std::stod(value);
      } else if (key == "family-alpha") {
        cfg.family_alpha = std::stod(value);
      } else if (key == "marginals") {
        std::vector<double> m;
        for (const std::string& part : split_commas(value))
          m.push_back(std::stod(trim(part)));
        cfg.marginals = std::move(m);
      } else if (key == "workers") {
        cfg.workers = std::stoi(value);
      } else if (key == "format") {
        cfg.format = value;
      } else if (key == "out") {
        cfg.out = value;
      } else {
        throw ConfigError("config line " + std::to_string(line_no) +
                          ": unknown key '" + key + "'");
      }
    } catch (const std::invalid_argument&) {
      throw ConfigError("config line " + std::to_string(line_no) +
                        ": cannot parse value for '" + key + "'");
    }
  }
  return cfg;
}

bool probe_writable(const std::string& out_dir, std::string& error) {
  std::error_code ec;
  fs::create_directories(out_dir, ec);
  if (ec) {
    error = "cannot create output directory '" + out_dir + "': " +
            ec.message();
    return false;
  }
  const fs::path probe = fs::path(out_dir) / ".pathlaw_write_probe";
  std::ofstream f(probe);
  if (!f) {
    error = "output directory '" + out_dir + "' is not writable";
    return false;
  }
  f.close();
  fs::remove(probe, ec);
  return true;
}

void write_file(const fs::path& path, const std::string& content) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw ConfigError("cannot write '" + path.string() + "'");
  f << content;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "pathlaw: Monte Carlo simulation and verification of exponential-"
      "functional path-transform identities of Brownian motion"};
  app.require_subcommand(1);

  auto* list_cmd = app.add_subcommand("list", "List registered experiments");
  std::string list_format = "text";
  list_cmd->add_option("--format", list_format, "Output format")
      ->check(CLI::IsMember({"text", "json"}));

  auto* run_cmd =
      app.add_subcommand("run", "Run selected experiments and write reports");
  std::vector<std::string> ids;
  std::uint64_t seed = 11;
  long n_paths = 0;
  int n_steps = 0;
  double t_horizon = 0, mu = 0, x = 0, alpha = 0, u = 0, truncation = 0,
         family_alpha = 0;
  std::vector<double> marginals;
  int workers = 1;
  std::string format = "json";
  std::string out_dir;

  run_cmd->add_option("--id", ids, "Experiment id (repeatable) or 'all'")
      ->delimiter(',');
  auto* o_seed = run_cmd->add_option("--seed", seed, "Master seed");
  auto* o_paths = run_cmd->add_option("--n-paths", n_paths, "Paths per pool")
                      ->check(CLI::PositiveNumber);
  auto* o_steps = run_cmd->add_option("--n-steps", n_steps, "Grid steps")
                      ->check(CLI::PositiveNumber);
  auto* o_t = run_cmd->add_option("--t", t_horizon, "Time horizon")
                  ->check(CLI::PositiveNumber);
  auto* o_mu = run_cmd->add_option("--mu", mu, "Drift");
  auto* o_x = run_cmd->add_option("--x", x, "Shift parameter");
  auto* o_alpha = run_cmd->add_option(
      "--alpha", alpha, "Transform/reweighting parameter (alpha or x)");
  auto* o_u = run_cmd->add_option("--u", u, "Duration extension");
  auto* o_trunc =
      run_cmd->add_option("--truncation-T", truncation, "Truncation horizon");
  auto* o_marg = run_cmd
                     ->add_option("--marginals", marginals,
                                  "Marginal times as fractions of t")
                     ->delimiter(',');
  auto* o_fam =
      run_cmd->add_option("--family-alpha", family_alpha, "Family alpha");
  auto* o_workers = run_cmd->add_option("--workers", workers, "Worker threads")
                        ->check(CLI::PositiveNumber);
  auto* o_format = run_cmd->add_option("--format", format, "Report format")
                       ->check(CLI::IsMember({"json", "csv"}));
  auto* o_out = run_cmd->add_option(
      "--out", out_dir, "Output directory (default: print to stdout)");
  int verbosity = 0;
  run_cmd->add_flag("-v", verbosity, "Verbose progress on stderr");
  std::string config_path;
  run_cmd->add_option("--config", config_path,
                      "Flat key=value file mirroring the flag names; "
                      "command-line flags win");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  if (list_cmd->parsed()) return cmd_list(list_format);

  // Resolved overrides, command line first, then the config file.
  ConfigValues eff;
  eff.ids = ids;
  if (o_seed->count()) eff.seed = seed;
  if (o_paths->count()) eff.n_paths = n_paths;
  if (o_steps->count()) eff.n_steps = n_steps;
  if (o_t->count()) eff.t_horizon = t_horizon;
  if (o_mu->count()) eff.mu = mu;
  if (o_x->count()) eff.x = x;
  if (o_alpha->count()) eff.alpha = alpha;
  if (o_u->count()) eff.u = u;
  if (o_trunc->count()) eff.truncation = truncation;
  if (o_fam->count()) eff.family_alpha = family_alpha;
  if (o_marg->count()) eff.marginals = marginals;

  if (!config_path.empty()) {
    ConfigValues cfg;
    try {
      cfg = parse_config_file(config_path);
    } catch (const std::exception& e) {
      std::cerr << "error: " << e.what() << "\n";
      return 2;
    }
    if (eff.ids.empty()) eff.ids = cfg.ids;
    if (!eff.seed) eff.seed = cfg.seed;
    if (!eff.n_paths) eff.n_paths = cfg.n_paths;
    if (!eff.n_steps) eff.n_steps = cfg.n_steps;
    if (!eff.t_horizon) eff.t_horizon = cfg.t_horizon;
    if (!eff.mu) eff.mu = cfg.mu;
    if (!eff.x) eff.x = cfg.x;
    if (!eff.alpha) eff.alpha = cfg.alpha;
    if (!eff.u) eff.u = cfg.u;
    if (!eff.truncation) eff.truncation = cfg.truncation;
    if (!eff.family_alpha) eff.family_alpha = cfg.family_alpha;
    if (!eff.marginals) eff.marginals = cfg.marginals;
    if (cfg.workers && !o_workers->count()) workers = *cfg.workers;
    if (cfg.format && !o_format->count()) format = *cfg.format;
    if (cfg.out && !o_out->count()) out_dir = *cfg.out;
  }
  if (eff.ids.empty()) {
    std::cerr << "error: no experiment selected (use --id or a config "
                 "file with an id= line)\n";
    return 2;
  }
  ids = eff.ids;
  if (eff.seed) seed = *eff.seed;

  // Resolve the selection before any simulation starts.
  std::vector<ExperimentId> selection;
  for (const std::string& name : ids) {
    if (name == "all") {
      selection.clear();
      for (const ExperimentInfo& info : list_experiments())
        selection.push_back(info.id);
      break;
    }
    const auto id = experiment_id_from_string(name);
    if (!id) {
      std::cerr << "error: unknown experiment id '" << name
                << "' (see 'pathlaw list')\n";
      return 2;
    }
    selection.push_back(*id);
  }

  if (!out_dir.empty()) {
    std::string error;
    if (!probe_writable(out_dir, error)) {
      std::cerr << "error: " << error << "\n";
      return 2;
    }
  }

  std::vector<ExperimentReport> reports;
  try {
    for (ExperimentId id : selection) {
      ExperimentSpec spec = default_spec(id);
      if (eff.seed) spec.seed = *eff.seed;
      if (eff.n_paths) spec.n_paths = *eff.n_paths;
      if (eff.n_steps) spec.n_steps = *eff.n_steps;
      if (eff.t_horizon) spec.t_horizon = *eff.t_horizon;
      if (eff.mu) spec.mu = *eff.mu;
      if (eff.x) spec.x = *eff.x;
      if (eff.alpha) spec.alpha_or_x_weight = *eff.alpha;
      if (eff.u) spec.u_extension = *eff.u;
      if (eff.truncation) spec.truncation_T = *eff.truncation;
      if (eff.marginals) spec.marginal_times = *eff.marginals;
      if (eff.family_alpha) spec.family_alpha = *eff.family_alpha;

      if (verbosity > 0)
        std::cerr << "running " << to_string(id) << " (n_paths="
                  << spec.n_paths << ", n_steps=" << spec.n_steps
                  << ", seed=" << spec.seed << ")\n";
      ExperimentReport rep = run_experiment(spec, workers);
      if (verbosity > 0) {
        std::cerr << (rep.overall_pass ? "  PASS " : "  FAIL ")
                  << to_string(id) << " (" << rep.wall_time_s << " s)\n";
        if (verbosity > 1)
          for (const TestReport& t : rep.tests)
            std::cerr << "    " << (t.pass ? "pass " : "FAIL ") << t.test_name
                      << " statistic=" << t.statistic << "\n";
      }
      reports.push_back(std::move(rep));
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }

  const std::string build_id = PATHLAW_BUILD_ID;
  try {
    if (out_dir.empty()) {
      if (format == "json") {
        std::string doc = "{\"build_id\":\"" + build_id +
                          "\",\"seed\":" + std::to_string(seed) +
                          ",\"reports\":[";
        for (std::size_t i = 0; i < reports.size(); ++i) {
          if (i) doc += ",";
          std::string r = to_json(reports[i]);
          if (!r.empty() && r.back() == '\n') r.pop_back();
          doc += r;
        }
        bool all = true;
        for (const ExperimentReport& r : reports) all &= r.overall_pass;
        doc += "],\"overall_pass\":";
        doc += all ? "true" : "false";
        doc += "}\n";
        std::cout << doc;
      } else {
        std::cout << reports_csv(reports);
      }
    } else {
      const fs::path dir(out_dir);
      for (const ExperimentReport& rep : reports) {
        const std::string stem = to_string(rep.spec.id);
        if (format == "json")
          write_file(dir / (stem + ".json"), to_json(rep));
        else
          write_file(dir / (stem + ".csv"), reports_csv({rep}));
      }
      if (format == "json")
        write_file(dir / "summary.json",
                   suite_summary_json(reports, seed, build_id));
      else
        write_file(dir / "summary.csv",
                   suite_summary_csv(reports, seed, build_id));
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }

  for (const ExperimentReport& r : reports)
    if (!r.overall_pass) return 1;
  return 0;
}
