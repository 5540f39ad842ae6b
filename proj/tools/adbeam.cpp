// Command-line front end: `simulate` runs configured scenarios, `verify`
// runs the acceptance suites.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <future>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "adbeam/acceptance.hpp"
#include "adbeam/harness.hpp"

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw adbeam::ConfigError("cannot read config " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

struct Overrides {
  std::string out_dir;
  std::string solver;
  double dt = 0.0;
  double t_final = 0.0;
  std::string emit;
};

// Command-line overrides are merged into the document before validation so
// that every constraint is checked once.
adbeam::RunConfig load_config(const std::string& path, const Overrides& o) {
  auto doc = nlohmann::json::parse(read_file(path), nullptr, false);
  if (doc.is_discarded()) throw adbeam::ConfigError("config is not valid JSON: " + path);
  if (!doc.is_object()) throw adbeam::ConfigError("config must be a JSON object");
  if (!o.out_dir.empty()) doc["out_dir"] = o.out_dir;
  if (!o.solver.empty()) doc["solver"] = o.solver;
  if (o.dt > 0.0) doc["dt"] = o.dt;
  if (o.t_final > 0.0) doc["t_final"] = o.t_final;
  if (!o.emit.empty()) {
    std::vector<std::string> names;
    std::stringstream ss(o.emit);
    for (std::string item; std::getline(ss, item, ',');) {
      if (!item.empty()) names.push_back(item);
    }
    names.push_back("report");
    doc["outputs"] = names;
  }
  // A samples file path is relative to the config file.
  if (doc.contains("initial") && doc["initial"].is_object() &&
      doc["initial"].contains("samples_file") && doc["initial"]["samples_file"].is_string()) {
    std::filesystem::path p = doc["initial"]["samples_file"].get<std::string>();
    if (p.is_relative()) {
      doc["initial"]["samples_file"] =
          (std::filesystem::path(path).parent_path() / p).lexically_normal().string();
    }
  }
  return adbeam::parse_config(doc.dump());
}

int report(const adbeam::RunResult& r, const std::string& label) {
  if (r.exit_code == adbeam::kExitOk) {
    std::printf("%s: ok (%zu files)\n", label.c_str(), r.files.size());
  } else {
    std::fprintf(stderr, "%s: error (exit %d): %s\n", label.c_str(), r.exit_code,
                 r.message.c_str());
  }
  return r.exit_code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Spectral simulator for a beam with breakable adhesion"};
  app.require_subcommand(1);

  std::vector<std::string> configs;
  Overrides overrides;
  bool sweep = false;
  auto* simulate = app.add_subcommand("simulate", "run a configured scenario");
  simulate->add_option("--config", configs, "JSON config file (repeat with --sweep)")->required();
  simulate->add_option("--out-dir", overrides.out_dir, "output directory");
  simulate->add_option("--solver", overrides.solver, "closed_form or splitting")
      ->check(CLI::IsMember({"closed_form", "splitting"}));
  simulate->add_option("--dt", overrides.dt, "time step")->check(CLI::PositiveNumber);
  simulate->add_option("--t-final", overrides.t_final, "final time")->check(CLI::PositiveNumber);
  simulate->add_option("--emit", overrides.emit,
                       "comma-separated outputs: energy,spectrum,events,field,decay");
  simulate->add_flag("--sweep", sweep,
                     "run every config concurrently, each into <out-dir>/<config name>");

  std::string suite = "all";
  std::string scratch = (std::filesystem::temp_directory_path() / "adbeam_verify").string();
  auto* verify = app.add_subcommand("verify", "run the acceptance suites");
  verify->add_option("--suite", suite, "theorem, corollary, convergence or all")
      ->check(CLI::IsMember({"theorem", "corollary", "convergence", "all"}));
  verify->add_option("--scratch-dir", scratch, "directory for temporary outputs");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : adbeam::kExitConfig;
  }

  if (*verify) {
    bool all_pass = true;
    for (const auto& criterion : adbeam::acceptance::suite(suite, scratch)) {
      const auto r = criterion();
      all_pass = all_pass && r.passed;
      std::printf("%s\n", adbeam::acceptance::format_line(r).c_str());
      std::fflush(stdout);
    }
    std::printf("%s\n", all_pass ? "all criteria passed" : "some criteria FAILED");
    return all_pass ? 0 : 1;
  }

  if (configs.size() > 1 && !sweep) {
    std::fprintf(stderr, "several --config given; add --sweep to run them all\n");
    return adbeam::kExitConfig;
  }

  if (!sweep) {
    try {
      const auto cfg = load_config(configs.front(), overrides);
      return report(adbeam::run_scenario(cfg), configs.front());
    } catch (const adbeam::Error& e) {
      std::fprintf(stderr, "%s: config error: %s\n", configs.front().c_str(), e.what());
      return adbeam::kExitConfig;
    }
  }

  // Sweep: independent runs, each with its own subdirectory.
  std::vector<std::future<adbeam::RunResult>> runs;
  int worst = 0;
  for (const auto& path : configs) {
    adbeam::RunConfig cfg;
    try {
      Overrides o = overrides;
      o.out_dir.clear();
      cfg = load_config(path, o);
    } catch (const adbeam::Error& e) {
      std::fprintf(stderr, "%s: config error: %s\n", path.c_str(), e.what());
      worst = std::max(worst, static_cast<int>(adbeam::kExitConfig));
      runs.emplace_back();
      continue;
    }
    const std::string root = overrides.out_dir.empty() ? cfg.out_dir : overrides.out_dir;
    cfg.out_dir = (std::filesystem::path(root) / std::filesystem::path(path).stem()).string();
    runs.push_back(std::async(std::launch::async, [cfg] { return adbeam::run_scenario(cfg); }));
  }
  for (std::size_t i = 0; i < runs.size(); ++i) {
    if (!runs[i].valid()) continue;
    worst = std::max(worst, report(runs[i].get(), configs[i]));
  }
  return worst;
}
