#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>
#include <string>

#include "gtest/gtest.h"
#include "adbeam/harness.hpp"

namespace adbeam {
namespace {

namespace fs = std::filesystem;

fs::path scratch(const std::string& name) {
  const auto base = fs::temp_directory_path() / "adbeam_test_harness" / name;
  fs::remove_all(base);
  return base;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<std::string> lines(const fs::path& p) {
  std::ifstream in(p);
  std::vector<std::string> out;
  for (std::string l; std::getline(in, l);) out.push_back(l);
  return out;
}

const char* kTheorem = R"({
  "kappa1": 1.0, "kappa2": 1.0, "length": 1.0,
  "initial": {"constant": {"v0": 0.0, "v1": 2.0}},
  "solver": "closed_form", "n_modes": 8, "grid_size": 16,
  "t_final": 2.0, "sample_dt": 0.01,
  "outputs": ["energy", "events", "spectrum", "field", "decay", "report"]
})";

TEST(ParseConfig, Defaults) {
  const auto cfg = parse_config(
      R"({"kappa1": 1, "kappa2": 2, "length": 3, "initial": {"constant": {"v0": 0.1, "v1": 0}}})");
  EXPECT_EQ(cfg.params, (BeamParams{1, 2, 3}));
  EXPECT_EQ(cfg.solver, Solver::Splitting);
  EXPECT_EQ(cfg.n_modes, 32u);
  EXPECT_EQ(cfg.grid_size, 64u);
  EXPECT_EQ(cfg.stepper.t_final, 10.0);
  EXPECT_DOUBLE_EQ(cfg.stepper.dt, default_dt(cfg.params, SpectralBasis(32, 64, 3.0)));
  EXPECT_EQ(cfg.outputs, (std::set<std::string>{"energy", "events", "report"}));
  EXPECT_EQ(cfg.initial.kind, InitialSpec::Kind::Constant);
  EXPECT_EQ(cfg.initial.v0, 0.1);
}

TEST(ParseConfig, Errors) {
  const std::string base = R"("kappa1": 1, "kappa2": 1, "length": 1, "initial": {"constant": {"v0": 0, "v1": 0}})";
  auto bad = [&](const std::string& extra) { return "{" + base + extra + "}"; };
  EXPECT_THROW(parse_config("not json"), ConfigError);
  EXPECT_THROW(parse_config(bad(R"(, "bogus": 1)")), ConfigError);
  EXPECT_THROW(parse_config(bad(R"(, "n_modes": 300, "grid_size": 256)")), ConfigError);
  EXPECT_THROW(parse_config(bad(R"(, "solver": "euler")")), ConfigError);
  EXPECT_THROW(parse_config(bad(R"(, "dt": -1)")), ConfigError);
  EXPECT_THROW(parse_config(bad(R"(, "outputs": ["pictures"])")), ConfigError);
  EXPECT_THROW(parse_config(bad(R"(, "n_split": 32)")), ConfigError);
  EXPECT_THROW(parse_config(bad(R"(, "decay_band": [0, 3])")), ConfigError);
  EXPECT_THROW(parse_config(R"({"kappa1": 1, "kappa2": 1, "length": 1})"), ConfigError);
  EXPECT_THROW(parse_config(R"({"kappa1": 0, "kappa2": 1, "length": 1,
      "initial": {"constant": {"v0": 0, "v1": 0}}})"), ConfigError);
  try {
    parse_config(bad(R"(, "n_modes": 300, "grid_size": 256)"));
  } catch (const ConfigError& e) {
    EXPECT_NE(std::string(e.what()).find("n_modes <= grid_size"), std::string::npos);
  }
}

TEST(ConfigToJson, RoundTrips) {
  for (const char* text : {kTheorem,
                           R"({"kappa1": 1.5, "kappa2": 0.5, "length": 2,
                               "initial": {"cosine_series": {"displacement": [[0, 0.9], [3, 0.1]],
                                                             "velocity": [[1, -0.2]]}},
                               "n_modes": 16, "grid_size": 40, "dt": 0.002,
                               "crossing_refinement": false, "n_split": 3,
                               "decay_band": [2, 9], "out_dir": "elsewhere"})"}) {
    const auto cfg = parse_config(text);
    EXPECT_EQ(parse_config(config_to_json(cfg).dump()), cfg);
  }
}

TEST(FormatReal, ShortestExact) {
  EXPECT_EQ(format_real(0.5), "0.5");
  EXPECT_EQ(std::stod(format_real(std::numbers::pi)), std::numbers::pi);
}

TEST(RunScenario, TheoremProducesOneTransition) {
  auto cfg = parse_config(kTheorem);
  cfg.out_dir = scratch("theorem").string();
  const auto r = run_scenario(cfg);
  ASSERT_EQ(r.exit_code, kExitOk) << r.message;
  const auto ev = lines(fs::path(cfg.out_dir) / "events.csv");
  ASSERT_EQ(ev.size(), 2u);
  EXPECT_EQ(ev[0], "t,direction,n_points,refined");
  const double t = std::stod(ev[1].substr(0, ev[1].find(',')));
  EXPECT_NEAR(t, std::numbers::pi / 6, 1e-9);
  EXPECT_NE(ev[1].find(",debond,16,true"), std::string::npos);

  const auto& tr = r.manifest["summary"]["transitions"];
  ASSERT_EQ(tr.size(), 1u);
  EXPECT_NEAR(tr[0]["c1"].get<double>(), std::sqrt(3.0), 1e-9);
  EXPECT_EQ(r.manifest["summary"]["scenario"], "transitions_to_constant_detached");
  EXPECT_TRUE(r.manifest["summary"]["energy"]["dissipation_pass"].get<bool>());

  for (const char* f : {"energy.csv", "events.csv", "spectrum.csv", "field.csv",
                        "decay.csv", "report.txt", "manifest.json"}) {
    EXPECT_TRUE(fs::exists(fs::path(cfg.out_dir) / f)) << f;
  }
  EXPECT_EQ(lines(fs::path(cfg.out_dir) / "energy.csv").front(),
            "t,E_total,E_kin,E_bend,E_adh,regime");
  const auto manifest = nlohmann::json::parse(slurp(fs::path(cfg.out_dir) / "manifest.json"));
  EXPECT_EQ(manifest["version"], kVersion);
  EXPECT_EQ(parse_config(manifest["config"].dump()), cfg);
}

TEST(RunScenario, NeverDetachesWritesHeaderOnly) {
  auto cfg = parse_config(R"({"kappa1": 1, "kappa2": 1, "length": 1,
      "initial": {"constant": {"v0": 0.5, "v1": 0}}, "solver": "closed_form",
      "n_modes": 4, "grid_size": 8, "t_final": 20, "sample_dt": 0.05})");
  cfg.out_dir = scratch("never").string();
  const auto r = run_scenario(cfg);
  ASSERT_EQ(r.exit_code, kExitOk) << r.message;
  EXPECT_EQ(lines(fs::path(cfg.out_dir) / "events.csv").size(), 1u);
  EXPECT_EQ(r.manifest["summary"]["scenario"], "never_detaches");
}

TEST(RunScenario, Deterministic) {
  auto cfg = parse_config(R"({"kappa1": 1, "kappa2": 1, "length": 1,
      "initial": {"cosine_series": {"displacement": [[0, 0.9], [1, 0.3]]}},
      "n_modes": 16, "grid_size": 32, "dt": 0.002, "t_final": 0.5,
      "outputs": ["energy", "events", "spectrum", "field", "decay", "report"]})");
  cfg.out_dir = scratch("det_a").string();
  ASSERT_EQ(run_scenario(cfg).exit_code, kExitOk);
  const auto a = cfg.out_dir;
  cfg.out_dir = scratch("det_b").string();
  ASSERT_EQ(run_scenario(cfg).exit_code, kExitOk);
  for (const char* f : {"energy.csv", "events.csv", "spectrum.csv", "field.csv", "decay.csv",
                        "report.txt"}) {
    EXPECT_EQ(slurp(fs::path(a) / f), slurp(fs::path(cfg.out_dir) / f)) << f;
  }
}

TEST(RunScenario, MixedClosedFormLeavesNothing) {
  auto cfg = parse_config(R"({"kappa1": 1, "kappa2": 1, "length": 1,
      "initial": {"cosine_series": {"displacement": [[0, 0.9], [1, 0.3]]}},
      "solver": "closed_form", "n_modes": 8, "grid_size": 16, "t_final": 1})");
  cfg.out_dir = scratch("mixed").string();
  const auto r = run_scenario(cfg);
  EXPECT_EQ(r.exit_code, kExitMixedRegime);
  EXPECT_FALSE(fs::exists(cfg.out_dir));
}

TEST(RunScenario, UnwritableOutDir) {
  const auto blocker = scratch("blocker");
  fs::create_directories(blocker.parent_path());
  std::ofstream(blocker) << "file";
  auto cfg = parse_config(kTheorem);
  cfg.out_dir = (blocker / "sub").string();
  const auto r = run_scenario(cfg);
  EXPECT_EQ(r.exit_code, kExitIo);
  cfg.out_dir = blocker.string();
  EXPECT_EQ(run_scenario(cfg).exit_code, kExitIo);
  fs::remove(blocker);
}

TEST(LoadSamplesFile, ReadsAndValidates) {
  const auto dir = scratch("samples");
  fs::create_directories(dir);
  const SpectralBasis b(2, 4, 1.0);
  {
    std::ofstream(dir / "ok.csv") << "u,v\n0.1,0\n0.2,0\n0.3,0\n0.4,1\n";
    std::ofstream(dir / "short.csv") << "u,v\n0.1,0\n";
    std::ofstream(dir / "noheader.csv") << "0.1,0\n0.2,0\n0.3,0\n0.4,1\n";
    std::ofstream(dir / "junk.csv") << "u,v\n0.1,0\nx,0\n0.3,0\n0.4,1\n";
  }
  const auto d = load_samples_file((dir / "ok.csv").string(), b);
  EXPECT_EQ(d.displacement, (std::vector<double>{0.1, 0.2, 0.3, 0.4}));
  EXPECT_EQ(d.velocity[3], 1.0);
  for (const char* f : {"short.csv", "noheader.csv", "junk.csv", "missing.csv"}) {
    EXPECT_THROW(load_samples_file((dir / f).string(), b), ConfigError) << f;
  }
}

}  // namespace
}  // namespace adbeam
