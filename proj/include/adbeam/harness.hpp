#pragma once

// Run configuration, scenario orchestration and CSV / manifest output.
//
// Config document (JSON). Required: kappa1, kappa2, length, initial.
//   initial: {"constant": {"v0": x, "v1": y}}
//          | {"cosine_series": {"displacement": [[n, c], ...],
//                               "velocity": [[n, c], ...]}}
//          | {"samples_file": "path"}      (CSV "u,v", one row per grid point)
// Optional (defaults): solver ("splitting" | "closed_form", "splitting"),
//   n_modes (32), grid_size (64), dt (min(1e-3, 0.1/nu_N)), t_final (10),
//   crossing_refinement (true), snapshot_stride (10), sample_dt (0.01),
//   outputs (["energy", "events", "report"]), out_dir ("out"), n_split (1),
//   decay_band ([2, N/2]).

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

#include "adbeam/beam_core.hpp"
#include "adbeam/closed_form.hpp"
#include "adbeam/diagnostics.hpp"
#include "adbeam/energy.hpp"
#include "adbeam/errors.hpp"
#include "adbeam/spectral_basis.hpp"
#include "adbeam/time_integrator.hpp"
#include "adbeam/version.hpp"

namespace adbeam {

enum class Solver { ClosedForm, Splitting };

inline const char* to_string(Solver s) {
  return s == Solver::ClosedForm ? "closed_form" : "splitting";
}

struct InitialSpec {
  enum class Kind { Constant, CosineSeries, SamplesFile };
  Kind kind = Kind::Constant;
  double v0 = 0.0;
  double v1 = 0.0;
  std::vector<CosineTerm> displacement;
  std::vector<CosineTerm> velocity;
  std::string samples_file;

  friend bool operator==(const InitialSpec&, const InitialSpec&) = default;
};

inline const std::set<std::string>& known_outputs() {
  static const std::set<std::string> names{"energy", "spectrum", "field",
                                           "events", "decay",    "report"};
  return names;
}

struct RunConfig {
  BeamParams params;
  InitialSpec initial;
  Solver solver = Solver::Splitting;
  std::size_t n_modes = 32;
  std::size_t grid_size = 64;
  StepperConfig stepper;
  double sample_dt = 0.01;
  std::set<std::string> outputs{"energy", "events", "report"};
  std::string out_dir = "out";
  std::size_t n_split = 1;
  ModeBand decay_band;

  bool wants(const std::string& name) const { return outputs.count(name) != 0; }

  friend bool operator==(const RunConfig& a, const RunConfig& b) {
    return a.params == b.params && a.initial == b.initial &&
           a.solver == b.solver && a.n_modes == b.n_modes &&
           a.grid_size == b.grid_size && a.stepper == b.stepper &&
           a.sample_dt == b.sample_dt && a.outputs == b.outputs &&
           a.out_dir == b.out_dir && a.n_split == b.n_split &&
           a.decay_band.first == b.decay_band.first &&
           a.decay_band.last == b.decay_band.last;
  }
};

namespace detail {

using nlohmann::json;

inline double get_real(const json& doc, const char* key) {
  const auto& v = doc.at(key);
  if (!v.is_number()) throw ConfigError(std::string(key) + " must be a number");
  return v.get<double>();
}

inline std::size_t get_count(const json& doc, const char* key, std::size_t lo) {
  const auto& v = doc.at(key);
  if (!v.is_number_integer() || v.get<long long>() < static_cast<long long>(lo)) {
    throw ConfigError(std::string(key) + " must be an integer >= " +
                      std::to_string(lo));
  }
  return static_cast<std::size_t>(v.get<long long>());
}

inline std::vector<CosineTerm> parse_terms(const json& arr, const char* key) {
  if (!arr.is_array()) {
    throw ConfigError(std::string("initial.cosine_series.") + key +
                      " must be a list of [n, coefficient] pairs");
  }
  std::vector<CosineTerm> terms;
  for (const auto& item : arr) {
    if (!item.is_array() || item.size() != 2 || !item[0].is_number_integer() ||
        item[0].get<long long>() < 0 || !item[1].is_number()) {
      throw ConfigError(std::string("initial.cosine_series.") + key +
                        " entries must be [n >= 0, coefficient]");
    }
    terms.push_back(CosineTerm{static_cast<std::size_t>(item[0].get<long long>()),
                               item[1].get<double>()});
  }
  return terms;
}

inline InitialSpec parse_initial(const json& doc) {
  if (!doc.is_object() || doc.size() != 1) {
    throw ConfigError(
        "initial must have exactly one of constant, cosine_series, samples_file");
  }
  InitialSpec spec;
  if (doc.contains("constant")) {
    const auto& c = doc["constant"];
    if (!c.is_object()) throw ConfigError("initial.constant must be an object");
    for (const auto& [k, v] : c.items()) {
      if (k != "v0" && k != "v1") {
        throw ConfigError("unknown key initial.constant." + k);
      }
    }
    if (!c.contains("v0") || !c.contains("v1")) {
      throw ConfigError("initial.constant needs v0 and v1");
    }
    spec.kind = InitialSpec::Kind::Constant;
    spec.v0 = get_real(c, "v0");
    spec.v1 = get_real(c, "v1");
  } else if (doc.contains("cosine_series")) {
    const auto& c = doc["cosine_series"];
    if (!c.is_object()) throw ConfigError("initial.cosine_series must be an object");
    for (const auto& [k, v] : c.items()) {
      if (k != "displacement" && k != "velocity") {
        throw ConfigError("unknown key initial.cosine_series." + k);
      }
    }
    spec.kind = InitialSpec::Kind::CosineSeries;
    if (c.contains("displacement")) spec.displacement = parse_terms(c["displacement"], "displacement");
    if (c.contains("velocity")) spec.velocity = parse_terms(c["velocity"], "velocity");
  } else if (doc.contains("samples_file")) {
    if (!doc["samples_file"].is_string()) {
      throw ConfigError("initial.samples_file must be a path string");
    }
    spec.kind = InitialSpec::Kind::SamplesFile;
    spec.samples_file = doc["samples_file"].get<std::string>();
  } else {
    throw ConfigError("unknown initial data kind " + doc.begin().key());
  }
  return spec;
}

inline json terms_to_json(const std::vector<CosineTerm>& terms) {
  json arr = json::array();
  for (const auto& t : terms) arr.push_back(json::array({t.n, t.coefficient}));
  return arr;
}

}  // namespace detail

/// Parses and validates a configuration document; every default is resolved.
inline RunConfig parse_config(const std::string& text) {
  using nlohmann::json;
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  if (!doc.is_object()) throw ConfigError("config must be a JSON object");

  static const std::set<std::string> allowed{
      "kappa1",   "kappa2",     "length",  "initial",          "solver",
      "n_modes",  "grid_size",  "dt",      "t_final",          "crossing_refinement",
      "snapshot_stride", "sample_dt", "outputs", "out_dir", "n_split",
      "decay_band"};
  for (const auto& [k, v] : doc.items()) {
    if (!allowed.count(k)) throw ConfigError("unknown key " + k);
  }
  for (const char* k : {"kappa1", "kappa2", "length", "initial"}) {
    if (!doc.contains(k)) throw ConfigError(std::string("missing key ") + k);
  }

  RunConfig cfg;
  cfg.params.kappa1 = detail::get_real(doc, "kappa1");
  cfg.params.kappa2 = detail::get_real(doc, "kappa2");
  cfg.params.length = detail::get_real(doc, "length");
  cfg.params.validate();
  cfg.initial = detail::parse_initial(doc["initial"]);

  if (doc.contains("solver")) {
    const auto& s = doc["solver"];
    if (s == "closed_form") {
      cfg.solver = Solver::ClosedForm;
    } else if (s == "splitting") {
      cfg.solver = Solver::Splitting;
    } else {
      throw ConfigError("solver must be \"closed_form\" or \"splitting\"");
    }
  }
  if (doc.contains("n_modes")) cfg.n_modes = detail::get_count(doc, "n_modes", 1);
  if (doc.contains("grid_size")) cfg.grid_size = detail::get_count(doc, "grid_size", 2);
  if (cfg.n_modes > cfg.grid_size) {
    throw ConfigError("n_modes <= grid_size violated (n_modes = " +
                      std::to_string(cfg.n_modes) + ", grid_size = " +
                      std::to_string(cfg.grid_size) + ")");
  }
  const SpectralBasis basis(cfg.n_modes, cfg.grid_size, cfg.params.length);

  cfg.stepper.t_final = doc.contains("t_final") ? detail::get_real(doc, "t_final") : 10.0;
  cfg.stepper.dt = doc.contains("dt") ? detail::get_real(doc, "dt")
                                      : default_dt(cfg.params, basis);
  if (doc.contains("crossing_refinement")) {
    if (!doc["crossing_refinement"].is_boolean()) {
      throw ConfigError("crossing_refinement must be true or false");
    }
    cfg.stepper.crossing_refinement = doc["crossing_refinement"].get<bool>();
  }
  cfg.stepper.snapshot_stride =
      doc.contains("snapshot_stride") ? detail::get_count(doc, "snapshot_stride", 1) : 10;
  cfg.stepper.validate();

  if (doc.contains("sample_dt")) cfg.sample_dt = detail::get_real(doc, "sample_dt");
  if (!(cfg.sample_dt > 0.0) || !std::isfinite(cfg.sample_dt)) {
    throw ConfigError("sample_dt must be a finite value > 0");
  }

  if (doc.contains("outputs")) {
    const auto& o = doc["outputs"];
    if (!o.is_array()) throw ConfigError("outputs must be a list of names");
    cfg.outputs.clear();
    for (const auto& item : o) {
      if (!item.is_string() || !known_outputs().count(item.get<std::string>())) {
        throw ConfigError(
            "outputs entries must be among energy, spectrum, field, events, "
            "decay, report");
      }
      cfg.outputs.insert(item.get<std::string>());
    }
  }
  if (doc.contains("out_dir")) {
    if (!doc["out_dir"].is_string() || doc["out_dir"].get<std::string>().empty()) {
      throw ConfigError("out_dir must be a non-empty path string");
    }
    cfg.out_dir = doc["out_dir"].get<std::string>();
  }
  if (doc.contains("n_split")) cfg.n_split = detail::get_count(doc, "n_split", 1);
  if (cfg.n_split >= cfg.n_modes) {
    throw ConfigError("n_split must lie in [1, n_modes - 1]");
  }
  cfg.decay_band = default_decay_band(basis);
  if (doc.contains("decay_band")) {
    const auto& b = doc["decay_band"];
    if (!b.is_array() || b.size() != 2 || !b[0].is_number_integer() ||
        !b[1].is_number_integer()) {
      throw ConfigError("decay_band must be [first, last]");
    }
    const long long first = b[0].get<long long>();
    const long long last = b[1].get<long long>();
    if (first < 1 || last < first || last > static_cast<long long>(cfg.n_modes) - 1) {
      throw ConfigError("decay_band must satisfy 1 <= first <= last <= n_modes - 1");
    }
    cfg.decay_band = ModeBand{static_cast<std::size_t>(first),
                              static_cast<std::size_t>(last)};
  }

  if (cfg.initial.kind == InitialSpec::Kind::CosineSeries) {
    for (const auto* terms : {&cfg.initial.displacement, &cfg.initial.velocity}) {
      for (const auto& t : *terms) {
        if (t.n >= cfg.n_modes) {
          throw ConfigError("initial.cosine_series term n = " + std::to_string(t.n) +
                            " exceeds n_modes - 1 = " + std::to_string(cfg.n_modes - 1));
        }
      }
    }
  }
  return cfg;
}

/// The fully resolved configuration as a document parse_config accepts.
inline nlohmann::json config_to_json(const RunConfig& cfg) {
  using nlohmann::json;
  json doc;
  doc["kappa1"] = cfg.params.kappa1;
  doc["kappa2"] = cfg.params.kappa2;
  doc["length"] = cfg.params.length;
  switch (cfg.initial.kind) {
    case InitialSpec::Kind::Constant:
      doc["initial"] = {{"constant", {{"v0", cfg.initial.v0}, {"v1", cfg.initial.v1}}}};
      break;
    case InitialSpec::Kind::CosineSeries:
      doc["initial"] = {{"cosine_series",
                         {{"displacement", detail::terms_to_json(cfg.initial.displacement)},
                          {"velocity", detail::terms_to_json(cfg.initial.velocity)}}}};
      break;
    case InitialSpec::Kind::SamplesFile:
      doc["initial"] = {{"samples_file", cfg.initial.samples_file}};
      break;
  }
  doc["solver"] = to_string(cfg.solver);
  doc["n_modes"] = cfg.n_modes;
  doc["grid_size"] = cfg.grid_size;
  doc["dt"] = cfg.stepper.dt;
  doc["t_final"] = cfg.stepper.t_final;
  doc["crossing_refinement"] = cfg.stepper.crossing_refinement;
  doc["snapshot_stride"] = cfg.stepper.snapshot_stride;
  doc["sample_dt"] = cfg.sample_dt;
  doc["outputs"] = json(std::vector<std::string>(cfg.outputs.begin(), cfg.outputs.end()));
  doc["out_dir"] = cfg.out_dir;
  doc["n_split"] = cfg.n_split;
  doc["decay_band"] = json::array({cfg.decay_band.first, cfg.decay_band.last});
  return doc;
}

enum ExitCode : int {
  kExitOk = 0,
  kExitIo = 1,
  kExitConfig = 2,
  kExitMixedRegime = 3,
  kExitBlowUp = 4,
};

/// 17 significant digits, locale independent.
inline std::string format_real(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

inline InitialData load_samples_file(const std::string& path,
                                     const SpectralBasis& basis) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open initial.samples_file " + path);
  std::string line;
  InitialData data;
  bool header = true;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (header) {
      header = false;
      if (line == "u,v") continue;
      throw ConfigError("samples file must start with the header u,v");
    }
    const auto comma = line.find(',');
    if (comma == std::string::npos) {
      throw ConfigError("samples file row without comma: " + line);
    }
    try {
      data.displacement.push_back(std::stod(line.substr(0, comma)));
      data.velocity.push_back(std::stod(line.substr(comma + 1)));
    } catch (const std::exception&) {
      throw ConfigError("samples file row is not numeric: " + line);
    }
  }
  if (data.displacement.size() != basis.grid_size()) {
    throw ConfigError("samples file has " + std::to_string(data.displacement.size()) +
                      " rows, grid_size is " + std::to_string(basis.grid_size()));
  }
  data.validate(basis.grid_size());
  return data;
}

/// Initial state; constant and cosine-series data get exact modal coefficients.
inline SimState build_initial_state(const RunConfig& cfg,
                                    const SpectralBasis& basis) {
  ModalCoefficients modal;
  modal.time = 0.0;
  switch (cfg.initial.kind) {
    case InitialSpec::Kind::Constant: {
      modal.alphas.assign(basis.n_modes(), 0.0);
      modal.alpha_dots.assign(basis.n_modes(), 0.0);
      modal.alphas[0] = cfg.initial.v0 * std::sqrt(basis.length());
      modal.alpha_dots[0] = cfg.initial.v1 * std::sqrt(basis.length());
      break;
    }
    case InitialSpec::Kind::CosineSeries:
      modal.alphas = cosine_series_coefficients(cfg.initial.displacement, basis);
      modal.alpha_dots = cosine_series_coefficients(cfg.initial.velocity, basis);
      break;
    case InitialSpec::Kind::SamplesFile: {
      modal = analyze(load_samples_file(cfg.initial.samples_file, basis), basis);
      modal.time = 0.0;
      break;
    }
  }
  return make_state(std::move(modal), basis);
}

struct RunResult {
  int exit_code = kExitOk;
  std::string message;
  std::vector<std::string> files;
  nlohmann::json manifest;
};

namespace detail {

class OutputSet {
 public:
  explicit OutputSet(std::filesystem::path dir) : dir_(std::move(dir)) {}

  std::ofstream open(const std::string& name) {
    const auto path = dir_ / name;
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write " + path.string());
    written_.push_back(path);
    return out;
  }

  void remove_all() noexcept {
    std::error_code ec;
    for (const auto& p : written_) std::filesystem::remove(p, ec);
    written_.clear();
  }

  std::vector<std::string> names() const {
    std::vector<std::string> out;
    for (const auto& p : written_) out.push_back(p.filename().string());
    return out;
  }

 private:
  std::filesystem::path dir_;
  std::vector<std::filesystem::path> written_;
};

struct RunData {
  std::vector<SimState> snapshots;
  std::vector<Regime> regimes;
  std::vector<EnergyReport> energies;
  std::vector<CrossingEvent> events;
  std::vector<TransitionRecord> transitions;
};

}  // namespace detail

/// Runs one configured scenario and writes the requested files plus
/// manifest.json into cfg.out_dir. On failure the files written so far are
/// removed and the exit code names the failure class.
inline RunResult run_scenario(const RunConfig& cfg) {
  using nlohmann::json;
  namespace fs = std::filesystem;
  RunResult result;
  const fs::path dir(cfg.out_dir);
  bool created_dir = false;
  {
    std::error_code ec;
    if (!fs::exists(dir, ec)) {
      created_dir = fs::create_directories(dir, ec);
      if (ec || !created_dir) {
        result.exit_code = kExitIo;
        result.message = "cannot create out_dir " + cfg.out_dir;
        return result;
      }
    } else if (!fs::is_directory(dir, ec)) {
      result.exit_code = kExitIo;
      result.message = "out_dir is not a directory: " + cfg.out_dir;
      return result;
    }
  }
  detail::OutputSet files(dir);

  auto fail = [&](int code, const std::string& msg) {
    files.remove_all();
    if (created_dir) {
      std::error_code ec;
      fs::remove(dir, ec);
    }
    result.exit_code = code;
    result.message = msg;
    result.files.clear();
    return result;
  };

  try {
    const SpectralBasis basis(cfg.n_modes, cfg.grid_size, cfg.params.length);
    const SimState init_state = build_initial_state(cfg, basis);
    detail::RunData run;

    if (cfg.solver == Solver::ClosedForm) {
      const InitialData init{init_state.field.displacement, init_state.field.velocity};
      RegimeTrajectory tr =
          regime_exact_solve(init, cfg.params, basis, cfg.stepper.t_final, cfg.sample_dt);
      run.snapshots = std::move(tr.samples);
      run.regimes = std::move(tr.regimes);
      run.transitions = std::move(tr.events);
      for (const auto& s : run.snapshots) {
        run.energies.push_back(
            energy_from_modes(s.modal, s.field.displacement, cfg.params, basis));
      }
      for (const auto& t : run.transitions) {
        CrossingEvent ev;
        ev.time = t.t_bar;
        ev.direction = t.direction;
        ev.refined = true;
        ev.grid_indices.resize(basis.grid_size());
        for (std::size_t j = 0; j < basis.grid_size(); ++j) ev.grid_indices[j] = j;
        run.events.push_back(std::move(ev));
      }
    } else {
      Trajectory tr = integrate(init_state, cfg.params, basis, cfg.stepper);
      run.snapshots = std::move(tr.snapshots);
      run.energies = std::move(tr.energies);
      run.events = std::move(tr.events);
      for (const auto& s : run.snapshots) run.regimes.push_back(detect_regime(s.field, 0.0));
    }

    if (cfg.wants("energy")) {
      auto out = files.open("energy.csv");
      out << "t,E_total,E_kin,E_bend,E_adh,regime\n";
      for (std::size_t k = 0; k < run.energies.size(); ++k) {
        const auto& e = run.energies[k];
        out << format_real(e.time) << ',' << format_real(e.total) << ','
            << format_real(e.kinetic) << ',' << format_real(e.bending) << ','
            << format_real(e.adhesion) << ',' << to_string(run.regimes[k]) << '\n';
      }
    }
    if (cfg.wants("spectrum")) {
      auto out = files.open("spectrum.csv");
      out << "t,n,mode_energy\n";
      for (const auto& e : run.energies) {
        for (std::size_t n = 0; n < e.mode_energy.size(); ++n) {
          out << format_real(e.time) << ',' << n << ',' << format_real(e.mode_energy[n]) << '\n';
        }
      }
    }
    if (cfg.wants("events")) {
      auto out = files.open("events.csv");
      out << "t,direction,n_points,refined\n";
      for (const auto& ev : run.events) {
        out << format_real(ev.time) << ',' << to_string(ev.direction) << ','
            << ev.grid_indices.size() << ',' << (ev.refined ? "true" : "false") << '\n';
      }
    }
    if (cfg.wants("field")) {
      auto out = files.open("field.csv");
      out << "t,x,u,v\n";
      const auto& x = basis.collocation();
      for (const auto& s : run.snapshots) {
        for (std::size_t j = 0; j < x.size(); ++j) {
          out << format_real(s.time()) << ',' << format_real(x[j]) << ','
              << format_real(s.field.displacement[j]) << ','
              << format_real(s.field.velocity[j]) << '\n';
        }
      }
    }

    // Summary.
    json summary;
    summary["n_snapshots"] = run.snapshots.size();
    summary["n_events"] = run.events.size();
    const double a0 = std::hypot(init_state.modal.alphas[0],
                                 init_state.modal.alpha_dots[0] / cfg.params.kappa2);
    summary["a0"] = a0;
    if (cfg.initial.kind == InitialSpec::Kind::Constant && std::abs(cfg.initial.v0) < 1.0) {
      summary["scenario"] = to_string(classify_scenario(cfg.initial.v0, cfg.initial.v1, cfg.params));
    }
    json transitions = json::array();
    for (const auto& t : run.transitions) {
      transitions.push_back({{"t_bar", t.t_bar},
                             {"direction", to_string(t.direction)},
                             {"c0", t.detached.c0},
                             {"c1", t.detached.c1},
                             {"c1_identity_residual", t.c1_identity_residual}});
    }
    summary["transitions"] = transitions;
    const double e0 = run.energies.front().total;
    double max_drift = 0.0;
    for (const auto& e : run.energies) max_drift = std::max(max_drift, std::abs(e.total - e0));
    const double tol = cfg.solver == Solver::Splitting ? 10.0 * cfg.stepper.dt : 1e-9;
    const auto diss = dissipation_check(run.energies, tol);
    summary["energy"] = {{"initial", e0},
                         {"final", run.energies.back().total},
                         {"max_abs_drift", max_drift},
                         {"relative_drift", max_drift / std::max(e0, 1.0)},
                         {"dissipation_tolerance", tol},
                         {"dissipation_max_excess", diss.max_excess},
                         {"dissipation_pass", diss.pass}};
    const auto spec_last =
        modal_energy_spectrum(run.snapshots.back(), cfg.params, basis, cfg.n_split);
    summary["high_mode_fraction_final"] = spec_last.high_mode_fraction;

    // Decay fit on the last detached snapshot.
    std::optional<std::size_t> detached_idx;
    for (std::size_t k = run.snapshots.size(); k-- > 0;) {
      if (run.regimes[k] == Regime::Detached) {
        detached_idx = k;
        break;
      }
    }
    json decay = nullptr;
    std::optional<DecayFitReport> fit;
    if (detached_idx) {
      fit = spectral_decay_fit(run.snapshots[*detached_idx].modal, cfg.params, basis,
                               a0, cfg.decay_band);
      decay = {{"time", run.snapshots[*detached_idx].time()},
               {"cutoff_sum", fit->cutoff_sum},
               {"cutoff_bound", fit->cutoff_bound},
               {"cutoff_ok", fit->cutoff_sum <= fit->cutoff_bound},
               {"slope", fit->slope ? json(*fit->slope) : json(nullptr)},
               {"band", json::array({fit->band.first, fit->band.last})}};
    }
    summary["decay"] = decay;
    if (cfg.wants("decay")) {
      auto out = files.open("decay.csv");
      out << "n,B_n\n";
      if (fit) {
        for (std::size_t n = 1; n < fit->amplitudes.size(); ++n) {
          out << n << ',' << format_real(fit->amplitudes[n]) << '\n';
        }
      }
    }
    if (cfg.wants("report")) {
      auto out = files.open("report.txt");
      out << "solver              " << to_string(cfg.solver) << '\n'
          << "snapshots           " << run.snapshots.size() << '\n'
          << "events              " << run.events.size() << '\n'
          << "E(0)                " << format_real(e0) << '\n'
          << "max |E(t) - E(0)|   " << format_real(max_drift) << '\n'
          << "dissipation check   " << (diss.pass ? "pass" : "FAIL") << '\n';
      for (const auto& t : run.transitions) {
        out << "transition t_bar=" << format_real(t.t_bar) << " C1=" << format_real(t.detached.c1)
            << " residual=" << format_real(t.c1_identity_residual) << '\n';
      }
    }

    json manifest;
    manifest["version"] = kVersion;
    manifest["config"] = config_to_json(cfg);
    manifest["summary"] = summary;
    {
      auto out = files.open("manifest.json");
      out << manifest.dump(2) << '\n';
      if (!out) throw IoError("failed writing manifest.json");
    }
    result.manifest = std::move(manifest);
    result.files = files.names();
    result.message = "ok";
    return result;
  } catch (const MixedRegimeError& e) {
    return fail(cfg.solver == Solver::ClosedForm ? kExitMixedRegime : kExitConfig, e.what());
  } catch (const BlowUpError& e) {
    return fail(kExitBlowUp, e.what());
  } catch (const IoError& e) {
    return fail(kExitIo, e.what());
  } catch (const Error& e) {
    return fail(kExitConfig, e.what());
  }
}

}  // namespace adbeam
