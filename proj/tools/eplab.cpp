// Command-line front end: classify, portrait, integrate, simulate, sweep.
//
// Exit codes: 0 success, 2 invalid input, 3 output directory not writable,
// 4 numerical failure in a PDE run.  Files are staged in memory and written
// only when the command succeeds.

#include "eplab/eplab.hpp"

#include <CLI11.hpp>
#include <nlohmann/json.hpp>
#include <openssl/evp.h>

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#ifndef EPLAB_VERSION
#define EPLAB_VERSION "0.0.0"
#endif

namespace fs = std::filesystem;
using json = nlohmann::json;
using namespace eplab;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInvalid = 2;
constexpr int kExitUnwritable = 3;
constexpr int kExitNumerical = 4;

struct InvalidInput : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct NumericalFailureExit : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Globals {
  std::string out_dir;
  std::uint64_t seed = 0;
  int threads = 0;
};

std::string sha256_hex(const std::string& data) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(data.data(), data.size(), digest, &len, EVP_sha256(), nullptr) != 1)
    throw std::runtime_error("SHA-256 failed");
  std::string hex;
  for (unsigned int i = 0; i < len; ++i) hex += fmt::format("{:02x}", digest[i]);
  return hex;
}

json number_or_null(std::optional<double> v) {
  if (!v || !std::isfinite(*v)) return nullptr;
  return *v;
}

json number_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

fs::path resolve_out_dir(const Globals& g) {
  if (!g.out_dir.empty()) return g.out_dir;
  if (const char* env = std::getenv("EPLAB_OUT_DIR"); env && *env) return env;
  return ".";
}

// Creates the directory if needed and checks it accepts new files.
void ensure_writable(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir)) throw io::OutputError("cannot create output directory " + dir.string());
  const fs::path probe = dir / ".eplab-write-probe";
  {
    std::ofstream out(probe);
    if (!out) throw io::OutputError("output directory " + dir.string() + " is not writable");
  }
  fs::remove(probe, ec);
}

// Writes every staged file plus manifest.json; removes anything already
// written if a later write fails.
void commit_with_manifest(const fs::path& dir, io::StagedOutputs& staged, const std::string& command,
                          const std::string& digest) {
  json manifest;
  manifest["command"] = command;
  manifest["config_digest"] = digest;
  manifest["tool_version"] = EPLAB_VERSION;
  manifest["outputs"] = staged.names();
  staged.add("manifest.json", manifest.dump(2) + "\n");

  ensure_writable(dir);
  std::vector<fs::path> written;
  try {
    for (const auto& name : staged.names()) {
      io::write_file_atomic(dir / name, staged.content(name));
      written.push_back(dir / name);
    }
  } catch (...) {
    std::error_code ec;
    for (const auto& p : written) fs::remove(p, ec);
    throw;
  }
}

std::string digest_of(const std::string& command, const json& config) {
  return sha256_hex(json{{"command", command}, {"config", config}}.dump());
}

// ---------------------------------------------------------------- classify

struct ClassifyArgs {
  double d = 0.0, rho = 1.0;
  int n = 1;
  std::optional<double> c, k;
  double tol = kDefaultBoundaryTol;
};

int cmd_classify(const ClassifyArgs& a) {
  const Dimension n(a.n);
  PhysicalParams params;
  const bool physical = a.c || a.k;
  if (physical) {
    params.c = a.c.value_or(1.0);
    params.k = a.k.value_or(-1.0);
    params.validate();
  }
  if (!(a.rho > 0.0)) throw InvalidInput("vacuum or negative density (rho must be > 0)");
  const PhaseState unit = physical ? rescale_physical({a.d, a.rho}, params) : PhaseState{a.d, a.rho};
  const Classification cls = classify(unit, n, a.tol);
  const BlowupBounds bounds = blowup_time_bounds(unit, n);

  json out;
  out["verdict"] = std::string(to_string(cls.verdict));
  out["I"] = number_or_null(cls.invariant_value);
  out["margin"] = cls.margin;
  out["chae_tadmor_member"] = chae_tadmor_member({a.d, a.rho}, n, params);
  // Unit-free time tau relates to physical time by tau = sqrt(-k c) t.
  out["t_upper"] = bounds.case_kind == BoundCase::NotApplicable
                       ? json(nullptr)
                       : number_or_null(bounds.t_upper / params.time_scale());
  std::cout << out.dump() << '\n';
  return kExitOk;
}

// ---------------------------------------------------------------- portrait

struct PortraitArgs {
  int n = 2;
  double rho_max = 4.0;
  double d_max = 4.0;
  int resolution = 200;
  std::string seeds_file;
  int random_seeds = 8;
  double max_time = 20.0;
};

std::vector<PhaseState> read_seeds(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidInput("cannot read seeds file " + path);
  std::vector<PhaseState> seeds;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line[0] == '#' || line.rfind("d,", 0) == 0) continue;
    std::replace(line.begin(), line.end(), ',', ' ');
    std::istringstream row(line);
    PhaseState s;
    if (!(row >> s.d >> s.rho)) throw InvalidInput(fmt::format("{}:{}: expected 'd,rho'", path, line_no));
    if (!(s.rho > 0.0)) throw InvalidInput(fmt::format("{}:{}: seed density must be > 0", path, line_no));
    seeds.push_back(s);
  }
  return seeds;
}

int cmd_portrait(const PortraitArgs& a, const Globals& g) {
  if (!(a.rho_max > 0.0) || !(a.d_max > 0.0)) throw InvalidInput("--rho-max and --d-max must be positive");
  const Dimension n(a.n);
  std::vector<PhaseState> seeds;
  json seed_config;
  if (!a.seeds_file.empty()) {
    seeds = read_seeds(a.seeds_file);
    seed_config = json::array();
    for (const auto& s : seeds) seed_config.push_back({s.d, s.rho});
  } else {
    std::mt19937_64 rng(g.seed);
    std::uniform_real_distribution<double> ud(-a.d_max, a.d_max), ur(0.0, a.rho_max);
    for (int i = 0; i < a.random_seeds; ++i) {
      double rho = 0.0;
      while (rho == 0.0) rho = ur(rng);
      seeds.push_back({ud(rng), rho});
    }
    seed_config = {{"random", a.random_seeds}, {"seed", g.seed}};
  }
  IntegratorControls controls;
  controls.max_time = a.max_time;

  const PortraitDataset ds = emit_portrait(n, {0.0, a.rho_max}, {-a.d_max, a.d_max}, a.resolution, seeds, controls);
  io::StagedOutputs staged;
  stage_portrait(ds, staged);
  const json config = {{"n", a.n},           {"rho_max", a.rho_max}, {"d_max", a.d_max},
                       {"resolution", a.resolution}, {"seeds", seed_config}, {"max_time", a.max_time}};
  commit_with_manifest(resolve_out_dir(g), staged, "portrait", digest_of("portrait", config));
  return kExitOk;
}

// ---------------------------------------------------------------- integrate

struct IntegrateArgs {
  double d0 = 0.0, rho0 = 1.0;
  int n = 2;
  double tol = 1e-10;
  double max_time = 100.0;
};

json bounds_json(const BlowupBounds& b) {
  json j;
  j["case"] = b.case_kind == BoundCase::Case1 ? "Case1" : b.case_kind == BoundCase::Case2 ? "Case2" : "NotApplicable";
  j["t_upper"] = number_or_null(b.t_upper);
  j["epsilon"] = b.epsilon_used;
  return j;
}

int cmd_integrate(const IntegrateArgs& a, const Globals& g) {
  const Dimension n(a.n);
  if (!(a.rho0 > 0.0)) throw InvalidInput("rho0 must be > 0");
  IntegratorControls controls;
  controls.rel_tol = a.tol;
  controls.max_time = a.max_time;
  controls.validate();

  const PhaseState start{a.d0, a.rho0};
  const Trajectory tr = integrate_majorant(start, n, controls);
  const auto event = tr.terminal_event();

  std::string csv = "t,d,rho,I\n";
  for (const auto& s : tr.samples)
    csv += io::num(s.t) + ',' + io::num(s.state.d) + ',' + io::num(s.state.rho) + ',' +
           io::num(invariant_I(s.state, n)) + '\n';

  json summary;
  summary["verdict"] = std::string(to_string(classify(start, n).verdict));
  summary["event"] = std::string(to_string(event->kind));
  summary["t_end"] = event->t;
  summary["t_detect"] = tr.blew_up() ? json(event->t) : json(nullptr);
  summary["invariant_initial"] = tr.initial_invariant;
  summary["invariant_drift"] = tr.invariant_drift;
  summary["bounds"] = json::array({bounds_json(blowup_time_bounds(start, n)),
                                   bounds_json(blowup_time_bounds(start, n, comparison_epsilon(start, n)))});
  summary["steps"] = tr.samples.size() - 1;

  io::StagedOutputs staged;
  staged.add("trajectory.csv", std::move(csv));
  staged.add("summary.json", summary.dump(2) + "\n");
  const json config = {{"d0", a.d0}, {"rho0", a.rho0}, {"n", a.n}, {"tol", a.tol}, {"max_time", a.max_time}};
  commit_with_manifest(resolve_out_dir(g), staged, "integrate", digest_of("integrate", config));
  return kExitOk;
}

// ---------------------------------------------------------------- simulate

struct SimConfig {
  ep1d::Grid1D grid;
  ep1d::RunControls run;
  std::string kind = "density_cosine";
  double amplitude = 0.5;
  int mode = 1;
  std::vector<double> rho, u;  // explicit samples for kind == "samples"
};

template <class T>
T get_or(const json& j, const char* key, T fallback) {
  if (!j.contains(key)) return fallback;
  try {
    return j.at(key).get<T>();
  } catch (const json::exception&) {
    throw InvalidInput(fmt::format("config field '{}' has the wrong type", key));
  }
}

void reject_unknown_keys(const json& j, std::initializer_list<const char*> allowed, const std::string& where) {
  for (const auto& [key, _] : j.items()) {
    if (std::none_of(allowed.begin(), allowed.end(), [&](const char* a) { return key == a; }))
      throw InvalidInput(fmt::format("unknown field '{}' in {}", key, where));
  }
}

SimConfig parse_sim_config(const json& j) {
  if (!j.is_object()) throw InvalidInput("config must be a JSON object");
  reject_unknown_keys(j, {"cells", "length", "cfl", "max_time", "rho_threshold", "ux_threshold", "scheme", "deriv",
                          "dt_max", "snapshot_times", "initial"},
                      "config");
  SimConfig c;
  c.grid.cells = get_or(j, "cells", c.grid.cells);
  c.grid.length = get_or(j, "length", c.grid.length);
  c.run.cfl = get_or(j, "cfl", c.run.cfl);
  c.run.max_time = get_or(j, "max_time", c.run.max_time);
  c.run.rho_threshold = get_or(j, "rho_threshold", c.run.rho_threshold);
  c.run.ux_threshold = get_or(j, "ux_threshold", c.run.ux_threshold);
  c.run.dt_max = get_or(j, "dt_max", c.run.dt_max);
  c.run.snapshot_times = get_or(j, "snapshot_times", c.run.snapshot_times);
  const auto scheme = get_or<std::string>(j, "scheme", "fv1");
  if (scheme == "fv1") c.run.scheme = ep1d::Scheme::FV1;
  else if (scheme == "ssp2") c.run.scheme = ep1d::Scheme::SSP2;
  else throw InvalidInput("scheme must be 'fv1' or 'ssp2'");
  const auto deriv = get_or<std::string>(j, "deriv", "spectral");
  if (deriv == "spectral") c.run.deriv = ep1d::Derivative::Spectral;
  else if (deriv == "centered") c.run.deriv = ep1d::Derivative::Centered;
  else throw InvalidInput("deriv must be 'spectral' or 'centered'");

  if (j.contains("initial")) {
    const json& init = j.at("initial");
    if (!init.is_object()) throw InvalidInput("'initial' must be an object");
    reject_unknown_keys(init, {"kind", "amplitude", "mode", "rho", "u"}, "initial");
    c.kind = get_or(init, "kind", c.kind);
    c.amplitude = get_or(init, "amplitude", c.amplitude);
    c.mode = get_or(init, "mode", c.mode);
    c.rho = get_or(init, "rho", c.rho);
    c.u = get_or(init, "u", c.u);
  }
  try {
    c.grid.validate();
    c.run.validate();
  } catch (const DomainError& e) {
    throw InvalidInput(e.what());
  }
  return c;
}

json sim_config_json(const SimConfig& c) {
  json init = {{"kind", c.kind}};
  if (c.kind == "samples") {
    init["rho"] = c.rho;
    init["u"] = c.u;
  } else {
    init["amplitude"] = c.amplitude;
    init["mode"] = c.mode;
  }
  return {{"cells", c.grid.cells},
          {"length", c.grid.length},
          {"cfl", c.run.cfl},
          {"max_time", c.run.max_time},
          {"rho_threshold", c.run.rho_threshold},
          {"ux_threshold", c.run.ux_threshold},
          {"scheme", std::string(ep1d::to_string(c.run.scheme))},
          {"deriv", std::string(ep1d::to_string(c.run.deriv))},
          {"dt_max", c.run.dt_max},
          {"snapshot_times", c.run.snapshot_times},
          {"initial", init}};
}

ep1d::FieldState1D initial_state(const SimConfig& c) {
  if (c.kind == "samples") {
    if (c.rho.size() != c.grid.size() || c.u.size() != c.grid.size())
      throw InvalidInput("initial rho and u must each have 'cells' entries");
    return {c.rho, c.u, 0.0};
  }
  try {
    return ep1d::make_initial(ep1d::family_from_string(c.kind), c.grid, c.amplitude, c.mode);
  } catch (const DomainError& e) {
    throw InvalidInput(e.what());
  }
}

json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidInput("cannot read config " + path);
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw InvalidInput(std::string("config is not valid JSON: ") + e.what());
  }
}

struct SimOutcome {
  ep1d::SimResult result;
  ep1d::Prediction prediction;
};

SimOutcome simulate(const SimConfig& c, const ep1d::FieldState1D& init) {
  if (!(std::abs(ep1d::mean(init.rho) - 1.0) <= ep1d::kMeanTolerance))
    throw InvalidInput(fmt::format("initial density must have mean 1 (got {})", io::num(ep1d::mean(init.rho))));
  SimOutcome out;
  try {
    out.prediction = ep1d::predict_blowup_from_initial(init, c.grid, c.run.deriv);
    out.result = ep1d::run(init, c.grid, c.run);
  } catch (const DomainError& e) {
    throw InvalidInput(e.what());
  }
  return out;
}

std::optional<double> relative_gap(const SimOutcome& o) {
  if (!o.result.t_detect || !o.prediction.t_pred) return std::nullopt;
  return std::abs(*o.result.t_detect - *o.prediction.t_pred) / *o.prediction.t_pred;
}

int cmd_simulate(const std::string& config_path, const Globals& g) {
  const SimConfig c = parse_sim_config(load_json_file(config_path));
  const SimOutcome o = simulate(c, initial_state(c));
  if (o.result.outcome == ep1d::Outcome::NumericalFailure)
    throw NumericalFailureExit("numerical failure: " + o.result.failure_message);

  io::StagedOutputs staged;
  staged.add("sim_history.csv", ep1d::history_csv(o.result));
  staged.add("prediction.csv", ep1d::prediction_csv(o.prediction));
  for (const auto& snap : o.result.snapshots) staged.add(ep1d::fields_filename(snap), ep1d::fields_csv(snap, c.grid));

  json summary;
  summary["outcome"] = std::string(ep1d::to_string(o.result.outcome));
  summary["t_detect"] = number_or_null(o.result.t_detect);
  summary["t_pred"] = number_or_null(o.prediction.t_pred);
  summary["relative_gap"] = number_or_null(relative_gap(o));
  summary["predicted_verdict"] = std::string(to_string(o.prediction.summary));
  summary["final_time"] = o.result.final_state.t;
  summary["steps"] = o.result.steps;
  summary["max_rho"] = o.result.max_rho_history.back().value;
  summary["min_ux"] = o.result.min_ux_history.back().value;
  staged.add("summary.json", summary.dump(2) + "\n");

  const json config = sim_config_json(c);
  commit_with_manifest(resolve_out_dir(g), staged, "simulate", digest_of("simulate", config));
  return kExitOk;
}

// ---------------------------------------------------------------- sweep

struct SweepArgs {
  std::string family;
  std::string param_range;
  int steps = 5;
  std::string config_path;
};

std::pair<double, double> parse_range(const std::string& s) {
  const auto colon = s.find(':');
  if (colon == std::string::npos) throw InvalidInput("--param-range must look like lo:hi");
  try {
    std::size_t used_lo = 0, used_hi = 0;
    const std::string lo_s = s.substr(0, colon), hi_s = s.substr(colon + 1);
    const double lo = std::stod(lo_s, &used_lo), hi = std::stod(hi_s, &used_hi);
    if (used_lo != lo_s.size() || used_hi != hi_s.size()) throw std::invalid_argument("trailing characters");
    return {lo, hi};
  } catch (const std::logic_error&) {
    throw InvalidInput("--param-range must look like lo:hi");
  }
}

int cmd_sweep(const SweepArgs& a, const Globals& g) {
  if (a.steps < 0) throw InvalidInput("--steps must be >= 0");
  ep1d::Family family;
  try {
    family = ep1d::family_from_string(a.family);
  } catch (const DomainError& e) {
    throw InvalidInput(e.what());
  }
  const auto [lo, hi] = parse_range(a.param_range);
  SimConfig base = parse_sim_config(a.config_path.empty() ? json::object() : load_json_file(a.config_path));
  base.kind = std::string(ep1d::to_string(family));
  base.run.snapshot_times.clear();

  std::vector<double> params;
  for (int i = 0; i < a.steps; ++i) params.push_back(a.steps == 1 ? lo : lo + (hi - lo) * i / (a.steps - 1));

  // Validate every initial state before starting any work.
  std::vector<SimConfig> configs;
  for (double p : params) {
    SimConfig c = base;
    c.amplitude = p;
    (void)initial_state(c);
    configs.push_back(std::move(c));
  }

  std::vector<std::optional<SimOutcome>> results(configs.size());
  std::vector<std::string> errors(configs.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < configs.size(); i = next++) {
      try {
        results[i] = simulate(configs[i], initial_state(configs[i]));
      } catch (const std::exception& e) {
        errors[i] = e.what();
      }
    }
  };
  const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
  const std::size_t workers =
      std::min<std::size_t>(g.threads > 0 ? static_cast<std::size_t>(g.threads) : hw, std::max<std::size_t>(1, configs.size()));
  {
    std::vector<std::jthread> pool;
    for (std::size_t w = 1; w < workers; ++w) pool.emplace_back(worker);
    worker();
  }

  std::string csv = "param,predicted_verdict,observed_outcome,t_pred,t_detect\n";
  std::vector<std::string> failures;
  const double nan = std::numeric_limits<double>::quiet_NaN();
  for (std::size_t i = 0; i < configs.size(); ++i) {
    if (!errors[i].empty()) throw InvalidInput(fmt::format("param {}: {}", io::num(params[i]), errors[i]));
    const SimOutcome& o = *results[i];
    if (o.result.outcome == ep1d::Outcome::NumericalFailure)
      failures.push_back(fmt::format("param {}: {}", io::num(params[i]), o.result.failure_message));
    csv += io::num(params[i]) + ',' + std::string(to_string(o.prediction.summary)) + ',' +
           std::string(ep1d::to_string(o.result.outcome)) + ',' + io::num(o.prediction.t_pred.value_or(nan)) + ',' +
           io::num(o.result.t_detect.value_or(nan)) + '\n';
  }
  if (!failures.empty()) {
    std::string msg = "numerical failure in sweep";
    for (const auto& f : failures) msg += "\n  " + f;
    throw NumericalFailureExit(msg);
  }

  io::StagedOutputs staged;
  staged.add("sweep.csv", std::move(csv));
  json config = sim_config_json(base);
  config["initial"].erase("amplitude");
  config["sweep"] = {{"family", a.family}, {"lo", lo}, {"hi", hi}, {"steps", a.steps}};
  commit_with_manifest(resolve_out_dir(g), staged, "sweep", digest_of("sweep", config));
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Critical-threshold explorer for the pressureless Euler-Poisson system"};
  app.set_version_flag("--version", std::string(EPLAB_VERSION));
  app.require_subcommand(1);

  Globals globals;
  app.add_option("--out-dir", globals.out_dir, "Output directory (default: $EPLAB_OUT_DIR or .)");
  app.add_option("--seed", globals.seed, "Seed for randomly generated inputs");
  app.add_option("--threads", globals.threads, "Worker threads for sweep (0 = all cores)")->check(CLI::NonNegativeNumber);

  ClassifyArgs ca;
  auto* classify_cmd = app.add_subcommand("classify", "Classify a single (d, rho) state");
  classify_cmd->add_option("--d", ca.d, "Velocity divergence")->required();
  classify_cmd->add_option("--rho", ca.rho, "Density")->required();
  classify_cmd->add_option("--n", ca.n, "Spatial dimension")->required();
  classify_cmd->add_option("--c", ca.c, "Background density (physical units)");
  classify_cmd->add_option("--k", ca.k, "Forcing constant, k < 0 (physical units)");
  classify_cmd->add_option("--tol", ca.tol, "Boundary tolerance on the margin");

  PortraitArgs pa;
  auto* portrait_cmd = app.add_subcommand("portrait", "Emit phase-portrait CSV data");
  portrait_cmd->add_option("--n", pa.n, "Spatial dimension");
  portrait_cmd->add_option("--rho-max", pa.rho_max, "Largest density sampled");
  portrait_cmd->add_option("--d-max", pa.d_max, "Divergence range is [-d-max, d-max]");
  portrait_cmd->add_option("--resolution", pa.resolution, "Samples per axis");
  portrait_cmd->add_option("--seeds-file", pa.seeds_file, "CSV of 'd,rho' trajectory seeds");
  portrait_cmd->add_option("--random-seeds", pa.random_seeds, "Number of random seeds when no seeds file is given");
  portrait_cmd->add_option("--max-time", pa.max_time, "Integration horizon for seeded trajectories");

  IntegrateArgs ia;
  auto* integrate_cmd = app.add_subcommand("integrate", "Integrate the majorant ODE from one state");
  integrate_cmd->add_option("--d0", ia.d0, "Initial divergence")->required();
  integrate_cmd->add_option("--rho0", ia.rho0, "Initial density")->required();
  integrate_cmd->add_option("--n", ia.n, "Spatial dimension")->required();
  integrate_cmd->add_option("--tol", ia.tol, "Relative tolerance");
  integrate_cmd->add_option("--max-time", ia.max_time, "Integration horizon");

  std::string sim_config;
  auto* simulate_cmd = app.add_subcommand("simulate", "Run the 1D PDE solver from a JSON config");
  simulate_cmd->add_option("config", sim_config, "Config JSON path")->required();

  SweepArgs sa;
  auto* sweep_cmd = app.add_subcommand("sweep", "Sweep an initial-data amplitude");
  sweep_cmd->add_option("--family", sa.family, "Initial-data family")->required();
  sweep_cmd->add_option("--param-range", sa.param_range, "Amplitude range lo:hi")->required();
  sweep_cmd->add_option("--steps", sa.steps, "Number of parameter values");
  sweep_cmd->add_option("--config", sa.config_path, "Config JSON for grid and run settings");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    (void)app.exit(e);
    return kExitInvalid;
  }

  try {
    if (*classify_cmd) return cmd_classify(ca);
    if (*portrait_cmd) return cmd_portrait(pa, globals);
    if (*integrate_cmd) return cmd_integrate(ia, globals);
    if (*simulate_cmd) return cmd_simulate(sim_config, globals);
    if (*sweep_cmd) return cmd_sweep(sa, globals);
  } catch (const InvalidInput& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitInvalid;
  } catch (const DomainError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitInvalid;
  } catch (const io::OutputError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUnwritable;
  } catch (const NumericalFailureExit& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitNumerical;
  }
  return kExitInvalid;
}
