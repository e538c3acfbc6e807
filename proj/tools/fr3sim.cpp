// Command-line front end: runs scenarios, sweeps and figure exports.

#include <omp.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <iostream>
#include <optional>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <json.hpp>

#include "fr3share/errors.hpp"
#include "fr3share/io.hpp"
#include "fr3share/scenario.hpp"

namespace fs = std::filesystem;
using namespace fr3share;
using nlohmann::json;

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitNumerical = 3;

struct CommonOptions {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> mode;
  std::vector<double> lambdas;
  std::optional<double> epsilon;
  std::optional<std::size_t> repeats;
  std::optional<std::string> out;
  bool serial = false;
  int threads = 0;
};

void add_common(CLI::App* app, CommonOptions& o) {
  app->add_option("-c,--config", o.config, "scenario JSON file")->required();
  app->add_option("--seed", o.seed, "override seed");
  app->add_option("--mode", o.mode, "nulling_only | power_control_only | joint");
  app->add_option("--lambda", o.lambdas, "override lambda list");
  app->add_option("--epsilon", o.epsilon, "override rate fraction");
  app->add_option("--repeats", o.repeats, "number of consecutive seeds");
  app->add_option("-o,--out", o.out, "output directory");
  app->add_flag("--serial", o.serial, "disable OpenMP parallel loops");
  app->add_option("--threads", o.threads, "OpenMP thread count (0 = runtime default)");
}

ScenarioConfig resolve(const CommonOptions& o) {
  ScenarioConfig cfg = load_config(o.config);
  if (o.seed) cfg.seed = *o.seed;
  if (o.mode) cfg.mode = mode_from_string(*o.mode);
  if (!o.lambdas.empty()) cfg.lambda_list = o.lambdas;
  if (o.epsilon) cfg.epsilon = *o.epsilon;
  if (o.repeats) cfg.repeats = *o.repeats;
  if (o.out) cfg.output_dir = *o.out;
  cfg.validate();
  if (o.threads > 0) omp_set_num_threads(o.threads);
  return cfg;
}

RunOptions run_options(const CommonOptions& o) { return RunOptions{!o.serial, false}; }

json parse(const std::string& text) { return json::parse(text); }

void write_manifest(const ScenarioConfig& cfg, const std::vector<std::string>& outputs, double seconds,
                    bool parallel) {
  RunManifest m;
  m.config_hash = config_hash(cfg);
  m.seed = cfg.seed;
  m.mode = to_string(cfg.mode);
  m.outputs = outputs;
  m.wall_clock_s = seconds;
  m.threads = parallel ? omp_get_max_threads() : 1;
  write_text(fs::path(cfg.output_dir) / "manifest.json", manifest_json(m));
}

double elapsed(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

int cmd_validate(const CommonOptions& o) {
  const ScenarioConfig cfg = resolve(o);
  fmt::print("config ok: mode={} seed={} hash={}\n", to_string(cfg.mode), cfg.seed, config_hash(cfg));
  return 0;
}

int cmd_run(const CommonOptions& o) {
  const auto t0 = std::chrono::steady_clock::now();
  const ScenarioConfig cfg = resolve(o);
  const RunOptions ro = run_options(o);
  const double lambda = cfg.mode == Mode::PowerControlOnly ? 0.0 : cfg.lambda_list.front();
  const SweepPoint pt = run_repeats(cfg, lambda, cfg.repeats, ro);

  std::vector<std::string> outputs;
  json per_seed = json::object();
  for (const auto& r : pt.per_seed) {
    const std::string name = fmt::format("records_seed{}.csv", r.seed);
    write_text(fs::path(cfg.output_dir) / name, records_csv(r.records));
    outputs.push_back(name);
    per_seed[std::to_string(r.seed)] = parse(summary_json(r.summary));
  }
  const json summary = {{"config_hash", config_hash(cfg)},
                        {"mode", to_string(cfg.mode)},
                        {"lambda", lambda},
                        {"epsilon", cfg.epsilon},
                        {"per_seed", per_seed},
                        {"pooled", parse(summary_json(pt.pooled))}};
  write_text(fs::path(cfg.output_dir) / "summary.json", summary.dump(2));
  outputs.push_back("summary.json");
  write_text(fs::path(cfg.output_dir) / "config.json", config_to_json(cfg));
  outputs.push_back("config.json");
  write_manifest(cfg, outputs, elapsed(t0), ro.parallel);

  fmt::print("mode={} lambda={} seeds={}..{}: jfi={:.4f} worst_drss={:.3f} dB power_decrease={:.2f}% "
             "inr_median={:.2f} dB infeasible={}\n",
             to_string(cfg.mode), lambda, cfg.seed, cfg.seed + cfg.repeats - 1, pt.pooled.jfi,
             pt.pooled.worst_case_rss_db, pt.pooled.power_decrease_percent, pt.pooled.inr_median_db,
             pt.pooled.n_infeasible);
  return 0;
}

int cmd_sweep(const CommonOptions& o, SweepDimension dim, const char* name) {
  const auto t0 = std::chrono::steady_clock::now();
  const ScenarioConfig cfg = resolve(o);
  const RunOptions ro = run_options(o);
  const auto points = sweep(cfg, dim, cfg.repeats, ro);

  json rows = json::array();
  for (const auto& pt : points) {
    json per_seed = json::object();
    for (const auto& r : pt.per_seed) per_seed[std::to_string(r.seed)] = parse(summary_json(r.summary));
    rows.push_back({{"value", pt.value}, {"pooled", parse(summary_json(pt.pooled))}, {"per_seed", per_seed}});
    fmt::print("{}={:g}: jfi={:.4f} worst_drss={:.3f} dB mean_drss={:.3f} dB power_decrease={:.2f}% "
               "inr_median={:.2f} dB\n",
               name, pt.value, pt.pooled.jfi, pt.pooled.worst_case_rss_db, pt.pooled.mean_degradation_db,
               pt.pooled.power_decrease_percent, pt.pooled.inr_median_db);
  }
  const std::string file = fmt::format("sweep_{}.json", name);
  const json doc = {{"config_hash", config_hash(cfg)}, {"dimension", name}, {"points", rows}};
  write_text(fs::path(cfg.output_dir) / file, doc.dump(2));
  write_manifest(cfg, {file}, elapsed(t0), ro.parallel);
  return 0;
}

// Azimuth / polar angle of an ENU direction in the gNB array frame.
std::pair<double, double> array_angles(const ArrayGeometry& g, const Vec3& d) {
  const ArrayFrame f = array_frame(g);
  return {std::atan2(dot(d, f.y), dot(d, f.x)) * kRadToDeg,
          std::acos(std::clamp(dot(d, f.z), -1.0, 1.0)) * kRadToDeg};
}

struct SlotSetup {
  CellGeometry cell;
  std::vector<SatelliteState> sats;
  ChannelSet cs;
  std::size_t ue;
  BeamformerPair pair;
};

SlotSetup setup_slot(const ScenarioConfig& cfg, std::size_t slot, double lambda) {
  if (slot >= cfg.n_slots) throw Error(ErrorCode::ConfigError, "slot index beyond n_slots");
  SlotSetup s;
  s.cell = make_cell(cfg, cfg.seed);
  s.sats = propagate_scenario(cfg)[slot];
  s.ue = schedule(slot, cfg.n_ue);
  const std::vector<std::size_t> subset{s.ue};
  s.cs = build_channel_set(s.cell, s.sats, slot, &subset);
  const auto& dirs = cfg.arrays.satellite_model == SatelliteModel::Steering ? s.cs.sat_steering : s.cs.h_sat_normalized;
  s.pair = solve_nulling(s.cs.h_ter_normalized[s.ue], dirs, NullingConfig{lambda});
  return s;
}

int cmd_gainmap(const CommonOptions& o, std::size_t slot, const AngularGrid& grid) {
  const auto t0 = std::chrono::steady_clock::now();
  const ScenarioConfig cfg = resolve(o);
  const double lambda = cfg.lambda_list.front();
  const SlotSetup s = setup_slot(cfg, slot, lambda);
  const GainMap map = gain_map(s.pair.w_t, cfg.arrays.gnb, grid, !o.serial);

  const std::string csv = fmt::format("gainmap_slot{}_lambda{:g}.csv", slot, lambda);
  write_text(fs::path(cfg.output_dir) / csv, gain_map_csv(map));

  json sats = json::array();
  for (const auto& st : s.sats) {
    if (st.elevation_deg < cfg.constellation.elevation_mask_deg) continue;
    const auto [az, zen] = array_angles(cfg.arrays.gnb, st.los_enu);
    sats.push_back({{"sat_id", st.sat_id},
                    {"theta_deg", az},
                    {"phi_deg", zen},
                    {"gain_db", gain_at(s.pair.w_t, cfg.arrays.gnb, az, zen)}});
  }
  const Vec3 d = s.cell.ues[s.ue].position - s.cell.gnb.position;
  const auto [uaz, uzen] = array_angles(cfg.arrays.gnb, (1.0 / norm(d)) * d);
  const json side = {{"slot", slot},
                     {"lambda", lambda},
                     {"ue", {{"ue_id", s.ue}, {"theta_deg", uaz}, {"phi_deg", uzen},
                             {"gain_db", gain_at(s.pair.w_t, cfg.arrays.gnb, uaz, uzen)}}},
                     {"satellites", sats},
                     {"angles", "theta = azimuth in the array frame, phi = polar angle from the array's vertical axis"}};
  const std::string sidecar = fmt::format("gainmap_slot{}_lambda{:g}.json", slot, lambda);
  write_text(fs::path(cfg.output_dir) / sidecar, side.dump(2));
  write_manifest(cfg, {csv, sidecar}, elapsed(t0), !o.serial);
  fmt::print("gain map written: {} ({} x {} points), UE gain {:.3f} dB\n", csv, map.zeniths_deg.size(),
             map.azimuths_deg.size(), gain_at(s.pair.w_t, cfg.arrays.gnb, uaz, uzen));
  return 0;
}

int cmd_utility(const CommonOptions& o, std::size_t slot, double step) {
  const auto t0 = std::chrono::steady_clock::now();
  const ScenarioConfig cfg = resolve(o);
  const double lambda = cfg.mode == Mode::PowerControlOnly ? 0.0 : cfg.lambda_list.front();
  const SlotSetup s = setup_slot(cfg, slot, lambda);
  const double gain = beamformed_gain_db(s.pair, s.cs.h_ter[s.ue]);
  const PowerControlContext ctx = cfg.power_context();
  std::vector<double> inr0;
  for (const auto& h : s.cs.h_sat) inr0.push_back(inr(0.0, s.pair.w_t, h, ctx));
  const auto curve = utility_curve(gain, inr0, ctx, step);
  const std::string csv = fmt::format("utility_slot{}.csv", slot);
  write_text(fs::path(cfg.output_dir) / csv, utility_curve_csv(curve));
  write_manifest(cfg, {csv}, elapsed(t0), !o.serial);
  fmt::print("utility curve written: {} (gain {:.3f} dB, P_rate {:.3f} dBm, P_inr {:.3f} dBm)\n", csv, gain,
             rate_floor_power_dbm(gain, ctx), inr_cap_power_dbm(inr0, ctx));
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Satellite-protection simulator for shared upper mid-band spectrum"};
  app.require_subcommand(1);

  CommonOptions o;
  std::size_t slot = 0;
  double step = 0.1;
  AngularGrid grid;

  auto* validate = app.add_subcommand("validate", "check a config without running");
  add_common(validate, o);
  auto* run = app.add_subcommand("run", "run the configured mode over all repeats");
  add_common(run, o);
  auto* sl = app.add_subcommand("sweep-lambda", "one run per lambda in lambda_list");
  add_common(sl, o);
  auto* sa = app.add_subcommand("sweep-array", "one run per square gNB array size");
  add_common(sa, o);
  auto* sn = app.add_subcommand("sweep-nsat", "one run per constellation size");
  add_common(sn, o);
  auto* gm = app.add_subcommand("gainmap", "beamforming gain map for one slot");
  add_common(gm, o);
  gm->add_option("--slot", slot, "slot index");
  gm->add_option("--az-min", grid.az_min_deg);
  gm->add_option("--az-max", grid.az_max_deg);
  gm->add_option("--az-step", grid.az_step_deg);
  gm->add_option("--zen-min", grid.zen_min_deg);
  gm->add_option("--zen-max", grid.zen_max_deg);
  gm->add_option("--zen-step", grid.zen_step_deg);
  auto* uc = app.add_subcommand("utility-curve", "utility versus transmit power for one slot");
  add_common(uc, o);
  uc->add_option("--slot", slot, "slot index");
  uc->add_option("--step", step, "power step in dB");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kExitConfig;
  }

  try {
    if (validate->parsed()) return cmd_validate(o);
    if (run->parsed()) return cmd_run(o);
    if (sl->parsed()) return cmd_sweep(o, SweepDimension::Lambda, "lambda");
    if (sa->parsed()) return cmd_sweep(o, SweepDimension::ArraySize, "array");
    if (sn->parsed()) return cmd_sweep(o, SweepDimension::NSat, "nsat");
    if (gm->parsed()) return cmd_gainmap(o, slot, grid);
    if (uc->parsed()) return cmd_utility(o, slot, step);
  } catch (const SlotFailure& e) {
    std::cerr << "numerical failure at slot " << e.slot() << ": " << e.what() << "\n";
    return kExitNumerical;
  } catch (const Error& e) {
    std::cerr << e.what() << "\n";
    return e.code() == ErrorCode::ConfigError ? kExitConfig : kExitNumerical;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitNumerical;
  }
  return 0;
}
