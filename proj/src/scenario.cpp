#include "fr3share/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <random>
#include <string>

#include "fr3share/errors.hpp"

namespace fr3share {

const char* to_string(Mode m) noexcept {
  switch (m) {
    case Mode::NullingOnly: return "nulling_only";
    case Mode::PowerControlOnly: return "power_control_only";
    case Mode::Joint: return "joint";
  }
  return "unknown";
}

Mode mode_from_string(const std::string& s) {
  if (s == "nulling_only") return Mode::NullingOnly;
  if (s == "power_control_only") return Mode::PowerControlOnly;
  if (s == "joint") return Mode::Joint;
  throw Error(ErrorCode::ConfigError, "unknown mode '" + s + "'");
}

void ScenarioConfig::validate() const {
  auto fail = [](const std::string& what) { throw Error(ErrorCode::ConfigError, what); };
  if (lambda_list.empty()) fail("lambda_list must not be empty");
  for (double l : lambda_list)
    if (!(l >= 0.0) || !std::isfinite(l)) fail("lambda values must be finite and >= 0");
  if (n_slots == 0) fail("n_slots must be >= 1");
  if (n_ue == 0) fail("n_ue must be >= 1");
  if (n_slots < n_ue) fail("n_slots must be >= n_ue so every UE is scheduled");
  if (repeats == 0) fail("repeats must be >= 1");
  if (!(constellation.slot_duration_s > 0.0)) fail("constellation.slot_duration_s must be > 0");
  if (!std::isfinite(constellation.delta_inclination_deg)) fail("constellation.delta_inclination_deg must be finite");
  if (!(constellation.elevation_mask_deg >= -90.0 && constellation.elevation_mask_deg <= 90.0))
    fail("constellation.elevation_mask_deg must lie in [-90, 90]");
  if (!(cell.ue_min_distance_m > 0.0)) fail("cell.ue_min_distance_m must be > 0");
  if (!(cell.cell_radius_m >= cell.ue_min_distance_m)) fail("cell.cell_radius_m must be >= ue_min_distance_m");
  if (!(cell.sector_deg > 0.0 && cell.sector_deg <= 360.0)) fail("cell.sector_deg must lie in (0, 360]");
  if (!std::isfinite(cell.ue_height_m)) fail("cell.ue_height_m must be finite");
  if (!(arrays.carrier_hz > 0.0)) fail("arrays.carrier_hz must be > 0");
  for (std::size_t v : sweep.array_sizes)
    if (v == 0) fail("sweep.array_sizes entries must be >= 1");
  for (double e : sweep.epsilon_values)
    if (!(e > 0.0 && e <= 1.0)) fail("sweep.epsilon_values entries must lie in (0, 1]");
  try {
    constellation.base.validate();
    cell.site.validate();
    arrays.gnb.validate();
    arrays.ue.validate();
    power_context().validate();
  } catch (const Error& e) {
    fail(e.what());
  }
}

PowerControlContext ScenarioConfig::power_context() const {
  PowerControlContext ctx = power;
  ctx.epsilon = epsilon;
  return ctx;
}

std::size_t schedule(std::size_t slot, std::size_t k) {
  if (k == 0) throw Error(ErrorCode::InvalidArgument, "schedule needs at least one UE");
  return slot % k;
}

std::vector<LinkEnd> place_ues(const ScenarioConfig& cfg, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  const double r2_lo = cfg.cell.ue_min_distance_m * cfg.cell.ue_min_distance_m;
  const double r2_hi = cfg.cell.cell_radius_m * cfg.cell.cell_radius_m;
  std::uniform_real_distribution<double> r2_dist(r2_lo, r2_hi);
  std::uniform_real_distribution<double> az_dist(-cfg.cell.sector_deg / 2.0, cfg.cell.sector_deg / 2.0);

  std::vector<LinkEnd> ues;
  ues.reserve(cfg.n_ue);
  for (std::size_t k = 0; k < cfg.n_ue; ++k) {
    const double r = std::sqrt(r2_dist(rng));
    const double bearing = cfg.arrays.gnb.boresight_azimuth_deg + az_dist(rng);
    const double b = bearing * kDegToRad;
    LinkEnd ue;
    ue.position = {r * std::sin(b), r * std::cos(b), cfg.cell.ue_height_m};
    ue.array = cfg.arrays.ue;
    ue.array.boresight_azimuth_deg = wrap_degrees(bearing + 180.0);
    ues.push_back(ue);
  }
  return ues;
}

CellGeometry make_cell(const ScenarioConfig& cfg, std::uint64_t seed) {
  CellGeometry cell;
  cell.gnb.position = {0.0, 0.0, cfg.cell.site.height_m};
  cell.gnb.array = cfg.arrays.gnb;
  cell.ues = place_ues(cfg, seed);
  cell.carrier_hz = cfg.arrays.carrier_hz;
  cell.elevation_mask_deg = cfg.constellation.elevation_mask_deg;
  return cell;
}

std::vector<std::vector<SatelliteState>> propagate_scenario(const ScenarioConfig& cfg, bool parallel) {
  if (cfg.constellation.n_sat == 0) return std::vector<std::vector<SatelliteState>>(cfg.n_slots);
  const auto constellation =
      build_constellation(cfg.constellation.base, cfg.constellation.n_sat, cfg.constellation.delta_inclination_deg);
  return propagate_constellation(constellation, cfg.cell.site, cfg.n_slots, cfg.constellation.slot_duration_s,
                                 parallel);
}

SlotFailure::SlotFailure(std::size_t slot, const Error& cause)
    : Error(cause.code(), "slot " + std::to_string(slot) + ": " + cause.what()), slot_(slot), cause_(cause.code()) {}

SlotRecord run_slot(const ScenarioConfig& cfg, const CellGeometry& cell, const std::vector<SatelliteState>& sats,
                    std::size_t slot, double lambda, bool reference_nulling) {
  const std::size_t ue = schedule(slot, cell.ues.size());
  const std::vector<std::size_t> subset{ue};
  const ChannelSet cs = build_channel_set(cell, sats, slot, &subset);
  const ComplexMatrix& h = cs.h_ter[ue];
  const ComplexMatrix& h_norm = cs.h_ter_normalized[ue];
  const auto& directions =
      cfg.arrays.satellite_model == SatelliteModel::Steering ? cs.sat_steering : cs.h_sat_normalized;
  const PowerControlContext ctx = cfg.power_context();

  const double lam = cfg.mode == Mode::PowerControlOnly ? 0.0 : lambda;
  auto solve = reference_nulling ? solve_nulling_reference : solve_nulling;
  const BeamformerPair ref = solve(h_norm, directions, NullingConfig{0.0});
  const BeamformerPair pair = lam == 0.0 ? ref : solve(h_norm, directions, NullingConfig{lam});

  SlotRecord rec;
  rec.slot = slot;
  rec.ue_id = ue;
  rec.lambda = lam;
  rec.degeneracy_flag = pair.degenerate;
  rec.beamformed_gain_db = beamformed_gain_db(pair, h);
  rec.array_gain_db = 10.0 * std::log10(static_cast<double>(pair.w_t.size()) *
                                        beamformed_gain(pair.w_r, h_norm, pair.w_t));
  rec.leakage = leakage(pair.w_t, directions);

  std::vector<double> inr0;
  inr0.reserve(cs.h_sat.size());
  for (const auto& hs : cs.h_sat) inr0.push_back(inr(0.0, pair.w_t, hs, ctx));

  if (cfg.mode == Mode::NullingOnly) {
    rec.p_selected_dbm = ctx.p_max_dbm;
  } else {
    try {
      rec.p_selected_dbm = solve_power(rec.beamformed_gain_db, inr0, ctx).p_opt_dbm;
    } catch (const InfeasibleLink& e) {
      if (cfg.infeasible_policy == InfeasiblePolicy::Error) throw;
      rec.p_selected_dbm = std::clamp(e.p_inr_dbm(), ctx.p_min_dbm, ctx.p_max_dbm);
      rec.infeasible_flag = true;
    }
  }

  rec.inr_per_sat_db.reserve(inr0.size());
  for (double v : inr0) rec.inr_per_sat_db.push_back(v <= kInrFloorDb ? kInrFloorDb : v + rec.p_selected_dbm);

  const Degradation d = rss_degradation(ctx.p_max_dbm, ref.w_t, rec.p_selected_dbm, pair.w_t, pair.w_r, h);
  rec.rss_degradation_db = d.value_db;
  rec.degradation_clamped = d.clamped;
  return rec;
}

RunResult run_scenario(const ScenarioConfig& cfg, double lambda, std::uint64_t seed,
                       const std::vector<std::vector<SatelliteState>>& states, const RunOptions& opts) {
  cfg.validate();
  if (states.size() < cfg.n_slots) throw Error(ErrorCode::InvalidArgument, "satellite states do not cover every slot");
  const CellGeometry cell = make_cell(cfg, seed);

  RunResult out;
  out.lambda = cfg.mode == Mode::PowerControlOnly ? 0.0 : lambda;
  out.seed = seed;
  out.records.resize(cfg.n_slots);
  std::vector<std::exception_ptr> failures(cfg.n_slots);
  const auto n = static_cast<long>(cfg.n_slots);

#pragma omp parallel for schedule(dynamic, 4) if (opts.parallel)
  for (long i = 0; i < n; ++i) {
    const auto s = static_cast<std::size_t>(i);
    try {
      out.records[s] = run_slot(cfg, cell, states[s], s, lambda, opts.reference_nulling);
    } catch (...) {
      failures[s] = std::current_exception();
    }
  }

  for (std::size_t s = 0; s < cfg.n_slots; ++s) {
    if (!failures[s]) continue;
    try {
      std::rethrow_exception(failures[s]);
    } catch (const Error& e) {
      throw SlotFailure(s, e);
    }
  }
  out.summary = summarize(out.records, cfg.n_ue, cfg.power.p_max_dbm);
  return out;
}

RunResult run_scenario(const ScenarioConfig& cfg, double lambda, std::uint64_t seed, const RunOptions& opts) {
  cfg.validate();
  return run_scenario(cfg, lambda, seed, propagate_scenario(cfg, opts.parallel), opts);
}

RunResult run_scenario(const ScenarioConfig& cfg, const RunOptions& opts) {
  cfg.validate();
  return run_scenario(cfg, cfg.lambda_list.front(), cfg.seed, opts);
}

RunSummary pool_summaries(const std::vector<RunSummary>& summaries) {
  if (summaries.empty()) throw Error(ErrorCode::EmptyRun, "no summaries to pool");
  RunSummary p;
  const auto n = static_cast<double>(summaries.size());
  p.per_ue_mean_degradation_db.assign(summaries.front().per_ue_mean_degradation_db.size(), 0.0);
  p.jfi = 0.0;
  p.jfi_all_zero = true;
  for (const auto& s : summaries) {
    for (std::size_t k = 0; k < p.per_ue_mean_degradation_db.size() && k < s.per_ue_mean_degradation_db.size(); ++k)
      p.per_ue_mean_degradation_db[k] += s.per_ue_mean_degradation_db[k] / n;
    p.jfi += s.jfi / n;
    p.jfi_all_zero = p.jfi_all_zero && s.jfi_all_zero;
    p.worst_case_rss_db += s.worst_case_rss_db / n;
    p.rss_std_db += s.rss_std_db / n;
    p.mean_degradation_db += s.mean_degradation_db / n;
    p.inr_median_db += s.inr_median_db / n;
    p.inr_p5_db += s.inr_p5_db / n;
    p.inr_p25_db += s.inr_p25_db / n;
    p.inr_p75_db += s.inr_p75_db / n;
    p.inr_p95_db += s.inr_p95_db / n;
    p.inr_worst_db += s.inr_worst_db / n;
    p.power_decrease_percent += s.power_decrease_percent / n;
    p.energy_saved_percent += s.energy_saved_percent / n;
    p.mean_power_dbm += s.mean_power_dbm / n;
    p.n_records += s.n_records;
    p.n_infeasible += s.n_infeasible;
    p.n_degenerate += s.n_degenerate;
  }
  return p;
}

SweepPoint run_repeats(const ScenarioConfig& cfg, double lambda, std::size_t repeats, const RunOptions& opts) {
  if (repeats == 0) throw Error(ErrorCode::InvalidArgument, "repeats must be >= 1");
  cfg.validate();
  const auto states = propagate_scenario(cfg, opts.parallel);
  SweepPoint pt;
  pt.value = lambda;
  std::vector<RunSummary> sums;
  for (std::size_t r = 0; r < repeats; ++r) {
    pt.per_seed.push_back(run_scenario(cfg, lambda, cfg.seed + r, states, opts));
    sums.push_back(pt.per_seed.back().summary);
  }
  pt.pooled = pool_summaries(sums);
  return pt;
}

std::vector<SweepPoint> sweep(const ScenarioConfig& cfg, SweepDimension dim, std::size_t repeats,
                              const RunOptions& opts) {
  cfg.validate();
  std::vector<SweepPoint> out;
  auto add = [&](const ScenarioConfig& c, double value) {
    SweepPoint pt = run_repeats(c, c.lambda_list.front(), repeats, opts);
    pt.value = value;
    out.push_back(std::move(pt));
  };
  switch (dim) {
    case SweepDimension::Lambda:
      for (double l : cfg.lambda_list) {
        ScenarioConfig c = cfg;
        c.lambda_list = {l};
        add(c, l);
      }
      break;
    case SweepDimension::Epsilon:
      for (double e : cfg.sweep.epsilon_values) {
        ScenarioConfig c = cfg;
        c.epsilon = e;
        add(c, e);
      }
      break;
    case SweepDimension::ArraySize:
      for (std::size_t n : cfg.sweep.array_sizes) {
        ScenarioConfig c = cfg;
        c.arrays.gnb.n_az = n;
        c.arrays.gnb.n_el = n;
        add(c, static_cast<double>(n));
      }
      break;
    case SweepDimension::NSat:
      for (std::size_t n : cfg.sweep.n_sat_values) {
        ScenarioConfig c = cfg;
        c.constellation.n_sat = n;
        add(c, static_cast<double>(n));
      }
      break;
  }
  return out;
}

}  // namespace fr3share
