#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "fr3share/arrays_channels.hpp"
#include "fr3share/errors.hpp"
#include "fr3share/metrics.hpp"
#include "fr3share/nulling.hpp"
#include "fr3share/orbits.hpp"
#include "fr3share/power_control.hpp"

namespace fr3share {

inline constexpr const char* kToolVersion = "1.0.0";

enum class Mode { NullingOnly, PowerControlOnly, Joint };
enum class InfeasiblePolicy { Fallback, Error };
/// Directions nulled by the beamformer: unit steering vectors, or the
/// normalized physical satellite channels.
enum class SatelliteModel { Steering, Channel };

const char* to_string(Mode m) noexcept;
Mode mode_from_string(const std::string& s);

struct ConstellationConfig {
  std::size_t n_sat = 40;
  OrbitalElements base{600e3, 63.4, -28.8, 44.55, 0.0};
  double delta_inclination_deg = 0.5;
  double elevation_mask_deg = 10.0;
  double slot_duration_s = 1.0;
};

struct CellConfig {
  GroundSite site{38.85, -5.0, 50.0};
  double ue_height_m = 1.6;
  double ue_min_distance_m = 10.0;
  double cell_radius_m = 100.0;
  double sector_deg = 120.0;  ///< UEs are dropped within +/- sector/2 of gNB boresight
};

struct ArraysConfig {
  double carrier_hz = 7.125e9;
  ArrayGeometry gnb{8, 8, 0.5, 0.0, 12.0, ElementPattern::Tr38901, 8.0};
  ArrayGeometry ue{2, 1, 0.5, 0.0, 0.0, ElementPattern::Isotropic, 0.0};
  SatelliteModel satellite_model = SatelliteModel::Steering;
};

struct SweepConfig {
  std::vector<std::size_t> array_sizes{4, 8, 16, 32};
  std::vector<std::size_t> n_sat_values{2, 10, 40};
  std::vector<double> epsilon_values{0.5, 0.85, 0.98};
};

struct ScenarioConfig {
  std::uint64_t seed = 1;
  Mode mode = Mode::Joint;
  std::vector<double> lambda_list{0.0};
  double epsilon = 0.85;
  std::size_t n_slots = 150;
  std::size_t n_ue = 30;
  std::size_t repeats = 5;
  ConstellationConfig constellation;
  CellConfig cell;
  ArraysConfig arrays;
  PowerControlContext power;
  InfeasiblePolicy infeasible_policy = InfeasiblePolicy::Fallback;
  SweepConfig sweep;
  std::string output_dir = "out";

  /// Throws ConfigError describing the first invalid field.
  void validate() const;
  /// Power-control context with epsilon taken from the top-level field.
  PowerControlContext power_context() const;
};

/// Round-robin TDM: the UE served in `slot`.
std::size_t schedule(std::size_t slot, std::size_t k);

/// Seeded UE drop; positions are relative to the gNB foot (ENU metres).
std::vector<LinkEnd> place_ues(const ScenarioConfig& cfg, std::uint64_t seed);
CellGeometry make_cell(const ScenarioConfig& cfg, std::uint64_t seed);

/// Satellite states for the whole run, indexed [slot][satellite].
std::vector<std::vector<SatelliteState>> propagate_scenario(const ScenarioConfig& cfg, bool parallel = true);

struct RunResult {
  std::vector<SlotRecord> records;
  RunSummary summary;
  double lambda = 0.0;
  std::uint64_t seed = 0;
};

/// Thrown when a slot fails; carries the slot index for diagnostics.
class SlotFailure : public Error {
 public:
  SlotFailure(std::size_t slot, const Error& cause);
  std::size_t slot() const noexcept { return slot_; }
  ErrorCode cause() const noexcept { return cause_; }

 private:
  std::size_t slot_;
  ErrorCode cause_;
};

struct RunOptions {
  bool parallel = true;
  /// Use the full-matrix eigensolver for nulling instead of the reduced one.
  bool reference_nulling = false;
};

/// Simulates one slot for a given UE and lambda.
SlotRecord run_slot(const ScenarioConfig& cfg, const CellGeometry& cell,
                    const std::vector<SatelliteState>& sats, std::size_t slot, double lambda,
                    bool reference_nulling = false);

/// Full run at one lambda with `seed`. Slots execute in parallel when
/// requested; records are kept in slot order, so results do not depend on
/// the thread count.
RunResult run_scenario(const ScenarioConfig& cfg, double lambda, std::uint64_t seed,
                       const RunOptions& opts = {});
/// Same, reusing precomputed satellite states.
RunResult run_scenario(const ScenarioConfig& cfg, double lambda, std::uint64_t seed,
                       const std::vector<std::vector<SatelliteState>>& states, const RunOptions& opts = {});

/// Convenience: lambda_list.front() (0 in power-control-only mode) and cfg.seed.
RunResult run_scenario(const ScenarioConfig& cfg, const RunOptions& opts = {});

enum class SweepDimension { Lambda, Epsilon, ArraySize, NSat };

struct SweepPoint {
  double value = 0.0;
  std::vector<RunResult> per_seed;
  RunSummary pooled;  ///< mean of per-seed scalar summaries
};

/// One run per sweep value and seed (seeds cfg.seed .. cfg.seed+repeats-1).
std::vector<SweepPoint> sweep(const ScenarioConfig& cfg, SweepDimension dim, std::size_t repeats,
                              const RunOptions& opts = {});

/// Repeats one configuration over `repeats` consecutive seeds.
SweepPoint run_repeats(const ScenarioConfig& cfg, double lambda, std::size_t repeats, const RunOptions& opts = {});

/// Averages scalar fields across summaries; per-UE means are averaged
/// entry-wise.
RunSummary pool_summaries(const std::vector<RunSummary>& summaries);

}  // namespace fr3share
