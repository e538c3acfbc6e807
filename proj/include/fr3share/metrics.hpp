#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "fr3share/numerics.hpp"

namespace fr3share {

inline constexpr double kDegradationCapDb = 300.0;

enum SlotFlag : std::uint32_t {
  kFlagDegenerate = 1u,
  kFlagInfeasible = 2u,
  kFlagDegradationClamped = 4u,
};

struct SlotRecord {
  std::size_t slot = 0;
  std::size_t ue_id = 0;
  double lambda = 0.0;
  double p_selected_dbm = 0.0;
  double beamformed_gain_db = 0.0;  ///< |w_r^H H w_t|^2 on the physical channel
  double array_gain_db = 0.0;       ///< N_t |e_ue^H w_t|^2, the transmit array factor toward the UE
  double rss_degradation_db = 0.0;
  std::vector<double> inr_per_sat_db;
  double leakage = 0.0;  ///< sum_j |h_j^H w_t|^2 over the normalized nulling directions
  bool degeneracy_flag = false;
  bool infeasible_flag = false;
  bool degradation_clamped = false;

  double inr_worst_db() const;
  std::uint32_t flags() const;
};

struct Degradation {
  double value_db = 0.0;
  bool clamped = false;  ///< zero denominator, value capped at kDegradationCapDb
};

/// RSS loss of (p_hat, w_hat) relative to (p_max, w_ref) on channel H seen
/// through the UE combiner w_ue. Powers in dBm.
Degradation rss_degradation(double p_max_dbm, const ComplexMatrix& w_ref, double p_hat_dbm,
                            const ComplexMatrix& w_hat, const ComplexMatrix& w_ue, const ComplexMatrix& h);

struct JainResult {
  double value = 1.0;
  bool all_zero = false;
};

JainResult jain_index(const std::vector<double>& values);

/// Percentile with linear interpolation between order statistics (q in [0, 100]).
double percentile(std::vector<double> values, double q);

struct RunSummary {
  std::vector<double> per_ue_mean_degradation_db;
  double jfi = 1.0;
  bool jfi_all_zero = false;
  double worst_case_rss_db = 0.0;
  double rss_std_db = 0.0;
  double mean_degradation_db = 0.0;
  /// Pooled over (slot, satellite); NaN when no satellite was visible.
  double inr_median_db = 0.0;
  double inr_p5_db = 0.0, inr_p25_db = 0.0, inr_p75_db = 0.0, inr_p95_db = 0.0;
  double inr_worst_db = 0.0;
  double power_decrease_percent = 0.0;
  /// Energy over the run relative to always transmitting at p_max. Equal to
  /// the power decrease because every slot has the same duration.
  double energy_saved_percent = 0.0;
  double mean_power_dbm = 0.0;
  std::size_t n_records = 0;
  std::size_t n_infeasible = 0;
  std::size_t n_degenerate = 0;
};

/// Aggregates records over `k` UEs. Throws EmptyRun on no records and
/// InvalidArgument if some UE never appears or an id is out of range.
RunSummary summarize(const std::vector<SlotRecord>& records, std::size_t k, double p_max_dbm);

}  // namespace fr3share
