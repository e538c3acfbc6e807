#include "fr3share/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "fr3share/errors.hpp"
#include "fr3share/nulling.hpp"
#include "fr3share/power_control.hpp"

namespace fr3share {

double SlotRecord::inr_worst_db() const {
  if (inr_per_sat_db.empty()) return kInrFloorDb;
  return *std::max_element(inr_per_sat_db.begin(), inr_per_sat_db.end());
}

std::uint32_t SlotRecord::flags() const {
  std::uint32_t f = 0;
  if (degeneracy_flag) f |= kFlagDegenerate;
  if (infeasible_flag) f |= kFlagInfeasible;
  if (degradation_clamped) f |= kFlagDegradationClamped;
  return f;
}

Degradation rss_degradation(double p_max_dbm, const ComplexMatrix& w_ref, double p_hat_dbm,
                            const ComplexMatrix& w_hat, const ComplexMatrix& w_ue, const ComplexMatrix& h) {
  const double g_ref = beamformed_gain(w_ue, h, w_ref);
  const double g_hat = beamformed_gain(w_ue, h, w_hat);
  if (g_hat == 0.0) return {kDegradationCapDb, true};
  // Ratio of gains first, then the power difference in dB, so the
  // power-only case reduces to p_max - p_hat without rounding drift.
  const double value = (p_max_dbm - p_hat_dbm) + 10.0 * std::log10(g_ref / g_hat);
  if (value > kDegradationCapDb) return {kDegradationCapDb, true};
  return {value, false};
}

JainResult jain_index(const std::vector<double>& values) {
  if (values.empty()) throw Error(ErrorCode::EmptySample, "jain index of an empty vector");
  double sum = 0.0, sum_sq = 0.0;
  for (double v : values) {
    if (!(v >= 0.0)) throw Error(ErrorCode::InvalidArgument, "jain index needs non-negative values");
    sum += v;
    sum_sq += v * v;
  }
  if (sum_sq == 0.0) return {1.0, true};
  return {sum * sum / (static_cast<double>(values.size()) * sum_sq), false};
}

double percentile(std::vector<double> values, double q) {
  if (values.empty()) throw Error(ErrorCode::EmptySample, "percentile of an empty sample");
  if (!(q >= 0.0 && q <= 100.0)) throw Error(ErrorCode::InvalidArgument, "percentile must lie in [0, 100]");
  std::sort(values.begin(), values.end());
  const double pos = q / 100.0 * static_cast<double>(values.size() - 1);
  const auto i = static_cast<std::size_t>(std::floor(pos));
  if (i + 1 >= values.size()) return values.back();
  const double frac = pos - static_cast<double>(i);
  return values[i] + frac * (values[i + 1] - values[i]);
}

RunSummary summarize(const std::vector<SlotRecord>& records, std::size_t k, double p_max_dbm) {
  if (records.empty()) throw Error(ErrorCode::EmptyRun, "no slot records to summarize");
  if (k == 0) throw Error(ErrorCode::InvalidArgument, "summary needs at least one UE");

  RunSummary s;
  s.n_records = records.size();
  std::vector<double> sum(k, 0.0);
  std::vector<std::size_t> count(k, 0);
  std::vector<double> inr_pool;
  double power_lin = 0.0;
  double power_dbm = 0.0;
  double all_deg = 0.0;
  s.worst_case_rss_db = -std::numeric_limits<double>::infinity();
  s.inr_worst_db = kInrFloorDb;

  for (const auto& r : records) {
    if (r.ue_id >= k) throw Error(ErrorCode::InvalidArgument, "record UE id out of range");
    const double d = std::max(r.rss_degradation_db, 0.0);
    sum[r.ue_id] += d;
    count[r.ue_id] += 1;
    all_deg += d;
    s.worst_case_rss_db = std::max(s.worst_case_rss_db, d);
    inr_pool.insert(inr_pool.end(), r.inr_per_sat_db.begin(), r.inr_per_sat_db.end());
    s.inr_worst_db = std::max(s.inr_worst_db, r.inr_worst_db());
    power_lin += std::pow(10.0, (r.p_selected_dbm - p_max_dbm) / 10.0);
    power_dbm += r.p_selected_dbm;
    if (r.infeasible_flag) ++s.n_infeasible;
    if (r.degeneracy_flag) ++s.n_degenerate;
  }

  s.per_ue_mean_degradation_db.resize(k);
  for (std::size_t u = 0; u < k; ++u) {
    if (count[u] == 0) throw Error(ErrorCode::InvalidArgument, "a UE has no records");
    s.per_ue_mean_degradation_db[u] = sum[u] / static_cast<double>(count[u]);
  }
  const JainResult j = jain_index(s.per_ue_mean_degradation_db);
  s.jfi = j.value;
  s.jfi_all_zero = j.all_zero;

  double mean = 0.0;
  for (double v : s.per_ue_mean_degradation_db) mean += v;
  mean /= static_cast<double>(k);
  double var = 0.0;
  for (double v : s.per_ue_mean_degradation_db) var += (v - mean) * (v - mean);
  s.rss_std_db = std::sqrt(var / static_cast<double>(k));

  const auto n = static_cast<double>(records.size());
  s.mean_degradation_db = all_deg / n;
  s.power_decrease_percent = 100.0 * (1.0 - power_lin / n);
  s.energy_saved_percent = s.power_decrease_percent;
  s.mean_power_dbm = power_dbm / n;

  if (inr_pool.empty()) {
    const double nan = std::numeric_limits<double>::quiet_NaN();
    s.inr_p5_db = s.inr_p25_db = s.inr_median_db = s.inr_p75_db = s.inr_p95_db = nan;
  } else {
    s.inr_p5_db = percentile(inr_pool, 5);
    s.inr_p25_db = percentile(inr_pool, 25);
    s.inr_median_db = percentile(inr_pool, 50);
    s.inr_p75_db = percentile(inr_pool, 75);
    s.inr_p95_db = percentile(inr_pool, 95);
  }
  return s;
}

}  // namespace fr3share
