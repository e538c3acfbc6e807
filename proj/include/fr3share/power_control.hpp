#pragma once

#include <string>
#include <vector>

#include "fr3share/numerics.hpp"

namespace fr3share {

inline constexpr double kBoltzmannMilliwatt = 1.380649e-20;  // mW / (Hz K)
inline constexpr double kInrFloorDb = -300.0;

struct PowerControlContext {
  double bandwidth_hz = 30e6;
  double interference_dbm = -73.0;  ///< aggregate interference plus noise at the UE
  double alpha = 1e-3;
  double m_exp = 3.0;
  double epsilon = 0.85;
  double inr_max_db = -6.0;
  double p_min_dbm = 10.0;
  double p_max_dbm = 33.0;
  double g_over_t_db = 13.0;
  double atmospheric_loss_db = 2.4;

  void validate() const;
  /// 10 log10(W k_B) in dB(mW/K).
  double noise_term_db() const;
};

enum class BindingConstraint { UtilityPeak, RateFloor, InrCap, PMin, PMax };

const char* to_string(BindingConstraint b) noexcept;

struct PowerDecision {
  double p_opt_dbm = 0.0;
  double utility_at_opt = 0.0;  ///< bit/s per mW
  double rate_at_opt = 0.0;     ///< bit/s
  std::vector<double> inr_per_satellite_db;
  BindingConstraint binding_constraint = BindingConstraint::UtilityPeak;
  double p_rate_dbm = 0.0;  ///< smallest power meeting the rate floor
  double p_inr_dbm = 0.0;   ///< largest power meeting the INR cap (+inf without satellites)
};

/// Linear SINR for transmit power `p_dbm` and beamformed channel gain.
double sinr(double p_dbm, double gain_db, const PowerControlContext& ctx);
double rate(double p_dbm, double gain_db, const PowerControlContext& ctx);
double utility(double p_dbm, double gain_db, const PowerControlContext& ctx);

/// INR at the satellite for leakage |w_t^H h|^2 given in dB.
double inr_from_leakage_db(double p_dbm, double leakage_db, const PowerControlContext& ctx);
/// INR at the satellite; exact nulls return kInrFloorDb.
double inr(double p_dbm, const ComplexMatrix& w_t, const ComplexMatrix& h_sat, const PowerControlContext& ctx);

/// Closed-form smallest power whose rate reaches epsilon * rate(p_max).
double rate_floor_power_dbm(double gain_db, const PowerControlContext& ctx);
/// Largest power keeping every INR (given at 0 dBm) at or below the cap.
double inr_cap_power_dbm(const std::vector<double>& inr_at_0dbm, const PowerControlContext& ctx);

/// Maximizer of utility over [lo, hi] by golden-section search (0.01 dB).
double maximize_utility(double gain_db, double lo_dbm, double hi_dbm, const PowerControlContext& ctx);

/// Solves the constrained power problem from per-satellite INRs at 0 dBm.
/// Throws InfeasibleLink when the rate floor and the INR cap are disjoint.
PowerDecision solve_power(double gain_db, const std::vector<double>& inr_at_0dbm,
                          const PowerControlContext& ctx);
PowerDecision solve_power(double gain_db, const ComplexMatrix& w_t, const std::vector<ComplexMatrix>& sat_channels,
                          const PowerControlContext& ctx);

struct UtilityPoint {
  double p_dbm;
  double utility;
  bool feasible;
};

/// Utility sampled over [p_min, p_max]; `feasible` marks points satisfying
/// both the rate floor and the INR cap.
std::vector<UtilityPoint> utility_curve(double gain_db, const std::vector<double>& inr_at_0dbm,
                                        const PowerControlContext& ctx, double step_db = 0.1);

}  // namespace fr3share
