#include "fr3share/power_control.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "fr3share/errors.hpp"

namespace fr3share {

namespace {

constexpr double kGoldenTolDb = 0.01;
// Bound comparisons tolerate rounding in the closed forms.
constexpr double kBoundSlackDb = 1e-9;

}  // namespace

void PowerControlContext::validate() const {
  auto bad = [](const char* what) { throw Error(ErrorCode::InvalidArgument, what); };
  if (!(bandwidth_hz > 0.0)) bad("bandwidth must be positive");
  if (!(alpha > 0.0)) bad("alpha must be positive");
  if (!(m_exp >= 1.0)) bad("utility exponent must be >= 1");
  if (!(epsilon > 0.0 && epsilon <= 1.0)) bad("epsilon must lie in (0, 1]");
  if (!(p_min_dbm < p_max_dbm)) bad("p_min must be below p_max");
  for (double v : {interference_dbm, inr_max_db, p_min_dbm, p_max_dbm, g_over_t_db, atmospheric_loss_db})
    if (!std::isfinite(v)) bad("power-control parameters must be finite");
}

double PowerControlContext::noise_term_db() const {
  return 10.0 * std::log10(bandwidth_hz * kBoltzmannMilliwatt);
}

const char* to_string(BindingConstraint b) noexcept {
  switch (b) {
    case BindingConstraint::UtilityPeak: return "utility_peak";
    case BindingConstraint::RateFloor: return "rate_floor";
    case BindingConstraint::InrCap: return "inr_cap";
    case BindingConstraint::PMin: return "p_min";
    case BindingConstraint::PMax: return "p_max";
  }
  return "unknown";
}

double sinr(double p_dbm, double gain_db, const PowerControlContext& ctx) {
  return std::pow(10.0, (p_dbm + gain_db - ctx.interference_dbm) / 10.0);
}

double rate(double p_dbm, double gain_db, const PowerControlContext& ctx) {
  return ctx.bandwidth_hz * std::log2(1.0 + sinr(p_dbm, gain_db, ctx));
}

double utility(double p_dbm, double gain_db, const PowerControlContext& ctx) {
  const double s = sinr(p_dbm, gain_db, ctx);
  const double sigmoid = -std::expm1(-ctx.alpha * s);
  return ctx.bandwidth_hz * std::pow(sigmoid, ctx.m_exp) / std::pow(10.0, p_dbm / 10.0);
}

double inr_from_leakage_db(double p_dbm, double leakage_db, const PowerControlContext& ctx) {
  if (!std::isfinite(leakage_db) || leakage_db <= kInrFloorDb) return kInrFloorDb;
  const double v = p_dbm + leakage_db + ctx.g_over_t_db - ctx.atmospheric_loss_db - ctx.noise_term_db();
  return std::max(v, kInrFloorDb);
}

double inr(double p_dbm, const ComplexMatrix& w_t, const ComplexMatrix& h_sat, const PowerControlContext& ctx) {
  if (w_t.size() != h_sat.size()) throw Error(ErrorCode::InvalidDimension, "beamformer and satellite channel differ in length");
  const double leak = std::norm(inner(w_t, h_sat));
  if (leak == 0.0) return kInrFloorDb;
  return inr_from_leakage_db(p_dbm, 10.0 * std::log10(leak), ctx);
}

double rate_floor_power_dbm(double gain_db, const PowerControlContext& ctx) {
  const double s_max = sinr(ctx.p_max_dbm, gain_db, ctx);
  const double s_req = std::expm1(ctx.epsilon * std::log1p(s_max));
  return 10.0 * std::log10(s_req) + ctx.interference_dbm - gain_db;
}

double inr_cap_power_dbm(const std::vector<double>& inr_at_0dbm, const PowerControlContext& ctx) {
  if (inr_at_0dbm.empty()) return std::numeric_limits<double>::infinity();
  const double worst = *std::max_element(inr_at_0dbm.begin(), inr_at_0dbm.end());
  if (worst <= kInrFloorDb) return std::numeric_limits<double>::infinity();
  return ctx.inr_max_db - worst;
}

double maximize_utility(double gain_db, double lo, double hi, const PowerControlContext& ctx) {
  if (hi - lo <= kGoldenTolDb) {
    return utility(lo, gain_db, ctx) >= utility(hi, gain_db, ctx) ? lo : hi;
  }
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = lo, b = hi;
  double c = b - inv_phi * (b - a);
  double d = a + inv_phi * (b - a);
  double uc = utility(c, gain_db, ctx);
  double ud = utility(d, gain_db, ctx);
  while (b - a > kGoldenTolDb) {
    if (uc >= ud) {
      b = d;
      d = c;
      ud = uc;
      c = b - inv_phi * (b - a);
      uc = utility(c, gain_db, ctx);
    } else {
      a = c;
      c = d;
      uc = ud;
      d = a + inv_phi * (b - a);
      ud = utility(d, gain_db, ctx);
    }
  }
  double x = 0.5 * (a + b);
  const double ux = utility(x, gain_db, ctx);
  // A peak outside the interval converges onto the nearer bound; report the
  // bound itself.
  if (x - lo <= kGoldenTolDb && utility(lo, gain_db, ctx) >= ux) x = lo;
  if (hi - x <= kGoldenTolDb && utility(hi, gain_db, ctx) >= ux) x = hi;
  return x;
}

PowerDecision solve_power(double gain_db, const std::vector<double>& inr_at_0dbm, const PowerControlContext& ctx) {
  ctx.validate();
  if (!std::isfinite(gain_db)) throw Error(ErrorCode::InvalidArgument, "beamformed gain must be finite");

  PowerDecision out;
  out.p_rate_dbm = rate_floor_power_dbm(gain_db, ctx);
  out.p_inr_dbm = inr_cap_power_dbm(inr_at_0dbm, ctx);

  double lo = std::max(ctx.p_min_dbm, out.p_rate_dbm);
  double hi = std::min(ctx.p_max_dbm, out.p_inr_dbm);
  // epsilon = 1 puts the rate floor on p_max up to rounding.
  if (lo > hi && lo - hi <= kBoundSlackDb) lo = hi;
  if (lo > hi) throw InfeasibleLink(out.p_rate_dbm, out.p_inr_dbm);

  const double p = maximize_utility(gain_db, lo, hi, ctx);
  out.p_opt_dbm = p;
  if (p == lo && out.p_rate_dbm >= ctx.p_min_dbm) {
    out.binding_constraint = BindingConstraint::RateFloor;
  } else if (p == hi && out.p_inr_dbm <= ctx.p_max_dbm) {
    out.binding_constraint = BindingConstraint::InrCap;
  } else if (p == lo) {
    out.binding_constraint = BindingConstraint::PMin;
  } else if (p == hi) {
    out.binding_constraint = BindingConstraint::PMax;
  } else {
    out.binding_constraint = BindingConstraint::UtilityPeak;
  }

  out.utility_at_opt = utility(p, gain_db, ctx);
  out.rate_at_opt = rate(p, gain_db, ctx);
  out.inr_per_satellite_db.reserve(inr_at_0dbm.size());
  for (double v : inr_at_0dbm) out.inr_per_satellite_db.push_back(v <= kInrFloorDb ? kInrFloorDb : v + p);
  return out;
}

PowerDecision solve_power(double gain_db, const ComplexMatrix& w_t, const std::vector<ComplexMatrix>& sat_channels,
                          const PowerControlContext& ctx) {
  std::vector<double> inr0;
  inr0.reserve(sat_channels.size());
  for (const auto& h : sat_channels) inr0.push_back(inr(0.0, w_t, h, ctx));
  return solve_power(gain_db, inr0, ctx);
}

std::vector<UtilityPoint> utility_curve(double gain_db, const std::vector<double>& inr_at_0dbm,
                                        const PowerControlContext& ctx, double step_db) {
  ctx.validate();
  if (!(step_db > 0.0)) throw Error(ErrorCode::InvalidArgument, "utility curve step must be positive");
  const double p_rate = rate_floor_power_dbm(gain_db, ctx);
  const double p_inr = inr_cap_power_dbm(inr_at_0dbm, ctx);
  std::vector<UtilityPoint> out;
  const auto n = static_cast<std::size_t>(std::floor((ctx.p_max_dbm - ctx.p_min_dbm) / step_db + 1e-9)) + 1;
  for (std::size_t i = 0; i < n; ++i) {
    const double p = ctx.p_min_dbm + static_cast<double>(i) * step_db;
    out.push_back({p, utility(p, gain_db, ctx), p >= p_rate - kBoundSlackDb && p <= p_inr + kBoundSlackDb});
  }
  return out;
}

}  // namespace fr3share
