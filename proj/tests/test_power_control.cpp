#include <doctest.h>

#include <cmath>
#include <random>

#include "fr3share/errors.hpp"
#include "fr3share/power_control.hpp"
#include "oracles.hpp"

using namespace fr3share;

namespace {

PowerControlContext table_ctx() { return PowerControlContext{}; }

double bisect(auto f, double lo, double hi) {
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    (f(mid) ? hi : lo) = mid;
  }
  return 0.5 * (lo + hi);
}

// Brute-force argmax of the utility on a 0.001 dB grid over [lo, hi].
double grid_argmax(double gain, double lo, double hi, const PowerControlContext& ctx) {
  double best_p = lo, best_u = -1.0;
  const auto n = static_cast<long>(std::floor((hi - lo) / 1e-3));
  for (long i = 0; i <= n + 1; ++i) {
    const double p = std::min(lo + 1e-3 * static_cast<double>(i), hi);
    const double s = std::pow(10.0, (p + gain - ctx.interference_dbm) / 10.0);
    const double u = ctx.bandwidth_hz * std::pow(1.0 - std::exp(-ctx.alpha * s), ctx.m_exp) / std::pow(10.0, p / 10.0);
    if (u > best_u) {
      best_u = u;
      best_p = p;
    }
  }
  return best_p;
}

}  // namespace

TEST_CASE("sinr and rate") {
  const auto ctx = table_ctx();
  CHECK(sinr(-73.0 + 60.0, -60.0, ctx) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(sinr(33.0, -60.0, ctx) == doctest::Approx(39810.71705534969).epsilon(1e-12));
  CHECK(sinr(20.0, -60.0, ctx) / sinr(10.0, -60.0, ctx) == doctest::Approx(10.0).epsilon(1e-12));
  CHECK(rate(-13.0, -60.0, ctx) == doctest::Approx(30e6).epsilon(1e-12));
  CHECK(rate(-13.0 + 10.0 * std::log10(3.0), -60.0, ctx) == doctest::Approx(60e6).epsilon(1e-12));
  CHECK(rate(33.0, -60.0, ctx) == doctest::Approx(458427164.2466314).epsilon(1e-12));
}

TEST_CASE("utility limits and unimodality") {
  const auto ctx = table_ctx();
  // Deep saturation: utility -> W / P.
  CHECK(utility(30.0, 0.0, ctx) == doctest::Approx(30e6 / 1000.0).epsilon(1e-12));
  CHECK(utility(-200.0, -60.0, ctx) < 1e-30);

  int maxima = 0;
  double prev2 = utility(10.0, -60.0, ctx), prev = utility(10.001, -60.0, ctx);
  for (double p = 10.002; p <= 33.0; p += 0.001) {
    const double u = utility(p, -60.0, ctx);
    if (prev > prev2 && prev > u) ++maxima;
    prev2 = prev;
    prev = u;
  }
  CHECK(maxima == 1);
}

TEST_CASE("INR equation against an independent budget") {
  const auto ctx = table_ctx();
  CHECK(ctx.noise_term_db() == doctest::Approx(-123.82795462602104).epsilon(1e-12));
  // Leakage chosen so the full budget lands on -6 dB at 33 dBm.
  const double leak_db = -6.0 - 33.0 - 13.0 + 2.4 + ctx.noise_term_db();
  const double amp = std::pow(10.0, leak_db / 20.0);
  const ComplexMatrix w(1, 1, {1.0});
  const ComplexMatrix h(1, 1, {cplx{0.0, amp}});
  // Second implementation: linear-domain budget.
  const double kb_w = 1.380649e-23 * 30e6;  // W/K
  const double linear = 10.0 * std::log10(std::pow(10.0, 3.3) * 1e-3 * amp * amp * std::pow(10.0, 1.3) /
                                          std::pow(10.0, 0.24) / kb_w);
  CHECK(inr(33.0, w, h, ctx) == doctest::Approx(-6.0).epsilon(1e-9));
  CHECK(std::abs(inr(33.0, w, h, ctx) - linear) < 1e-9);
  CHECK(inr(34.0, w, h, ctx) - inr(33.0, w, h, ctx) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(inr(33.0, w, ComplexMatrix(1, 1), ctx) == kInrFloorDb);
}

TEST_CASE("closed-form bounds agree with bisection") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> gain(-100.0, -50.0), eps(0.3, 1.0), inr0(-60.0, -20.0);
  for (int t = 0; t < 100; ++t) {
    PowerControlContext ctx = table_ctx();
    ctx.epsilon = eps(rng);
    const double g = gain(rng);
    const double r_target = ctx.epsilon * rate(ctx.p_max_dbm, g, ctx);
    const double p_rate = bisect([&](double p) { return rate(p, g, ctx) >= r_target; }, -100.0, 100.0);
    CHECK(rate_floor_power_dbm(g, ctx) == doctest::Approx(p_rate).epsilon(1e-5));
    CHECK(std::abs(rate_floor_power_dbm(g, ctx) - p_rate) < 1e-3);

    const std::vector<double> i0{inr0(rng), inr0(rng)};
    const double worst = std::max(i0[0], i0[1]);
    const double p_inr = bisect([&](double p) { return worst + p > ctx.inr_max_db; }, -100.0, 100.0);
    CHECK(std::abs(inr_cap_power_dbm(i0, ctx) - p_inr) < 1e-3);
  }
  CHECK(std::isinf(inr_cap_power_dbm({}, table_ctx())));
}

TEST_CASE("solver matches exhaustive grid search") {
  std::mt19937_64 rng(6);
  std::uniform_real_distribution<double> gain(-90.0, -50.0), eps(0.3, 0.99), inr0(-50.0, -25.0);
  int checked = 0;
  for (int t = 0; t < 200; ++t) {
    PowerControlContext ctx = table_ctx();
    ctx.epsilon = eps(rng);
    const double g = gain(rng);
    const std::vector<double> i0{inr0(rng), inr0(rng), inr0(rng)};
    PowerDecision d;
    try {
      d = solve_power(g, i0, ctx);
    } catch (const InfeasibleLink& e) {
      CHECK(std::max(ctx.p_min_dbm, e.p_rate_dbm()) > std::min(ctx.p_max_dbm, e.p_inr_dbm()));
      continue;
    }
    ++checked;
    const double lo = std::max(ctx.p_min_dbm, d.p_rate_dbm);
    const double hi = std::min(ctx.p_max_dbm, d.p_inr_dbm);
    CHECK(std::abs(d.p_opt_dbm - grid_argmax(g, lo, hi, ctx)) <= 0.02);
    CHECK(d.p_opt_dbm >= ctx.p_min_dbm);
    CHECK(d.p_opt_dbm <= ctx.p_max_dbm);
    CHECK(d.rate_at_opt >= ctx.epsilon * rate(ctx.p_max_dbm, g, ctx) * (1.0 - 1e-12));
    for (double v : d.inr_per_satellite_db) CHECK(v <= ctx.inr_max_db + 1e-9);
  }
  CHECK(checked > 100);
}

TEST_CASE("binding constraints") {
  PowerControlContext ctx = table_ctx();
  // Peak near 19.8 dBm at gain -60 dB sits inside [10, 33] with a low floor.
  ctx.epsilon = 0.3;
  const PowerDecision peak = solve_power(-60.0, std::vector<double>{}, ctx);
  CHECK(peak.binding_constraint == BindingConstraint::UtilityPeak);
  CHECK(peak.p_opt_dbm == doctest::Approx(19.796).epsilon(1e-3));

  ctx.epsilon = 0.85;
  const PowerDecision floor = solve_power(-60.0, std::vector<double>{}, ctx);
  CHECK(floor.binding_constraint == BindingConstraint::RateFloor);
  CHECK(floor.p_opt_dbm == floor.p_rate_dbm);

  ctx.epsilon = 1.0;
  const PowerDecision full = solve_power(-60.0, std::vector<double>{}, ctx);
  CHECK(full.p_opt_dbm == doctest::Approx(33.0).epsilon(1e-12));

  ctx.epsilon = 0.3;
  // Cap above the peak does not bind.
  const PowerDecision loose = solve_power(-60.0, std::vector<double>{-30.0}, ctx);
  CHECK(loose.binding_constraint == BindingConstraint::UtilityPeak);
  // At 19.8 dBm the peak would exceed the cap; the cap at 14 dBm binds.
  const PowerDecision capped = solve_power(-60.0, std::vector<double>{-20.0}, ctx);
  CHECK(capped.binding_constraint == BindingConstraint::InrCap);
  CHECK(capped.p_opt_dbm == doctest::Approx(14.0).epsilon(1e-12));

  const PowerDecision pmin = solve_power(-30.0, std::vector<double>{}, ctx);
  CHECK(pmin.binding_constraint == BindingConstraint::PMin);
  CHECK(pmin.p_opt_dbm == 10.0);
}

TEST_CASE("infeasible links report both bounds") {
  PowerControlContext ctx = table_ctx();
  ctx.epsilon = 0.85;
  try {
    solve_power(-60.0, std::vector<double>{-10.0}, ctx);
    FAIL("expected InfeasibleLink");
  } catch (const InfeasibleLink& e) {
    CHECK(e.code() == ErrorCode::InfeasibleLink);
    CHECK(e.p_inr_dbm() == doctest::Approx(4.0));
    CHECK(e.p_rate_dbm() > 4.0);
  }
}

TEST_CASE("more gain lowers the peak power and raises the peak utility") {
  PowerControlContext ctx = table_ctx();
  ctx.p_min_dbm = -40.0;
  ctx.p_max_dbm = 60.0;
  double last_p = INFINITY, last_u = -INFINITY;
  for (double g = -80.0; g <= -40.0; g += 2.0) {
    const double p = maximize_utility(g, ctx.p_min_dbm, ctx.p_max_dbm, ctx);
    const double u = utility(p, g, ctx);
    CHECK(p <= last_p + 1e-9);
    CHECK(u >= last_u);
    last_p = p;
    last_u = u;
  }
}

TEST_CASE("utility curve export") {
  PowerControlContext ctx = table_ctx();
  const auto curve = utility_curve(-60.0, {-30.0}, ctx, 1.0);
  REQUIRE(curve.size() == 24);
  CHECK(curve.front().p_dbm == 10.0);
  CHECK(curve.back().p_dbm == 33.0);
  for (const auto& pt : curve) CHECK(pt.feasible == (pt.p_dbm >= rate_floor_power_dbm(-60.0, ctx) - 1e-9 && pt.p_dbm <= 24.0 + 1e-9));
}

TEST_CASE("context validation") {
  PowerControlContext ctx = table_ctx();
  ctx.epsilon = 0.0;
  CHECK_THROWS_AS(ctx.validate(), Error);
  ctx = table_ctx();
  ctx.p_min_dbm = 40.0;
  CHECK_THROWS_AS(ctx.validate(), Error);
  ctx = table_ctx();
  ctx.m_exp = 0.5;
  CHECK_THROWS_AS(ctx.validate(), Error);
  CHECK(std::string(to_string(BindingConstraint::InrCap)) == "inr_cap");
}
