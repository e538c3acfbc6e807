#include <doctest.h>

#include <cmath>
#include <random>

#include "fr3share/arrays_channels.hpp"
#include "fr3share/errors.hpp"
#include "fr3share/nulling.hpp"
#include "oracles.hpp"

using namespace fr3share;

namespace {

ArrayGeometry upa(std::size_t n) { return ArrayGeometry{n, n, 0.5, 0.0, 0.0, ElementPattern::Isotropic, 0.0}; }

ComplexMatrix unit_channel(std::size_t nr, std::size_t nt, std::mt19937_64& rng) {
  ComplexMatrix h = oracle::random_matrix(nr, nt, rng);
  h *= 1.0 / oracle::fro(h);
  return h;
}

std::vector<ComplexMatrix> random_sats(std::size_t j, std::size_t nt, std::mt19937_64& rng) {
  std::vector<ComplexMatrix> out;
  for (std::size_t i = 0; i < j; ++i) out.push_back(oracle::random_unit(nt, rng));
  return out;
}

// Steering directions spread over the upper hemisphere of the array frame.
std::vector<ComplexMatrix> steering_sats(const ArrayGeometry& g, std::size_t j, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> az(-60.0, 60.0), zen(20.0, 80.0);
  std::vector<ComplexMatrix> out;
  for (std::size_t i = 0; i < j; ++i) out.push_back(array_response(g, az(rng), zen(rng)));
  return out;
}

double objective(const BeamformerPair& p, const ComplexMatrix& h) { return beamformed_gain(p.w_r, h, p.w_t); }

}  // namespace

TEST_CASE("lambda zero reaches the top singular value") {
  std::mt19937_64 rng(1);
  for (int t = 0; t < 20; ++t) {
    const ComplexMatrix h = unit_channel(2, 64, rng);
    const auto sats = random_sats(5, 64, rng);
    const BeamformerPair p = solve_nulling(h, sats, {0.0});
    const double s1 = svd(h).s[0];
    CHECK(std::abs(objective(p, h) - s1 * s1) <= 1e-10);
    CHECK(std::abs(p.w_t.frobenius_norm() - 1.0) < 1e-12);
    CHECK(std::abs(p.w_r.frobenius_norm() - 1.0) < 1e-12);
  }
}

TEST_CASE("empty satellite list ignores lambda") {
  std::mt19937_64 rng(2);
  const ComplexMatrix h = unit_channel(2, 16, rng);
  const BeamformerPair a = solve_nulling(h, {}, {0.0});
  const BeamformerPair b = solve_nulling(h, {}, {10.0});
  CHECK(oracle::diff_fro(a.w_t, b.w_t) == 0.0);
  CHECK(b.lambda_used == 10.0);
}

TEST_CASE("satellite orthogonal to the row space does not move the beam") {
  std::mt19937_64 rng(3);
  const ComplexMatrix h = unit_channel(2, 8, rng);
  // Project a random vector off the row space of h.
  const SvdResult s = svd(h);
  ComplexMatrix x = oracle::random_unit(8, rng);
  for (std::size_t c = 0; c < 2; ++c) {
    const cplx proj = inner(s.v.col(c), x);
    for (std::size_t i = 0; i < 8; ++i) x[i] -= proj * s.v(i, c);
  }
  x *= 1.0 / oracle::fro(x);
  const BeamformerPair base = solve_nulling(h, {x}, {0.0});
  for (double lam : {0.1, 1.0, 10.0, 1e3}) {
    const BeamformerPair p = solve_nulling(h, {x}, {lam});
    CHECK(oracle::abs_inner(p.w_t, base.w_t) == doctest::Approx(1.0).epsilon(1e-10));
  }
}

TEST_CASE("reduced solver agrees with the full eigendecomposition") {
  std::mt19937_64 rng(4);
  for (std::size_t n : {2u, 4u, 8u}) {
    const ArrayGeometry g = upa(n);
    for (std::size_t j : {1u, 5u, 40u}) {
      for (double lam : {0.1, 1.0, 10.0}) {
        const ComplexMatrix h = unit_channel(2, n * n, rng);
        const auto sats = steering_sats(g, j, rng);
        const BeamformerPair fast = solve_nulling(h, sats, {lam});
        const BeamformerPair ref = solve_nulling_reference(h, sats, {lam});
        CAPTURE(n);
        CAPTURE(j);
        CAPTURE(lam);
        const ComplexMatrix m = nulling_matrix(h, ref.w_r, sats, lam);
        const double vf = inner(fast.w_t, m * fast.w_t).real();
        const double vr = inner(ref.w_t, m * ref.w_t).real();
        CHECK(std::abs(vf - vr) <= 1e-10 * m.frobenius_norm());
        if (!ref.degenerate && !fast.degenerate)
          CHECK(oracle::abs_inner(fast.w_t, ref.w_t) == doctest::Approx(1.0).epsilon(1e-8));
      }
    }
  }
}

TEST_CASE("returned beam maximizes the quadratic form") {
  std::mt19937_64 rng(5);
  const ArrayGeometry g = upa(4);
  const ComplexMatrix h = unit_channel(2, 16, rng);
  const auto sats = steering_sats(g, 6, rng);
  const BeamformerPair p = solve_nulling(h, sats, {1.0});
  const ComplexMatrix m = nulling_matrix(h, p.w_r, sats, 1.0);
  const double best = inner(p.w_t, m * p.w_t).real();
  for (int i = 0; i < 1000; ++i) {
    const ComplexMatrix u = oracle::random_unit(16, rng);
    REQUIRE(inner(u, m * u).real() <= best + 1e-9);
  }
}

TEST_CASE("leakage and served gain fall as lambda grows") {
  std::mt19937_64 rng(6);
  const ArrayGeometry g = upa(8);
  for (int t = 0; t < 10; ++t) {
    const ComplexMatrix h = unit_channel(2, 64, rng);
    const auto sats = steering_sats(g, 40, rng);
    double last_leak = INFINITY, last_gain = INFINITY;
    for (double lam : {0.0, 0.1, 1.0, 10.0}) {
      const BeamformerPair p = solve_nulling(h, sats, {lam});
      const double lk = leakage(p.w_t, sats);
      const double gn = objective(p, h);
      CHECK(lk <= last_leak + 1e-10);
      CHECK(gn <= last_gain + 1e-10);
      last_leak = lk;
      last_gain = gn;
    }
  }
}

TEST_CASE("degrees of freedom limit nulling depth") {
  std::mt19937_64 rng(7);
  const ArrayGeometry small = upa(4), large = upa(32);
  std::uniform_real_distribution<double> az(-60.0, 60.0), zen(30.0, 85.0);
  std::vector<std::pair<double, double>> dirs;
  for (int i = 0; i < 40; ++i) dirs.emplace_back(az(rng), zen(rng));
  auto residual = [&](const ArrayGeometry& g) {
    std::vector<ComplexMatrix> sats;
    for (auto [a, z] : dirs) sats.push_back(array_response(g, a, z));
    ComplexMatrix h = outer(ComplexMatrix(2, 1, {1.0, 1.0}), array_response(g, 5.0, 95.0));
    h *= 1.0 / h.frobenius_norm();
    return leakage(solve_nulling(h, sats, {10.0}).w_t, sats);
  };
  const double r_small = residual(small);
  const double r_large = residual(large);
  CHECK(r_small > 1e-4);
  CHECK(10.0 * std::log10(r_small / r_large) >= 20.0);
}

TEST_CASE("beamformed gain on a unit LOS channel") {
  const ArrayGeometry g = upa(8);
  const ComplexMatrix e = array_response(g, 20.0, 70.0);
  ComplexMatrix h = outer(ComplexMatrix(1, 1, {1.0}), e);
  h *= 8.0;  // unnormalized response: a = sqrt(N) e
  ComplexMatrix hn = normalized(h);
  const BeamformerPair p = solve_nulling(hn, {}, {0.0});
  CHECK(beamformed_gain_db(p, h) == doctest::Approx(10.0 * std::log10(64.0)).epsilon(1e-12));
  // Rank-1 unit-Frobenius channel: gain is exactly one.
  CHECK(std::abs(beamformed_gain_db(p, hn)) < 1e-12);
}

TEST_CASE("input validation") {
  std::mt19937_64 rng(8);
  const ComplexMatrix h = unit_channel(2, 4, rng);
  CHECK_THROWS_AS(solve_nulling(2.0 * h, {}, {0.0}), Error);
  CHECK_THROWS_AS(solve_nulling(h, {ComplexMatrix(4, 1, {1, 1, 0, 0})}, {1.0}), Error);
  CHECK_THROWS_AS(solve_nulling(h, {oracle::random_unit(5, rng)}, {1.0}), Error);
  CHECK_THROWS_AS(solve_nulling(h, {}, {-1.0}), Error);
  try {
    solve_nulling(2.0 * h, {}, {0.0});
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NotNormalized);
  }
}

TEST_CASE("gain maps") {
  const ArrayGeometry g = upa(8);
  const ComplexMatrix w = array_response(g, 20.0, 70.0);
  AngularGrid grid{-90, 90, 1, -180, 180, 1};
  const GainMap map = gain_map(w, g, grid);
  const GainMap serial = gain_map(w, g, grid, false);
  CHECK(map.gain_db == serial.gain_db);

  double peak = -1e9;
  std::size_t pz = 0, pa = 0;
  for (std::size_t z = 0; z < map.zeniths_deg.size(); ++z)
    for (std::size_t a = 0; a < map.azimuths_deg.size(); ++a)
      if (map.at(z, a) > peak) {
        peak = map.at(z, a);
        pz = z;
        pa = a;
      }
  CHECK(peak == doctest::Approx(10.0 * std::log10(64.0)).epsilon(1e-12));
  // The symmetry identity maps the matched direction onto its mirror, so
  // the peak is attained at (20, 70) or (-20, -70).
  const bool at_target = map.azimuths_deg[pa] == 20.0 && map.zeniths_deg[pz] == 70.0;
  const bool at_mirror = map.azimuths_deg[pa] == -20.0 && map.zeniths_deg[pz] == -70.0;
  CHECK((at_target || at_mirror));

  const std::size_t na = map.azimuths_deg.size(), nz = map.zeniths_deg.size();
  for (std::size_t z = 0; z < nz; ++z)
    for (std::size_t a = 0; a < na; ++a)
      REQUIRE(map.at(z, a) == doctest::Approx(map.at(nz - 1 - z, na - 1 - a)).epsilon(1e-9));
}

TEST_CASE("nulled beam puts satellites well below the main lobe") {
  std::mt19937_64 rng(9);
  const ArrayGeometry g = upa(8);
  const auto sats = steering_sats(g, 10, rng);
  ComplexMatrix h = outer(ComplexMatrix(2, 1, {1.0, 1.0}), array_response(g, 0.0, 100.0));
  h *= 1.0 / h.frobenius_norm();
  const BeamformerPair p = solve_nulling(h, sats, {10.0});
  const double main = 10.0 * std::log10(64.0 * std::norm(inner(array_response(g, 0.0, 100.0), p.w_t)));
  for (const auto& s : sats) CHECK(10.0 * std::log10(64.0 * std::norm(inner(s, p.w_t))) <= main - 20.0);
}
