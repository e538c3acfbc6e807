#include <doctest.h>

#include <cmath>
#include <random>

#include "fr3share/arrays_channels.hpp"
#include "fr3share/errors.hpp"
#include "oracles.hpp"

using namespace fr3share;

namespace {

ArrayGeometry upa8() { return ArrayGeometry{8, 8, 0.5, 0.0, 0.0, ElementPattern::Isotropic, 0.0}; }

}  // namespace

TEST_CASE("boresight response is uniform") {
  const ComplexMatrix e = steering_vector_local(upa8(), 0.0, 0.0);
  for (std::size_t i = 0; i < 64; ++i) {
    CHECK(e[i].real() == doctest::Approx(1.0 / 8.0).epsilon(1e-14));
    CHECK(std::abs(e[i].imag()) < 1e-15);
  }
}

TEST_CASE("local steering vector matches an independent UPA formula") {
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> ang(-80.0, 80.0);
  const ArrayGeometry g{4, 3, 0.5, 0.0, 0.0, ElementPattern::Isotropic, 0.0};
  for (int i = 0; i < 50; ++i) {
    const double el = ang(rng), az = ang(rng);
    const double uy = std::sin(az * kDegToRad) * std::cos(el * kDegToRad);
    const double uz = std::sin(el * kDegToRad);
    CHECK(oracle::diff_fro(steering_vector_local(g, el, az), oracle::upa(4, 3, 0.5, uy, uz)) < 1e-12);
    // The polar-angle form is the same response with zenith = 90 - elevation
    // when the azimuth is measured in the broadside plane.
    const double zen = 90.0 - el;
    const double az_p = std::atan2(uy, std::cos(az * kDegToRad) * std::cos(el * kDegToRad)) * kRadToDeg;
    const double zz = std::acos(uz) * kRadToDeg;
    CHECK(oracle::diff_fro(array_response(g, az_p, zz), oracle::upa(4, 3, 0.5, uy, uz)) < 1e-12);
    CHECK(zz == doctest::Approx(zen).epsilon(1e-9));
  }
}

TEST_CASE("steering vectors have unit norm") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> ang(-180.0, 180.0);
  ArrayGeometry g = upa8();
  g.boresight_azimuth_deg = 30.0;
  g.downtilt_deg = 12.0;
  for (int i = 0; i < 200; ++i) {
    CHECK(std::abs(steering_vector(g, ang(rng) / 2.0, ang(rng)).frobenius_norm() - 1.0) < 1e-12);
    CHECK(std::abs(array_response(g, ang(rng), ang(rng)).frobenius_norm() - 1.0) < 1e-12);
  }
}

TEST_CASE("array response symmetry identity") {
  std::mt19937_64 rng(10);
  std::uniform_real_distribution<double> ang(-180.0, 180.0);
  const ArrayGeometry g = upa8();
  for (int i = 0; i < 1000; ++i) {
    const double az = ang(rng), zen = ang(rng);
    const ComplexMatrix a = array_response(g, az, zen);
    const ComplexMatrix b = array_response(g, -az, -zen);
    for (std::size_t k = 0; k < a.size(); ++k) REQUIRE(std::abs(a[k] - b[k]) <= 1e-12);
  }
}

TEST_CASE("array frame orientation") {
  ArrayGeometry g = upa8();
  g.boresight_azimuth_deg = 90.0;
  g.downtilt_deg = 12.0;
  const ArrayFrame f = array_frame(g);
  CHECK(f.x[0] == doctest::Approx(std::cos(12.0 * kDegToRad)));
  CHECK(f.x[2] == doctest::Approx(-std::sin(12.0 * kDegToRad)));
  CHECK(std::abs(dot(f.x, f.y)) < 1e-15);
  CHECK(std::abs(dot(f.x, f.z)) < 1e-15);
  CHECK(std::abs(dot(f.y, f.z)) < 1e-15);
  // A direction 12 degrees below the horizon toward east is broadside.
  const LocalAngles la = to_local(g, direction_from_angles(-12.0, 90.0));
  CHECK(std::abs(la.elevation_deg) < 1e-9);
  CHECK(std::abs(la.azimuth_deg) < 1e-9);
}

TEST_CASE("element patterns") {
  ArrayGeometry g = upa8();
  g.pattern = ElementPattern::Tr38901;
  g.element_gain_dbi = 8.0;
  CHECK(element_gain_db(g, {0, 1, 0}) == doctest::Approx(8.0));
  // 65-degree HPBW: 3 dB down at 32.5 degrees off boresight.
  CHECK(element_gain_db(g, direction_from_angles(0.0, 32.5)) == doctest::Approx(5.0));
  CHECK(element_gain_db(g, {0, -1, 0}) == doctest::Approx(-22.0));
  g.pattern = ElementPattern::Isotropic;
  CHECK(element_gain_db(g, {0, -1, 0}) == 8.0);
}

TEST_CASE("free-space path loss") {
  CHECK(fspl_db(600e3, 7.125e9) == doctest::Approx(oracle::fspl_db(600e3, 7.125e9)).epsilon(1e-12));
  CHECK(fspl_db(600e3, 7.125e9) == doctest::Approx(165.0665056).epsilon(1e-9));
  CHECK(fspl_db(100.0, 7.125e9) == doctest::Approx(89.5034806).epsilon(1e-9));
  CHECK(fspl_db(200.0, 7.125e9) > fspl_db(100.0, 7.125e9));
  CHECK_THROWS_AS(fspl_db(0.0, 7.125e9), Error);
}

TEST_CASE("LOS channel is rank one with the expected magnitude") {
  LinkEnd tx{{0, 0, 50}, upa8()};
  LinkEnd rx{{20, 60, 1.6}, ArrayGeometry{2, 1, 0.5, 180.0, 0.0, ElementPattern::Isotropic, 0.0}};
  const ComplexMatrix h = los_channel(tx, rx, 7.125e9);
  REQUIRE(h.rows() == 2);
  REQUIRE(h.cols() == 64);
  const SvdResult s = svd(h);
  CHECK(s.s[1] < 1e-12 * s.s[0]);
  const double range = norm(rx.position - tx.position);
  // |g|^2 N_r N_t = ||H||_F^2
  const double expected_db = -oracle::fspl_db(range, 7.125e9) + 10.0 * std::log10(128.0);
  CHECK(20.0 * std::log10(h.frobenius_norm()) == doctest::Approx(expected_db).epsilon(1e-12));

  rx.position = tx.position;
  CHECK_THROWS_AS(los_channel(tx, rx, 7.125e9), Error);
}

TEST_CASE("path gain falls with range") {
  const ArrayGeometry g = upa8();
  double last = 1e9;
  for (double r = 10.0; r < 1e4; r *= 1.7) {
    const ComplexMatrix h = los_channel({{0, 0, 0}, g}, {{r, 0, 0}, g}, 7.125e9);
    CHECK(h.frobenius_norm() < last);
    last = h.frobenius_norm();
  }
}

TEST_CASE("channel sets") {
  CellGeometry cell;
  cell.gnb = {{0, 0, 50}, upa8()};
  cell.ues = {{{10, 50, 1.6}, ArrayGeometry{2, 1, 0.5, 180.0, 0.0, ElementPattern::Isotropic, 0.0}}};

  const ChannelSet empty = build_channel_set(cell, {}, 3);
  CHECK(empty.slot_index == 3);
  CHECK(empty.h_ter.size() == 1);
  CHECK(empty.h_sat.empty());
  CHECK(std::abs(empty.h_ter_normalized[0].frobenius_norm() - 1.0) < 1e-12);

  std::vector<SatelliteState> sats(40);
  for (std::size_t j = 0; j < sats.size(); ++j) {
    sats[j].sat_id = j;
    sats[j].elevation_deg = 15.0 + j;
    sats[j].azimuth_deg = 3.0 * j;
    sats[j].los_enu = direction_from_angles(sats[j].elevation_deg, sats[j].azimuth_deg);
    sats[j].range_m = 1000e3;
  }
  cell.ues.resize(30, cell.ues[0]);
  const ChannelSet cs = build_channel_set(cell, sats, 0);
  CHECK(cs.h_ter.size() == 30);
  CHECK(cs.h_ter[29].rows() == 2);
  CHECK(cs.h_ter[29].cols() == 64);
  REQUIRE(cs.h_sat.size() == 40);
  CHECK(cs.h_sat[0].rows() == 64);
  for (std::size_t j = 0; j < 40; ++j) {
    CHECK(std::abs(cs.h_sat_normalized[j].frobenius_norm() - 1.0) < 1e-12);
    CHECK(oracle::abs_inner(cs.h_sat_normalized[j], cs.sat_steering[j]) == doctest::Approx(1.0).epsilon(1e-12));
  }

  sats[0].elevation_deg = 5.0;
  CHECK(build_channel_set(cell, sats, 0).h_sat.size() == 39);
}
