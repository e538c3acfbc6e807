#include "fr3share/arrays_channels.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "fr3share/errors.hpp"

namespace fr3share {

namespace {

// Response from the direction's components along the horizontal (uy) and
// vertical (uz) element axes.
ComplexMatrix response_from_components(const ArrayGeometry& geom, double uy, double uz) {
  const std::size_t n = geom.num_elements();
  const double k = 2.0 * std::numbers::pi * geom.spacing;
  const double amp = 1.0 / std::sqrt(static_cast<double>(n));
  ComplexMatrix e(n, 1);
  for (std::size_t p = 0; p < geom.n_az; ++p) {
    for (std::size_t q = 0; q < geom.n_el; ++q) {
      const double phase = k * (static_cast<double>(p) * uy + static_cast<double>(q) * uz);
      e[p * geom.n_el + q] = std::polar(amp, phase);
    }
  }
  return e;
}

ComplexMatrix scaled(ComplexMatrix m, double s) {
  m *= s;
  return m;
}

}  // namespace

void ArrayGeometry::validate() const {
  if (n_az < 1 || n_el < 1) throw Error(ErrorCode::InvalidArgument, "array needs at least one element per axis");
  if (!(spacing > 0.0) || !std::isfinite(spacing))
    throw Error(ErrorCode::InvalidArgument, "element spacing must be positive");
  if (!std::isfinite(boresight_azimuth_deg) || !std::isfinite(downtilt_deg) || !std::isfinite(element_gain_dbi))
    throw Error(ErrorCode::InvalidArgument, "array orientation and gain must be finite");
}

ArrayFrame array_frame(const ArrayGeometry& geom) {
  const double b = geom.boresight_azimuth_deg * kDegToRad;
  const double t = geom.downtilt_deg * kDegToRad;
  return {
      {std::sin(b) * std::cos(t), std::cos(b) * std::cos(t), -std::sin(t)},
      {std::cos(b), -std::sin(b), 0.0},
      {std::sin(b) * std::sin(t), std::cos(b) * std::sin(t), std::cos(t)},
  };
}

LocalAngles to_local(const ArrayGeometry& geom, const Vec3& dir_enu) {
  const ArrayFrame f = array_frame(geom);
  const double dx = dot(dir_enu, f.x), dy = dot(dir_enu, f.y), dz = dot(dir_enu, f.z);
  return {std::atan2(dz, std::hypot(dx, dy)) * kRadToDeg, std::atan2(dy, dx) * kRadToDeg};
}

ComplexMatrix steering_vector_local(const ArrayGeometry& geom, double elevation_deg, double azimuth_deg) {
  const double el = elevation_deg * kDegToRad;
  const double az = azimuth_deg * kDegToRad;
  return response_from_components(geom, std::sin(az) * std::cos(el), std::sin(el));
}

ComplexMatrix steering_vector(const ArrayGeometry& geom, const Vec3& dir_enu) {
  const double n = norm(dir_enu);
  if (!(n > 0.0)) throw Error(ErrorCode::DegenerateGeometry, "zero direction vector");
  const ArrayFrame f = array_frame(geom);
  return response_from_components(geom, dot(dir_enu, f.y) / n, dot(dir_enu, f.z) / n);
}

ComplexMatrix steering_vector(const ArrayGeometry& geom, double elevation_deg, double azimuth_deg) {
  return steering_vector(geom, direction_from_angles(elevation_deg, azimuth_deg));
}

ComplexMatrix array_response(const ArrayGeometry& geom, double azimuth_deg, double zenith_deg) {
  const double az = azimuth_deg * kDegToRad;
  const double zen = zenith_deg * kDegToRad;
  return response_from_components(geom, std::sin(az) * std::sin(zen), std::cos(zen));
}

double element_gain_db(const ArrayGeometry& geom, const Vec3& dir_enu) {
  if (geom.pattern == ElementPattern::Isotropic) return geom.element_gain_dbi;
  const LocalAngles a = to_local(geom, dir_enu);
  constexpr double kHpbw = 65.0;
  constexpr double kCap = 30.0;
  const double av = -std::min(12.0 * std::pow(a.elevation_deg / kHpbw, 2), kCap);
  const double ah = -std::min(12.0 * std::pow(a.azimuth_deg / kHpbw, 2), kCap);
  return geom.element_gain_dbi - std::min(-(av + ah), kCap);
}

double wavelength(double carrier_hz) {
  if (!(carrier_hz > 0.0)) throw Error(ErrorCode::InvalidArgument, "carrier must be positive");
  return kSpeedOfLight / carrier_hz;
}

double fspl_db(double distance_m, double carrier_hz) {
  if (!(distance_m > 0.0)) throw Error(ErrorCode::DegenerateGeometry, "path length must be positive");
  return 20.0 * std::log10(4.0 * std::numbers::pi * distance_m / wavelength(carrier_hz));
}

ComplexMatrix los_channel(const LinkEnd& tx, const LinkEnd& rx, double carrier_hz) {
  const Vec3 d = rx.position - tx.position;
  const double range = norm(d);
  if (!(range > 0.0)) throw Error(ErrorCode::DegenerateGeometry, "zero-length terrestrial link");
  const Vec3 dir_tx = (1.0 / range) * d;
  const Vec3 dir_rx = (-1.0 / range) * d;

  const double gain_db = -fspl_db(range, carrier_hz) + element_gain_db(tx.array, dir_tx) +
                         element_gain_db(rx.array, dir_rx);
  const double phase = 2.0 * std::numbers::pi * std::fmod(range / wavelength(carrier_hz), 1.0);
  const cplx g = std::polar(std::pow(10.0, gain_db / 20.0), phase);

  const ComplexMatrix a_tx =
      scaled(steering_vector(tx.array, dir_tx), std::sqrt(static_cast<double>(tx.array.num_elements())));
  const ComplexMatrix a_rx =
      scaled(steering_vector(rx.array, dir_rx), std::sqrt(static_cast<double>(rx.array.num_elements())));
  return g * outer(a_rx, a_tx);
}

double satellite_path_gain_db(const ArrayGeometry& tx, const SatelliteState& sat, double carrier_hz) {
  return -fspl_db(sat.range_m, carrier_hz) + element_gain_db(tx, sat.los_enu);
}

ComplexMatrix satellite_channel(const ArrayGeometry& tx, const SatelliteState& sat, double carrier_hz) {
  const double gain_db = satellite_path_gain_db(tx, sat, carrier_hz);
  const double phase = 2.0 * std::numbers::pi * std::fmod(sat.range_m / wavelength(carrier_hz), 1.0);
  const cplx g = std::polar(std::pow(10.0, gain_db / 20.0), phase);
  const ComplexMatrix a_tx =
      scaled(steering_vector(tx, sat.los_enu), std::sqrt(static_cast<double>(tx.num_elements())));
  return std::conj(g) * a_tx;
}

ChannelSet build_channel_set(const CellGeometry& cell, const std::vector<SatelliteState>& sats,
                             std::size_t slot, const std::vector<std::size_t>* ue_subset) {
  ChannelSet cs;
  cs.slot_index = slot;
  const std::size_t k = cell.ues.size();
  cs.h_ter.resize(k);
  cs.h_ter_normalized.resize(k);
  cs.ter_path_gain_db.assign(k, 0.0);

  auto build_ue = [&](std::size_t u) {
    if (u >= k) throw Error(ErrorCode::InvalidArgument, "UE index out of range");
    const LinkEnd& ue = cell.ues[u];
    cs.h_ter[u] = los_channel(cell.gnb, ue, cell.carrier_hz);
    cs.h_ter_normalized[u] = normalized(cs.h_ter[u]);
    const Vec3 d = ue.position - cell.gnb.position;
    const double range = norm(d);
    cs.ter_path_gain_db[u] = -fspl_db(range, cell.carrier_hz) +
                             element_gain_db(cell.gnb.array, (1.0 / range) * d) +
                             element_gain_db(ue.array, (-1.0 / range) * d);
  };
  if (ue_subset != nullptr) {
    for (std::size_t u : *ue_subset) build_ue(u);
  } else {
    for (std::size_t u = 0; u < k; ++u) build_ue(u);
  }

  for (const auto& s : sats) {
    if (s.elevation_deg < cell.elevation_mask_deg) continue;
    cs.sat_ids.push_back(s.sat_id);
    cs.h_sat.push_back(satellite_channel(cell.gnb.array, s, cell.carrier_hz));
    cs.h_sat_normalized.push_back(normalized(cs.h_sat.back()));
    cs.sat_steering.push_back(steering_vector(cell.gnb.array, s.los_enu));
    cs.sat_path_gain_db.push_back(satellite_path_gain_db(cell.gnb.array, s, cell.carrier_hz));
  }
  return cs;
}

}  // namespace fr3share
