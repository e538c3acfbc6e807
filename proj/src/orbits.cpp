#include "fr3share/orbits.hpp"

#include <algorithm>
#include <cmath>

#include "fr3share/errors.hpp"

namespace fr3share {

void OrbitalElements::validate() const {
  if (!(altitude_m > 0.0) || !std::isfinite(altitude_m))
    throw Error(ErrorCode::InvalidArgument, "altitude must be positive");
  if (!(inclination_deg >= 0.0 && inclination_deg <= 180.0))
    throw Error(ErrorCode::InvalidArgument, "inclination must lie in [0, 180] degrees");
  if (!std::isfinite(raan_deg) || !std::isfinite(arg_perigee_deg) || !std::isfinite(true_anomaly_deg))
    throw Error(ErrorCode::InvalidArgument, "orbital angles must be finite");
}

OrbitalElements OrbitalElements::normalized() const {
  OrbitalElements out = *this;
  out.raan_deg = wrap_degrees(raan_deg);
  out.arg_perigee_deg = wrap_degrees(arg_perigee_deg);
  out.true_anomaly_deg = wrap_degrees(true_anomaly_deg);
  return out;
}

void GroundSite::validate() const {
  if (!(latitude_deg >= -90.0 && latitude_deg <= 90.0))
    throw Error(ErrorCode::InvalidArgument, "latitude must lie in [-90, 90] degrees");
  if (!(longitude_deg >= -180.0 && longitude_deg <= 180.0))
    throw Error(ErrorCode::InvalidArgument, "longitude must lie in [-180, 180] degrees");
  if (!std::isfinite(height_m)) throw Error(ErrorCode::InvalidArgument, "site height must be finite");
}

double wrap_degrees(double deg) {
  double w = std::fmod(deg, 360.0);
  if (w < 0.0) w += 360.0;
  if (w >= 360.0) w -= 360.0;
  return w;
}

std::vector<OrbitalElements> build_constellation(const OrbitalElements& base, std::size_t n_sat,
                                                 double delta_inclination_deg) {
  if (n_sat == 0) throw Error(ErrorCode::InvalidArgument, "constellation needs at least one satellite");
  base.validate();
  std::vector<OrbitalElements> out(n_sat, base.normalized());
  for (std::size_t k = 0; k < n_sat; ++k) {
    const double incl = base.inclination_deg + static_cast<double>(k) * delta_inclination_deg;
    out[k].inclination_deg = std::clamp(incl, 0.0, 180.0);
  }
  return out;
}

Vec3 site_ecef(const GroundSite& site) {
  const double lat = site.latitude_deg * kDegToRad;
  const double lon = site.longitude_deg * kDegToRad;
  const double r = kEarthRadius + site.height_m;
  return {r * std::cos(lat) * std::cos(lon), r * std::cos(lat) * std::sin(lon), r * std::sin(lat)};
}

std::array<Vec3, 3> enu_basis(const GroundSite& site) {
  const double lat = site.latitude_deg * kDegToRad;
  const double lon = site.longitude_deg * kDegToRad;
  const Vec3 east{-std::sin(lon), std::cos(lon), 0.0};
  const Vec3 north{-std::sin(lat) * std::cos(lon), -std::sin(lat) * std::sin(lon), std::cos(lat)};
  const Vec3 up{std::cos(lat) * std::cos(lon), std::cos(lat) * std::sin(lon), std::sin(lat)};
  return {east, north, up};
}

double orbital_rate(double altitude_m) {
  const double r = kEarthRadius + altitude_m;
  return std::sqrt(kEarthMu / (r * r * r));
}

Vec3 satellite_ecef(const OrbitalElements& el, double t_s) {
  const double r = kEarthRadius + el.altitude_m;
  const double u = (el.arg_perigee_deg + el.true_anomaly_deg) * kDegToRad + orbital_rate(el.altitude_m) * t_s;
  const double node = el.raan_deg * kDegToRad - kEarthRotationRate * t_s;
  const double inc = el.inclination_deg * kDegToRad;
  const double cu = std::cos(u), su = std::sin(u);
  const double cn = std::cos(node), sn = std::sin(node);
  return {r * (cn * cu - sn * su * std::cos(inc)), r * (sn * cu + cn * su * std::cos(inc)),
          r * su * std::sin(inc)};
}

SatelliteState look_angles(const GroundSite& site, const Vec3& target_ecef) {
  const Vec3 d = target_ecef - site_ecef(site);
  const double range = norm(d);
  if (!(range > 0.0)) throw Error(ErrorCode::DegenerateGeometry, "target coincides with the site");
  const auto [east, north, up] = enu_basis(site);
  const double de = dot(d, east) / range;
  const double dn = dot(d, north) / range;
  const double du = dot(d, up) / range;

  SatelliteState s;
  s.position_ecef = target_ecef;
  s.range_m = range;
  s.los_enu = {de, dn, du};
  s.elevation_deg = std::atan2(du, std::hypot(de, dn)) * kRadToDeg;
  s.azimuth_deg = std::atan2(de, dn) * kRadToDeg;
  return s;
}

Vec3 direction_from_angles(double elevation_deg, double azimuth_deg) {
  const double el = elevation_deg * kDegToRad;
  const double az = azimuth_deg * kDegToRad;
  return {std::cos(el) * std::sin(az), std::cos(el) * std::cos(az), std::sin(el)};
}

std::vector<SatelliteState> propagate(const OrbitalElements& elements, const GroundSite& site,
                                      std::size_t n_slots, double slot_duration_s, std::size_t sat_id) {
  if (n_slots == 0) throw Error(ErrorCode::InvalidArgument, "n_slots must be at least 1");
  if (!(slot_duration_s > 0.0)) throw Error(ErrorCode::InvalidArgument, "slot duration must be positive");
  elements.validate();
  site.validate();
  const OrbitalElements el = elements.normalized();

  std::vector<SatelliteState> out;
  out.reserve(n_slots);
  for (std::size_t k = 0; k < n_slots; ++k) {
    SatelliteState s = look_angles(site, satellite_ecef(el, static_cast<double>(k) * slot_duration_s));
    s.slot_index = k;
    s.sat_id = sat_id;
    out.push_back(s);
  }
  return out;
}

std::vector<std::vector<SatelliteState>> propagate_constellation(
    const std::vector<OrbitalElements>& constellation, const GroundSite& site, std::size_t n_slots,
    double slot_duration_s, bool parallel) {
  const std::size_t n_sat = constellation.size();
  std::vector<std::vector<SatelliteState>> per_sat(n_sat);
  const auto count = static_cast<long>(n_sat);

#pragma omp parallel for schedule(static) if (parallel)
  for (long k = 0; k < count; ++k) {
    const auto idx = static_cast<std::size_t>(k);
    per_sat[idx] = propagate(constellation[idx], site, n_slots, slot_duration_s, idx);
  }

  std::vector<std::vector<SatelliteState>> by_slot(n_slots, std::vector<SatelliteState>(n_sat));
  for (std::size_t k = 0; k < n_sat; ++k)
    for (std::size_t s = 0; s < n_slots; ++s) by_slot[s][k] = per_sat[k][s];
  return by_slot;
}

ElevationStats elevation_statistics(const std::vector<SatelliteState>& states, double mask_deg) {
  std::vector<double> el;
  for (const auto& s : states)
    if (s.elevation_deg >= mask_deg) el.push_back(s.elevation_deg);
  if (el.empty()) throw Error(ErrorCode::EmptySample, "no elevation samples above the mask");
  std::sort(el.begin(), el.end());

  ElevationStats st;
  st.count = el.size();
  double sum = 0.0;
  for (double x : el) sum += x;
  st.mean = sum / static_cast<double>(el.size());
  double var = 0.0;
  for (double x : el) var += (x - st.mean) * (x - st.mean);
  st.std = std::sqrt(var / static_cast<double>(el.size()));
  const std::size_t n = el.size();
  st.median = n % 2 == 1 ? el[n / 2] : 0.5 * (el[n / 2 - 1] + el[n / 2]);
  st.min = el.front();
  st.max = el.back();
  return st;
}

}  // namespace fr3share
