#pragma once

#include <cstddef>
#include <vector>

#include "fr3share/geometry.hpp"

namespace fr3share {

inline constexpr double kEarthRadius = 6371e3;          // m, spherical mean radius
inline constexpr double kEarthMu = 3.986004418e14;      // m^3/s^2
inline constexpr double kEarthRotationRate = 7.2921159e-5;  // rad/s

/// Circular orbit. The node longitude is Earth-fixed at epoch and drifts
/// westward with Earth rotation; the in-plane phase at epoch is
/// arg_perigee + true_anomaly (the split only matters for re-mapping
/// externally defined element sets).
struct OrbitalElements {
  double altitude_m = 600e3;
  double inclination_deg = 0.0;
  double raan_deg = 0.0;
  double arg_perigee_deg = 0.0;
  double true_anomaly_deg = 0.0;

  /// Throws InvalidArgument on altitude <= 0 or inclination outside [0, 180].
  void validate() const;
  /// Copy with raan and anomaly angles wrapped into [0, 360).
  OrbitalElements normalized() const;
};

struct GroundSite {
  double latitude_deg = 0.0;
  double longitude_deg = 0.0;
  double height_m = 0.0;

  void validate() const;
};

struct SatelliteState {
  std::size_t slot_index = 0;
  std::size_t sat_id = 0;
  Vec3 position_ecef{};
  double elevation_deg = 0.0;
  double azimuth_deg = 0.0;  ///< compass: 0 = north, 90 = east
  double range_m = 0.0;
  Vec3 los_enu{};  ///< unit site->satellite vector, east-north-up
};

struct ElevationStats {
  double mean = 0.0;
  double median = 0.0;
  double std = 0.0;  ///< population standard deviation
  double min = 0.0;
  double max = 0.0;
  std::size_t count = 0;
};

std::vector<OrbitalElements> build_constellation(const OrbitalElements& base, std::size_t n_sat,
                                                 double delta_inclination_deg);

double wrap_degrees(double deg);

Vec3 site_ecef(const GroundSite& site);
/// Rows: east, north, up unit vectors in ECEF.
std::array<Vec3, 3> enu_basis(const GroundSite& site);
Vec3 satellite_ecef(const OrbitalElements& elements, double t_s);
double orbital_rate(double altitude_m);

/// Look angles and range from `site` to an ECEF point.
SatelliteState look_angles(const GroundSite& site, const Vec3& target_ecef);
/// ENU unit vector for a compass azimuth / elevation pair.
Vec3 direction_from_angles(double elevation_deg, double azimuth_deg);

std::vector<SatelliteState> propagate(const OrbitalElements& elements, const GroundSite& site,
                                      std::size_t n_slots, double slot_duration_s,
                                      std::size_t sat_id = 0);

/// States indexed [slot][satellite]. Satellites are propagated in parallel
/// unless `parallel` is false; the result is identical either way.
std::vector<std::vector<SatelliteState>> propagate_constellation(
    const std::vector<OrbitalElements>& constellation, const GroundSite& site, std::size_t n_slots,
    double slot_duration_s, bool parallel = true);

ElevationStats elevation_statistics(const std::vector<SatelliteState>& states, double mask_deg);

}  // namespace fr3share
