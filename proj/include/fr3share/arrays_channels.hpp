#pragma once

#include <cstddef>
#include <vector>

#include "fr3share/geometry.hpp"
#include "fr3share/numerics.hpp"
#include "fr3share/orbits.hpp"

namespace fr3share {

inline constexpr double kSpeedOfLight = 299792458.0;

enum class ElementPattern {
  Isotropic,
  /// 3GPP TR 38.901 sector element: 65 deg half-power beamwidth in both
  /// planes, 30 dB side-lobe and front-to-back caps.
  Tr38901,
};

/// Uniform planar array. Elements are indexed (p, q) with p along the
/// horizontal axis (n_az) and q along the vertical axis (n_el); the flat index
/// is p * n_el + q.
struct ArrayGeometry {
  std::size_t n_az = 1;
  std::size_t n_el = 1;
  double spacing = 0.5;              ///< wavelengths
  double boresight_azimuth_deg = 0;  ///< compass azimuth of broadside
  double downtilt_deg = 0;           ///< positive tilts broadside below the horizon
  ElementPattern pattern = ElementPattern::Isotropic;
  double element_gain_dbi = 0;       ///< peak element gain

  std::size_t num_elements() const noexcept { return n_az * n_el; }
  void validate() const;
};

/// Array axes expressed in ENU: x broadside, y horizontal element axis,
/// z vertical element axis.
struct ArrayFrame {
  Vec3 x, y, z;
};

ArrayFrame array_frame(const ArrayGeometry& geom);

/// Angles of an ENU direction in the array frame: elevation above the
/// broadside plane, azimuth from broadside toward +y.
struct LocalAngles {
  double elevation_deg;
  double azimuth_deg;
};

LocalAngles to_local(const ArrayGeometry& geom, const Vec3& dir_enu);

/// Unit-norm response for local elevation/azimuth (array frame).
ComplexMatrix steering_vector_local(const ArrayGeometry& geom, double elevation_deg, double azimuth_deg);
/// Unit-norm response for a direction given as ENU elevation and compass
/// azimuth; the array orientation is applied first.
ComplexMatrix steering_vector(const ArrayGeometry& geom, double elevation_deg, double azimuth_deg);
/// Unit-norm response toward an ENU unit vector.
ComplexMatrix steering_vector(const ArrayGeometry& geom, const Vec3& dir_enu);

/// Unit-norm response parameterized by azimuth and the polar angle measured
/// from the array's vertical element axis (90 deg = broadside plane). In this
/// form e(az, zen) == e(-az, -zen) holds identically.
ComplexMatrix array_response(const ArrayGeometry& geom, double azimuth_deg, double zenith_deg);

/// Element gain in dBi toward an ENU direction.
double element_gain_db(const ArrayGeometry& geom, const Vec3& dir_enu);

double wavelength(double carrier_hz);
double fspl_db(double distance_m, double carrier_hz);

/// One end of a link: position in a shared local ENU frame (metres) and the
/// array mounted there.
struct LinkEnd {
  Vec3 position;
  ArrayGeometry array;
};

/// Rank-1 LOS channel H (N_rx x N_tx) = g * a_rx a_tx^H with unnormalized
/// array responses; |g| folds in free-space loss and both element gains and
/// arg(g) = 2*pi*range/wavelength.
ComplexMatrix los_channel(const LinkEnd& tx, const LinkEnd& rx, double carrier_hz);

/// Downlink leakage toward a satellite as an N_t x 1 vector: the conjugate
/// transpose of the 1 x N_t channel to a single-element receiver along
/// `sat.los_enu` at `sat.range_m`. Satellite-side antenna gain is excluded
/// here; it is carried by the receiver's G/T.
ComplexMatrix satellite_channel(const ArrayGeometry& tx, const SatelliteState& sat, double carrier_hz);

/// Path gain in dB (negative loss) of a satellite link, including the gNB
/// element gain toward it.
double satellite_path_gain_db(const ArrayGeometry& tx, const SatelliteState& sat, double carrier_hz);

struct ChannelSet {
  std::size_t slot_index = 0;
  std::vector<ComplexMatrix> h_ter;
  std::vector<ComplexMatrix> h_ter_normalized;
  std::vector<double> ter_path_gain_db;
  std::vector<std::size_t> sat_ids;
  std::vector<ComplexMatrix> h_sat;
  std::vector<ComplexMatrix> h_sat_normalized;
  /// Unit-norm steering vectors toward each visible satellite.
  std::vector<ComplexMatrix> sat_steering;
  std::vector<double> sat_path_gain_db;
};

/// Static link geometry shared by every slot of a run.
struct CellGeometry {
  LinkEnd gnb;
  std::vector<LinkEnd> ues;
  double carrier_hz = 7.125e9;
  double elevation_mask_deg = 10.0;
};

/// Builds one slot's channels. Satellites below the mask are dropped.
/// If `ue_subset` is non-null only those UEs get terrestrial channels
/// (others are left empty).
ChannelSet build_channel_set(const CellGeometry& cell, const std::vector<SatelliteState>& sats,
                             std::size_t slot, const std::vector<std::size_t>* ue_subset = nullptr);

}  // namespace fr3share
