#pragma once

#include <cstddef>
#include <vector>

#include "fr3share/arrays_channels.hpp"
#include "fr3share/numerics.hpp"

namespace fr3share {

struct NullingConfig {
  double lambda = 0.0;

  void validate() const;
};

struct BeamformerPair {
  ComplexMatrix w_t;  ///< N_t x 1, unit norm
  ComplexMatrix w_r;  ///< N_r x 1, unit norm
  double lambda_used = 0.0;
  /// The dominant eigenvalue of the nulling matrix was not simple; w_t is
  /// one (deterministic) member of the dominant eigenspace.
  bool degenerate = false;
};

/// Beamformers trading served-link gain against leakage toward satellites:
/// w_r is the dominant left singular vector of `h_norm` and w_t the principal
/// eigenvector of  H^H w_r w_r^H H - lambda * sum_j h_j h_j^H.
/// The eigenproblem is solved on the (at most J+1)-dimensional subspace the
/// matrix acts on, so the cost is independent of N_t beyond projections.
BeamformerPair solve_nulling(const ComplexMatrix& h_norm, const std::vector<ComplexMatrix>& sat_norm,
                             const NullingConfig& cfg);

/// Same solution computed from a full N_t x N_t Hermitian eigendecomposition.
/// Kept as the reference the reduced solver is tested against.
BeamformerPair solve_nulling_reference(const ComplexMatrix& h_norm,
                                       const std::vector<ComplexMatrix>& sat_norm,
                                       const NullingConfig& cfg);

/// The nulling matrix itself (N_t x N_t).
ComplexMatrix nulling_matrix(const ComplexMatrix& h_norm, const ComplexMatrix& w_r,
                             const std::vector<ComplexMatrix>& sat_norm, double lambda);

/// 10 log10 |w_r^H H w_t|^2.
double beamformed_gain_db(const BeamformerPair& pair, const ComplexMatrix& h);
/// |w_r^H H w_t|^2 (linear).
double beamformed_gain(const ComplexMatrix& w_r, const ComplexMatrix& h, const ComplexMatrix& w_t);

/// sum_j |h_j^H w_t|^2.
double leakage(const ComplexMatrix& w_t, const std::vector<ComplexMatrix>& sat);

/// Regular grid over azimuth and polar angle from the array's vertical axis
/// (90 deg = broadside plane), both in the array frame.
struct AngularGrid {
  double az_min_deg = -90.0;
  double az_max_deg = 90.0;
  double az_step_deg = 1.0;
  double zen_min_deg = 0.0;
  double zen_max_deg = 180.0;
  double zen_step_deg = 1.0;

  std::vector<double> azimuths() const;
  std::vector<double> zeniths() const;
};

struct GainMap {
  std::vector<double> azimuths_deg;
  std::vector<double> zeniths_deg;
  std::vector<double> gain_db;  ///< row-major [zenith][azimuth]

  double at(std::size_t zen_idx, std::size_t az_idx) const {
    return gain_db[zen_idx * azimuths_deg.size() + az_idx];
  }
};

/// 10 log10(N_t |e(az, zen)^H w_t|^2) at one direction.
double gain_at(const ComplexMatrix& w_t, const ArrayGeometry& geom, double azimuth_deg, double zenith_deg);

/// Evaluates gain_at over the grid; rows are computed in parallel unless
/// `parallel` is false. Both paths give identical maps.
GainMap gain_map(const ComplexMatrix& w_t, const ArrayGeometry& geom, const AngularGrid& grid,
                 bool parallel = true);

}  // namespace fr3share
