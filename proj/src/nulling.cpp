#include "fr3share/nulling.hpp"

#include <algorithm>
#include <cmath>

#include "fr3share/errors.hpp"

namespace fr3share {

namespace {

constexpr double kNormTol = 1e-9;
constexpr double kDegeneracyTol = 1e-10;

void check_inputs(const ComplexMatrix& h, const std::vector<ComplexMatrix>& sats) {
  if (h.rows() == 0 || h.cols() == 0) throw Error(ErrorCode::InvalidDimension, "empty terrestrial channel");
  if (std::abs(h.frobenius_norm() - 1.0) > kNormTol)
    throw Error(ErrorCode::NotNormalized, "terrestrial channel must have unit Frobenius norm");
  for (const auto& s : sats) {
    if (s.rows() != h.cols() || s.cols() != 1)
      throw Error(ErrorCode::InvalidDimension, "satellite channel must be N_t x 1");
    if (std::abs(s.frobenius_norm() - 1.0) > kNormTol)
      throw Error(ErrorCode::NotNormalized, "satellite channel must have unit norm");
  }
}

ComplexMatrix dominant_left(const ComplexMatrix& h) { return svd(h).u.col(0); }

ComplexMatrix unit_with_phase(const ComplexMatrix& v) {
  ComplexMatrix w = normalized(v);
  fix_column_phase(w, 0);
  return w;
}

// Orthonormal basis of span(vs); near-dependent vectors are dropped.
std::vector<ComplexMatrix> orthonormal_basis(const std::vector<ComplexMatrix>& vs) {
  std::vector<ComplexMatrix> basis;
  for (const auto& v : vs) {
    const double n0 = v.frobenius_norm();
    if (n0 == 0.0) continue;
    ComplexMatrix x = v;
    for (int pass = 0; pass < 2; ++pass) {
      for (const auto& b : basis) {
        const cplx c = inner(b, x);
        for (std::size_t i = 0; i < x.size(); ++i) x[i] -= c * b[i];
      }
    }
    const double n = x.frobenius_norm();
    if (n <= 1e-10 * n0) continue;
    x *= 1.0 / n;
    basis.push_back(std::move(x));
  }
  return basis;
}

}  // namespace

void NullingConfig::validate() const {
  if (!(lambda >= 0.0) || !std::isfinite(lambda))
    throw Error(ErrorCode::InvalidArgument, "lambda must be finite and non-negative");
}

ComplexMatrix nulling_matrix(const ComplexMatrix& h_norm, const ComplexMatrix& w_r,
                             const std::vector<ComplexMatrix>& sat_norm, double lambda) {
  const ComplexMatrix a = h_norm.adjoint() * w_r;
  ComplexMatrix m = outer(a, a);
  for (const auto& s : sat_norm) m -= cplx{lambda, 0.0} * outer(s, s);
  return m;
}

BeamformerPair solve_nulling_reference(const ComplexMatrix& h_norm,
                                       const std::vector<ComplexMatrix>& sat_norm,
                                       const NullingConfig& cfg) {
  cfg.validate();
  check_inputs(h_norm, sat_norm);
  BeamformerPair out;
  out.lambda_used = cfg.lambda;
  out.w_r = dominant_left(h_norm);
  const ComplexMatrix m = nulling_matrix(h_norm, out.w_r, sat_norm, cfg.lambda);
  const EigResult eig = eig_hermitian(m);
  out.w_t = unit_with_phase(eig.q.col(0));
  if (eig.values.size() > 1)
    out.degenerate = std::abs(eig.values[0] - eig.values[1]) < kDegeneracyTol * m.frobenius_norm();
  return out;
}

BeamformerPair solve_nulling(const ComplexMatrix& h_norm, const std::vector<ComplexMatrix>& sat_norm,
                             const NullingConfig& cfg) {
  cfg.validate();
  check_inputs(h_norm, sat_norm);
  BeamformerPair out;
  out.lambda_used = cfg.lambda;
  out.w_r = dominant_left(h_norm);
  const ComplexMatrix a = h_norm.adjoint() * out.w_r;
  const std::size_t n = a.size();

  if (cfg.lambda == 0.0 || sat_norm.empty()) {
    out.w_t = unit_with_phase(a);
    return out;
  }

  std::vector<ComplexMatrix> span;
  span.reserve(sat_norm.size() + 1);
  span.push_back(a);
  span.insert(span.end(), sat_norm.begin(), sat_norm.end());
  const std::vector<ComplexMatrix> basis = orthonormal_basis(span);
  const std::size_t r = basis.size();

  // Coordinates of a and each h_j in the basis.
  auto coords = [&](const ComplexMatrix& v) {
    ComplexMatrix c(r, 1);
    for (std::size_t i = 0; i < r; ++i) c[i] = inner(basis[i], v);
    return c;
  };
  const ComplexMatrix ca = coords(a);
  ComplexMatrix t = outer(ca, ca);
  for (const auto& s : sat_norm) {
    const ComplexMatrix cs = coords(s);
    t -= cplx{cfg.lambda, 0.0} * outer(cs, cs);
  }
  const EigResult eig = eig_hermitian(t);
  const double scale = t.frobenius_norm();

  // Outside the span the matrix is zero. If no eigenvalue inside is positive
  // the maximizer lives in the complement; defer to the full solver.
  if (r < n && eig.values[0] <= kDegeneracyTol * scale) return solve_nulling_reference(h_norm, sat_norm, cfg);

  ComplexMatrix w(n, 1);
  for (std::size_t i = 0; i < r; ++i) {
    const cplx yi = eig.q(i, 0);
    for (std::size_t k = 0; k < n; ++k) w[k] += yi * basis[i][k];
  }
  out.w_t = unit_with_phase(w);

  double second = r < n ? 0.0 : -INFINITY;
  if (r > 1) second = std::max(second, eig.values[1]);
  if (std::isfinite(second)) out.degenerate = std::abs(eig.values[0] - second) < kDegeneracyTol * scale;
  return out;
}

double beamformed_gain(const ComplexMatrix& w_r, const ComplexMatrix& h, const ComplexMatrix& w_t) {
  if (w_r.size() != h.rows() || w_t.size() != h.cols())
    throw Error(ErrorCode::InvalidDimension, "beamformer dimensions do not match the channel");
  cplx acc{0.0, 0.0};
  for (std::size_t i = 0; i < h.rows(); ++i) {
    cplx row{0.0, 0.0};
    for (std::size_t j = 0; j < h.cols(); ++j) row += h(i, j) * w_t[j];
    acc += std::conj(w_r[i]) * row;
  }
  return std::norm(acc);
}

double beamformed_gain_db(const BeamformerPair& pair, const ComplexMatrix& h) {
  return 10.0 * std::log10(beamformed_gain(pair.w_r, h, pair.w_t));
}

double leakage(const ComplexMatrix& w_t, const std::vector<ComplexMatrix>& sat) {
  double acc = 0.0;
  for (const auto& h : sat) acc += std::norm(inner(h, w_t));
  return acc;
}

namespace {

std::vector<double> axis(double lo, double hi, double step) {
  if (!(step > 0.0) || !(hi >= lo) || !std::isfinite(lo) || !std::isfinite(hi))
    throw Error(ErrorCode::InvalidArgument, "angular grid needs lo <= hi and a positive step");
  std::vector<double> out;
  const auto count = static_cast<std::size_t>(std::floor((hi - lo) / step + 1e-9)) + 1;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) out.push_back(lo + static_cast<double>(i) * step);
  return out;
}

}  // namespace

std::vector<double> AngularGrid::azimuths() const { return axis(az_min_deg, az_max_deg, az_step_deg); }
std::vector<double> AngularGrid::zeniths() const { return axis(zen_min_deg, zen_max_deg, zen_step_deg); }

double gain_at(const ComplexMatrix& w_t, const ArrayGeometry& geom, double azimuth_deg, double zenith_deg) {
  const ComplexMatrix e = array_response(geom, azimuth_deg, zenith_deg);
  if (e.size() != w_t.size()) throw Error(ErrorCode::InvalidDimension, "beamformer does not match the array");
  const double g = static_cast<double>(e.size()) * std::norm(inner(e, w_t));
  return 10.0 * std::log10(std::max(g, 1e-30));
}

GainMap gain_map(const ComplexMatrix& w_t, const ArrayGeometry& geom, const AngularGrid& grid, bool parallel) {
  if (geom.num_elements() != w_t.size())
    throw Error(ErrorCode::InvalidDimension, "beamformer does not match the array");
  GainMap map;
  map.azimuths_deg = grid.azimuths();
  map.zeniths_deg = grid.zeniths();
  const std::size_t n_az = map.azimuths_deg.size();
  map.gain_db.assign(n_az * map.zeniths_deg.size(), 0.0);
  const auto rows = static_cast<long>(map.zeniths_deg.size());

#pragma omp parallel for schedule(static) if (parallel)
  for (long zi = 0; zi < rows; ++zi) {
    const auto z = static_cast<std::size_t>(zi);
    for (std::size_t ai = 0; ai < n_az; ++ai)
      map.gain_db[z * n_az + ai] = gain_at(w_t, geom, map.azimuths_deg[ai], map.zeniths_deg[z]);
  }
  return map;
}

}  // namespace fr3share
