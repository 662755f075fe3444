#ifndef POINTSPEC_WAVEFIELD_HPP
#define POINTSPEC_WAVEFIELD_HPP

// Bound-state wave functions psi_k(x) = norm^{-1/2} sum_i A_i R_0(a_i, x),
// their L2 normalization on geometry-adapted grids, pointwise bound
// envelopes, decay-rate fits and the <H0> cutoff diagnostic.

#include <string>
#include <vector>

#include "pointspec/bound_constants.hpp"
#include "pointspec/spectral.hpp"

namespace pointspec {

struct WaveSample {
  Point point;
  double d_min = 0.0;  // distance to the nearest center
  double psi = 0.0;
};

struct WaveField {
  BoundState state;
  std::vector<WaveSample> samples;
  std::string grid_descriptor;
};

// psi at a point; throws if x coincides with a center (psi diverges there)
double evaluate_psi(const ManifoldSpec& m, const CenterSet& cs,
                    const BoundState& bs, const Point& x,
                    const QuadratureConfig& quad);

// Panelized log-Chebyshev interpolation of d -> R_0(d | -nu^2); makes grid
// sweeps of psi cheap on the curved geometries.
class RadialResolventTable {
 public:
  RadialResolventTable(const ManifoldSpec& m, double nu, double d_max,
                       const QuadratureConfig& quad);
  double operator()(double d) const;
  double d_max() const { return d_hi_; }

 private:
  double s_lo_, s_hi_, panel_width_, d_lo_, d_hi_;
  int n_panels_;
  std::vector<std::vector<double>> values_;  // [panel][node]
};

// rays from the configuration centroid; grid for CSV output and the
// pointwise checks
WaveField sample_rays(const ManifoldSpec& m, const CenterSet& cs,
                      const BoundState& bs, int n_dirs, int n_radii,
                      double r_max, const QuadratureConfig& quad);

struct NormResult {
  double value = 0.0;   // at the working resolution
  double coarse = 0.0;  // at 2/3 resolution, for the Richardson check
  bool under_resolved = false;
};

// || psi ||_2 over the manifold: smooth excision caps around the centers
// plus a far-field polar grid about the centroid
NormResult l2_norm(const ManifoldSpec& m, const CenterSet& cs,
                   const BoundState& bs, const QuadratureConfig& quad,
                   int resolution = 1);

// least-squares decay rate of -ln(w(d)|psi|) along a ray with d in
// [2/nu, 8/nu]; w = d on flat R^3, sinh(kappa d)/kappa on H^3, 1 elsewhere
double decay_rate_fit(const ManifoldSpec& m, const CenterSet& cs,
                      const BoundState& bs, const QuadratureConfig& quad);

struct PointwiseBoundReport {
  bool pass = false;
  double worst_margin = 0.0;  // min over samples of (env - |psi|)/env
  int checked = 0;
};

PointwiseBoundReport pointwise_bound_check(const ManifoldSpec& m,
                                           const CenterSet& cs,
                                           const WaveField& field,
                                           const BoundConstants& constants);

// <psi|H0|psi> with the t1 integral cut below epsilon; diverges like
// ln(1/eps) in 2D and eps^{-1/2} in 3D as eps -> 0
double h0_expectation_cutoff(const ManifoldSpec& m, const CenterSet& cs,
                             const BoundState& bs, double epsilon_cutoff,
                             const QuadratureConfig& quad);

}  // namespace pointspec

#endif
