#ifndef POINTSPEC_MANIFOLD_HPP
#define POINTSPEC_MANIFOLD_HPP

// The five supported geometries (flat R^2/R^3, the two-sphere, hyperbolic
// H^2/H^3) with geodesic distance, heat kernel, free resolvent and the
// kernel bound envelopes. Natural units hbar = 2m = 1 throughout, so the
// flat kernel is (4 pi t)^{-D/2} e^{-d^2/4t} and the heat equation is
// dK/dt = Laplace_g K.

#include <array>
#include <functional>
#include <stdexcept>
#include <string>

#include "pointspec/bound_constants.hpp"
#include "pointspec/quadrature.hpp"

namespace pointspec {

enum class Geometry { FlatEuclidean, Sphere2, Hyperbolic };

class Point {
 public:
  Point() = default;

  static Point xy(double x, double y) { return Point(2, {x, y, 0.0}); }
  static Point xyz(double x, double y, double z) { return Point(3, {x, y, z}); }
  // polar angle theta in [0, pi], azimuth phi in [0, 2 pi)
  static Point sphere(double theta, double phi) {
    return Point(2, {theta, phi, 0.0});
  }
  // upper half-plane (x, y), y > 0
  static Point half_plane(double x, double y) { return Point(2, {x, y, 0.0}); }
  // upper half-space (x1, x2, y), y > 0
  static Point half_space(double x1, double x2, double y) {
    return Point(3, {x1, x2, y});
  }

  int size() const { return n_; }
  double operator[](int i) const { return c_[i]; }
  double& operator[](int i) { return c_[i]; }

 private:
  Point(int n, std::array<double, 3> c) : n_(n), c_(c) {}
  int n_ = 0;
  std::array<double, 3> c_{};
};

class ManifoldSpec {
 public:
  static ManifoldSpec flat(int dim);
  static ManifoldSpec sphere2(double radius);
  static ManifoldSpec hyperbolic(int dim, double curvature_scale);

  Geometry geometry() const { return geo_; }
  int dim() const { return dim_; }
  // R for Sphere2, kappa for Hyperbolic
  double scale() const { return scale_; }

  bool compact() const { return geo_ == Geometry::Sphere2; }
  double volume() const;             // 4 pi R^2; throws for noncompact
  double spectral_bottom() const;    // 0, 0, (D-1)^2 kappa^2 / 4
  double equilibrium_density() const;  // 1/V for compact, else 0
  // gap of the first nonzero Laplacian eigenvalue above the bottom
  double spectral_gap() const;
  // pi R on the sphere, +inf otherwise
  double max_distance() const;

  void validate(const Point& p) const;  // throws std::invalid_argument
  std::string describe() const;

  bool operator==(const ManifoldSpec& o) const {
    return geo_ == o.geo_ && dim_ == o.dim_ && scale_ == o.scale_;
  }

 private:
  ManifoldSpec(Geometry g, int dim, double scale)
      : geo_(g), dim_(dim), scale_(scale) {}
  Geometry geo_;
  int dim_;
  double scale_;
};

double geodesic_distance(const ManifoldSpec& m, const Point& x,
                         const Point& y);

// Radial kernels; all five geometries are homogeneous so K_t(x, y) depends
// on (t, d(x,y)) only.
double heat_kernel_diag(const ManifoldSpec& m, double t);
double heat_kernel_radial(const ManifoldSpec& m, double t, double d);
double heat_kernel(const ManifoldSpec& m, double t, const Point& x,
                   const Point& y);
// K_t(d) minus the large-time equilibrium value (1/V on compact manifolds,
// 0 elsewhere), evaluated without cancellation where it matters.
double heat_kernel_radial_fluctuation(const ManifoldSpec& m, double t,
                                      double d);
// K_t(x,x) minus the flat-space diagonal (4 pi t)^{-D/2}; the t -> 0
// cancellation is handled analytically (used by the renormalization-group
// counterterm integrals).
double heat_kernel_diag_minus_flat(const ManifoldSpec& m, double t);

// R_0(x, y | E) = int_0^inf e^{Et} K_t(x,y) dt for E < 0, x != y.
double free_resolvent(const ManifoldSpec& m, const Point& x, const Point& y,
                      double E, const QuadratureConfig& quad);
// same with d = d(x,y) and nu = sqrt(-E)
double free_resolvent_radial(const ManifoldSpec& m, double d, double nu,
                             const QuadratureConfig& quad);

enum class EnvelopeKind { upper_offdiag, lower_diag };

// Heat-kernel bound envelopes: compact upper 4A[1/V + B t^{-D/2}]
// e^{-d^2/(2 C2 t)}, Cartan-Hadamard upper C (4 pi t)^{-D/2}
// e^{-d^2/(2 C2 t)}; lower diagonals (4 pi t)^{-D/2} (compact, Ric >= 0)
// and c (4 pi t)^{-D/2} e^{-(sigma1 + delta) t} (Cartan-Hadamard).
double kernel_bound_envelope(const ManifoldSpec& m, EnvelopeKind kind,
                             double t, double d, const BoundConstants& c);

// Weight w(t) of a time integral int K_t(d) w(t) dt together with its exact
// tail integral and slowest decay rate; lets compact manifolds integrate the
// equilibrium part of the kernel analytically.
struct TimeWeight {
  std::function<double(double)> w;
  std::function<double(double)> tail;  // T -> int_T^inf w(t) dt
  double decay_rate;
};

TimeWeight weight_exp(double nu);                   // e^{-nu^2 t}
TimeWeight weight_exp_diff(double mu, double nu);   // e^{-mu^2 t}-e^{-nu^2 t}
TimeWeight weight_t_exp(double nu);                 // t e^{-nu^2 t}
TimeWeight weight_two_nu_t_exp(double nu);          // 2 nu t e^{-nu^2 t}

// int_lo^inf K_t(d) w(t) dt; d < 0 selects the diagonal kernel.
double kernel_time_integral(const ManifoldSpec& m, double d,
                            const TimeWeight& weight,
                            const QuadratureConfig& quad, double lo = 0.0);

// Metric scaling g -> gamma^{-2} g: distances shrink by gamma, and
// K_t(x,y;g) = gamma^{-D} K_{t/gamma^2}(x,y;gamma^{-2}g).
ManifoldSpec scaled_manifold(const ManifoldSpec& m, double gamma);
Point scaled_point(const ManifoldSpec& m, const Point& p, double gamma);

// Geodesic polar chart about an origin: maps (r, direction) back to a Point.
// Directions: azimuth phi for D = 2; (alpha, beta) polar/azimuth angles in
// the tangent space for D = 3.
class GeodesicChart {
 public:
  GeodesicChart(const ManifoldSpec& m, const Point& origin);
  const ManifoldSpec& manifold() const { return m_; }
  Point at(double r, double a, double b = 0.0) const;
  // area of the geodesic sphere of radius r
  double sphere_area(double r) const;

 private:
  ManifoldSpec m_;
  Point origin_;
  // embedded origin and orthonormal frame (unit sphere / unit hyperboloid)
  std::array<double, 4> o_{};
  std::array<std::array<double, 4>, 3> frame_{};
};

}  // namespace pointspec

#endif
