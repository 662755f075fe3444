#include "pointspec/manifold_properties.hpp"

#include <cmath>
#include <vector>

#include "pointspec/parallel.hpp"
#include "pointspec/specfun.hpp"

namespace pointspec {

namespace {

constexpr double kPi = 3.14159265358979323846;

Point generic_point(const ManifoldSpec& m) {
  switch (m.geometry()) {
    case Geometry::FlatEuclidean:
      return m.dim() == 2 ? Point::xy(0.2, -0.1) : Point::xyz(0.2, -0.1, 0.3);
    case Geometry::Sphere2:
      return Point::sphere(1.1, 0.7);
    case Geometry::Hyperbolic:
      return m.dim() == 2 ? Point::half_plane(0.3, 1.2)
                          : Point::half_space(0.3, -0.2, 1.2);
  }
  return Point::xy(0.0, 0.0);
}

std::vector<std::pair<double, double>> gauss_legendre(int n, double a,
                                                      double b) {
  // Newton iteration on Legendre roots; n modest (<= 32 per panel)
  std::vector<std::pair<double, double>> nw(n);
  for (int i = 0; i < n; ++i) {
    double x = std::cos(kPi * (i + 0.75) / (n + 0.5));
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      for (int l = 2; l <= n; ++l) {
        const double p2 = ((2.0 * l - 1.0) * x * p1 - (l - 1.0) * p0) / l;
        p0 = p1;
        p1 = p2;
      }
      const double dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    double p0 = 1.0, p1 = x;
    for (int l = 2; l <= n; ++l) {
      const double p2 = ((2.0 * l - 1.0) * x * p1 - (l - 1.0) * p0) / l;
      p0 = p1;
      p1 = p2;
    }
    const double dp = n * (x * p1 - p0) / (x * x - 1.0);
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    nw[i] = {0.5 * (a + b) + 0.5 * (b - a) * x, 0.5 * (b - a) * w};
  }
  return nw;
}

std::vector<std::pair<double, double>> panel_gauss(double a, double b,
                                                   int panels, int per_panel) {
  std::vector<std::pair<double, double>> nw;
  nw.reserve(static_cast<std::size_t>(panels) * per_panel);
  for (int p = 0; p < panels; ++p) {
    const double pa = a + (b - a) * p / panels;
    const double pb = a + (b - a) * (p + 1) / panels;
    auto sub = gauss_legendre(per_panel, pa, pb);
    nw.insert(nw.end(), sub.begin(), sub.end());
  }
  return nw;
}

double radial_extent(const ManifoldSpec& m, double t, double dxy) {
  if (m.compact()) return m.max_distance();
  return dxy + 14.0 * std::sqrt(t) + 3.0;
}

}  // namespace

double semigroup_residual(const ManifoldSpec& m, double t1, double t2,
                          double dxy) {
  if (m.compact()) {
    // verify the Legendre coefficients multiply exactly:
    // e^{-l(l+1)t1} e^{-l(l+1)t2} = e^{-l(l+1)(t1+t2)}
    const double r2 = m.scale() * m.scale();
    double worst = 0.0;
    for (int l = 0; l <= 128; ++l) {
      const double s = l * (l + 1.0) / r2;
      const double a = std::exp(-s * t1) * std::exp(-s * t2);
      const double b = std::exp(-s * (t1 + t2));
      if (b > 0.0) worst = std::max(worst, std::abs(a / b - 1.0));
    }
    return worst;
  }
  const GeodesicChart chart(m, generic_point(m));
  const Point y = m.dim() == 2 ? chart.at(dxy, 0.0) : chart.at(dxy, 0.0, 0.0);
  const double exact = heat_kernel_radial(m, t1 + t2, dxy);
  const double rmax = radial_extent(m, std::max(t1, t2), dxy);
  const int radial_panels = static_cast<int>(rmax / (0.4 * std::sqrt(std::min(t1, t2)))) + 8;
  const auto rad = panel_gauss(0.0, rmax, std::min(radial_panels, 120), 10);

  double conv = 0.0;
  if (m.dim() == 2) {
    const int nphi = 512;
    std::vector<double> slice(rad.size());
    parallel_for(rad.size(), [&](std::size_t ir) {
      const double r = rad[ir].first;
      const double k1 = heat_kernel_radial(m, t1, r);
      const double measure = chart.sphere_area(r) / (2.0 * kPi);
      double s = 0.0;
      for (int ip = 0; ip < nphi; ++ip) {
        const double phi = 2.0 * kPi * ip / nphi;
        const double dzy = geodesic_distance(m, chart.at(r, phi), y);
        s += k1 * heat_kernel_radial(m, t2, dzy);
      }
      slice[ir] = rad[ir].second * measure * s * (2.0 * kPi / nphi);
    });
    for (double v : slice) conv += v;
  } else {
    // azimuthal symmetry about the x -> y axis
    const auto ang = gauss_legendre(96, -1.0, 1.0);  // cos(alpha)
    std::vector<double> slice(rad.size());
    parallel_for(rad.size(), [&](std::size_t ir) {
      const double r = rad[ir].first;
      const double k1 = heat_kernel_radial(m, t1, r);
      const double measure = chart.sphere_area(r) / (4.0 * kPi);
      double s = 0.0;
      for (const auto& [ca, wa] : ang) {
        const double alpha = std::acos(ca);
        const double dzy = geodesic_distance(m, chart.at(r, alpha, 0.0), y);
        s += wa * heat_kernel_radial(m, t2, dzy);
      }
      slice[ir] = rad[ir].second * measure * k1 * s * (2.0 * kPi);
    });
    for (double v : slice) conv += v;
  }
  return std::abs(conv / exact - 1.0);
}

double stochastic_completeness_residual(const ManifoldSpec& m, double t) {
  const GeodesicChart chart(m, generic_point(m));
  const double rmax = radial_extent(m, t, 2.0 * m.spectral_bottom() * t);
  const auto f = [&](double r) {
    return heat_kernel_radial(m, t, r) * chart.sphere_area(r);
  };
  QuadResult q = integrate_adaptive(f, 0.0, rmax, 1e-9, 1e-300, 300);
  return std::abs(q.value - 1.0);
}

double short_time_diag_residual(const ManifoldSpec& m, double t) {
  const double v =
      std::pow(4.0 * kPi * t, 0.5 * m.dim()) * heat_kernel_diag(m, t);
  return std::abs(v - 1.0);
}

double scaling_residual(const ManifoldSpec& m, double alpha, double t,
                        double d) {
  // K_t(x,y;g) = alpha^D K_{alpha^2 t}(x,y; alpha^2 g)
  const ManifoldSpec ms = scaled_manifold(m, 1.0 / alpha);
  const double lhs = heat_kernel_radial(m, t, d);
  const double rhs = std::pow(alpha, m.dim()) *
                     heat_kernel_radial(ms, alpha * alpha * t, alpha * d);
  return std::abs(rhs / lhs - 1.0);
}

double symmetry_residual(const ManifoldSpec& m) {
  const Point x = generic_point(m);
  GeodesicChart chart(m, x);
  double worst = 0.0;
  for (double r : {0.3, 0.9, 1.7}) {
    const Point y = m.dim() == 2 ? chart.at(r, 1.1) : chart.at(r, 1.1, 2.3);
    for (double t : {0.05, 0.4, 2.0}) {
      const double a = heat_kernel(m, t, x, y);
      const double b = heat_kernel(m, t, y, x);
      if (a > 0.0) worst = std::max(worst, std::abs(a / b - 1.0));
    }
  }
  return worst;
}

double heat_equation_residual(const ManifoldSpec& m, double t, double d) {
  if (m.geometry() == Geometry::FlatEuclidean) {
    const double ht = 1e-4 * t;
    const double dt = (heat_kernel_radial(m, t + ht, d) -
                       heat_kernel_radial(m, t - ht, d)) /
                      (2.0 * ht);
    const double hr = 1e-3 * std::sqrt(t);
    const double k0 = heat_kernel_radial(m, t, d);
    const double kp = heat_kernel_radial(m, t, d + hr);
    const double km = heat_kernel_radial(m, t, d - hr);
    const double d2 = (kp - 2.0 * k0 + km) / (hr * hr);
    const double d1 = (kp - km) / (2.0 * hr);
    const double lap = d2 + (m.dim() - 1.0) / d * d1;
    return std::abs(dt / lap - 1.0);
  }
  if (m.geometry() == Geometry::Sphere2) {
    const double R = m.scale();
    const double tau = t / (R * R);
    const double theta = d / R;
    const double ht = 1e-4 * t;
    const double dt = (heat_kernel_radial(m, t + ht, d) -
                       heat_kernel_radial(m, t - ht, d)) /
                      (2.0 * ht);
    // Laplace-Beltrami acts as -l(l+1)/R^2 on each Legendre mode
    const int lmax = static_cast<int>(std::ceil(std::sqrt(46.0 / tau))) + 10;
    double lap = 0.0;
    const double c = std::cos(theta);
    for (int l = 1; l <= lmax; ++l) {
      const double s = l * (l + 1.0);
      lap += -(2.0 * l + 1.0) * (s / (R * R)) * std::exp(-s * tau) *
             specfun::legendre_p(l, c);
    }
    lap /= 4.0 * kPi * R * R;
    return std::abs(dt / lap - 1.0);
  }
  return -1.0;
}

bool positivity_check(const ManifoldSpec& m) {
  for (double t : {1e-3, 0.1, 1.0, 10.0}) {
    const double dcap = m.compact()
                            ? std::min(0.95 * m.max_distance(),
                                       std::sqrt(900.0 * t))
                            : std::sqrt(900.0 * t);
    for (double frac : {0.0, 0.2, 0.5, 0.9}) {
      if (!(heat_kernel_radial(m, t, frac * dcap) > 0.0)) return false;
    }
  }
  return true;
}

std::vector<PropertyResult> run_property_suite(const ManifoldSpec& m) {
  std::vector<PropertyResult> out;
  const auto add = [&out](const std::string& name, double residual,
                          double tol) {
    out.push_back({name, residual, tol, residual >= 0.0 && residual <= tol});
  };

  add("symmetry", symmetry_residual(m), 1e-13);
  out.push_back({"positivity", positivity_check(m) ? 0.0 : 1.0, 0.5,
                 positivity_check(m)});
  add("semigroup", semigroup_residual(m, 0.3, 0.5, 0.8),
      m.compact() ? 1e-12 : 1e-5);
  add("stochastic_completeness",
      stochastic_completeness_residual(m, 0.7), 1e-6);
  add("short_time_diagonal", short_time_diag_residual(m, 1e-4), 1e-3);
  {
    double worst = 0.0;
    for (double alpha : {0.5, 2.0})
      for (double t : {0.2, 1.0})
        worst = std::max(worst, scaling_residual(m, alpha, t, 0.7));
    add("scaling", worst, 1e-10);
  }
  if (m.geometry() != Geometry::Hyperbolic)
    add("heat_equation", heat_equation_residual(m, 0.6, 0.9), 1e-4);
  return out;
}

}  // namespace pointspec
