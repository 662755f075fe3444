#include "pointspec/bounds.hpp"

#include <cmath>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>

#include "pointspec/specfun.hpp"

namespace pointspec {

namespace {

constexpr double kPi = 3.14159265358979323846;

GershgorinResult gershgorin_of(const PrincipalMatrix& pm) {
  GershgorinResult out;
  const int n = pm.entries.size();
  out.row_margins.resize(n);
  out.dominant = true;
  for (int i = 0; i < n; ++i) {
    double off = 0.0;
    for (int j = 0; j < n; ++j)
      if (j != i) off += std::abs(pm.entries(i, j));
    out.row_margins[i] = pm.entries(i, i) - off;
    if (!(pm.entries(i, i) > 0.0) || !(out.row_margins[i] > 0.0))
      out.dominant = false;
  }
  return out;
}

}  // namespace

GershgorinResult gershgorin_certificate(const ManifoldSpec& m,
                                        const CenterSet& cs, double nu,
                                        const QuadratureConfig& quad) {
  return gershgorin_of(assemble(m, cs, nu, quad));
}

BoundCertificate certified_lower_bound_numeric(const ManifoldSpec& m,
                                               const CenterSet& cs,
                                               const QuadratureConfig& quad,
                                               double tol) {
  const auto holds = [&](double nu) {
    return gershgorin_certificate(m, cs, nu, quad).dominant;
  };
  const double base =
      cs.size() > 1 ? std::max(cs.mu_max(), cs.mu_d()) : cs.mu_max();
  double lo = m.compact() ? std::max(kNuMinCompact, 0.01 * cs.mu_min())
                          : 0.01 * cs.mu_min();
  double hi = base;
  const double cap = 1024.0 * base;
  while (hi <= cap && !holds(hi)) hi *= 2.0;
  if (hi > cap)
    throw std::runtime_error(
        "certified_lower_bound_numeric: dominance fails up to the expanded "
        "bracket");
  // dominance is monotone in nu: diagonal increases, |off-diagonal| decreases
  while (hi - lo > tol * std::max(1.0, hi)) {
    const double mid = 0.5 * (lo + hi);
    (holds(mid) ? hi : lo) = mid;
  }
  BoundCertificate cert;
  cert.nu_star = hi;
  cert.e_star = -hi * hi;
  cert.method = BoundMethod::gershgorin_numeric;
  cert.row_margins =
      gershgorin_certificate(m, cs, hi * (1.0 + 1e-6), quad).row_margins;
  return cert;
}

BoundCertificate analytic_lower_bound(ManifoldClass cls, int dim,
                                      const BoundConstants& c, int n,
                                      double mu_max, double mu_d) {
  if (dim != 2 && dim != 3)
    throw std::invalid_argument("analytic_lower_bound: dim must be 2 or 3");
  if (n < 1 || !(mu_max > 0.0) || !(mu_d > 0.0))
    throw std::invalid_argument("analytic_lower_bound: bad configuration");
  c.check();

  BoundCertificate cert;
  cert.method = cls == ManifoldClass::compact
                    ? BoundMethod::lambert_compact
                    : BoundMethod::lambert_cartan_hadamard;

  if (n == 1) {
    // W(0) = 0 collapses every formula to the single-center bound
    cert.nu_star = mu_max;
    cert.e_star = -mu_max * mu_max;
    return cert;
  }

  const double mbar = mu_max / mu_d;
  const double s2c2 = std::sqrt(2.0 * c.c2);

  if (cls == ManifoldClass::compact) {
    if (!(c.volume > 0.0))
      throw std::invalid_argument("analytic_lower_bound: compact needs V");
    if (dim == 2) {
      const double q2 = (1.0 / (c.volume * mu_d * mu_d)) * (1.0 + 1.0 / s2c2) +
                        2.0 * s2c2 * c.b_eps / (4.0 * kPi);
      const double a1 = 4.0 * kPi * c.regularity_a * q2 *
                        std::exp(-mbar / s2c2) / s2c2;
      const double w = specfun::lambert_w0((n - 1.0) * a1);
      cert.nu_star = mu_d * (mbar + s2c2 * w);
    } else {
      const double beta = std::sqrt(2.0 / c.c2);
      const double q3 = (1.0 / (c.volume * mu_d * mu_d)) * (1.0 + 1.0 / s2c2) +
                        std::sqrt(2.0 * kPi * c.c2) * c.b_eps * mu_d /
                            std::pow(4.0 * kPi, 1.5);
      const double a2 = 16.0 * kPi * c.regularity_a * beta * q3 *
                        std::exp(-beta * mbar);
      const double w = specfun::lambert_w0((n - 1.0) * a2);
      cert.nu_star = mu_max + mu_d * std::sqrt(0.5 * c.c2) * w;
    }
  } else {
    if (dim == 2) {
      if (!(c.xi > 0.0))
        throw std::domain_error(
            "analytic_lower_bound: D=2 Cartan-Hadamard formula degenerates "
            "at xi = 0; use the numeric certificate");
      const double lg =
          std::log(c.xi / (mu_max * mu_max + c.xi));  // < 0
      const double arg = 2.0 * (n - 1.0) * c.c_ch / lg;
      if (arg < -std::exp(-1.0))
        throw std::domain_error(
            "analytic_lower_bound: Lambert argument left of the branch "
            "point; configuration outside the formula's reach");
      const double w = specfun::lambert_w0(arg);
      cert.nu_star = std::sqrt(2.0 * c.c2) * mu_d * std::abs(w);
    } else {
      const double mt = std::sqrt(mu_max * mu_max + c.xi);
      const double beta = std::sqrt(2.0 / c.c2);
      const double a3 = (c.c_ch / c.c_low) * std::exp(-beta * mt / mu_d);
      const double w = specfun::lambert_w0((n - 1.0) * a3);
      cert.nu_star = mt + mu_d * std::sqrt(0.5 * c.c2) * w;
    }
  }
  cert.e_star = -cert.nu_star * cert.nu_star;
  return cert;
}

BoundConstants calibrate_sphere_constants(double radius, double c2) {
  if (!(c2 > 2.0))
    throw std::invalid_argument("calibrate_sphere_constants: needs C2 > 2");
  const ManifoldSpec m = ManifoldSpec::sphere2(radius);
  const double vol = m.volume();
  double b_needed = 0.0;
  const int nt = 40, nd = 40;
  const double t_lo = 1e-4 * radius * radius, t_hi = 50.0 * radius * radius;
  for (int it = 0; it < nt; ++it) {
    const double t = t_lo * std::pow(t_hi / t_lo, it / (nt - 1.0));
    for (int id = 0; id < nd; ++id) {
      const double d = kPi * radius * (id + 1.0) / nd;
      const double k = heat_kernel_radial(m, t, d);
      if (!(k > 0.0)) continue;
      const double q =
          std::exp(std::log(k) + d * d / (2.0 * c2 * t)) / 4.0 - 1.0 / vol;
      if (q > 0.0) b_needed = std::max(b_needed, q * t);
    }
  }
  BoundConstants out;
  out.c2 = c2;
  out.regularity_a = 1.0;
  out.b_eps = 1.05 * b_needed;
  out.volume = vol;
  out.provenance = "calibrated";
  return out;
}

std::string calibration_key(const ManifoldSpec& m) { return m.describe(); }

namespace {

std::map<std::string, BoundConstants> read_calibration_file(
    const std::string& path) {
  std::map<std::string, BoundConstants> entries;
  std::ifstream in(path);
  std::string line;
  std::string key;
  BoundConstants cur;
  while (std::getline(in, line)) {
    std::istringstream ss(line);
    std::string tag;
    ss >> tag;
    if (tag == "key") {
      ss >> std::ws;
      std::getline(ss, key);
      cur = BoundConstants{};
    } else if (tag == "c2") {
      ss >> cur.c2;
    } else if (tag == "regularity_a") {
      ss >> cur.regularity_a;
    } else if (tag == "b_eps") {
      ss >> cur.b_eps;
    } else if (tag == "volume") {
      ss >> cur.volume;
    } else if (tag == "provenance") {
      ss >> cur.provenance;
    } else if (tag == "end" && !key.empty()) {
      entries[key] = cur;
      key.clear();
    }
  }
  return entries;
}

}  // namespace

bool load_calibration(const std::string& path, const std::string& key,
                      BoundConstants& out) {
  const auto entries = read_calibration_file(path);
  const auto it = entries.find(key);
  if (it == entries.end()) return false;
  out = it->second;
  return true;
}

void store_calibration(const std::string& path, const std::string& key,
                       const BoundConstants& c) {
  auto entries = read_calibration_file(path);
  entries[key] = c;
  std::ofstream outf(path, std::ios::trunc);
  outf << "# calibrated heat-kernel bound constants\n";
  outf.precision(17);
  for (const auto& [k, v] : entries) {
    outf << "key " << k << "\n";
    outf << "c2 " << v.c2 << "\n";
    outf << "regularity_a " << v.regularity_a << "\n";
    outf << "b_eps " << v.b_eps << "\n";
    outf << "volume " << v.volume << "\n";
    outf << "provenance " << v.provenance << "\n";
    outf << "end\n";
  }
}

}  // namespace pointspec
