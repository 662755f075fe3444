#include "pointspec/tasks.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>

#include "json.hpp"
#include "pointspec/bounds.hpp"
#include "pointspec/manifold_properties.hpp"
#include "pointspec/parallel.hpp"
#include "pointspec/perturb.hpp"
#include "pointspec/rgflow.hpp"
#include "pointspec/spectral.hpp"
#include "pointspec/textio.hpp"
#include "pointspec/wavefield.hpp"

namespace pointspec {

namespace {

using nlohmann::json;
namespace fs = std::filesystem;

// A table with a fixed column order, written as CSV or a JSON array of rows.
struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;

  void add_row(std::vector<std::string> r) { rows.push_back(std::move(r)); }

  void write(const fs::path& base, const std::string& format) const {
    if (format == "json") {
      json out = json::array();
      for (const auto& r : rows) {
        json row;
        for (std::size_t c = 0; c < columns.size() && c < r.size(); ++c)
          row[columns[c]] = r[c];
        out.push_back(row);
      }
      std::ofstream f(base.string() + ".json", std::ios::binary);
      f << out.dump(2) << "\n";
      return;
    }
    std::ofstream f(base.string() + ".csv", std::ios::binary);
    for (std::size_t c = 0; c < columns.size(); ++c)
      f << (c ? "," : "") << columns[c];
    f << "\n";
    for (const auto& r : rows) {
      for (std::size_t c = 0; c < r.size(); ++c) f << (c ? "," : "") << r[c];
      f << "\n";
    }
  }
};

void write_json(const fs::path& path, const json& j) {
  std::ofstream f(path, std::ios::binary);
  f << j.dump(2) << "\n";
}

struct TaskContext {
  const Scenario& sc;
  const RunOptions& opts;
  const CenterSet& centers;
  const SpectrumResult& spectrum;  // solved once, shared by the tasks
  fs::path out;
};

// solved states are reported with energies in the scenario's units
double energy_out(const Scenario& sc, double e_natural) {
  return e_natural * (sc.units.natural ? 1.0 : sc.units.energy_scale());
}

void run_spectrum_task(const TaskContext& ctx, const TaskSpec& task) {
  Table spec;
  spec.columns = {"branch", "nu", "energy"};
  const int n = ctx.centers.size();
  for (int i = 0; i < n; ++i) spec.columns.push_back("a" + format_int(i));
  for (const BoundState& st : ctx.spectrum.states) {
    std::vector<std::string> row = {format_int(st.branch),
                                    format_double(st.nu),
                                    format_double(energy_out(ctx.sc, st.energy))};
    for (double a : st.amplitudes) row.push_back(format_double(a));
    spec.add_row(std::move(row));
  }
  spec.write(ctx.out / "spectrum", ctx.opts.format);

  const int scan_points = task.integer("scan_points", 33);
  if (scan_points > 1) {
    const double lo = task.number("scan_lo", 0.2 * ctx.centers.mu_min());
    double hi_default = 2.0 * ctx.centers.mu_max();
    if (n > 1) hi_default = std::max(hi_default, 2.0 * ctx.centers.mu_d());
    const double hi = task.number("scan_hi", hi_default);
    std::vector<double> nus(static_cast<std::size_t>(scan_points));
    for (int i = 0; i < scan_points; ++i)
      nus[static_cast<std::size_t>(i)] =
          lo + (hi - lo) * i / (scan_points - 1.0);
    const auto scan =
        eigen_branch_scan(ctx.sc.manifold, ctx.centers, nus, ctx.sc.quad);
    Table branches;
    branches.columns = {"nu"};
    for (int k = 0; k < n; ++k)
      branches.columns.push_back("omega" + format_int(k));
    for (std::size_t i = 0; i < nus.size(); ++i) {
      std::vector<std::string> row = {format_double(nus[i])};
      for (double w : scan[i]) row.push_back(format_double(w));
      branches.add_row(std::move(row));
    }
    branches.write(ctx.out / "eigenbranches", ctx.opts.format);
  }
}

void run_wavefield_task(const TaskContext& ctx, const TaskSpec& task) {
  const int state_idx = task.integer("state", 0);
  if (state_idx < 0 ||
      state_idx >= static_cast<int>(ctx.spectrum.states.size()))
    throw std::runtime_error("wavefield: state index out of range");
  const BoundState& st =
      ctx.spectrum.states[static_cast<std::size_t>(state_idx)];
  const int dirs = task.integer("dirs", 8);
  const int radii = task.integer("radii", 48);
  const double r_default =
      ctx.centers.size() > 1
          ? 10.0 / st.nu + ctx.centers.min_pair_distance()
          : 10.0 / st.nu;
  const double r_max = task.number("r_max", r_default);
  const WaveField field = sample_rays(ctx.sc.manifold, ctx.centers, st, dirs,
                                      radii, r_max, ctx.sc.quad);
  Table tab;
  tab.columns = {};
  const int dim = ctx.sc.manifold.dim();
  for (int c = 0; c < dim; ++c) tab.columns.push_back("x" + format_int(c));
  tab.columns.push_back("d_min");
  tab.columns.push_back("psi");
  for (const WaveSample& s : field.samples) {
    std::vector<std::string> row;
    for (int c = 0; c < dim; ++c) row.push_back(format_double(s.point[c]));
    row.push_back(format_double(s.d_min));
    row.push_back(format_double(s.psi));
    tab.add_row(std::move(row));
  }
  tab.write(ctx.out / "wavefield", ctx.opts.format);
}

json certificate_json(const Scenario& sc, const BoundCertificate& cert) {
  json j;
  j["nu_star"] = cert.nu_star;
  j["e_star"] = energy_out(sc, cert.e_star);
  j["method"] = cert.method == BoundMethod::gershgorin_numeric
                    ? "gershgorin_numeric"
                    : (cert.method == BoundMethod::lambert_compact
                           ? "lambert_compact"
                           : "lambert_cartan_hadamard");
  j["row_margins"] = cert.row_margins;
  return j;
}

void run_bounds_task(const TaskContext& ctx, const TaskSpec& task) {
  json out;
  const ManifoldSpec& m = ctx.sc.manifold;
  const BoundCertificate numeric = certified_lower_bound_numeric(
      m, ctx.centers, ctx.sc.quad, task.number("tol", 1e-10));
  out["gershgorin"] = certificate_json(ctx.sc, numeric);

  BoundConstants constants;
  bool have_analytic = true;
  std::string note;
  if (m.geometry() == Geometry::FlatEuclidean) {
    constants.c2 = 2.0;
    constants.flat_exact = true;
  } else if (m.geometry() == Geometry::Hyperbolic) {
    constants.c2 = 2.0;
    constants.flat_exact = true;
    constants.xi = m.spectral_bottom();
  } else {
    const fs::path cache = ctx.out / "calibration.txt";
    if (!load_calibration(cache.string(), calibration_key(m), constants)) {
      constants = calibrate_sphere_constants(m.scale());
      store_calibration(cache.string(), calibration_key(m), constants);
    }
  }
  try {
    const ManifoldClass cls = m.compact() ? ManifoldClass::compact
                                          : ManifoldClass::cartan_hadamard;
    const double mu_d =
        ctx.centers.size() > 1 ? ctx.centers.mu_d() : ctx.centers.mu_max();
    const BoundCertificate analytic =
        analytic_lower_bound(cls, m.dim(), constants, ctx.centers.size(),
                             ctx.centers.mu_max(), mu_d);
    out["analytic"] = certificate_json(ctx.sc, analytic);
    out["analytic"]["constants_provenance"] = constants.provenance;
  } catch (const std::exception& e) {
    have_analytic = false;
    note = e.what();
  }
  if (!have_analytic) out["analytic_unavailable"] = note;
  if (!ctx.spectrum.states.empty())
    out["ground_energy"] =
        energy_out(ctx.sc, ctx.spectrum.states.front().energy);
  write_json(ctx.out / "bounds.json", out);
}

void run_perturbation_task(const TaskContext& ctx, const TaskSpec& task) {
  int k = task.integer("center", 0);
  if (k == 0) {  // default: the strongest-binding center (1-based key)
    for (int i = 1; i < ctx.centers.size(); ++i)
      if (ctx.centers[i].mu > ctx.centers[k].mu) k = i;
  } else {
    k -= 1;
    if (k < 0 || k >= ctx.centers.size())
      throw std::runtime_error("perturbation: center index out of range");
  }
  const PerturbationReport rep = compare_with_exact(
      ctx.sc.manifold, ctx.centers, k, ctx.sc.quad, ctx.sc.root_tol);
  json j;
  j["center"] = rep.branch + 1;
  j["nu0"] = rep.nu0;
  j["delta_nu"] = rep.delta_nu;
  j["delta_e"] = energy_out(ctx.sc, rep.delta_e);
  j["exact_nu"] = rep.exact_nu;
  j["relative_error"] = rep.relative_error;
  j["regime_ratio"] = rep.regime_ratio;
  j["in_regime"] = rep.in_regime;
  write_json(ctx.out / "perturbation.json", j);
}

void run_rgflow_task(const TaskContext& ctx, const TaskSpec& task) {
  const double scale = task.number("scale", 2.0 * ctx.centers.mu_max());
  std::vector<double> gammas = task.number_list("gammas");
  if (gammas.empty()) gammas = {0.5, 2.0, std::exp(1.0)};
  const RGState rg = rg_scheme(ctx.sc.manifold, ctx.centers, scale, ctx.sc.quad);
  Table tab;
  tab.columns = {"gamma", "coupling", "beta"};
  for (double g : gammas) {
    const double flowed = flow_coupling(rg.dim, rg.coupling, g);
    tab.add_row({format_double(g), format_double(flowed),
                 format_double(beta(rg.dim, flowed))});
  }
  tab.write(ctx.out / "rgflow", ctx.opts.format);
}

json run_properties_task(const TaskContext& ctx) {
  const auto results = run_property_suite(ctx.sc.manifold);
  json j;
  j["manifold"] = ctx.sc.manifold.describe();
  json items = json::array();
  bool all = true;
  for (const PropertyResult& r : results) {
    json item;
    item["name"] = r.name;
    item["residual"] = r.residual;
    item["tolerance"] = r.tolerance;
    item["pass"] = r.pass;
    items.push_back(item);
    all = all && r.pass;
  }
  j["checks"] = items;
  j["pass"] = all;
  write_json(ctx.out / "properties.json", j);
  if (!all) throw std::runtime_error("property suite failed");
  return j;
}

bool needs_spectrum(const Scenario& sc) {
  for (const TaskSpec& t : sc.tasks)
    if (t.kind == TaskKind::spectrum || t.kind == TaskKind::wavefield ||
        t.kind == TaskKind::bounds || t.kind == TaskKind::perturbation)
      return true;
  return false;
}

}  // namespace

int run_scenario(const Scenario& sc, const RunOptions& opts) {
  if (opts.threads > 0) set_max_threads(opts.threads);
  const fs::path out(opts.out_dir);
  fs::create_directories(out);

  json manifest;
  manifest["manifold"] = sc.manifold.describe();
  manifest["centers"] = sc.centers.size();
  json task_log = json::array();

  const CenterSet centers = sc.center_set();

  if (opts.check_only) {
    TaskContext ctx{sc, opts, centers, SpectrumResult{}, out};
    json entry;
    entry["task"] = "properties";
    try {
      run_properties_task(ctx);
      entry["status"] = "ok";
    } catch (const std::exception& e) {
      entry["status"] = "failed";
      entry["error"] = e.what();
    }
    task_log.push_back(entry);
    manifest["tasks"] = task_log;
    write_json(out / "manifest.json", manifest);
    return entry["status"] == "ok" ? 0 : 2;
  }

  SpectrumResult spectrum;
  if (needs_spectrum(sc))
    spectrum = solve_spectrum(sc.manifold, centers, sc.quad, sc.root_tol);
  TaskContext ctx{sc, opts, centers, spectrum, out};

  bool any_failed = false;
  for (const TaskSpec& task : sc.tasks) {
    json entry;
    entry["task"] = task_name(task.kind);
    try {
      switch (task.kind) {
        case TaskKind::spectrum: run_spectrum_task(ctx, task); break;
        case TaskKind::wavefield: run_wavefield_task(ctx, task); break;
        case TaskKind::bounds: run_bounds_task(ctx, task); break;
        case TaskKind::perturbation: run_perturbation_task(ctx, task); break;
        case TaskKind::rgflow: run_rgflow_task(ctx, task); break;
        case TaskKind::properties: run_properties_task(ctx); break;
      }
      entry["status"] = "ok";
    } catch (const std::exception& e) {
      entry["status"] = "failed";
      entry["error"] = e.what();
      any_failed = true;
    }
    task_log.push_back(entry);
  }

  if (needs_spectrum(sc)) {
    json branches = json::array();
    for (const BranchReport& b : spectrum.branches) {
      json jb;
      jb["branch"] = b.branch;
      jb["has_root"] = b.has_root;
      jb["note"] = b.note;
      branches.push_back(jb);
    }
    manifest["spectrum_branches"] = branches;
  }
  manifest["tasks"] = task_log;
  write_json(out / "manifest.json", manifest);
  return any_failed ? 2 : 0;
}

}  // namespace pointspec
