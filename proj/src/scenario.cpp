#include "pointspec/scenario.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "pointspec/textio.hpp"

namespace pointspec {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double need_number(const std::string& value, const std::string& key,
                   int line) {
  bool ok = false;
  const double v = parse_double(value, ok);
  if (!ok)
    throw ScenarioError("line " + std::to_string(line) + ": key '" + key +
                        "' needs a number, got '" + value + "'");
  return v;
}

std::vector<double> split_numbers(const std::string& value,
                                  const std::string& key, int line) {
  std::vector<double> out;
  std::istringstream ss(value);
  std::string tok;
  while (ss >> tok) out.push_back(need_number(tok, key, line));
  return out;
}

std::optional<TaskKind> task_kind_of(const std::string& name) {
  if (name == "spectrum") return TaskKind::spectrum;
  if (name == "wavefield") return TaskKind::wavefield;
  if (name == "bounds") return TaskKind::bounds;
  if (name == "perturbation") return TaskKind::perturbation;
  if (name == "rgflow") return TaskKind::rgflow;
  if (name == "properties") return TaskKind::properties;
  return std::nullopt;
}

}  // namespace

std::string task_name(TaskKind kind) {
  switch (kind) {
    case TaskKind::spectrum: return "spectrum";
    case TaskKind::wavefield: return "wavefield";
    case TaskKind::bounds: return "bounds";
    case TaskKind::perturbation: return "perturbation";
    case TaskKind::rgflow: return "rgflow";
    case TaskKind::properties: return "properties";
  }
  return "?";
}

double TaskSpec::number(const std::string& key, double fallback) const {
  const auto it = params.find(key);
  if (it == params.end()) return fallback;
  bool ok = false;
  const double v = parse_double(it->second, ok);
  if (!ok)
    throw ScenarioError("task " + task_name(kind) + ": key '" + key +
                        "' needs a number");
  return v;
}

int TaskSpec::integer(const std::string& key, int fallback) const {
  return static_cast<int>(number(key, fallback));
}

std::vector<double> TaskSpec::number_list(const std::string& key) const {
  const auto it = params.find(key);
  if (it == params.end()) return {};
  return split_numbers(it->second, key, 0);
}

Scenario parse_scenario(const std::string& text) {
  Scenario sc;
  sc.centers.clear();
  sc.tasks.clear();

  std::string manifold_name = "flat3";
  double radius = 1.0, curvature = 1.0;
  bool physical = false;
  double hbar = 1.0, mass = 0.5;

  struct PendingCenter {
    std::vector<double> position;
    double mu = 1.0;
    bool has_mu = false;
    int line = 0;
  };
  std::vector<PendingCenter> pending;

  enum class Section { global, center, task };
  Section section = Section::global;
  TaskSpec* current_task = nullptr;

  std::istringstream in(text);
  std::string raw;
  int line = 0;
  while (std::getline(in, raw)) {
    ++line;
    const auto hash = raw.find('#');
    if (hash != std::string::npos) raw = raw.substr(0, hash);
    const std::string s = trim(raw);
    if (s.empty()) continue;

    if (s.front() == '[') {
      if (s.back() != ']')
        throw ScenarioError("line " + std::to_string(line) +
                            ": unterminated section header");
      const std::string head = trim(s.substr(1, s.size() - 2));
      if (head == "center") {
        section = Section::center;
        pending.push_back({});
        pending.back().line = line;
      } else if (head.rfind("task", 0) == 0) {
        const std::string name = trim(head.substr(4));
        const auto kind = task_kind_of(name);
        if (!kind)
          throw ScenarioError("line " + std::to_string(line) +
                              ": unknown task '" + name + "'");
        section = Section::task;
        sc.tasks.push_back({*kind, {}});
        current_task = &sc.tasks.back();
      } else {
        throw ScenarioError("line " + std::to_string(line) +
                            ": unknown section '" + head + "'");
      }
      continue;
    }

    const auto eq = s.find('=');
    if (eq == std::string::npos)
      throw ScenarioError("line " + std::to_string(line) +
                          ": expected 'key = value'");
    const std::string key = trim(s.substr(0, eq));
    const std::string value = trim(s.substr(eq + 1));
    if (key.empty() || value.empty())
      throw ScenarioError("line " + std::to_string(line) +
                          ": empty key or value");

    switch (section) {
      case Section::global:
        if (key == "manifold") {
          manifold_name = value;
        } else if (key == "radius") {
          radius = need_number(value, key, line);
        } else if (key == "curvature") {
          curvature = need_number(value, key, line);
        } else if (key == "units") {
          if (value == "natural")
            physical = false;
          else if (value == "physical")
            physical = true;
          else
            throw ScenarioError("line " + std::to_string(line) +
                                ": units must be natural or physical");
        } else if (key == "hbar") {
          hbar = need_number(value, key, line);
        } else if (key == "mass") {
          mass = need_number(value, key, line);
        } else if (key == "root_tol") {
          sc.root_tol = need_number(value, key, line);
        } else if (key == "quad_rel_tol") {
          sc.quad.rel_tol = need_number(value, key, line);
        } else if (key == "quad_split_time") {
          sc.quad.split_time = need_number(value, key, line);
        } else if (key == "quad_tail_tol") {
          sc.quad.tail_tol = need_number(value, key, line);
        } else {
          throw ScenarioError("line " + std::to_string(line) +
                              ": unknown key '" + key + "'");
        }
        break;
      case Section::center:
        if (key == "position") {
          pending.back().position = split_numbers(value, key, line);
        } else if (key == "mu") {
          pending.back().mu = need_number(value, key, line);
          pending.back().has_mu = true;
        } else {
          throw ScenarioError("line " + std::to_string(line) +
                              ": unknown center key '" + key + "'");
        }
        break;
      case Section::task:
        current_task->params[key] = value;
        break;
    }
  }

  if (manifold_name == "flat2")
    sc.manifold = ManifoldSpec::flat(2);
  else if (manifold_name == "flat3")
    sc.manifold = ManifoldSpec::flat(3);
  else if (manifold_name == "sphere2")
    sc.manifold = ManifoldSpec::sphere2(radius);
  else if (manifold_name == "h2")
    sc.manifold = ManifoldSpec::hyperbolic(2, curvature);
  else if (manifold_name == "h3")
    sc.manifold = ManifoldSpec::hyperbolic(3, curvature);
  else
    throw ScenarioError("unknown manifold '" + manifold_name +
                        "' (flat2|flat3|sphere2|h2|h3)");

  sc.units.natural = !physical;
  sc.units.hbar = physical ? hbar : 1.0;
  sc.units.mass = physical ? mass : 0.5;
  if (!(sc.units.hbar > 0.0) || !(sc.units.mass > 0.0))
    throw ScenarioError("physical units need hbar > 0 and mass > 0");
  const double mu_scale = std::sqrt(sc.units.energy_scale());

  if (!(sc.quad.rel_tol > 0.0) || sc.quad.rel_tol >= 1e-4)
    throw ScenarioError("quad_rel_tol must be in (0, 1e-4)");
  if (!(sc.quad.split_time > 0.0) || !(sc.quad.tail_tol > 0.0) ||
      !(sc.root_tol > 0.0))
    throw ScenarioError("tolerances and split time must be positive");

  if (pending.empty()) throw ScenarioError("scenario has no [center] blocks");
  for (const PendingCenter& pc : pending) {
    const int want = sc.manifold.dim();
    if (static_cast<int>(pc.position.size()) != want)
      throw ScenarioError("line " + std::to_string(pc.line) + ": center needs " +
                          std::to_string(want) + " coordinates");
    if (!pc.has_mu)
      throw ScenarioError("line " + std::to_string(pc.line) +
                          ": center is missing mu");
    Point p;
    if (sc.manifold.geometry() == Geometry::FlatEuclidean)
      p = want == 2 ? Point::xy(pc.position[0], pc.position[1])
                    : Point::xyz(pc.position[0], pc.position[1], pc.position[2]);
    else if (sc.manifold.geometry() == Geometry::Sphere2)
      p = Point::sphere(pc.position[0], pc.position[1]);
    else
      p = want == 2 ? Point::half_plane(pc.position[0], pc.position[1])
                    : Point::half_space(pc.position[0], pc.position[1],
                                        pc.position[2]);
    sc.manifold.validate(p);  // surfaces the offending coordinate early
    sc.centers.push_back({p, pc.mu / mu_scale});
  }
  CenterSet check(sc.manifold, sc.centers);  // distinctness, mu > 0
  (void)check;

  if (sc.tasks.empty()) throw ScenarioError("scenario has no [task] blocks");
  return sc;
}

Scenario load_scenario(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ScenarioError("cannot open scenario file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_scenario(buf.str());
}

std::string serialize_scenario(const Scenario& sc) {
  std::ostringstream out;
  switch (sc.manifold.geometry()) {
    case Geometry::FlatEuclidean:
      out << "manifold = " << (sc.manifold.dim() == 2 ? "flat2" : "flat3")
          << "\n";
      break;
    case Geometry::Sphere2:
      out << "manifold = sphere2\n";
      out << "radius = " << format_double(sc.manifold.scale()) << "\n";
      break;
    case Geometry::Hyperbolic:
      out << "manifold = " << (sc.manifold.dim() == 2 ? "h2" : "h3") << "\n";
      out << "curvature = " << format_double(sc.manifold.scale()) << "\n";
      break;
  }
  out << "units = " << (sc.units.natural ? "natural" : "physical") << "\n";
  if (!sc.units.natural) {
    out << "hbar = " << format_double(sc.units.hbar) << "\n";
    out << "mass = " << format_double(sc.units.mass) << "\n";
  }
  out << "root_tol = " << format_double(sc.root_tol) << "\n";
  out << "quad_rel_tol = " << format_double(sc.quad.rel_tol) << "\n";
  out << "quad_split_time = " << format_double(sc.quad.split_time) << "\n";
  out << "quad_tail_tol = " << format_double(sc.quad.tail_tol) << "\n";
  const double mu_scale = std::sqrt(sc.units.energy_scale());
  for (const Center& c : sc.centers) {
    out << "\n[center]\nposition =";
    for (int i = 0; i < c.point.size(); ++i)
      out << " " << format_double(c.point[i]);
    out << "\nmu = " << format_double(c.mu * mu_scale) << "\n";
  }
  for (const TaskSpec& t : sc.tasks) {
    out << "\n[task " << task_name(t.kind) << "]\n";
    for (const auto& [k, v] : t.params) out << k << " = " << v << "\n";
  }
  return out.str();
}

}  // namespace pointspec
