#ifndef POINTSPEC_SCENARIO_HPP
#define POINTSPEC_SCENARIO_HPP

// Scenario files: a line-oriented key/value document with [section] tables,
// '#' comments, and geometry-validated center lists. Parsing round-trips
// through serialize().

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "pointspec/principal.hpp"

namespace pointspec {

struct ScenarioError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum class TaskKind {
  spectrum,
  wavefield,
  bounds,
  perturbation,
  rgflow,
  properties
};

std::string task_name(TaskKind kind);

struct TaskSpec {
  TaskKind kind = TaskKind::spectrum;
  // per-task parameters with defaults applied at parse time
  std::map<std::string, std::string> params;

  double number(const std::string& key, double fallback) const;
  int integer(const std::string& key, int fallback) const;
  std::vector<double> number_list(const std::string& key) const;
};

struct Units {
  bool natural = true;
  double hbar = 1.0;
  double mass = 0.5;  // natural units: hbar = 2m = 1
  // physical energy = energy_scale() * natural energy
  double energy_scale() const { return hbar * hbar / (2.0 * mass); }
};

struct Scenario {
  ManifoldSpec manifold = ManifoldSpec::flat(3);
  std::vector<Center> centers;  // mu in natural units after parsing
  Units units;
  QuadratureConfig quad;
  double root_tol = 1e-10;
  std::vector<TaskSpec> tasks;

  CenterSet center_set() const { return CenterSet(manifold, centers); }
};

// Throws ScenarioError with line/key context on malformed documents and
// std::invalid_argument via geometry validation.
Scenario parse_scenario(const std::string& text);
Scenario load_scenario(const std::string& path);
std::string serialize_scenario(const Scenario& sc);

}  // namespace pointspec

#endif
