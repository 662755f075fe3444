#ifndef POINTSPEC_TASKS_HPP
#define POINTSPEC_TASKS_HPP

// Scenario orchestration: runs each task, writes the CSV/JSON artifacts and
// a manifest; exit code 0 on success, 2 when a task failed (partial
// artifacts are kept).

#include <string>

#include "pointspec/scenario.hpp"

namespace pointspec {

struct RunOptions {
  std::string out_dir = ".";
  std::string format = "csv";  // csv | json, for the tabular artifacts
  int threads = 0;             // 0 = library default
  bool check_only = false;     // run the property suite only
};

int run_scenario(const Scenario& sc, const RunOptions& opts);

}  // namespace pointspec

#endif
