// Timing comparison of the serial reference path (1 thread) against the
// OpenMP path for the data-parallel kernels: principal-matrix assembly,
// eigenbranch scans and wave-field grids.

#include <chrono>
#include <cstdio>
#include <vector>

#include "pointspec/parallel.hpp"
#include "pointspec/spectral.hpp"
#include "pointspec/wavefield.hpp"

using namespace pointspec;
using clock_type = std::chrono::steady_clock;

namespace {

const QuadratureConfig kQuad{};

double seconds_since(clock_type::time_point t0) {
  return std::chrono::duration<double>(clock_type::now() - t0).count();
}

template <class F>
double time_run(const F& f, int reps) {
  f();  // warm-up
  const auto t0 = clock_type::now();
  for (int r = 0; r < reps; ++r) f();
  return seconds_since(t0) / reps;
}

CenterSet grid_centers(const ManifoldSpec& m, int n_side) {
  std::vector<Center> centers;
  for (int i = 0; i < n_side; ++i)
    for (int j = 0; j < n_side; ++j)
      centers.push_back({Point::xyz(1.1 * i, 1.3 * j, 0.2 * (i + j)),
                         1.0 + 0.1 * (i + n_side * j)});
  return CenterSet(m, std::move(centers));
}

void report(const char* name, double serial, double parallel) {
  std::printf("%-28s serial %8.3f ms   threaded %8.3f ms   speedup %.2fx\n",
              name, 1e3 * serial, 1e3 * parallel, serial / parallel);
}

}  // namespace

int main() {
  const int hw = max_threads();
  std::printf("hardware threads available: %d\n\n", hw);

  const ManifoldSpec f3 = ManifoldSpec::flat(3);
  const CenterSet cs = grid_centers(f3, 4);  // N = 16, 136 entries

  {
    const auto work = [&] { (void)assemble(f3, cs, 1.3, kQuad); };
    set_max_threads(1);
    const double serial = time_run(work, 3);
    set_max_threads(0);
    const double threaded = time_run(work, 3);
    report("assemble N=16", serial, threaded);
  }

  {
    std::vector<double> nus;
    for (int i = 0; i < 24; ++i) nus.push_back(0.4 + 0.1 * i);
    const auto work = [&] { (void)eigen_branch_scan(f3, cs, nus, kQuad); };
    set_max_threads(1);
    const double serial = time_run(work, 1);
    set_max_threads(0);
    const double threaded = time_run(work, 1);
    report("branch scan 24 points", serial, threaded);
  }

  {
    const CenterSet pair(f3, {{Point::xyz(0, 0, 0), 1.0},
                              {Point::xyz(1, 0, 0), 1.0}});
    const SpectrumResult sr = solve_spectrum(f3, pair, kQuad);
    const auto work = [&] { (void)l2_norm(f3, pair, sr.states[0], kQuad); };
    set_max_threads(1);
    const double serial = time_run(work, 1);
    set_max_threads(0);
    const double threaded = time_run(work, 1);
    report("L2 norm grid", serial, threaded);
  }

  {
    const ManifoldSpec h2 = ManifoldSpec::hyperbolic(2, 1.0);
    const CenterSet one(h2, {{Point::half_plane(0, 1.0), 1.0}});
    const auto work = [&] { (void)solve_spectrum(h2, one, kQuad); };
    set_max_threads(1);
    const double serial = time_run(work, 1);
    set_max_threads(0);
    const double threaded = time_run(work, 1);
    report("H2 spectrum solve", serial, threaded);
  }

  set_max_threads(0);
  return 0;
}
