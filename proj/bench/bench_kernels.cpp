// Timing comparison of the OpenMP kernels against their serial references.
// The parallel paths are required to be bit-identical to the serial ones
// (asserted here as well as in the unit tests), so this only reports time.

#include <chrono>
#include <cstdio>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "ryd/spectra.hpp"
#include "ryd/topology.hpp"

using namespace ryd;

namespace {

double now() {
  return std::chrono::duration<double>(
             std::chrono::steady_clock::now().time_since_epoch())
      .count();
}

std::vector<double> linspace(double lo, double hi, int n) {
  std::vector<double> v(n);
  for (int i = 0; i < n; ++i) v[i] = lo + (hi - lo) * i / (n - 1);
  return v;
}

}  // namespace

int main() {
#ifdef _OPENMP
  std::printf("OpenMP threads: %d\n", omp_get_max_threads());
#else
  std::printf("built without OpenMP\n");
#endif

  // composite sweep: 64 diagonalizations of a 48-site ring
  RingGeometry g;
  g.nu = 60;
  g.radius = 2.0 * 3600.0;
  g.site_count = 48;
  double t2 = 2.0 * M_PI * g.radius / 60.0;
  g.cell_arclengths = {t2, t2};
  std::vector<double> t1(64);
  for (size_t i = 0; i < t1.size(); ++i) t1[i] = (0.75 + 0.5 * i / 63.0) * t2;

  SweepOptions serial{{}, false}, parallel{{}, true};
  double t0 = now();
  auto ref = sweep(g, t1, kDefaultScatteringLength, serial);
  double ts = now() - t0;
  t0 = now();
  auto par = sweep(g, t1, kDefaultScatteringLength, parallel);
  double tp = now() - t0;
  bool same = true;
  for (size_t i = 0; i < t1.size(); ++i)
    if ((ref.points[i].energies - par.points[i].energies).cwiseAbs().maxCoeff() != 0.0)
      same = false;
  std::printf("sweep 64x48        serial %.3f s  parallel %.3f s  speedup %.2fx  %s\n",
              ts, tp, ts / tp, same ? "bit-identical" : "MISMATCH");

  // phase diagram: 101 x 101 Wilson loops on a 256-point mesh
  auto a_grid = linspace(0.02, 0.9, 101);
  auto b_grid = linspace(0.02, 0.9, 101);
  KMesh mesh{256};
  t0 = now();
  auto pds = phase_diagram(-0.25, 0.07, a_grid, b_grid, GapSelector::kLower,
                           mesh, false);
  ts = now() - t0;
  t0 = now();
  auto pdp = phase_diagram(-0.25, 0.07, a_grid, b_grid, GapSelector::kLower,
                           mesh, true);
  tp = now() - t0;
  same = true;
  for (size_t i = 0; i < pds.cells.size(); ++i)
    if (pds.cells[i].below_gap_sum != pdp.cells[i].below_gap_sum ||
        pds.cells[i].critical != pdp.cells[i].critical)
      same = false;
  std::printf("phase diagram 101^2 serial %.3f s  parallel %.3f s  speedup %.2fx  %s\n",
              ts, tp, ts / tp, same ? "bit-identical" : "MISMATCH");

  // disorder ensemble: 64 realizations of a 36-site ring
  g.site_count = 36;
  t2 = 2.0 * M_PI * g.radius / 45.0;
  g.cell_arclengths = {1.25 * t2, t2};
  DisorderSpec d{DisorderSpec::Kind::kAngular, 1e-3, 64, 1};
  t0 = now();
  auto ds = disorder_ensemble(g, d, kDefaultScatteringLength, serial);
  ts = now() - t0;
  t0 = now();
  auto dp = disorder_ensemble(g, d, kDefaultScatteringLength, parallel);
  tp = now() - t0;
  same = true;
  for (int r = 0; r < d.realizations; ++r)
    if (ds.realizations[r].pair_splitting != dp.realizations[r].pair_splitting)
      same = false;
  std::printf("disorder 64x36     serial %.3f s  parallel %.3f s  speedup %.2fx  %s\n",
              ts, tp, ts / tp, same ? "bit-identical" : "MISMATCH");
  return 0;
}
