#pragma once

#include <Eigen/Dense>
#include <span>
#include <vector>

#include "ryd/lattices.hpp"

// Band structures, Zak phases via discrete Wilson loops, minimum band gaps,
// and two-parameter topological phase diagrams.

namespace ryd {

struct KMesh {
  int n_k;
  double point(int j) const { return -M_PI + 2.0 * M_PI * j / n_k; }
};

struct GapCollapseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Eigenvalues ascending per k; row j corresponds to mesh.point(j).
Eigen::MatrixXd band_structure(const BlochModel& model, const KMesh& mesh);

// Discrete Wilson-loop Zak phase of the given band set, in (-pi, pi] with
// -pi mapped to pi. Bands are identified by ascending eigenvalue order.
// Throws GapCollapseError if the set is not isolated from its complement
// everywhere on the mesh, unless allow_band_touching is set.
double zak_phase(const BlochModel& model, std::span<const int> band_set,
                 const KMesh& mesh, bool allow_band_touching = false);

// min over the mesh of band_{g+1}(k) - band_g(k); gap_index is 1-based.
double min_gap(const BlochModel& model, int gap_index, const KMesh& mesh);

struct ZakCell {
  double below_gap_sum = 0.0;  // phase sum of the bands below the gap
  double defect = 0.0;         // distance from {0, pi}
  bool critical = false;       // within the gap-closing tolerance
};

enum class GapSelector { kLower, kUpper };

struct PhaseDiagram {
  std::vector<double> a_grid, b_grid;
  std::vector<ZakCell> cells;  // row-major, a outer, b inner
  const ZakCell& at(int ia, int ib) const {
    return cells[ia * b_grid.size() + ib];
  }
};

// Triangle-family phase diagram at fixed u and c over an (a, b) grid.
// Cells with min_gap below critical_gap are flagged critical and carry no
// phase. Grid cells are independent; `parallel` enables the OpenMP path
// (results are identical to the serial reference).
PhaseDiagram phase_diagram(double u, double c, std::span<const double> a_grid,
                           std::span<const double> b_grid, GapSelector gap,
                           const KMesh& mesh, bool parallel = true,
                           double critical_gap = 1e-3);

}  // namespace ryd
