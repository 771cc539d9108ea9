#include "ryd/topology.hpp"

#include <cmath>
#include <complex>
#include <stdexcept>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace ryd {
namespace {

double wrap_phase(double z) {
  z = std::remainder(z, 2.0 * M_PI);
  if (z <= -M_PI + 1e-15) z = M_PI;  // report -pi as pi
  return z;
}

}  // namespace

Eigen::MatrixXd band_structure(const BlochModel& model, const KMesh& mesh) {
  if (mesh.n_k < 8) throw std::invalid_argument("band_structure: n_k must be >= 8");
  Eigen::MatrixXd bands(mesh.n_k, model.cell_size);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver;
  for (int j = 0; j < mesh.n_k; ++j) {
    solver.compute(model.matrix_at(mesh.point(j)), Eigen::EigenvaluesOnly);
    bands.row(j) = solver.eigenvalues().transpose();
  }
  return bands;
}

double zak_phase(const BlochModel& model, std::span<const int> band_set,
                 const KMesh& mesh, bool allow_band_touching) {
  if (band_set.empty()) throw std::invalid_argument("zak_phase: empty band set");
  const int dim = model.cell_size;
  const int nb = int(band_set.size());
  for (const int b : band_set)
    if (b < 0 || b >= dim) throw std::invalid_argument("zak_phase: band index out of range");

  std::vector<Eigen::MatrixXcd> vecs(mesh.n_k);
  double width = 0.0, min_isolation = 1e300;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver;
  for (int j = 0; j < mesh.n_k; ++j) {
    solver.compute(model.matrix_at(mesh.point(j)));
    const auto& ev = solver.eigenvalues();
    width = std::max(width, ev(dim - 1) - ev(0));
    for (const int b : band_set) {
      if (b > 0 && std::find(band_set.begin(), band_set.end(), b - 1) == band_set.end())
        min_isolation = std::min(min_isolation, ev(b) - ev(b - 1));
      if (b + 1 < dim && std::find(band_set.begin(), band_set.end(), b + 1) == band_set.end())
        min_isolation = std::min(min_isolation, ev(b + 1) - ev(b));
    }
    Eigen::MatrixXcd sub(dim, nb);
    for (int c = 0; c < nb; ++c) sub.col(c) = solver.eigenvectors().col(band_set[c]);
    vecs[j] = std::move(sub);
  }
  if (!allow_band_touching && min_isolation <= 1e-12 * width)
    throw GapCollapseError("zak_phase: band set touches its complement on the mesh");

  std::complex<double> loop = 1.0;
  for (int j = 0; j < mesh.n_k; ++j) {
    const Eigen::MatrixXcd overlap =
        vecs[j].adjoint() * vecs[(j + 1) % mesh.n_k];
    loop *= overlap.determinant();
  }
  return wrap_phase(-std::arg(loop));
}

double min_gap(const BlochModel& model, int gap_index, const KMesh& mesh) {
  if (gap_index < 1 || gap_index >= model.cell_size)
    throw std::invalid_argument("min_gap: gap index out of range");
  const Eigen::MatrixXd bands = band_structure(model, mesh);
  return (bands.col(gap_index) - bands.col(gap_index - 1)).minCoeff();
}

namespace {

ZakCell diagram_cell(double u, double c, double a, double b, GapSelector gap,
                     const KMesh& mesh, double critical_gap) {
  const int gap_index = gap == GapSelector::kLower ? 1 : 2;
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix3cd> solver;

  double gmin = 1e300;
  std::vector<Eigen::MatrixXcd> vecs(mesh.n_k);
  const int nb = gap_index;  // bands below the gap
  for (int j = 0; j < mesh.n_k; ++j) {
    solver.compute(bloch_triangle(u, a, b, c, mesh.point(j)));
    const auto& ev = solver.eigenvalues();
    gmin = std::min(gmin, ev(gap_index) - ev(gap_index - 1));
    vecs[j] = solver.eigenvectors().leftCols(nb);
  }
  ZakCell cell;
  if (gmin < critical_gap) {
    cell.critical = true;
    return cell;
  }
  std::complex<double> loop = 1.0;
  for (int j = 0; j < mesh.n_k; ++j)
    loop *= (vecs[j].adjoint() * vecs[(j + 1) % mesh.n_k]).determinant();
  cell.below_gap_sum = wrap_phase(-std::arg(loop));
  cell.defect = std::min(std::abs(cell.below_gap_sum),
                         std::abs(std::abs(cell.below_gap_sum) - M_PI));
  return cell;
}

}  // namespace

PhaseDiagram phase_diagram(double u, double c, std::span<const double> a_grid,
                           std::span<const double> b_grid, GapSelector gap,
                           const KMesh& mesh, bool parallel,
                           double critical_gap) {
  if (u == 0.0) throw std::invalid_argument("phase_diagram: u must be nonzero");
  PhaseDiagram out;
  out.a_grid.assign(a_grid.begin(), a_grid.end());
  out.b_grid.assign(b_grid.begin(), b_grid.end());
  const int na = int(a_grid.size()), nb_ = int(b_grid.size());
  out.cells.resize(size_t(na) * nb_);
#pragma omp parallel for schedule(dynamic) collapse(2) if (parallel)
  for (int ia = 0; ia < na; ++ia)
    for (int ib = 0; ib < nb_; ++ib)
      out.cells[size_t(ia) * nb_ + ib] = diagram_cell(
          u, c, a_grid[ia], b_grid[ib], gap, mesh, critical_gap);
  return out;
}

}  // namespace ryd
