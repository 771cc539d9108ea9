#pragma once

#include <Eigen/Dense>
#include <optional>
#include <span>
#include <vector>

// Scatterer geometries on (broken) rings, the closed-form coupling kernel,
// and assembly of the M x M tight-binding Hamiltonian of the composite.
//
// "Kernel units" means the bare value of the closed-form coupling formula;
// physical energies carry an additional scattering-length prefactor that is
// stored separately (topological results do not depend on it).

namespace ryd {

// Hartree -> MHz.
inline constexpr double kHartreeToMHz = 6.5796839205e9;

// Rubidium triplet s-wave scattering length (a.u.); artifact default, used
// only when quoting energies in frequency units.
inline constexpr double kDefaultScatteringLength = -16.05;

struct RingGeometry {
  int nu = 0;
  double radius = 0.0;  // nominal ring radius, a.u.
  int site_count = 0;
  // One unit cell's arclengths. Size 2 (dimer): {t1 intracell, t2 intercell},
  // gap cycle t1,t2,t1,...  Size 3 (trimer/triangle): {t1 intercell, t2, t3
  // intracell}, gap cycle t2,t3,t1,... so chains start with a complete cell.
  std::vector<double> cell_arclengths;
  std::vector<double> angular_offsets;  // radians; empty or size M
  std::vector<double> radial_offsets;   // a.u.; empty or size M

  // Throws std::invalid_argument on violated invariants; returns warnings
  // (e.g. M >= nu) rather than failing on them.
  std::vector<std::string> validate() const;
};

struct SitePosition {
  double radius;
  double angle;
};

std::vector<SitePosition> ring_positions(const RingGeometry& g);

// 3D distance between two ring sites.
double site_chord(const SitePosition& a, const SitePosition& b);

// Closed-form coupling kernel V(x_-, x_+) with x_+- = (R_q + R_q' +- chord)/2.
double pair_coupling(int nu, double r_q, double r_p, double chord);

// chord -> 0 limit of pair_coupling, using u'' = (1/nu^2 - 2/r) u at l = 0.
double onsite_energy(int nu, double radius);

struct CompositeHamiltonian {
  Eigen::MatrixXd matrix;  // M x M, kernel units, exactly symmetric
  double scale;            // energy prefactor 2*pi*a_s
  std::vector<SitePosition> site_positions;
};

CompositeHamiltonian build_hamiltonian(const RingGeometry& g, double a_s,
                                       std::optional<int> neighbor_cutoff = {});

// V at the chord subtended by each arclength D (equal radii).
std::vector<double> coupling_profile(int nu, double radius,
                                     std::span<const double> arclengths);

enum class DesignMode { kExactRoot, kLeastSquares };

struct DesignResult {
  double radius;                    // selected solution
  double residual;                  // |f(R)| (root mode) or relative spread
  std::optional<double> arc_step;   // optimized t step (least-squares mode)
  std::vector<double> all_roots;    // every bracketed root found (root mode)
};

struct NoRootError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Finds R such that V(t2) = V(2 t2) = ... = V(n t2), t2 = angle_step * R.
// Root mode (n == 2): all sign changes of V(t2;R) - V(2 t2;R) on
// [r_lo, r_hi] are bracketed and refined; the returned root is the largest
// radius whose design coupling |V(t2)| is at least min_coupling_frac of the
// strongest root's. Least-squares mode (n >= 2): minimizes the relative
// spread of {V(j t)}_{j=1..n} over both R and the arc step t.
DesignResult design_ring(int nu, double angle_step, int cell_atoms,
                         double r_lo, double r_hi, DesignMode mode,
                         double min_coupling_frac = 0.25);

}  // namespace ryd
