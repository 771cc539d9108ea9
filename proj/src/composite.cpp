#include "ryd/composite.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

#include "ryd/hydrogenic.hpp"

namespace ryd {
namespace {

constexpr double kCoincidentChord = 1e-6;

// Gap sequence for one structural period. Dimer patterns start with the
// intracell bond t1; trimer patterns start inside the cell (t2, t3) with the
// intercell bond t1 last, so the chain begins and ends with complete cells.
std::vector<double> gap_cycle(const std::vector<double>& cell) {
  if (cell.size() == 1) return {cell[0]};  // uniform ring
  if (cell.size() == 2) return {cell[0], cell[1]};
  return {cell[1], cell[2], cell[0]};
}

double chord_of_arc(double radius, double arc) {
  return 2.0 * radius * std::sin(arc / (2.0 * radius));
}

}  // namespace

std::vector<std::string> RingGeometry::validate() const {
  if (nu < 1) throw std::invalid_argument("geometry: nu must be >= 1");
  if (site_count < 1) throw std::invalid_argument("geometry: M must be >= 1");
  if (cell_arclengths.empty() || cell_arclengths.size() > 3)
    throw std::invalid_argument("geometry: cell pattern must have 1-3 arclengths");
  for (const double t : cell_arclengths)
    if (!(t > 0.0)) throw std::invalid_argument("geometry: arclengths must be positive");
  if (!angular_offsets.empty() && int(angular_offsets.size()) != site_count)
    throw std::invalid_argument("geometry: angular_offsets size mismatch");
  if (!radial_offsets.empty() && int(radial_offsets.size()) != site_count)
    throw std::invalid_argument("geometry: radial_offsets size mismatch");
  for (int q = 0; q < int(radial_offsets.size()); ++q)
    if (radius + radial_offsets[q] <= 0.0)
      throw std::invalid_argument("geometry: site radius must stay positive");

  const auto cycle = gap_cycle(cell_arclengths);
  double total = 0.0;
  for (int i = 0; i + 1 < site_count; ++i) total += cycle[i % cycle.size()];
  if (total / radius >= 2.0 * M_PI)
    throw std::invalid_argument("geometry: ring is not broken (subtended angle >= 2*pi)");

  std::vector<std::string> warnings;
  if (site_count >= nu)
    warnings.push_back("M >= nu: long-range couplings may not be negligible");
  return warnings;
}

std::vector<SitePosition> ring_positions(const RingGeometry& g) {
  g.validate();
  const auto cycle = gap_cycle(g.cell_arclengths);
  std::vector<SitePosition> sites(g.site_count);
  double angle = 0.0;
  for (int q = 0; q < g.site_count; ++q) {
    const double da = g.angular_offsets.empty() ? 0.0 : g.angular_offsets[q];
    const double dr = g.radial_offsets.empty() ? 0.0 : g.radial_offsets[q];
    sites[q] = {g.radius + dr, angle + da};
    angle += cycle[q % cycle.size()] / g.radius;
  }
  return sites;
}

double site_chord(const SitePosition& a, const SitePosition& b) {
  const double d2 = a.radius * a.radius + b.radius * b.radius -
                    2.0 * a.radius * b.radius * std::cos(a.angle - b.angle);
  return std::sqrt(std::max(d2, 0.0));
}

double pair_coupling(int nu, double r_q, double r_p, double chord) {
  if (!(chord > 0.0))
    throw std::domain_error("pair_coupling: chord must be > 0 (use onsite_energy)");
  if (!(r_q > 0.0) || !(r_p > 0.0))
    throw std::domain_error("pair_coupling: radii must be > 0");
  const double x_minus = 0.5 * (r_q + r_p - chord);
  const double x_plus = 0.5 * (r_q + r_p + chord);
  // x_minus hits zero for antipodal sites; radial_eval handles the r=0 limit.
  const auto lo = detail::radial_eval(nu, 0, std::max(x_minus, 0.0));
  const auto hi = detail::radial_eval(nu, 0, x_plus);
  return (lo.du * hi.u - lo.u * hi.du) / (2.0 * (x_plus - x_minus));
}

double onsite_energy(int nu, double radius) {
  if (!(radius > 0.0)) throw std::domain_error("onsite_energy: radius must be > 0");
  const auto v = detail::radial_eval(nu, 0, radius);
  return 0.5 * (v.du * v.du - (1.0 / (double(nu) * nu) - 2.0 / radius) * v.u * v.u);
}

CompositeHamiltonian build_hamiltonian(const RingGeometry& g, double a_s,
                                       std::optional<int> neighbor_cutoff) {
  if (a_s == 0.0) throw std::invalid_argument("build_hamiltonian: a_s must be nonzero");
  const auto sites = ring_positions(g);
  const int m = g.site_count;
  Eigen::MatrixXd h = Eigen::MatrixXd::Zero(m, m);
  for (int q = 0; q < m; ++q) h(q, q) = onsite_energy(g.nu, sites[q].radius);
  std::exception_ptr failure;  // exceptions must not escape the omp region
#pragma omp parallel for schedule(dynamic)
  for (int q = 0; q < m; ++q) {
    try {
      for (int p = q + 1; p < m; ++p) {
        if (neighbor_cutoff && p - q > *neighbor_cutoff) continue;
        const double chord = site_chord(sites[q], sites[p]);
        if (chord < kCoincidentChord)
          throw std::invalid_argument("build_hamiltonian: coincident scatterers");
        const double v = pair_coupling(g.nu, sites[q].radius, sites[p].radius, chord);
        h(q, p) = v;
        h(p, q) = v;
      }
    } catch (...) {
#pragma omp critical
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);
  return {std::move(h), 2.0 * M_PI * a_s, sites};
}

std::vector<double> coupling_profile(int nu, double radius,
                                     std::span<const double> arclengths) {
  std::vector<double> out;
  out.reserve(arclengths.size());
  for (const double d : arclengths) {
    if (!(d > 0.0) || d >= 2.0 * M_PI * radius)
      throw std::domain_error("coupling_profile: arclength out of (0, 2*pi*R)");
    out.push_back(pair_coupling(nu, radius, radius, chord_of_arc(radius, d)));
  }
  return out;
}

namespace {

double design_mismatch(int nu, double radius, double angle_step) {
  const double t2 = angle_step * radius;
  return pair_coupling(nu, radius, radius, chord_of_arc(radius, t2)) -
         pair_coupling(nu, radius, radius, chord_of_arc(radius, 2.0 * t2));
}

// Relative spread of {V(j*t)}_{j=1..n} at fixed radius and arc step.
double coupling_spread(int nu, double radius, double t, int n) {
  double vmin = 0.0, vmax = 0.0, amax = 0.0;
  for (int j = 1; j <= n; ++j) {
    const double v =
        pair_coupling(nu, radius, radius, chord_of_arc(radius, j * t));
    if (j == 1) vmin = vmax = v;
    vmin = std::min(vmin, v);
    vmax = std::max(vmax, v);
    amax = std::max(amax, std::abs(v));
  }
  return (vmax - vmin) / std::max(amax, 1e-300);
}

double refine_root(int nu, double angle_step, double lo, double hi,
                   double f_lo) {
  // bisection with secant acceleration, to relative 1e-8 in R
  double f_hi = design_mismatch(nu, hi, angle_step);
  for (int it = 0; it < 200 && (hi - lo) > 1e-8 * hi; ++it) {
    double mid = 0.5 * (lo + hi);
    if (f_hi != f_lo) {
      const double sec = lo - f_lo * (hi - lo) / (f_hi - f_lo);
      if (sec > lo + 0.1 * (hi - lo) && sec < hi - 0.1 * (hi - lo)) mid = sec;
    }
    const double f_mid = design_mismatch(nu, mid, angle_step);
    if ((f_lo <= 0.0) == (f_mid <= 0.0)) {
      lo = mid;
      f_lo = f_mid;
    } else {
      hi = mid;
      f_hi = f_mid;
    }
  }
  return 0.5 * (lo + hi);
}

}  // namespace

DesignResult design_ring(int nu, double angle_step, int cell_atoms,
                         double r_lo, double r_hi, DesignMode mode,
                         double min_coupling_frac) {
  if (cell_atoms < 2) throw std::invalid_argument("design_ring: n must be >= 2");
  if (!(r_lo > 0.0) || !(r_hi > r_lo))
    throw std::invalid_argument("design_ring: bad radius interval");

  if (mode == DesignMode::kExactRoot) {
    if (cell_atoms != 2)
      throw std::invalid_argument("design_ring: exact-root mode requires n = 2");
    constexpr int kScan = 400;
    std::vector<double> roots;
    double prev_r = r_lo, prev_f = design_mismatch(nu, r_lo, angle_step);
    for (int i = 1; i <= kScan; ++i) {
      const double r = r_lo + (r_hi - r_lo) * i / kScan;
      const double f = design_mismatch(nu, r, angle_step);
      if ((prev_f <= 0.0) != (f <= 0.0))
        roots.push_back(refine_root(nu, angle_step, prev_r, r, prev_f));
      prev_r = r;
      prev_f = f;
    }
    if (roots.empty())
      throw NoRootError("design_ring: V(t2) - V(2 t2) has no sign change on the interval");

    double strongest = 0.0;
    std::vector<double> strength(roots.size());
    for (size_t i = 0; i < roots.size(); ++i) {
      const double t2 = angle_step * roots[i];
      strength[i] = std::abs(
          pair_coupling(nu, roots[i], roots[i], chord_of_arc(roots[i], t2)));
      strongest = std::max(strongest, strength[i]);
    }
    // Prefer the largest ring whose design coupling is still appreciable:
    // larger rings have weaker parasitic long-range tails.
    double best = roots.front();
    for (size_t i = 0; i < roots.size(); ++i)
      if (strength[i] >= min_coupling_frac * strongest) best = roots[i];
    return {best, std::abs(design_mismatch(nu, best, angle_step)), {}, roots};
  }

  // Least squares over (R, t): coarse grid scan, then local refinement.
  constexpr int kRScan = 160, kTScan = 120;
  double best_r = r_lo, best_t = angle_step * r_lo, best_s = 1e300;
  for (int i = 0; i <= kRScan; ++i) {
    const double r = r_lo + (r_hi - r_lo) * i / kRScan;
    for (int j = 0; j <= kTScan; ++j) {
      const double t = angle_step * r * (0.5 + 1.0 * j / kTScan);
      if (cell_atoms * t >= M_PI * r) continue;  // keep the cell on a half ring
      const double s = coupling_spread(nu, r, t, cell_atoms);
      if (s < best_s) {
        best_s = s;
        best_r = r;
        best_t = t;
      }
    }
  }
  // coordinate refinement
  double dr = (r_hi - r_lo) / kRScan, dt = best_t * 0.01;
  for (int round = 0; round < 60; ++round) {
    bool improved = false;
    for (const double r :
         {best_r - dr, best_r + dr, best_r - 0.3 * dr, best_r + 0.3 * dr}) {
      if (r < r_lo || r > r_hi) continue;
      const double s = coupling_spread(nu, r, best_t, cell_atoms);
      if (s < best_s) {
        best_s = s;
        best_r = r;
        improved = true;
      }
    }
    for (const double t :
         {best_t - dt, best_t + dt, best_t - 0.3 * dt, best_t + 0.3 * dt}) {
      if (!(t > 0.0) || cell_atoms * t >= M_PI * best_r) continue;
      const double s = coupling_spread(nu, best_r, t, cell_atoms);
      if (s < best_s) {
        best_s = s;
        best_t = t;
        improved = true;
      }
    }
    if (!improved) {
      dr *= 0.5;
      dt *= 0.5;
    }
  }
  return {best_r, best_s, best_t, {}};
}

}  // namespace ryd
