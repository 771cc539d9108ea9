#include "ryd/spectra.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "ryd/philox.hpp"

namespace ryd {
namespace {

// Level clusters separated by spacings wider than max(factor x median,
// 1e-12 x bandwidth). Returns the first state index of each cluster plus a
// terminating sentinel.
std::vector<int> cluster_starts(const Eigen::VectorXd& e, double factor) {
  const int n = int(e.size());
  std::vector<double> spacings(n - 1);
  for (int i = 0; i + 1 < n; ++i) spacings[i] = e(i + 1) - e(i);
  std::vector<double> sorted = spacings;
  std::nth_element(sorted.begin(), sorted.begin() + (n - 1) / 2, sorted.end());
  const double median = sorted[(n - 1) / 2];
  const double threshold =
      std::max(factor * median, 1e-12 * (e(n - 1) - e(0)));
  std::vector<int> starts{0};
  for (int i = 0; i + 1 < n; ++i)
    if (spacings[i] > threshold) starts.push_back(i + 1);
  starts.push_back(n);
  return starts;
}

EdgeMetrics edge_metrics(const Eigen::VectorXd& vec, int cell) {
  const int n = int(vec.size());
  double w = 0.0, ipr = 0.0;
  for (int q = 0; q < n; ++q) {
    const double p = vec(q) * vec(q);
    ipr += p * p;
    if (q < cell || q >= n - cell) w += p;
  }
  return {w, ipr};
}

SweepPoint solve_point(const RingGeometry& g, double t1,
                       const SweepOptions& opt, double a_s,
                       double onsite_ref) {
  SweepPoint pt;
  pt.t1 = t1;
  try {
    RingGeometry geo = g;
    geo.cell_arclengths[0] = t1;
    const auto h = build_hamiltonian(geo, a_s, opt.neighbor_cutoff);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(h.matrix);
    pt.energies = solver.eigenvalues().array() - onsite_ref;
    pt.vectors = solver.eigenvectors();
    const int cell = int(g.cell_arclengths.size());
    pt.metrics.reserve(pt.energies.size());
    for (int i = 0; i < pt.energies.size(); ++i)
      pt.metrics.push_back(edge_metrics(pt.vectors.col(i), cell));
  } catch (const std::exception& ex) {
    pt.error = ex.what();
  }
  return pt;
}

}  // namespace

SweepTable sweep(const RingGeometry& base, std::span<const double> t1_values,
                 double a_s, const SweepOptions& opt) {
  if (a_s == 0.0) throw std::invalid_argument("sweep: a_s must be nonzero");
  SweepTable table;
  table.cell_size = int(base.cell_arclengths.size());
  table.points.resize(t1_values.size());
  const double onsite_ref = onsite_energy(base.nu, base.radius);
  const int n = int(t1_values.size());
#pragma omp parallel for schedule(dynamic) if (opt.parallel)
  for (int i = 0; i < n; ++i)
    table.points[i] = solve_point(base, t1_values[i], opt, a_s, onsite_ref);
  return table;
}

double detected_center_gap(const Eigen::VectorXd& energies, double gap_factor) {
  const int n = int(energies.size());
  if (n < 3) return 0.0;
  const auto starts = cluster_starts(energies, gap_factor);
  const double mid = 0.5 * (energies(0) + energies(n - 1));
  for (size_t c = 0; c + 2 < starts.size(); ++c) {
    const double lo = energies(starts[c + 1] - 1);  // cluster top
    const double hi = energies(starts[c + 1]);      // next cluster bottom
    if (lo < mid && mid < hi) return hi - lo;
  }
  return 0.0;
}

std::vector<std::vector<StateLabel>> classify_states(
    const SweepTable& table, const ClassifyOptions& opt) {
  std::vector<std::vector<StateLabel>> labels(table.points.size());
  for (size_t p = 0; p < table.points.size(); ++p) {
    const auto& pt = table.points[p];
    if (!pt.error.empty() || pt.energies.size() < 3) continue;
    const int n = int(pt.energies.size());
    labels[p].assign(n, StateLabel::kBulk);
    const auto starts = cluster_starts(pt.energies, opt.gap_factor);
    for (size_t c = 0; c + 1 < starts.size(); ++c) {
      const int size = starts[c + 1] - starts[c];
      const bool extremal = c == 0 || c + 2 == starts.size();
      const bool in_gap = !extremal && size <= table.cell_size;
      for (int i = starts[c]; i < starts[c + 1]; ++i) {
        const bool localized = pt.metrics[i].edge_weight > opt.edge_threshold;
        if (in_gap && localized)
          labels[p][i] = StateLabel::kEdge;
        else if (in_gap || localized)
          labels[p][i] = StateLabel::kAmbiguous;
      }
    }
  }
  return labels;
}

namespace {

struct CleanReference {
  double gap_lo = 0.0, gap_hi = 0.0;
  double pair_center = 0.0;
};

CleanReference clean_reference(const Eigen::VectorXd& e, int cell_size) {
  const auto starts = cluster_starts(e, 3.0);
  CleanReference ref;
  const double mid = 0.5 * (e(0) + e(e.size() - 1));
  double best = 1e300;
  // mid cluster = small non-extremal cluster nearest the spectrum midpoint
  for (size_t c = 1; c + 2 < starts.size(); ++c) {
    const int size = starts[c + 1] - starts[c];
    if (size > cell_size) continue;
    const double center =
        0.5 * (e(starts[c]) + e(starts[c + 1] - 1));
    if (std::abs(center - mid) < best) {
      best = std::abs(center - mid);
      ref.pair_center = center;
      ref.gap_lo = e(starts[c] - 1);
      ref.gap_hi = e(starts[c + 1]);
    }
  }
  if (best == 1e300)
    throw std::runtime_error("disorder_ensemble: clean system has no mid-gap states");
  return ref;
}

}  // namespace

DisorderStats disorder_ensemble(const RingGeometry& g, const DisorderSpec& d,
                                double a_s, const SweepOptions& opt) {
  if (d.sigma < 0.0 || d.realizations < 1)
    throw std::invalid_argument("disorder_ensemble: bad spec");
  const double onsite_ref = onsite_energy(g.nu, g.radius);
  const double t1 = g.cell_arclengths[0];

  const SweepPoint clean = [&] {
    SweepOptions serial = opt;
    auto pt = solve_point(g, t1, serial, a_s, onsite_ref);
    if (!pt.error.empty()) throw std::runtime_error(pt.error);
    return pt;
  }();
  const auto ref = clean_reference(clean.energies, int(g.cell_arclengths.size()));
  const double margin = 0.05 * (ref.gap_hi - ref.gap_lo);

  DisorderStats stats;
  stats.clean_gap = ref.gap_hi - ref.gap_lo;
  stats.realizations.resize(d.realizations);

#pragma omp parallel for schedule(dynamic) if (opt.parallel)
  for (int r = 0; r < d.realizations; ++r) {
    CounterRng rng(d.master_seed, uint64_t(r) + 1);
    RingGeometry geo = g;
    auto& offsets = d.kind == DisorderSpec::Kind::kAngular
                        ? geo.angular_offsets
                        : geo.radial_offsets;
    if (offsets.empty()) offsets.assign(g.site_count, 0.0);
    for (int q = 0; q < g.site_count; ++q)
      offsets[q] += d.sigma * rng.truncated_normal(uint64_t(q));

    const auto pt = solve_point(geo, t1, opt, a_s, onsite_ref);
    RealizationStats rs;
    if (pt.error.empty()) {
      const auto& e = pt.energies;
      const int n = int(e.size());
      const double bw = e(n - 1) - e(0);
      for (int i = 0; i < n; ++i) {
        if (e(i) > ref.gap_lo + margin && e(i) < ref.gap_hi - margin)
          ++rs.in_gap_count;
        else
          rs.bulk_ipr.push_back(pt.metrics[i].ipr);
        rs.spectral_asymmetry =
            std::max(rs.spectral_asymmetry, std::abs(e(i) + e(n - 1 - i)) / bw);
      }
      // the two states nearest the clean pair center
      std::vector<int> idx(n);
      std::iota(idx.begin(), idx.end(), 0);
      std::partial_sort(idx.begin(), idx.begin() + 2, idx.end(),
                        [&](int i, int j) {
                          return std::abs(e(i) - ref.pair_center) <
                                 std::abs(e(j) - ref.pair_center);
                        });
      rs.pair_splitting = std::abs(e(idx[0]) - e(idx[1]));
      rs.pair_center = 0.5 * (e(idx[0]) + e(idx[1]));
    }
    stats.realizations[r] = std::move(rs);
  }

  double lo = 1e300, hi = -1e300;
  for (const auto& rs : stats.realizations) {
    lo = std::min(lo, rs.pair_center - 0.5 * rs.pair_splitting);
    hi = std::max(hi, rs.pair_center + 0.5 * rs.pair_splitting);
  }
  stats.edge_energy_spread = hi - lo;
  return stats;
}

}  // namespace ryd
