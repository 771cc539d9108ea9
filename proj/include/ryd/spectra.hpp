#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ryd/composite.hpp"

// Finite-system parameter sweeps, edge-state detection, and disorder
// ensembles. All energies are in kernel units relative to the common
// on-site energy of the clean ring.

namespace ryd {

struct EdgeMetrics {
  double edge_weight;  // probability mass on the first plus last unit cell
  double ipr;          // sum |c_q|^4
};

struct SweepPoint {
  double t1 = 0.0;
  Eigen::VectorXd energies;       // ascending, on-site subtracted
  Eigen::MatrixXd vectors;        // columns match energies
  std::vector<EdgeMetrics> metrics;
  std::string error;              // nonempty if this point failed
};

struct SweepTable {
  std::vector<SweepPoint> points;
  int cell_size = 2;
};

struct SweepOptions {
  std::optional<int> neighbor_cutoff;
  bool parallel = true;
};

// Diagonalizes the composite for each t1 (the geometry's first arclength),
// keeping the other arclengths fixed. Failed points carry an error message
// and the sweep continues.
SweepTable sweep(const RingGeometry& base, std::span<const double> t1_values,
                 double a_s, const SweepOptions& opt = {});

enum class StateLabel { kBulk, kEdge, kAmbiguous };

struct ClassifyOptions {
  double gap_factor = 3.0;       // gap = spacing wider than this x median
  double edge_threshold = 0.6;
};

// Labels each state of each sweep point. A state is an edge state iff it
// lies in a detected spectral gap (not in the outermost level clusters) and
// its edge weight exceeds the threshold; one condition alone -> ambiguous.
std::vector<std::vector<StateLabel>> classify_states(
    const SweepTable& table, const ClassifyOptions& opt = {});

// Width of the detected gap containing the spectrum midpoint, or 0 if the
// center spacing does not qualify as a gap under the 3 x median rule.
double detected_center_gap(const Eigen::VectorXd& energies,
                           double gap_factor = 3.0);

struct DisorderSpec {
  enum class Kind { kAngular, kRadial };
  Kind kind = Kind::kAngular;
  double sigma = 0.0;     // radians (angular) or a.u. (radial)
  int realizations = 1;
  uint64_t master_seed = 0;
};

struct RealizationStats {
  int in_gap_count = 0;
  double pair_splitting = 0.0;     // |E_+ - E_-| of the two mid states
  double pair_center = 0.0;
  double spectral_asymmetry = 0.0; // max |E_i + E_{N+1-i}| / bandwidth
  std::vector<double> bulk_ipr;
};

struct DisorderStats {
  std::vector<RealizationStats> realizations;
  double clean_gap = 0.0;          // detected center gap of the clean system
  double edge_energy_spread = 0.0; // total spread of the pair energies across realizations
};

// Deterministic: realization r draws offsets from the (master_seed, r)
// Philox substream, so results are bit-identical for a given seed
// independent of thread count.
DisorderStats disorder_ensemble(const RingGeometry& g, const DisorderSpec& d,
                                double a_s, const SweepOptions& opt = {});

}  // namespace ryd
