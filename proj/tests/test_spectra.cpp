#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "ryd/spectra.hpp"

using namespace ryd;
namespace {
constexpr double kPi = std::numbers::pi;

RingGeometry dimer_ring(int nu, double radius_factor, int m, double t1_mult) {
  RingGeometry g;
  g.nu = nu;
  g.radius = radius_factor * double(nu) * nu;
  g.site_count = m;
  double t2 = 2.0 * kPi * g.radius / 45.0;
  g.cell_arclengths = {t1_mult * t2, t2};
  return g;
}
}  // namespace

TEST_CASE("dimerized ring shows a gap with a localized mid-gap pair") {
  auto g = dimer_ring(60, 2.0, 36, 1.25);
  std::vector<double> t1 = {g.cell_arclengths[0]};
  auto table = sweep(g, t1, kDefaultScatteringLength);
  REQUIRE(table.points.size() == 1);
  const auto& pt = table.points[0];
  REQUIRE(pt.error.empty());
  REQUIRE(pt.energies.size() == 36);
  // energies are onsite-subtracted: spectrum straddles zero
  CHECK(pt.energies(0) < 0.0);
  CHECK(pt.energies(35) > 0.0);
  auto labels = classify_states(table);
  int n_edge = 0;
  double max_w = 0.0;
  for (int i = 0; i < 36; ++i)
    if (labels[0][i] == StateLabel::kEdge) {
      ++n_edge;
      max_w = std::max(max_w, pt.metrics[i].edge_weight);
    }
  CHECK(n_edge == 2);
  CHECK(max_w > 0.8);
  // the pair is nearly degenerate relative to the bandwidth
  double bw = pt.energies(35) - pt.energies(0);
  int mid = 17;  // two mid-gap states at indices 17, 18 of 36
  CHECK(std::abs(pt.energies(mid + 1) - pt.energies(mid)) < 1e-3 * bw);
}

TEST_CASE("uniform ring has no detected central gap and no edge states") {
  auto g = dimer_ring(60, 2.0, 36, 1.0);
  std::vector<double> t1 = {g.cell_arclengths[0]};
  auto table = sweep(g, t1, kDefaultScatteringLength);
  const auto& pt = table.points[0];
  double bw = pt.energies(35) - pt.energies(0);
  CHECK(detected_center_gap(pt.energies) < 0.02 * bw);
  auto labels = classify_states(table);
  for (int i = 0; i < 36; ++i) CHECK(labels[0][i] != StateLabel::kEdge);
}

TEST_CASE("sweep is deterministic and the parallel path matches serial") {
  auto g = dimer_ring(60, 2.0, 24, 1.0);
  std::vector<double> t1;
  double t2 = g.cell_arclengths[1];
  for (int i = 0; i < 8; ++i) t1.push_back((0.8 + 0.05 * i) * t2);
  SweepOptions par, ser;
  par.parallel = true;
  ser.parallel = false;
  auto a = sweep(g, t1, -16.05, par);
  auto b = sweep(g, t1, -16.05, ser);
  REQUIRE(a.points.size() == b.points.size());
  for (size_t i = 0; i < a.points.size(); ++i) {
    CHECK(a.points[i].energies == b.points[i].energies);  // bit-identical
    CHECK(a.points[i].vectors == b.points[i].vectors);
  }
}

TEST_CASE("sweep records per-point failures without aborting") {
  auto g = dimer_ring(60, 2.0, 24, 1.0);
  double t2 = g.cell_arclengths[1];
  std::vector<double> t1 = {0.9 * t2, -1.0, 1.1 * t2};  // middle one invalid
  auto table = sweep(g, t1, -16.05);
  REQUIRE(table.points.size() == 3);
  CHECK(table.points[0].error.empty());
  CHECK(!table.points[1].error.empty());
  CHECK(table.points[2].error.empty());
}

TEST_CASE("nearest-neighbor truncation keeps the spectrum chiral") {
  auto g = dimer_ring(60, 2.0, 36, 1.25);
  std::vector<double> t1 = {g.cell_arclengths[0]};
  SweepOptions opt;
  opt.neighbor_cutoff = 1;
  auto table = sweep(g, t1, -16.05, opt);
  const auto& e = table.points[0].energies;
  for (int i = 0; i < 36; ++i)
    CHECK(e(i) == doctest::Approx(-e(35 - i)).epsilon(1e-9));
}

TEST_CASE("trimer ring opens two gaps with edge states in each") {
  RingGeometry g;
  g.nu = 60;
  g.radius = 2.0 * 3600.0;
  g.site_count = 36;
  double t2 = 2.0 * kPi * g.radius / 45.0;
  // short (strong) intercell bond t1: both gaps host localized end states
  g.cell_arclengths = {0.6 * t2, t2, t2};
  std::vector<double> t1 = {g.cell_arclengths[0]};
  auto table = sweep(g, t1, -16.05);
  REQUIRE(table.points[0].error.empty());
  auto labels = classify_states(table);
  const auto& e = table.points[0].energies;
  int edge_lo = 0, edge_hi = 0;
  double median = 0.5 * (e(17) + e(18));
  for (int i = 0; i < 36; ++i)
    if (labels[0][i] == StateLabel::kEdge) {
      (e(i) < median ? edge_lo : edge_hi)++;
    }
  CHECK(edge_lo >= 1);
  CHECK(edge_hi >= 1);
}

TEST_CASE("disorder ensemble is deterministic in the master seed") {
  auto g = dimer_ring(60, 2.0, 24, 1.25);
  DisorderSpec d;
  d.kind = DisorderSpec::Kind::kAngular;
  d.sigma = 1e-3;
  d.realizations = 6;
  d.master_seed = 42;
  auto s1 = disorder_ensemble(g, d, -16.05);
  auto s2 = disorder_ensemble(g, d, -16.05);
  REQUIRE(s1.realizations.size() == 6);
  for (int r = 0; r < 6; ++r) {
    CHECK(s1.realizations[r].pair_splitting ==
          s2.realizations[r].pair_splitting);
    CHECK(s1.realizations[r].pair_center == s2.realizations[r].pair_center);
  }
  d.master_seed = 43;
  auto s3 = disorder_ensemble(g, d, -16.05);
  bool any_diff = false;
  for (int r = 0; r < 6; ++r)
    if (s3.realizations[r].pair_center != s1.realizations[r].pair_center)
      any_diff = true;
  CHECK(any_diff);
}

TEST_CASE("zero disorder reproduces the clean system exactly") {
  auto g = dimer_ring(60, 2.0, 24, 1.25);
  DisorderSpec d;
  d.sigma = 0.0;
  d.realizations = 3;
  d.master_seed = 7;
  auto s = disorder_ensemble(g, d, -16.05);
  // identical realizations: the spread collapses to the clean pair splitting
  CHECK(s.edge_energy_spread == s.realizations[0].pair_splitting);
  for (const auto& r : s.realizations) {
    CHECK(r.pair_splitting == s.realizations[0].pair_splitting);
    CHECK(r.spectral_asymmetry == s.realizations[0].spectral_asymmetry);
  }
}

TEST_CASE("angular disorder preserves chiral symmetry, radial breaks it") {
  auto g = dimer_ring(60, 2.0, 24, 1.25);
  SweepOptions opt;
  opt.neighbor_cutoff = 1;  // chiral symmetry is exact only without NNN terms
  DisorderSpec d;
  d.sigma = 2e-3;
  d.realizations = 4;
  d.master_seed = 5;
  d.kind = DisorderSpec::Kind::kAngular;
  auto ang = disorder_ensemble(g, d, -16.05, opt);
  for (const auto& r : ang.realizations)
    CHECK(r.spectral_asymmetry < 1e-10);
  d.kind = DisorderSpec::Kind::kRadial;
  d.sigma = 0.5;
  auto rad = disorder_ensemble(g, d, -16.05, opt);
  bool any_broken = false;
  for (const auto& r : rad.realizations)
    if (r.spectral_asymmetry > 1e-8) any_broken = true;
  CHECK(any_broken);
}
