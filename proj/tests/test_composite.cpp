#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "ryd/composite.hpp"

using namespace ryd;
namespace {
constexpr double kPi = std::numbers::pi;

RingGeometry uniform_ring(int nu, double radius, int m) {
  RingGeometry g;
  g.nu = nu;
  g.radius = radius;
  g.site_count = m;
  g.cell_arclengths = {2.0 * kPi * radius / m};
  return g;
}
}  // namespace

TEST_CASE("ring positions follow the gap cycle") {
  RingGeometry g;
  g.nu = 60;
  g.radius = 7200.0;
  g.site_count = 4;
  g.cell_arclengths = {10.0, 20.0};  // dimer: gaps t1,t2,t1
  auto pos = ring_positions(g);
  REQUIRE(pos.size() == 4);
  CHECK(pos[0].angle == doctest::Approx(0.0));
  CHECK(pos[1].angle == doctest::Approx(10.0 / 7200.0));
  CHECK(pos[2].angle == doctest::Approx(30.0 / 7200.0));
  CHECK(pos[3].angle == doctest::Approx(40.0 / 7200.0));

  g.site_count = 6;
  g.cell_arclengths = {30.0, 10.0, 20.0};  // trimer: gaps t2,t3,t1,t2,t3
  pos = ring_positions(g);
  std::vector<double> arcs = {10.0, 20.0, 30.0, 10.0, 20.0};
  double s = 0.0;
  for (int q = 1; q < 6; ++q) {
    s += arcs[q - 1];
    CHECK(pos[q].angle == doctest::Approx(s / 7200.0));
  }
}

TEST_CASE("pair coupling matches the nu = 1 closed form") {
  // u_10 = 2 r e^-r. R_q = R_p = 2, chord = 2 -> x- = 1, x+ = 3, and
  // u'(1) = 0 kills the first term: V = -u(1) u'(3) / 4 = 2 e^-4.
  CHECK(pair_coupling(1, 2.0, 2.0, 2.0) ==
        doctest::Approx(2.0 * std::exp(-4.0)).epsilon(1e-13));
}

TEST_CASE("pair coupling is symmetric in the two radii") {
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> rad(3000.0, 4000.0);
  for (int i = 0; i < 20; ++i) {
    double a = rad(rng), b = rad(rng);
    CHECK(pair_coupling(60, a, b, 150.0) == pair_coupling(60, b, a, 150.0));
  }
}

TEST_CASE("antipodal sites (x_- = 0) evaluate finitely") {
  double v = pair_coupling(60, 3600.0, 3600.0, 7200.0);
  CHECK(std::isfinite(v));
}

TEST_CASE("onsite energy closed forms and chord -> 0 limit") {
  // nu = 1: E(R) = [u'(R)^2 - (1 - 2/R) u(R)^2] / 2 with u = 2 r e^-r.
  auto e1 = [](double R) {
    double u = 2.0 * R * std::exp(-R), du = 2.0 * (1.0 - R) * std::exp(-R);
    return 0.5 * (du * du - (1.0 - 2.0 / R) * u * u);
  };
  CHECK(onsite_energy(1, 1.0) == doctest::Approx(e1(1.0)).epsilon(1e-13));
  CHECK(onsite_energy(1, 2.0) == doctest::Approx(e1(2.0)).epsilon(1e-13));
  CHECK(onsite_energy(1, 2.0) ==
        doctest::Approx(2.0 * std::exp(-4.0)).epsilon(1e-13));
  // small-chord coupling approaches the onsite value
  double R = 2.0 * 60 * 60;
  CHECK(pair_coupling(60, R, R, 1e-4) ==
        doctest::Approx(onsite_energy(60, R)).epsilon(1e-6));
}

TEST_CASE("coupling profile oscillates at the design radius and not at 2 nu^2") {
  int nu = 60;
  double nu2 = double(nu) * nu;
  std::vector<double> arcs;
  for (int i = 0; i < 60; ++i)
    arcs.push_back((2.0 * kPi / 90.0 + i * (2.0 * kPi / 90.0) / 59.0) * 2.0 *
                   nu2);
  auto prof = coupling_profile(nu, 2.0 * nu2, arcs);
  // |V| monotonically decreasing, no sign change, in this window at R = 2nu^2
  int sign_changes = 0;
  bool monotone = true;
  for (size_t i = 1; i < prof.size(); ++i) {
    if (prof[i] * prof[i - 1] < 0.0) ++sign_changes;
    if (std::abs(prof[i]) > std::abs(prof[i - 1])) monotone = false;
  }
  CHECK(sign_changes == 0);
  CHECK(monotone);
  // same window at R = 1.7407 nu^2 (inside the classically allowed shell
  // boundary structure): the kernel oscillates
  std::vector<double> arcs2;
  for (int i = 0; i < 60; ++i)
    arcs2.push_back((2.0 * kPi / 90.0 + i * (4.0 * kPi / 15.0) / 59.0) *
                    1.7407 * nu2);
  auto prof2 = coupling_profile(nu, 1.7407 * nu2, arcs2);
  int sc2 = 0;
  for (size_t i = 1; i < prof2.size(); ++i)
    if (prof2[i] * prof2[i - 1] < 0.0) ++sc2;
  CHECK(sc2 >= 2);
}

TEST_CASE("hamiltonian symmetry, cutoff, and decay") {
  auto g = uniform_ring(60, 2.0 * 3600.0, 36);
  auto h = build_hamiltonian(g, kDefaultScatteringLength);
  REQUIRE(h.matrix.rows() == 36);
  CHECK(h.scale == doctest::Approx(2.0 * kPi * kDefaultScatteringLength));
  // exactly symmetric (assembled once per pair)
  CHECK((h.matrix - h.matrix.transpose()).cwiseAbs().maxCoeff() == 0.0);
  // next-nearest coupling is a small fraction of nearest
  double worst = 0.0;
  for (int q = 0; q + 2 < 36; ++q) {
    double nn = std::abs(h.matrix(q, q + 1));
    double nnn = std::abs(h.matrix(q, q + 2));
    worst = std::max(worst, nnn / nn);
  }
  CHECK(worst < 0.05);
  // cutoff = 1 keeps only chain-adjacent bonds
  auto h1 = build_hamiltonian(g, kDefaultScatteringLength, 1);
  for (int q = 0; q < 36; ++q)
    for (int p = 0; p < 36; ++p) {
      if (std::abs(q - p) > 1)
        CHECK(h1.matrix(q, p) == 0.0);
      else
        CHECK(h1.matrix(q, p) == h.matrix(q, p));
    }
}

TEST_CASE("palindromic gap pattern gives reflection-symmetric hamiltonian") {
  RingGeometry g;
  g.nu = 60;
  g.radius = 2.0 * 3600.0;
  g.site_count = 12;
  double t2 = 2.0 * kPi * g.radius / 45.0;
  g.cell_arclengths = {1.25 * t2, t2};
  auto h = build_hamiltonian(g, -16.05).matrix;
  // reversal permutation q -> M-1-q maps the broken ring onto itself
  int m = 12;
  for (int q = 0; q < m; ++q)
    for (int p = 0; p < m; ++p)
      CHECK(h(q, p) ==
            doctest::Approx(h(m - 1 - q, m - 1 - p)).epsilon(1e-14));
}

TEST_CASE("chord formula") {
  SitePosition a{10.0, 0.3}, b{10.0, 1.1};
  CHECK(site_chord(a, b) ==
        doctest::Approx(2.0 * 10.0 * std::sin(0.4)).epsilon(1e-15));
  SitePosition c{3.0, 0.0}, d{4.0, kPi};
  CHECK(site_chord(c, d) == doctest::Approx(7.0).epsilon(1e-15));
}

TEST_CASE("geometry validation") {
  auto g = uniform_ring(60, 7200.0, 36);
  CHECK(g.validate().empty());
  // M < nu draws a warning, not an error
  auto g2 = uniform_ring(60, 7200.0, 80);
  CHECK(!g2.validate().empty());
  // arclengths must fit on the (broken) ring
  RingGeometry bad = uniform_ring(60, 100.0, 36);
  bad.cell_arclengths = {2.0 * kPi * 100.0 / 20.0};  // 35 gaps, 20 fit
  CHECK_THROWS_AS((void)bad.validate(), std::invalid_argument);
  RingGeometry neg = uniform_ring(60, 7200.0, 36);
  neg.cell_arclengths = {-1.0, 5.0};
  CHECK_THROWS_AS((void)neg.validate(), std::invalid_argument);
  // coincident scatterers rejected at build time
  RingGeometry coincident = uniform_ring(60, 7200.0, 4);
  coincident.angular_offsets = {0.0, -coincident.cell_arclengths[0] / 7200.0,
                                0.0, 0.0};
  CHECK_THROWS_AS((void)build_hamiltonian(coincident, -16.05),
                  std::invalid_argument);
}

TEST_CASE("design ring finds the equal-coupling radius near 1.741 nu^2") {
  int nu = 60;
  double nu2 = double(nu) * nu;
  auto res = design_ring(nu, 2.0 * kPi / 45.0, 2, 1.5 * nu2, 2.0 * nu2,
                         DesignMode::kExactRoot);
  CHECK(res.radius / nu2 == doctest::Approx(1.74070).epsilon(2e-4));
  CHECK(res.all_roots.size() >= 4);
  // the residual really is a root of V(t2) - V(2 t2)
  double t2 = 2.0 * kPi / 45.0 * res.radius;
  double v1 = pair_coupling(nu, res.radius, res.radius,
                            2.0 * res.radius * std::sin(t2 / res.radius / 2.0));
  double v2 = pair_coupling(
      nu, res.radius, res.radius,
      2.0 * res.radius * std::sin(t2 / res.radius));
  CHECK(std::abs(v1 - v2) < 1e-5 * std::abs(v1));
}

TEST_CASE("design ring reports when no root exists in the window") {
  int nu = 60;
  double nu2 = double(nu) * nu;
  CHECK_THROWS_AS((void)design_ring(nu, 2.0 * kPi / 45.0, 2, 1.91 * nu2,
                                    2.0 * nu2, DesignMode::kExactRoot),
                  NoRootError);
}

TEST_CASE("least-squares design flattens a 4-coupling profile") {
  int nu = 60;
  double nu2 = double(nu) * nu;
  auto res = design_ring(nu, 2.0 * kPi / 45.0, 4, 1.0 * nu2, 1.74 * nu2,
                         DesignMode::kLeastSquares);
  CHECK(res.arc_step.has_value());
  CHECK(res.residual < 0.05);  // relative spread of the four couplings
}
