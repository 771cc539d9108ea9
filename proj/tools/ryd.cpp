// ryd: batch front-end. Each subcommand writes one CSV (17 significant
// digits, locale-independent) plus <out>.meta.json with the fully resolved
// configuration, seed, and wall time; rerunning the same config reproduces
// the outputs bit-identically. Exit 0 on success, 2 on configuration
// errors, 3 on numerical failures; partial outputs are removed on failure.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <optional>
#include <string>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

#include <CLI11.hpp>
#include <Eigen/Eigenvalues>
#include <json.hpp>

#include "ryd/csv.hpp"
#include "ryd/hydrogenic.hpp"
#include "ryd/manifold_oracle.hpp"
#include "ryd/spectra.hpp"
#include "ryd/topology.hpp"

using json = nlohmann::ordered_json;
using namespace ryd;

namespace {

constexpr const char* kVersion = "1.0.0";
constexpr double kTwoPi = 2.0 * M_PI;

// "1/45" or plain decimal
double parse_frac(const std::string& s) {
  if (auto pos = s.find('/'); pos != std::string::npos) {
    double num = std::stod(s.substr(0, pos));
    double den = std::stod(s.substr(pos + 1));
    if (den == 0.0) throw CLI::ValidationError("fraction has zero denominator");
    return num / den;
  }
  return std::stod(s);
}

std::vector<double> linspace(double lo, double hi, int n) {
  std::vector<double> v(n);
  for (int i = 0; i < n; ++i)
    v[i] = n > 1 ? lo + (hi - lo) * i / (n - 1) : lo;
  return v;
}

struct Run {
  std::string out;
  std::string units = "kernel";
  double a_s = kDefaultScatteringLength;
  int threads = 0;
  bool serial = false;
  bool plot = false;
  uint64_t seed = 0;
  json meta;
  std::vector<std::string> artifacts;  // removed if the run fails

  double unit_factor() const {
    return units == "MHz" ? kTwoPi * a_s * kHartreeToMHz : 1.0;
  }
  std::string etag() const { return units == "MHz" ? "_MHz" : "_kernel"; }

  CsvWriter open_csv() {
    artifacts.push_back(out);
    return CsvWriter(out);
  }
  void emit_plot(const std::string& script) {
    if (!plot) return;
    std::string path = out + ".gp";
    artifacts.push_back(path);
    std::ofstream f(path);
    f << "# gnuplot script for " << out << "\nset datafile separator ','\n"
      << script;
  }
  void finish(const std::string& cmd, double wall) {
    meta["command"] = cmd;
    meta["version"] = kVersion;
    meta["units"] = units;
    meta["a_s"] = a_s;
    meta["seed"] = seed;
    meta["wall_time_s"] = wall;
    std::ofstream f(out + ".meta.json");
    f << meta.dump(2) << "\n";
  }
  void cleanup() {
    for (const auto& p : artifacts) std::filesystem::remove(p);
  }
};

// geometry flags shared by the composite subcommands
struct GeoFlags {
  int nu = 60;
  double radius_factor = 2.0;           // R = factor * nu^2
  std::optional<double> radius_au;      // overrides the factor
  int m = 36;
  std::string model = "dimer";
  std::string t2_frac = "1/45";
  std::string t3_frac;                  // defaults to t2

  void add(CLI::App* cmd, bool with_model = true) {
    cmd->add_option("--nu", nu, "principal quantum number")->required();
    cmd->add_option("--radius-factor", radius_factor, "ring radius / nu^2");
    cmd->add_option("--radius", radius_au, "ring radius in a.u. (overrides --radius-factor)");
    cmd->add_option("--m", m, "number of scatterers");
    cmd->add_option("--t2-frac", t2_frac, "t2 as a fraction of 2 pi R (e.g. 1/45)");
    if (with_model) {
      cmd->add_option("--model", model, "dimer | trimer | triangle")
          ->check(CLI::IsMember({"dimer", "trimer", "triangle"}));
      cmd->add_option("--t3-frac", t3_frac, "t3 as a fraction of 2 pi R (3-site models; default t2)");
    }
  }

  double radius() const {
    return radius_au ? *radius_au : radius_factor * double(nu) * double(nu);
  }
  // base geometry with t1 placeholder (t1 in units of t2)
  RingGeometry geometry(double t1_over_t2) const {
    RingGeometry g;
    g.nu = nu;
    g.radius = radius();
    g.site_count = m;
    double t2 = kTwoPi * g.radius * parse_frac(t2_frac);
    double t3 = t3_frac.empty() ? t2 : kTwoPi * g.radius * parse_frac(t3_frac);
    if (model == "dimer")
      g.cell_arclengths = {t1_over_t2 * t2, t2};
    else
      g.cell_arclengths = {t1_over_t2 * t2, t2, t3};
    return g;
  }
  LatticeKind kind() const {
    if (model == "dimer") return LatticeKind::kDimer;
    if (model == "trimer") return LatticeKind::kTrimer;
    return LatticeKind::kTriangle;
  }
  void describe(json& j) const {
    j["nu"] = nu;
    j["radius_au"] = radius();
    j["radius_factor"] = radius() / (double(nu) * double(nu));
    j["m"] = m;
    j["model"] = model;
    j["t2_frac"] = parse_frac(t2_frac);
    if (!t3_frac.empty()) j["t3_frac"] = parse_frac(t3_frac);
  }
};

// ------------------------------------------------------------------ radial
int cmd_radial(Run& run, int nu, int l, double r_from, double r_to, int steps) {
  auto grid = linspace(r_from, r_to, steps);
  auto vals = radial_batch(nu, l, grid);
  auto csv = run.open_csv();
  std::vector<std::string> cols = {"r_au", "u", "du_dr"};
  csv.header(cols);
  for (int i = 0; i < steps; ++i)
    csv.row(std::vector<double>{grid[i], vals[i].u, vals[i].du});
  run.meta["nu"] = nu;
  run.meta["l"] = l;
  run.meta["r_from"] = r_from;
  run.meta["r_to"] = r_to;
  run.meta["steps"] = steps;
  run.emit_plot("plot '" + run.out + "' using 1:2 with lines title 'u'\n");
  return 0;
}

// ----------------------------------------------------------------- profile
int cmd_profile(Run& run, const GeoFlags& geo, double arc_from, double arc_to,
                int steps) {
  double R = geo.radius();
  auto fracs = linspace(arc_from, arc_to, steps);
  std::vector<double> arcs(fracs.size());
  for (size_t i = 0; i < fracs.size(); ++i) arcs[i] = kTwoPi * R * fracs[i];
  auto v = coupling_profile(geo.nu, R, arcs);
  double f = run.unit_factor();
  auto csv = run.open_csv();
  std::vector<std::string> cols = {"arc_frac", "arc_au", "V" + run.etag()};
  csv.header(cols);
  for (size_t i = 0; i < arcs.size(); ++i)
    csv.row(std::vector<double>{fracs[i], arcs[i], f * v[i]});
  geo.describe(run.meta);
  run.meta["arc_from"] = arc_from;
  run.meta["arc_to"] = arc_to;
  run.meta["steps"] = steps;
  run.emit_plot("plot '" + run.out + "' using 1:3 with lines title 'V'\n");
  return 0;
}

// ------------------------------------------------------------------- sweep
int cmd_sweep(Run& run, const GeoFlags& geo, double t1_from, double t1_to,
              int steps, std::optional<int> cutoff) {
  RingGeometry base = geo.geometry(t1_from);
  double t2 = base.cell_arclengths[1];
  auto ratios = linspace(t1_from, t1_to, steps);
  std::vector<double> t1(ratios.size());
  for (size_t i = 0; i < t1.size(); ++i) t1[i] = ratios[i] * t2;
  SweepOptions opt{cutoff, !run.serial};
  auto table = sweep(base, t1, run.a_s, opt);
  double f = run.unit_factor();
  auto csv = run.open_csv();
  std::vector<std::string> cols = {"t1_over_t2"};
  for (int q = 0; q < geo.m; ++q) cols.push_back("E" + std::to_string(q) + run.etag());
  for (int q = 0; q < geo.m; ++q) cols.push_back("w" + std::to_string(q));
  csv.header(cols);
  int failed = 0;
  for (size_t i = 0; i < table.points.size(); ++i) {
    const auto& p = table.points[i];
    std::vector<double> row = {ratios[i]};
    if (p.error.empty()) {
      for (int q = 0; q < geo.m; ++q) row.push_back(f * p.energies(q));
      for (int q = 0; q < geo.m; ++q) row.push_back(p.metrics[q].edge_weight);
    } else {
      ++failed;
      row.resize(1 + 2 * geo.m, std::nan(""));
    }
    csv.row(row);
  }
  geo.describe(run.meta);
  run.meta["t1_from"] = t1_from;
  run.meta["t1_to"] = t1_to;
  run.meta["steps"] = steps;
  if (cutoff) run.meta["neighbor_cutoff"] = *cutoff;
  run.meta["failed_points"] = failed;
  run.emit_plot("plot for [q=2:" + std::to_string(1 + geo.m) + "] '" + run.out +
                "' using 1:q with lines notitle\n");
  return 0;
}

// --------------------------------------------------------------------- zak
int cmd_zak(Run& run, const GeoFlags& geo, double t1_from, double t1_to,
            int steps, int n_k) {
  KMesh mesh{n_k};
  auto ratios = linspace(t1_from, t1_to, steps);
  auto csv = run.open_csv();
  bool three = geo.model != "dimer";
  std::vector<std::string> cols = {"t1_over_t2", "zak_gap1", "min_gap1" + run.etag()};
  if (three) {
    cols.push_back("zak_gap2");
    cols.push_back("min_gap2" + run.etag());
  }
  csv.header(cols);
  double f = run.unit_factor();
  for (double r : ratios) {
    auto spec = extract_chain_spec(geo.geometry(r), geo.kind());
    auto model = bloch_model(spec);
    std::vector<double> row = {r};
    for (int gap = 1; gap <= (three ? 2 : 1); ++gap) {
      std::vector<int> bands(gap);
      for (int b = 0; b < gap; ++b) bands[b] = b;
      double z;
      try {
        z = zak_phase(model, bands, mesh);
      } catch (const GapCollapseError&) {
        z = std::nan("");  // critical point inside the scan
      }
      row.push_back(z);
      row.push_back(f * min_gap(model, gap, mesh));
    }
    csv.row(row);
  }
  geo.describe(run.meta);
  run.meta["t1_from"] = t1_from;
  run.meta["t1_to"] = t1_to;
  run.meta["steps"] = steps;
  run.meta["n_k"] = n_k;
  run.emit_plot("plot '" + run.out + "' using 1:2 with points title 'Zak'\n");
  return 0;
}

// ---------------------------------------------------------- phase-diagram
int cmd_phase_diagram(Run& run, double u, double c, double a_from, double a_to,
                      int a_steps, double b_from, double b_to, int b_steps,
                      const std::string& gap, int n_k, double critical_gap) {
  auto a_grid = linspace(a_from, a_to, a_steps);
  auto b_grid = linspace(b_from, b_to, b_steps);
  auto sel = gap == "upper" ? GapSelector::kUpper : GapSelector::kLower;
  auto pd = phase_diagram(u, c, a_grid, b_grid, sel, KMesh{n_k}, !run.serial,
                          critical_gap);
  auto csv = run.open_csv();
  std::vector<std::string> cols = {"a", "b", "zak_sum", "defect", "critical"};
  csv.header(cols);
  int n_critical = 0;
  for (int ia = 0; ia < a_steps; ++ia)
    for (int ib = 0; ib < b_steps; ++ib) {
      const auto& cell = pd.at(ia, ib);
      n_critical += cell.critical;
      csv.row(std::vector<double>{a_grid[ia], b_grid[ib],
                                  cell.critical ? std::nan("") : cell.below_gap_sum,
                                  cell.defect, double(cell.critical)});
    }
  run.meta["u"] = u;
  run.meta["c"] = c;
  run.meta["a_from"] = a_from;
  run.meta["a_to"] = a_to;
  run.meta["a_steps"] = a_steps;
  run.meta["b_from"] = b_from;
  run.meta["b_to"] = b_to;
  run.meta["b_steps"] = b_steps;
  run.meta["gap"] = gap;
  run.meta["n_k"] = n_k;
  run.meta["critical_gap"] = critical_gap;
  run.meta["critical_cells"] = n_critical;
  run.emit_plot("set view map\nsplot '" + run.out +
                "' using 1:2:3 with points pt 5 palette notitle\n");
  return 0;
}

// ------------------------------------------------------------- design-ring
int cmd_design_ring(Run& run, int nu, int n, const std::string& angle_frac,
                    double r_from, double r_to, const std::string& mode_name) {
  double nu2 = double(nu) * double(nu);
  double step = kTwoPi * parse_frac(angle_frac);
  auto mode = mode_name == "ls" ? DesignMode::kLeastSquares : DesignMode::kExactRoot;
  auto res = design_ring(nu, step, n, r_from * nu2, r_to * nu2, mode);
  auto csv = run.open_csv();
  std::vector<std::string> cols = {"radius_factor", "residual", "arc_step_frac"};
  csv.header(cols);
  csv.row(std::vector<double>{res.radius / nu2, res.residual,
                              res.arc_step ? *res.arc_step / (kTwoPi * res.radius)
                                           : std::nan("")});
  std::printf("R/nu^2 = %.4f (residual %.3e)\n", res.radius / nu2, res.residual);
  run.meta["nu"] = nu;
  run.meta["n"] = n;
  run.meta["angle_frac"] = parse_frac(angle_frac);
  run.meta["r_from"] = r_from;
  run.meta["r_to"] = r_to;
  run.meta["mode"] = mode_name;
  run.meta["radius_factor"] = res.radius / nu2;
  run.meta["residual"] = res.residual;
  json roots = json::array();
  for (double r : res.all_roots) roots.push_back(r / nu2);
  run.meta["all_roots_factor"] = roots;
  return 0;
}

// ---------------------------------------------------------------- disorder
int cmd_disorder(Run& run, const GeoFlags& geo, double t1, const std::string& kind,
                 double sigma, int realizations) {
  RingGeometry g = geo.geometry(t1);
  DisorderSpec d;
  d.kind = kind == "radial" ? DisorderSpec::Kind::kRadial
                            : DisorderSpec::Kind::kAngular;
  d.sigma = sigma;
  d.realizations = realizations;
  d.master_seed = run.seed;
  SweepOptions opt{{}, !run.serial};
  auto stats = disorder_ensemble(g, d, run.a_s, opt);
  double f = run.unit_factor();
  auto csv = run.open_csv();
  std::vector<std::string> cols = {"realization", "in_gap_count",
                                   "pair_splitting" + run.etag(),
                                   "pair_center" + run.etag(),
                                   "spectral_asymmetry", "mean_bulk_ipr"};
  csv.header(cols);
  for (size_t r = 0; r < stats.realizations.size(); ++r) {
    const auto& s = stats.realizations[r];
    double ipr = 0.0;
    for (double x : s.bulk_ipr) ipr += x;
    if (!s.bulk_ipr.empty()) ipr /= double(s.bulk_ipr.size());
    csv.row(std::vector<double>{double(r), double(s.in_gap_count),
                                f * s.pair_splitting, f * s.pair_center,
                                s.spectral_asymmetry, ipr});
  }
  geo.describe(run.meta);
  run.meta["t1_over_t2"] = t1;
  run.meta["kind"] = kind;
  run.meta["sigma"] = sigma;
  run.meta["realizations"] = realizations;
  run.meta["clean_gap" + run.etag()] = f * stats.clean_gap;
  run.meta["edge_energy_spread" + run.etag()] = f * stats.edge_energy_spread;
  run.emit_plot("plot '" + run.out + "' using 1:3 with points title 'pair splitting'\n");
  return 0;
}

// ---------------------------------------------------------- oracle-compare
int cmd_oracle_compare(Run& run, const GeoFlags& geo) {
  RingGeometry g = geo.geometry(1.0);
  g.cell_arclengths = {g.cell_arclengths[1]};  // uniform ring
  auto oracle = manifold_matrix(g);
  auto kernel = build_hamiltonian(g, run.a_s);
  double dev = spectral_compare(oracle.s, kernel.matrix);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eo(kTwoPi * oracle.s);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> ek(kernel.matrix);
  auto csv = run.open_csv();
  std::vector<std::string> cols = {"index", "oracle_2pi_s_kernel", "closed_form_kernel"};
  csv.header(cols);
  for (int q = 0; q < geo.m; ++q)
    csv.row(std::vector<double>{double(q), eo.eigenvalues()(q), ek.eigenvalues()(q)});
  std::printf("max relative spectral deviation: %.3e\n", dev);
  geo.describe(run.meta);
  run.meta["spectral_deviation"] = dev;
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Rydberg-composite ring tight-binding toolkit"};
  app.set_config("--config", "", "read options from an INI/TOML file");
  app.require_subcommand(1);

  Run run;
  auto add_common = [&run](CLI::App* cmd, bool with_seed = false) {
    cmd->add_option("--out", run.out, "output CSV path")->required();
    cmd->add_option("--units", run.units, "energy units: kernel | MHz")
        ->check(CLI::IsMember({"kernel", "MHz"}));
    cmd->add_option("--a-s", run.a_s, "s-wave scattering length (a.u.)");
    cmd->add_option("--threads", run.threads, "OpenMP thread count (0 = default)");
    cmd->add_flag("--serial", run.serial, "use the serial reference path");
    cmd->add_flag("--plot", run.plot, "also emit a gnuplot script <out>.gp");
    if (with_seed) cmd->add_option("--seed", run.seed, "master RNG seed");
  };

  // radial
  int nu = 60, l = 0, steps = 101, n_k = 256;
  double r_from = 1.0, r_to = 2.0;
  auto* c_radial = app.add_subcommand("radial", "dump u_nul(r) and du/dr on a grid");
  c_radial->add_option("--nu", nu)->required();
  c_radial->add_option("--l", l);
  c_radial->add_option("--r-from", r_from, "a.u.")->required();
  c_radial->add_option("--r-to", r_to, "a.u.")->required();
  c_radial->add_option("--steps", steps);
  add_common(c_radial);

  // profile
  GeoFlags geo;
  double arc_from = 0.01, arc_to = 0.5;
  auto* c_profile = app.add_subcommand("profile", "coupling V vs arclength separation");
  geo.add(c_profile, false);
  c_profile->add_option("--arc-from", arc_from, "fraction of 2 pi R");
  c_profile->add_option("--arc-to", arc_to, "fraction of 2 pi R");
  c_profile->add_option("--steps", steps);
  add_common(c_profile);

  // sweep
  double t1_from = 0.75, t1_to = 1.25;
  std::optional<int> cutoff;
  auto* c_sweep = app.add_subcommand("sweep", "finite-composite spectra vs t1");
  geo.add(c_sweep);
  c_sweep->add_option("--t1-from", t1_from, "t1 in units of t2")->required();
  c_sweep->add_option("--t1-to", t1_to, "t1 in units of t2")->required();
  c_sweep->add_option("--steps", steps);
  c_sweep->add_option("--neighbor-cutoff", cutoff, "truncate hoppings beyond this range");
  add_common(c_sweep);

  // zak
  auto* c_zak = app.add_subcommand("zak", "Zak phases and gaps of the effective chain vs t1");
  geo.add(c_zak);
  c_zak->add_option("--t1-from", t1_from, "t1 in units of t2")->required();
  c_zak->add_option("--t1-to", t1_to, "t1 in units of t2")->required();
  c_zak->add_option("--steps", steps);
  c_zak->add_option("--nk", n_k, "k-mesh size");
  add_common(c_zak);

  // phase-diagram
  double u = -0.25, cc = 0.0, a_from = 0.0, a_to = 1.0, b_from = 0.0, b_to = 1.0;
  int a_steps = 41, b_steps = 41;
  double critical_gap = 1e-3;
  std::string gap = "lower";
  auto* c_pd = app.add_subcommand("phase-diagram", "triangle-family Zak phase over an (a, b) grid");
  c_pd->add_option("--u", u)->required();
  c_pd->add_option("--c", cc);
  c_pd->add_option("--a-from", a_from)->required();
  c_pd->add_option("--a-to", a_to)->required();
  c_pd->add_option("--a-steps", a_steps);
  c_pd->add_option("--b-from", b_from)->required();
  c_pd->add_option("--b-to", b_to)->required();
  c_pd->add_option("--b-steps", b_steps);
  c_pd->add_option("--gap", gap)->check(CLI::IsMember({"lower", "upper"}));
  c_pd->add_option("--nk", n_k, "k-mesh size");
  c_pd->add_option("--critical-gap", critical_gap);
  add_common(c_pd);

  // design-ring
  int n_design = 2;
  std::string angle_frac = "1/45", mode_name = "root";
  double dr_from = 1.5, dr_to = 2.0;
  auto* c_design = app.add_subcommand("design-ring", "radius with equal couplings V(t)=...=V(nt)");
  c_design->add_option("--nu", nu)->required();
  c_design->add_option("--n", n_design, "couplings to equalize");
  c_design->add_option("--angle-frac", angle_frac, "t step as a fraction of 2 pi R")->required();
  c_design->add_option("--r-from", dr_from, "in units of nu^2")->required();
  c_design->add_option("--r-to", dr_to, "in units of nu^2")->required();
  c_design->add_option("--mode", mode_name)->check(CLI::IsMember({"root", "ls"}));
  add_common(c_design);

  // disorder
  double t1_ratio = 1.25, sigma = 1e-3;
  int realizations = 100;
  std::string kind = "angular";
  auto* c_dis = app.add_subcommand("disorder", "disorder ensemble statistics");
  geo.add(c_dis);
  c_dis->add_option("--t1", t1_ratio, "t1 in units of t2")->required();
  c_dis->add_option("--kind", kind)->check(CLI::IsMember({"angular", "radial"}));
  c_dis->add_option("--sigma", sigma, "radians (angular) or a.u. (radial)")->required();
  c_dis->add_option("--realizations", realizations);
  add_common(c_dis, true);

  // oracle-compare
  auto* c_oracle = app.add_subcommand("oracle-compare",
                                      "closed-form kernel vs angular-momentum-sum oracle");
  geo.add(c_oracle, false);
  add_common(c_oracle);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

#ifdef _OPENMP
  if (run.threads > 0) omp_set_num_threads(run.threads);
#endif

  auto* cmd = app.get_subcommands().front();
  auto t0 = std::chrono::steady_clock::now();
  try {
    if (cmd == c_radial) cmd_radial(run, nu, l, r_from, r_to, steps);
    else if (cmd == c_profile) cmd_profile(run, geo, arc_from, arc_to, steps);
    else if (cmd == c_sweep) cmd_sweep(run, geo, t1_from, t1_to, steps, cutoff);
    else if (cmd == c_zak) cmd_zak(run, geo, t1_from, t1_to, steps, n_k);
    else if (cmd == c_pd)
      cmd_phase_diagram(run, u, cc, a_from, a_to, a_steps, b_from, b_to,
                        b_steps, gap, n_k, critical_gap);
    else if (cmd == c_design)
      cmd_design_ring(run, nu, n_design, angle_frac, dr_from, dr_to, mode_name);
    else if (cmd == c_dis)
      cmd_disorder(run, geo, t1_ratio, kind, sigma, realizations);
    else if (cmd == c_oracle) cmd_oracle_compare(run, geo);
  } catch (const std::invalid_argument& e) {
    run.cleanup();
    std::fprintf(stderr, "configuration error: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    run.cleanup();
    std::fprintf(stderr, "numerical failure: %s\n", e.what());
    return 3;
  }
  double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  run.finish(cmd->get_name(), wall);
  return 0;
}
