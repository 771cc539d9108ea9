#include "ryd/lattices.hpp"

#include <cmath>
#include <complex>
#include <stdexcept>

namespace ryd {

using std::complex;
using namespace std::complex_literals;

int cell_size(const ChainSpec& spec) {
  return std::holds_alternative<DimerSpec>(spec) ? 2 : 3;
}

Eigen::Matrix2cd bloch_dimer(double v1, double v2, double k) {
  Eigen::Matrix2cd h = Eigen::Matrix2cd::Zero();
  const complex<double> f = v1 + v2 * std::exp(-1i * k);
  h(0, 1) = f;
  h(1, 0) = std::conj(f);
  return h;
}

Eigen::Matrix3cd bloch_trimer(double v1, double v2, double v3, double k) {
  Eigen::Matrix3cd h = Eigen::Matrix3cd::Zero();
  h(0, 1) = v2;
  h(1, 2) = v3;
  h(0, 2) = v1 * std::exp(-1i * k);
  h(1, 0) = std::conj(h(0, 1));
  h(2, 1) = std::conj(h(1, 2));
  h(2, 0) = std::conj(h(0, 2));
  return h;
}

Eigen::Matrix3cd bloch_triangle(double u, double a, double b, double c,
                                double k) {
  Eigen::Matrix3cd h;
  const complex<double> e = std::exp(-1i * k);
  const double diag = 2.0 * c * std::cos(k);
  h.setZero();
  h(0, 0) = h(1, 1) = h(2, 2) = diag;
  h(0, 1) = u + b * e;
  h(1, 2) = u + b * e;
  h(0, 2) = u + a * e;
  h(1, 0) = std::conj(h(0, 1));
  h(2, 1) = std::conj(h(1, 2));
  h(2, 0) = std::conj(h(0, 2));
  return h;
}

BlochModel bloch_model(const ChainSpec& spec) {
  return std::visit(
      [](const auto& s) -> BlochModel {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, DimerSpec>) {
          return {2, [s](double k) -> Eigen::MatrixXcd {
                    return bloch_dimer(s.v1, s.v2, k);
                  }};
        } else if constexpr (std::is_same_v<T, TrimerSpec>) {
          return {3, [s](double k) -> Eigen::MatrixXcd {
                    return bloch_trimer(s.v1, s.v2, s.v3, k);
                  }};
        } else {
          return {3, [s](double k) -> Eigen::MatrixXcd {
                    return bloch_triangle(s.u, s.a, s.b, s.c, k);
                  }};
        }
      },
      spec);
}

FiniteChain finite_chain(const ChainSpec& spec, int n_cells) {
  if (n_cells < 2) throw std::invalid_argument("finite_chain: need n_cells >= 2");
  const int cs = cell_size(spec);
  const int n = cs * n_cells;
  Eigen::MatrixXd h = Eigen::MatrixXd::Zero(n, n);
  auto bond = [&h](int i, int j, double v) {
    h(i, j) = v;
    h(j, i) = v;
  };
  std::visit(
      [&](const auto& s) {
        using T = std::decay_t<decltype(s)>;
        for (int cell = 0; cell < n_cells; ++cell) {
          const int o = cell * cs;
          if constexpr (std::is_same_v<T, DimerSpec>) {
            bond(o, o + 1, s.v1);
            if (cell + 1 < n_cells) bond(o + 1, o + 2, s.v2);
          } else if constexpr (std::is_same_v<T, TrimerSpec>) {
            bond(o, o + 1, s.v2);
            bond(o + 1, o + 2, s.v3);
            if (cell + 1 < n_cells) bond(o + 2, o + 3, s.v1);
          } else {
            bond(o, o + 1, s.u);
            bond(o + 1, o + 2, s.u);
            bond(o, o + 2, s.u);
            if (cell + 1 < n_cells) {
              bond(o + 2, o + 3, s.a);              // site 3 -> next site 1
              bond(o + 1, o + 3, s.b);              // site 2 -> next site 1
              bond(o + 2, o + 4, s.b);              // site 3 -> next site 2
              for (int j = 0; j < 3; ++j) bond(o + j, o + 3 + j, s.c);
            }
          }
        }
      },
      spec);
  return {std::move(h), cs};
}

ChainSpec extract_chain_spec(const RingGeometry& g, LatticeKind kind) {
  const auto& t = g.cell_arclengths;
  auto v_at = [&](double arc) {
    return pair_coupling(g.nu, g.radius, g.radius,
                         2.0 * g.radius * std::sin(arc / (2.0 * g.radius)));
  };
  switch (kind) {
    case LatticeKind::kDimer:
      if (t.size() != 2)
        throw std::invalid_argument("extract_chain_spec: dimer needs a 2-arclength pattern");
      return DimerSpec{v_at(t[0]), v_at(t[1])};
    case LatticeKind::kTrimer:
      if (t.size() != 3)
        throw std::invalid_argument("extract_chain_spec: trimer needs a 3-arclength pattern");
      return TrimerSpec{v_at(t[0]), v_at(t[1]), v_at(t[2])};
    case LatticeKind::kTriangle: {
      if (t.size() != 3 || std::abs(t[1] - t[2]) > 1e-9 * t[1])
        throw std::invalid_argument("extract_chain_spec: triangle needs t2 == t3");
      const double u = v_at(t[1]);
      const double u2 = v_at(2.0 * t[1]);
      if (std::abs(u - u2) > 0.02 * std::abs(u))
        throw std::invalid_argument(
            "extract_chain_spec: ring violates the triangle design condition "
            "V(t2) = V(2 t2) (relative mismatch > 2%)");
      return TriangleSpec{u, v_at(t[0]), v_at(t[0] + t[1]),
                          v_at(t[0] + 2.0 * t[1])};
    }
  }
  throw std::logic_error("extract_chain_spec: unreachable");
}

}  // namespace ryd
