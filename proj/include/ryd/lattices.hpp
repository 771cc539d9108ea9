#pragma once

#include <Eigen/Dense>
#include <functional>
#include <variant>

#include "ryd/composite.hpp"

// Abstract tight-binding models: dimer SSH, trimer SSH, and triangle chain.
// Bulk Bloch Hamiltonians, finite open chains, and extraction of effective
// lattice parameters from a composite ring geometry.

namespace ryd {

struct DimerSpec {
  double v1, v2;  // intracell, intercell
};
struct TrimerSpec {
  double v1, v2, v3;  // intercell; intracell bonds
};
struct TriangleSpec {
  double u, a, b, c;
};

using ChainSpec = std::variant<DimerSpec, TrimerSpec, TriangleSpec>;

int cell_size(const ChainSpec& spec);

Eigen::Matrix2cd bloch_dimer(double v1, double v2, double k);
Eigen::Matrix3cd bloch_trimer(double v1, double v2, double v3, double k);
Eigen::Matrix3cd bloch_triangle(double u, double a, double b, double c, double k);

struct BlochModel {
  int cell_size;
  std::function<Eigen::MatrixXcd(double)> matrix_at;
};

BlochModel bloch_model(const ChainSpec& spec);

// Open chain of complete unit cells; on-site terms are zero.
struct FiniteChain {
  Eigen::MatrixXd hoppings;
  int cell_size;
};

FiniteChain finite_chain(const ChainSpec& spec, int n_cells);

enum class LatticeKind { kDimer, kTrimer, kTriangle };

// Effective couplings at the chords of the geometry's arclengths. Triangle
// extraction asserts the ring-design condition |V(t2)-V(2t2)| <= 2% |V(t2)|.
ChainSpec extract_chain_spec(const RingGeometry& g, LatticeKind kind);

}  // namespace ryd
