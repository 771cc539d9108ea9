#pragma once

#include <Eigen/Dense>

#include "ryd/composite.hpp"

// Brute-force degenerate-manifold scatterer-overlap matrix built from the
// full angular-momentum sum; independent oracle for the closed-form kernel.
// First-order degenerate perturbation theory shifts the composite levels by
// 2*pi*a_s times the eigenvalues of this matrix.

namespace ryd {

double legendre_p(int l, double x);

struct ManifoldMatrix {
  Eigen::MatrixXd s;  // M x M Gram matrix, symmetric PSD
  int nu;
  int l_min;
};

// S[q][q'] = sum_{l=l_min}^{nu-1} (2l+1)/(4 pi) P_l(cos gamma_qq')
//            u_nl(R_q) u_nl(R_q') / (R_q R_q'),
// the azimuthal sum done analytically via the Legendre addition theorem.
// Intended for nu <= ~30 (cost grows with nu).
ManifoldMatrix manifold_matrix(const RingGeometry& g, int l_min = 0);

// Max relative deviation of the scale-normalized sorted spectra of two
// symmetric matrices (each normalized by its largest-|.| eigenvalue).
double spectral_compare(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b);

}  // namespace ryd
