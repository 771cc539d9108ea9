#include "ryd/manifold_oracle.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "ryd/hydrogenic.hpp"

namespace ryd {

double legendre_p(int l, double x) {
  if (l < 0) throw std::domain_error("legendre_p: l must be >= 0");
  if (std::abs(x) > 1.0) throw std::domain_error("legendre_p: |x| must be <= 1");
  double prev = 1.0, cur = x;
  if (l == 0) return prev;
  for (int k = 1; k < l; ++k) {
    const double next = ((2 * k + 1) * x * cur - k * prev) / (k + 1);
    prev = cur;
    cur = next;
  }
  return cur;
}

ManifoldMatrix manifold_matrix(const RingGeometry& g, int l_min) {
  if (l_min < 0 || l_min >= g.nu)
    throw std::invalid_argument("manifold_matrix: require 0 <= l_min < nu");
  const auto sites = ring_positions(g);
  const int m = g.site_count;
  Eigen::MatrixXd s = Eigen::MatrixXd::Zero(m, m);
#pragma omp parallel for schedule(dynamic)
  for (int q = 0; q < m; ++q) {
    for (int p = q; p < m; ++p) {
      const double cos_gamma =
          std::clamp(std::cos(sites[q].angle - sites[p].angle), -1.0, 1.0);
      double sum = 0.0;
      for (int l = l_min; l < g.nu; ++l) {
        const double uq = detail::radial_eval(g.nu, l, sites[q].radius).u;
        const double up = q == p ? uq
                                 : detail::radial_eval(g.nu, l, sites[p].radius).u;
        sum += (2 * l + 1) / (4.0 * M_PI) * legendre_p(l, cos_gamma) * uq * up;
      }
      s(q, p) = s(p, q) = sum / (sites[q].radius * sites[p].radius);
    }
  }
  return {std::move(s), g.nu, l_min};
}

double spectral_compare(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
  if (a.rows() != b.rows())
    throw std::invalid_argument("spectral_compare: dimension mismatch");
  auto normalized = [](const Eigen::MatrixXd& m) {
    Eigen::VectorXd ev =
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(m, Eigen::EigenvaluesOnly)
            .eigenvalues();
    std::vector<double> v(ev.data(), ev.data() + ev.size());
    std::sort(v.begin(), v.end(),
              [](double x, double y) { return std::abs(x) > std::abs(y); });
    const double top = v.front();
    for (auto& x : v) x /= top;
    return v;
  };
  const auto va = normalized(a), vb = normalized(b);
  double worst = 0.0;
  for (size_t i = 0; i < va.size(); ++i)
    worst = std::max(worst,
                     std::abs(va[i] - vb[i]) / std::max(std::abs(vb[i]), 1e-300));
  return worst;
}

}  // namespace ryd
