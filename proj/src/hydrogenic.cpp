#include "ryd/hydrogenic.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace ryd {
namespace {

constexpr double kRescale = 1e250;
const double kLnRescale = std::log(kRescale);

struct ScaledValue {
  double mantissa;
  double ln_scale;  // value = mantissa * exp(ln_scale)
};

// L_p^a(x) by upward recurrence in the degree, rescaled on the fly.
ScaledValue laguerre_scaled(int p, double a, double x) {
  double prev = 0.0, cur = 1.0;
  double ln_scale = 0.0;
  for (int k = 0; k < p; ++k) {
    const double next = ((2 * k + 1 + a - x) * cur - (k + a) * prev) / (k + 1);
    prev = cur;
    cur = next;
    const double m = std::max(std::abs(cur), std::abs(prev));
    if (m > kRescale) {
      prev /= kRescale;
      cur /= kRescale;
      ln_scale += kLnRescale;
    } else if (m > 0.0 && m < 1.0 / kRescale) {
      prev *= kRescale;
      cur *= kRescale;
      ln_scale -= kLnRescale;
    }
  }
  return {cur, ln_scale};
}

void check_finite(double u, double du, const RadialQuery& q) {
  if (!std::isfinite(u) || !std::isfinite(du)) {
    throw std::overflow_error("radial_u: scaling failed at nu=" +
                              std::to_string(q.nu) + " l=" +
                              std::to_string(q.l) + " r=" +
                              std::to_string(q.r));
  }
}

}  // namespace

namespace detail {

RadialValue radial_eval(int nu, int l, double r) {
  const int p = nu - l - 1;          // Laguerre degree
  const double alpha = 2 * l + 1;
  const double x = std::max(2.0 * r / nu, 1e-280);

  // u = C x^{l+1} e^{-x/2} L_p^{2l+1}(x),  C = (nu/2) N_{nu l}
  const double lnC = std::log(nu / 2.0) +
                     0.5 * (3.0 * std::log(2.0 / nu) + std::lgamma(p + 1.0) -
                            std::log(2.0 * nu) - std::lgamma(nu + l + 1.0));
  const auto L = laguerre_scaled(p, alpha, x);
  const auto L2 = p >= 1 ? laguerre_scaled(p - 1, alpha + 1, x)
                         : ScaledValue{0.0, 0.0};

  const double base = lnC + l * std::log(x) - 0.5 * x;
  const double u = L.mantissa * std::exp(base + L.ln_scale) * x;
  // dL/dx = -L_{p-1}^{a+1}
  const double du =
      (2.0 / nu) * ((l + 1 - 0.5 * x) * L.mantissa * std::exp(base + L.ln_scale) -
                    x * L2.mantissa * std::exp(base + L2.ln_scale));
  return {u, du};
}

}  // namespace detail

RadialValue radial_u(const RadialQuery& q) {
  if (q.nu < 1) throw std::domain_error("radial_u: nu must be >= 1");
  if (q.l < 0 || q.l >= q.nu)
    throw std::domain_error("radial_u: require 0 <= l <= nu-1");
  if (!(q.r > 0.0)) throw std::domain_error("radial_u: require r > 0");
  const RadialValue v = detail::radial_eval(q.nu, q.l, q.r);
  check_finite(v.u, v.du, q);
  return v;
}

std::vector<RadialValue> radial_batch(int nu, int l,
                                      std::span<const double> r_grid) {
  std::vector<RadialValue> out;
  out.reserve(r_grid.size());
  double prev = 0.0;
  for (const double r : r_grid) {
    if (r <= prev)
      throw std::domain_error("radial_batch: grid must be strictly ascending and positive");
    prev = r;
    out.push_back(radial_u({nu, l, r}));
  }
  return out;
}

}  // namespace ryd
