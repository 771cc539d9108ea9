#pragma once

#include <span>
#include <vector>

// Reduced hydrogen radial function u_nl(r) and its derivative, normalized
// as int_0^inf u^2 dr = 1 with u > 0 as r -> 0+. Atomic units throughout.

namespace ryd {

struct RadialQuery {
  int nu;    // principal quantum number, >= 1
  int l;     // 0 <= l <= nu-1
  double r;  // radius, > 0
};

struct RadialValue {
  double u;
  double du;
};

// Evaluates via the associated-Laguerre three-term recurrence with the
// magnitude carried in a separate exponent, so intermediate terms never
// overflow. Accurate to ~1e-13 relative for nu <= 100 (checked against an
// extended-precision reference, see tests/oracle/).
RadialValue radial_u(const RadialQuery& q);

// Vectorized evaluation over a strictly ascending radius grid.
std::vector<RadialValue> radial_batch(int nu, int l,
                                      std::span<const double> r_grid);

namespace detail {
// Same evaluation but tolerant of r == 0 (u -> 0, du -> its r->0 limit);
// used by the coupling kernel where x_- can vanish for antipodal sites.
RadialValue radial_eval(int nu, int l, double r);
}  // namespace detail

}  // namespace ryd
