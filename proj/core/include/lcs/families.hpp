#pragma once

// Built-in Hamiltonian families used by the CLI, tests and benchmarks.

#include "lcs/dynamics.hpp"

namespace lcs {

// exp(1 - 1/(1 - s)) for s < 1, else 0; equals 1 - s + O(s^2) near 0.
template <class T>
T bump_profile(const T& s) {
  if (val(s) >= 1.0) return T(0.0);
  using std::exp;
  return exp(1.0 - 1.0 / (1.0 - s));
}

// A * bump(|(x,y) - c|^2 / r^2) on R^{2n+1} (z-independent) or with a z-window of half-width rz.
Hamiltonian contact_bump(int n, double amplitude, const Vec& center_xy, double radius, double rz = 0.0,
                         double zc = 0.0);

// C^2 step 6u^5 - 15u^4 + 10u^3 clamped to [0, 1].
template <class T>
T smoothstep(const T& u) {
  if (val(u) <= 0.0) return T(0.0);
  if (val(u) >= 1.0) return T(1.0);
  return u * u * u * (u * (u * 6.0 - 15.0) + 10.0);
}

// 1 on [-L, L], 0 outside [-2L, 2L].
template <class T>
T plateau(const T& u, double L) {
  T a = val(u) < 0.0 ? T(-u) : u;
  return 1.0 - smoothstep(T((a - L) * (1.0 / L)));
}

// Radial profile h(s), s = pi r^2: h = A near 0, h' = -k rho(s) with rho a C^2 plateau on
// [a, b] (ramps of width delta), k = A / (b - a - delta) so h(b) = 0.
struct RadialProfile {
  double A = 1.0;
  double a = 0.0, b = 1.5, delta = 0.1;
  double slope() const { return A / (b - a - delta); }
  double value(double s) const;
  double deriv(double s) const;
};
Hamiltonian radial_hamiltonian(int n, const RadialProfile& prof);

// -v * y * chi(x, y) (displacement in x) with chi a plateau cutoff on the box [-L, L]^2.
Hamiltonian translation_hamiltonian(double v, double L);

// a cos 2 pi q1 + b cos 2 pi q2 on the torus.
ScalarField cos_torus(double a, double b);

}  // namespace lcs
