#include "lcs/families.hpp"

#include <cmath>
#include <numbers>

namespace lcs {

Hamiltonian contact_bump(int n, double amplitude, const Vec& c, double radius, double rz, double zc) {
  const int dim = 2 * n + 1;
  std::vector<double> cv(c.data(), c.data() + c.size());
  Hamiltonian H = analytic_hamiltonian(
      dim,
      [=](double, const auto& x) {
        using T = std::decay_t<decltype(x[0])>;
        T s = T(0.0);
        for (int i = 0; i < 2 * n; ++i) s = s + sqr(x[i] - cv[i]);
        T v = amplitude * bump_profile(T(s * (1.0 / (radius * radius))));
        if (rz > 0.0) v = v * bump_profile(T(sqr(x[2 * n] - zc) * (1.0 / (rz * rz))));
        return v;
      },
      true);
  H.bound = std::abs(amplitude);
  return H;
}

namespace {
// integral of smoothstep from 0 to u
double step_integral(double u) {
  if (u <= 0.0) return 0.0;
  if (u >= 1.0) return 0.5 + (u - 1.0);
  return u * u * u * u * (u * (u - 3.0) + 2.5);
}
}  // namespace

double RadialProfile::value(double s) const {
  // integral of rho over [a, s]
  double I;
  if (s <= a) I = 0.0;
  else if (s >= b) I = b - a - delta;
  else if (s <= b - delta) I = delta * step_integral((s - a) / delta);
  else I = (b - a - delta) - delta * step_integral((b - s) / delta);
  return A - slope() * I;
}

double RadialProfile::deriv(double s) const {
  double rho;
  if (s <= a || s >= b) rho = 0.0;
  else rho = std::min(smoothstep((s - a) / delta), smoothstep((b - s) / delta));
  return -slope() * rho;
}

Hamiltonian radial_hamiltonian(int n, const RadialProfile& prof) {
  const int dim = 2 * n + 1;
  Hamiltonian H;
  H.dim = dim;
  H.autonomous = true;
  H.bound = std::abs(prof.A);
  H.value = [=](double, const Vec& x) {
    double s = 0.0;
    for (int i = 0; i < 2 * n; ++i) s += x[i] * x[i];
    return prof.value(std::numbers::pi * s);
  };
  H.grad = [=](double, const Vec& x) {
    double s = 0.0;
    for (int i = 0; i < 2 * n; ++i) s += x[i] * x[i];
    double d = prof.deriv(std::numbers::pi * s) * 2.0 * std::numbers::pi;
    Vec g = Vec::Zero(dim);
    for (int i = 0; i < 2 * n; ++i) g[i] = d * x[i];
    return g;
  };
  return H;
}

Hamiltonian translation_hamiltonian(double v, double L) {
  Hamiltonian H = analytic_hamiltonian(
      3,
      [=](double, const auto& x) {
        return -v * x[1] * plateau(x[0], L) * plateau(x[1], L);
      },
      true);
  H.bound = std::abs(v) * 2.0 * L;  // |y| <= 2L on the support
  return H;
}

ScalarField cos_torus(double a, double b) {
  return analytic_form(
      2, 0,
      [a, b](const auto& q, auto* out) {
        using std::cos;
        const double tp = 2.0 * std::numbers::pi;
        out[0] = a * cos(q[0] * tp) + b * cos(q[1] * tp);
      },
      {true, true});
}

}  // namespace lcs
