#pragma once

// Forward-mode second-order jets. Closed-form fields are written once as generic
// lambdas and evaluated with double, Jet (order 1) or Jet (order 2).

#include <cmath>

namespace lcs {

struct Jet {
  int n = 0;
  int order = 1;
  double v = 0.0;
  double g[8] = {};
  double h[8][8] = {};

  Jet() = default;
  Jet(double c) : v(c) {}  // NOLINT: constants promote implicitly
  static Jet constant(double c, int n, int order) {
    Jet j;
    j.n = n;
    j.order = order;
    j.v = c;
    return j;
  }
  static Jet variable(double x, int i, int n, int order) {
    Jet j = constant(x, n, order);
    j.g[i] = 1.0;
    return j;
  }
};

inline double val(double x) { return x; }
inline double val(const Jet& x) { return x.v; }

namespace detail {
inline void shape(Jet& out, const Jet& a, const Jet& b) {
  out.n = a.n > b.n ? a.n : b.n;
  out.order = a.order > b.order ? a.order : b.order;
}
// out = f(a) given f, f', f'' at a.v
inline Jet chain(const Jet& a, double f0, double f1, double f2) {
  Jet r;
  r.n = a.n;
  r.order = a.order;
  r.v = f0;
  for (int i = 0; i < a.n; ++i) r.g[i] = f1 * a.g[i];
  if (a.order >= 2)
    for (int i = 0; i < a.n; ++i)
      for (int j = 0; j < a.n; ++j) r.h[i][j] = f1 * a.h[i][j] + f2 * a.g[i] * a.g[j];
  return r;
}
}  // namespace detail

inline Jet operator+(const Jet& a, const Jet& b) {
  Jet r;
  detail::shape(r, a, b);
  r.v = a.v + b.v;
  for (int i = 0; i < r.n; ++i) r.g[i] = a.g[i] + b.g[i];
  if (r.order >= 2)
    for (int i = 0; i < r.n; ++i)
      for (int j = 0; j < r.n; ++j) r.h[i][j] = a.h[i][j] + b.h[i][j];
  return r;
}

inline Jet operator-(const Jet& a) { return detail::chain(a, -a.v, -1.0, 0.0); }
inline Jet operator-(const Jet& a, const Jet& b) { return a + (-b); }

inline Jet operator*(const Jet& a, const Jet& b) {
  Jet r;
  detail::shape(r, a, b);
  r.v = a.v * b.v;
  for (int i = 0; i < r.n; ++i) r.g[i] = a.g[i] * b.v + a.v * b.g[i];
  if (r.order >= 2)
    for (int i = 0; i < r.n; ++i)
      for (int j = 0; j < r.n; ++j)
        r.h[i][j] = a.h[i][j] * b.v + a.v * b.h[i][j] + a.g[i] * b.g[j] + a.g[j] * b.g[i];
  return r;
}

inline Jet inv(const Jet& a) {
  double x = a.v;
  return detail::chain(a, 1.0 / x, -1.0 / (x * x), 2.0 / (x * x * x));
}
inline Jet operator/(const Jet& a, const Jet& b) { return a * inv(b); }

inline Jet& operator+=(Jet& a, const Jet& b) { return a = a + b; }
inline Jet& operator-=(Jet& a, const Jet& b) { return a = a - b; }
inline Jet& operator*=(Jet& a, const Jet& b) { return a = a * b; }

inline Jet sin(const Jet& a) { return detail::chain(a, std::sin(a.v), std::cos(a.v), -std::sin(a.v)); }
inline Jet cos(const Jet& a) { return detail::chain(a, std::cos(a.v), -std::sin(a.v), -std::cos(a.v)); }
inline Jet exp(const Jet& a) {
  double e = std::exp(a.v);
  return detail::chain(a, e, e, e);
}
inline Jet log(const Jet& a) { return detail::chain(a, std::log(a.v), 1.0 / a.v, -1.0 / (a.v * a.v)); }
inline Jet sqrt(const Jet& a) {
  double s = std::sqrt(a.v);
  return detail::chain(a, s, 0.5 / s, -0.25 / (s * a.v));
}
inline Jet tanh(const Jet& a) {
  double t = std::tanh(a.v);
  double d = 1.0 - t * t;
  return detail::chain(a, t, d, -2.0 * t * d);
}

template <class T>
T sqr(const T& x) {
  return x * x;
}

using std::cos;
using std::exp;
using std::log;
using std::sin;
using std::sqrt;
using std::tanh;

}  // namespace lcs
