#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "lcs/chartcalc.hpp"

#include <random>

using namespace lcs;

namespace {

std::vector<Vec> random_points(int dim, int count, std::uint64_t seed, double r = 1.0) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-r, r);
  std::vector<Vec> pts;
  for (int k = 0; k < count; ++k) {
    Vec p(dim);
    for (int i = 0; i < dim; ++i) p[i] = u(rng);
    pts.push_back(p);
  }
  return pts;
}

// random trig/polynomial k-form on R^n with coefficients a_I * sin(w.x + c) + b_I * x_i x_j
KForm random_form(int n, int k, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  int nc = binom(n, k);
  std::vector<double> a(nc), b(nc), c(nc), w(nc * n);
  std::vector<int> ii(nc), jj(nc);
  for (int I = 0; I < nc; ++I) {
    a[I] = u(rng);
    b[I] = u(rng);
    c[I] = u(rng);
    ii[I] = static_cast<int>(rng() % n);
    jj[I] = static_cast<int>(rng() % n);
    for (int j = 0; j < n; ++j) w[I * n + j] = u(rng);
  }
  return analytic_form(n, k, [=](const auto& x, auto* out) {
    using std::sin;
    for (int I = 0; I < nc; ++I) {
      auto arg = x[0] * w[I * n] + c[I];
      for (int j = 1; j < n; ++j) arg = arg + x[j] * w[I * n + j];
      out[I] = sin(arg) * a[I] + x[ii[I]] * x[jj[I]] * b[I];
    }
  });
}

// closed 1-form: d of a random function
KForm random_closed_eta(int n, std::uint64_t seed) { return exterior_derivative(random_form(n, 0, seed)); }

KForm as_sampled(const KForm& f) {
  return sampled_form(f.dim(), f.degree(), [f](const Vec& x) { return f.at(x); });
}

}  // namespace

TEST_CASE("exterior derivative examples") {
  KForm f = analytic_form(2, 0, [](const auto& x, auto* out) { out[0] = x[0] * x[0] * x[1]; });
  CVec df = exterior_derivative(f).at(make_vec({1.0, 2.0}));
  CHECK(df[0] == doctest::Approx(4.0));
  CHECK(df[1] == doctest::Approx(1.0));

  CVec dy(2);
  dy << 0.0, 1.0;
  CHECK(exterior_derivative(constant_form(2, 1, dy)).at(make_vec({0.3, -0.2}))[0] == doctest::Approx(0.0));

  KForm xdy = analytic_form(2, 1, [](const auto& x, auto* out) {
    out[0] = 0.0 * x[0];
    out[1] = x[0];
  });
  for (const auto& p : random_points(2, 10, 1)) CHECK(exterior_derivative(xdy).at(p)[0] == doctest::Approx(1.0));

  CHECK_THROWS_WITH(exterior_derivative(constant_form(2, 2, CVec::Ones(1))), "top-degree form");
}

TEST_CASE("lichnerowicz derivative examples") {
  CVec dx(2), dy(2);
  dx << 1.0, 0.0;
  dy << 0.0, 1.0;
  KForm eta = constant_form(2, 1, dx);
  CHECK(lichnerowicz_derivative(constant_form(2, 1, dy), eta).at(make_vec({0.1, 0.2}))[0] == doctest::Approx(-1.0));

  KForm s = random_form(3, 1, 5);
  auto pts = random_points(3, 20, 2);
  CHECK(max_difference(lichnerowicz_derivative(s, zero_form(3, 1)), exterior_derivative(s), pts) < 1e-14);
}

TEST_CASE("wedge examples") {
  CVec dx(2), dy(2);
  dx << 1.0, 0.0;
  dy << 0.0, 1.0;
  CHECK(wedge(constant_form(2, 1, dx), constant_form(2, 1, dy)).at(make_vec({0.0, 0.0}))[0] == 1.0);
  KForm s = random_form(4, 1, 9);
  CHECK(max_abs(wedge(s, s), random_points(4, 20, 3)) < 1e-14);
  KForm xdy = analytic_form(2, 1, [](const auto& x, auto* out) {
    out[0] = 0.0 * x[0];
    out[1] = x[0];
  });
  KForm ydx = analytic_form(2, 1, [](const auto& x, auto* out) {
    out[0] = x[1];
    out[1] = 0.0 * x[0];
  });
  CHECK(wedge(xdy, ydx).at(make_vec({2.0, 3.0}))[0] == doctest::Approx(-6.0));
}

TEST_CASE("interior product examples") {
  KForm dxdy = constant_form(2, 2, CVec::Ones(1));
  CVec c = interior_product([](const Vec&) { return make_vec({1.0, 0.0}); }, dxdy).at(make_vec({0.4, 0.1}));
  CHECK(c[0] == doctest::Approx(0.0));
  CHECK(c[1] == doctest::Approx(1.0));

  KForm s = random_form(3, 2, 4);
  CHECK(max_abs(interior_product([](const Vec&) { return Vec(Vec::Zero(3)); }, s), random_points(3, 10, 1)) == 0.0);

  KForm alpha0 = analytic_form(3, 1, [](const auto& x, auto* out) {
    out[0] = x[1] * -0.5;
    out[1] = x[0] * 0.5;
    out[2] = -1.0 + 0.0 * x[0];
  });
  for (const auto& p : random_points(3, 10, 7))
    CHECK(interior_product([](const Vec&) { return make_vec({0.0, 0.0, 1.0}); }, alpha0).at(p)[0] ==
          doctest::Approx(-1.0));
  CHECK_THROWS(interior_product([](const Vec&) { return make_vec({1.0}); }, constant_form(1, 0, CVec::Ones(1))));
}

TEST_CASE("pullback examples") {
  KForm s = random_form(3, 2, 11);
  ChartMap id = analytic_map(3, 3, [](const auto& x, auto* y) {
    for (int i = 0; i < 3; ++i) y[i] = x[i];
  });
  auto pts = random_points(3, 20, 6);
  CHECK(max_difference(pullback(id, s), s, pts) < 1e-12);

  // (theta, p) -> (theta - g(p), p) pulls dtheta back to dtheta - dg
  KForm g = random_form(3, 0, 12);
  ChartMap lift;
  lift.src_dim = lift.dst_dim = 3;
  lift.f = [g](const Vec& x) {
    Vec y = x;
    y[0] -= value(g, x);
    return y;
  };
  CVec dth = CVec::Zero(3);
  dth[0] = 1.0;
  KForm expected = sub(constant_form(3, 1, dth), exterior_derivative(g));
  CHECK(max_difference(pullback(lift, constant_form(3, 1, dth)), expected, pts) < 1e-8);
}

TEST_CASE("storage is antisymmetric by construction") {
  KForm s = random_form(4, 2, 21);
  Vec p = random_points(4, 1, 3)[0];
  CHECK(s.coeff(p, {2, 1}) == -s.coeff(p, {1, 2}));
  CHECK(s.coeff(p, {1, 1}) == 0.0);
  CHECK(s.at(p).size() == 6);
}

TEST_CASE("d_eta squared vanishes, analytic oracles") {
  auto pts = random_points(4, 100, 31);
  double worst = 0.0;
  for (int trial = 0; trial < 10; ++trial) {
    KForm eta = random_closed_eta(4, 100 + trial);
    for (int k = 0; k <= 2; ++k) {
      KForm s = random_form(4, k, 200 + 10 * trial + k);
      KForm dd = lichnerowicz_derivative(lichnerowicz_derivative(s, eta), eta);
      worst = std::max(worst, max_abs(dd, pts));
    }
  }
  CHECK(worst <= 1e-8);
}

TEST_CASE("d_eta squared vanishes, finite differences") {
  auto pts = random_points(3, 100, 32);
  for (int trial = 0; trial < 3; ++trial) {
    KForm eta = as_sampled(random_closed_eta(3, 300 + trial));
    KForm s = as_sampled(random_form(3, 1, 400 + trial));
    KForm dd = lichnerowicz_derivative(lichnerowicz_derivative(s, eta), eta);
    double scale = std::max(1.0, max_abs(s, pts));
    CHECK(max_abs(dd, pts) <= 1e-3 * scale);
  }
}

TEST_CASE("gauge identity d_{eta+df} s = e^f d_eta(e^-f s)") {
  auto pts = random_points(3, 100, 33);
  for (int trial = 0; trial < 5; ++trial) {
    KForm eta = random_closed_eta(3, 500 + trial);
    KForm f = random_form(3, 0, 600 + trial);
    KForm s = random_form(3, 1, 700 + trial);
    KForm lhs = lichnerowicz_derivative(s, add(eta, exterior_derivative(f)));
    KForm rhs = wedge(exp_field(f), lichnerowicz_derivative(wedge(exp_field(f, -1.0), s), eta));
    CHECK(max_difference(lhs, rhs, pts) <= 1e-8);
  }
}

TEST_CASE("periodic coordinates are reduced") {
  KForm f = analytic_form(2, 0, [](const auto& x, auto* out) { out[0] = x[0] * x[0] + x[1]; }, {true, false});
  CHECK(value(f, make_vec({1.25, 0.5})) == doctest::Approx(value(f, make_vec({0.25, 0.5}))));
  Chart c(2, {true, false});
  Vec d = c.difference(make_vec({0.95, 0.0}), make_vec({0.05, 0.0}));
  CHECK(d[0] == doctest::Approx(-0.1));
  CHECK(c.reduce(make_vec({-0.25, 3.0}))[0] == doctest::Approx(0.75));
}
