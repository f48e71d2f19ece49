#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "lcs/chords.hpp"
#include "lcs/spectral.hpp"
#include "test_helpers.hpp"

#include <cmath>
#include <numbers>
#include <random>

using namespace lcs;
using namespace lcs::testing;

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Random trigonometric polynomial on T^m.
struct TrigPoly {
  std::vector<std::vector<int>> k;
  std::vector<double> a, ph;
  double operator()(const DVec& q) const {
    double s = 0.0;
    for (std::size_t j = 0; j < a.size(); ++j) {
      double arg = ph[j];
      for (std::size_t i = 0; i < k[j].size(); ++i) arg += kTwoPi * k[j][i] * q[i];
      s += a[j] * std::cos(arg);
    }
    return s;
  }
  double bound() const {
    double b = 0.0;
    for (double x : a) b += std::abs(x);
    return b;
  }
};

TrigPoly random_trig(int m, std::mt19937_64& rng) {
  std::uniform_int_distribution<int> K(-1, 1);
  std::uniform_real_distribution<double> A(-0.5, 0.5), P(0.0, kTwoPi);
  TrigPoly t;
  for (int j = 0; j < 3; ++j) {
    std::vector<int> k(m);
    for (int& x : k) x = K(rng);
    if (std::all_of(k.begin(), k.end(), [](int x) { return x == 0; })) k[0] = 1;
    t.k.push_back(k);
    t.a.push_back(A(rng));
    t.ph.push_back(P(rng));
  }
  return t;
}

Chart torus(int m) { return Chart(m, std::vector<bool>(m, true)); }

GFQI trig_gf(const TrigPoly& f, int m) {
  return function_gf(torus(m), [f](const DVec& q) { return f(q); }, Box{}, f.bound());
}

// -zeta^2 + f(q) + 0.2 sin(zeta) g(q): one negative fibre direction.
GFQI fibred_gf(const TrigPoly& f, const TrigPoly& g, int m) {
  GFQI F;
  F.base = torus(m);
  F.N = 1;
  F.Q = DMat::Constant(1, 1, -1.0);
  F.F = [f, g](const DVec& q, const DVec& z) { return -z[0] * z[0] + f(q) + 0.2 * std::sin(z[0]) * g(q); };
  F.perturbation_bound = f.bound() + 0.2 * g.bound();
  F.gradient_bound = 0.2 * g.bound();
  return F;
}

SpectralConfig grid(std::vector<int> res, int fibre = 9) {
  SpectralConfig c;
  c.base_res = std::move(res);
  c.fibre_res = fibre;
  return c;
}

ContactIsotopy planar_bump(double A, double cx, double cy, double r) {
  ContactIsotopy c;
  c.H = contact_bump(1, A, make_vec({cx, cy}), r);
  c.support = Box{{cx - 1.2 * r, cy - 1.2 * r, 0.0}, {cx + 1.2 * r, cy + 1.2 * r, 1.0}};
  c.periodic_z = true;
  c.integrator.step = 2e-2;
  return c;
}

double min_of(const FilteredComplex& K) { return *std::min_element(K.vertex_values.begin(), K.vertex_values.end()); }
double max_of(const FilteredComplex& K) { return *std::max_element(K.vertex_values.begin(), K.vertex_values.end()); }

}  // namespace

TEST_CASE("essential classes of the compactified grid are the torus Betti numbers") {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> U(-1.0, 1.0);
  for (int m : {1, 2, 3}) {
    std::vector<int> n(m, 5);
    int nv = 1;
    for (int v : n) nv *= v;
    std::vector<double> vals(nv);
    for (double& v : vals) v = U(rng);
    FilteredComplex K = grid_complex(n, std::vector<bool>(m, true), vals, -2.0);
    Barcode b = relative_persistence(K);
    std::vector<int> betti(m + 1, 0);
    for (auto& bar : b.bars)
      if (bar.essential()) ++betti[bar.degree];
    for (int k = 0; k <= m; ++k) {
      int binom = 1;
      for (int j = 0; j < k; ++j) binom = binom * (m - j) / (j + 1);
      CHECK(betti[k] == binom);
    }
  }
}

TEST_CASE("relative to a floor containing a band the homology changes") {
  // circle of 8 vertices, two of them below the floor: H_*(S^1, arc) = Z/2 in degree 1
  std::vector<double> v = {-5, -5, 1, 2, 3, 2, 1, 0.5};
  FilteredComplex K = grid_complex({8}, {true}, v, -1.0);
  Barcode b = relative_persistence(K);
  int e0 = 0, e1 = 0;
  for (auto& bar : b.bars) {
    if (!bar.essential()) continue;
    (bar.degree == 0 ? e0 : e1)++;
  }
  CHECK(e0 == 0);
  CHECK(e1 == 1);
}

TEST_CASE("N = 0: unit is the minimum and fundamental the maximum") {
  std::mt19937_64 rng(2);
  for (int trial = 0; trial < 10; ++trial) {
    int m = 1 + trial % 3;
    TrigPoly f = random_trig(m, rng);
    GFQI F = trig_gf(f, m);
    SpectralConfig cfg = grid({m == 3 ? 8 : 16});
    FilteredComplex K = build_complex(F, cfg);
    Barcode b = relative_persistence(K);
    SpectralValue u = minmax_value(F, ClassSelector::unit, cfg);
    SpectralValue top = minmax_value(F, ClassSelector::fundamental, cfg);
    CHECK(u.value == min_of(K));
    CHECK(top.value == max_of(K));
    CHECK(u.error >= 0.0);
    CHECK(top.error >= 0.0);
  }
}

TEST_CASE("one negative fibre direction: min-max over the base") {
  auto bump = [](double q) { return 0.6 * bump_profile((q - 0.5) * (q - 0.5) / 0.09); };
  GFQI F;
  F.base = torus(1);
  F.N = 1;
  F.Q = DMat::Constant(1, 1, -1.0);
  F.F = [bump](const DVec& q, const DVec& z) { return -z[0] * z[0] + bump(q[0]); };
  F.perturbation_bound = 0.6;
  SpectralValue u1 = minmax_value(F, ClassSelector::unit, grid({24}, 9));
  SpectralValue f1 = minmax_value(F, ClassSelector::fundamental, grid({24}, 9));
  SpectralValue u2 = minmax_value(F, ClassSelector::unit, grid({12}, 5));
  SpectralValue f2 = minmax_value(F, ClassSelector::fundamental, grid({12}, 5));
  CHECK(std::abs(u1.value) <= u1.error + 1e-12);
  CHECK(std::abs(f1.value - 0.6) <= f1.error + 1e-12);
  CHECK(std::abs(u1.value - u2.value) <= u1.error + u2.error + 1e-12);
  CHECK(std::abs(f1.value - f2.value) <= f1.error + f2.error + 1e-12);
}

TEST_CASE("Poincare duality c(fundamental, -F) = -c(unit, F)") {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 10; ++trial) {
    int m = 1 + trial % 2;
    TrigPoly f = random_trig(m, rng), g = random_trig(m, rng);
    GFQI F = trial < 5 ? trig_gf(f, m) : fibred_gf(f, g, m);
    GFQI G = F;
    auto fn = F.F;
    G.F = [fn](const DVec& q, const DVec& z) { return -fn(q, z); };
    G.Q = -F.Q;
    SpectralConfig cfg = grid({m == 1 ? 24 : 12}, 7);
    SpectralValue a = minmax_value(F, ClassSelector::unit, cfg);
    SpectralValue b = minmax_value(G, ClassSelector::fundamental, cfg);
    CHECK(std::abs(b.value + a.value) <= a.error + b.error + 1e-12);
  }
}

TEST_CASE("continuity and monotonicity under bounded perturbations") {
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> E(0.0, 0.2);
  for (int trial = 0; trial < 10; ++trial) {
    int m = 1 + trial % 2;
    TrigPoly f = random_trig(m, rng), g = random_trig(m, rng), h = random_trig(m, rng);
    double eps = E(rng);
    GFQI F = trial % 3 == 2 ? fibred_gf(f, g, m) : trig_gf(f, m);
    GFQI Fp = F, Fm = F;
    auto fn = F.F;
    double hb = h.bound();
    // delta = eps h / |h|_sup and a nonnegative shift eps (1 + h/|h|)/2
    Fp.F = [fn, h, eps, hb](const DVec& q, const DVec& z) { return fn(q, z) + eps * h(q) / hb; };
    Fm.F = [fn, h, eps, hb](const DVec& q, const DVec& z) { return fn(q, z) + 0.5 * eps * (1.0 + h(q) / hb); };
    Fp.perturbation_bound += eps;
    Fm.perturbation_bound += eps;
    SpectralConfig cfg = grid({m == 1 ? 24 : 12}, 7);
    for (ClassSelector u : {ClassSelector::unit, ClassSelector::fundamental}) {
      SpectralValue a = minmax_value(F, u, cfg), b = minmax_value(Fp, u, cfg), c = minmax_value(Fm, u, cfg);
      CHECK(std::abs(a.value - b.value) <= eps + a.error + b.error + 1e-12);
      CHECK(a.value <= c.value + a.error + c.error + 1e-12);
    }
  }
}

TEST_CASE("stabilisation shifts the index but not the value") {
  std::mt19937_64 rng(5);
  TrigPoly f = random_trig(2, rng);
  GFQI F = trig_gf(f, 2);
  SpectralConfig cfg = grid({12}, 7);
  for (double s : {1.0, -1.0}) {
    GFQI S = stabilize(F, DMat::Constant(1, 1, s));
    for (ClassSelector u : {ClassSelector::unit, ClassSelector::fundamental}) {
      SpectralValue a = minmax_value(F, u, cfg), b = minmax_value(S, u, cfg);
      CHECK(std::abs(a.value - b.value) <= a.error + b.error + 1e-12);
    }
  }
}

TEST_CASE("separable blocks against the dense engine") {
  std::mt19937_64 rng(6);
  TrigPoly f1 = random_trig(1, rng), f2 = random_trig(1, rng);
  SeparableGF S;
  S.base_dim = 2;
  S.blocks = {trig_gf(f1, 1), trig_gf(f2, 1)};
  S.vars = {{0}, {1}};
  S.block_cfg = grid({32});
  GFQI dense = function_gf(torus(2), [&](const DVec& q) { return f1(q.head(1)) + f2(q.tail(1)); }, Box{},
                           f1.bound() + f2.bound());
  for (ClassSelector u : {ClassSelector::unit, ClassSelector::fundamental}) {
    SpectralValue a = separable_minmax(S, u), b = minmax_value(dense, u, grid({32}));
    CHECK(std::abs(a.value - b.value) <= a.error + b.error + 1e-12);
  }
  FilteredComplex K1 = build_complex(S.blocks[0], grid({32})), K2 = build_complex(S.blocks[1], grid({32}));
  CHECK(separable_minmax(S, ClassSelector::unit).value == doctest::Approx(min_of(K1) + min_of(K2)));
  CHECK(separable_minmax(S, ClassSelector::fundamental).value == doctest::Approx(max_of(K1) + max_of(K2)));
  S.vars = {{0}, {0}};
  CHECK_THROWS_WITH(separable_minmax(S, ClassSelector::unit), "blocks share variables");
  GFQI big = stabilize(trig_gf(f1, 1), DMat::Identity(4, 4));
  CHECK_THROWS_AS(minmax_value(big, ClassSelector::unit, grid({8}, 3)), Error);
}

TEST_CASE("selectors of the identity vanish") {
  Box sup{{0.0, -1.0, -1.0, 0.0}, {1.0, 1.0, 1.0, 1.0}};
  SpectralPair p = c_pm_graph(identity_map(), sup, true, 0.0, grid({3, 6, 6, 3}));
  CHECK(p.plus.value == 0.0);
  CHECK(p.minus.value == 0.0);
}

TEST_CASE("nonnegative bump: c_plus is max H and c_minus is 0, both in the action spectrum") {
  const double A = 0.2;
  ContactIsotopy c = planar_bump(A, 0.05, 0.0, 0.8);
  SpectralPair p = c_pm_contact(c, grid({13, 13, 2}));
  CHECK(std::abs(p.plus.value - A) <= p.plus.error + 1e-6);
  CHECK(std::abs(p.minus.value) <= p.minus.error + 1e-6);
  ChordSearchConfig cc;
  cc.grid = {1, 7, 7, 1};
  cc.quotient = {3};
  auto spec = action_spectrum(find_translated_points(lift_contact_isotopy(c), cc));
  for (double v : {p.plus.value, p.minus.value}) {
    double best = 1e9;
    for (double s : spec) best = std::min(best, std::abs(s - v));
    CHECK(best <= std::max(p.plus.error, p.minus.error) + 1e-6);
  }
}

TEST_CASE("duality for maps and the triangle inequality") {
  ContactIsotopy a = planar_bump(0.15, 0.1, 0.0, 0.7);
  ContactIsotopy b = planar_bump(-0.1, -0.1, 0.1, 0.7);
  Box sup{{-1.0, -1.0, 0.0}, {1.0, 1.0, 1.0}};
  SpectralConfig cfg = grid({13, 13, 2});
  ContactMap fa = contact_time_map(a), fb = contact_time_map(b);
  SpectralPair pa = c_pm_contact(fa, sup, true, 0.2, cfg);
  SpectralPair pai = c_pm_contact(inverse_contact(fa), sup, true, 0.2, cfg);
  CHECK(std::abs(pa.minus.value + pai.plus.value) <= pa.minus.error + pai.plus.error + 1e-6);
  CHECK(std::abs(pa.plus.value + pai.minus.value) <= pa.plus.error + pai.minus.error + 1e-6);
  SpectralPair pb = c_pm_contact(fb, sup, true, 0.2, cfg);
  SpectralPair pab = c_pm_contact(compose_contact(fa, fb), sup, true, 0.3, cfg);
  CHECK(pab.plus.value <= pa.plus.value + pb.plus.value + pa.plus.error + pb.plus.error + pab.plus.error);
  CHECK(pb.plus.value == doctest::Approx(0.0).epsilon(0.02));
  CHECK(pb.minus.value <= -0.1 + pb.minus.error + 1e-6);
}

TEST_CASE("radial continuation reaches the plateau value") {
  RadialProfile prof;
  prof.A = 2.3;
  prof.a = 0.02;
  prof.b = 2.45;
  prof.delta = 0.05;
  RadialContinuation rc = c_plus_radial(prof, std::sqrt(2.5 / std::numbers::pi), grid({32}));
  CHECK(rc.start.plus.value == doctest::Approx(0.2 * prof.A).epsilon(1e-3));
  CHECK(rc.value == doctest::Approx(prof.A));
  CHECK(rc.t.back() == 1.0);
  CHECK(std::ceil(rc.value) == 3.0);
  RadialProfile steep = prof;
  steep.b = 1.0;
  CHECK_THROWS_AS(c_plus_radial(steep, 1.0, grid({16})), Error);
}

TEST_CASE("barcode csv") {
  FilteredComplex K = grid_complex({4}, {true}, {0.0, 1.0, 0.5, 2.0}, -1.0);
  std::string csv = barcode_csv(relative_persistence(K));
  CHECK(csv.rfind("birth,death,degree\n", 0) == 0);
  CHECK(csv.find("0,inf,0") != std::string::npos);
  CHECK(csv.find("2,inf,1") != std::string::npos);
  CHECK(csv.find("0.5,1,0") != std::string::npos);
}
