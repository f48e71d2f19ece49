#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "lcs/chords.hpp"
#include "test_helpers.hpp"

using namespace lcs;
using namespace lcs::testing;

namespace {

ContactIsotopy bump_isotopy(double A, double cx, double cy, double r) {
  ContactIsotopy c;
  c.H = contact_bump(1, A, make_vec({cx, cy}), r);
  c.support = Box{{cx - 1.2 * r, cy - 1.2 * r, -0.5}, {cx + 1.2 * r, cy + 1.2 * r, 0.5}};
  c.integrator.step = 1e-2;
  return c;
}

ChordSearchConfig lifted_cfg() {
  ChordSearchConfig cfg;
  cfg.grid = {1, 7, 7, 1};
  cfg.quotient = {3};  // z-independent Hamiltonian
  return cfg;
}

}  // namespace

TEST_CASE("identity: degenerate family with T = 0") {
  HamiltonianIsotopy iso = s1xr3_isotopy(zero_hamiltonian(4));
  ChordSearchConfig cfg;
  cfg.grid = {2, 2, 2, 2};
  TranslatedPointSet s = find_translated_points(iso, cfg);
  CHECK(s.degenerate_family);
  REQUIRE(s.points.size() == 1);
  CHECK(s.points[0].T == 0.0);
  CHECK_FALSE(s.points[0].nondegenerate);
  CHECK(action_spectrum(s) == std::vector<double>{0.0});
}

TEST_CASE("lifted bump: translated point at the maximum with T = A") {
  const double A = 0.8;
  ContactIsotopy c = bump_isotopy(A, 0.2, -0.1, 0.7);
  HamiltonianIsotopy iso = lift_contact_isotopy(c);
  TranslatedPointSet s = find_translated_points(iso, lifted_cfg());
  const TranslatedPoint* top = nullptr;
  for (const auto& tp : s.points)
    if (!tp.family) top = &tp;
  REQUIRE(top != nullptr);
  CHECK(std::abs(top->T - A) < 1e-4);
  CHECK(std::abs(top->point[1] - 0.2) < 1e-6);
  CHECK(std::abs(top->point[2] + 0.1) < 1e-6);
  CHECK(top->essential);
  CHECK(top->nondegenerate);
  CHECK(top->residual <= 1e-8);
  CHECK(std::abs(top->g) <= 1e-8);
  CHECK(std::abs(top->total_action - top->T) < 1e-5);
  CHECK(s.degenerate_family);  // identity outside the support
  auto spec = action_spectrum(s);
  REQUIRE(spec.size() == 2);
  CHECK(spec[0] == doctest::Approx(0.0).epsilon(1e-8));
  CHECK(spec[1] == doctest::Approx(A).epsilon(1e-4));
}

TEST_CASE("lift correspondence with contact translated points") {
  ContactIsotopy c = bump_isotopy(0.6, 0.0, 0.1, 0.6);
  ChordSearchConfig cfg = lifted_cfg();
  TranslatedPointSet lifted = find_translated_points(lift_contact_isotopy(c), cfg);
  ChordSearchConfig ccfg;
  ccfg.grid = {7, 7, 1};
  ccfg.quotient = {2};
  TranslatedPointSet contact = find_contact_translated_points(c, ccfg);
  auto isolated = [](const TranslatedPointSet& s, int off) {
    std::vector<Vec> v;
    for (const auto& tp : s.points)
      if (!tp.family) v.push_back(tp.point.segment(off, 2));
    return v;
  };
  auto a = isolated(lifted, 1), b = isolated(contact, 0);
  REQUIRE(a.size() == b.size());
  for (size_t i = 0; i < a.size(); ++i) CHECK((a[i] - b[i]).norm() < cfg.dedup_radius);
  CHECK(lifted.degenerate_family == contact.degenerate_family);
}

TEST_CASE("plateau Hamiltonian gives degenerate points") {
  // constant on an open set: every point of the plateau is a translated point
  ContactIsotopy c;
  c.H = analytic_hamiltonian(3, [](double, const auto& x) {
    using T = std::decay_t<decltype(x[0])>;
    return 0.5 * plateau(T(sqrt(sqr(x[0]) + sqr(x[1]) + 1e-12)), 0.5);
  }, true);
  c.support = Box{{-0.3, -0.3, -0.1}, {0.3, 0.3, 0.1}};
  c.integrator.step = 1e-2;
  ChordSearchConfig cfg;
  cfg.grid = {1, 3, 3, 1};
  cfg.quotient = {3};
  TranslatedPointSet s = find_translated_points(lift_contact_isotopy(c), cfg);
  REQUIRE_FALSE(s.points.empty());
  for (const auto& tp : s.points) {
    CHECK_FALSE(tp.nondegenerate);
    CHECK(tp.T == doctest::Approx(0.5).epsilon(1e-6));
  }
}

TEST_CASE("spectrum of the inverse is the negated spectrum") {
  ContactIsotopy c = bump_isotopy(0.7, 0.0, 0.0, 0.6);
  HamiltonianIsotopy iso = lift_contact_isotopy(c);
  LcsMap inv = inverse_map(time_map(iso));
  TranslatedPointSet fwd = find_translated_points(iso, lifted_cfg());
  TranslatedPointSet bwd = find_translated_points(inv, iso.triple.chart, iso.support, lifted_cfg(), true);
  auto a = action_spectrum(fwd), b = action_spectrum(bwd);
  REQUIRE(a.size() == b.size());
  for (size_t i = 0; i < a.size(); ++i) CHECK(a[i] == doctest::Approx(-b[a.size() - 1 - i]).epsilon(1e-6));
}

TEST_CASE("Lee chords on T^2 from a Morse function") {
  Chart t2(2, {true, true}, {"q1", "q2"});
  CVec beta(2);
  beta << 1.0, 0.0;
  ChordSearchConfig cfg;
  cfg.grid = {8, 8};
  LeeChordSet s = lee_chords_twisted(cos_torus(1.0, 0.7), beta, t2, cfg);
  REQUIRE(s.chords.size() == 4);
  std::vector<double> T;
  for (const auto& ch : s.chords) {
    CHECK(ch.essential);
    CHECK(ch.transverse);
    CHECK(ch.total_action == doctest::Approx(ch.T).epsilon(1e-8));
    T.push_back(ch.T);
  }
  std::sort(T.begin(), T.end());
  std::vector<double> expect{-1.7, -0.3, 0.3, 1.7};
  for (int i = 0; i < 4; ++i) CHECK(std::abs(T[i] - expect[i]) < 1e-8);
  CHECK(static_cast<int>(s.chords.size()) >= cup_length_torus(2));
  CHECK(static_cast<int>(s.chords.size()) >= betti_sum_torus(2));
}

TEST_CASE("Lee chords: critical values match a grid-search oracle") {
  // f is a sum of one-variable terms, so its critical values are sums of 1D critical values;
  // locate those by sign changes of a finite-difference derivative on a fine grid
  auto crit_1d = [](double a) {
    std::vector<double> vals;
    const int n = 4000;
    auto g = [a](double q) { return a * std::cos(2 * M_PI * q); };
    auto d = [&](double q) { return (g(q + 1e-6) - g(q - 1e-6)) / 2e-6; };
    for (int i = 0; i < n; ++i) {
      double q0 = (i + 0.25) / n, q1 = (i + 1.25) / n;
      if (d(q0) == 0.0 || d(q0) * d(q1) < 0) vals.push_back(g(0.5 * (q0 + q1)));
    }
    return vals;
  };
  std::vector<double> oracle;
  for (double u : crit_1d(1.0))
    for (double v : crit_1d(0.7)) oracle.push_back(u + v);
  std::sort(oracle.begin(), oracle.end());
  REQUIRE(oracle.size() == 4);

  Chart t2(2, {true, true});
  CVec beta(2);
  beta << 1.0, 0.0;
  ChordSearchConfig cfg;
  cfg.grid = {8, 8};
  LeeChordSet s = lee_chords_twisted(cos_torus(1.0, 0.7), beta, t2, cfg);
  std::vector<double> T;
  for (const auto& ch : s.chords) T.push_back(ch.T);
  std::sort(T.begin(), T.end());
  REQUIRE(T.size() == 4);
  for (int i = 0; i < 4; ++i) CHECK(std::abs(T[i] - oracle[i]) < 1e-4);
}

TEST_CASE("constant function: degenerate family") {
  Chart t2(2, {true, true});
  CVec beta(2);
  beta << 1.0, 0.0;
  ChordSearchConfig cfg;
  cfg.grid = {3, 3};
  LeeChordSet s = lee_chords_twisted(constant_form(2, 0, CVec::Constant(1, 0.4)), beta, t2, cfg);
  CHECK(s.degenerate_family);
  REQUIRE(s.chords.size() == 1);
  CHECK(s.chords[0].T == doctest::Approx(0.4));
}
