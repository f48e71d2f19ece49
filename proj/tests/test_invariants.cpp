#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "lcs/invariants.hpp"
#include "test_helpers.hpp"

#include <cmath>
#include <numbers>
#include <random>

using namespace lcs;

namespace {

ContactIsotopy planar_bump(double A, double cx, double cy, double r) {
  ContactIsotopy c;
  c.H = contact_bump(1, A, make_vec({cx, cy}), r);
  c.support = Box{{cx - 1.2 * r, cy - 1.2 * r, 0.0}, {cx + 1.2 * r, cy + 1.2 * r, 1.0}};
  c.periodic_z = true;
  c.integrator.step = 2e-2;
  return c;
}

ContactMap bump_map(double A, double cx, double cy, double r) { return contact_time_map(planar_bump(A, cx, cy, r)); }

SpectralDomain planar_domain(double bound = 0.5) {
  SpectralDomain d;
  d.support = Box{{-1.0, -1.0, 0.0}, {1.0, 1.0, 1.0}};
  d.bound = bound;
  d.cfg.base_res = {13, 13, 2};
  return d;
}

ContactIsotopy translation(double v, double L) {
  ContactIsotopy c;
  c.H = translation_hamiltonian(v, L);
  c.support = Box{{-2 * L, -2 * L, 0.0}, {2 * L, 2 * L, 1.0}};
  c.periodic_z = true;
  c.integrator.step = 2e-2;
  return c;
}

double area_radius(double area) { return std::sqrt(area / std::numbers::pi); }

}  // namespace

TEST_CASE("integer snapping and the metric formula") {
  CHECK(snap_integer(2.00003) == 2.0);
  CHECK(snap_integer(1.999) == 1.999);
  SpectralPair p;
  p.plus.value = 1.00004;
  p.minus.value = -0.99996;
  CHECK(metric_from_pair(p) == 2);
  p.plus.value = 0.3;
  p.minus.value = 0.0;
  CHECK(metric_from_pair(p) == 1);
  p.plus.value = 0.0;
  CHECK(metric_from_pair(p) == 0);
}

TEST_CASE("spectral order on bumps") {
  SpectralDomain dom = planar_domain();
  ContactMap id = identity_contact();
  ContactMap pos = bump_map(0.3, 0.0, 0.0, 0.8);
  CHECK(preceq(pos, pos, dom).verdict);
  OrderVerdict up = preceq(id, pos, dom);
  CHECK(up.verdict);
  CHECK(up.witness.error >= 0.0);
  OrderVerdict down = preceq(pos, id, dom);
  CHECK_FALSE(down.verdict);
  CHECK(down.witness.value > down.witness.error);
}

TEST_CASE("nonnegative Hamiltonian certificate") {
  ContactIsotopy pos = planar_bump(0.3, 0.0, 0.0, 0.8), neg = planar_bump(-0.3, 0.0, 0.0, 0.8);
  CHECK(leq_certificate(pos.H, pos.support).verdict);
  OrderVerdict v = leq_certificate(neg.H, neg.support);
  CHECK_FALSE(v.verdict);
  CHECK(v.witness.value == doctest::Approx(-0.3));
}

TEST_CASE("metric of the identity and the model requirement") {
  SpectralDomain dom = planar_domain();
  CHECK(metric_d(identity_contact(), identity_contact(), dom).d == 0);
  SpectralDomain open = dom;
  open.periodic_z = false;
  CHECK_THROWS_AS(metric_d(identity_contact(), identity_contact(), open), Error);
}

TEST_CASE("metric axioms and integer conjugation invariance on sampled tuples") {
  SpectralDomain dom = planar_domain();
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> amp(-0.2, 0.2), ctr(-0.1, 0.1);
  for (int trial = 0; trial < 3; ++trial) {
    ContactMap a = bump_map(amp(rng), ctr(rng), ctr(rng), 0.8);
    ContactMap b = bump_map(amp(rng), ctr(rng), ctr(rng), 0.8);
    ContactMap c = bump_map(amp(rng), ctr(rng), ctr(rng), 0.8);
    int ab = metric_d(a, b, dom).d, ba = metric_d(b, a, dom).d;
    int bc = metric_d(b, c, dom).d, ac = metric_d(a, c, dom).d;
    CHECK(ab == ba);
    CHECK(ac <= ab + bc);
    CHECK(ab >= 0);

    // phi = a o b^-1; conjugate by c
    SpectralPair p = c_pm_of(compose(a, inverse(b)), dom);
    SpectralPair q = c_pm_of(compose(c, compose(compose(a, inverse(b)), inverse(c))), dom);
    CHECK(std::ceil(snap_integer(p.plus.value)) == std::ceil(snap_integer(q.plus.value)));
    CHECK(std::floor(snap_integer(p.minus.value)) == std::floor(snap_integer(q.minus.value)));
  }
}

TEST_CASE("order compatibility: a <= b <= c gives d(a, b) <= d(a, c)") {
  SpectralDomain dom = planar_domain();
  ContactMap a = identity_contact(), b = bump_map(0.15, 0.0, 0.0, 0.8), c = bump_map(0.3, 0.0, 0.0, 0.8);
  REQUIRE(preceq(a, b, dom).verdict);
  REQUIRE(preceq(b, c, dom).verdict);
  CHECK(metric_d(a, b, dom).d <= metric_d(a, c, dom).d);
}

TEST_CASE("lifted pairs: the lcs metric equals the contact metric") {
  ContactIsotopy c1 = planar_bump(0.25, 0.0, 0.0, 0.8), c2 = planar_bump(-0.2, 0.1, 0.0, 0.8);
  SpectralDomain cont = planar_domain();
  SpectralDomain lcs;
  lcs.support = Box{{0.0, -1.0, -1.0, 0.0}, {1.0, 1.0, 1.0, 1.0}};
  lcs.bound = 0.5;
  lcs.cfg.base_res = {3, 9, 9, 2};
  int dc = metric_d(contact_time_map(c1), contact_time_map(c2), cont).d;
  int dl = metric_d(lifted_time_map(c1), lifted_time_map(c2), lcs).d;
  CHECK(dc == dl);
  CHECK(dc == 1);
}

TEST_CASE("displacement energy bounds the capacity") {
  BallDomain U{-0.3, 0.0, 0.25};
  ContactIsotopy psi = translation(0.7, 0.7);
  SpectralDomain dom = planar_domain(2.0);
  dom.support = psi.support;
  CapacityEstimate cap = capacity_lower_bound(U, radial_family(U, 2), SpectralConfig{{16}});
  REQUIRE(cap.lower_bound == 1);
  DisplacementReport rep = displacement_energy_upper(U, psi, dom, cap.lower_bound);
  CHECK(rep.energy_capacity_ok);
  CHECK(rep.upper >= 1);

  // the identity cannot displace
  ContactIsotopy still = psi;
  still.H = zero_hamiltonian(3);
  CHECK_THROWS_AS(displacement_energy_upper(U, still, dom), Error);

  // a smaller ball needs a shorter push
  BallDomain V{-0.3, 0.0, 0.12};
  ContactIsotopy shorter = translation(0.35, 0.7);
  DisplacementReport small = displacement_energy_upper(V, shorter, dom);
  CHECK(small.upper <= rep.upper);
}

TEST_CASE("ball capacities are the integer ceiling of the area") {
  for (auto [area, expect] : {std::pair{0.5, 1}, {1.5, 2}, {2.5, 3}}) {
    BallDomain U{0.0, 0.0, area_radius(area)};
    auto fam = radial_family(U, 2);
    for (const auto& p : fam) {
      CHECK(p.slope() < 1.0);
      CHECK(p.b < area);
    }
    CapacityEstimate est = capacity_lower_bound(U, fam, SpectralConfig{{32}});
    CHECK(est.lower_bound == expect);
    CHECK(est.reference == expect);
    CHECK_FALSE(est.falsified);
    CHECK(est.witnesses.size() == 2);
  }
}

TEST_CASE("capacity of the identity family and support violations") {
  BallDomain U{0.0, 0.0, 0.5};
  SpectralDomain dom = planar_domain();
  ContactIsotopy id;
  id.H = zero_hamiltonian(3);
  id.support = dom.support;
  CHECK(capacity_lower_bound(U, std::vector<ContactIsotopy>{id}, dom).lower_bound == 0);
  CHECK_THROWS_AS(capacity_lower_bound(U, std::vector<ContactIsotopy>{planar_bump(0.2, 0.0, 0.0, 0.9)}, dom), Error);
  RadialProfile wide;
  wide.A = 0.5;
  wide.b = 1.0;
  CHECK_THROWS_AS(capacity_lower_bound(U, std::vector<RadialProfile>{wide}, SpectralConfig{{16}}), Error);
}

TEST_CASE("capacity estimates are monotone on nested balls") {
  int prev = 0;
  for (double area : {0.4, 1.2, 2.2}) {
    BallDomain U{0.0, 0.0, area_radius(area)};
    int est = capacity_lower_bound(U, radial_family(U, 1), SpectralConfig{{24}}).lower_bound;
    CHECK(est >= prev);
    prev = est;
  }
}

TEST_CASE("non-squeezing verdicts") {
  auto R = [](double area) { return area_radius(area); };
  NonsqueezingReport r = nonsqueezing_report(R(2.6), R(1.9));
  CHECK(r.obstructed);
  CHECK(r.k == 2);
  r = nonsqueezing_report(R(0.9), R(0.2));
  CHECK_FALSE(r.obstructed);
  CHECK(r.verdict.find("squeezing possible") != std::string::npos);
  CHECK(nonsqueezing_report(R(1.5), R(1.5)).obstructed == false);
  CHECK(nonsqueezing_report(R(2.0), R(2.0)).obstructed);
  CHECK(nonsqueezing_report(R(2.0), R(2.0)).k == 2);
  CHECK_FALSE(nonsqueezing_report(R(3.7), R(3.2)).obstructed);
  CHECK(nonsqueezing_report(R(4.1), R(0.3)).k == 1);
}
