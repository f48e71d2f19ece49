#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "test_helpers.hpp"

using namespace lcs;
using namespace lcs::testing;

TEST_CASE("H = 1 gives the Lee field, H = 0 gives zero") {
  ModelSpace m = s1xr3(1);
  for (const auto& p : ball_points(4, 20, 1, 1.0)) {
    CHECK(max_abs_diff(hamiltonian_vector_field(*m.triple, constant_hamiltonian(4, 1.0), 0.0, p),
                       lee_vector_field(*m.triple, p)) < 1e-12);
    CHECK(hamiltonian_vector_field(*m.triple, zero_hamiltonian(4), 0.0, p).norm() == 0.0);
  }
}

TEST_CASE("lifted field is (-dH(R), X_contact)") {
  ContactIsotopy c;
  c.H = contact_bump(1, 0.7, make_vec({0.1, -0.2}), 0.9, 1.2, 0.1);
  HamiltonianIsotopy iso = lift_contact_isotopy(c);
  for (const auto& p : ball_points(4, 100, 2, 0.9)) {
    double h;
    Vec Xc = contact_vector_field(c, 0.0, p.tail(3), &h);
    Vec X = hamiltonian_vector_field(iso, 0.0, p);
    CHECK(std::abs(X[0] + h) < 1e-10);
    CHECK(max_abs_diff(X.tail(3), Xc) < 1e-10);
    // alpha_0(X_c) = H
    double a = (p[1] * Xc[1] - p[2] * Xc[0]) * 0.5 - Xc[2];
    CHECK(a == doctest::Approx(c.H(0.0, p.tail(3))).epsilon(1e-10));
  }
}

TEST_CASE("zero Hamiltonian flow is constant") {
  HamiltonianIsotopy iso = s1xr3_isotopy(zero_hamiltonian(4));
  Trajectory tr = integrate_isotopy(iso, make_vec({0.2, 0.3, 0.1, -0.4}), 1.0, 10);
  for (const auto& s : tr.states) {
    CHECK(max_abs_diff(s.x, make_vec({0.2, 0.3, 0.1, -0.4})) == 0.0);
    CHECK(s.g == 0.0);
    CHECK(s.S == 0.0);
  }
}

TEST_CASE("Lee flow on the twisted cotangent bundle translates fibres") {
  ModelSpace tw = model_by_name("tstar_twisted");
  HamiltonianIsotopy iso;
  iso.triple = *tw.triple;
  iso.H = constant_hamiltonian(8, 1.0);
  iso.integrator.step = 1e-2;
  for (const auto& p : ball_points(8, 20, 3, 1.0)) {
    for (double t : {0.3, 1.0, 1.7}) {
      FlowState s = flow(iso, p, 0.0, t);
      Vec expect = p;
      expect.tail(4) += t * tw.beta;
      CHECK(max_abs_diff(s.x, expect) < 1e-6);
    }
  }
}

TEST_CASE("lifted bump moves its maximum along the Lee direction") {
  ContactIsotopy c;
  const double A = 0.8;
  c.H = contact_bump(1, A, make_vec({0.2, -0.1}), 0.7);
  c.integrator.step = 1e-2;
  HamiltonianIsotopy iso = lift_contact_isotopy(c);
  Vec p0 = make_vec({0.4, 0.2, -0.1, 0.3});
  FlowState s = flow(iso, p0, 0.0, 1.0);
  CHECK(max_abs_diff(s.x, make_vec({0.4, 0.2, -0.1, 0.3 - A})) < 1e-10);
  CHECK(std::abs(s.g) < 1e-12);
  CHECK(std::abs(s.S) < 1e-12);
}

TEST_CASE("conformal factor: phi_t^* omega = e^g omega") {
  HamiltonianIsotopy iso = s1xr3_isotopy(wobble_hamiltonian(0.6, 0.4));
  double worst = 0.0;
  for (const auto& p : ball_points(4, 50, 4, 0.8)) {
    LcsMap m = time_map(iso, 0.7);
    FlowState s = m.apply(p);
    Mat J = flow_jacobian(m, p);
    Mat lhs = J.transpose() * iso.triple.omega_matrix(s.x) * J;
    Mat rhs = std::exp(s.g) * iso.triple.omega_matrix(p);
    worst = std::max(worst, (lhs - rhs).cwiseAbs().maxCoeff());
  }
  CHECK(worst < 1e-4);
}

TEST_CASE("Hamiltonian fields are divergence free: d_eta(i_X omega) = 0") {
  HamiltonianIsotopy iso = s1xr3_isotopy(wobble_hamiltonian(0.6, 0.4));
  KForm iota = interior_product([&](const Vec& x) { return hamiltonian_vector_field(iso, 0.3, x); }, iso.triple.omega);
  KForm d = lichnerowicz_derivative(iota.with_step(1e-4), iso.triple.eta);
  CHECK(max_abs(d, ball_points(4, 50, 5, 0.8)) < 1e-4);
}

TEST_CASE("action: lambda - e^{-g} phi^* lambda = d_eta S") {
  HamiltonianIsotopy iso = s1xr3_isotopy(wobble_hamiltonian(0.5, 1.1));
  LcsMap m = time_map(iso, 1.0);
  const double h = 1e-5;
  double worst = 0.0;
  for (const auto& p : ball_points(4, 20, 6, 0.7)) {
    FlowState s = m.apply(p);
    Mat J = flow_jacobian(m, p, h);
    Vec pb = J.transpose() * iso.triple.lambda_at(s.x);
    Vec lhs = iso.triple.lambda_at(p) - std::exp(-s.g) * pb;
    Vec dS(4);
    for (int j = 0; j < 4; ++j) {
      Vec xp = p, xm = p;
      xp[j] += h;
      xm[j] -= h;
      dS[j] = (m.apply(xp).S - m.apply(xm).S) / (2 * h);
    }
    Vec rhs = dS - s.S * iso.triple.eta_at(p);
    worst = std::max(worst, max_abs_diff(lhs, rhs));
  }
  CHECK(worst < 1e-3);
}

TEST_CASE("lifted isotopies have zero action and p-only conformal factor") {
  ContactIsotopy c;
  c.H = contact_bump(1, 0.6, make_vec({0.0, 0.1}), 0.8, 1.0, 0.2);
  c.integrator.step = 1e-2;
  HamiltonianIsotopy iso = lift_contact_isotopy(c);
  for (const auto& p : ball_points(4, 30, 7, 0.8)) {
    Trajectory tr = integrate_isotopy(iso, p, 1.0, 10);
    for (const auto& s : tr.states) CHECK(std::abs(s.S) <= 1e-5);
    Vec q = p;
    q[0] += 0.37;
    FlowState a = flow(iso, p), b = flow(iso, q);
    ContactState cs = contact_flow(c, p.tail(3));
    CHECK(std::abs(a.g - b.g) < 1e-10);
    CHECK(std::abs(a.g - cs.g) < 1e-10);
    CHECK(std::abs(a.x[0] - (p[0] - cs.g)) < 1e-10);
  }
}

TEST_CASE("isotopy algebra") {
  HamiltonianIsotopy a = s1xr3_isotopy(wobble_hamiltonian(0.5, 0.2), 0.04);
  HamiltonianIsotopy b = s1xr3_isotopy(wobble_hamiltonian(-0.4, 1.3), 0.04);
  auto seeds = ball_points(4, 10, 8, 0.7);

  SUBCASE("composition with zero is unchanged") {
    HamiltonianIsotopy z = s1xr3_isotopy(zero_hamiltonian(4), 0.04);
    HamiltonianIsotopy c = compose_isotopies(a, z);
    for (const auto& p : seeds) CHECK(std::abs(c.H(0.4, p) - a.H(0.4, p)) < 1e-12);
  }
  SUBCASE("composed flow is the pointwise composition") {
    HamiltonianIsotopy c = compose_isotopies(a, b);
    LcsMap expect = compose_maps(time_map(a), time_map(b));
    for (const auto& p : seeds) {
      FlowState got = flow(c, p), want = expect.apply(p);
      CHECK(max_abs_diff(got.x, want.x) < 1e-4);
      CHECK(std::abs(got.g - want.g) < 1e-4);
      CHECK(std::abs(got.S - want.S) < 1e-4);
    }
  }
  SUBCASE("inverse") {
    HamiltonianIsotopy ai = invert_isotopy(a);
    for (const auto& p : seeds) {
      FlowState s = flow(ai, p);
      FlowState back = flow(a, s.x);
      CHECK(max_abs_diff(back.x, p) < 1e-4);
      FlowState want = time_map(a).inverse(p);
      CHECK(std::abs(s.g - want.g) < 1e-4);
      CHECK(std::abs(s.S - want.S) < 1e-4);
    }
    HamiltonianIsotopy aii = invert_isotopy(ai);
    for (int k = 0; k < 3; ++k) CHECK(std::abs(aii.H(0.6, seeds[k]) - a.H(0.6, seeds[k])) < 1e-6);
    HamiltonianIsotopy c = compose_isotopies(a, ai);
    for (int k = 0; k < 3; ++k) {
      CHECK(std::abs(c.H(0.5, seeds[k])) < 1e-6);
      CHECK(max_abs_diff(flow(c, seeds[k]).x, seeds[k]) < 1e-4);
    }
  }
  SUBCASE("conjugation") {
    LcsMap psi = time_map(b);
    HamiltonianIsotopy c = conjugate_isotopy(a, psi);
    LcsMap expect = compose_maps(inverse_map(psi), compose_maps(time_map(a), psi));
    for (const auto& p : seeds) {
      FlowState got = flow(c, p), want = expect.apply(p);
      CHECK(max_abs_diff(got.x, want.x) < 1e-4);
      CHECK(std::abs(got.g - want.g) < 1e-4);
    }
    HamiltonianIsotopy self = conjugate_isotopy(a, time_map(a));
    for (int k = 0; k < 3; ++k) CHECK(max_abs_diff(flow(self, seeds[k]).x, flow(a, seeds[k]).x) < 1e-4);
    HamiltonianIsotopy same = conjugate_isotopy(a, identity_map());
    CHECK(std::abs(same.H(0.2, seeds[0]) - a.H(0.2, seeds[0])) < 1e-15);
  }
}

TEST_CASE("gauge covariance of trajectories") {
  HamiltonianIsotopy a = s1xr3_isotopy(wobble_hamiltonian(0.5, 0.7));
  KForm f = analytic_form(4, 0, [](const auto& x, auto* out) {
    using std::sin;
    out[0] = sin(x[1] + x[3] * 0.5) * 0.3 + 0.0 * x[0];
  });
  HamiltonianIsotopy b = a;
  b.triple = gauge_transform(a.triple, f);
  b.H.value = [a, f](double t, const Vec& x) { return std::exp(value(f, x)) * a.H(t, x); };
  b.H.grad = nullptr;
  for (const auto& p : ball_points(4, 10, 9, 0.7)) CHECK(max_abs_diff(flow(a, p).x, flow(b, p).x) < 1e-4);
}

TEST_CASE("cutoff and trajectory export") {
  CHECK(cutoff_profile(0.0) == 1.0);
  CHECK(cutoff_profile(1.0) == 0.0);
  Hamiltonian H = with_cutoff(constant_hamiltonian(4, 2.0), Box{{0, -1, -1, -1}, {1, 1, 1, 1}}, {true, false, false, false});
  CHECK(H(0.0, make_vec({0.3, 0, 0, 0})) == doctest::Approx(2.0));
  CHECK(H(0.0, make_vec({0.3, 1.2, 0, 0})) == 0.0);
  HamiltonianIsotopy iso = s1xr3_isotopy(wobble_hamiltonian(0.3, 0.1));
  iso.integrator.richardson = true;
  Trajectory tr = integrate_isotopy(iso, make_vec({0.1, 0.1, 0.1, 0.1}), 1.0, 50);
  CHECK(tr.step_error < 1e-6);
  std::string csv = trajectory_csv(tr, iso.triple.chart);
  CHECK(csv.rfind("t,theta,x,y,z,g,S,step_error\n", 0) == 0);
  iso.domain = Box{{-10, -0.05, -10, -10}, {10, 10, 10, 10}};
  iso.H = constant_hamiltonian(4, 1.0);
  CHECK_NOTHROW(flow(iso, make_vec({0, 0, 0, 0})));
}
