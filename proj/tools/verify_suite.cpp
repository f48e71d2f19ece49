#include "verify_suite.hpp"

#include "lcs/chords.hpp"
#include "lcs/invariants.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <map>
#include <numbers>
#include <random>
#include <sstream>

namespace lcs::suite {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

struct Checker {
  std::vector<std::string> failures;
  int count = 0;
  void operator()(bool ok, const std::string& what) {
    ++count;
    if (!ok) failures.push_back(what);
  }
};

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(6);
  os << v;
  return os.str();
}

std::vector<Vec> box_points(int dim, int count, std::uint64_t seed, double r, bool first_periodic = false) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-r, r), w(0.0, 1.0);
  std::vector<Vec> out;
  for (int k = 0; k < count; ++k) {
    Vec p(dim);
    for (int i = 0; i < dim; ++i) p[i] = (i == 0 && first_periodic) ? w(rng) : u(rng);
    out.push_back(p);
  }
  return out;
}

Box cube(int dim, double r) {
  Box b;
  b.lo.assign(dim, -r);
  b.hi.assign(dim, r);
  return b;
}

// ---- calculus

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

KForm as_sampled(const KForm& f) {
  return sampled_form(f.dim(), f.degree(), [f](const Vec& x) { return f.at(x); });
}

void calculus(Checker& check, std::string& summary) {
  auto pts4 = box_points(4, 100, 31, 1.0), pts3 = box_points(3, 100, 32, 1.0);
  double worst = 0.0;
  for (int trial = 0; trial < 10; ++trial) {
    KForm eta = exterior_derivative(random_form(4, 0, 100 + trial));
    for (int k = 0; k <= 2; ++k) {
      KForm s = random_form(4, k, 200 + 10 * trial + k);
      worst = std::max(worst, max_abs(lichnerowicz_derivative(lichnerowicz_derivative(s, eta), eta), pts4));
    }
  }
  check(worst <= 1e-8, "d_eta^2 (analytic) = " + fmt(worst));
  double worst_fd = 0.0;
  for (int trial = 0; trial < 5; ++trial) {
    KForm eta = as_sampled(exterior_derivative(random_form(3, 0, 300 + trial)));
    KForm s = as_sampled(random_form(3, 1, 400 + trial));
    double scale = std::max(1.0, max_abs(s, pts3));
    worst_fd = std::max(worst_fd, max_abs(lichnerowicz_derivative(lichnerowicz_derivative(s, eta), eta), pts3) / scale);
  }
  check(worst_fd <= 1e-3, "d_eta^2 (finite differences) = " + fmt(worst_fd));
  double gauge = 0.0;
  for (int trial = 0; trial < 10; ++trial) {
    KForm eta = exterior_derivative(random_form(3, 0, 500 + trial));
    KForm f = random_form(3, 0, 600 + trial);
    KForm s = random_form(3, trial % 3, 700 + trial);
    KForm lhs = lichnerowicz_derivative(s, add(eta, exterior_derivative(f)));
    KForm rhs = wedge(exp_field(f), lichnerowicz_derivative(wedge(exp_field(f, -1.0), s), eta));
    gauge = std::max(gauge, max_difference(lhs, rhs, pts3));
  }
  check(gauge <= 1e-8, "gauge identity = " + fmt(gauge));
  summary = "d_eta^2 " + fmt(worst) + ", fd " + fmt(worst_fd) + ", gauge " + fmt(gauge);
}

// ---- model structures

void models(Checker& check, std::string& summary) {
  double worst_triple = 0.0;
  for (const auto& m : {s1xr3(1), s1xr2xs1(1), s1xr3(2), model_by_name("tstar_twisted")}) {
    TripleReport r = verify_lcs_triple(*m.triple, 100, cube(m.chart.dim, 2.0));
    worst_triple = std::max({worst_triple, r.d_eta, r.d_eta_omega, r.omega_minus_dlambda});
    check(r.ok(1e-9), "triple " + m.name + " fails verification");
  }
  ModelSpace tw = model_by_name("tstar_twisted");
  HamiltonianIsotopy lee;
  lee.triple = *tw.triple;
  lee.H = constant_hamiltonian(8, 1.0);
  lee.integrator.step = 1e-2;
  double lee_err = 0.0;
  for (const auto& p : box_points(8, 20, 3, 1.0, true))
    for (double t : {0.3, 1.0, 1.7}) {
      Vec expect = p;
      expect.tail(4) += t * tw.beta;
      lee_err = std::max(lee_err, (flow(lee, p, 0.0, t).x - expect).cwiseAbs().maxCoeff());
    }
  check(lee_err <= 1e-6, "Lee flow deviates by " + fmt(lee_err));

  auto pts = box_points(8, 100, 8, 1.0);
  double trip = 0.0;
  for (const auto& p : pts) trip = std::max(trip, (tau_inverse(tau_map(p)) - p).cwiseAbs().maxCoeff());
  check(trip <= 1e-7, "tau round trip " + fmt(trip));
  KForm taut = analytic_form(8, 1, [](const auto& v, auto* out) {
    for (int i = 0; i < 4; ++i) {
      out[i] = v[4 + i];
      out[4 + i] = 0.0 * v[0];
    }
  });
  KForm S = analytic_form(8, 0, [](const auto& v, auto* out) { out[0] = tau_action(v.data()); });
  double pb = max_difference(pullback(tau_chart_map(), taut),
                             sub(product_lambda(), lichnerowicz_derivative(S, product_eta())), pts);
  check(pb <= 1e-7, "tau pullback identity " + fmt(pb));
  summary = "triples " + fmt(worst_triple) + ", Lee flow " + fmt(lee_err) + ", tau " + fmt(trip) + "/" + fmt(pb);
}

// ---- dynamics

Hamiltonian wobble(double amp, double phase) {
  return analytic_hamiltonian(4, [=](double t, const auto& v) {
    using T = std::decay_t<decltype(v[0])>;
    using std::sin;
    T r2 = sqr(v[1] - 0.1) + sqr(v[2] + 0.05) + sqr(v[3]);
    T th = sin(v[0] * kTwoPi + phase);
    return amp * (1.0 + 0.5 * t) * bump_profile(T(r2 * (1.0 / 2.25))) * (th * 0.3 + 1.0 + v[1] * 0.2);
  });
}

HamiltonianIsotopy s1xr3_iso(const Hamiltonian& H, double step) {
  HamiltonianIsotopy iso;
  iso.triple = *s1xr3(1).triple;
  iso.H = H;
  iso.support = Box{{0.0, -1.5, -1.5, -1.5}, {1.0, 1.5, 1.5, 1.5}};
  iso.integrator.step = step;
  return iso;
}

Mat jacobian(const LcsMap& m, const Vec& x, double h = 1e-5) {
  const int n = static_cast<int>(x.size());
  Mat J(n, n);
  for (int j = 0; j < n; ++j) {
    Vec xp = x, xm = x;
    xp[j] += h;
    xm[j] -= h;
    J.col(j) = (m.apply(xp).x - m.apply(xm).x) / (2 * h);
  }
  return J;
}

void dynamics(Checker& check, std::string& summary) {
  HamiltonianIsotopy iso = s1xr3_iso(wobble(0.6, 0.4), 1e-2);
  double conf = 0.0;
  auto seeds = box_points(4, 50, 4, 0.8, true);
  for (double t : {0.35, 0.7, 1.0}) {
    LcsMap m = time_map(iso, t);
    for (const auto& p : seeds) {
      FlowState s = m.apply(p);
      Mat J = jacobian(m, p);
      Mat lhs = J.transpose() * iso.triple.omega_matrix(s.x) * J;
      conf = std::max(conf, (lhs - std::exp(s.g) * iso.triple.omega_matrix(p)).cwiseAbs().maxCoeff());
    }
  }
  check(conf <= 1e-4, "conformal factor relation " + fmt(conf));

  ContactIsotopy c;
  c.H = contact_bump(1, 0.6, make_vec({0.0, 0.1}), 0.8, 1.0, 0.2);
  c.integrator.step = 1e-2;
  HamiltonianIsotopy lifted = lift_contact_isotopy(c);
  double act = 0.0;
  for (const auto& p : box_points(4, 30, 7, 0.8, true))
    for (const auto& s : integrate_isotopy(lifted, p, 1.0, 10).states) act = std::max(act, std::abs(s.S));
  check(act <= 1e-5, "lifted action " + fmt(act));

  HamiltonianIsotopy a = s1xr3_iso(wobble(0.5, 0.2), 0.04), b = s1xr3_iso(wobble(-0.4, 1.3), 0.04);
  auto pts = box_points(4, 10, 8, 0.7, true);
  double alg = 0.0;
  auto diff = [&](const FlowState& x, const FlowState& y) {
    alg = std::max({alg, (x.x - y.x).cwiseAbs().maxCoeff(), std::abs(x.g - y.g), std::abs(x.S - y.S)});
  };
  HamiltonianIsotopy ab = compose_isotopies(a, b), ai = invert_isotopy(a);
  LcsMap ab_map = compose_maps(time_map(a), time_map(b));
  LcsMap psi = time_map(b);
  HamiltonianIsotopy conj = conjugate_isotopy(a, psi);
  LcsMap conj_map = compose_maps(inverse_map(psi), compose_maps(time_map(a), psi));
  for (const auto& p : pts) {
    diff(flow(ab, p), ab_map.apply(p));
    diff(flow(ai, p), time_map(a).inverse(p));
    diff(flow(conj, p), conj_map.apply(p));
  }
  check(alg <= 1e-4, "composition/inverse/conjugation " + fmt(alg));
  summary = "conformal " + fmt(conf) + ", action " + fmt(act) + ", algebra " + fmt(alg);
}

// ---- chords

ContactIsotopy chord_bump(double A, double cx, double cy, double r) {
  ContactIsotopy c;
  c.H = contact_bump(1, A, make_vec({cx, cy}), r);
  c.support = Box{{cx - 1.2 * r, cy - 1.2 * r, -0.5}, {cx + 1.2 * r, cy + 1.2 * r, 0.5}};
  c.integrator.step = 1e-2;
  return c;
}

void chords(Checker& check, std::string& summary) {
  Chart t2(2, {true, true}, {"q1", "q2"});
  CVec beta(2);
  beta << 1.0, 0.0;
  ChordSearchConfig cfg;
  cfg.grid = {8, 8};
  const double a = 1.0, b = 0.7;
  LeeChordSet s = lee_chords_twisted(cos_torus(a, b), beta, t2, cfg);
  int essential = 0, transverse = 0;
  std::vector<double> T;
  for (const auto& ch : s.chords) {
    essential += ch.essential;
    transverse += ch.transverse;
    T.push_back(ch.T);
  }
  std::sort(T.begin(), T.end());
  std::vector<double> expect{-a - b, -a + b, a - b, a + b};
  check(s.chords.size() == 4, "chord count " + std::to_string(s.chords.size()));
  check(essential == 4 && transverse == 4, "essential/transverse " + std::to_string(essential) + "/" +
                                               std::to_string(transverse));
  if (T.size() == 4)
    for (int i = 0; i < 4; ++i) check(std::abs(T[i] - expect[i]) < 1e-8, "chord action " + fmt(T[i]));
  check(essential >= cup_length_torus(2), "cup-length bound");
  check(essential >= betti_sum_torus(2), "Betti-sum bound");
  summary = std::to_string(essential) + " essential chords";
  for (double t : T) summary += " " + fmt(t);
}

void translated(Checker& check, std::string& summary) {
  const double A = 0.8;
  ContactIsotopy c = chord_bump(A, 0.2, -0.1, 0.7);
  ChordSearchConfig cfg;
  cfg.grid = {1, 7, 7, 1};
  cfg.quotient = {3};
  TranslatedPointSet s = find_translated_points(lift_contact_isotopy(c), cfg);
  const TranslatedPoint* top = nullptr;
  for (const auto& tp : s.points)
    if (!tp.family && (!top || tp.T > top->T)) top = &tp;
  check(top != nullptr, "no isolated translated point");
  double terr = top ? std::abs(top->T - A) : 1.0;
  if (top) {
    check(terr < 1e-4, "T - max H = " + fmt(terr));
    check(std::hypot(top->point[1] - 0.2, top->point[2] + 0.1) < 1e-6, "translated point is not the maximum");
    check(top->essential, "translated point not essential");
  }

  ContactIsotopy c2 = chord_bump(0.6, 0.0, 0.1, 0.6);
  TranslatedPointSet lifted = find_translated_points(lift_contact_isotopy(c2), cfg);
  ChordSearchConfig ccfg;
  ccfg.grid = {7, 7, 1};
  ccfg.quotient = {2};
  TranslatedPointSet contact = find_contact_translated_points(c2, ccfg);
  auto isolated = [](const TranslatedPointSet& set, int off) {
    std::vector<Vec> v;
    for (const auto& tp : set.points)
      if (!tp.family) v.push_back(tp.point.segment(off, 2));
    return v;
  };
  auto la = isolated(lifted, 1), ca = isolated(contact, 0);
  // set equality at the dedup radius, both directions
  auto covered = [&](const std::vector<Vec>& x, const std::vector<Vec>& y) {
    for (const auto& p : x) {
      bool hit = false;
      for (const auto& q : y) hit = hit || (p - q).norm() < cfg.dedup_radius;
      if (!hit) return false;
    }
    return true;
  };
  check(!la.empty() && covered(la, ca) && covered(ca, la), "lift correspondence fails");
  check(lifted.degenerate_family == contact.degenerate_family, "family flags differ");
  summary = "|T - A| = " + fmt(terr) + ", " + std::to_string(la.size()) + " isolated points on both sides";
}

// ---- spectral selectors

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

SpectralConfig grid(std::vector<int> res, int fibre = 7) {
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

SpectralDomain planar_domain(double bound = 0.5) {
  SpectralDomain d;
  d.support = Box{{-1.0, -1.0, 0.0}, {1.0, 1.0, 1.0}};
  d.bound = bound;
  d.cfg.base_res = {13, 13, 2};
  return d;
}

double grid_extreme(const GFQI& F, const SpectralConfig& cfg, bool top) {
  FilteredComplex K = build_complex(F, cfg);
  return top ? *std::max_element(K.vertex_values.begin(), K.vertex_values.end())
             : *std::min_element(K.vertex_values.begin(), K.vertex_values.end());
}

void spectral(Checker& check, std::string& summary) {
  std::mt19937_64 rng(2);
  int instances = 0;
  // N = 0 identities and spectrality
  for (int trial = 0; trial < 10; ++trial) {
    int m = 1 + trial % 3;
    TrigPoly f = random_trig(m, rng), g = random_trig(m, rng);
    SpectralConfig cfg = grid({m == 3 ? 8 : 16});
    GFQI F = trig_gf(f, m);
    SpectralValue u = minmax_value(F, ClassSelector::unit, cfg);
    SpectralValue top = minmax_value(F, ClassSelector::fundamental, cfg);
    check(u.value == grid_extreme(F, cfg, false), "c(unit) != min F");
    check(top.value == grid_extreme(F, cfg, true), "c(fundamental) != max F");
    GFQI S = m < 3 ? fibred_gf(f, g, m) : F;
    SpectralConfig sc = grid({m == 1 ? 24 : 12});
    GFSearchConfig gcfg;
    gcfg.base_samples = 7;
    auto crit = critical_points(S, gcfg);
    for (ClassSelector sel : {ClassSelector::unit, ClassSelector::fundamental}) {
      SpectralValue v = minmax_value(S, sel, sc);
      double best = 1e9;
      for (const auto& c : crit) best = std::min(best, std::abs(c.value - v.value));
      check(best <= v.error + 1e-6, "spectrality: distance " + fmt(best) + " > error " + fmt(v.error));
    }
    ++instances;
  }
  // duality, continuity, monotonicity
  std::uniform_real_distribution<double> E(0.0, 0.2);
  for (int trial = 0; trial < 10; ++trial) {
    int m = 1 + trial % 2;
    TrigPoly f = random_trig(m, rng), g = random_trig(m, rng), h = random_trig(m, rng);
    GFQI F = trial % 2 ? fibred_gf(f, g, m) : trig_gf(f, m);
    SpectralConfig cfg = grid({m == 1 ? 24 : 12});
    GFQI G = F;
    auto fn = F.F;
    G.F = [fn](const DVec& q, const DVec& z) { return -fn(q, z); };
    G.Q = -F.Q;
    SpectralValue a = minmax_value(F, ClassSelector::unit, cfg), b = minmax_value(G, ClassSelector::fundamental, cfg);
    check(std::abs(a.value + b.value) <= a.error + b.error + 1e-12, "Poincare duality");
    double eps = E(rng), hb = h.bound();
    GFQI Fp = F, Fm = F;
    Fp.F = [fn, h, eps, hb](const DVec& q, const DVec& z) { return fn(q, z) + eps * h(q) / hb; };
    Fm.F = [fn, h, eps, hb](const DVec& q, const DVec& z) { return fn(q, z) + 0.5 * eps * (1.0 + h(q) / hb); };
    Fp.perturbation_bound += eps;
    Fm.perturbation_bound += eps;
    for (ClassSelector u : {ClassSelector::unit, ClassSelector::fundamental}) {
      SpectralValue x = minmax_value(F, u, cfg), y = minmax_value(Fp, u, cfg), z = minmax_value(Fm, u, cfg);
      check(std::abs(x.value - y.value) <= eps + x.error + y.error + 1e-12, "continuity");
      check(x.value <= z.value + x.error + z.error + 1e-12, "monotonicity");
    }
  }
  // maps: identity and the triangle inequality on 10 pairs
  SpectralDomain dom = planar_domain();
  SpectralPair id = c_pm_of(identity_contact(), dom);
  check(id.plus.value == 0.0 && id.minus.value == 0.0, "c(id) != 0");
  std::uniform_real_distribution<double> amp(-0.15, 0.15), ctr(-0.1, 0.1);
  std::vector<ContactMap> pool;
  std::vector<SpectralPair> single;
  for (int k = 0; k < 5; ++k) {
    pool.push_back(contact_time_map(planar_bump(amp(rng), ctr(rng), ctr(rng), 0.8)));
    single.push_back(c_pm_of(pool.back(), dom));
  }
  int triangles = 0;
  for (int i = 0; i < 5; ++i)
    for (int j = i + 1; j < 5; ++j) {
      SpectralPair ab = c_pm_of(compose_contact(pool[i], pool[j]), dom);
      double slack = single[i].plus.error + single[j].plus.error + ab.plus.error + 1e-9;
      check(ab.plus.value <= single[i].plus.value + single[j].plus.value + slack, "triangle inequality");
      ++triangles;
    }
  summary = std::to_string(instances) + " N=0/spectrality, 10 duality/continuity/monotonicity, " +
            std::to_string(triangles) + " triangles";
}

// ---- lift equality

void lift_equality(Checker& check, std::string& summary) {
  struct B {
    double A, cx, cy, r;
  };
  double worst = 0.0;
  for (B b : {B{0.25, 0.0, 0.0, 0.8}, B{-0.2, 0.1, 0.0, 0.8}, B{0.15, -0.1, 0.1, 0.7}}) {
    ContactIsotopy c = planar_bump(b.A, b.cx, b.cy, b.r);
    SpectralPair cont = c_pm_contact(contact_time_map(c), Box{{-1.0, -1.0, 0.0}, {1.0, 1.0, 1.0}}, true, 0.5,
                                     grid({13, 13, 2}, 9));
    SpectralPair lcs = c_pm_graph(lifted_time_map(c), Box{{0.0, -1.0, -1.0, 0.0}, {1.0, 1.0, 1.0, 1.0}}, true, 0.5,
                                  grid({3, 13, 13, 2}, 9));
    double dp = std::abs(cont.plus.value - lcs.plus.value), dm = std::abs(cont.minus.value - lcs.minus.value);
    check(dp <= cont.plus.error + lcs.plus.error + 1e-9, "c_plus lift equality, A = " + fmt(b.A) + ": " + fmt(dp));
    check(dm <= cont.minus.error + lcs.minus.error + 1e-9, "c_minus lift equality, A = " + fmt(b.A) + ": " + fmt(dm));
    worst = std::max({worst, dp, dm});
  }
  summary = "3 bumps, max |lcs - contact| = " + fmt(worst);
}

// ---- capacities and metric

void capacity_metric(Checker& check, std::string& summary) {
  std::string caps;
  for (auto [area, expect] : {std::pair{0.5, 1}, {1.5, 2}, {2.5, 3}}) {
    BallDomain U{0.0, 0.0, std::sqrt(area / std::numbers::pi)};
    CapacityEstimate est = capacity_lower_bound(U, radial_family(U, 2), grid({32}));
    check(est.lower_bound == expect && est.reference == expect && !est.falsified,
          "capacity at area " + fmt(area) + " = " + std::to_string(est.lower_bound));
    caps += std::to_string(est.lower_bound);
  }

  SpectralDomain dom = planar_domain();
  check(metric_d(identity_contact(), identity_contact(), dom).d == 0, "d(id, id) != 0");

  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> amp(-0.2, 0.2), ctr(-0.1, 0.1);
  const int P = 6;
  std::vector<ContactMap> pool;
  for (int k = 0; k < P; ++k) pool.push_back(contact_time_map(planar_bump(amp(rng), ctr(rng), ctr(rng), 0.8)));
  std::map<std::pair<int, int>, MetricValue> cache;
  auto d = [&](int i, int j) -> const MetricValue& {
    auto key = std::make_pair(i, j);
    auto it = cache.find(key);
    if (it == cache.end()) it = cache.emplace(key, metric_d(pool[i], pool[j], dom)).first;
    return it->second;
  };
  std::uniform_int_distribution<int> pick(0, P - 1);
  int tuples = 0;
  for (int t = 0; t < 20; ++t) {
    int i = pick(rng), j = pick(rng), k = pick(rng);
    while (j == i) j = pick(rng);
    while (k == i || k == j) k = pick(rng);
    std::string tag = " (" + std::to_string(i) + "," + std::to_string(j) + "," + std::to_string(k) + ")";
    check(d(i, j).d == d(j, i).d, "symmetry" + tag);
    check(d(i, k).d <= d(i, j).d + d(j, k).d, "triangle" + tag);
    check(d(i, j).d >= 0, "nonnegativity" + tag);
    // left multiplication by k conjugates the quotient: integer invariance and bi-invariance
    SpectralPair conj = c_pm_of(compose(pool[k], compose(compose(pool[i], inverse(pool[j])), inverse(pool[k]))), dom);
    const SpectralPair& base = d(i, j).pair;
    check(std::ceil(snap_integer(conj.plus.value)) == std::ceil(snap_integer(base.plus.value)),
          "conjugation ceil c_plus" + tag);
    check(std::floor(snap_integer(conj.minus.value)) == std::floor(snap_integer(base.minus.value)),
          "conjugation floor c_minus" + tag);
    check(metric_from_pair(conj) == d(i, j).d, "bi-invariance" + tag);
    ++tuples;
  }

  BallDomain U{-0.3, 0.0, 0.25};
  ContactIsotopy psi;
  psi.H = translation_hamiltonian(0.7, 0.7);
  psi.support = Box{{-1.4, -1.4, 0.0}, {1.4, 1.4, 1.0}};
  psi.periodic_z = true;
  psi.integrator.step = 2e-2;
  SpectralDomain tdom = planar_domain(2.0);
  tdom.support = psi.support;
  CapacityEstimate cap = capacity_lower_bound(U, radial_family(U, 2), grid({16}));
  DisplacementReport rep = displacement_energy_upper(U, psi, tdom, cap.lower_bound);
  check(rep.energy_capacity_ok && cap.lower_bound >= 1, "energy-capacity " + std::to_string(cap.lower_bound) +
                                                            " > " + std::to_string(rep.upper));
  summary = "capacities " + caps + ", " + std::to_string(tuples) + " metric tuples, c(U) = " +
            std::to_string(cap.lower_bound) + " <= " + std::to_string(rep.upper);
}

// ---- non-squeezing

void nonsqueezing(Checker& check, std::string& summary) {
  const std::vector<double> areas{0.2, 0.5, 0.9, 1.0, 1.5, 1.9, 2.0, 2.6, 3.2, 4.1};
  int rows = 0;
  for (double a1 : areas)
    for (double a2 : areas) {
      NonsqueezingReport r = nonsqueezing_report(std::sqrt(a1 / std::numbers::pi), std::sqrt(a2 / std::numbers::pi));
      // oracle: scan the positive integers for a2 <= k <= a1
      int k = 0;
      for (int c = 1; c <= 10 && !k; ++c)
        if (a2 <= c + 1e-9 && c <= a1 + 1e-9) k = c;
      check(r.obstructed == (k > 0), "verdict at (" + fmt(a1) + ", " + fmt(a2) + ")");
      if (k) check(r.k == k, "witness integer at (" + fmt(a1) + ", " + fmt(a2) + ")");
      if (a1 < 1.0) check(r.verdict.find("squeezing possible") != std::string::npos, "squeezable regime");
      ++rows;
    }
  NonsqueezingReport row = nonsqueezing_report(std::sqrt(2.6 / std::numbers::pi), std::sqrt(1.9 / std::numbers::pi));
  check(row.obstructed && row.k == 2, "2.6 / 1.9 row");
  summary = std::to_string(rows) + " grid cells";
}

struct Spec {
  const char* name;
  double limit;
  void (*run)(Checker&, std::string&);
};

const std::map<int, Spec>& table() {
  static const std::map<int, Spec> t{
      {1, {"calculus identities", 10.0, calculus}},
      {2, {"model structures", 30.0, models}},
      {3, {"dynamics", 120.0, dynamics}},
      {4, {"chord/critical bijection", 30.0, chords}},
      {5, {"translated points", 60.0, translated}},
      {6, {"spectral selector sanity", 300.0, spectral}},
      {7, {"lift equality", 300.0, lift_equality}},
      {8, {"capacity/metric integers", 600.0, capacity_metric}},
      {9, {"non-squeezing arithmetic", 1.0, nonsqueezing}},
  };
  return t;
}

}  // namespace

std::vector<int> criterion_ids() {
  std::vector<int> ids;
  for (const auto& [id, s] : table()) ids.push_back(id);
  return ids;
}

CriterionResult run_criterion(int id) {
  auto it = table().find(id);
  if (it == table().end()) throw Error("unknown criterion " + std::to_string(id));
  CriterionResult r;
  r.id = id;
  r.name = it->second.name;
  r.limit = it->second.limit;
  Checker check;
  auto t0 = std::chrono::steady_clock::now();
  try {
    it->second.run(check, r.summary);
  } catch (const std::exception& e) {
    check.failures.push_back(std::string("exception: ") + e.what());
  }
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  r.failures = check.failures;
  r.checks_ok = check.failures.empty();
  return r;
}

}  // namespace lcs::suite
