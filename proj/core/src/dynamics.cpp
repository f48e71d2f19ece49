#include "lcs/dynamics.hpp"

#include <cmath>
#include <sstream>

namespace lcs {

Vec Hamiltonian::gradient(double t, const Vec& x) const {
  if (grad) return grad(t, x);
  Vec g(dim);
  for (int i = 0; i < dim; ++i) {
    Vec xp = x, xm = x;
    xp[i] += h;
    xm[i] -= h;
    g[i] = (value(t, xp) - value(t, xm)) / (2 * h);
  }
  return g;
}

Hamiltonian zero_hamiltonian(int dim) { return constant_hamiltonian(dim, 0.0); }

Hamiltonian constant_hamiltonian(int dim, double c) {
  Hamiltonian H;
  H.dim = dim;
  H.autonomous = true;
  H.bound = std::abs(c);
  H.value = [c](double, const Vec&) { return c; };
  H.grad = [dim](double, const Vec&) { return Vec(Vec::Zero(dim)); };
  return H;
}

Hamiltonian scaled(const Hamiltonian& H, double s) {
  Hamiltonian out = H;
  out.bound = std::abs(s) * H.bound;
  out.value = [H, s](double t, const Vec& x) { return s * H.value(t, x); };
  out.grad = [H, s](double t, const Vec& x) { return Vec(s * H.gradient(t, x)); };
  return out;
}

Hamiltonian time_rescaled(const Hamiltonian& H, double a, double b) {
  Hamiltonian out = H;
  out.bound = std::abs(b) * H.bound;
  out.value = [H, a, b](double t, const Vec& x) { return b * H.value(a + b * t, x); };
  out.grad = [H, a, b](double t, const Vec& x) { return Vec(b * H.gradient(a + b * t, x)); };
  return out;
}

double cutoff_profile(double s) {
  if (std::abs(s) >= 1.0) return 0.0;
  return std::exp(1.0 - 1.0 / (1.0 - s * s));
}

namespace {
double cutoff_dprofile(double s) {
  if (std::abs(s) >= 1.0) return 0.0;
  double d = 1.0 - s * s;
  return cutoff_profile(s) * (-2.0 * s / (d * d));
}
}  // namespace

Hamiltonian with_cutoff(const Hamiltonian& H, const Box& support, const std::vector<bool>& periodic) {
  Hamiltonian out = H;
  auto active = [periodic](int i) { return i >= static_cast<int>(periodic.size()) || !periodic[i]; };
  auto svals = [support](const Vec& x, int i) {
    double c = 0.5 * (support.lo[i] + support.hi[i]), w = 0.5 * (support.hi[i] - support.lo[i]);
    return std::pair<double, double>{(x[i] - c) / w, 1.0 / w};
  };
  out.value = [=](double t, const Vec& x) {
    double c = 1.0;
    for (int i = 0; i < H.dim; ++i)
      if (active(i)) c *= cutoff_profile(svals(x, i).first);
    return c == 0.0 ? 0.0 : c * H.value(t, x);
  };
  out.grad = [=](double t, const Vec& x) {
    Vec gc = Vec::Zero(H.dim);
    double c = 1.0;
    std::vector<double> prof(H.dim, 1.0);
    for (int i = 0; i < H.dim; ++i)
      if (active(i)) {
        prof[i] = cutoff_profile(svals(x, i).first);
        c *= prof[i];
      }
    if (c == 0.0) return Vec(Vec::Zero(H.dim));
    for (int i = 0; i < H.dim; ++i)
      if (active(i)) {
        auto [s, ds] = svals(x, i);
        gc[i] = c / prof[i] * cutoff_dprofile(s) * ds;
      }
    return Vec(c * H.gradient(t, x) + H.value(t, x) * gc);
  };
  return out;
}

Vec hamiltonian_vector_field(const LcsTriple& triple, const Hamiltonian& H, double t, const Vec& x) {
  Vec rhs = -(H.gradient(t, x) - H.value(t, x) * triple.eta_at(x));
  return solve_omega(triple.omega_matrix(x), rhs);
}

Vec hamiltonian_vector_field(const HamiltonianIsotopy& iso, double t, const Vec& x) {
  return hamiltonian_vector_field(iso.triple, iso.H, t, x);
}

namespace {

struct Deriv {
  Vec dx;
  double dg, dS;
};

Deriv rhs(const HamiltonianIsotopy& iso, double t, const Vec& x, double g) {
  Vec X = hamiltonian_vector_field(iso, t, x);
  Deriv d{X, iso.triple.eta_at(x).dot(X), 0.0};
  if (iso.triple.lambda) d.dS = std::exp(-g) * (iso.H.value(t, x) - iso.triple.lambda_at(x).dot(X));
  return d;
}

void check_domain(const HamiltonianIsotopy& iso, const Vec& x, double t) {
  if (iso.domain && !iso.domain->contains(x)) {
    std::ostringstream os;
    os << "trajectory left the domain at t=" << t;
    throw NumericError(os.str());
  }
  if (!x.allFinite()) throw NumericError("trajectory diverged at t=" + std::to_string(t));
}

// Fixed-step RK4 from t0 to t1 with n steps; optionally records every state.
FlowState rk4(const HamiltonianIsotopy& iso, const Vec& x0, double t0, double t1, int n,
              std::vector<FlowState>* rec, int every) {
  FlowState s{x0, 0.0, 0.0, t0};
  if (rec) rec->push_back(s);
  const double h = (t1 - t0) / n;
  for (int k = 0; k < n; ++k) {
    double t = t0 + k * h;
    Deriv k1 = rhs(iso, t, s.x, s.g);
    Deriv k2 = rhs(iso, t + 0.5 * h, s.x + 0.5 * h * k1.dx, s.g + 0.5 * h * k1.dg);
    Deriv k3 = rhs(iso, t + 0.5 * h, s.x + 0.5 * h * k2.dx, s.g + 0.5 * h * k2.dg);
    Deriv k4 = rhs(iso, t + h, s.x + h * k3.dx, s.g + h * k3.dg);
    s.x += h / 6.0 * (k1.dx + 2 * k2.dx + 2 * k3.dx + k4.dx);
    s.g += h / 6.0 * (k1.dg + 2 * k2.dg + 2 * k3.dg + k4.dg);
    s.S += h / 6.0 * (k1.dS + 2 * k2.dS + 2 * k3.dS + k4.dS);
    s.t = t0 + (k + 1) * h;
    check_domain(iso, s.x, s.t);
    if (rec && ((k + 1) % every == 0 || k + 1 == n)) rec->push_back(s);
  }
  return s;
}

int step_count(double span, double step) { return std::max(1, static_cast<int>(std::ceil(std::abs(span) / step - 1e-9))); }

}  // namespace

FlowState flow(const HamiltonianIsotopy& iso, const Vec& x0, double t0, double t1) {
  if (t0 == t1) return FlowState{x0, 0.0, 0.0, t0};
  return rk4(iso, x0, t0, t1, step_count(t1 - t0, iso.integrator.step), nullptr, 1);
}

Trajectory integrate_isotopy(const HamiltonianIsotopy& iso, const Vec& seed, double t_final, int record_every) {
  Trajectory tr;
  int n = step_count(t_final, iso.integrator.step);
  FlowState end = rk4(iso, seed, 0.0, t_final, n, &tr.states, std::max(1, record_every));
  if (iso.integrator.richardson) {
    FlowState fine = rk4(iso, seed, 0.0, t_final, 2 * n, nullptr, 1);
    double e = (fine.x - end.x).cwiseAbs().maxCoeff();
    e = std::max({e, std::abs(fine.g - end.g), std::abs(fine.S - end.S)});
    tr.step_error = e / 15.0;
  }
  return tr;
}

LcsMap identity_map() {
  LcsMap m;
  m.apply = [](const Vec& x) { return FlowState{x, 0.0, 0.0, 0.0}; };
  m.inverse = m.apply;
  return m;
}

LcsMap time_map(const HamiltonianIsotopy& iso, double t) {
  LcsMap m;
  m.apply = [iso, t](const Vec& x) { return flow(iso, x, 0.0, t); };
  m.inverse = [iso, t](const Vec& x) { return flow(iso, x, t, 0.0); };
  return m;
}

namespace {
FlowState compose_states(const FlowState& inner, const FlowState& outer) {
  return FlowState{outer.x, inner.g + outer.g, inner.S + std::exp(-inner.g) * outer.S, outer.t};
}
}  // namespace

LcsMap compose_maps(const LcsMap& outer, const LcsMap& inner) {
  LcsMap m;
  m.apply = [outer, inner](const Vec& x) {
    FlowState a = inner.apply(x);
    return compose_states(a, outer.apply(a.x));
  };
  m.inverse = [outer, inner](const Vec& x) {
    FlowState a = outer.inverse(x);
    return compose_states(a, inner.inverse(a.x));
  };
  return m;
}

LcsMap inverse_map(const LcsMap& m) { return LcsMap{m.inverse, m.apply}; }

namespace {
Box hull(const Box& a, const Box& b) {
  Box r = a;
  for (int i = 0; i < r.dim(); ++i) {
    r.lo[i] = std::min(a.lo[i], b.lo[i]);
    r.hi[i] = std::max(a.hi[i], b.hi[i]);
  }
  return r;
}
}  // namespace

HamiltonianIsotopy compose_isotopies(const HamiltonianIsotopy& a, const HamiltonianIsotopy& b) {
  HamiltonianIsotopy out = a;
  out.support = hull(a.support, b.support);
  out.theta_equivariant = a.theta_equivariant && b.theta_equivariant;
  out.H.grad = nullptr;
  out.H.autonomous = false;
  out.H.bound = 0.0;
  out.H.value = [a, b](double t, const Vec& x) {
    FlowState pre = flow(a, x, t, 0.0);
    return a.H.value(t, x) + std::exp(-pre.g) * b.H.value(t, pre.x);
  };
  return out;
}

HamiltonianIsotopy invert_isotopy(const HamiltonianIsotopy& a) {
  HamiltonianIsotopy out = a;
  out.H.grad = nullptr;
  out.H.autonomous = false;
  out.H.value = [a](double t, const Vec& x) {
    FlowState s = flow(a, x, 0.0, t);
    return -std::exp(-s.g) * a.H.value(t, s.x);
  };
  return out;
}

HamiltonianIsotopy conjugate_isotopy(const HamiltonianIsotopy& a, const LcsMap& psi) {
  HamiltonianIsotopy out = a;
  out.H.grad = nullptr;
  out.H.value = [a, psi](double t, const Vec& x) {
    FlowState s = psi.apply(x);
    return std::exp(-s.g) * a.H.value(t, s.x);
  };
  return out;
}

Vec contact_vector_field(const ContactIsotopy& c, double t, const Vec& p, double* h_out) {
  const int n = c.n, zi = 2 * n;
  Vec dH = c.H.gradient(t, p);
  double H = c.H.value(t, p);
  double Hz = dH[zi];
  Vec X(2 * n + 1);
  double xz = 0.0;
  for (int j = 0; j < n; ++j) {
    double x = p[2 * j], y = p[2 * j + 1];
    X[2 * j] = -dH[2 * j + 1] - Hz * x * 0.5;
    X[2 * j + 1] = dH[2 * j] - Hz * y * 0.5;
    xz += (x * X[2 * j + 1] - y * X[2 * j]) * 0.5;
  }
  X[zi] = xz - H;
  if (h_out) *h_out = -Hz;
  return X;
}

ContactState contact_flow(const ContactIsotopy& c, const Vec& p0, double t0, double t1) {
  ContactState s{p0, 0.0};
  if (t0 == t1) return s;
  int n = step_count(t1 - t0, c.integrator.step);
  const double h = (t1 - t0) / n;
  auto f = [&c](double t, const Vec& p, double& dg) { return contact_vector_field(c, t, p, &dg); };
  for (int k = 0; k < n; ++k) {
    double t = t0 + k * h, g1, g2, g3, g4;
    Vec k1 = f(t, s.p, g1);
    Vec k2 = f(t + 0.5 * h, s.p + 0.5 * h * k1, g2);
    Vec k3 = f(t + 0.5 * h, s.p + 0.5 * h * k2, g3);
    Vec k4 = f(t + h, s.p + h * k3, g4);
    s.p += h / 6.0 * (k1 + 2 * k2 + 2 * k3 + k4);
    s.g += h / 6.0 * (g1 + 2 * g2 + 2 * g3 + g4);
    if (!s.p.allFinite()) throw NumericError("contact trajectory diverged at t=" + std::to_string(t + h));
  }
  return s;
}

ContactMap contact_time_map(const ContactIsotopy& c, double t) {
  ContactMap m;
  m.apply = [c, t](const Vec& p) { return contact_flow(c, p, 0.0, t); };
  m.inverse = [c, t](const Vec& p) { return contact_flow(c, p, t, 0.0); };
  return m;
}

ContactMap compose_contact(const ContactMap& outer, const ContactMap& inner) {
  ContactMap m;
  m.apply = [outer, inner](const Vec& p) {
    ContactState a = inner.apply(p);
    ContactState b = outer.apply(a.p);
    return ContactState{b.p, a.g + b.g};
  };
  m.inverse = [outer, inner](const Vec& p) {
    ContactState a = outer.inverse(p);
    ContactState b = inner.inverse(a.p);
    return ContactState{b.p, a.g + b.g};
  };
  return m;
}

ContactMap inverse_contact(const ContactMap& m) { return ContactMap{m.inverse, m.apply}; }

ContactMap identity_contact() {
  ContactMap m;
  m.apply = [](const Vec& p) { return ContactState{p, 0.0}; };
  m.inverse = m.apply;
  return m;
}

HamiltonianIsotopy lift_contact_isotopy(const ContactIsotopy& c) {
  HamiltonianIsotopy iso;
  ModelSpace m = c.periodic_z ? s1xr2xs1(c.n) : s1xr3(c.n);
  iso.triple = *m.triple;
  const int d = 2 * c.n + 2;
  Hamiltonian H = c.H;
  iso.H.dim = d;
  iso.H.autonomous = H.autonomous;
  iso.H.bound = H.bound;
  iso.H.value = [H](double t, const Vec& x) { return H.value(t, x.tail(x.size() - 1)); };
  iso.H.grad = [H](double t, const Vec& x) {
    Vec g(x.size());
    g[0] = 0.0;
    g.tail(x.size() - 1) = H.gradient(t, x.tail(x.size() - 1));
    return g;
  };
  iso.support.lo.push_back(0.0);
  iso.support.hi.push_back(1.0);
  for (int i = 0; i < c.support.dim(); ++i) {
    iso.support.lo.push_back(c.support.lo[i]);
    iso.support.hi.push_back(c.support.hi[i]);
  }
  iso.integrator = c.integrator;
  iso.theta_equivariant = true;
  return iso;
}

LcsMap lifted_time_map(const ContactIsotopy& c, double t) {
  auto lift = [](const Vec& x, const ContactState& s) {
    Vec y(x.size());
    y[0] = x[0] - s.g;
    y.tail(x.size() - 1) = s.p;
    return FlowState{y, s.g, 0.0, 0.0};
  };
  LcsMap m;
  m.apply = [c, t, lift](const Vec& x) { return lift(x, contact_flow(c, x.tail(x.size() - 1), 0.0, t)); };
  m.inverse = [c, t, lift](const Vec& x) { return lift(x, contact_flow(c, x.tail(x.size() - 1), t, 0.0)); };
  return m;
}

std::string trajectory_csv(const Trajectory& tr, const Chart& chart) {
  std::ostringstream os;
  os.precision(17);
  os << "t";
  for (const auto& l : chart.labels) os << "," << l;
  os << ",g,S,step_error\n";
  for (const auto& s : tr.states) {
    os << s.t;
    for (int i = 0; i < s.x.size(); ++i) os << "," << s.x[i];
    os << "," << s.g << "," << s.S << "," << tr.step_error << "\n";
  }
  return os.str();
}

}  // namespace lcs
