#include "lcs/genfun.hpp"

#include <cmath>
#include <random>

namespace lcs {

namespace {

DVec to_d(const Vec& v) { return DVec(v); }

Vec to_v(const DVec& v) { return Vec(v); }

DVec concat(std::initializer_list<const DVec*> parts) {
  Eigen::Index n = 0;
  for (auto* p : parts) n += p->size();
  DVec out(n);
  Eigen::Index k = 0;
  for (auto* p : parts) {
    out.segment(k, p->size()) = *p;
    k += p->size();
  }
  return out;
}

// Grid over a box, periodic coordinates sampled on [0, 1).
std::vector<DVec> base_grid(const Chart& c, const Box& box, int n) {
  std::vector<DVec> pts;
  const int m = c.dim;
  std::vector<int> idx(m, 0);
  for (;;) {
    DVec q(m);
    for (int i = 0; i < m; ++i) {
      if (c.is_periodic(i)) {
        q[i] = double(idx[i]) / n;
      } else {
        double lo = box.lo[i], hi = box.hi[i];
        q[i] = n == 1 ? 0.5 * (lo + hi) : lo + (hi - lo) * idx[i] / (n - 1);
      }
    }
    pts.push_back(q);
    int k = 0;
    while (k < m && ++idx[k] == n) idx[k++] = 0;
    if (k == m) break;
  }
  return pts;
}

bool outside_box(const Chart& c, const Box& box, const DVec& q) {
  for (int i = 0; i < c.dim; ++i) {
    if (c.is_periodic(i) || i >= box.dim()) continue;
    if (q[i] < box.lo[i] || q[i] > box.hi[i]) return true;
  }
  return false;
}

// Damped Newton for base(p) = target; the Jacobian is frozen once the residual is small.
template <class F>
DVec invert_projection(F&& base, const DVec& target, DVec p, const char* what, double* min_sv = nullptr) {
  const int m = static_cast<int>(target.size());
  const double h = 1e-7;
  DMat J(m, m);
  Eigen::PartialPivLU<DMat> lu;
  DVec r = base(p) - target;
  double res = r.lpNorm<Eigen::Infinity>();
  bool frozen = false;
  for (int it = 0; it < 40 && res >= 1e-12; ++it) {
    if (!frozen) {
      for (int j = 0; j < m; ++j) {
        DVec pp = p;
        pp[j] += h;
        J.col(j) = (base(pp) - target - r) / h;
      }
      if (min_sv) {
        *min_sv = smallest_singular_value(J);
        if (*min_sv < 0.1) throw NumericError(what);
      }
      lu.compute(J);
      frozen = res < 1e-6;
    }
    DVec step = lu.solve(r);
    double lam = 1.0;
    for (int k = 0; k < 8; ++k, lam *= 0.5) {
      DVec pn = p - lam * step;
      DVec rn = base(pn) - target;
      double resn = rn.lpNorm<Eigen::Infinity>();
      if (pn.allFinite() && resn < res) {
        p = pn;
        r = rn;
        res = resn;
        break;
      }
      if (k == 7) throw NumericError(what);
    }
  }
  if (res < 1e-9) return p;
  throw NumericError(what);
}

}  // namespace

GFQI function_gf(const Chart& base, std::function<double(const DVec&)> f, const Box& support, double bound) {
  GFQI F;
  F.base = base;
  F.N = 0;
  F.Q = DMat(0, 0);
  F.F = [f](const DVec& q, const DVec&) { return f(q); };
  F.support = support;
  F.perturbation_bound = bound;
  F.description = "function";
  return F;
}

GFQI quadratic_gf(const Chart& base, const DMat& Q) {
  GFQI F;
  F.base = base;
  F.N = static_cast<int>(Q.rows());
  F.Q = Q;
  F.F = [Q](const DVec&, const DVec& z) { return z.dot(Q * z); };
  F.support = Box{std::vector<double>(base.dim, 0.0), std::vector<double>(base.dim, 0.0)};
  F.description = "quadratic";
  return F;
}

GFQI stabilize(const GFQI& F, const DMat& Q2) {
  GFQI out = F;
  const int n1 = F.N, n2 = static_cast<int>(Q2.rows());
  out.N = n1 + n2;
  out.Q = DMat::Zero(out.N, out.N);
  if (n1) out.Q.topLeftCorner(n1, n1) = F.Q;
  out.Q.bottomRightCorner(n2, n2) = Q2;
  auto f = F.F;
  out.F = [f, n1, n2, Q2](const DVec& q, const DVec& z) {
    DVec w = z.tail(n2);
    return f(q, z.head(n1)) + w.dot(Q2 * w);
  };
  out.description = F.description + "+stab";
  return out;
}

GFQI reparametrize(const GFQI& F, std::function<DVec(const DVec&, const DVec&)> Phi) {
  GFQI out = F;
  auto f = F.F;
  out.F = [f, Phi](const DVec& q, const DVec& z) { return f(q, Phi(q, z)); };
  out.special_form = false;
  out.description = F.description + "+fibre";
  return out;
}

GFQI difference_function(const GFQI& F1, const GFQI& F2) {
  if (F1.base.dim != F2.base.dim) throw Error("difference_function: base dimensions differ");
  GFQI out;
  out.base = F1.base;
  const int n1 = F1.N, n2 = F2.N;
  out.N = n1 + n2;
  out.Q = DMat::Zero(out.N, out.N);
  if (n1) out.Q.topLeftCorner(n1, n1) = F1.Q;
  if (n2) out.Q.bottomRightCorner(n2, n2) = -F2.Q;
  auto f1 = F1.F, f2 = F2.F;
  out.F = [f1, f2, n1, n2](const DVec& q, const DVec& z) { return f1(q, z.head(n1)) - f2(q, z.tail(n2)); };
  out.support = F1.support;
  for (int i = 0; i < F1.support.dim() && i < F2.support.dim(); ++i) {
    out.support.lo[i] = std::min(F1.support.lo[i], F2.support.lo[i]);
    out.support.hi[i] = std::max(F1.support.hi[i], F2.support.hi[i]);
  }
  out.perturbation_bound = F1.perturbation_bound + F2.perturbation_bound;
  out.gradient_bound = F1.gradient_bound + F2.gradient_bound;
  out.special_form = F1.special_form && F2.special_form;
  out.description = "difference";
  return out;
}

DVec gf_gradient(const GFQI& F, const DVec& x, double h) {
  DVec g(x.size());
  DVec y = x;
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    y[i] = x[i] + h;
    double a = F.at(y);
    y[i] = x[i] - h;
    double b = F.at(y);
    y[i] = x[i];
    g[i] = (a - b) / (2 * h);
  }
  return g;
}

DMat gf_hessian(const GFQI& F, const DVec& x, double h) {
  const Eigen::Index n = x.size();
  DMat H(n, n);
  const double f0 = F.at(x);
  DVec y = x;
  for (Eigen::Index i = 0; i < n; ++i) {
    y[i] = x[i] + h;
    double fp = F.at(y);
    y[i] = x[i] - h;
    double fm = F.at(y);
    y[i] = x[i];
    H(i, i) = (fp - 2 * f0 + fm) / (h * h);
    for (Eigen::Index j = 0; j < i; ++j) {
      double s = 0;
      for (int a : {1, -1})
        for (int b : {1, -1}) {
          y[i] = x[i] + a * h;
          y[j] = x[j] + b * h;
          s += a * b * F.at(y);
        }
      y[i] = x[i];
      y[j] = x[j];
      H(i, j) = H(j, i) = s / (4 * h * h);
    }
  }
  return H;
}

TwistedSection twisted_graph(const ScalarField& f, const KForm& beta) {
  if (f.degree() != 0 || beta.degree() != 1 || f.dim() != beta.dim()) throw Error("twisted_graph: need a function and a 1-form on the same base");
  TwistedSection s;
  s.point = [f, beta](const Vec& q) {
    const int m = static_cast<int>(q.size());
    Vec out(2 * m);
    out.head(m) = q;
    out.tail(m) = gradient(f, q) - value(f, q) * Vec(beta.at(q));
    return out;
  };
  s.action = [f](const Vec& q) { return value(f, q); };
  return s;
}

namespace {

DVec fibre_gradient(const GFQI& F, const DVec& q, const DVec& z, double h = 1e-6) {
  DVec g(z.size());
  DVec w = z;
  for (Eigen::Index i = 0; i < z.size(); ++i) {
    w[i] = z[i] + h;
    double a = F(q, w);
    w[i] = z[i] - h;
    double b = F(q, w);
    w[i] = z[i];
    g[i] = (a - b) / (2 * h);
  }
  return g;
}

DVec base_gradient(const GFQI& F, const DVec& q, const DVec& z, double h = 1e-6) {
  DVec g(q.size());
  DVec w = q;
  for (Eigen::Index i = 0; i < q.size(); ++i) {
    w[i] = q[i] + h;
    double a = F(w, z);
    w[i] = q[i] - h;
    double b = F(w, z);
    w[i] = q[i];
    g[i] = (a - b) / (2 * h);
  }
  return g;
}

}  // namespace

DVec wavefront_map(const GFQI& F, const KForm& beta, const DVec& q, const DVec& zeta, double tol) {
  if (F.N > 0 && fibre_gradient(F, q, zeta).lpNorm<Eigen::Infinity>() > tol)
    throw NumericError("wavefront_map: point is not fibre-critical");
  DVec cov = base_gradient(F, q, zeta);
  if (beta.dim() == F.base.dim) cov -= F(q, zeta) * to_d(Vec(beta.at(to_v(q))));
  return cov;
}

std::vector<FiberCriticalPoint> fiber_critical_points(const GFQI& F, const KForm& beta, const GFSearchConfig& cfg) {
  std::vector<FiberCriticalPoint> out;
  std::mt19937_64 rng(cfg.seed);
  std::uniform_real_distribution<double> U(-cfg.fibre_radius, cfg.fibre_radius);
  const int m = F.base.dim, N = F.N;
  for (const DVec& q : base_grid(F.base, F.support, cfg.base_samples)) {
    std::vector<DVec> found;
    for (int s = 0; s < (N ? cfg.fibre_seeds : 1); ++s) {
      DVec z0(N);
      for (int i = 0; i < N; ++i) z0[i] = s == 0 ? 0.0 : U(rng);
      DVec z = z0;
      if (N) {
        NewtonOptions opt;
        opt.tol = cfg.newton_tol;
        opt.max_iter = cfg.max_iter;
        opt.fd_step = 1e-5;
        auto r = newton([&](const DVec& w) { return fibre_gradient(F, q, w); }, z0, opt);
        if (!r.converged) continue;
        z = r.x;
      }
      bool dup = false;
      for (auto& f : found) dup = dup || (f - z).norm() < cfg.dedup_radius;
      if (dup) continue;
      found.push_back(z);
      FiberCriticalPoint p;
      p.q = q;
      p.zeta = z;
      p.value = F(q, z);
      p.covector = wavefront_map(F, beta, q, z, 1e-5);
      if (N) {
        DMat H = gf_hessian(F, concat({&q, &z}));
        DMat stack(N, N + m);
        stack << H.block(m, m, N, N), H.block(m, 0, N, m);
        p.min_singular = smallest_singular_value(stack.transpose());
      } else {
        p.min_singular = 1.0;
      }
      out.push_back(p);
    }
  }
  return out;
}

GFCriticalPoint polish_critical_point(const GFQI& F, const DVec& seed, const GFSearchConfig& cfg) {
  NewtonOptions opt;
  opt.tol = cfg.newton_tol;
  opt.max_iter = cfg.max_iter;
  opt.fd_step = 1e-5;
  auto r = newton([&](const DVec& x) { return gf_gradient(F, x); }, seed, opt);
  GFCriticalPoint c;
  c.x = r.x;
  c.value = F.at(r.x);
  if (!r.converged) throw NumericError("critical point search did not converge");
  c.nondegenerate = smallest_singular_value(gf_hessian(F, r.x)) > cfg.sv_threshold;
  return c;
}

std::vector<GFCriticalPoint> critical_points(const GFQI& F, const GFSearchConfig& cfg,
                                             const std::vector<DVec>& extra_seeds) {
  std::vector<DVec> seeds = extra_seeds;
  std::mt19937_64 rng(cfg.seed);
  std::uniform_real_distribution<double> U(-cfg.fibre_radius, cfg.fibre_radius);
  for (const DVec& q : base_grid(F.base, F.support, cfg.base_samples))
    for (int s = 0; s < (F.N ? cfg.fibre_seeds : 1); ++s) {
      DVec z(F.N);
      for (int i = 0; i < F.N; ++i) z[i] = s == 0 ? 0.0 : U(rng);
      seeds.push_back(concat({&q, &z}));
    }
  std::vector<GFCriticalPoint> out;
  for (const DVec& s : seeds) {
    GFCriticalPoint c;
    try {
      c = polish_critical_point(F, s, cfg);
    } catch (const NumericError&) {
      continue;
    }
    DVec key = c.x;
    for (int i = 0; i < F.base.dim; ++i)
      if (F.base.is_periodic(i)) key[i] = wrap_unit(key[i]);
    bool dup = false;
    for (auto& o : out) {
      DVec d = o.x - key;
      for (int i = 0; i < F.base.dim; ++i)
        if (F.base.is_periodic(i)) d[i] = wrap_half(d[i]);
      dup = dup || d.norm() < cfg.dedup_radius;
    }
    if (dup) continue;
    c.x = key;
    c.value = F.at(key);
    if (gf_gradient(F, key).norm() > 1e3 * cfg.newton_tol) continue;  // lost to wrapping far away
    out.push_back(c);
  }
  return out;
}

J1Map j1_identity(int m) {
  J1Map f;
  f.m = m;
  f.apply = [](const DVec& v) { return v; };
  f.inverse = f.apply;
  return f;
}

J1Map j1_z_shift(int m, double c) {
  J1Map f;
  f.m = m;
  f.apply = [m, c](const DVec& v) {
    DVec w = v;
    w[2 * m] += c;
    return w;
  };
  f.inverse = [m, c](const DVec& v) {
    DVec w = v;
    w[2 * m] -= c;
    return w;
  };
  return f;
}

namespace {

// Contact field of dz - p dq: q' = -H_p, p' = H_q + p H_z, z' = H - p H_p.
DVec j1_field(int m, const Hamiltonian& H, double t, const DVec& v) {
  Vec x = to_v(v);
  Vec dH = H.gradient(t, x);
  double h = H.value(t, x);
  DVec out(2 * m + 1);
  double hz = dH[2 * m];
  double php = 0.0;
  for (int i = 0; i < m; ++i) {
    out[i] = -dH[m + i];
    out[m + i] = dH[i] + v[m + i] * hz;
    php += v[m + i] * dH[m + i];
  }
  out[2 * m] = h - php;
  return out;
}

DVec j1_rk4(int m, const Hamiltonian& H, double t0, double t1, double step, DVec v) {
  if (t1 == t0) return v;
  int n = std::max(1, int(std::ceil(std::abs(t1 - t0) / step - 1e-9)));
  double dt = (t1 - t0) / n;
  double t = t0;
  for (int i = 0; i < n; ++i) {
    DVec k1 = j1_field(m, H, t, v);
    DVec k2 = j1_field(m, H, t + dt / 2, v + dt / 2 * k1);
    DVec k3 = j1_field(m, H, t + dt / 2, v + dt / 2 * k2);
    DVec k4 = j1_field(m, H, t + dt, v + dt * k3);
    v += dt / 6 * (k1 + 2 * k2 + 2 * k3 + k4);
    t += dt;
  }
  return v;
}

}  // namespace

J1Map j1_contact_flow(int m, const Hamiltonian& H, double t0, double t1, double step) {
  if (H.dim != 2 * m + 1) throw Error("j1_contact_flow: Hamiltonian must live on J^1 R^m");
  if (2 * m + 1 > kMaxDim) throw Error("j1_contact_flow: m too large");
  J1Map f;
  f.m = m;
  f.apply = [=](const DVec& v) { return j1_rk4(m, H, t0, t1, step, v); };
  f.inverse = [=](const DVec& v) { return j1_rk4(m, H, t1, t0, step, v); };
  return f;
}

TransitionFunction transition_function(const J1Map& phi) {
  TransitionFunction T;
  T.m = phi.m;
  T.source = phi;
  const int m = phi.m;
  auto ap = phi.apply;
  T.G = [ap, m](const DVec& q, const DVec& p, double z) {
    auto section = [&](const DVec& q0) {
      DVec v(2 * m + 1);
      v.head(m) = q0;
      v.segment(m, m) = p;
      v[2 * m] = z + p.dot(q0);
      return v;
    };
    double sv = 0.0;
    DVec q0 = invert_projection([&](const DVec& w) -> DVec { return ap(section(w)).head(m); }, q, q,
                                "not C1-small at query", &sv);
    DVec img = ap(section(q0));
    return img[2 * m] - (z + p.dot(q));
  };
  return T;
}

GFQI sharp_compose(const TransitionFunction& G, const GFQI& F) {
  const int m = F.base.dim;
  if (G.m != m) throw Error("sharp_compose: base dimensions differ");
  GFQI out;
  out.base = F.base;
  const int n0 = F.N;
  out.N = n0 + 2 * m;
  out.Q = DMat::Zero(out.N, out.N);
  if (n0) out.Q.topLeftCorner(n0, n0) = F.Q;
  out.Q.block(n0, n0 + m, m, m) = -0.5 * DMat::Identity(m, m);
  out.Q.block(n0 + m, n0, m, m) = -0.5 * DMat::Identity(m, m);
  auto f = F.F;
  auto g = G.G;
  out.F = [f, g, n0, m](const DVec& qb, const DVec& w) {
    DVec zeta = w.head(n0);
    DVec p = w.segment(n0, m);
    DVec q = w.segment(n0 + m, m);
    DVec Q = qb + q;
    double v = f(Q, zeta);
    return g(qb, p, v - p.dot(Q)) + v - p.dot(q);
  };
  out.support = F.support;
  out.perturbation_bound = F.perturbation_bound + G.bound;
  out.special_form = false;
  out.description = "sharp(" + F.description + ")";
  return out;
}

Vec gamma_phi(const LcsMap& phi, const Vec& p, double* action) {
  FlowState s = phi.apply(p);
  Vec in(8);
  in << p[0], p[1], p[2], p[3], s.x[0], s.x[1], s.x[2], s.x[3];
  Vec out = tau_map(in);
  if (action) *action = out[4] - s.S;
  return out;
}

GFQI graph_gf(const LcsMap& phi, const Box& support, bool periodic_z, double bound) {
  GFQI F;
  F.base = Chart(4, {true, false, false, periodic_z}, {"theta", "x", "y", "z"});
  F.N = 0;
  F.Q = DMat(0, 0);
  F.support = support;
  F.perturbation_bound = bound;
  F.description = "graph";
  Chart base = F.base;
  F.F = [phi, support, base](const DVec& Q, const DVec&) {
    if (outside_box(base, support, Q)) return 0.0;
    auto point = [&](const DVec& w) {
      Vec p(4);
      p << Q[0], w[0], w[1], w[2];
      return p;
    };
    DVec target = Q.tail(3);
    DVec w = invert_projection(
        [&](const DVec& w) -> DVec { return to_d(gamma_phi(phi, point(w)).segment(1, 3)); }, target, target,
        "not C1-small at query");
    double S = 0.0;
    gamma_phi(phi, point(w), &S);
    return S;
  };
  return F;
}

GFQI graph_gf_contact(const ContactMap& phi, const Box& support, bool periodic_z, double bound) {
  GFQI F;
  F.base = Chart(3, {false, false, periodic_z}, {"x", "y", "z"});
  F.N = 0;
  F.Q = DMat(0, 0);
  F.support = support;
  F.perturbation_bound = bound;
  F.description = "contact graph";
  Chart base = F.base;
  auto image = [phi](const DVec& p) {
    ContactState s = phi.apply(to_v(p));
    Vec in(7);
    in << p[0], p[1], p[2], s.p[0], s.p[1], s.p[2], s.g;
    return tau_contact(in);
  };
  F.F = [image, base, support](const DVec& Q, const DVec&) {
    if (outside_box(base, support, Q)) return 0.0;
    DVec p = invert_projection([&](const DVec& w) -> DVec { return to_d(image(w).head(3)); }, Q, Q,
                               "not C1-small at query");
    return image(p)[6];
  };
  return F;
}

GFQI graph_gf_contact(const ContactIsotopy& c, double bound) {
  if (c.n != 1) throw Error("graph_gf_contact: only n = 1 is supported");
  return graph_gf_contact(contact_time_map(c), c.support, c.periodic_z, bound);
}

J1Map conjugated_step(const LcsMap& chi) {
  auto make = [](std::function<FlowState(const Vec&)> f) {
    return [f](const DVec& v) -> DVec {
      Vec s(8);
      for (int i = 0; i < 8; ++i) s[i] = v[i];
      double z = v[8];
      s[4] += z;  // untwist back to J^1_{-dtheta}
      if (!(s[7] < 1.0)) return v;
      Vec a = tau_inverse(s);
      FlowState st = f(a.tail(4));
      Vec b = a;
      b.tail(4) = st.x;
      Vec out = tau_map(b);
      double S = -tau_action(a.data()) + std::exp(a[4] - a[0]) * st.S + tau_action(b.data());
      double zn = z - S;
      DVec w(9);
      for (int i = 0; i < 8; ++i) w[i] = out[i];
      w[4] -= zn;
      w[8] = zn;
      return w;
    };
  };
  J1Map m;
  m.m = 4;
  m.apply = make(chi.apply);
  m.inverse = make(chi.inverse);
  return m;
}

namespace {

LcsMap step_map(const HamiltonianIsotopy& iso, double t0, double t1) {
  LcsMap m;
  m.apply = [iso, t0, t1](const Vec& x) { return flow(iso, x, t0, t1); };
  m.inverse = [iso, t0, t1](const Vec& x) { return flow(iso, x, t1, t0); };
  return m;
}

}  // namespace

GFChain isotopy_to_gfqi(const HamiltonianIsotopy& iso, const ChainConfig& cfg) {
  if (iso.triple.chart.dim != 4) throw Error("isotopy_to_gfqi: expects an isotopy of S^1 x R^3");
  Chart base(4, {true, false, false, false}, {"theta", "x", "y", "z"});
  Box sup = iso.support;
  for (int K = std::max(1, cfg.K0); K <= cfg.K_cap; K *= 2) {
    GFChain chain;
    chain.K = K;
    bool ok = true;
    for (int k = 0; k < K && ok; ++k) {
      J1Map C = conjugated_step(step_map(iso, double(k) / K, double(k + 1) / K));
      TransitionFunction G = transition_function(C);
      G.bound = 0.0;
      for (const DVec& q : base_grid(base, sup, cfg.check_samples)) {
        try {
          G.bound = std::max(G.bound, std::abs(G(q, DVec::Zero(4), 0.0)));
        } catch (const NumericError&) {
          ok = false;
          break;
        }
      }
      chain.steps.push_back(C);
      chain.G.push_back(G);
    }
    if (!ok) continue;
    GFQI F = function_gf(base, [](const DVec&) { return 0.0; }, sup, 0.0);
    F.description = "zero";
    chain.stages.push_back(F);
    for (int k = 0; k < K; ++k) chain.stages.push_back(sharp_compose(chain.G[k], chain.stages.back()));
    return chain;
  }
  throw NumericError("isotopy too large for C1-small chaining");
}

DVec chain_seed(const GFChain& chain, const DVec& lambda_K) {
  const int m = 4;
  std::vector<DVec> lam(chain.K + 1);
  lam[chain.K] = lambda_K;
  for (int k = chain.K - 1; k >= 0; --k) lam[k] = chain.steps[k].inverse(lam[k + 1]);
  DVec zeta(0);
  for (int k = 1; k <= chain.K; ++k) {
    DVec p = lam[k - 1].segment(m, m);
    DVec q = lam[k - 1].head(m) - lam[k].head(m);
    zeta = concat({&zeta, &p, &q});
  }
  DVec qb = lambda_K.head(m);
  return concat({&qb, &zeta});
}

}  // namespace lcs
