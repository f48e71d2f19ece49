#include "lcs/invariants.hpp"

#include "lcs/parallel.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

namespace lcs {

SpectralPair c_pm_of(const LcsMap& phi, const SpectralDomain& dom) {
  return c_pm_graph(phi, dom.support, dom.periodic_z, dom.bound, dom.cfg);
}

SpectralPair c_pm_of(const ContactMap& phi, const SpectralDomain& dom) {
  return c_pm_contact(phi, dom.support, dom.periodic_z, dom.bound, dom.cfg);
}

double snap_integer(double v, double tol) {
  double r = std::round(v);
  return std::abs(v - r) <= tol ? r : v;
}

int metric_from_pair(const SpectralPair& p) {
  return static_cast<int>(std::ceil(snap_integer(p.plus.value)) - std::floor(snap_integer(p.minus.value)));
}

OrderVerdict leq_certificate(const Hamiltonian& H, const Box& support, int n) {
  const int d = support.dim();
  OrderVerdict v;
  v.relation = "leq";
  v.verdict = true;
  double lowest = std::numeric_limits<double>::infinity();
  std::vector<int> idx(d, 0);
  for (;;) {
    Vec x(d);
    for (int i = 0; i < d; ++i) x[i] = support.lo[i] + (support.hi[i] - support.lo[i]) * idx[i] / (n - 1);
    for (double t : {0.0, 0.5, 1.0}) lowest = std::min(lowest, H.value(t, x));
    int k = 0;
    while (k < d && ++idx[k] == n) idx[k++] = 0;
    if (k == d) break;
  }
  v.verdict = lowest >= 0.0;
  v.witness.value = lowest;
  v.detail = "sampled min H = " + std::to_string(lowest);
  return v;
}

double BallDomain::area() const { return std::numbers::pi * R * R; }

bool BallDomain::contains(double x, double y) const { return (x - cx) * (x - cx) + (y - cy) * (y - cy) < R * R; }

std::string BallDomain::describe() const {
  std::ostringstream os;
  os << "S^1 x B^2(" << R << ") x S^1 at (" << cx << ", " << cy << ")";
  return os.str();
}

DisplacementReport displacement_energy_upper(const BallDomain& U, const ContactIsotopy& psi, const SpectralDomain& dom,
                                             std::optional<int> capacity_lower, int K_cap) {
  DisplacementReport rep;
  // dense sample of the closed ball times a few z values
  const int n = 15;
  std::vector<Vec> pts;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      double x = U.cx + U.R * (2.0 * i / (n - 1) - 1.0), y = U.cy + U.R * (2.0 * j / (n - 1) - 1.0);
      if ((x - U.cx) * (x - U.cx) + (y - U.cy) * (y - U.cy) > U.R * U.R) continue;
      for (double z : {0.0, 0.5}) pts.push_back(make_vec({x, y, z}));
    }
  rep.samples = static_cast<int>(pts.size());
  std::vector<char> hit(pts.size(), 0);
  parallel_for(pts.size(), [&](std::size_t k) {
    ContactState s = contact_flow(psi, pts[k], 0.0, 1.0);
    hit[k] = U.contains(s.p[0], s.p[1]);
  });
  for (char h : hit)
    if (h) throw Error("displacement check failed: psi(U) meets U");
  for (int K = 1; K <= K_cap; K *= 2) {
    ContactIsotopy step = psi;
    step.H = scaled(psi.H, 1.0 / K);
    try {
      rep.step = metric_d(identity_contact(), contact_time_map(step), dom);
    } catch (const NumericError&) {
      continue;
    }
    rep.K = K;
    rep.upper = K * rep.step.d;
    rep.capacity_lower = capacity_lower;
    if (capacity_lower) rep.energy_capacity_ok = *capacity_lower <= rep.upper;
    return rep;
  }
  throw NumericError("displacing isotopy too large for the graph route");
}

std::vector<RadialProfile> radial_family(const BallDomain& U, int members) {
  const double area = U.area();
  const double base = std::ceil(snap_integer(area)) - 1.0;
  const double gap = area - base;
  std::vector<RadialProfile> fam;
  for (int j = 1; j <= members; ++j) {
    RadialProfile p;
    p.A = base + gap * (1.0 - std::pow(0.7, j));
    double slack = area - p.A;
    // wide ramps keep the short-time map C1-small; b - a - delta = A + 0.4 slack
    p.a = 0.1 * slack;
    p.delta = 0.4 * slack;
    p.b = area - 0.1 * slack;
    fam.push_back(p);
  }
  return fam;
}

namespace {

std::string profile_name(const RadialProfile& p) {
  std::ostringstream os;
  os.precision(6);
  os << "radial A=" << p.A << " a=" << p.a << " b=" << p.b << " delta=" << p.delta;
  return os.str();
}

// Smaller start times for members whose short-time map is not C1-small; dt < t0 keeps the
// continuation unambiguous.
RadialContinuation radial_with_retry(const RadialProfile& p, double R, const SpectralConfig& cfg, double& t0_used) {
  for (double t0 : {0.2, 0.1, 0.05}) {
    try {
      t0_used = t0;
      return c_plus_radial(p, R, cfg, t0, std::min(0.1, 0.5 * t0));
    } catch (const NumericError&) {
      if (t0 == 0.05) throw;
    }
  }
  throw NumericError("unreachable");
}

void finish(CapacityEstimate& est, const BallDomain& U) {
  est.reference = static_cast<int>(std::ceil(snap_integer(U.area())));
  est.falsified = est.lower_bound > *est.reference;
}

}  // namespace

CapacityEstimate capacity_lower_bound(const BallDomain& U, const std::vector<RadialProfile>& family,
                                      const SpectralConfig& cfg) {
  CapacityEstimate est;
  est.domain = U.describe();
  est.family = "radial rotations h(pi r^2)";
  const double area = U.area();
  for (const RadialProfile& p : family)
    if (p.b >= area) throw Error("support violation: radial profile reaches the boundary of U");
  est.witnesses.resize(family.size());
  parallel_for(family.size(), [&](std::size_t k) {
    const RadialProfile& p = family[k];
    double t0 = 0.0;
    RadialContinuation rc = radial_with_retry(p, U.R, cfg, t0);
    CapacityWitness& w = est.witnesses[k];
    w.family_member = profile_name(p) + " t0=" + std::to_string(t0).substr(0, 4);
    w.c_plus = rc.value;
    w.error = rc.error;
    w.ceil_c_plus = static_cast<int>(std::ceil(snap_integer(rc.value)));
  });
  for (auto& w : est.witnesses) est.lower_bound = std::max(est.lower_bound, w.ceil_c_plus);
  finish(est, U);
  return est;
}

CapacityEstimate capacity_lower_bound(const BallDomain& U, const std::vector<ContactIsotopy>& family,
                                      const SpectralDomain& dom) {
  CapacityEstimate est;
  est.domain = U.describe();
  est.family = "contact isotopies";
  for (const ContactIsotopy& c : family) {
    // sampled support check on a ring just outside U and far away
    for (int k = 0; k < 16; ++k) {
      double a = 2.0 * std::numbers::pi * k / 16;
      for (double s : {1.0, 1.5})
        for (double z : {0.0, 0.5}) {
          Vec p = make_vec({U.cx + s * U.R * std::cos(a), U.cy + s * U.R * std::sin(a), z});
          if (c.H.value(0.5, p) != 0.0) throw Error("support violation: Hamiltonian nonzero outside U");
        }
    }
    SpectralPair p = c_pm_of(contact_time_map(c), dom);
    CapacityWitness w;
    w.family_member = "contact isotopy";
    w.c_plus = p.plus.value;
    w.error = p.plus.error;
    w.ceil_c_plus = static_cast<int>(std::ceil(snap_integer(p.plus.value)));
    est.witnesses.push_back(w);
    est.lower_bound = std::max(est.lower_bound, w.ceil_c_plus);
  }
  finish(est, U);
  return est;
}

NonsqueezingReport nonsqueezing_report(double R1, double R2) {
  NonsqueezingReport r;
  r.R1 = R1;
  r.R2 = R2;
  r.area1 = std::numbers::pi * R1 * R1;
  r.area2 = std::numbers::pi * R2 * R2;
  double a1 = snap_integer(r.area1), a2 = snap_integer(r.area2);
  int k = static_cast<int>(std::ceil(a2));
  r.capacity1 = static_cast<int>(std::ceil(a1));
  r.capacity2 = static_cast<int>(std::ceil(a2));
  if (k <= std::floor(a1) && k >= 1) {
    r.k = k;
    r.obstructed = true;
    r.verdict = "obstructed";
  } else {
    r.verdict = "no integer obstruction";
    if (r.area1 < 1.0) r.verdict += " (squeezing possible)";
  }
  return r;
}

}  // namespace lcs
