#include "lcs/chords.hpp"

#include "lcs/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace lcs {

namespace {

std::vector<Vec> make_seeds(const Box& box, const std::vector<int>& grid_in, double jitter, std::uint64_t seed,
                            int fixed_zero_coord) {
  const int d = box.dim();
  std::vector<int> grid = grid_in;
  grid.resize(d, 5);
  if (fixed_zero_coord >= 0) grid[fixed_zero_coord] = 1;
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-0.5, 0.5);
  std::vector<Vec> seeds;
  std::vector<int> idx(d, 0);
  while (true) {
    Vec p(d);
    for (int i = 0; i < d; ++i) {
      double cell = (box.hi[i] - box.lo[i]) / grid[i];
      p[i] = box.lo[i] + (idx[i] + 0.5) * cell + jitter * cell * u(rng);
    }
    if (fixed_zero_coord >= 0) p[fixed_zero_coord] = 0.0;
    seeds.push_back(p);
    int i = 0;
    while (i < d && ++idx[i] == grid[i]) idx[i++] = 0;
    if (i == d) break;
  }
  return seeds;
}

DMat drop_columns(const DMat& A, const std::vector<int>& cols) {
  std::vector<int> keep;
  for (int j = 0; j < A.cols(); ++j)
    if (std::find(cols.begin(), cols.end(), j) == cols.end()) keep.push_back(j);
  DMat B(A.rows(), keep.size());
  for (size_t k = 0; k < keep.size(); ++k) B.col(k) = A.col(keep[k]);
  return B;
}

bool lex_less(const Vec& a, const Vec& b) {
  for (int i = 0; i < a.size(); ++i) {
    if (a[i] < b[i] - 1e-12) return true;
    if (a[i] > b[i] + 1e-12) return false;
  }
  return false;
}

double quotient_distance(const Chart& chart, const Vec& a, const Vec& b, const std::vector<int>& quotient) {
  Vec d = chart.difference(a, b);
  for (int q : quotient) d[q] = 0.0;
  return d.norm();
}

struct Solved {
  TranslatedPoint tp;
  bool ok = false;
};

// Shared multistart core. residual(p) fills rho and a record describing the candidate.
template <class Residual, class Record, class Stack>
TranslatedPointSet solve_points(const Chart& chart, const std::vector<Vec>& seeds, const ChordSearchConfig& cfg,
                                const std::vector<int>& quotient, Residual residual, Record record, Stack stack) {
  std::vector<Solved> out(seeds.size());
  NewtonOptions opt;
  opt.tol = cfg.newton_tol;
  opt.max_iter = cfg.max_iter;
  opt.fd_step = cfg.fd_step;
  opt.max_step = 0.5;
  parallel_for(seeds.size(), [&](std::size_t i) {
    try {
      VecFn F = [&](const DVec& p) { return residual(Vec(p)); };
      NewtonResult r = newton(F, DVec(seeds[i]), opt);
      if (r.residual > std::max(cfg.newton_tol, 1e-9)) return;
      Vec p = r.x;
      TranslatedPoint tp = record(p);
      tp.residual = r.residual;
      DMat Jr = drop_columns(fd_jacobian(F, DVec(p), cfg.fd_step), quotient);
      tp.family = smallest_singular_value(Jr) < cfg.sv_threshold;
      tp.min_singular = smallest_singular_value(drop_columns(stack(p), quotient));
      tp.nondegenerate = tp.min_singular >= cfg.sv_threshold;
      out[i] = Solved{tp, true};
    } catch (const NumericError&) {
    }
  });

  std::vector<TranslatedPoint> isolated, fam;
  for (auto& s : out)
    if (s.ok) (s.tp.family ? fam : isolated).push_back(s.tp);
  auto by_point = [](const TranslatedPoint& a, const TranslatedPoint& b) { return lex_less(a.point, b.point); };
  std::sort(isolated.begin(), isolated.end(), by_point);
  std::sort(fam.begin(), fam.end(), by_point);

  TranslatedPointSet res;
  res.seeds = static_cast<int>(seeds.size());
  for (const auto& tp : isolated) {
    bool dup = false;
    for (const auto& kept : res.points)
      if (quotient_distance(chart, kept.point, tp.point, quotient) < cfg.dedup_radius) dup = true;
    if (!dup) res.points.push_back(tp);
  }
  std::vector<TranslatedPoint> reps;
  for (const auto& tp : fam) {
    bool dup = false;
    for (const auto& kept : reps)
      if (std::abs(kept.T - tp.T) < 1e-6) dup = true;
    if (!dup) reps.push_back(tp);
  }
  res.degenerate_family = !reps.empty();
  res.points.insert(res.points.end(), reps.begin(), reps.end());
  return res;
}

Vec canonical_residual(const LcsMap& phi, const Vec& p, FlowState* state) {
  const int d = static_cast<int>(p.size());
  FlowState s = phi.apply(p);
  Vec r(d);
  r[0] = wrap_half(s.x[0] - p[0]);
  for (int i = 1; i < d - 1; ++i) r[i] = s.x[i] - p[i];
  r[d - 1] = s.g;
  if (state) *state = s;
  return r;
}

DMat lcs_stack(const LcsMap& phi, const Vec& p, double h) {
  const int d = static_cast<int>(p.size());
  DMat A = DMat::Zero(d + 1, d);
  for (int j = 0; j < d; ++j) {
    Vec xp = p, xm = p;
    xp[j] += h;
    xm[j] -= h;
    FlowState a = phi.apply(xp), b = phi.apply(xm);
    Vec col = (a.x - b.x) / (2 * h);
    col[j] -= 1.0;  // the Lee flow of the models is a translation, so its differential is I
    A.block(0, j, d, 1) = col;
    A(d, j) = (a.g - b.g) / (2 * h);
  }
  return A;
}

}  // namespace

TranslatedPointSet find_translated_points(const LcsMap& phi, const Chart& chart, const Box& search,
                                          const ChordSearchConfig& cfg, bool theta_equivariant) {
  const int d = chart.dim;
  std::vector<int> quotient = cfg.quotient;
  if (theta_equivariant && std::find(quotient.begin(), quotient.end(), 0) == quotient.end()) quotient.push_back(0);
  auto seeds = make_seeds(search, cfg.grid, cfg.jitter, cfg.seed, theta_equivariant ? 0 : -1);
  auto residual = [&](const Vec& p) { return canonical_residual(phi, p, nullptr); };
  auto record = [&](const Vec& p) {
    FlowState s;
    canonical_residual(phi, p, &s);
    TranslatedPoint tp;
    tp.point = p;
    tp.T = time_shift(p[d - 1], s.x[d - 1]);
    tp.hamiltonian_action = -s.S;
    tp.lee_action = tp.T;
    tp.total_action = tp.hamiltonian_action + tp.lee_action;
    tp.g = s.g;
    tp.essential = std::abs(s.S) <= cfg.action_tol;
    return tp;
  };
  auto stack = [&](const Vec& p) { return lcs_stack(phi, p, cfg.fd_step); };
  TranslatedPointSet res = solve_points(chart, seeds, cfg, quotient, residual, record, stack);
  res.grid = cfg.grid;
  return res;
}

TranslatedPointSet find_translated_points(const HamiltonianIsotopy& iso, const ChordSearchConfig& cfg) {
  return find_translated_points(time_map(iso), iso.triple.chart, iso.support, cfg, iso.theta_equivariant);
}

TranslatedPointSet find_contact_translated_points(const ContactIsotopy& c, const ChordSearchConfig& cfg) {
  const int d = 2 * c.n + 1;
  Chart chart(d);
  if (c.periodic_z) chart.periodic[d - 1] = true;
  auto seeds = make_seeds(c.support, cfg.grid, cfg.jitter, cfg.seed, -1);
  auto residual = [&](const Vec& p) {
    ContactState s = contact_flow(c, p);
    Vec r(d);
    r.head(d - 1) = s.p.head(d - 1) - p.head(d - 1);
    r[d - 1] = s.g;
    return r;
  };
  auto record = [&](const Vec& p) {
    ContactState s = contact_flow(c, p);
    TranslatedPoint tp;
    tp.point = p;
    tp.T = time_shift(p[d - 1], s.p[d - 1]);
    tp.lee_action = tp.T;
    tp.total_action = tp.T;
    tp.g = s.g;
    tp.essential = true;
    return tp;
  };
  auto stack = [&](const Vec& p) {
    DMat A = DMat::Zero(d + 1, d);
    for (int j = 0; j < d; ++j) {
      Vec xp = p, xm = p;
      xp[j] += cfg.fd_step;
      xm[j] -= cfg.fd_step;
      ContactState a = contact_flow(c, xp), b = contact_flow(c, xm);
      Vec col = (a.p - b.p) / (2 * cfg.fd_step);
      col[j] -= 1.0;
      A.block(0, j, d, 1) = col;
      A(d, j) = (a.g - b.g) / (2 * cfg.fd_step);
    }
    return A;
  };
  TranslatedPointSet res = solve_points(chart, seeds, cfg, cfg.quotient, residual, record, stack);
  res.grid = cfg.grid;
  return res;
}

bool classify_nondegenerate(const TranslatedPoint& tp, const LcsMap& phi, const Chart& chart,
                            const ChordSearchConfig& cfg, bool theta_equivariant) {
  (void)chart;
  std::vector<int> quotient = cfg.quotient;
  if (theta_equivariant && std::find(quotient.begin(), quotient.end(), 0) == quotient.end()) quotient.push_back(0);
  DMat A = drop_columns(lcs_stack(phi, tp.point, cfg.fd_step), quotient);
  return smallest_singular_value(A) >= cfg.sv_threshold;
}

LeeChordSet lee_chords_twisted(const ScalarField& f, const CVec& beta, const Chart& base, const ChordSearchConfig& cfg) {
  const int m = base.dim;
  if (f.dim() != m || beta.size() != m) throw Error("lee_chords_twisted: dimension mismatch");
  for (int i = 0; i < m; ++i)
    if (!base.is_periodic(i)) throw Error("lee_chords_twisted expects a torus chart");
  Box box{std::vector<double>(m, 0.0), std::vector<double>(m, 1.0)};
  auto seeds = make_seeds(box, cfg.grid, cfg.jitter, cfg.seed, -1);

  struct Crit {
    Vec q;
    double value;
    double min_sv;
    bool ok = false;
  };
  std::vector<Crit> found(seeds.size());
  NewtonOptions opt;
  opt.tol = cfg.newton_tol;
  opt.max_iter = cfg.max_iter;
  opt.max_step = 0.1;
  parallel_for(seeds.size(), [&](std::size_t i) {
    VecFn F = [&](const DVec& q) { return DVec(gradient(f, Vec(q))); };
    JacFn J = [&](const DVec& q) { return DMat(f.jet(Vec(q), 2).d2c[0]); };
    NewtonResult r = newton(F, DVec(seeds[i]), opt, J);
    if (!r.converged) return;
    Vec q = base.reduce(Vec(r.x));
    Eigen::SelfAdjointEigenSolver<DMat> es(J(DVec(q)));
    found[i] = Crit{q, value(f, q), es.eigenvalues().cwiseAbs().minCoeff(), true};
  });

  std::vector<Crit> crit;
  for (auto& c : found)
    if (c.ok) crit.push_back(c);
  std::sort(crit.begin(), crit.end(), [](const Crit& a, const Crit& b) { return lex_less(a.q, b.q); });

  LeeChordSet out;
  std::vector<Crit> kept;
  for (const auto& c : crit) {
    bool degenerate = c.min_sv < cfg.sv_threshold;
    bool dup = false;
    for (const auto& k : kept) {
      if (base.difference(k.q, c.q).norm() < cfg.dedup_radius) dup = true;
      if (degenerate && k.min_sv < cfg.sv_threshold && std::abs(k.value - c.value) < 1e-8) dup = true;
    }
    if (dup) continue;
    kept.push_back(c);
    if (degenerate) out.degenerate_family = true;
    LeeChord ch;
    ch.T = c.value;
    ch.start = Vec(2 * m);
    ch.start.head(m) = c.q;
    ch.start.tail(m) = -c.value * beta;  // d_beta f at a critical point
    ch.end = ch.start;
    ch.end.tail(m).setZero();
    ch.hamiltonian_action = c.value;
    ch.lee_action = 0.0;  // lambda(R) = p . 0 along fibre translations
    ch.total_action = ch.hamiltonian_action + ch.lee_action;
    ch.essential = std::abs(ch.total_action - ch.T) <= cfg.action_tol;
    ch.transverse = !degenerate;
    out.chords.push_back(ch);
  }
  return out;
}

int cup_length_torus(int dim) { return dim; }
int betti_sum_torus(int dim) { return 1 << dim; }

std::vector<double> action_spectrum(const TranslatedPointSet& s, double tol) {
  std::vector<double> v;
  for (const auto& tp : s.points)
    if (tp.essential) v.push_back(tp.T);
  std::sort(v.begin(), v.end());
  std::vector<double> out;
  for (double x : v)
    if (out.empty() || std::abs(x - out.back()) > tol) out.push_back(x);
  return out;
}

}  // namespace lcs
