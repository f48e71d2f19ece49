#include "lcs/spectral.hpp"

#include "lcs/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

namespace lcs {

namespace {

struct CellGrid {
  std::vector<int> L, stride;
  std::vector<int> n, vstride;
  std::vector<bool> periodic;
  int total = 1, vertices = 1;

  explicit CellGrid(const FilteredComplex& K) : n(K.n), periodic(K.periodic) {
    const int d = K.dim();
    L.resize(d);
    stride.resize(d);
    vstride.resize(d);
    for (int i = 0; i < d; ++i) {
      L[i] = periodic[i] ? 2 * n[i] : 2 * n[i] - 1;
      stride[i] = total;
      vstride[i] = vertices;
      total *= L[i];
      vertices *= n[i];
    }
  }

  int coord(int c, int i) const { return (c / stride[i]) % L[i]; }

  int dim_of(int c) const {
    int k = 0;
    for (std::size_t i = 0; i < L.size(); ++i) k += coord(c, int(i)) & 1;
    return k;
  }

  // The two faces of c across odd axis i.
  std::pair<int, int> faces(int c, int i) const {
    int x = coord(c, i);
    int lo = c - stride[i];
    int hi = x + 1 == L[i] ? c - x * stride[i] : c + stride[i];
    return {lo, hi};
  }
};

void cell_values(const FilteredComplex& K, const CellGrid& g, std::vector<double>& mx, std::vector<double>* mn) {
  const int d = K.dim();
  mx.assign(g.total, 0.0);
  if (mn) mn->assign(g.total, 0.0);
  std::vector<std::vector<int>> by_dim(d + 1);
  for (int c = 0; c < g.total; ++c) by_dim[g.dim_of(c)].push_back(c);
  for (int c : by_dim[0]) {
    int v = 0;
    for (int i = 0; i < d; ++i) v += (g.coord(c, i) / 2) * g.vstride[i];
    mx[c] = K.vertex_values[v];
    if (mn) (*mn)[c] = mx[c];
  }
  for (int k = 1; k <= d; ++k)
    for (int c : by_dim[k]) {
      int i = 0;
      while (!(g.coord(c, i) & 1)) ++i;
      auto [a, b] = g.faces(c, i);
      mx[c] = std::max(mx[a], mx[b]);
      if (mn) (*mn)[c] = std::min((*mn)[a], (*mn)[b]);
    }
}

std::vector<double> axis_points(double lo, double hi, int n, bool periodic) {
  std::vector<double> p(n);
  for (int k = 0; k < n; ++k) p[k] = periodic ? lo + (hi - lo) * k / n : lo + (hi - lo) * k / (n - 1);
  return p;
}

}  // namespace

FilteredComplex grid_complex(std::vector<int> n, std::vector<bool> periodic, std::vector<double> values, double floor) {
  FilteredComplex K;
  K.n = std::move(n);
  K.periodic = std::move(periodic);
  K.vertex_values = std::move(values);
  K.floor = floor;
  K.base_dim = K.dim();
  std::size_t nv = 1;
  for (int v : K.n) {
    if (v < 2) throw Error("grid_complex: need at least 2 vertices per axis");
    nv *= v;
  }
  if (nv != K.vertex_values.size()) throw Error("grid_complex: value count does not match the grid");
  return K;
}

FilteredComplex build_complex(const GFQI& F, const SpectralConfig& cfg) {
  const int m = F.base.dim, N = F.N, d = m + N;
  if (d > cfg.dim_cap)
    throw Error("dimension cap exceeded: base " + std::to_string(m) + " + fibre " + std::to_string(N) + " > " +
                std::to_string(cfg.dim_cap));
  FilteredComplex K;
  K.base_dim = m;
  K.fibre_dim = N;
  K.n.resize(d);
  K.periodic.assign(d, false);
  K.lo.resize(d);
  K.hi.resize(d);
  for (int i = 0; i < m; ++i) {
    K.n[i] = cfg.base_res.empty() ? 12 : cfg.base_res[std::min<std::size_t>(i, cfg.base_res.size() - 1)];
    K.periodic[i] = true;  // torus compactification of the support box
    if (F.base.is_periodic(i)) {
      K.lo[i] = 0.0;
      K.hi[i] = 1.0;
    } else {
      if (i >= F.support.dim()) throw Error("build_complex: support box missing for a non-periodic base axis");
      K.lo[i] = F.support.lo[i];
      K.hi[i] = F.support.hi[i];
    }
  }
  DMat V = DMat::Identity(N, N);
  double B = std::max(F.perturbation_bound, 0.1);
  if (N) {
    Eigen::SelfAdjointEigenSolver<DMat> es(0.5 * (F.Q + F.Q.transpose()));
    V = es.eigenvectors();
    DVec lam = es.eigenvalues();
    double pos_top = 0.0;
    std::vector<double> R(N);
    for (int i = 0; i < N; ++i) {
      if (std::abs(lam[i]) < 1e-8) throw Error("quadratic form is degenerate");
      if (lam[i] > 0) {
        R[i] = std::max({std::sqrt(3.0 * B / lam[i]), F.gradient_bound / lam[i], 0.5});
        pos_top += lam[i] * R[i] * R[i];
      } else {
        ++K.index;
      }
    }
    for (int i = 0; i < N; ++i)
      if (lam[i] < 0) R[i] = std::sqrt((3.0 * B + pos_top + 1.0) / -lam[i]);
    for (int i = 0; i < N; ++i) {
      K.n[m + i] = std::max(cfg.fibre_res, 3);
      K.lo[m + i] = -R[i];
      K.hi[m + i] = R[i];
    }
  }
  std::vector<std::vector<double>> pts(d);
  for (int i = 0; i < d; ++i) pts[i] = axis_points(K.lo[i], K.hi[i], K.n[i], K.periodic[i]);
  std::size_t nv = 1;
  for (int v : K.n) nv *= v;
  K.vertex_values.assign(nv, 0.0);
  parallel_for(nv, [&](std::size_t idx) {
    DVec q(m), w(N);
    std::size_t r = idx;
    for (int i = 0; i < d; ++i) {
      double x = pts[i][r % K.n[i]];
      r /= K.n[i];
      if (i < m)
        q[i] = x;
      else
        w[i - m] = x;
    }
    K.vertex_values[idx] = F(q, N ? DVec(V * w) : w);
  });
  if (cfg.floor) {
    K.floor = *cfg.floor;
  } else if (N == 0) {
    K.floor = *std::min_element(K.vertex_values.begin(), K.vertex_values.end()) - 1.0;
  } else {
    K.floor = -2.0 * B - 0.5;
  }
  if (N) {
    // negative faces of the fibre box must lie in the floor
    Eigen::SelfAdjointEigenSolver<DMat> es(0.5 * (F.Q + F.Q.transpose()));
    for (std::size_t idx = 0; idx < nv; ++idx) {
      std::size_t r = idx;
      bool face = false;
      for (int i = 0; i < d; ++i) {
        int k = int(r % K.n[i]);
        r /= K.n[i];
        if (i >= m && es.eigenvalues()[i - m] < 0 && (k == 0 || k == K.n[i] - 1)) face = true;
      }
      if (face && K.vertex_values[idx] > K.floor)
        throw NumericError("fibre truncation too small: negative face above the floor");
    }
  }
  return K;
}

Barcode relative_persistence(const FilteredComplex& K) {
  CellGrid g(K);
  std::vector<double> val;
  cell_values(K, g, val, nullptr);
  const int d = K.dim();
  std::vector<int> order;
  order.reserve(g.total);
  std::vector<int> cdim(g.total);
  for (int c = 0; c < g.total; ++c) {
    cdim[c] = g.dim_of(c);
    if (val[c] > K.floor) order.push_back(c);
  }
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    if (val[a] != val[b]) return val[a] < val[b];
    if (cdim[a] != cdim[b]) return cdim[a] < cdim[b];
    return a < b;
  });
  const int M = static_cast<int>(order.size());
  std::vector<int> pos(g.total, -1);
  for (int j = 0; j < M; ++j) pos[order[j]] = j;

  std::vector<int> pivot(M, -1);
  std::vector<char> cleared(M, 0), zero(M, 0);
  std::vector<std::vector<int>> R(M);
  std::vector<std::vector<int>> by_dim(d + 1);
  for (int j = 0; j < M; ++j) by_dim[cdim[order[j]]].push_back(j);
  Barcode out;
  out.cells = M;
  std::vector<int> col, tmp;
  for (int k = d; k >= 0; --k) {
    for (int j : by_dim[k]) {
      if (cleared[j]) continue;
      col.clear();
      int c = order[j];
      for (int i = 0; i < d; ++i) {
        if (!(g.coord(c, i) & 1)) continue;
        auto [a, b] = g.faces(c, i);
        if (pos[a] >= 0) col.push_back(pos[a]);
        if (pos[b] >= 0) col.push_back(pos[b]);
      }
      std::sort(col.begin(), col.end());
      while (!col.empty() && pivot[col.back()] >= 0) {
        const auto& other = R[pivot[col.back()]];
        tmp.clear();
        std::set_symmetric_difference(col.begin(), col.end(), other.begin(), other.end(), std::back_inserter(tmp));
        col.swap(tmp);
      }
      if (col.empty()) {
        zero[j] = 1;
        continue;
      }
      int low = col.back();
      pivot[low] = j;
      cleared[low] = 1;
      R[j] = col;
      if (val[order[low]] < val[order[j]]) out.bars.push_back(Bar{val[order[low]], val[order[j]], cdim[order[low]]});
    }
  }
  for (int j = 0; j < M; ++j)
    if (zero[j] && !cleared[j]) out.bars.push_back(Bar{val[order[j]], std::numeric_limits<double>::infinity(), cdim[order[j]]});
  std::sort(out.bars.begin(), out.bars.end(), [](const Bar& a, const Bar& b) {
    if (a.degree != b.degree) return a.degree < b.degree;
    return a.birth < b.birth;
  });
  return out;
}

double level_oscillation(const FilteredComplex& K, double a) {
  const int d = K.dim();
  std::vector<int> cells(d);
  std::size_t top = 1;
  for (int i = 0; i < d; ++i) {
    cells[i] = K.periodic[i] ? K.n[i] : K.n[i] - 1;
    top *= cells[i];
  }
  std::vector<int> vstride(d);
  int s = 1;
  for (int i = 0; i < d; ++i) {
    vstride[i] = s;
    s *= K.n[i];
  }
  double best = 0.0;
  std::vector<int> base(d);
  for (std::size_t t = 0; t < top; ++t) {
    std::size_t r = t;
    for (int i = 0; i < d; ++i) {
      base[i] = int(r % cells[i]);
      r /= cells[i];
    }
    double lo = std::numeric_limits<double>::infinity(), hi = -lo;
    for (int corner = 0; corner < (1 << d); ++corner) {
      int v = 0;
      for (int i = 0; i < d; ++i) {
        int x = base[i] + ((corner >> i) & 1);
        if (x == K.n[i]) x = 0;
        v += x * vstride[i];
      }
      lo = std::min(lo, K.vertex_values[v]);
      hi = std::max(hi, K.vertex_values[v]);
    }
    if (lo <= a && a <= hi) best = std::max(best, hi - lo);
  }
  return best;
}

int target_degree(const FilteredComplex& K, ClassSelector u) {
  return u == ClassSelector::unit ? K.index : K.index + K.base_dim;
}

namespace {

SpectralValue select(const FilteredComplex& K, const Barcode& b, ClassSelector u) {
  int deg = target_degree(K, u);
  if (deg > K.dim()) throw Error("class degree outside the complex");
  const Bar* hit = nullptr;
  int count = 0;
  for (const Bar& bar : b.bars)
    if (bar.essential() && bar.degree == deg) {
      if (!hit) hit = &bar;
      ++count;
    }
  if (count != 1)
    throw NumericError("class not matched (resolution too coarse): " + std::to_string(count) +
                       " essential classes in degree " + std::to_string(deg));
  SpectralValue v;
  v.value = hit->birth;
  v.error = level_oscillation(K, v.value);
  return v;
}

GFQI negated(const GFQI& F) {
  GFQI G = F;
  auto f = F.F;
  G.F = [f](const DVec& q, const DVec& z) { return -f(q, z); };
  G.Q = -F.Q;
  G.description = "-" + F.description;
  return G;
}

void check_signs(const SpectralPair& p) {
  if (p.plus.value < -(p.plus.error + 1e-6)) throw NumericError("c_plus below zero beyond its error bound");
  if (p.minus.value > p.minus.error + 1e-6) throw NumericError("c_minus above zero beyond its error bound");
}

}  // namespace

SpectralValue minmax_value(const GFQI& F, ClassSelector u, const SpectralConfig& cfg, Barcode* diagnostics) {
  FilteredComplex K = build_complex(F, cfg);
  Barcode b = relative_persistence(K);
  SpectralValue v = select(K, b, u);
  if (diagnostics) *diagnostics = std::move(b);
  return v;
}

SpectralValue separable_minmax(const SeparableGF& F, ClassSelector u) {
  if (F.blocks.size() != F.vars.size()) throw Error("separable_minmax: one variable list per block required");
  std::vector<int> owner(F.base_dim, -1);
  for (std::size_t k = 0; k < F.vars.size(); ++k) {
    if (static_cast<int>(F.vars[k].size()) != F.blocks[k].base.dim) throw Error("separable_minmax: block dimension mismatch");
    for (int v : F.vars[k]) {
      if (v < 0 || v >= F.base_dim) throw Error("separable_minmax: variable out of range");
      if (owner[v] >= 0) throw Error("blocks share variables");
      owner[v] = int(k);
    }
  }
  SpectralValue out;
  for (std::size_t k = 0; k < F.blocks.size(); ++k) {
    const SpectralConfig& c = k < F.cfgs.size() ? F.cfgs[k] : F.block_cfg;
    SpectralValue b = minmax_value(F.blocks[k], u, c);
    out.value += b.value;
    out.error += b.error;
  }
  return out;
}

SpectralPair c_pm_graph(const LcsMap& phi, const Box& support, bool periodic_z, double bound,
                        const SpectralConfig& cfg, Barcode* diagnostics) {
  GFQI Fbar = negated(graph_gf(phi, support, periodic_z, bound));
  FilteredComplex K = build_complex(Fbar, cfg);
  Barcode b = relative_persistence(K);
  if (diagnostics) *diagnostics = b;
  SpectralPair p{select(K, b, ClassSelector::fundamental), select(K, b, ClassSelector::unit), "lcs graph"};
  check_signs(p);
  return p;
}

SpectralPair c_pm_contact(const ContactIsotopy& c, const SpectralConfig& cfg) {
  return c_pm_contact(contact_time_map(c), c.support, c.periodic_z, c.H.bound > 0 ? c.H.bound : 1.0, cfg);
}

SpectralPair c_pm_contact(const ContactMap& phi, const Box& support, bool periodic_z, double bound,
                          const SpectralConfig& cfg, Barcode* diagnostics) {
  SeparableGF S;
  S.base_dim = 4;
  S.blocks.push_back(function_gf(Chart(1, {true}, {"theta"}), [](const DVec&) { return 0.0; }, Box{{0.0}, {1.0}}, 0.0));
  S.vars.push_back({0});
  S.blocks.push_back(negated(graph_gf_contact(phi, support, periodic_z, bound)));
  S.vars.push_back({1, 2, 3});
  SpectralConfig theta_cfg = cfg;
  theta_cfg.base_res = {4};
  SpectralConfig base_cfg = cfg;
  if (base_cfg.base_res.size() == 4) base_cfg.base_res.erase(base_cfg.base_res.begin());
  S.cfgs = {theta_cfg, base_cfg};
  if (diagnostics) *diagnostics = relative_persistence(build_complex(S.blocks[1], base_cfg));
  SpectralPair p{separable_minmax(S, ClassSelector::fundamental), separable_minmax(S, ClassSelector::unit),
                 "contact reduction"};
  check_signs(p);
  return p;
}

SpectralPair c_pm(const HamiltonianIsotopy& iso, const SpectralConfig& cfg) {
  std::vector<std::string> failed;
  const Chart& ch = iso.triple.chart;
  if (ch.dim != 4) failed.push_back("model is not S^1 x R^3 or S^1 x R^2 x S^1");
  if (!ch.is_periodic(0)) failed.push_back("first coordinate is not the circle");
  if (iso.support.dim() != 4) failed.push_back("support box missing");
  if (!failed.empty()) {
    std::string msg = "no feasible spectral route:";
    for (auto& f : failed) msg += " " + f + ";";
    throw Error(msg);
  }
  double bound = iso.H.bound > 0 ? iso.H.bound : 1.0;
  return c_pm_graph(time_map(iso), iso.support, ch.is_periodic(3), bound, cfg);
}

RadialContinuation c_plus_radial(const RadialProfile& prof, double box_radius, const SpectralConfig& cfg,
                                 double t0, double dt) {
  if (prof.slope() >= 1.0) throw Error("radial profile slope must be < 1");
  if (prof.b >= M_PI * box_radius * box_radius) throw Error("radial profile is not supported in the box");
  ContactIsotopy c;
  c.n = 1;
  c.H = scaled(radial_hamiltonian(1, prof), t0);
  c.support = Box{{-box_radius, -box_radius, 0.0}, {box_radius, box_radius, 1.0}};
  c.periodic_z = true;
  c.integrator.step = 5e-3;
  GFQI Fb = negated(graph_gf_contact(c, prof.A * t0));
  // declared split: F(x, y, z) = f(x, y); checked on a few points
  for (double x : {-0.3, 0.1, 0.45})
    for (double y : {-0.2, 0.3}) {
      double a = Fb(DVec::Map(std::array<double, 3>{x * box_radius, y * box_radius, 0.0}.data(), 3), DVec(0));
      double b = Fb(DVec::Map(std::array<double, 3>{x * box_radius, y * box_radius, 0.37}.data(), 3), DVec(0));
      if (std::abs(a - b) > 1e-8) throw NumericError("radial route: generating function depends on z");
    }
  SeparableGF S;
  S.base_dim = 4;
  S.blocks.push_back(function_gf(Chart(1, {true}, {"theta"}), [](const DVec&) { return 0.0; }, Box{{0.0}, {1.0}}, 0.0));
  S.vars.push_back({0});
  S.blocks.push_back(function_gf(Chart(1, {true}, {"z"}), [](const DVec&) { return 0.0; }, Box{{0.0}, {1.0}}, 0.0));
  S.vars.push_back({3});
  GFQI plane = function_gf(Chart(2, {false, false}, {"x", "y"}),
                           [Fb](const DVec& q) { return Fb(DVec::Map(std::array<double, 3>{q[0], q[1], 0.0}.data(), 3), DVec(0)); },
                           Box{{-box_radius, -box_radius}, {box_radius, box_radius}}, prof.A * t0);
  S.blocks.push_back(plane);
  S.vars.push_back({1, 2});
  SpectralConfig small = cfg;
  small.base_res = {4};
  SpectralConfig pc = cfg;
  if (pc.base_res.empty()) pc.base_res = {40};
  S.cfgs = {small, small, pc};
  RadialContinuation out;
  out.start = SpectralPair{separable_minmax(S, ClassSelector::fundamental), separable_minmax(S, ClassSelector::unit),
                           "radial separable"};
  check_signs(out.start);
  // spectrum of the time-t map: {0, t A}
  auto pick = [&](double t, double prev, double radius) {
    std::vector<double> hits;
    for (double s : {0.0, t * prof.A})
      if (std::abs(s - prev) <= radius) hits.push_back(s);
    std::sort(hits.begin(), hits.end());
    hits.erase(std::unique(hits.begin(), hits.end()), hits.end());
    if (hits.size() != 1) throw NumericError("continuation ambiguous at t = " + std::to_string(t));
    return hits[0];
  };
  double err = out.start.plus.error;
  double c0 = pick(t0, out.start.plus.value, err + 1e-6);
  out.t.push_back(t0);
  out.c_plus.push_back(c0);
  int steps = int(std::lround((1.0 - t0) / dt));
  for (int k = 1; k <= steps; ++k) {
    double t = t0 + k * dt;
    if (k == steps) t = 1.0;
    double c = pick(t, out.c_plus.back(), (t - out.t.back()) * prof.A + 1e-9);
    out.t.push_back(t);
    out.c_plus.push_back(c);
  }
  out.value = out.c_plus.back();
  out.error = err;
  return out;
}

std::string barcode_csv(const Barcode& b) {
  std::ostringstream os;
  os.precision(12);
  os << "birth,death,degree\n";
  for (const Bar& bar : b.bars) {
    os << bar.birth + 0.0 << ',';
    if (bar.essential())
      os << "inf";
    else
      os << bar.death + 0.0;
    os << ',' << bar.degree << '\n';
  }
  return os.str();
}

}  // namespace lcs
