#include "lcs/lcscore.hpp"

#include <bit>
#include <cmath>
#include <limits>

namespace lcs {

int ModelSpace::x_index(int j) const { return (kind == ModelKind::EuclideanContact ? 0 : 1) + 2 * j; }
int ModelSpace::y_index(int j) const { return x_index(j) + 1; }
int ModelSpace::z_index() const { return (kind == ModelKind::EuclideanContact ? 0 : 1) + 2 * n; }

Mat LcsTriple::omega_matrix(const Vec& x) const {
  const int n = chart.dim;
  CVec c = omega.at(x);
  Mat O = Mat::Zero(n, n);
  const auto& idx = multi_indices(n, 2);
  for (size_t k = 0; k < idx.size(); ++k) {
    int i = std::countr_zero(static_cast<unsigned>(idx[k]));
    int j = 31 - std::countl_zero(static_cast<unsigned>(idx[k]));
    O(i, j) = c[k];
    O(j, i) = -c[k];
  }
  return O;
}

Vec LcsTriple::eta_at(const Vec& x) const { return Vec(eta.at(x)); }

Vec LcsTriple::lambda_at(const Vec& x) const {
  if (!lambda) throw Error("not a Liouville triple");
  return Vec(lambda->at(x));
}

KForm alpha0_form(int n, int offset, int dim, std::vector<bool> periodic) {
  // indices of dx_j, dy_j, dz among the 1-form coefficients are just the coordinates
  return analytic_form(
      dim, 1,
      [n, offset, dim](const auto& x, auto* out) {
        for (int i = 0; i < dim; ++i) out[i] = 0.0;
        for (int j = 0; j < n; ++j) {
          int xi = offset + 2 * j, yi = xi + 1;
          out[xi] = x[yi] * -0.5;
          out[yi] = x[xi] * 0.5;
        }
        out[offset + 2 * n] = -1.0;
      },
      periodic);
}

namespace {

std::vector<std::string> lcs_labels(int n, bool with_theta) {
  std::vector<std::string> l;
  if (with_theta) l.push_back("theta");
  for (int j = 1; j <= n; ++j) {
    std::string s = n == 1 ? "" : std::to_string(j);
    l.push_back("x" + s);
    l.push_back("y" + s);
  }
  l.push_back("z");
  return l;
}

LcsTriple symplectization_triple(int n, bool periodic_z) {
  const int dim = 2 * n + 2;
  std::vector<bool> per(dim, false);
  per[0] = true;
  if (periodic_z) per[dim - 1] = true;
  LcsTriple t;
  t.chart = Chart(dim, per, lcs_labels(n, true));
  CVec e = CVec::Zero(dim);
  e[0] = -1.0;
  t.eta = constant_form(dim, 1, e);
  t.lambda = alpha0_form(n, 1, dim, per);
  // d alpha_0 + dtheta ^ alpha_0, written out
  const int zi = dim - 1;
  t.omega = analytic_form(
      dim, 2,
      [n, dim, zi](const auto& x, auto* out) {
        int nc = binom(dim, 2);
        for (int k = 0; k < nc; ++k) out[k] = 0.0;
        auto at = [dim](int i, int j) { return multi_index_pos(dim, 2, mask_of({i, j})); };
        for (int j = 0; j < n; ++j) {
          int xi = 1 + 2 * j, yi = xi + 1;
          out[at(xi, yi)] = 1.0;
          out[at(0, xi)] = x[yi] * -0.5;
          out[at(0, yi)] = x[xi] * 0.5;
        }
        out[at(0, zi)] = -1.0;
      },
      per);
  return t;
}

}  // namespace

ModelSpace r3_contact(int n) {
  if (n < 1 || 2 * n + 1 > kMaxDim) throw Error("unsupported contact dimension");
  ModelSpace m;
  m.kind = ModelKind::EuclideanContact;
  m.name = "r3_contact";
  m.n = n;
  m.chart = Chart(2 * n + 1, {}, lcs_labels(n, false));
  m.alpha = alpha0_form(n, 0, 2 * n + 1);
  return m;
}

ModelSpace s1xr3(int n) {
  if (n < 1 || 2 * n + 2 > kMaxDim) throw Error("unsupported lcs dimension");
  ModelSpace m;
  m.kind = ModelKind::LcsEuclidean;
  m.name = "s1xr3";
  m.n = n;
  m.triple = symplectization_triple(n, false);
  m.chart = m.triple->chart;
  return m;
}

ModelSpace s1xr2xs1(int n) {
  if (n < 1 || 2 * n + 2 > kMaxDim) throw Error("unsupported lcs dimension");
  ModelSpace m;
  m.kind = ModelKind::LcsTorus;
  m.name = "s1xr2xs1";
  m.n = n;
  m.triple = symplectization_triple(n, true);
  m.chart = m.triple->chart;
  return m;
}

ModelSpace tstar_twisted(const Chart& base, const CVec& beta) {
  const int b = base.dim;
  if (2 * b > kMaxDim) throw Error("twisted cotangent bundle too large");
  if (beta.size() != b) throw Error("beta has the wrong number of coefficients");
  const int dim = 2 * b;
  std::vector<bool> per(dim, false);
  std::vector<std::string> labels;
  for (int i = 0; i < b; ++i) {
    per[i] = base.is_periodic(i);
    labels.push_back("q_" + base.labels[i]);
  }
  for (int i = 0; i < b; ++i) labels.push_back("p_" + base.labels[i]);

  ModelSpace m;
  m.kind = ModelKind::TwistedCotangent;
  m.name = "tstar_twisted";
  m.base_dim = b;
  m.beta = beta;
  m.chart = Chart(dim, per, labels);

  LcsTriple t;
  t.chart = m.chart;
  CVec e = CVec::Zero(dim);
  e.head(b) = beta;
  t.eta = constant_form(dim, 1, e);
  t.lambda = analytic_form(
      dim, 1,
      [b](const auto& x, auto* out) {
        for (int i = 0; i < b; ++i) {
          out[i] = x[b + i];
          out[b + i] = 0.0;
        }
      },
      per);
  std::vector<double> bv(beta.data(), beta.data() + b);
  // d lambda - eta ^ lambda
  t.omega = analytic_form(
      dim, 2,
      [b, dim, bv](const auto& x, auto* out) {
        int nc = binom(dim, 2);
        for (int k = 0; k < nc; ++k) out[k] = 0.0;
        for (int i = 0; i < b; ++i) {
          out[multi_index_pos(dim, 2, mask_of({i, b + i}))] = -1.0;
          for (int j = i + 1; j < b; ++j)
            out[multi_index_pos(dim, 2, mask_of({i, j}))] = -(bv[i] * x[b + j] - bv[j] * x[b + i]);
        }
      },
      per);
  m.triple = t;
  return m;
}

ModelSpace model_by_name(const std::string& name, int n, const Chart* base, const CVec* beta) {
  if (name == "r3_contact") return r3_contact(n);
  if (name == "s1xr3") return s1xr3(n);
  if (name == "s1xr2xs1") return s1xr2xs1(n);
  if (name == "tstar_twisted") {
    if (base && beta) return tstar_twisted(*base, *beta);
    // default: T^*_{-dtheta}(S^1 x R^{2n+1})
    Chart c = s1xr3(n).chart;
    CVec b = CVec::Zero(c.dim);
    b[0] = -1.0;
    return tstar_twisted(c, b);
  }
  throw Error("unknown model space '" + name + "'");
}

Vec solve_omega(const Mat& Omega, const Vec& rhs) {
  Eigen::PartialPivLU<Mat> lu(Omega.transpose());
  if (std::abs(lu.determinant()) < 1e-10) throw NumericError("degenerate lcs form at point");
  return lu.solve(rhs);
}

Vec lee_vector_field(const LcsTriple& t, const Vec& x) { return solve_omega(t.omega_matrix(x), t.eta_at(x)); }

Vec liouville_vector_field(const LcsTriple& t, const Vec& x) {
  if (!t.lambda) throw Error("not a Liouville triple");
  return solve_omega(t.omega_matrix(x), t.lambda_at(x));
}

LcsTriple gauge_transform(const LcsTriple& t, const ScalarField& f) {
  LcsTriple out;
  out.chart = t.chart;
  ScalarField ef = exp_field(f);
  out.eta = add(t.eta, exterior_derivative(f));
  out.omega = wedge(ef, t.omega);
  if (t.lambda) out.lambda = wedge(ef, *t.lambda);
  return out;
}

std::vector<Vec> sample_box(const Box& box, int count, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<Vec> pts;
  pts.reserve(count);
  for (int s = 0; s < count; ++s) {
    Vec p(box.dim());
    for (int i = 0; i < box.dim(); ++i) p[i] = box.lo[i] + (box.hi[i] - box.lo[i]) * u(rng);
    pts.push_back(p);
  }
  return pts;
}

TripleReport verify_lcs_triple(const LcsTriple& t, int samples, const Box& box, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  auto pts = sample_box(box, samples, rng);
  TripleReport r;
  r.samples = samples;
  r.d_eta = max_abs(exterior_derivative(t.eta), pts);
  if (t.chart.dim >= 3) r.d_eta_omega = max_abs(lichnerowicz_derivative(t.omega, t.eta), pts);
  if (t.lambda) r.omega_minus_dlambda = max_difference(t.omega, lichnerowicz_derivative(*t.lambda, t.eta), pts);
  r.min_abs_det = std::numeric_limits<double>::infinity();
  for (const auto& p : pts) r.min_abs_det = std::min(r.min_abs_det, std::abs(t.omega_matrix(p).determinant()));
  return r;
}

Vec untwist(const Vec& point, const KForm& beta) {
  const int m = beta.dim();
  if (point.size() != 2 * m + 1) throw Error("untwist: expected (q, p, z)");
  Vec q = point.head(m);
  Vec out = point;
  out.segment(m, m) += point[2 * m] * Vec(beta.at(q));
  return out;
}

Vec untwist_inverse(const Vec& point, const KForm& beta) {
  const int m = beta.dim();
  if (point.size() != 2 * m + 1) throw Error("untwist: expected (q, p, z)");
  Vec q = point.head(m);
  Vec out = point;
  out.segment(m, m) -= point[2 * m] * Vec(beta.at(q));
  return out;
}

Vec tau_map(const Vec& in) {
  if (in.size() != 8) throw Error("tau expects (theta,x,y,z,Theta,X,Y,Z)");
  Vec out(8);
  tau_coords(in.data(), out.data());
  return out;
}

Vec tau_inverse(const Vec& o) {
  if (o.size() != 8) throw Error("tau inverse expects 8 coordinates");
  if (!(o[7] < 1.0)) throw NumericError("outside image (1 - e^{Theta-theta} < 1 required)");
  double s = std::log(1.0 - o[7]);
  double e = std::exp(0.5 * s);
  double x = o[1] - 0.5 * o[6];
  double X = (o[1] + 0.5 * o[6]) / e;
  double y = o[2] + 0.5 * o[5];
  double Y = (o[2] - 0.5 * o[5]) / e;
  double Z = o[3];
  double z = Z - o[4] + e * (y * X - x * Y) * 0.5;
  return make_vec({o[0], x, y, z, o[0] + s, X, Y, Z});
}

ChartMap tau_chart_map() {
  return analytic_map(8, 8, [](const auto& x, auto* y) { tau_coords(x.data(), y); });
}

Vec tau_contact(const Vec& in) {
  if (in.size() != 7) throw Error("contact tau expects (x,y,z,X,Y,Z,g)");
  double x = in[0], y = in[1], z = in[2], X = in[3], Y = in[4], Z = in[5], g = in[6];
  double e = std::exp(-0.5 * g);
  return make_vec({(x + e * X) * 0.5, (y + e * Y) * 0.5, Z, y - e * Y, e * X - x, 1.0 - std::exp(-g),
                   Z - z + e * (y * X - x * Y) * 0.5});
}

KForm product_eta() {
  CVec e = CVec::Zero(8);
  e[0] = -1.0;
  return constant_form(8, 1, e);
}

KForm product_lambda() {
  return analytic_form(8, 1, [](const auto& v, auto* out) {
    using std::exp;
    auto E = exp(v[4] - v[0]);
    out[0] = 0.0;
    out[1] = v[2] * 0.5;
    out[2] = v[1] * -0.5;
    out[3] = 1.0;
    out[4] = 0.0;
    out[5] = E * v[6] * -0.5;
    out[6] = E * v[5] * 0.5;
    out[7] = E * -1.0;
  });
}

}  // namespace lcs
