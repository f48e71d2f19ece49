#include "lcs/chartcalc.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <mutex>

namespace lcs {

bool Box::contains(const Vec& x, double margin) const {
  for (int i = 0; i < dim(); ++i)
    if (x[i] < lo[i] - margin || x[i] > hi[i] + margin) return false;
  return true;
}

int binom(int n, int k) {
  if (k < 0 || k > n) return 0;
  int r = 1;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

namespace {
struct MultiTable {
  std::vector<std::uint8_t> masks[kMaxDim + 1][kMaxDim + 1];
  int pos[kMaxDim + 1][256];
  MultiTable() {
    for (int n = 0; n <= kMaxDim; ++n) {
      std::fill(std::begin(pos[n]), std::end(pos[n]), -1);
      std::vector<std::vector<int>> combos;
      for (int k = 0; k <= n; ++k) {
        std::vector<int> idx(k);
        for (int i = 0; i < k; ++i) idx[i] = i;
        auto& out = masks[n][k];
        while (true) {
          std::uint8_t m = 0;
          for (int i : idx) m |= static_cast<std::uint8_t>(1u << i);
          pos[n][m] = static_cast<int>(out.size());
          out.push_back(m);
          int i = k - 1;
          while (i >= 0 && idx[i] == n - k + i) --i;
          if (i < 0) break;
          ++idx[i];
          for (int j = i + 1; j < k; ++j) idx[j] = idx[j - 1] + 1;
        }
      }
    }
  }
};
const MultiTable& table() {
  static const MultiTable t;
  return t;
}

int popcount(unsigned m) { return std::popcount(m); }

// sign of dx_I ^ dx_J relative to dx_{I|J}
int wedge_sign(std::uint8_t I, std::uint8_t J) {
  int inv = 0;
  for (int i = 0; i < 8; ++i)
    if (I & (1u << i)) inv += popcount(J & ((1u << i) - 1u));
  return (inv & 1) ? -1 : 1;
}
}  // namespace

const std::vector<std::uint8_t>& multi_indices(int dim, int k) { return table().masks[dim][k]; }
int multi_index_pos(int dim, int, std::uint8_t mask) { return table().pos[dim][mask]; }

std::uint8_t mask_of(std::initializer_list<int> idx) {
  std::uint8_t m = 0;
  for (int i : idx) m |= static_cast<std::uint8_t>(1u << i);
  return m;
}

double wrap_unit(double x) {
  double r = x - std::floor(x);
  return r >= 1.0 ? 0.0 : r;
}

double wrap_half(double d) {
  double r = d - std::round(d);
  if (r <= -0.5) r += 1.0;
  return r;
}

Chart::Chart(int d, std::vector<bool> p, std::vector<std::string> l)
    : dim(d), periodic(std::move(p)), labels(std::move(l)) {
  if (dim < 1 || dim > kMaxDim) throw Error("chart dimension out of range");
  periodic.resize(dim, false);
  if (labels.empty())
    for (int i = 0; i < dim; ++i) labels.push_back("x" + std::to_string(i));
}

Vec Chart::reduce(const Vec& x) const {
  Vec y = x;
  for (int i = 0; i < dim; ++i)
    if (is_periodic(i)) y[i] = wrap_unit(y[i]);
  return y;
}

Vec Chart::difference(const Vec& a, const Vec& b) const {
  Vec d = a - b;
  for (int i = 0; i < dim; ++i)
    if (is_periodic(i)) d[i] = wrap_half(d[i]);
  return d;
}

KForm::KForm(int dim, int degree, Evaluator eval, int native_order, bool analytic,
             std::vector<bool> periodic, double h)
    : dim_(dim), degree_(degree), native_(native_order), analytic_(analytic), eval_(std::move(eval)),
      periodic_(std::move(periodic)), h_(h) {
  if (degree < 0 || degree > dim) throw Error("form degree out of range");
  periodic_.resize(dim, false);
}

KForm KForm::with_step(double h) const {
  KForm k = *this;
  k.h_ = h;
  return k;
}

CVec KForm::at(const Vec& x) const { return eval_(x, 0).c; }

FormJet KForm::jet(const Vec& x, int order) const {
  if (order <= native_) return eval_(x, order);
  FormJet out = eval_(x, native_);
  int nc = ncoeffs();
  const double h = h_;
  if (native_ == 0) {
    out.dc.resize(nc, dim_);
    for (int j = 0; j < dim_; ++j) {
      Vec xp = x, xm = x;
      xp[j] += h;
      xm[j] -= h;
      out.dc.col(j) = (eval_(xp, 0).c - eval_(xm, 0).c) / (2 * h);
    }
  }
  if (order >= 2) {
    out.d2c.assign(nc, Mat::Zero(dim_, dim_));
    if (native_ >= 1) {
      for (int j = 0; j < dim_; ++j) {
        Vec xp = x, xm = x;
        xp[j] += h;
        xm[j] -= h;
        CJac d = (eval_(xp, 1).dc - eval_(xm, 1).dc) / (2 * h);
        for (int k = 0; k < nc; ++k) out.d2c[k].col(j) = d.row(k).transpose();
      }
      for (auto& m : out.d2c) m = 0.5 * (m + m.transpose()).eval();
    } else {
      const double hh = std::max(h, 1e-4);
      for (int a = 0; a < dim_; ++a)
        for (int b = a; b < dim_; ++b) {
          Vec xpp = x, xpm = x, xmp = x, xmm = x;
          xpp[a] += hh; xpp[b] += hh;
          xpm[a] += hh; xpm[b] -= hh;
          xmp[a] -= hh; xmp[b] += hh;
          xmm[a] -= hh; xmm[b] -= hh;
          CVec d = (eval_(xpp, 0).c - eval_(xpm, 0).c - eval_(xmp, 0).c + eval_(xmm, 0).c) / (4 * hh * hh);
          for (int k = 0; k < nc; ++k) out.d2c[k](a, b) = out.d2c[k](b, a) = d[k];
        }
    }
  }
  return out;
}

double KForm::coeff(const Vec& x, std::initializer_list<int> idx) const {
  std::vector<int> v(idx);
  int sign = 1;
  for (size_t i = 0; i < v.size(); ++i)
    for (size_t j = i + 1; j < v.size(); ++j) {
      if (v[i] == v[j]) return 0.0;
      if (v[i] > v[j]) sign = -sign;
    }
  std::uint8_t m = 0;
  for (int i : v) m |= static_cast<std::uint8_t>(1u << i);
  return sign * at(x)[multi_index_pos(dim_, degree_, m)];
}

double value(const ScalarField& f, const Vec& x) { return f.at(x)[0]; }
Vec gradient(const ScalarField& f, const Vec& x) { return f.jet(x, 1).dc.row(0).transpose(); }

KForm sampled_form(int dim, int degree, std::function<CVec(const Vec&)> coeffs, std::vector<bool> periodic,
                   double h) {
  auto eval = [coeffs, dim, periodic](const Vec& x0, int) {
    Vec x = x0;
    for (int i = 0; i < dim; ++i)
      if (i < static_cast<int>(periodic.size()) && periodic[i]) x[i] = wrap_unit(x[i]);
    FormJet out;
    out.c = coeffs(x);
    return out;
  };
  return KForm(dim, degree, eval, 0, false, periodic, h);
}

KForm constant_form(int dim, int degree, const CVec& coeffs) {
  int nc = binom(dim, degree);
  if (coeffs.size() != nc) throw Error("constant_form: wrong coefficient count");
  auto eval = [coeffs, nc, dim](const Vec&, int order) {
    FormJet out;
    out.c = coeffs;
    if (order >= 1) out.dc = CJac::Zero(nc, dim);
    if (order >= 2) out.d2c.assign(nc, Mat::Zero(dim, dim));
    return out;
  };
  return KForm(dim, degree, eval, 2, true);
}

KForm zero_form(int dim, int degree) { return constant_form(dim, degree, CVec::Zero(binom(dim, degree))); }

namespace {
void check_same(const KForm& a, const KForm& b) {
  if (a.dim() != b.dim() || a.degree() != b.degree()) throw Error("form shape mismatch");
}

std::vector<bool> merge_periodic(const KForm& a, const KForm& b) {
  std::vector<bool> p(a.dim());
  for (int i = 0; i < a.dim(); ++i) p[i] = a.periodic()[i] || b.periodic()[i];
  return p;
}

KForm linear(const KForm& a, const KForm& b, double sa, double sb) {
  check_same(a, b);
  auto eval = [a, b, sa, sb](const Vec& x, int order) {
    FormJet ja = a.jet(x, order), jb = b.jet(x, order);
    FormJet out;
    out.c = sa * ja.c + sb * jb.c;
    if (order >= 1) out.dc = sa * ja.dc + sb * jb.dc;
    if (order >= 2) {
      out.d2c.resize(ja.d2c.size());
      for (size_t k = 0; k < ja.d2c.size(); ++k) out.d2c[k] = sa * ja.d2c[k] + sb * jb.d2c[k];
    }
    return out;
  };
  return KForm(a.dim(), a.degree(), eval, 2, a.analytic() && b.analytic(), merge_periodic(a, b),
               a.step());
}
}  // namespace

KForm add(const KForm& a, const KForm& b) { return linear(a, b, 1.0, 1.0); }
KForm sub(const KForm& a, const KForm& b) { return linear(a, b, 1.0, -1.0); }
KForm scale(double s, const KForm& a) { return linear(a, zero_form(a.dim(), a.degree()), s, 0.0); }

KForm exterior_derivative(const KForm& s) {
  const int n = s.dim(), k = s.degree();
  if (k >= n) throw Error("top-degree form");
  auto eval = [s, n, k](const Vec& x, int order) {
    FormJet js = s.jet(x, order + 1);
    const auto& out_idx = multi_indices(n, k + 1);
    int nc = static_cast<int>(out_idx.size());
    FormJet out;
    out.c = CVec::Zero(nc);
    if (order >= 1) out.dc = CJac::Zero(nc, n);
    for (int K = 0; K < nc; ++K) {
      std::uint8_t m = out_idx[K];
      int p = 0;
      for (int j = 0; j < n; ++j) {
        if (!(m & (1u << j))) continue;
        int sign = (p & 1) ? -1 : 1;
        ++p;
        int I = multi_index_pos(n, k, static_cast<std::uint8_t>(m & ~(1u << j)));
        out.c[K] += sign * js.dc(I, j);
        if (order >= 1) out.dc.row(K) += sign * js.d2c[I].row(j);
      }
    }
    return out;
  };
  return KForm(n, k + 1, eval, 1, s.analytic(), s.periodic(), s.step());
}

KForm wedge(const KForm& a, const KForm& b) {
  const int n = a.dim(), ka = a.degree(), kb = b.degree();
  if (b.dim() != n) throw Error("form shape mismatch");
  if (ka + kb > n) throw Error("degree overflow in wedge");
  auto eval = [a, b, n, ka, kb](const Vec& x, int order) {
    FormJet ja = a.jet(x, order), jb = b.jet(x, order);
    int nc = binom(n, ka + kb);
    FormJet out;
    out.c = CVec::Zero(nc);
    if (order >= 1) out.dc = CJac::Zero(nc, n);
    if (order >= 2) out.d2c.assign(nc, Mat::Zero(n, n));
    const auto& IA = multi_indices(n, ka);
    const auto& IB = multi_indices(n, kb);
    for (size_t i = 0; i < IA.size(); ++i)
      for (size_t j = 0; j < IB.size(); ++j) {
        if (IA[i] & IB[j]) continue;
        int K = multi_index_pos(n, ka + kb, static_cast<std::uint8_t>(IA[i] | IB[j]));
        double s = wedge_sign(IA[i], IB[j]);
        double va = ja.c[i], vb = jb.c[j];
        out.c[K] += s * va * vb;
        if (order >= 1) out.dc.row(K) += s * (ja.dc.row(i) * vb + va * jb.dc.row(j));
        if (order >= 2) {
          Vec ga = ja.dc.row(i).transpose(), gb = jb.dc.row(j).transpose();
          out.d2c[K] += s * (ja.d2c[i] * vb + va * jb.d2c[j] + ga * gb.transpose() + gb * ga.transpose());
        }
      }
    return out;
  };
  return KForm(n, ka + kb, eval, 2, a.analytic() && b.analytic(), merge_periodic(a, b), a.step());
}

KForm lichnerowicz_derivative(const KForm& s, const KForm& eta) {
  if (eta.degree() != 1) throw Error("Lee form must have degree 1");
  return sub(exterior_derivative(s), wedge(eta, s));
}

KForm interior_product(const VectorField& X, const KForm& s) {
  const int n = s.dim(), k = s.degree();
  if (k == 0) throw Error("interior product of a 0-form");
  auto eval = [X, s, n, k](const Vec& x, int) {
    Vec v = X(x);
    CVec c = s.at(x);
    const auto& out_idx = multi_indices(n, k - 1);
    FormJet out;
    out.c = CVec::Zero(static_cast<Eigen::Index>(out_idx.size()));
    for (size_t I = 0; I < out_idx.size(); ++I)
      for (int j = 0; j < n; ++j) {
        if (out_idx[I] & (1u << j)) continue;
        int below = popcount(out_idx[I] & ((1u << j) - 1u));
        int K = multi_index_pos(n, k, static_cast<std::uint8_t>(out_idx[I] | (1u << j)));
        out.c[I] += ((below & 1) ? -1.0 : 1.0) * v[j] * c[K];
      }
    return out;
  };
  return KForm(n, k - 1, eval, 0, false, s.periodic(), s.step());
}

Mat ChartMap::jacobian(const Vec& x) const {
  if (jac) return jac(x);
  Mat J(dst_dim, src_dim);
  for (int j = 0; j < src_dim; ++j) {
    Vec xp = x, xm = x;
    xp[j] += h;
    xm[j] -= h;
    J.col(j) = (f(xp) - f(xm)) / (2 * h);
  }
  return J;
}

KForm pullback(const ChartMap& map, const KForm& s) {
  if (s.dim() != map.dst_dim) throw Error("pullback: dimension mismatch");
  const int n = map.src_dim, k = s.degree();
  if (k > n) throw Error("pullback: degree overflow");
  auto eval = [map, s, n, k](const Vec& x, int) {
    Vec y = map.f(x);
    Mat J = map.jacobian(x);
    CVec c = s.at(y);
    const auto& IJ = multi_indices(map.dst_dim, k);
    const auto& II = multi_indices(n, k);
    FormJet out;
    out.c = CVec::Zero(static_cast<Eigen::Index>(II.size()));
    for (size_t I = 0; I < II.size(); ++I) {
      std::vector<int> cols;
      for (int i = 0; i < n; ++i)
        if (II[I] & (1u << i)) cols.push_back(i);
      for (size_t Jx = 0; Jx < IJ.size(); ++Jx) {
        if (c[Jx] == 0.0) continue;
        std::vector<int> rows;
        for (int i = 0; i < map.dst_dim; ++i)
          if (IJ[Jx] & (1u << i)) rows.push_back(i);
        double det = 1.0;
        if (k > 0) {
          Mat sub(k, k);
          for (int a = 0; a < k; ++a)
            for (int b = 0; b < k; ++b) sub(a, b) = J(rows[a], cols[b]);
          det = sub.determinant();
        }
        out.c[I] += c[Jx] * det;
      }
    }
    return out;
  };
  return KForm(n, k, eval, 0, false, {}, s.step());
}

double max_difference(const KForm& a, const KForm& b, const std::vector<Vec>& pts) {
  double m = 0.0;
  for (const auto& p : pts) m = std::max(m, (a.at(p) - b.at(p)).cwiseAbs().maxCoeff());
  return m;
}

double max_abs(const KForm& a, const std::vector<Vec>& pts) {
  double m = 0.0;
  for (const auto& p : pts) {
    CVec c = a.at(p);
    if (c.size()) m = std::max(m, c.cwiseAbs().maxCoeff());
  }
  return m;
}

}  // namespace lcs

namespace lcs {

ScalarField compose_scalar(const ScalarField& f, std::function<std::array<double, 3>(double)> fn) {
  if (f.degree() != 0) throw Error("compose_scalar expects a 0-form");
  const int n = f.dim();
  auto eval = [f, fn, n](const Vec& x, int order) {
    FormJet jf = f.jet(x, order);
    auto d = fn(jf.c[0]);
    FormJet out;
    out.c = CVec::Constant(1, d[0]);
    if (order >= 1) out.dc = d[1] * jf.dc;
    if (order >= 2) {
      Vec g = jf.dc.row(0).transpose();
      out.d2c = {d[1] * jf.d2c[0] + d[2] * g * g.transpose()};
    }
    return out;
  };
  return KForm(n, 0, eval, 2, f.analytic(), f.periodic(), f.step());
}

ScalarField exp_field(const ScalarField& f, double sign) {
  return compose_scalar(f, [sign](double v) {
    double e = std::exp(sign * v);
    return std::array<double, 3>{e, sign * e, e};
  });
}

}  // namespace lcs
