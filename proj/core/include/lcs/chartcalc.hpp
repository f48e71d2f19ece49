#pragma once

#include "lcs/jet.hpp"
#include "lcs/types.hpp"

#include <array>
#include <functional>
#include <string>
#include <vector>

namespace lcs {

int binom(int n, int k);
// Strictly increasing multi-indices of length k in {0..dim-1}, as bitmasks in lexicographic order.
const std::vector<std::uint8_t>& multi_indices(int dim, int k);
int multi_index_pos(int dim, int k, std::uint8_t mask);
std::uint8_t mask_of(std::initializer_list<int> idx);

struct Chart {
  int dim = 0;
  std::vector<bool> periodic;
  std::vector<std::string> labels;

  Chart() = default;
  Chart(int dim, std::vector<bool> periodic = {}, std::vector<std::string> labels = {});

  bool is_periodic(int i) const { return i < static_cast<int>(periodic.size()) && periodic[i]; }
  Vec reduce(const Vec& x) const;
  // a - b, periodic components taken in (-1/2, 1/2]
  Vec difference(const Vec& a, const Vec& b) const;
};

double wrap_half(double d);
double wrap_unit(double x);

struct FormJet {
  CVec c;
  CJac dc;               // dc(I, j) = d c_I / d x_j
  std::vector<Mat> d2c;  // Hessian of each coefficient
};

class KForm {
 public:
  // evaluator(x, order) must fill orders 0..order for order <= native_order
  using Evaluator = std::function<FormJet(const Vec&, int)>;

  KForm() = default;
  KForm(int dim, int degree, Evaluator eval, int native_order, bool analytic,
        std::vector<bool> periodic = {}, double h = 1e-4);

  int dim() const { return dim_; }
  int degree() const { return degree_; }
  int ncoeffs() const { return binom(dim_, degree_); }
  bool analytic() const { return analytic_; }
  int native_order() const { return native_; }
  double step() const { return h_; }
  const std::vector<bool>& periodic() const { return periodic_; }
  KForm with_step(double h) const;

  CVec at(const Vec& x) const;
  // Missing orders are filled by central differences with step h.
  FormJet jet(const Vec& x, int order) const;
  // Coefficient on an arbitrary index list (antisymmetric extension).
  double coeff(const Vec& x, std::initializer_list<int> idx) const;

 private:
  int dim_ = 0, degree_ = 0, native_ = 0;
  bool analytic_ = false;
  Evaluator eval_;
  std::vector<bool> periodic_;
  double h_ = 1e-4;
};

using ScalarField = KForm;
using VectorField = std::function<Vec(const Vec&)>;

double value(const ScalarField& f, const Vec& x);
Vec gradient(const ScalarField& f, const Vec& x);

// Closed-form form: g(x, out) writes ncoeffs values for T in {double, Jet}.
template <class G>
KForm analytic_form(int dim, int degree, G g, std::vector<bool> periodic = {}) {
  auto eval = [=](const Vec& x0, int order) {
    Vec x = x0;
    for (int i = 0; i < dim; ++i)
      if (i < static_cast<int>(periodic.size()) && periodic[i]) x[i] = wrap_unit(x[i]);
    int nc = binom(dim, degree);
    FormJet out;
    out.c.resize(nc);
    if (order == 0) {
      std::array<double, kMaxDim> xs{};
      std::array<double, kMaxCoeffs> cs{};
      for (int i = 0; i < dim; ++i) xs[i] = x[i];
      g(xs, cs.data());
      for (int k = 0; k < nc; ++k) out.c[k] = cs[k];
      return out;
    }
    std::array<Jet, kMaxDim> xs{};
    std::vector<Jet> cs(nc);
    for (int i = 0; i < dim; ++i) xs[i] = Jet::variable(x[i], i, dim, order);
    g(xs, cs.data());
    out.dc.resize(nc, dim);
    if (order >= 2) out.d2c.assign(nc, Mat::Zero(dim, dim));
    for (int k = 0; k < nc; ++k) {
      out.c[k] = cs[k].v;
      for (int j = 0; j < dim; ++j) out.dc(k, j) = cs[k].g[j];
      if (order >= 2)
        for (int a = 0; a < dim; ++a)
          for (int b = 0; b < dim; ++b) out.d2c[k](a, b) = cs[k].h[a][b];
    }
    return out;
  };
  return KForm(dim, degree, eval, 2, true, periodic);
}

// Values only; derivatives by finite differences.
KForm sampled_form(int dim, int degree, std::function<CVec(const Vec&)> coeffs,
                   std::vector<bool> periodic = {}, double h = 1e-4);
KForm constant_form(int dim, int degree, const CVec& coeffs);
KForm zero_form(int dim, int degree);

KForm add(const KForm& a, const KForm& b);
KForm sub(const KForm& a, const KForm& b);
KForm scale(double s, const KForm& a);

KForm exterior_derivative(const KForm& s);
KForm wedge(const KForm& a, const KForm& b);
KForm lichnerowicz_derivative(const KForm& s, const KForm& eta);
KForm interior_product(const VectorField& X, const KForm& s);

struct ChartMap {
  int src_dim = 0, dst_dim = 0;
  std::function<Vec(const Vec&)> f;
  std::function<Mat(const Vec&)> jac;  // optional
  double h = 1e-6;

  Mat jacobian(const Vec& x) const;
};

template <class G>
ChartMap analytic_map(int src, int dst, G g) {
  ChartMap m;
  m.src_dim = src;
  m.dst_dim = dst;
  m.f = [=](const Vec& x) {
    std::array<double, kMaxDim> xs{}, ys{};
    for (int i = 0; i < src; ++i) xs[i] = x[i];
    g(xs, ys.data());
    Vec y(dst);
    for (int i = 0; i < dst; ++i) y[i] = ys[i];
    return y;
  };
  m.jac = [=](const Vec& x) {
    std::array<Jet, kMaxDim> xs{}, ys{};
    for (int i = 0; i < src; ++i) xs[i] = Jet::variable(x[i], i, src, 1);
    g(xs, ys.data());
    Mat J(dst, src);
    for (int i = 0; i < dst; ++i)
      for (int j = 0; j < src; ++j) J(i, j) = ys[i].g[j];
    return J;
  };
  return m;
}

KForm pullback(const ChartMap& map, const KForm& s);

// Largest |coefficient| of a - b over the given points.
double max_difference(const KForm& a, const KForm& b, const std::vector<Vec>& pts);
double max_abs(const KForm& a, const std::vector<Vec>& pts);

}  // namespace lcs

namespace lcs {
// f -> fn(f) by the chain rule; fn returns value, first and second derivative.
ScalarField compose_scalar(const ScalarField& f, std::function<std::array<double, 3>(double)> fn);
ScalarField exp_field(const ScalarField& f, double sign = 1.0);
}  // namespace lcs
