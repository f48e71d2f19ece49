#pragma once

#include "lcs/chartcalc.hpp"
#include "lcs/conventions.hpp"

#include <optional>
#include <random>

namespace lcs {

struct LcsTriple {
  Chart chart;
  KForm eta, omega;
  std::optional<KForm> lambda;

  Mat omega_matrix(const Vec& x) const;  // Omega(i,j) = omega(e_i, e_j)
  Vec eta_at(const Vec& x) const;
  Vec lambda_at(const Vec& x) const;
};

enum class ModelKind { EuclideanContact, LcsEuclidean, LcsTorus, TwistedCotangent };

struct ModelSpace {
  ModelKind kind = ModelKind::LcsEuclidean;
  std::string name;
  int n = 1;  // contact half-dimension for the first three kinds
  Chart chart;
  std::optional<LcsTriple> triple;  // lcs kinds
  std::optional<KForm> alpha;       // EuclideanContact
  int base_dim = 0;                 // TwistedCotangent
  CVec beta;                        // constant coefficients of beta on the base

  // coordinate indices on S^1 x R^{2n+1}: (theta, x1, y1, ..., xn, yn, z)
  int theta_index() const { return 0; }
  int x_index(int j) const;
  int y_index(int j) const;
  int z_index() const;
};

ModelSpace r3_contact(int n = 1);
ModelSpace s1xr3(int n = 1);
ModelSpace s1xr2xs1(int n = 1);
ModelSpace tstar_twisted(const Chart& base, const CVec& beta);
// "r3_contact", "s1xr3", "s1xr2xs1", "tstar_twisted"
ModelSpace model_by_name(const std::string& name, int n = 1, const Chart* base = nullptr, const CVec* beta = nullptr);

KForm alpha0_form(int n, int offset, int dim, std::vector<bool> periodic = {});

Vec lee_vector_field(const LcsTriple& t, const Vec& x);
Vec liouville_vector_field(const LcsTriple& t, const Vec& x);
// Solves Omega^T v = rhs with the nondegeneracy threshold |det| >= 1e-10.
Vec solve_omega(const Mat& Omega, const Vec& rhs);

LcsTriple gauge_transform(const LcsTriple& t, const ScalarField& f);

struct TripleReport {
  double d_eta = 0.0;           // max |d eta|
  double d_eta_omega = 0.0;     // max |d_eta omega|
  double omega_minus_dlambda = 0.0;
  double min_abs_det = 0.0;
  int samples = 0;
  bool ok(double tol) const {
    return d_eta <= tol && d_eta_omega <= tol && omega_minus_dlambda <= tol && min_abs_det >= 1e-10;
  }
};

TripleReport verify_lcs_triple(const LcsTriple& t, int samples, const Box& box, std::uint64_t seed = 7);

std::vector<Vec> sample_box(const Box& box, int count, std::mt19937_64& rng);

// J^1_beta B -> J^1 B, point layout (q_1..q_m, p_1..p_m, z)
Vec untwist(const Vec& point, const KForm& beta);
Vec untwist_inverse(const Vec& point, const KForm& beta);

// tau on (S^1 x R^3)^2 with branch data Theta in R: input (theta,x,y,z,Theta,X,Y,Z),
// output (theta, q_x, q_y, q_z, p_theta, p_x, p_y, p_z) in T^*_{-dtheta}(S^1 x R^3).
template <class T>
void tau_coords(const T* in, T* out) {
  using std::exp;
  const T& th = in[0];
  const T &x = in[1], &y = in[2], &z = in[3];
  const T& Th = in[4];
  const T &X = in[5], &Y = in[6], &Z = in[7];
  T e = exp((Th - th) * 0.5);
  out[0] = th;
  out[1] = (x + e * X) * 0.5;
  out[2] = (y + e * Y) * 0.5;
  out[3] = Z;
  out[4] = Z - z + e * (y * X - x * Y) * 0.5;
  out[5] = y - e * Y;
  out[6] = e * X - x;
  out[7] = 1.0 - e * e;
}

template <class T>
T tau_action(const T* in) {
  using std::exp;
  T e = exp((in[4] - in[0]) * 0.5);
  return in[3] - in[7] + e * (in[1] * in[6] - in[2] * in[5]) * 0.5;
}

Vec tau_map(const Vec& in);
Vec tau_inverse(const Vec& out);
ChartMap tau_chart_map();

// Contact tau: (x,y,z,X,Y,Z,g) -> (q_x,q_y,q_z,p_x,p_y,p_z,u) in J^1 R^3 with e = exp(-g/2).
Vec tau_contact(const Vec& in);

// Forms on the product model (theta,x,y,z,Theta,X,Y,Z).
KForm product_eta();
KForm product_lambda();

}  // namespace lcs
