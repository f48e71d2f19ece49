#pragma once

#include "lcs/chords.hpp"
#include "lcs/numerics.hpp"

namespace lcs {

// F(q, zeta) = zeta^T Q zeta + P(q, zeta); the evaluator returns F itself.
struct GFQI {
  Chart base;
  int N = 0;
  DMat Q;
  std::function<double(const DVec& q, const DVec& zeta)> F;
  Box support;                     // base box outside which P vanishes (special form only)
  double perturbation_bound = 0.0; // sup |P|
  double gradient_bound = 0.0;     // sup |d_zeta P|
  bool special_form = true;
  std::string description;

  int total_dim() const { return base.dim + N; }
  double operator()(const DVec& q, const DVec& zeta) const { return F(q, zeta); }
  double at(const DVec& x) const { return F(x.head(base.dim), x.tail(N)); }
  double quadratic(const DVec& zeta) const { return N ? zeta.dot(Q * zeta) : 0.0; }
};

GFQI function_gf(const Chart& base, std::function<double(const DVec&)> f, const Box& support, double bound);
GFQI quadratic_gf(const Chart& base, const DMat& Q);
// F(q, zeta) plus the nondegenerate quadratic form Q2 on new fibre variables.
GFQI stabilize(const GFQI& F, const DMat& Q2);
// F(q, Phi_q(zeta)) for a fibre-preserving diffeomorphism Phi.
GFQI reparametrize(const GFQI& F, std::function<DVec(const DVec& q, const DVec& zeta)> Phi);
GFQI difference_function(const GFQI& F1, const GFQI& F2);

DVec gf_gradient(const GFQI& F, const DVec& x, double h = 1e-6);
DMat gf_hessian(const GFQI& F, const DVec& x, double h = 1e-4);

// Twisted graph q -> (q, df(q) - f(q) beta(q)); the action of the section is f.
struct TwistedSection {
  std::function<Vec(const Vec&)> point;   // (q, p)
  std::function<double(const Vec&)> action;
};
TwistedSection twisted_graph(const ScalarField& f, const KForm& beta);

struct FiberCriticalPoint {
  DVec q, zeta;
  double value = 0.0;
  DVec covector;         // i_{F,beta}
  double min_singular = 0.0;  // transversality of the stacked Hessian [F_zz F_zq]
};

struct GFSearchConfig {
  int base_samples = 5;  // per base coordinate
  int fibre_seeds = 3;   // per base point
  double fibre_radius = 1.0;
  double newton_tol = 1e-9;
  int max_iter = 30;
  double dedup_radius = 1e-5;
  double sv_threshold = 1e-6;
  std::uint64_t seed = 3;
};

std::vector<FiberCriticalPoint> fiber_critical_points(const GFQI& F, const KForm& beta, const GFSearchConfig& cfg);
// Covector dF/dq - F beta at a fibre-critical point.
DVec wavefront_map(const GFQI& F, const KForm& beta, const DVec& q, const DVec& zeta, double tol = 1e-6);

struct GFCriticalPoint {
  DVec x;
  double value = 0.0;
  bool nondegenerate = false;
};
std::vector<GFCriticalPoint> critical_points(const GFQI& F, const GFSearchConfig& cfg,
                                             const std::vector<DVec>& extra_seeds = {});
GFCriticalPoint polish_critical_point(const GFQI& F, const DVec& seed, const GFSearchConfig& cfg);

// Contactomorphisms of J^1 R^m in coordinates (q, p, z).
struct J1Map {
  int m = 1;
  std::function<DVec(const DVec&)> apply;
  std::function<DVec(const DVec&)> inverse;
};

J1Map j1_identity(int m);
J1Map j1_z_shift(int m, double c);
// Time t0 -> t1 flow of a contact Hamiltonian H on J^1 R^m w.r.t. dz - p dq.
J1Map j1_contact_flow(int m, const Hamiltonian& H, double t0, double t1, double step = 1e-2);

struct TransitionFunction {
  int m = 1;
  std::function<double(const DVec& q, const DVec& p, double z)> G;
  double bound = 0.0;
  J1Map source;
  double operator()(const DVec& q, const DVec& p, double z) const { return G(q, p, z); }
};

// G(q,p,z) = g_{p,z}(q) - (z + p q); throws "not C1-small at query" when the base projection
// of the pushed section cannot be inverted in 20 Newton steps.
TransitionFunction transition_function(const J1Map& phi);
GFQI sharp_compose(const TransitionFunction& G, const GFQI& F);

// Graph Lagrangian of an lcs map of S^1 x R^3 (or S^1 x R^2 x S^1) in T^*_{-dtheta}.
Vec gamma_phi(const LcsMap& phi, const Vec& p, double* action = nullptr);
// N = 0 generating function Q -> S_Gamma(Gamma_base^{-1}(Q)) for C1-small phi.
GFQI graph_gf(const LcsMap& phi, const Box& support, bool periodic_z, double bound);
// The same for a contactomorphism of R^3 (or R^2 x S^1) via the contact tau.
GFQI graph_gf_contact(const ContactMap& phi, const Box& support, bool periodic_z, double bound);
GFQI graph_gf_contact(const ContactIsotopy& c, double bound);

// Step maps chi_k = phi_{t_{k+1}} o phi_{t_k}^{-1} of an isotopy, conjugated into J^1 R^4.
J1Map conjugated_step(const LcsMap& chi);

struct GFChain {
  std::vector<GFQI> stages;           // F_0, ..., F_K
  std::vector<TransitionFunction> G;  // G_0, ..., G_{K-1}
  std::vector<J1Map> steps;
  int K = 0;
};

struct ChainConfig {
  int K0 = 1;
  int K_cap = 64;
  int check_samples = 3;  // per coordinate of the support box
};

// Builds F_K = G_{K-1} # ... # G_0 # 0 for the isotopy; K doubles until every step is C1-small
// on the sampled support, error "isotopy too large for C1-small chaining" past the cap.
GFChain isotopy_to_gfqi(const HamiltonianIsotopy& iso, const ChainConfig& cfg = {});

// Exact fibre coordinates of the critical point of F_K over the Legendrian point lambda_K.
DVec chain_seed(const GFChain& chain, const DVec& lambda_K);

}  // namespace lcs
