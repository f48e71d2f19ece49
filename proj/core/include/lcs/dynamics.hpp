#pragma once

#include "lcs/lcscore.hpp"

#include <optional>

namespace lcs {

// Time-dependent scalar H_t on a chart; the gradient falls back to central differences.
struct Hamiltonian {
  int dim = 0;
  std::function<double(double, const Vec&)> value;
  std::function<Vec(double, const Vec&)> grad;
  double h = 1e-6;
  bool autonomous = false;
  double bound = 0.0;  // sup |H|, 0 if unknown

  double operator()(double t, const Vec& x) const { return value(t, x); }
  Vec gradient(double t, const Vec& x) const;
};

// g(t, x, out) with x a std::array<T, 8>; returns the value as T.
template <class G>
Hamiltonian analytic_hamiltonian(int dim, G g, bool autonomous = false) {
  Hamiltonian H;
  H.dim = dim;
  H.autonomous = autonomous;
  H.value = [=](double t, const Vec& x) {
    std::array<double, kMaxDim> xs{};
    for (int i = 0; i < dim; ++i) xs[i] = x[i];
    return g(t, xs);
  };
  H.grad = [=](double t, const Vec& x) {
    std::array<Jet, kMaxDim> xs{};
    for (int i = 0; i < dim; ++i) xs[i] = Jet::variable(x[i], i, dim, 1);
    Jet v = g(t, xs);
    Vec out(dim);
    for (int i = 0; i < dim; ++i) out[i] = v.g[i];
    return out;
  };
  return H;
}

Hamiltonian zero_hamiltonian(int dim);
Hamiltonian constant_hamiltonian(int dim, double c);
Hamiltonian scaled(const Hamiltonian& H, double s);
// H composed with a reparametrization of time t -> a + b t, scaled by b.
Hamiltonian time_rescaled(const Hamiltonian& H, double a, double b);
// Multiply by prod_i exp(1 - 1/(1 - s_i^2)) over the non-periodic coordinates of the box.
Hamiltonian with_cutoff(const Hamiltonian& H, const Box& support, const std::vector<bool>& periodic);
double cutoff_profile(double s);

struct IntegratorConfig {
  double step = 1e-3;
  bool richardson = false;
};

struct HamiltonianIsotopy {
  LcsTriple triple;
  Hamiltonian H;
  Box support;                 // H vanishes outside (non-periodic coordinates)
  std::optional<Box> domain;   // leaving it is an error
  IntegratorConfig integrator;
  bool theta_equivariant = false;  // lifts of contact isotopies
};

struct FlowState {
  Vec x;
  double g = 0.0;
  double S = 0.0;
  double t = 0.0;
};

struct Trajectory {
  std::vector<FlowState> states;
  double step_error = 0.0;
};

Vec hamiltonian_vector_field(const LcsTriple& triple, const Hamiltonian& H, double t, const Vec& x);
Vec hamiltonian_vector_field(const HamiltonianIsotopy& iso, double t, const Vec& x);

// Endpoint of the flow from time t0 to t1 (t1 < t0 integrates backwards).
FlowState flow(const HamiltonianIsotopy& iso, const Vec& x0, double t0 = 0.0, double t1 = 1.0);
Trajectory integrate_isotopy(const HamiltonianIsotopy& iso, const Vec& seed, double t_final, int record_every = 1);

// Lcs diffeomorphism together with its conformal factor and action.
struct LcsMap {
  std::function<FlowState(const Vec&)> apply;  // returns (image, g, S)
  std::function<FlowState(const Vec&)> inverse;
};

LcsMap time_map(const HamiltonianIsotopy& iso, double t = 1.0);
LcsMap compose_maps(const LcsMap& outer, const LcsMap& inner);  // outer o inner
LcsMap inverse_map(const LcsMap& m);
LcsMap identity_map();

HamiltonianIsotopy compose_isotopies(const HamiltonianIsotopy& a, const HamiltonianIsotopy& b);
HamiltonianIsotopy invert_isotopy(const HamiltonianIsotopy& a);
// psi^{-1} o phi_t o psi
HamiltonianIsotopy conjugate_isotopy(const HamiltonianIsotopy& a, const LcsMap& psi);

// Contact isotopies of (R^{2n+1} or R^{2n} x S^1, alpha_0).
struct ContactIsotopy {
  int n = 1;
  Hamiltonian H;  // on (x_1, y_1, ..., z)
  Box support;
  bool periodic_z = false;
  IntegratorConfig integrator;
};

struct ContactState {
  Vec p;
  double g = 0.0;  // phi^* alpha = e^g alpha
};

// Contact Hamiltonian field and dH(R) = -H_z.
Vec contact_vector_field(const ContactIsotopy& c, double t, const Vec& p, double* h_out = nullptr);
ContactState contact_flow(const ContactIsotopy& c, const Vec& p0, double t0 = 0.0, double t1 = 1.0);

// Contactomorphism with its conformal factor.
struct ContactMap {
  std::function<ContactState(const Vec&)> apply;
  std::function<ContactState(const Vec&)> inverse;
};

ContactMap contact_time_map(const ContactIsotopy& c, double t = 1.0);
ContactMap compose_contact(const ContactMap& outer, const ContactMap& inner);  // outer o inner
ContactMap inverse_contact(const ContactMap& m);
ContactMap identity_contact();

HamiltonianIsotopy lift_contact_isotopy(const ContactIsotopy& c);
// Lifted time-1 map (theta - g(p), phi(p)) evaluated through the contact flow.
LcsMap lifted_time_map(const ContactIsotopy& c, double t = 1.0);

// Trajectory CSV: t, coordinates..., g, S, step_error
std::string trajectory_csv(const Trajectory& tr, const Chart& chart);

}  // namespace lcs
