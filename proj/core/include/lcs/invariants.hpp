#pragma once

#include "lcs/spectral.hpp"

#include <optional>

namespace lcs {

// Where spectral values of a map are computed: the graph route over a 4-dim box for LcsMap,
// the contact reduction over a 3-dim box for ContactMap (lifts).
struct SpectralDomain {
  Box support;
  bool periodic_z = true;
  double bound = 1.0;
  SpectralConfig cfg;
};

SpectralPair c_pm_of(const LcsMap& phi, const SpectralDomain& dom);
SpectralPair c_pm_of(const ContactMap& phi, const SpectralDomain& dom);

inline LcsMap compose(const LcsMap& a, const LcsMap& b) { return compose_maps(a, b); }
inline ContactMap compose(const ContactMap& a, const ContactMap& b) { return compose_contact(a, b); }
inline LcsMap inverse(const LcsMap& a) { return inverse_map(a); }
inline ContactMap inverse(const ContactMap& a) { return inverse_contact(a); }

constexpr double kSnapTol = 1e-4;
double snap_integer(double v, double tol = kSnapTol);

struct OrderVerdict {
  std::string relation;
  bool verdict = false;
  SpectralValue witness;  // c_+(a o b^{-1}) for the spectral order
  std::string detail;
};

template <class Map>
OrderVerdict preceq(const Map& a, const Map& b, const SpectralDomain& dom, double tol = 1e-6) {
  SpectralPair p = c_pm_of(compose(a, inverse(b)), dom);
  OrderVerdict v;
  v.relation = "preceq";
  v.witness = p.plus;
  v.verdict = std::abs(p.plus.value) <= tol;
  v.detail = "c_plus(a o b^-1) = " + std::to_string(p.plus.value);
  return v;
}

// Certificate form of <=: a nonnegative Hamiltonian sampled on a grid of its support.
OrderVerdict leq_certificate(const Hamiltonian& H, const Box& support, int samples_per_axis = 7);

struct MetricValue {
  int d = 0;
  SpectralPair pair;
};

int metric_from_pair(const SpectralPair& p);

template <class Map>
MetricValue metric_d(const Map& a, const Map& b, const SpectralDomain& dom) {
  if (!dom.periodic_z) throw Error("metric_d: defined only on S^1 x R^2n x S^1");
  MetricValue m;
  m.pair = c_pm_of(compose(a, inverse(b)), dom);
  m.d = metric_from_pair(m.pair);
  return m;
}

// S^1 x B^2(R) x S^1 centred at (cx, cy) (theta and z unrestricted).
struct BallDomain {
  double cx = 0.0, cy = 0.0, R = 1.0;
  double area() const;
  bool contains(double x, double y) const;
  std::string describe() const;
};

struct DisplacementReport {
  int upper = 0;        // K * d(id, psi_{1/K}) >= d(id, psi) >= E(U)
  int K = 1;
  MetricValue step;     // d(id, psi_{1/K})
  int samples = 0;
  std::optional<int> capacity_lower;
  bool energy_capacity_ok = true;
};

// psi is the time-1 map of c; displacement is checked on a dense sample of U.
DisplacementReport displacement_energy_upper(const BallDomain& U, const ContactIsotopy& psi, const SpectralDomain& dom,
                                             std::optional<int> capacity_lower = std::nullopt, int K_cap = 16);

struct CapacityWitness {
  std::string family_member;
  double c_plus = 0.0;
  double error = 0.0;
  int ceil_c_plus = 0;
};

struct CapacityEstimate {
  std::string domain;
  std::string family;
  int lower_bound = 0;
  std::optional<int> reference;
  bool falsified = false;  // lower bound above the reference
  std::vector<CapacityWitness> witnesses;
};

// Radial profiles with plateau values approaching pi R^2 from below (slope < 1).
std::vector<RadialProfile> radial_family(const BallDomain& U, int members = 3);
CapacityEstimate capacity_lower_bound(const BallDomain& U, const std::vector<RadialProfile>& family,
                                      const SpectralConfig& cfg);
// General family of contact isotopies (e.g. the identity).
CapacityEstimate capacity_lower_bound(const BallDomain& U, const std::vector<ContactIsotopy>& family,
                                      const SpectralDomain& dom);

struct NonsqueezingReport {
  double R1 = 0.0, R2 = 0.0;
  double area1 = 0.0, area2 = 0.0;
  std::optional<int> k;
  bool obstructed = false;
  int capacity1 = 0, capacity2 = 0;
  std::string verdict;
};

NonsqueezingReport nonsqueezing_report(double R1, double R2);

}  // namespace lcs
