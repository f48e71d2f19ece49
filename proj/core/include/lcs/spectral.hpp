#pragma once

#include "lcs/families.hpp"
#include "lcs/genfun.hpp"

#include <limits>
#include <optional>

namespace lcs {

enum class ClassSelector { unit, fundamental };

struct SpectralConfig {
  std::vector<int> base_res;  // vertices per base axis; one entry broadcasts
  int fibre_res = 9;          // vertices per fibre axis (odd keeps zeta = 0 on the grid)
  int dim_cap = 4;
  std::optional<double> floor;
};

// Cubical grid on base torus x fibre box with lower-star values.
struct FilteredComplex {
  std::vector<int> n;          // vertices per axis
  std::vector<bool> periodic;  // per axis
  std::vector<double> vertex_values;
  double floor = 0.0;
  int base_dim = 0, fibre_dim = 0, index = 0;  // index: negative directions of Q
  std::vector<double> lo, hi;                  // axis ranges (fibre ones in eigen-coordinates)

  int dim() const { return static_cast<int>(n.size()); }
};

struct Bar {
  double birth = 0.0;
  double death = std::numeric_limits<double>::infinity();
  int degree = 0;
  bool essential() const { return std::isinf(death); }
};

struct Barcode {
  std::vector<Bar> bars;
  double max_oscillation = 0.0;
  int cells = 0;
};

struct SpectralValue {
  double value = 0.0;
  double error = 0.0;
  std::optional<double> nearest;  // nearest action-spectrum value when known
};

FilteredComplex build_complex(const GFQI& F, const SpectralConfig& cfg);
FilteredComplex grid_complex(std::vector<int> n, std::vector<bool> periodic, std::vector<double> values, double floor);
// Persistence of (K_a, K_floor) over Z/2.
Barcode relative_persistence(const FilteredComplex& K);
// Largest oscillation over top cells whose value range contains a.
double level_oscillation(const FilteredComplex& K, double a);

int target_degree(const FilteredComplex& K, ClassSelector u);
SpectralValue minmax_value(const GFQI& F, ClassSelector u, const SpectralConfig& cfg, Barcode* diagnostics = nullptr);

struct SeparableGF {
  int base_dim = 0;
  std::vector<GFQI> blocks;
  std::vector<std::vector<int>> vars;  // base variables of each block
  SpectralConfig block_cfg;            // broadcast per block unless a block entry is given
  std::vector<SpectralConfig> cfgs;
};
SpectralValue separable_minmax(const SeparableGF& F, ClassSelector u);

struct SpectralPair {
  SpectralValue plus, minus;
  std::string route;
};

// c_+ = c(fundamental, -F_Gamma), c_- = c(unit, -F_Gamma) for the graph generating function.
SpectralPair c_pm_graph(const LcsMap& phi, const Box& support, bool periodic_z, double bound,
                        const SpectralConfig& cfg, Barcode* diagnostics = nullptr);
// Lift of a contact isotopy: theta block (zero) plus the contact graph block.
// diagnostics receives the barcode of the contact block alone (degrees without the circle factor).
SpectralPair c_pm_contact(const ContactMap& phi, const Box& support, bool periodic_z, double bound,
                          const SpectralConfig& cfg, Barcode* diagnostics = nullptr);
SpectralPair c_pm_contact(const ContactIsotopy& c, const SpectralConfig& cfg);
// Dispatch on the isotopy: graph route on S^1 x R^3 / S^1 x R^2 x S^1.
SpectralPair c_pm(const HamiltonianIsotopy& iso, const SpectralConfig& cfg);

struct RadialContinuation {
  SpectralPair start;      // dense evaluation at t0
  std::vector<double> t;   // continuation times
  std::vector<double> c_plus;
  double value = 0.0;      // c_+ at t = 1
  double error = 0.0;
};
// c_+ of the lift of the time-1 map of h(pi r^2) on R^2 x S^1 by continuation from t0.
RadialContinuation c_plus_radial(const RadialProfile& prof, double box_radius, const SpectralConfig& cfg,
                                 double t0 = 0.2, double dt = 0.1);

std::string barcode_csv(const Barcode& b);

}  // namespace lcs
