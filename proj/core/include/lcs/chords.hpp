#pragma once

#include "lcs/dynamics.hpp"
#include "lcs/numerics.hpp"

namespace lcs {

struct ChordSearchConfig {
  std::vector<int> grid;          // seeds per coordinate; empty: 5 per coordinate
  double newton_tol = 1e-10;
  int max_iter = 40;
  double dedup_radius = 1e-4;
  double sv_threshold = 1e-6;
  double action_tol = 1e-5;       // essential iff |S_phi| <= action_tol
  double jitter = 0.1;            // fraction of a grid cell
  std::uint64_t seed = 1;
  double fd_step = 1e-6;
  std::vector<int> quotient;      // coordinates along which solutions come in families
};

struct TranslatedPoint {
  Vec point;
  double T = 0.0;
  double hamiltonian_action = 0.0;  // -S_phi(p)
  double lee_action = 0.0;
  double total_action = 0.0;
  double g = 0.0;
  bool essential = false;
  bool nondegenerate = false;
  bool family = false;              // representative of a degenerate family
  double residual = 0.0;
  double min_singular = 0.0;
};

struct TranslatedPointSet {
  std::vector<TranslatedPoint> points;
  bool degenerate_family = false;
  int seeds = 0;
  std::vector<int> grid;
};

// Translated points of an lcs map on S^1 x R^{2n+1} or S^1 x R^{2n} x S^1 (coordinates unwrapped).
TranslatedPointSet find_translated_points(const LcsMap& phi, const Chart& chart, const Box& search,
                                          const ChordSearchConfig& cfg, bool theta_equivariant = false);
TranslatedPointSet find_translated_points(const HamiltonianIsotopy& iso, const ChordSearchConfig& cfg);

// Translated points of a contact isotopy of R^{2n+1}: phi(p) on the Reeb orbit of p with g(p) = 0.
TranslatedPointSet find_contact_translated_points(const ContactIsotopy& c, const ChordSearchConfig& cfg);

// Reverifies a point: residual, g, and the nondegeneracy verdict.
bool classify_nondegenerate(const TranslatedPoint& tp, const LcsMap& phi, const Chart& chart,
                            const ChordSearchConfig& cfg, bool theta_equivariant = false);

struct LeeChord {
  Vec start, end;  // on the twisted graph and on the zero section
  double T = 0.0;
  double hamiltonian_action = 0.0;
  double lee_action = 0.0;
  double total_action = 0.0;
  bool essential = false;
  bool transverse = false;
};

struct LeeChordSet {
  std::vector<LeeChord> chords;
  bool degenerate_family = false;
};

// Critical points of f on a torus chart <-> essential Lee chords from the twisted graph of f
// to the zero section of T^*_beta B.
LeeChordSet lee_chords_twisted(const ScalarField& f, const CVec& beta, const Chart& base, const ChordSearchConfig& cfg);

int cup_length_torus(int dim);
int betti_sum_torus(int dim);

// Sorted time-shifts of essential points, deduplicated at tol.
std::vector<double> action_spectrum(const TranslatedPointSet& s, double tol = 1e-6);

}  // namespace lcs
