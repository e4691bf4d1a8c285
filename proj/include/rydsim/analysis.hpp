// Observables of ensemble states: squeezing parameter, population
// statistics, parity weights, Rydberg population, and the spin Q-function
// over the Bloch sphere.
#pragma once

#include <vector>

#include <Eigen/Dense>

#include "rydsim/hilbert.hpp"

namespace rydsim {

// Var(Jz)/N, the number-difference squeezing parameter (1/4 for an
// equatorial spin coherent state).
double squeezing_parameter(const StateVector& state);

enum class PopulationBlock { ground_only, all };

// Marginal distribution of the mode-a occupation.
struct Histogram {
  struct Bin {
    int n_a;
    double probability;
  };
  std::vector<Bin> bins;  // n_a = 0..N ascending
  double block_weight;    // pre-renormalization weight of the chosen block
};
Histogram population_histogram(const StateVector& state, PopulationBlock block);

// Ground-block probability of even/odd population offset delta_n =
// n_a - N/2 (even N) or n_a - (N-1)/2 (odd N).
struct ParityWeights {
  double even;
  double odd;
};
ParityWeights parity_weights(const StateVector& state);

// Total probability of any Rydberg excitation.
double rydberg_population(const StateVector& state);

// Q(theta, phi) = |<SCS(theta,phi)|psi_ground>|^2 on a uniform grid,
// theta in [0, pi] inclusive, phi in [0, 2pi); psi_ground is the
// renormalized ground-block restriction (its original weight is reported).
struct QGrid {
  int polar_samples;
  int azimuth_samples;
  Eigen::MatrixXd values;  // (polar index, azimuth index)
  double ground_weight;
};
QGrid q_function(const StateVector& state, int polar_samples = 181,
                 int azimuth_samples = 361);

}  // namespace rydsim
