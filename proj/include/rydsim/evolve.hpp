// Unitary time evolution by exact eigendecomposition: constant Hamiltonians,
// piecewise-constant schedules, and collective spin rotations.
#pragma once

#include <functional>
#include <vector>

#include <Eigen/Dense>

#include "rydsim/operators.hpp"

namespace rydsim {

// Spectral decomposition of a Hermitian operator: ascending eigenvalues,
// matching unitary column eigenvectors.
struct EigenSystem {
  Eigen::VectorXd eigenvalues;
  Eigen::MatrixXcd eigenvectors;
};

EigenSystem eigendecompose(const HermitianOperator& op);

// exp(-i H t) psi computed as V exp(-i lambda t) V^dag psi.
Eigen::VectorXcd propagate_raw(const EigenSystem& eig,
                               const Eigen::VectorXcd& amplitudes,
                               double duration);

StateVector propagate_const(const StateVector& state, const EigenSystem& eig,
                            double duration);
StateVector propagate_const(const StateVector& state,
                            const HermitianOperator& op, double duration);

// exp(+i J_axis angle) state; the +i convention matches the analysis
// rotations used throughout (e.g. exp(i Jx pi/2) to separate cat peaks).
StateVector rotate_spin(const StateVector& state, SpinAxis axis, double angle);

// Piecewise-constant control schedule.  Sample k's parameters apply on
// [t_k, t_{k+1}); the final sample is a terminal anchor with no interval.
struct ScheduleSample {
  double t;       // 1/|Omega_JC| units
  double f1;      // weight of Jx
  double f2;      // weight of H_JC
  double alpha1;  // weight of the y-phase JC pair
  double alpha2;  // weight of the crossed y-phase JC pair
};

struct Schedule {
  std::vector<ScheduleSample> samples;

  double duration() const { return samples.empty() ? 0.0 : samples.back().t; }

  // Enforces strictly increasing times starting at 0.  If squeezing_shape,
  // additionally requires the first sample at (f1,f2) = (1,0) and the last
  // at (0, f2_max) with f2 within [0, f2_max].
  void validate(bool squeezing_shape = false, double f2_max = 1.0) const;
};

using HamiltonianBuilder = std::function<HermitianOperator(
    double f1, double f2, double alpha1, double alpha2)>;

struct TrajectoryPoint {
  double t;
  StateVector state;
};

// Advances the state segment by segment; the returned trajectory holds the
// state at every sample time (the first entry is the input state at t_0).
std::vector<TrajectoryPoint> propagate_schedule(
    const StateVector& state, const Schedule& schedule,
    const HamiltonianBuilder& builder);

}  // namespace rydsim
