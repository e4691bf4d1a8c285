#include "rydsim/evolve.hpp"

#include <cmath>
#include <complex>
#include <stdexcept>
#include <string>

namespace rydsim {

EigenSystem eigendecompose(const HermitianOperator& op) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(op.matrix());
  if (solver.info() != Eigen::Success) {
    throw std::runtime_error("eigendecompose: solver failed on operator '" +
                             op.label() + "'");
  }
  return EigenSystem{solver.eigenvalues(), solver.eigenvectors()};
}

Eigen::VectorXcd propagate_raw(const EigenSystem& eig,
                               const Eigen::VectorXcd& amplitudes,
                               double duration) {
  const std::complex<double> mi(0.0, -1.0);
  Eigen::VectorXcd coords = eig.eigenvectors.adjoint() * amplitudes;
  coords.array() *= (mi * duration * eig.eigenvalues.array()).exp();
  return eig.eigenvectors * coords;
}

StateVector propagate_const(const StateVector& state, const EigenSystem& eig,
                            double duration) {
  if (eig.eigenvectors.rows() != state.dim()) {
    throw std::domain_error("propagate_const: dimension mismatch");
  }
  if (!std::isfinite(duration)) {
    throw std::domain_error("propagate_const: duration must be finite");
  }
  return StateVector(state.space(),
                     propagate_raw(eig, state.amplitudes(), duration));
}

StateVector propagate_const(const StateVector& state,
                            const HermitianOperator& op, double duration) {
  if (op.dim() != state.dim()) {
    throw std::domain_error("propagate_const: operator '" + op.label() +
                            "' does not act on the state's space");
  }
  return propagate_const(state, eigendecompose(op), duration);
}

StateVector rotate_spin(const StateVector& state, SpinAxis axis, double angle) {
  const HermitianOperator j = collective_spin(state.space(), axis);
  // exp(+i J angle) = exp(-i J (-angle))
  return propagate_const(state, j, -angle);
}

void Schedule::validate(bool squeezing_shape, double f2_max) const {
  if (samples.empty()) {
    throw std::domain_error("Schedule: no samples");
  }
  if (samples.front().t != 0.0) {
    throw std::domain_error("Schedule: first sample must be at t=0");
  }
  for (size_t k = 0; k + 1 < samples.size(); ++k) {
    if (!(samples[k + 1].t > samples[k].t)) {
      throw std::domain_error("Schedule: times must be strictly increasing");
    }
  }
  if (squeezing_shape) {
    const auto& first = samples.front();
    const auto& last = samples.back();
    if (first.f1 != 1.0 || first.f2 != 0.0) {
      throw std::domain_error("Schedule: squeezing schedule must start at (1,0)");
    }
    if (last.f1 != 0.0 || last.f2 != f2_max) {
      throw std::domain_error("Schedule: squeezing schedule must end at (0," +
                              std::to_string(f2_max) + ")");
    }
    for (const auto& s : samples) {
      if (s.f2 < 0.0 || s.f2 > f2_max) {
        throw std::domain_error("Schedule: f2 outside [0, f2_max]");
      }
    }
  }
}

std::vector<TrajectoryPoint> propagate_schedule(
    const StateVector& state, const Schedule& schedule,
    const HamiltonianBuilder& builder) {
  schedule.validate();
  std::vector<TrajectoryPoint> traj;
  traj.reserve(schedule.samples.size());
  StateVector psi = state;
  traj.push_back({schedule.samples.front().t, psi});
  for (size_t k = 0; k + 1 < schedule.samples.size(); ++k) {
    const ScheduleSample& s = schedule.samples[k];
    const double dt = schedule.samples[k + 1].t - s.t;
    psi = propagate_const(psi, builder(s.f1, s.f2, s.alpha1, s.alpha2), dt);
    traj.push_back({schedule.samples[k + 1].t, psi});
  }
  return traj;
}

}  // namespace rydsim
