// Blockade-restricted symmetric Hilbert space for a driven two-mode ensemble.
//
// The ensemble of N atoms is described by two ground-state bosonic modes
// (a, b) and two collectively shared Rydberg excitations (r1, r2), each of
// which can hold at most one quantum because of the blockade.  A basis state
// is |n_a, n_b, n_r1, n_r2> with n_a + n_b + n_r1 + n_r2 = N, giving a space
// of dimension exactly 4N.
#pragma once

#include <complex>
#include <vector>

#include <Eigen/Dense>

namespace rydsim {

struct BasisState {
  int n_a = 0;   // ground mode a occupation
  int n_b = 0;   // ground mode b occupation
  int n_r1 = 0;  // first Rydberg level, 0 or 1
  int n_r2 = 0;  // second Rydberg level, 0 or 1

  bool operator==(const BasisState&) const = default;
};

// Enumerates the 4N basis states of the blockaded ensemble.  Ordering: the
// Rydberg-empty block (n_r1,n_r2) = (0,0) comes first so that ground-block
// slices are contiguous at indices 0..N, followed by the (1,0), (0,1) and
// (1,1) blocks; within each block n_a runs from its maximum down to 0.
class HilbertSpace {
 public:
  explicit HilbertSpace(int atom_count);

  int atoms() const { return n_atoms_; }
  int dim() const { return static_cast<int>(basis_.size()); }

  const std::vector<BasisState>& basis() const { return basis_; }
  const BasisState& state_at(int index) const;

  // Index of a basis tuple.  Throws std::domain_error if the tuple is not a
  // valid state of this space (bad occupations or wrong total).
  int index_of(const BasisState& s) const;

  // True if the index lies in the Rydberg-empty block (indices 0..N).
  bool in_ground_block(int index) const { return index <= n_atoms_; }

 private:
  int n_atoms_;
  std::vector<BasisState> basis_;
};

// Normalized state of one HilbertSpace.  The space object must outlive the
// vector; states are cheap to copy (amplitudes + pointer).
class StateVector {
 public:
  StateVector(const HilbertSpace& space, Eigen::VectorXcd amplitudes);

  static StateVector basis_state(const HilbertSpace& space, const BasisState& s);

  const HilbertSpace& space() const { return *space_; }
  const Eigen::VectorXcd& amplitudes() const { return amps_; }
  std::complex<double> amplitude(const BasisState& s) const;
  int dim() const { return static_cast<int>(amps_.size()); }
  double norm() const { return amps_.norm(); }

 private:
  const HilbertSpace* space_;
  Eigen::VectorXcd amps_;
};

// <lhs|rhs>; both states must live in spaces of equal dimension.
std::complex<double> overlap(const StateVector& lhs, const StateVector& rhs);

// |<lhs|rhs>|^2.
double fidelity(const StateVector& lhs, const StateVector& rhs);

// Spin coherent state of the ground block: every atom in
// cos(polar/2)|a> + sin(polar/2) e^{i azimuth}|b>, no Rydberg excitation.
// The amplitude on |n_a, N-n_a, 0, 0> is
//   sqrt(C(N,n_a)) cos(polar/2)^{n_a} (sin(polar/2) e^{i azimuth})^{N-n_a}.
StateVector spin_coherent_state(const HilbertSpace& space, double polar,
                                double azimuth);

}  // namespace rydsim
