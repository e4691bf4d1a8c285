// Hermitian operators on the blockaded ensemble: collective spin components,
// Jaynes-Cummings couplings between a ground mode and a Rydberg level,
// detuning terms, and the dressed eigenstates of the resonant coupling.
#pragma once

#include <complex>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "rydsim/hilbert.hpp"

namespace rydsim {

enum class SpinAxis { x, y, z };
enum class GroundMode { a, b };

// Dense Hermitian matrix tied to one HilbertSpace.  Construction verifies
// hermiticity to 1e-12 so downstream eigensolves are always well posed.
class HermitianOperator {
 public:
  HermitianOperator(const HilbertSpace& space, Eigen::MatrixXcd matrix,
                    std::string label);

  const HilbertSpace& space() const { return *space_; }
  const Eigen::MatrixXcd& matrix() const { return m_; }
  const std::string& label() const { return label_; }
  int dim() const { return static_cast<int>(m_.rows()); }

 private:
  const HilbertSpace* space_;
  Eigen::MatrixXcd m_;
  std::string label_;
};

// Collective (pseudo-)spin components of the two ground modes,
//   Jx = (a^dag b + a b^dag)/2,
//   Jy = (a^dag b - a b^dag)/(2i),
//   Jz = (a^dag a - b^dag b)/2,
// satisfying [Jx,Jy] = i Jz (cyclically).
// They act identically within each Rydberg block.
HermitianOperator collective_spin(const HilbertSpace& space, SpinAxis axis);

// Collective Jaynes-Cummings coupling between one ground mode and one
// Rydberg level:  Omega * mode * sigma+^(level) + conj(Omega) * mode^dag *
// sigma-^(level).  rydberg_level is 1 or 2; any (level, mode) pairing is
// allowed, including the cross couplings (1,b) and (2,a).  Bosonic matrix
// elements carry the usual sqrt(n) factors; the unit of energy is the
// single-atom coupling (|Omega| = 1 sets the time unit).
HermitianOperator jc_coupling(const HilbertSpace& space, int rydberg_level,
                              GroundMode mode, std::complex<double> omega);

// delta * sigma_z^(level): +delta on states with the Rydberg level occupied,
// -delta on states with it empty.
HermitianOperator detuning_operator(const HilbertSpace& space,
                                    int rydberg_level, double delta);

struct WeightedOperator {
  double weight;
  const HermitianOperator* op;
};

// Real linear combination of operators sharing one space.
HermitianOperator linear_combine(const std::vector<WeightedOperator>& terms,
                                 std::string label);

struct MeanVariance {
  double mean;
  double variance;
};

// <A> and Var(A) = <A^2> - <A>^2 for a normalized state.  Throws
// std::domain_error if the state is not normalized or spaces mismatch.
MeanVariance expectation_and_variance(const HermitianOperator& op,
                                      const StateVector& state);

// Eigenstates of the resonant two-level-pair coupling within the sector of
// fixed (n_a + n_r1, n_b + n_r2) = (n_a, n_b):
//   |psi_{s1,s2}> = (|n_a,n_b,0,0> + s1|n_a-1,n_b,1,0> + s2|n_a,n_b-1,0,1>
//                    + s1 s2|n_a-1,n_b-1,1,1>)/2
// with energy Omega(s1 sqrt(n_a) + s2 sqrt(n_b)).  Components whose
// occupations would be negative are dropped and the state renormalized
// (edge sectors n_a = 0 or n_b = 0).  n_a + n_b must equal N.
StateVector dressed_state(const HilbertSpace& space, int n_a, int n_b,
                          int sign1, int sign2);

// Energy of the dressed state above for coupling strength omega.
double dressed_energy(int n_a, int n_b, int sign1, int sign2,
                      double omega = 1.0);

}  // namespace rydsim
