#include "rydsim/hilbert.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace rydsim {

namespace {

std::string tuple_str(const BasisState& s) {
  return "(" + std::to_string(s.n_a) + "," + std::to_string(s.n_b) + "," +
         std::to_string(s.n_r1) + "," + std::to_string(s.n_r2) + ")";
}

}  // namespace

HilbertSpace::HilbertSpace(int atom_count) : n_atoms_(atom_count) {
  if (atom_count < 1) {
    throw std::domain_error("HilbertSpace: atom count must be >= 1, got " +
                            std::to_string(atom_count));
  }
  basis_.reserve(4 * atom_count);
  // Rydberg blocks in the order (0,0), (1,0), (0,1), (1,1); n_a descending
  // inside each block so the fully a-polarized state leads it.
  constexpr int kBlocks[4][2] = {{0, 0}, {1, 0}, {0, 1}, {1, 1}};
  for (const auto& blk : kBlocks) {
    const int n_r1 = blk[0];
    const int n_r2 = blk[1];
    const int ground_total = n_atoms_ - n_r1 - n_r2;
    for (int n_a = ground_total; n_a >= 0; --n_a) {
      basis_.push_back(BasisState{n_a, ground_total - n_a, n_r1, n_r2});
    }
  }
}

const BasisState& HilbertSpace::state_at(int index) const {
  if (index < 0 || index >= dim()) {
    throw std::domain_error("HilbertSpace: basis index " +
                            std::to_string(index) + " out of range 0.." +
                            std::to_string(dim() - 1));
  }
  return basis_[static_cast<size_t>(index)];
}

int HilbertSpace::index_of(const BasisState& s) const {
  const int N = n_atoms_;
  if (s.n_r1 < 0 || s.n_r1 > 1 || s.n_r2 < 0 || s.n_r2 > 1 || s.n_a < 0 ||
      s.n_b < 0 || s.n_a + s.n_b + s.n_r1 + s.n_r2 != N) {
    throw std::domain_error("HilbertSpace: invalid basis tuple " +
                            tuple_str(s) + " for N=" + std::to_string(N));
  }
  // Block offsets follow from the block sizes N+1, N, N, N-1.
  int offset = 0;
  if (s.n_r1 == 1 && s.n_r2 == 0) {
    offset = N + 1;
  } else if (s.n_r1 == 0 && s.n_r2 == 1) {
    offset = 2 * N + 1;
  } else if (s.n_r1 == 1 && s.n_r2 == 1) {
    offset = 3 * N + 1;
  }
  const int n_a_max = N - s.n_r1 - s.n_r2;
  return offset + (n_a_max - s.n_a);
}

StateVector::StateVector(const HilbertSpace& space, Eigen::VectorXcd amplitudes)
    : space_(&space), amps_(std::move(amplitudes)) {
  if (amps_.size() != space.dim()) {
    throw std::domain_error(
        "StateVector: amplitude vector length " + std::to_string(amps_.size()) +
        " does not match space dimension " + std::to_string(space.dim()));
  }
  const double n = amps_.norm();
  if (!(n > 0.0) || !std::isfinite(n)) {
    throw std::domain_error("StateVector: amplitudes must have nonzero norm");
  }
  amps_ /= n;
}

StateVector StateVector::basis_state(const HilbertSpace& space,
                                     const BasisState& s) {
  Eigen::VectorXcd v = Eigen::VectorXcd::Zero(space.dim());
  v(space.index_of(s)) = 1.0;
  return StateVector(space, std::move(v));
}

std::complex<double> StateVector::amplitude(const BasisState& s) const {
  return amps_(space_->index_of(s));
}

std::complex<double> overlap(const StateVector& lhs, const StateVector& rhs) {
  if (lhs.dim() != rhs.dim()) {
    throw std::domain_error("overlap: states live in different spaces");
  }
  return lhs.amplitudes().dot(rhs.amplitudes());  // Eigen dot conjugates lhs
}

double fidelity(const StateVector& lhs, const StateVector& rhs) {
  return std::norm(overlap(lhs, rhs));
}

StateVector spin_coherent_state(const HilbertSpace& space, double polar,
                                double azimuth) {
  const int N = space.atoms();
  const double c = std::cos(0.5 * polar);
  const double s = std::sin(0.5 * polar);
  Eigen::VectorXcd v = Eigen::VectorXcd::Zero(space.dim());
  // Log-space magnitudes keep large-N binomials away from overflow.
  for (int n_a = 0; n_a <= N; ++n_a) {
    const int n_b = N - n_a;
    double amp;
    if ((c == 0.0 && n_a > 0) || (s == 0.0 && n_b > 0)) {
      amp = 0.0;
    } else {
      double log_mag = 0.5 * (std::lgamma(N + 1.0) - std::lgamma(n_a + 1.0) -
                              std::lgamma(n_b + 1.0));
      if (n_a > 0) log_mag += n_a * std::log(std::abs(c));
      if (n_b > 0) log_mag += n_b * std::log(std::abs(s));
      amp = std::exp(log_mag);
      if (c < 0.0 && (n_a % 2)) amp = -amp;
      if (s < 0.0 && (n_b % 2)) amp = -amp;
    }
    v(space.index_of(BasisState{n_a, n_b, 0, 0})) =
        amp * std::polar(1.0, azimuth * n_b);
  }
  return StateVector(space, std::move(v));
}

}  // namespace rydsim
