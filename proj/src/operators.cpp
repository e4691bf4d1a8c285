#include "rydsim/operators.hpp"

#include <cmath>
#include <stdexcept>

namespace rydsim {

namespace {

constexpr double kHermitianTol = 1e-12;

int rydberg_occ(const BasisState& s, int level) {
  return level == 1 ? s.n_r1 : s.n_r2;
}

BasisState with_rydberg(BasisState s, int level, int occ) {
  if (level == 1) {
    s.n_r1 = occ;
  } else {
    s.n_r2 = occ;
  }
  return s;
}

int ground_occ(const BasisState& s, GroundMode mode) {
  return mode == GroundMode::a ? s.n_a : s.n_b;
}

BasisState with_ground(BasisState s, GroundMode mode, int occ) {
  if (mode == GroundMode::a) {
    s.n_a = occ;
  } else {
    s.n_b = occ;
  }
  return s;
}

}  // namespace

HermitianOperator::HermitianOperator(const HilbertSpace& space,
                                     Eigen::MatrixXcd matrix, std::string label)
    : space_(&space), m_(std::move(matrix)), label_(std::move(label)) {
  if (m_.rows() != m_.cols() || m_.rows() != space.dim()) {
    throw std::domain_error("HermitianOperator '" + label_ +
                            "': matrix shape does not match space dimension");
  }
  const double asym = (m_ - m_.adjoint()).cwiseAbs().maxCoeff();
  const double scale = std::max(1.0, m_.cwiseAbs().maxCoeff());
  if (asym > kHermitianTol * scale) {
    throw std::domain_error("HermitianOperator '" + label_ +
                            "': matrix is not Hermitian (max asymmetry " +
                            std::to_string(asym) + ")");
  }
}

HermitianOperator collective_spin(const HilbertSpace& space, SpinAxis axis) {
  const int d = space.dim();
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(d, d);
  const std::complex<double> I(0.0, 1.0);
  for (int j = 0; j < d; ++j) {
    const BasisState& s = space.state_at(j);
    switch (axis) {
      case SpinAxis::z:
        m(j, j) = 0.5 * (s.n_a - s.n_b);
        break;
      case SpinAxis::x:
      case SpinAxis::y: {
        // a^dag b : (n_a, n_b) -> (n_a+1, n_b-1), element sqrt((n_a+1) n_b)
        if (s.n_b >= 1) {
          const int i = space.index_of(
              BasisState{s.n_a + 1, s.n_b - 1, s.n_r1, s.n_r2});
          const double el = std::sqrt(double(s.n_a + 1) * double(s.n_b));
          m(i, j) += (axis == SpinAxis::x) ? std::complex<double>(0.5 * el)
                                           : -0.5 * I * el;
        }
        // a b^dag : (n_a, n_b) -> (n_a-1, n_b+1), element sqrt(n_a (n_b+1))
        if (s.n_a >= 1) {
          const int i = space.index_of(
              BasisState{s.n_a - 1, s.n_b + 1, s.n_r1, s.n_r2});
          const double el = std::sqrt(double(s.n_a) * double(s.n_b + 1));
          m(i, j) += (axis == SpinAxis::x) ? std::complex<double>(0.5 * el)
                                           : 0.5 * I * el;
        }
        break;
      }
    }
  }
  const char* name = axis == SpinAxis::x ? "Jx" : (axis == SpinAxis::y ? "Jy" : "Jz");
  return HermitianOperator(space, std::move(m), name);
}

HermitianOperator jc_coupling(const HilbertSpace& space, int rydberg_level,
                              GroundMode mode, std::complex<double> omega) {
  if (rydberg_level != 1 && rydberg_level != 2) {
    throw std::domain_error("jc_coupling: rydberg_level must be 1 or 2, got " +
                            std::to_string(rydberg_level));
  }
  const int d = space.dim();
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(d, d);
  for (int j = 0; j < d; ++j) {
    const BasisState& s = space.state_at(j);
    const int n_g = ground_occ(s, mode);
    const int n_r = rydberg_occ(s, rydberg_level);
    // omega * mode * sigma+ : remove a ground atom, excite the level
    if (n_g >= 1 && n_r == 0) {
      BasisState t = with_rydberg(with_ground(s, mode, n_g - 1), rydberg_level, 1);
      m(space.index_of(t), j) += omega * std::sqrt(double(n_g));
    }
    // conj(omega) * mode^dag * sigma- : de-excite, return atom to the mode
    if (n_r == 1) {
      BasisState t = with_rydberg(with_ground(s, mode, n_g + 1), rydberg_level, 0);
      m(space.index_of(t), j) += std::conj(omega) * std::sqrt(double(n_g + 1));
    }
  }
  const std::string label = std::string("JC(") +
                            std::to_string(rydberg_level) + "," +
                            (mode == GroundMode::a ? "a" : "b") + ")";
  return HermitianOperator(space, std::move(m), label);
}

HermitianOperator detuning_operator(const HilbertSpace& space,
                                    int rydberg_level, double delta) {
  if (rydberg_level != 1 && rydberg_level != 2) {
    throw std::domain_error("detuning_operator: rydberg_level must be 1 or 2");
  }
  const int d = space.dim();
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(d, d);
  for (int j = 0; j < d; ++j) {
    const int n_r = rydberg_occ(space.state_at(j), rydberg_level);
    m(j, j) = delta * (2 * n_r - 1);
  }
  return HermitianOperator(space, std::move(m),
                           "detuning(" + std::to_string(rydberg_level) + ")");
}

HermitianOperator linear_combine(const std::vector<WeightedOperator>& terms,
                                 std::string label) {
  if (terms.empty()) {
    throw std::domain_error("linear_combine: empty term list");
  }
  const HilbertSpace& space = terms.front().op->space();
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(space.dim(), space.dim());
  for (const auto& t : terms) {
    if (t.op->dim() != space.dim()) {
      throw std::domain_error("linear_combine: operators from different spaces");
    }
    m += t.weight * t.op->matrix();
  }
  return HermitianOperator(space, std::move(m), std::move(label));
}

MeanVariance expectation_and_variance(const HermitianOperator& op,
                                      const StateVector& state) {
  if (op.dim() != state.dim()) {
    throw std::domain_error("expectation_and_variance: operator '" +
                            op.label() + "' and state spaces mismatch");
  }
  const double n = state.norm();
  if (std::abs(n - 1.0) > 1e-6) {
    throw std::domain_error(
        "expectation_and_variance: state is not normalized (norm " +
        std::to_string(n) + ")");
  }
  const Eigen::VectorXcd w = op.matrix() * state.amplitudes();
  const std::complex<double> mean_c = state.amplitudes().dot(w);
  const double scale = std::max(1.0, w.norm());
  if (std::abs(mean_c.imag()) > 1e-8 * scale) {
    throw std::domain_error("expectation_and_variance: <A> has imaginary part " +
                            std::to_string(mean_c.imag()));
  }
  const double mean = mean_c.real();
  double variance = w.squaredNorm() - mean * mean;
  if (variance < 0.0) {
    // roundoff on eigenstates; anything beyond roundoff scale is a bug
    if (variance < -1e-10 * std::max(1.0, w.squaredNorm())) {
      throw std::domain_error("expectation_and_variance: variance " +
                              std::to_string(variance) + " below roundoff");
    }
    variance = 0.0;
  }
  return MeanVariance{mean, variance};
}

StateVector dressed_state(const HilbertSpace& space, int n_a, int n_b,
                          int sign1, int sign2) {
  const int N = space.atoms();
  if (n_a < 0 || n_b < 0 || n_a + n_b != N) {
    throw std::domain_error("dressed_state: sector (" + std::to_string(n_a) +
                            "," + std::to_string(n_b) + ") invalid for N=" +
                            std::to_string(N));
  }
  if (std::abs(sign1) != 1 || std::abs(sign2) != 1) {
    throw std::domain_error("dressed_state: signs must be +1 or -1");
  }
  Eigen::VectorXcd v = Eigen::VectorXcd::Zero(space.dim());
  v(space.index_of(BasisState{n_a, n_b, 0, 0})) = 1.0;
  if (n_a >= 1) {
    v(space.index_of(BasisState{n_a - 1, n_b, 1, 0})) = sign1;
  }
  if (n_b >= 1) {
    v(space.index_of(BasisState{n_a, n_b - 1, 0, 1})) = sign2;
  }
  if (n_a >= 1 && n_b >= 1) {
    v(space.index_of(BasisState{n_a - 1, n_b - 1, 1, 1})) = sign1 * sign2;
  }
  return StateVector(space, std::move(v));  // ctor renormalizes
}

double dressed_energy(int n_a, int n_b, int sign1, int sign2, double omega) {
  return omega * (sign1 * std::sqrt(double(n_a)) + sign2 * std::sqrt(double(n_b)));
}

}  // namespace rydsim
