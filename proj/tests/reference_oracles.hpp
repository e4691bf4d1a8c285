// Independent reference constructions used as oracles by the test suites.
// Everything here is rebuilt from first principles — explicit occupation
// enumeration, raw ladder-operator matrix elements, generic Runge-Kutta
// integration — without calling the library's own assembly routines, so
// agreement between the two is a meaningful check rather than a tautology.
#pragma once

#include <cmath>
#include <complex>
#include <map>
#include <tuple>
#include <vector>

#include <Eigen/Dense>

#include "rydsim/hilbert.hpp"

namespace oracle {

using Complex = std::complex<double>;
using Key = std::tuple<int, int, int, int>;  // (n_a, n_b, n_r1, n_r2)

// Every occupation tuple with n_r1, n_r2 in {0,1} and total atom number N,
// in the documented storage order: Rydberg blocks (0,0), (1,0), (0,1),
// (1,1), with n_a descending inside each block.
inline std::vector<Key> enumerate_basis(int atoms) {
  std::vector<Key> keys;
  const int blocks[4][2] = {{0, 0}, {1, 0}, {0, 1}, {1, 1}};
  for (const auto& blk : blocks) {
    const int ground = atoms - blk[0] - blk[1];
    for (int n_a = ground; n_a >= 0; --n_a) {
      keys.emplace_back(n_a, ground - n_a, blk[0], blk[1]);
    }
  }
  return keys;
}

// Index lookup over the enumerated list (linear scan on purpose: this is
// the reference, simplicity beats speed).
inline int find_index(const std::vector<Key>& keys, const Key& k) {
  for (size_t i = 0; i < keys.size(); ++i) {
    if (keys[i] == k) return static_cast<int>(i);
  }
  return -1;
}

// Collective spin components from the raw two-mode ladder action:
//   a^dag b |n_a, n_b>        = sqrt((n_a+1) n_b) |n_a+1, n_b-1>
//   Jx = (a^dag b + a b^dag)/2
//   Jy = (a^dag b - a b^dag)/(2i)
//   Jz = (n_a - n_b)/2
inline Eigen::MatrixXcd spin_matrix(int atoms, char axis) {
  const auto keys = enumerate_basis(atoms);
  const int d = static_cast<int>(keys.size());
  Eigen::MatrixXcd raise = Eigen::MatrixXcd::Zero(d, d);  // a^dag b
  for (int j = 0; j < d; ++j) {
    const auto [n_a, n_b, r1, r2] = keys[j];
    if (n_b >= 1) {
      const int i = find_index(keys, Key{n_a + 1, n_b - 1, r1, r2});
      raise(i, j) = std::sqrt(double(n_a + 1) * double(n_b));
    }
  }
  const Eigen::MatrixXcd lower = raise.adjoint();  // a b^dag
  if (axis == 'x') return 0.5 * (raise + lower);
  if (axis == 'y') return Complex(0.0, -0.5) * (raise - lower);
  Eigen::MatrixXcd jz = Eigen::MatrixXcd::Zero(d, d);
  for (int j = 0; j < d; ++j) {
    const auto [n_a, n_b, r1, r2] = keys[j];
    jz(j, j) = 0.5 * (n_a - n_b);
  }
  return jz;
}

// Excitation-exchange coupling between one ground mode and one Rydberg
// level, from raw elements: omega * mode * sigma+ + conj(omega) * mode^dag
// * sigma-.  The sigma+ flips the level occupation 0 -> 1 while the mode
// annihilates one ground atom (factor sqrt(n)).
inline Eigen::MatrixXcd jc_matrix(int atoms, int level, char mode,
                                  Complex omega) {
  const auto keys = enumerate_basis(atoms);
  const int d = static_cast<int>(keys.size());
  Eigen::MatrixXcd up = Eigen::MatrixXcd::Zero(d, d);  // mode * sigma+
  for (int j = 0; j < d; ++j) {
    auto [n_a, n_b, r1, r2] = keys[j];
    const int occ = (level == 1) ? r1 : r2;
    const int ground = (mode == 'a') ? n_a : n_b;
    if (occ != 0 || ground < 1) continue;
    Key dst{mode == 'a' ? n_a - 1 : n_a, mode == 'b' ? n_b - 1 : n_b,
            level == 1 ? 1 : r1, level == 2 ? 1 : r2};
    up(find_index(keys, dst), j) = std::sqrt(double(ground));
  }
  return omega * up + std::conj(omega) * up.adjoint();
}

// Classic fixed-step fourth-order Runge-Kutta for d(psi)/dt = -i H psi.
inline Eigen::VectorXcd rk4_evolve(const Eigen::MatrixXcd& h,
                                   Eigen::VectorXcd psi, double duration,
                                   int steps) {
  const Complex mi(0.0, -1.0);
  const double dt = duration / steps;
  for (int s = 0; s < steps; ++s) {
    const Eigen::VectorXcd k1 = mi * (h * psi);
    const Eigen::VectorXcd k2 = mi * (h * (psi + 0.5 * dt * k1));
    const Eigen::VectorXcd k3 = mi * (h * (psi + 0.5 * dt * k2));
    const Eigen::VectorXcd k4 = mi * (h * (psi + dt * k3));
    psi += (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  }
  return psi;
}

inline double max_abs_diff(const Eigen::MatrixXcd& a,
                           const Eigen::MatrixXcd& b) {
  return (a - b).cwiseAbs().maxCoeff();
}

// n-choose-k as a double, by the multiplicative rule.
inline double binomial(int n, int k) {
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r *= double(n - k + i) / double(i);
  return r;
}

}  // namespace oracle
