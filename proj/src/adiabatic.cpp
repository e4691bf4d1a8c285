#include "rydsim/adiabatic.hpp"

#include <cmath>
#include <complex>
#include <stdexcept>
#include <string>

namespace rydsim {

namespace {

HermitianOperator jc_pair(const HilbertSpace& s, GroundMode m1, GroundMode m2,
                          std::complex<double> omega, const std::string& label) {
  const HermitianOperator t1 = jc_coupling(s, 1, m1, omega);
  const HermitianOperator t2 = jc_coupling(s, 2, m2, omega);
  return HermitianOperator(s, t1.matrix() + t2.matrix(), label);
}

}  // namespace

ControlSet::ControlSet(const HilbertSpace& s)
    : space(&s),
      jx(collective_spin(s, SpinAxis::x)),
      h_jc(jc_pair(s, GroundMode::a, GroundMode::b, 1.0, "H_JC")),
      h_jc_y(jc_pair(s, GroundMode::a, GroundMode::b, {0.0, 1.0}, "H_JC_y")),
      h_jc_y_cross(
          jc_pair(s, GroundMode::b, GroundMode::a, {0.0, 1.0}, "H_JC_y_cross")) {}

HermitianOperator combined_hamiltonian(const ControlSet& c, double f1,
                                       double f2, double alpha1, double alpha2) {
  Eigen::MatrixXcd m = f1 * c.jx.matrix() + f2 * c.h_jc.matrix();
  if (alpha1 != 0.0) m += alpha1 * c.h_jc_y.matrix();
  if (alpha2 != 0.0) m += alpha2 * c.h_jc_y_cross.matrix();
  return HermitianOperator(*c.space, std::move(m), "H(f1,f2,a1,a2)");
}

HermitianOperator combined_hamiltonian(const HilbertSpace& space, double f1,
                                       double f2, double alpha1, double alpha2) {
  return combined_hamiltonian(ControlSet(space), f1, f2, alpha1, alpha2);
}

SpectrumTable spectrum_scan(const HilbertSpace& space,
                            const std::vector<double>& x_grid) {
  for (double x : x_grid) {
    if (x < 0.0 || x > 1.0) {
      throw std::domain_error("spectrum_scan: grid value " + std::to_string(x) +
                              " outside [0,1]");
    }
  }
  const ControlSet controls(space);
  SpectrumTable table;
  table.x = x_grid;
  table.levels.resize(static_cast<Eigen::Index>(x_grid.size()), space.dim());
  for (size_t i = 0; i < x_grid.size(); ++i) {
    const double x = x_grid[i];
    const EigenSystem eig =
        eigendecompose(combined_hamiltonian(controls, 1.0 - x, x, 0.0, 0.0));
    table.levels.row(static_cast<Eigen::Index>(i)) = eig.eigenvalues.transpose();
  }
  return table;
}

ExtremalPick pick_extremal(const EigenSystem& eig, Branch branch,
                           const Eigen::VectorXcd* previous,
                           double cluster_tol) {
  const int d = static_cast<int>(eig.eigenvalues.size());
  const int extremal = branch == Branch::max ? d - 1 : 0;
  const double e_ext = eig.eigenvalues(extremal);
  const double scale = std::max({1.0, std::abs(eig.eigenvalues(0)),
                                 std::abs(eig.eigenvalues(d - 1))});
  // collect the degenerate cluster around the extremal level
  int lo = extremal;
  int hi = extremal;
  if (branch == Branch::max) {
    while (lo > 0 && e_ext - eig.eigenvalues(lo - 1) <= cluster_tol * scale) --lo;
  } else {
    while (hi < d - 1 && eig.eigenvalues(hi + 1) - e_ext <= cluster_tol * scale)
      ++hi;
  }
  ExtremalPick pick;
  pick.energy = e_ext;
  pick.degenerate = hi > lo;
  if (pick.degenerate && previous != nullptr) {
    // project the previous vector onto the degenerate eigenspace
    Eigen::VectorXcd w = Eigen::VectorXcd::Zero(d);
    for (int i = lo; i <= hi; ++i) {
      w += eig.eigenvectors.col(i) *
           (eig.eigenvectors.col(i).dot(*previous));
    }
    const double n = w.norm();
    if (n > 1e-8) {
      pick.vector = w / n;
    } else {
      pick.vector = eig.eigenvectors.col(extremal);
    }
  } else {
    pick.vector = eig.eigenvectors.col(extremal);
  }
  // gauge: real positive overlap with the previous vector (or with the
  // largest component on the first sample)
  if (previous != nullptr) {
    const std::complex<double> ov = previous->dot(pick.vector);
    if (std::abs(ov) > 1e-12) {
      pick.vector *= std::conj(ov) / std::abs(ov);
    }
  } else {
    Eigen::Index imax;
    pick.vector.cwiseAbs().maxCoeff(&imax);
    const std::complex<double> c = pick.vector(imax);
    pick.vector *= std::conj(c) / std::abs(c);
  }
  return pick;
}

std::vector<TrackedEigenstate> tracked_extremal_state(const HilbertSpace& space,
                                                      const Schedule& schedule,
                                                      Branch branch,
                                                      double cluster_tol) {
  schedule.validate();
  const ControlSet controls(space);
  std::vector<TrackedEigenstate> out;
  out.reserve(schedule.samples.size());
  const Eigen::VectorXcd* prev = nullptr;
  for (const ScheduleSample& s : schedule.samples) {
    const EigenSystem eig =
        eigendecompose(combined_hamiltonian(controls, s.f1, s.f2, 0.0, 0.0));
    ExtremalPick pick = pick_extremal(eig, branch, prev, cluster_tol);
    out.push_back(TrackedEigenstate{s.t, pick.energy, std::move(pick.vector),
                                    pick.degenerate});
    prev = &out.back().vector;
  }
  return out;
}

CounterdiabaticTerm counterdiabatic_term(const ControlSet& controls,
                                         double f1dot, double f2dot,
                                         const EigenSystem& eig,
                                         double degeneracy_tol) {
  const int d = static_cast<int>(eig.eigenvalues.size());
  const Eigen::MatrixXcd dh =
      f1dot * controls.jx.matrix() + f2dot * controls.h_jc.matrix();
  const Eigen::MatrixXcd a = eig.eigenvectors.adjoint() * dh * eig.eigenvectors;
  Eigen::MatrixXcd h1_eig = Eigen::MatrixXcd::Zero(d, d);
  const std::complex<double> I(0.0, 1.0);
  int skipped = 0;
  for (int m = 0; m < d; ++m) {
    for (int n = 0; n < d; ++n) {
      if (m == n) continue;
      const double gap = eig.eigenvalues(n) - eig.eigenvalues(m);
      if (std::abs(gap) < degeneracy_tol) {
        ++skipped;
        continue;
      }
      h1_eig(m, n) = I * a(m, n) / gap;
    }
  }
  Eigen::MatrixXcd h1 =
      eig.eigenvectors * h1_eig * eig.eigenvectors.adjoint();
  // symmetrize away the roundoff of the two basis transforms
  h1 = 0.5 * (h1 + h1.adjoint().eval());
  return CounterdiabaticTerm{
      HermitianOperator(*controls.space, std::move(h1), "H1"), skipped / 2};
}

CompensationAlphas compensation_alphas_from_action(
    const Eigen::VectorXcd& psi0, const Eigen::VectorXcd& h1_psi0,
    const HermitianOperator& hy, const HermitianOperator& hycross) {
  const Eigen::VectorXcd wy = hy.matrix() * psi0;
  const Eigen::VectorXcd wc = hycross.matrix() * psi0;
  const double a = wy.squaredNorm();               // <Hy^2>
  const double b = wc.squaredNorm();               // <Hc^2>
  const double c = 2.0 * wy.dot(wc).real();        // <{Hy,Hc}>
  const double p = 2.0 * wy.dot(h1_psi0).real();   // <{Hy,H1}>
  const double q = 2.0 * wc.dot(h1_psi0).real();   // <{Hc,H1}>
  const double denom = 4.0 * a * b - c * c;
  if (denom < 1e-12 * std::max(1.0, 4.0 * a * b)) {
    return CompensationAlphas{0.0, 0.0, true};
  }
  return CompensationAlphas{(2.0 * b * p - c * q) / denom,
                            (2.0 * a * q - c * p) / denom, false};
}

CompensationAlphas compensation_alphas(const StateVector& psi0,
                                       const HermitianOperator& h1,
                                       const HermitianOperator& hy,
                                       const HermitianOperator& hycross) {
  if (std::abs(psi0.norm() - 1.0) > 1e-6) {
    throw std::domain_error("compensation_alphas: psi0 not normalized");
  }
  const Eigen::VectorXcd h1_psi = h1.matrix() * psi0.amplitudes();
  return compensation_alphas_from_action(psi0.amplitudes(), h1_psi, hy,
                                         hycross);
}

namespace {

// Largest parameter move per segment the tracked branch can absorb at the
// committed point, from the first-order response of the spectrum.  A ramp at
// speed pdot drives eigenmode m with amplitude up to
//   2 * pdot * |<m|dH/dp|track>| / gap_m^2          (bare ramp)
//   2 * pdot * |<m|(a1*Hy + a2*Hc - H1)|track>| / |gap_m|   (compensated ramp)
// where the compensated coupling uses the per-unit-speed least-squares fit.
// Keeping the summed squared amplitudes inside ride_band * leakage_tol bounds
// pdot; the measured cumulative leakage in the caller guards the neglected
// higher orders.  Couplings below numerical noise are ignored so that exact
// symmetry-protected degeneracies (zero coupling over zero gap) do not choke
// the ramp.
double sustainable_move(const ControlSet& controls, const EigenSystem& eig,
                        const ExtremalPick& base, bool ramp_f2,
                        const GreedyOptions& opts) {
  const int d = static_cast<int>(eig.eigenvalues.size());
  const double scale = std::max({1.0, std::abs(eig.eigenvalues(0)),
                                 std::abs(eig.eigenvalues(d - 1))});
  const double tol = opts.degeneracy_tol * scale;
  const Eigen::MatrixXcd& dh =
      ramp_f2 ? controls.h_jc.matrix() : controls.jx.matrix();
  const Eigen::VectorXcd v = dh * base.vector;
  const Eigen::VectorXcd coords = eig.eigenvectors.adjoint() * v;
  // Couplings below the eigensolver's resolution are dropped per mode: a
  // level split from a partner by s carries an eigenvector error of order
  // eps*|H|/s, which fakes a coupling ~ |v|*eps*|H|/gap across symmetry
  // chasms where the true matrix element is zero; dividing such noise by
  // gap^2 would stall the ramp at exactly-protected degeneracies.
  const auto noise_floor = [&](double gap) {
    return std::max(1e-12 * v.norm(), 1e-12 * scale * v.norm() / std::abs(gap));
  };
  double sum = 0.0;
  if (!opts.compensate) {
    for (int m = 0; m < d; ++m) {
      const double gap = base.energy - eig.eigenvalues(m);
      if (std::abs(gap) < tol || std::abs(coords(m)) <= noise_floor(gap))
        continue;
      const double c = 2.0 * std::abs(coords(m)) / (gap * gap);
      sum += c * c;
    }
  } else {
    // residual coupling after the best-fit compensation, per unit speed
    Eigen::VectorXcd h1c = coords;
    const std::complex<double> I(0.0, 1.0);
    for (int m = 0; m < d; ++m) {
      const double gap = base.energy - eig.eigenvalues(m);
      h1c(m) = (std::abs(gap) < tol || std::abs(coords(m)) <= noise_floor(gap))
                   ? 0.0
                   : I * coords(m) / gap;
    }
    const Eigen::VectorXcd h1u = eig.eigenvectors * h1c;
    const CompensationAlphas au = compensation_alphas_from_action(
        base.vector, h1u, controls.h_jc_y, controls.h_jc_y_cross);
    Eigen::VectorXcd r = -h1u;
    if (!au.degenerate_dictionary) {
      r += au.alpha1 * (controls.h_jc_y.matrix() * base.vector) +
           au.alpha2 * (controls.h_jc_y_cross.matrix() * base.vector);
    }
    const Eigen::VectorXcd rc = eig.eigenvectors.adjoint() * r;
    for (int m = 0; m < d; ++m) {
      const double gap = base.energy - eig.eigenvalues(m);
      if (std::abs(gap) < tol) continue;
      const double floor = noise_floor(gap);
      // residual of the operator fit, plus the discretization error of the
      // piecewise-constant schedule: the compensation spreads each
      // eigenbasis jump of ~ pdot*dt*|coords|/gap over a finite segment, and
      // the phase mismatch accumulated across segments rides at about half
      // that jump regardless of dt
      double c = 0.0;
      if (std::abs(coords(m)) > floor)
        c += 0.5 * opts.dt * std::abs(coords(m)) / std::abs(gap);
      if (std::abs(rc(m)) > floor) c += 2.0 * std::abs(rc(m)) / std::abs(gap);
      sum += c * c;
    }
  }
  if (!(sum > 0.0)) return opts.max_move;
  const double pdot = std::sqrt(opts.ride_band * opts.leakage_tol / sum);
  return std::min(opts.max_move, pdot * opts.dt);
}

}  // namespace

Schedule greedy_schedule(const HilbertSpace& space, const GreedyOptions& opts) {
  if (!(opts.f2_max > 0.0)) {
    throw std::domain_error("greedy_schedule: f2_max must be positive");
  }
  if (!(opts.leakage_tol > 0.0) || opts.leakage_tol >= 0.5) {
    throw std::domain_error("greedy_schedule: leakage_tol must be in (0, 0.5)");
  }
  if (!(opts.dt > 0.0)) {
    throw std::domain_error("greedy_schedule: dt must be positive");
  }
  const ControlSet controls(space);

  Schedule schedule;
  // Anchor segment at the exact starting parameters: the state is the Jx
  // extremal eigenstate there, so the segment only contributes a phase, and
  // a replay of the emitted schedule reproduces the internal evolution.
  schedule.samples.push_back({0.0, 1.0, 0.0, 0.0, 0.0});

  double f1 = 1.0;
  double f2 = 0.0;
  EigenSystem eig_cur =
      eigendecompose(combined_hamiltonian(controls, f1, f2, 0.0, 0.0));
  ExtremalPick base = pick_extremal(eig_cur, Branch::max, nullptr,
                                    opts.degeneracy_tol);
  Eigen::VectorXcd psi = propagate_raw(eig_cur, base.vector, opts.dt);

  double t = opts.dt;  // start time of the next committed segment
  double move = opts.max_move;

  while (f2 < opts.f2_max || f1 > 0.0) {
    const bool ramp_f2 = f2 < opts.f2_max;
    // physics cap on this segment's move, from the committed point
    const double cap = sustainable_move(controls, eig_cur, base, ramp_f2, opts);
    bool committed = false;
    while (!committed) {
      const double step = std::min(move, cap);
      if (step < opts.dt * opts.underflow_factor) {
        throw std::runtime_error(
            "greedy_schedule: step size underflow at t=" + std::to_string(t) +
            ", f1=" + std::to_string(f1) + ", f2=" + std::to_string(f2) +
            " (leakage tolerance unreachable)");
      }
      // largest admissible move: ramp f2 up first, then f1 down
      double f1_new = f1;
      double f2_new = f2;
      if (ramp_f2) {
        f2_new = std::min(f2 + step, opts.f2_max);
      } else {
        f1_new = std::max(f1 - step, 0.0);
      }

      EigenSystem eig = eigendecompose(
          combined_hamiltonian(controls, f1_new, f2_new, 0.0, 0.0));
      ExtremalPick pick =
          pick_extremal(eig, Branch::max, &base.vector, opts.degeneracy_tol);

      // The committed schedule is read right-continuously: at the segment
      // boundary the state is compared against the track of the incoming
      // parameters.  The parameter jump rotates the track, so the boundary
      // reading exceeds the previous segment-end reading; bound both, or
      // the emitted schedule would violate the budget on replay.
      const double entry_leakage = 1.0 - std::norm(pick.vector.dot(psi));
      if (entry_leakage > opts.leakage_tol) {
        move = step * opts.backoff;
        continue;
      }

      double alpha1 = 0.0;
      double alpha2 = 0.0;
      if (opts.compensate) {
        // eigenvector index of the tracked branch: extremal (or projected
        // within the top cluster, which shares the same action formula only
        // in the nondegenerate case; for clusters the skipped pairs are
        // exactly the intra-cluster ones)
        const double scale =
            std::max({1.0, std::abs(eig.eigenvalues(0)),
                      std::abs(eig.eigenvalues(eig.eigenvalues.size() - 1))});
        const double tol = opts.degeneracy_tol * scale;
        const double f1dot = (f1_new - f1) / opts.dt;
        const double f2dot = (f2_new - f2) / opts.dt;
        // action of the counterdiabatic generator on the tracked vector,
        // computed in the gauge of pick.vector itself (a raw eigenvector
        // column carries an arbitrary overall phase, which would randomize
        // the sign of the fitted weights from segment to segment)
        const Eigen::VectorXcd dh_psi =
            f1dot * (controls.jx.matrix() * pick.vector) +
            f2dot * (controls.h_jc.matrix() * pick.vector);
        Eigen::VectorXcd coords = eig.eigenvectors.adjoint() * dh_psi;
        const std::complex<double> I(0.0, 1.0);
        for (int m = 0; m < coords.size(); ++m) {
          const double gap = pick.energy - eig.eigenvalues(m);
          coords(m) = std::abs(gap) < tol ? 0.0 : I * coords(m) / gap;
        }
        const Eigen::VectorXcd h1_psi = eig.eigenvectors * coords;
        const CompensationAlphas alphas = compensation_alphas_from_action(
            pick.vector, h1_psi, controls.h_jc_y, controls.h_jc_y_cross);
        alpha1 = alphas.alpha1;
        alpha2 = alphas.alpha2;
      }

      Eigen::VectorXcd psi_new;
      if (alpha1 == 0.0 && alpha2 == 0.0) {
        psi_new = propagate_raw(eig, psi, opts.dt);  // H == H0 here
      } else {
        const HermitianOperator h =
            combined_hamiltonian(controls, f1_new, f2_new, alpha1, alpha2);
        psi_new = propagate_raw(eigendecompose(h), psi, opts.dt);
      }
      const double leakage = 1.0 - std::norm(pick.vector.dot(psi_new));

      if (leakage <= opts.leakage_tol) {
        schedule.samples.push_back({t, f1_new, f2_new, alpha1, alpha2});
        t += opts.dt;
        psi = psi_new;
        base = std::move(pick);
        eig_cur = std::move(eig);
        f1 = f1_new;
        f2 = f2_new;
        // re-open the trial move only while most of the budget is unspent;
        // the physics cap remains the binding limit in the smooth regions
        move = (leakage < opts.ride_band * opts.leakage_tol)
                   ? std::min(step * opts.growth, opts.max_move)
                   : step;
        committed = true;
      } else {
        move = step * opts.backoff;
      }
    }
  }
  // terminal anchor: the target parameters with no ramp
  schedule.samples.push_back({t, 0.0, opts.f2_max, 0.0, 0.0});
  schedule.validate(true, opts.f2_max);
  return schedule;
}

Schedule greedy_schedule(const HilbertSpace& space, double f2_max,
                         double leakage_tol, double dt, bool compensate) {
  GreedyOptions opts;
  opts.f2_max = f2_max;
  opts.leakage_tol = leakage_tol;
  opts.dt = dt;
  opts.compensate = compensate;
  return greedy_schedule(space, opts);
}

}  // namespace rydsim
