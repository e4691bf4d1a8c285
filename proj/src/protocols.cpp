#include "rydsim/protocols.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <limits>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "rydsim/analysis.hpp"

namespace rydsim {

namespace {

const double kPi = std::acos(-1.0);

// The chirp Hamiltonian coupling*H_JC + delta (sigma_z1 + sigma_z2) conserves
// mu = n_a + n_r1 and nu = n_b + n_r2, so it factors per (mu, nu) sector into
// two independent two-level systems with couplings sqrt(mu), sqrt(nu).
struct SectorIdx {
  int i00, i10, i01, i11;  // -1 where the sector lacks that component
};

std::vector<SectorIdx> sector_table(const HilbertSpace& space) {
  const int N = space.atoms();
  std::vector<SectorIdx> table(static_cast<size_t>(N) + 1);
  for (int mu = 0; mu <= N; ++mu) {
    const int nu = N - mu;
    SectorIdx& s = table[static_cast<size_t>(mu)];
    s.i00 = space.index_of(BasisState{mu, nu, 0, 0});
    s.i10 = mu >= 1 ? space.index_of(BasisState{mu - 1, nu, 1, 0}) : -1;
    s.i01 = nu >= 1 ? space.index_of(BasisState{mu, nu - 1, 0, 1}) : -1;
    s.i11 = (mu >= 1 && nu >= 1)
                ? space.index_of(BasisState{mu - 1, nu - 1, 1, 1})
                : -1;
  }
  return table;
}

// exp(-i tau [[-delta, g], [g, delta]]) in the (unoccupied, occupied) basis;
// symmetric, so u10 = u01.
struct TwoLevelU {
  std::complex<double> u00, u01, u11;
};

TwoLevelU chirp_step(double delta, double g, double tau) {
  const double d = std::hypot(delta, g);
  if (d == 0.0) return {1.0, 0.0, 1.0};
  const double c = std::cos(d * tau);
  const double s = std::sin(d * tau) / d;
  return {{c, s * delta}, {0.0, -s * g}, {c, -s * delta}};
}

void validate_chirp(const ChirpOptions& o) {
  if (!(o.delta_max > 0.0) || !(o.ramp_time > 0.0) || !(o.dt > 0.0) ||
      !(o.coupling >= 0.0) || !(o.residual_warn > 0.0)) {
    throw std::domain_error(
        "chirp options: delta_max, ramp_time, dt, residual_warn must be > 0 "
        "and coupling >= 0");
  }
}

// Piecewise-constant ramp of delta from 0 towards -delta_max (midpoint
// sampled), propagated exactly per sector as a Kronecker pair of 2x2 steps.
//
// The component that ends de-excited rides the upper instantaneous branch,
// whose dynamical phase is a deterministic function of the ramp alone.  That
// phase is removed here (it is compensated in hardware by frame bookkeeping),
// so the de-excitation is phase-transparent: only genuine diabatic transfer
// distinguishes the output from the input's ground-sector amplitudes.
void chirp_evolve_in_place(const HilbertSpace& space,
                           const std::vector<SectorIdx>& sectors,
                           Eigen::VectorXcd& a, const ChirpOptions& o) {
  const int N = space.atoms();
  const int steps = std::max(1, static_cast<int>(std::lround(o.ramp_time / o.dt)));
  const double tau = o.ramp_time / steps;
  std::vector<double> branch_phase(static_cast<size_t>(N) + 1, 0.0);
  for (int k = 0; k < steps; ++k) {
    const double delta = -o.delta_max * (k + 0.5) / steps;
    for (int mu = 0; mu <= N; ++mu) {
      const SectorIdx& s = sectors[static_cast<size_t>(mu)];
      const double ga = o.coupling * std::sqrt(double(mu));
      const double gb = o.coupling * std::sqrt(double(N - mu));
      branch_phase[static_cast<size_t>(mu)] +=
          (std::hypot(delta, ga) + std::hypot(delta, gb)) * tau;
      const TwoLevelU ua = chirp_step(delta, ga, tau);
      const TwoLevelU ub = chirp_step(delta, gb, tau);
      const std::complex<double> v00 = a(s.i00);
      const std::complex<double> v01 = s.i01 >= 0 ? a(s.i01) : 0.0;
      const std::complex<double> v10 = s.i10 >= 0 ? a(s.i10) : 0.0;
      const std::complex<double> v11 = s.i11 >= 0 ? a(s.i11) : 0.0;
      a(s.i00) = ua.u00 * (ub.u00 * v00 + ub.u01 * v01) +
                 ua.u01 * (ub.u00 * v10 + ub.u01 * v11);
      if (s.i01 >= 0) {
        a(s.i01) = ua.u00 * (ub.u01 * v00 + ub.u11 * v01) +
                   ua.u01 * (ub.u01 * v10 + ub.u11 * v11);
      }
      if (s.i10 >= 0) {
        a(s.i10) = ua.u01 * (ub.u00 * v00 + ub.u01 * v01) +
                   ua.u11 * (ub.u00 * v10 + ub.u01 * v11);
      }
      if (s.i11 >= 0) {
        a(s.i11) = ua.u01 * (ub.u01 * v00 + ub.u11 * v01) +
                   ua.u11 * (ub.u01 * v10 + ub.u11 * v11);
      }
    }
  }
  for (int mu = 0; mu <= N; ++mu) {
    const double phi = branch_phase[static_cast<size_t>(mu)];
    a(sectors[static_cast<size_t>(mu)].i00) *=
        std::complex<double>(std::cos(phi), std::sin(phi));
  }
}

// Zeroes every Rydberg-carrying amplitude, renormalizes, and returns the
// removed probability.
double project_ground_in_place(const HilbertSpace& space, Eigen::VectorXcd& a) {
  const int N = space.atoms();
  double residual = 0.0;
  for (int i = N + 1; i < space.dim(); ++i) {
    residual += std::norm(a(i));
    a(i) = 0.0;
  }
  const double remaining = a.squaredNorm();
  if (remaining < 1e-12) {
    throw std::runtime_error(
        "chirp projection removed essentially all amplitude");
  }
  a /= std::sqrt(remaining);
  return residual;
}

Eigen::VectorXd jz_diagonal(const HilbertSpace& space) {
  Eigen::VectorXd z(space.dim());
  for (int i = 0; i < space.dim(); ++i) {
    const BasisState& s = space.state_at(i);
    z(i) = 0.5 * (s.n_a - s.n_b);
  }
  return z;
}

double z_variance(const Eigen::VectorXd& z, const Eigen::VectorXcd& a) {
  double mean = 0.0;
  double second = 0.0;
  for (int i = 0; i < a.size(); ++i) {
    const double p = std::norm(a(i));
    mean += p * z(i);
    second += p * z(i) * z(i);
  }
  return std::max(0.0, second - mean * mean);
}

double rydberg_weight(const HilbertSpace& space, const Eigen::VectorXcd& a) {
  double p = 0.0;
  for (int i = space.atoms() + 1; i < space.dim(); ++i) p += std::norm(a(i));
  return p;
}

struct AnglePick {
  double angle;
  double value;
};

// Var(Jz) after a collective rotation is pi-periodic in the angle, so a
// coarse grid over [0, pi) brackets the optimum and golden-section search
// refines it to 1e-4 rad.
AnglePick minimize_angle(const std::function<double(double)>& f) {
  const int grid = 48;
  double best_phi = 0.0;
  double best_val = std::numeric_limits<double>::infinity();
  for (int k = 0; k < grid; ++k) {
    const double phi = kPi * k / grid;
    const double v = f(phi);
    if (v < best_val) {
      best_val = v;
      best_phi = phi;
    }
  }
  double lo = best_phi - kPi / grid;
  double hi = best_phi + kPi / grid;
  const double ratio = 0.5 * (std::sqrt(5.0) - 1.0);
  double c = hi - ratio * (hi - lo);
  double d = lo + ratio * (hi - lo);
  double fc = f(c);
  double fd = f(d);
  while (hi - lo > 1e-4) {
    if (fc < fd) {
      hi = d;
      d = c;
      fd = fc;
      c = hi - ratio * (hi - lo);
      fc = f(c);
    } else {
      lo = c;
      c = d;
      fc = fd;
      d = lo + ratio * (hi - lo);
      fd = f(d);
    }
  }
  if (fc < best_val) {
    best_val = fc;
    best_phi = c;
  }
  if (fd < best_val) {
    best_val = fd;
    best_phi = d;
  }
  double wrapped = std::fmod(best_phi, kPi);
  if (wrapped < 0.0) wrapped += kPi;
  return {wrapped, f(wrapped)};
}

// Golden-section minimum of f on [lo, hi]; assumes a single valley inside.
double golden_min(const std::function<double(double)>& f, double lo, double hi,
                  double tol) {
  const double ratio = 0.5 * (std::sqrt(5.0) - 1.0);
  double c = hi - ratio * (hi - lo);
  double d = lo + ratio * (hi - lo);
  double fc = f(c);
  double fd = f(d);
  while (hi - lo > tol) {
    if (fc < fd) {
      hi = d;
      d = c;
      fd = fc;
      c = hi - ratio * (hi - lo);
      fc = f(c);
    } else {
      lo = c;
      c = d;
      fc = fd;
      d = lo + ratio * (hi - lo);
      fd = f(d);
    }
  }
  return 0.5 * (lo + hi);
}

double parity_sign(int k) { return std::abs(k) % 2 == 0 ? 1.0 : -1.0; }

void check_metrics_finite(const ProtocolReport& rep) {
  for (const auto& [key, value] : rep.metrics) {
    if (!std::isfinite(value)) {
      throw std::runtime_error("protocol produced non-finite metric: " + key);
    }
  }
}

double decibel_gain(int atoms, double delta_jz) {
  return 20.0 *
         std::log10(0.5 * std::sqrt(double(atoms)) / std::max(delta_jz, 1e-300));
}

Eigen::VectorXcd cat_pulse_image(const HilbertSpace& space, int dn) {
  const int N = space.atoms();
  if (N < 2) {
    throw std::domain_error("cat_pulse_approx: need at least 2 atoms");
  }
  const int half = (N % 2 == 0) ? N / 2 : (N - 1) / 2;
  const int even_base = (N % 2 == 0) ? N : N - 1;
  if (std::abs(dn) > half) {
    throw std::domain_error(
        "cat_pulse_approx: delta_n outside the perturbative window");
  }
  const int n_a = half + dn;
  const double eps = double(dn) * dn * kPi / (4.0 * even_base);
  const std::complex<double> I(0.0, 1.0);
  Eigen::VectorXcd v = Eigen::VectorXcd::Zero(space.dim());
  const int gi = space.index_of(BasisState{n_a, N - n_a, 0, 0});
  const int xi =
      n_a >= 1 ? space.index_of(BasisState{n_a - 1, N - n_a, 1, 0}) : -1;
  const bool dn_even = dn % 2 == 0;
  if (!dn_even && xi < 0) {
    throw std::domain_error(
        "cat_pulse_approx: odd delta_n at the edge has no excited component");
  }
  if (N % 2 == 0) {
    if (dn_even) {
      const double sign = parity_sign((N + dn) / 2);
      v(gi) = sign;
      if (xi >= 0) v(xi) = sign * I * eps;
    } else {
      const double sign = parity_sign((N + dn - 1) / 2);
      v(gi) = sign * eps;
      v(xi) = -sign * I;
    }
  } else {
    if (dn_even) {
      const double sign = parity_sign((N - 1 + dn) / 2);
      v(gi) = sign;
      if (xi >= 0) v(xi) = sign * I * eps;
    } else {
      const double sign = parity_sign((N + dn) / 2);
      v(gi) = -sign * eps;
      v(xi) = sign * I;
    }
  }
  return v;
}

}  // namespace

PreparedState prepare_dressed_init(const HilbertSpace& space, PrepMode mode) {
  const int N = space.atoms();
  const StateVector coherent = spin_coherent_state(space, 0.5 * kPi, 0.0);
  Eigen::VectorXcd ideal = Eigen::VectorXcd::Zero(space.dim());
  for (int n_a = 0; n_a <= N; ++n_a) {
    const std::complex<double> c =
        coherent.amplitude(BasisState{n_a, N - n_a, 0, 0});
    ideal += c * dressed_state(space, n_a, N - n_a, +1, +1).amplitudes();
  }
  StateVector ideal_state(space, std::move(ideal));
  if (mode == PrepMode::ideal) return {std::move(ideal_state), 1.0};
  // Quarter-Rabi-period pulses at the mean occupation N/2; phase i makes the
  // produced superpositions + eigenvectors of the real squeezing drive.
  const double pulse = kPi / (4.0 * std::sqrt(0.5 * N));
  StateVector psi = propagate_const(
      coherent, jc_coupling(space, 1, GroundMode::a, {0.0, 1.0}), pulse);
  psi = propagate_const(psi, jc_coupling(space, 2, GroundMode::b, {0.0, 1.0}),
                        pulse);
  const double fid = fidelity(psi, ideal_state);
  return {std::move(psi), fid};
}

ChirpResult chirp_deexcite(const StateVector& state, const ChirpOptions& opts) {
  validate_chirp(opts);
  const HilbertSpace& space = state.space();
  const std::vector<SectorIdx> sectors = sector_table(space);
  Eigen::VectorXcd a = state.amplitudes();
  chirp_evolve_in_place(space, sectors, a, opts);
  const double residual = project_ground_in_place(space, a);
  return {StateVector(space, std::move(a)), residual,
          residual > opts.residual_warn};
}

ChirpResult chirp_deexcite(const StateVector& state, double delta_max,
                           double ramp_time) {
  ChirpOptions o;
  o.delta_max = delta_max;
  o.ramp_time = ramp_time;
  return chirp_deexcite(state, o);
}

ProtocolReport dynamic_squeeze(const HilbertSpace& space,
                               const DynamicOptions& opts) {
  if (!opts.optimize && !(opts.evolve_time > 0.0)) {
    throw std::domain_error(
        "dynamic_squeeze: evolve_time must be > 0 unless optimize is set");
  }
  validate_chirp(opts.chirp);
  const int N = space.atoms();
  const PreparedState prep = prepare_dressed_init(space, opts.prep);
  const ControlSet controls(space);
  const EigenSystem drive = eigendecompose(controls.h_jc);
  const EigenSystem jx = eigendecompose(controls.jx);
  const std::vector<SectorIdx> sectors = sector_table(space);
  const Eigen::VectorXd z = jz_diagonal(space);

  struct PipelineResult {
    double variance = 0.0;
    double angle = 0.0;
    double residual = 0.0;
    Eigen::VectorXcd amps;
  };

  // Full remainder of the pipeline after the drive: rotation about x and
  // chirped de-excitation in the configured order, with the rotation angle
  // minimizing the true end-of-pipeline Var(Jz).
  auto run_pipeline = [&](double evolve_time) {
    PipelineResult out;
    const Eigen::VectorXcd evolved =
        propagate_raw(drive, prep.state.amplitudes(), evolve_time);
    if (opts.order == PipelineOrder::rotate_then_chirp) {
      auto objective = [&](double phi) {
        Eigen::VectorXcd w = propagate_raw(jx, evolved, -phi);
        chirp_evolve_in_place(space, sectors, w, opts.chirp);
        project_ground_in_place(space, w);
        return z_variance(z, w);
      };
      const AnglePick pick = minimize_angle(objective);
      Eigen::VectorXcd w = propagate_raw(jx, evolved, -pick.angle);
      chirp_evolve_in_place(space, sectors, w, opts.chirp);
      out.residual = project_ground_in_place(space, w);
      out.variance = z_variance(z, w);
      out.angle = pick.angle;
      out.amps = std::move(w);
    } else {
      Eigen::VectorXcd w = evolved;
      chirp_evolve_in_place(space, sectors, w, opts.chirp);
      out.residual = project_ground_in_place(space, w);
      auto objective = [&](double phi) {
        return z_variance(z, propagate_raw(jx, w, -phi));
      };
      const AnglePick pick = minimize_angle(objective);
      out.amps = propagate_raw(jx, w, -pick.angle);
      out.variance = z_variance(z, out.amps);
      out.angle = pick.angle;
    }
    return out;
  };

  std::vector<TrajectoryMetrics> trajectory;
  double best_time = opts.evolve_time;
  double best_val = std::numeric_limits<double>::infinity();
  PipelineResult best;
  auto probe = [&](double evolve_time) {
    PipelineResult r = run_pipeline(evolve_time);
    const double value = r.variance;
    trajectory.push_back(
        {evolve_time, r.variance / N, 0.0, 0.0, 0.0, r.residual});
    if (value < best_val) {
      best_val = value;
      best_time = evolve_time;
      best = std::move(r);
    }
    return value;
  };

  if (opts.optimize) {
    // The optimum sits near N in drive units; scan a wide bracket around it.
    const int coarse = 25;
    const double t_lo = 0.3 * N;
    const double t_hi = 1.8 * N;
    for (int i = 0; i < coarse; ++i) {
      probe(t_lo + (t_hi - t_lo) * i / (coarse - 1));
    }
    const double spacing = (t_hi - t_lo) / (coarse - 1);
    double lo = std::max(t_lo, best_time - spacing);
    double hi = std::min(t_hi, best_time + spacing);
    const double ratio = 0.5 * (std::sqrt(5.0) - 1.0);
    double c = hi - ratio * (hi - lo);
    double d = lo + ratio * (hi - lo);
    double fc = probe(c);
    double fd = probe(d);
    const double t_tol = std::max(1e-3, 0.01 * N);
    while (hi - lo > t_tol) {
      if (fc < fd) {
        hi = d;
        d = c;
        fd = fc;
        c = hi - ratio * (hi - lo);
        fc = probe(c);
      } else {
        lo = c;
        c = d;
        fc = fd;
        d = lo + ratio * (hi - lo);
        fd = probe(d);
      }
    }
    std::sort(trajectory.begin(), trajectory.end(),
              [](const TrajectoryMetrics& a, const TrajectoryMetrics& b) {
                return a.t < b.t;
              });
  } else {
    probe(opts.evolve_time);
  }

  ProtocolReport rep(StateVector(space, best.amps));
  rep.trajectory = std::move(trajectory);
  const double delta_jz = std::sqrt(best.variance);
  rep.metrics["evolve_time"] = best_time;
  rep.metrics["rotation_angle"] = best.angle;
  rep.metrics["variance_jz"] = best.variance;
  rep.metrics["delta_jz"] = delta_jz;
  rep.metrics["squeezing_parameter"] = best.variance / N;
  rep.metrics["squeezing_db"] = decibel_gain(N, delta_jz);
  rep.metrics["chirp_residual"] = best.residual;
  rep.metrics["chirp_too_fast"] =
      best.residual > opts.chirp.residual_warn ? 1.0 : 0.0;
  rep.metrics["prep_fidelity"] = prep.fidelity_to_ideal;
  check_metrics_finite(rep);
  return rep;
}

ProtocolReport dynamic_squeeze(const HilbertSpace& space, double evolve_time,
                               bool optimize) {
  DynamicOptions o;
  o.evolve_time = evolve_time;
  o.optimize = optimize;
  return dynamic_squeeze(space, o);
}

ProtocolReport adiabatic_squeeze_run(const HilbertSpace& space,
                                     const Schedule& schedule,
                                     const AdiabaticRunOptions& opts) {
  if (opts.max_metric_samples < 2) {
    throw std::domain_error(
        "adiabatic_squeeze_run: max_metric_samples must be >= 2");
  }
  validate_chirp(opts.chirp);
  schedule.validate(true, schedule.samples.back().f2);
  const int N = space.atoms();
  const std::vector<ScheduleSample>& smp = schedule.samples;
  const int n = static_cast<int>(smp.size());
  const ControlSet controls(space);
  const std::vector<SectorIdx> sectors = sector_table(space);
  const Eigen::VectorXd z = jz_diagonal(space);
  const int stride = std::max(1, (n + opts.max_metric_samples - 1) /
                                     opts.max_metric_samples);

  Eigen::VectorXcd psi = spin_coherent_state(space, 0.5 * kPi, 0.0).amplitudes();
  Eigen::VectorXcd tracked;
  bool have_tracked = false;
  std::vector<TrajectoryMetrics> trajectory;
  double max_leakage = 0.0;
  double max_energy_dev = 0.0;

  for (int k = 0; k < n; ++k) {
    const ScheduleSample& s = smp[k];
    if (k % stride == 0 || k == n - 1) {
      const HermitianOperator h0 =
          combined_hamiltonian(controls, s.f1, s.f2, 0.0, 0.0);
      const EigenSystem eig = eigendecompose(h0);
      const ExtremalPick pick =
          pick_extremal(eig, Branch::max, have_tracked ? &tracked : nullptr);
      tracked = pick.vector;
      have_tracked = true;
      const double leak =
          std::clamp(1.0 - std::norm(tracked.dot(psi)), 0.0, 1.0);
      const double energy_mean =
          std::real(psi.dot(h0.matrix() * psi));
      const double ryd = rydberg_weight(space, psi);
      // Virtual termination: chirp a copy at the instantaneous drive
      // amplitude and measure S on the de-excited state.
      ChirpOptions vc = opts.chirp;
      vc.coupling = opts.chirp.coupling * s.f2;
      Eigen::VectorXcd w = psi;
      chirp_evolve_in_place(space, sectors, w, vc);
      project_ground_in_place(space, w);
      trajectory.push_back(
          {s.t, z_variance(z, w) / N, leak, energy_mean, pick.energy, ryd});
      max_leakage = std::max(max_leakage, leak);
      max_energy_dev = std::max(
          max_energy_dev, std::abs(energy_mean - pick.energy) /
                              std::max(1.0, std::abs(pick.energy)));
    }
    if (k + 1 < n) {
      const double a1 = opts.compensate ? s.alpha1 : 0.0;
      const double a2 = opts.compensate ? s.alpha2 : 0.0;
      const HermitianOperator h =
          combined_hamiltonian(controls, s.f1, s.f2, a1, a2);
      psi = propagate_raw(eigendecompose(h), psi, smp[k + 1].t - s.t);
    }
  }

  ChirpOptions fc = opts.chirp;
  fc.coupling = opts.chirp.coupling * smp.back().f2;
  const ChirpResult chirp = chirp_deexcite(StateVector(space, psi), fc);

  ProtocolReport rep(chirp.state);
  const double initial_s = trajectory.front().s_value;
  rep.trajectory = std::move(trajectory);
  const double final_s = squeezing_parameter(chirp.state);
  const double delta_jz = std::sqrt(final_s * N);
  rep.metrics["duration"] = schedule.duration();
  rep.metrics["segments"] = double(n - 1);
  rep.metrics["initial_s"] = initial_s;
  rep.metrics["final_s"] = final_s;
  rep.metrics["final_db"] = decibel_gain(N, delta_jz);
  rep.metrics["max_leakage"] = max_leakage;
  rep.metrics["max_energy_deviation"] = max_energy_dev;
  rep.metrics["chirp_residual"] = chirp.residual;
  rep.metrics["chirp_too_fast"] = chirp.too_fast ? 1.0 : 0.0;
  rep.metrics["compensated"] = opts.compensate ? 1.0 : 0.0;
  check_metrics_finite(rep);
  return rep;
}

ProtocolReport adiabatic_squeeze_run(const HilbertSpace& space,
                                     const Schedule& schedule,
                                     bool compensate) {
  AdiabaticRunOptions o;
  o.compensate = compensate;
  return adiabatic_squeeze_run(space, schedule, o);
}

double cat_pulse_duration(int atoms) {
  if (atoms < 2) throw std::domain_error("cat_pulse_duration: need >= 2 atoms");
  const double m = (atoms % 2 == 0) ? atoms : atoms - 1;
  return kPi * std::sqrt(0.5 * m);
}

double cat_merge_duration(int atoms) {
  if (atoms < 2) throw std::domain_error("cat_merge_duration: need >= 2 atoms");
  const double m = (atoms % 2 == 0) ? atoms : atoms - 1;
  return kPi * std::sqrt(2.0 / m);
}

ProtocolReport cat_generate(const HilbertSpace& space) {
  const int N = space.atoms();
  const double tau = cat_pulse_duration(N);
  const double tau0 = cat_merge_duration(N);
  // The splitting pulse leaves each surviving ground component paired with
  // one Rydberg-excited partner in an equal superposition of relative phase
  // -i (see cat_pulse_approx).  A quarter of the nominal merge period with
  // inverted drive phase rotates every pair onto its ground member; a full
  // period would only bring each pair back to where it started.
  const double merge_time = 0.25 * tau0;
  StateVector psi = spin_coherent_state(space, 0.5 * kPi, 0.0);
  psi = propagate_const(psi, jc_coupling(space, 1, GroundMode::a, 1.0), tau);
  psi = propagate_const(psi, jc_coupling(space, 1, GroundMode::b, -1.0),
                        merge_time);

  const EigenSystem jx = eigendecompose(collective_spin(space, SpinAxis::x));
  const EigenSystem jy = eigendecompose(collective_spin(space, SpinAxis::y));
  const Eigen::VectorXd z = jz_diagonal(space);
  auto objective = [&](double phi) {
    return z_variance(z, propagate_raw(jy, psi.amplitudes(), -phi));
  };
  auto odd_at = [&](double phi) {
    StateVector rotated(space, propagate_raw(jy, psi.amplitudes(), -phi));
    return parity_weights(rotated).odd;
  };
  // Var(Jz) is nearly flat around its optimum while the odd parity weight
  // oscillates rapidly with the rotation angle (the two superposed components
  // accumulate relative phase ~N*phi), so the squeezed view takes, among the
  // angles that keep the variance within half a percent of its minimum, the
  // one with the cleanest parity.
  const AnglePick pick = minimize_angle(objective);
  const double ceiling = 1.005 * pick.value;
  const double probe = 0.002;
  double lo = pick.angle;
  double hi = pick.angle;
  while (pick.angle - lo < 0.3 && objective(lo - probe) <= ceiling) lo -= probe;
  while (hi - pick.angle < 0.3 && objective(hi + probe) <= ceiling) hi += probe;
  const int samples = 121;
  double phi_star = pick.angle;
  double best_odd = odd_at(phi_star);
  for (int k = 0; k < samples; ++k) {
    const double phi = lo + (hi - lo) * k / (samples - 1);
    const double v = odd_at(phi);
    if (v < best_odd) {
      best_odd = v;
      phi_star = phi;
    }
  }
  const double cell = (hi - lo) / (samples - 1);
  phi_star = golden_min(odd_at, phi_star - cell, phi_star + cell, 1e-5);
  phi_star = std::fmod(phi_star, kPi);
  if (phi_star < 0.0) phi_star += kPi;
  StateVector squeezed(space, propagate_raw(jy, psi.amplitudes(), -phi_star));
  StateVector antisqueezed(
      space, propagate_raw(jy, psi.amplitudes(), -(phi_star + 0.5 * kPi)));

  ProtocolReport rep(psi);
  rep.views.emplace("rot_x_half_pi",
                    StateVector(space, propagate_raw(jx, psi.amplitudes(),
                                                     -0.5 * kPi)));
  rep.views.emplace("rot_y_half_pi",
                    StateVector(space, propagate_raw(jy, psi.amplitudes(),
                                                     -0.5 * kPi)));
  rep.views.emplace("squeezed", squeezed);
  rep.views.emplace("antisqueezed", antisqueezed);

  const ParityWeights parity = parity_weights(psi);
  const ParityWeights squeezed_parity = parity_weights(squeezed);
  rep.metrics["tau"] = tau;
  rep.metrics["tau0"] = tau0;
  rep.metrics["merge_time"] = merge_time;
  rep.metrics["parity_even"] = parity.even;
  rep.metrics["parity_odd"] = parity.odd;
  rep.metrics["rydberg_population"] = rydberg_population(psi);
  rep.metrics["rotation_angle"] = phi_star;
  rep.metrics["squeezed_parity_odd"] = squeezed_parity.odd;
  rep.metrics["squeezed_s"] = objective(phi_star) / N;
  check_metrics_finite(rep);
  return rep;
}

StateVector cat_pulse_approx(const HilbertSpace& space, int delta_n) {
  return StateVector(space, cat_pulse_image(space, delta_n));
}

StateVector cat_pulse_approx_superposition(
    const HilbertSpace& space,
    const std::vector<std::pair<int, std::complex<double>>>& weights) {
  if (weights.empty()) {
    throw std::domain_error(
        "cat_pulse_approx_superposition: empty weight list");
  }
  Eigen::VectorXcd v = Eigen::VectorXcd::Zero(space.dim());
  for (const auto& [dn, w] : weights) {
    v += w * cat_pulse_image(space, dn);
  }
  return StateVector(space, std::move(v));
}

}  // namespace rydsim
