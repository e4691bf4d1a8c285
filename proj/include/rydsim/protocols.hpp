// End-to-end procedures on the blockaded ensemble: dressed-state
// initialization, dynamic squeezing under the resonant JC drive, chirped
// de-excitation, quasi-adiabatic squeezing runs with counterdiabatic
// compensation, and Schroedinger-cat generation with its second-order
// analytic predictor.
#pragma once

#include <complex>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "rydsim/adiabatic.hpp"
#include "rydsim/evolve.hpp"
#include "rydsim/hilbert.hpp"
#include "rydsim/operators.hpp"

namespace rydsim {

enum class PrepMode { ideal, pulsed };
enum class PipelineOrder { rotate_then_chirp, chirp_then_rotate };

// Initialization in the upper dressed branch of the squeezing drive.
//   ideal: the analytic superposition of +,+ dressed states weighted by the
//          +x spin-coherent amplitudes.
//   pulsed: quarter-Rabi-period excitation pulses (coupling phase i, so the
//           produced superpositions are + eigenvectors of the real drive)
//           on levels 1 and 2 in sequence, starting from the +x coherent
//           state; slightly imperfect away from the mean occupation.
struct PreparedState {
  StateVector state;
  double fidelity_to_ideal;  // 1 for ideal mode
};
PreparedState prepare_dressed_init(const HilbertSpace& space, PrepMode mode);

struct ChirpOptions {
  double delta_max = 20.0;   // final detuning magnitude, |Omega_JC| units
  double ramp_time = 50.0;   // linear ramp duration
  double dt = 0.1;           // piecewise-constant step (midpoint sampling)
  double coupling = 1.0;     // JC drive amplitude held during the ramp
  double residual_warn = 0.05;  // pre-projection residual flag threshold
};

struct ChirpResult {
  StateVector state;  // projected onto the ground block and renormalized
  double residual;    // pre-projection Rydberg population
  bool too_fast;      // residual exceeded residual_warn
};

// Evolves under coupling*H_JC + delta(t)(sigma_z1 + sigma_z2) with delta
// ramped linearly from 0 to -delta_max (the sign that carries the upper
// dressed branch into the Rydberg-empty block), then projects out the
// residual Rydberg amplitude.
ChirpResult chirp_deexcite(const StateVector& state, const ChirpOptions& opts);
ChirpResult chirp_deexcite(const StateVector& state, double delta_max,
                           double ramp_time);

struct TrajectoryMetrics {
  double t;
  double s_value;            // squeezing parameter after a virtual chirp
  double leakage;            // 1 - |<tracked|psi>|^2
  double energy_mean;        // <H0(t)>
  double energy_extremal;    // tracked extremal eigenvalue of H0(t)
  double rydberg_population; // before the virtual chirp
};

struct ProtocolReport {
  StateVector final_state;
  std::vector<TrajectoryMetrics> trajectory;
  std::map<std::string, double> metrics;
  std::map<std::string, StateVector> views;

  explicit ProtocolReport(StateVector s) : final_state(std::move(s)) {}
};

struct DynamicOptions {
  double evolve_time = -1.0;  // required unless optimize
  bool optimize = false;      // scan the evolution time around its optimum
  PrepMode prep = PrepMode::ideal;
  // Default order de-excites before rotating: an instantaneous collective
  // rotation scrambles the dressed manifold across all four chirp branches
  // (only one of which returns to the ground block), whereas after the chirp
  // the rotation acts within the ground block and merely aligns the squeezed
  // quadrature.  The other order stays available for comparison.
  PipelineOrder order = PipelineOrder::chirp_then_rotate;
  ChirpOptions chirp;
};

// prepare -> evolve under H_JC -> rotate about x (angle minimizing the final
// Var(Jz)) -> chirp, with the last two steps in the configured order.  With
// optimize set, the evolution time is scanned (coarse grid + golden-section
// refinement) against the true end-of-pipeline variance; the scan curve is
// returned as the trajectory (t = candidate time, s_value = resulting S,
// rydberg_population = chirp residual).
ProtocolReport dynamic_squeeze(const HilbertSpace& space,
                               const DynamicOptions& opts);
ProtocolReport dynamic_squeeze(const HilbertSpace& space, double evolve_time,
                               bool optimize);

struct AdiabaticRunOptions {
  bool compensate = true;     // apply the schedule's alpha terms
  ChirpOptions chirp;         // chirp settings for S(t) and the final state
  int max_metric_samples = 400;  // trajectory decimation (evolution is exact)
};

// Propagates the +x coherent state through the schedule (alphas included
// only when compensating) and records, at decimated sample times, the
// energy tracking, leakage against the tracked extremal state, Rydberg
// population, and the squeezing parameter after a virtual chirp whose drive
// amplitude is the instantaneous f2.  The final state has the full chirp
// applied.
ProtocolReport adiabatic_squeeze_run(const HilbertSpace& space,
                                     const Schedule& schedule,
                                     const AdiabaticRunOptions& opts);
ProtocolReport adiabatic_squeeze_run(const HilbertSpace& space,
                                     const Schedule& schedule, bool compensate);

// Cat-pulse durations: the superposition-forming drive time tau and the
// merging pulse time tau0 (even/odd atom numbers use N or N-1).
double cat_pulse_duration(int atoms);
double cat_merge_duration(int atoms);

// +x coherent state -> jc(1,a,1) for tau -> jc(1,b,1) for tau0.  Reports
// parity weights, residual Rydberg population, and the analysis rotations:
// views "rot_x_half_pi", "rot_y_half_pi", "squeezed" (y-rotation by the
// variance-minimizing angle phi*), "antisqueezed" (phi* + pi/2).
ProtocolReport cat_generate(const HilbertSpace& space);

// Second-order image of |n_half+delta_n, ..., 0> under the tau pulse, where
// n_half = N/2 (even N) or (N-1)/2 (odd N): the four sign/admixture cases
// of the perturbative expansion, normalized.
StateVector cat_pulse_approx(const HilbertSpace& space, int delta_n);
// Image of a weighted superposition sum_dn a_dn |n_half+dn, ..., 0>.
StateVector cat_pulse_approx_superposition(
    const HilbertSpace& space,
    const std::vector<std::pair<int, std::complex<double>>>& weights);

}  // namespace rydsim
