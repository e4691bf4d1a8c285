// Adiabatic-passage machinery: the interpolating control Hamiltonian
// f1 Jx + f2 H_JC, its spectrum along the passage, continuity-tracked
// extremal eigenstates, the exact counterdiabatic correction, its
// least-squares projection onto the two available control operators, and
// greedy generation of quasi-adiabatic schedules.
#pragma once

#include <vector>

#include "rydsim/evolve.hpp"
#include "rydsim/operators.hpp"

namespace rydsim {

// The four control operators of the passage, built once per space:
//   h_jc         = jc(1,a,1) + jc(2,b,1)      (resonant drive)
//   h_jc_y       = jc(1,a,i) + jc(2,b,i)      (y-phase drive)
//   h_jc_y_cross = jc(1,b,i) + jc(2,a,i)      (y-phase crossed drive)
struct ControlSet {
  const HilbertSpace* space;
  HermitianOperator jx;
  HermitianOperator h_jc;
  HermitianOperator h_jc_y;
  HermitianOperator h_jc_y_cross;

  explicit ControlSet(const HilbertSpace& s);
};

// f1 Jx + f2 H_JC + alpha1 H_JC^(y) + alpha2 H_JC^(y,cross).
HermitianOperator combined_hamiltonian(const ControlSet& controls, double f1,
                                       double f2, double alpha1, double alpha2);
HermitianOperator combined_hamiltonian(const HilbertSpace& space, double f1,
                                       double f2, double alpha1, double alpha2);

// Ascending eigenvalues of x H_JC + (1-x) Jx for each grid point x in [0,1].
struct SpectrumTable {
  std::vector<double> x;
  Eigen::MatrixXd levels;  // row i: eigenvalues at x[i], ascending
};
SpectrumTable spectrum_scan(const HilbertSpace& space,
                            const std::vector<double>& x_grid);

enum class Branch { min, max };

// Extremal eigenpair of one decomposition, with continuity handling: when
// the extremal level is degenerate within cluster_tol (relative to the
// spectral scale), the previous vector is projected onto the degenerate
// eigenspace instead of trusting the solver's arbitrary basis choice.
struct ExtremalPick {
  double energy;
  Eigen::VectorXcd vector;
  bool degenerate;
};
ExtremalPick pick_extremal(const EigenSystem& eig, Branch branch,
                           const Eigen::VectorXcd* previous,
                           double cluster_tol = 1e-9);

struct TrackedEigenstate {
  double t;
  double energy;
  Eigen::VectorXcd vector;
  bool degenerate_cluster;
};

// Extremal eigenstate of H0(t) = f1(t) Jx + f2(t) H_JC at every sample time
// of the schedule, gauge-fixed so consecutive overlaps are real positive.
std::vector<TrackedEigenstate> tracked_extremal_state(const HilbertSpace& space,
                                                      const Schedule& schedule,
                                                      Branch branch,
                                                      double cluster_tol = 1e-9);

// Exact transitionless correction for dH0/dt = f1dot Jx + f2dot H_JC:
//   H1 = i sum_{m != n} |m><m| dH0 |n><n| / (E_n - E_m),
// built in the eigenbasis of the instantaneous H0 (eig).  Level pairs closer
// than degeneracy_tol (absolute energy) are skipped and counted.
struct CounterdiabaticTerm {
  HermitianOperator op;
  int skipped_pairs;
};
CounterdiabaticTerm counterdiabatic_term(const ControlSet& controls,
                                         double f1dot, double f2dot,
                                         const EigenSystem& eig,
                                         double degeneracy_tol);

// Least-squares weights minimizing <(a1 Hy + a2 Hc - H1)^2> in psi0.  When
// the two controls act (near-)identically on psi0 the normal equations are
// singular; that case returns (0,0) with degenerate_dictionary set.
struct CompensationAlphas {
  double alpha1;
  double alpha2;
  bool degenerate_dictionary;
};
CompensationAlphas compensation_alphas(const StateVector& psi0,
                                       const HermitianOperator& h1,
                                       const HermitianOperator& hy,
                                       const HermitianOperator& hycross);
// Same, given the action h1|psi0> instead of the full operator.
CompensationAlphas compensation_alphas_from_action(
    const Eigen::VectorXcd& psi0, const Eigen::VectorXcd& h1_psi0,
    const HermitianOperator& hy, const HermitianOperator& hycross);

struct GreedyOptions {
  double f2_max = 1.0;
  double leakage_tol = 1e-3;  // allowed 1 - |<psi0(t)|psi(t)>|^2
  double dt = 0.05;           // fixed segment length
  bool compensate = true;
  double backoff = 0.5;   // move shrink factor on a rejected step
  double growth = 1.5;    // move growth factor after an accepted step
  // Fraction of the leakage budget targeted by the speed cap, and below
  // which an accepted move may grow again.  The cumulative leakage signal
  // lags the ramp speed by a full precession period of the tracked gap, so
  // trial-and-error alone always overshoots: the proposal is capped by the
  // first-order response of the spectrum at the committed point, and the
  // measured leakage only guards the neglected higher orders.  Riding at a
  // quarter of the budget leaves that guard real headroom, because leakage
  // banked by past speed changes never damps.
  double ride_band = 0.25;
  double max_move = 0.05;          // cap on the parameter move per segment
  double underflow_factor = 1e-6;  // abort when move < dt * this
  double degeneracy_tol = 1e-9;    // relative, for clusters and H1 pairs
};

// Greedy quasi-adiabatic schedule (1,0) -> (0, f2_max): per fixed-dt segment
// the largest parameter move keeping the instantaneous leakage below
// leakage_tol, ramping f2 up first and then f1 down.  With compensate set,
// each segment carries the least-squares alpha weights for its own ramp
// rate.  Throws std::runtime_error on step-size underflow.
Schedule greedy_schedule(const HilbertSpace& space, const GreedyOptions& opts);
Schedule greedy_schedule(const HilbertSpace& space, double f2_max,
                         double leakage_tol, double dt, bool compensate);

}  // namespace rydsim
