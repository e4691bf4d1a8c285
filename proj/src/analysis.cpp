#include "rydsim/analysis.hpp"

#include <cmath>
#include <complex>
#include <stdexcept>
#include <string>

namespace rydsim {

namespace {

// Jz eigenvalue (n_a - n_b)/2 per basis index.
Eigen::VectorXd half_number_difference(const HilbertSpace& space) {
  Eigen::VectorXd z(space.dim());
  for (int i = 0; i < space.dim(); ++i) {
    const BasisState& s = space.state_at(i);
    z(i) = 0.5 * (s.n_a - s.n_b);
  }
  return z;
}

}  // namespace

double squeezing_parameter(const StateVector& state) {
  const Eigen::VectorXd z = half_number_difference(state.space());
  const Eigen::VectorXd p = state.amplitudes().cwiseAbs2();
  const double mean = p.dot(z);
  const double second = p.dot(z.cwiseProduct(z));
  const double var = std::max(0.0, second - mean * mean);
  return var / state.space().atoms();
}

Histogram population_histogram(const StateVector& state,
                               PopulationBlock block) {
  const HilbertSpace& space = state.space();
  const int N = space.atoms();
  Histogram h;
  h.bins.resize(static_cast<size_t>(N) + 1);
  for (int n_a = 0; n_a <= N; ++n_a) {
    h.bins[static_cast<size_t>(n_a)] = {n_a, 0.0};
  }
  double weight = 0.0;
  for (int i = 0; i < space.dim(); ++i) {
    const BasisState& s = space.state_at(i);
    if (block == PopulationBlock::ground_only && (s.n_r1 || s.n_r2)) continue;
    const double p = std::norm(state.amplitudes()(i));
    h.bins[static_cast<size_t>(s.n_a)].probability += p;
    weight += p;
  }
  h.block_weight = weight;
  if (block == PopulationBlock::ground_only) {
    if (weight < 1e-12) {
      throw std::domain_error(
          "population_histogram: ground block carries no weight");
    }
    for (auto& bin : h.bins) bin.probability /= weight;
  }
  return h;
}

ParityWeights parity_weights(const StateVector& state) {
  const int N = state.space().atoms();
  const int center = (N % 2 == 0) ? N / 2 : (N - 1) / 2;
  const Histogram h =
      population_histogram(state, PopulationBlock::ground_only);
  ParityWeights w{0.0, 0.0};
  for (const auto& bin : h.bins) {
    if (std::abs(bin.n_a - center) % 2 == 0) {
      w.even += bin.probability;
    } else {
      w.odd += bin.probability;
    }
  }
  return w;
}

double rydberg_population(const StateVector& state) {
  const HilbertSpace& space = state.space();
  double p = 0.0;
  for (int i = 0; i < space.dim(); ++i) {
    const BasisState& s = space.state_at(i);
    if (s.n_r1 || s.n_r2) p += std::norm(state.amplitudes()(i));
  }
  return p;
}

QGrid q_function(const StateVector& state, int polar_samples,
                 int azimuth_samples) {
  if (polar_samples < 2 || azimuth_samples < 2) {
    throw std::domain_error("q_function: need at least 2 samples per axis");
  }
  const HilbertSpace& space = state.space();
  const int N = space.atoms();

  // Renormalized ground-block amplitudes indexed by n_a.
  Eigen::VectorXcd g(N + 1);
  for (int n_a = 0; n_a <= N; ++n_a) {
    g(n_a) = state.amplitude(BasisState{n_a, N - n_a, 0, 0});
  }
  const double weight = g.squaredNorm();
  if (weight < 1e-12) {
    throw std::domain_error("q_function: ground block carries no weight");
  }
  g /= std::sqrt(weight);

  QGrid grid;
  grid.polar_samples = polar_samples;
  grid.azimuth_samples = azimuth_samples;
  grid.ground_weight = weight;
  grid.values.resize(polar_samples, azimuth_samples);

  const double pi = std::acos(-1.0);
  Eigen::VectorXd mag(N + 1);
  for (int it = 0; it < polar_samples; ++it) {
    const double theta = pi * it / (polar_samples - 1);
    const double c = std::cos(0.5 * theta);
    const double s = std::sin(0.5 * theta);
    for (int n_a = 0; n_a <= N; ++n_a) {
      const int n_b = N - n_a;
      if ((c == 0.0 && n_a > 0) || (s == 0.0 && n_b > 0)) {
        mag(n_a) = 0.0;
        continue;
      }
      double log_mag = 0.5 * (std::lgamma(N + 1.0) - std::lgamma(n_a + 1.0) -
                              std::lgamma(n_b + 1.0));
      if (n_a > 0) log_mag += n_a * std::log(c);
      if (n_b > 0) log_mag += n_b * std::log(s);
      mag(n_a) = std::exp(log_mag);
    }
    for (int ip = 0; ip < azimuth_samples; ++ip) {
      const double phi = 2.0 * pi * ip / azimuth_samples;
      std::complex<double> acc = 0.0;
      for (int n_a = 0; n_a <= N; ++n_a) {
        // <SCS| conjugates the e^{i phi n_b} phase of the coherent state.
        acc += mag(n_a) * std::polar(1.0, -phi * (N - n_a)) * g(n_a);
      }
      grid.values(it, ip) = std::norm(acc);
    }
  }
  return grid;
}

}  // namespace rydsim
