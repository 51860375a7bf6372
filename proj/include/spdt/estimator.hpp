#pragma once

#include <cstdint>
#include <vector>

#include "spdt/core.hpp"

namespace spdt {

// Empirical co-located interaction parameter samples, the material the four
// estimators run on. Durations and delays are in seconds; frequencies are
// activations per user per day averaged over the observation window.
struct CipSamples {
  std::vector<double> active_durations;
  std::vector<double> activation_frequencies;
  std::vector<std::int64_t> degrees;
  std::vector<double> creation_delays;
  std::vector<double> creation_delay_durations;  // owning t_a, parallel to creation_delays
  std::vector<double> link_durations;
  int observation_days = 0;
  double delta_sec = 10800.0;

  // Throws std::invalid_argument on the first violated invariant.
  void validate() const;
};

// Extracts CIP samples from a (typically synthetic) graph: one t_a per copy,
// one frequency per node (copies per day; a copy starting at step 0 is not
// counted as an activation event), one degree per copy with >= 1 link, and
// one (t_c, t_d) pair per link. Requires a day-aligned horizon.
CipSamples cip_from_graph(const TemporalGraph& g);

// Seconds -> steps for durations: a positive span shorter than one step
// still occupies one step.
Step duration_to_steps(double seconds, int step_seconds);
// Seconds -> steps for delays: zero stays zero.
Step delay_to_steps(double seconds, int step_seconds);

// Geometric MLE: rho_step = n / sum(t_a in steps), returned per second.
double estimate_rho(const std::vector<double>& active_durations_sec, int step_seconds);

// Closed-form inversion of z q rho / (q + rho) = mean total activations,
// where z = observation_days * steps per day. Inputs and output per second.
double estimate_q(const std::vector<double>& activation_frequencies, double rho_per_sec,
                  int observation_days, int step_seconds);

struct PowerLawFit {
  double alpha = 0.0;
  double xi = 0.0;
  double log_likelihood = 0.0;
  bool at_boundary = false;  // optimizer ended pinned to the search box
  int evaluations = 0;
};

// Maximizes the mixture-degree log likelihood over alpha in (0.5, 10) and
// xi in (0.01, 0.99) by a coarse grid followed by Nelder-Mead. Warns on
// stderr below 1000 samples and when the optimum sits on the box boundary.
PowerLawFit estimate_power_law(const std::vector<std::int64_t>& degrees);

// Solves the truncated-geometric score equation for p_c by bisection over
// per-step probabilities in [1e-8, 1 - 1e-8]; window T = t_a + delta per
// sample. If the score does not change sign the likelihood is monotone and
// the nearer bracket end is returned with a warning. Output per second.
double estimate_pc(const std::vector<double>& creation_delays_sec,
                   const std::vector<double>& paired_durations_sec,
                   double delta_sec, int step_seconds);

// Runs all four estimators; p_b = rho, eta = 1, psi = 0.999, delta from the
// samples. The assembled parameter set is validated before being returned.
SpdtParams fit_all(const CipSamples& cip, int step_seconds);

}  // namespace spdt
