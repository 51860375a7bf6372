#include "spdt/estimator.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <map>
#include <stdexcept>
#include <string>

#include "spdt/distributions.hpp"

namespace spdt {

void CipSamples::validate() const {
  auto fail = [](const std::string& what) { throw std::invalid_argument("CipSamples: " + what); };
  for (double t : active_durations)
    if (!(t > 0.0)) fail("active durations must be > 0");
  for (double h : activation_frequencies)
    if (!(h >= 0.0)) fail("activation frequencies must be >= 0");
  for (std::int64_t d : degrees)
    if (d < 1) fail("degrees must be >= 1");
  if (creation_delays.size() != creation_delay_durations.size())
    fail("creation delays and their paired durations must align");
  for (std::size_t i = 0; i < creation_delays.size(); ++i) {
    if (!(creation_delays[i] >= 0.0)) fail("creation delays must be >= 0");
    if (creation_delays[i] > creation_delay_durations[i] + delta_sec)
      fail("creation delay exceeds paired duration + delta");
  }
  for (double t : link_durations)
    if (!(t > 0.0)) fail("link durations must be > 0");
  if (observation_days < 1) fail("observation_days must be >= 1");
  if (!(delta_sec >= 0.0)) fail("delta_sec must be >= 0");
}

Step duration_to_steps(double seconds, int step_seconds) {
  if (!(seconds > 0.0)) throw std::invalid_argument("duration_to_steps: duration must be > 0");
  const Step steps = static_cast<Step>(std::ceil(seconds / step_seconds));
  return steps < 1 ? 1 : steps;
}

Step delay_to_steps(double seconds, int step_seconds) {
  if (!(seconds >= 0.0)) throw std::invalid_argument("delay_to_steps: delay must be >= 0");
  return static_cast<Step>(std::ceil(seconds / step_seconds));
}

CipSamples cip_from_graph(const TemporalGraph& g) {
  const double day_span = static_cast<double>(g.horizon) * g.step_seconds / 86400.0;
  const auto observation_days = static_cast<int>(std::llround(day_span));
  if (observation_days < 1 || std::fabs(day_span - observation_days) > 1e-9)
    throw std::invalid_argument("cip_from_graph: horizon must cover a whole number of days");

  CipSamples cip;
  cip.observation_days = observation_days;
  cip.delta_sec = static_cast<double>(g.delta_steps) * g.step_seconds;

  const std::vector<std::size_t> offsets = g.copy_link_offsets();
  std::vector<double> activations(g.n_nodes, 0.0);
  cip.active_durations.reserve(g.copies.size());
  cip.degrees.reserve(g.copies.size());
  for (std::size_t c = 0; c < g.copies.size(); ++c) {
    const ActiveCopy& copy = g.copies[c];
    cip.active_durations.push_back(static_cast<double>(copy.t_l - copy.t_s) * g.step_seconds);
    // A copy already active at step 0 was not observed starting.
    if (copy.t_s > 0) activations[copy.host] += 1.0;
    const std::size_t degree = offsets[c + 1] - offsets[c];
    if (degree > 0) cip.degrees.push_back(static_cast<std::int64_t>(degree));
  }
  cip.activation_frequencies.resize(g.n_nodes);
  for (NodeId v = 0; v < g.n_nodes; ++v)
    cip.activation_frequencies[v] = activations[v] / day_span;

  cip.creation_delays.reserve(g.links.size());
  cip.creation_delay_durations.reserve(g.links.size());
  cip.link_durations.reserve(g.links.size());
  for (const SpdtLink& link : g.links) {
    const ActiveCopy& copy = g.copies[link.copy_index];
    cip.creation_delays.push_back(static_cast<double>(link.t_s_prime - copy.t_s) * g.step_seconds);
    cip.creation_delay_durations.push_back(static_cast<double>(copy.t_l - copy.t_s) * g.step_seconds);
    cip.link_durations.push_back(static_cast<double>(link.t_l_prime - link.t_s_prime) * g.step_seconds);
  }
  return cip;
}

double estimate_rho(const std::vector<double>& active_durations_sec, int step_seconds) {
  if (active_durations_sec.empty())
    throw std::invalid_argument("estimate_rho: need at least one active duration");
  if (step_seconds <= 0) throw std::invalid_argument("estimate_rho: step_seconds must be > 0");
  double total_steps = 0.0;
  for (double t : active_durations_sec)
    total_steps += static_cast<double>(duration_to_steps(t, step_seconds));
  const double rho_step = static_cast<double>(active_durations_sec.size()) / total_steps;
  return rho_step / step_seconds;
}

double estimate_q(const std::vector<double>& activation_frequencies, double rho_per_sec,
                  int observation_days, int step_seconds) {
  if (activation_frequencies.empty())
    throw std::invalid_argument("estimate_q: need at least one frequency");
  if (observation_days < 1) throw std::invalid_argument("estimate_q: observation_days must be >= 1");
  const double rho_step = per_step_probability(rho_per_sec, step_seconds);
  const double z = static_cast<double>(observation_days) * 86400.0 / step_seconds;

  double mean_total = 0.0;  // mean activations per user over the whole window
  for (double h : activation_frequencies) mean_total += h * observation_days;
  mean_total /= static_cast<double>(activation_frequencies.size());

  if (!(mean_total < z * rho_step))
    throw std::runtime_error(
        "estimate_q: mean activation count " + std::to_string(mean_total) +
        " is inconsistent with rho (upper bound " + std::to_string(z * rho_step) + ")");
  if (mean_total <= 0.0) return 0.0;
  const double q_step = rho_step * mean_total / (z * rho_step - mean_total);
  return q_step / step_seconds;
}

namespace {

struct DegreeCounts {
  std::vector<std::int64_t> values;
  std::vector<double> counts;
};

double mixture_log_likelihood(const DegreeCounts& data, double alpha, double xi) {
  double ll = 0.0;
  for (std::size_t i = 0; i < data.values.size(); ++i) {
    double p = mixture_degree_pmf(data.values[i], alpha, xi);
    if (!(p > 1e-300)) p = 1e-300;
    ll += data.counts[i] * std::log(p);
  }
  return ll;
}

constexpr double kAlphaLo = 0.5, kAlphaHi = 10.0;
constexpr double kXiLo = 0.01, kXiHi = 0.99;

std::array<double, 2> clamp_to_box(std::array<double, 2> pt) {
  pt[0] = std::min(std::max(pt[0], kAlphaLo + 1e-9), kAlphaHi - 1e-9);
  pt[1] = std::min(std::max(pt[1], kXiLo + 1e-9), kXiHi - 1e-9);
  return pt;
}

}  // namespace

PowerLawFit estimate_power_law(const std::vector<std::int64_t>& degrees) {
  if (degrees.empty()) throw std::invalid_argument("estimate_power_law: empty sample");
  if (degrees.size() < 1000)
    std::fprintf(stderr, "estimate_power_law: warning: only %zu samples (< 1000), fit may be unstable\n",
                 degrees.size());

  DegreeCounts data;
  {
    std::map<std::int64_t, double> counts;
    for (std::int64_t d : degrees) {
      if (d < 1) throw std::invalid_argument("estimate_power_law: degrees must be >= 1");
      counts[d] += 1.0;
    }
    for (const auto& [value, count] : counts) {
      data.values.push_back(value);
      data.counts.push_back(count);
    }
  }

  int evaluations = 0;
  auto objective = [&](const std::array<double, 2>& pt) {
    ++evaluations;
    return -mixture_log_likelihood(data, pt[0], pt[1]);  // minimized
  };

  // Coarse grid seed.
  std::array<double, 2> best{2.0, 0.3};
  double best_f = objective(best);
  for (double alpha = 0.7; alpha < 9.8; alpha += 0.45) {
    for (double xi = 0.03; xi < 0.98; xi += 0.05) {
      const std::array<double, 2> pt{alpha, xi};
      const double f = objective(pt);
      if (f < best_f) { best_f = f; best = pt; }
    }
  }

  // Nelder-Mead, candidates clamped into the search box.
  std::array<std::array<double, 2>, 3> simplex{
      clamp_to_box(best),
      clamp_to_box({best[0] + 0.25, best[1]}),
      clamp_to_box({best[0], best[1] + 0.04}),
  };
  std::array<double, 3> f{objective(simplex[0]), objective(simplex[1]), objective(simplex[2])};

  const int max_iterations = 600;
  int iteration = 0;
  for (; iteration < max_iterations; ++iteration) {
    // Order ascending by objective.
    std::array<int, 3> order{0, 1, 2};
    std::sort(order.begin(), order.end(), [&](int a, int b) { return f[a] < f[b]; });
    const std::array<std::array<double, 2>, 3> s{simplex[order[0]], simplex[order[1]], simplex[order[2]]};
    const std::array<double, 3> fs{f[order[0]], f[order[1]], f[order[2]]};
    simplex = s;
    f = fs;

    const double spread = std::fabs(f[2] - f[0]);
    const double size = std::fabs(simplex[0][0] - simplex[2][0]) + std::fabs(simplex[0][1] - simplex[2][1]) +
                        std::fabs(simplex[1][0] - simplex[2][0]) + std::fabs(simplex[1][1] - simplex[2][1]);
    if (spread < 1e-11 && size < 1e-9) break;

    const std::array<double, 2> centroid{(simplex[0][0] + simplex[1][0]) / 2.0,
                                         (simplex[0][1] + simplex[1][1]) / 2.0};
    auto affine = [&](double t) {
      return clamp_to_box({centroid[0] + t * (centroid[0] - simplex[2][0]),
                           centroid[1] + t * (centroid[1] - simplex[2][1])});
    };

    const std::array<double, 2> reflected = affine(1.0);
    const double f_reflected = objective(reflected);
    if (f_reflected < f[0]) {
      const std::array<double, 2> expanded = affine(2.0);
      const double f_expanded = objective(expanded);
      if (f_expanded < f_reflected) { simplex[2] = expanded; f[2] = f_expanded; }
      else { simplex[2] = reflected; f[2] = f_reflected; }
      continue;
    }
    if (f_reflected < f[1]) { simplex[2] = reflected; f[2] = f_reflected; continue; }
    const std::array<double, 2> contracted = affine(f_reflected < f[2] ? 0.5 : -0.5);
    const double f_contracted = objective(contracted);
    if (f_contracted < std::min(f_reflected, f[2])) { simplex[2] = contracted; f[2] = f_contracted; continue; }
    // Shrink toward the best vertex.
    for (int i = 1; i < 3; ++i) {
      simplex[i] = clamp_to_box({(simplex[0][0] + simplex[i][0]) / 2.0,
                                 (simplex[0][1] + simplex[i][1]) / 2.0});
      f[i] = objective(simplex[i]);
    }
  }
  if (iteration == max_iterations)
    throw std::runtime_error("estimate_power_law: optimizer failed to converge; last iterate alpha=" +
                             std::to_string(simplex[0][0]) + " xi=" + std::to_string(simplex[0][1]));

  PowerLawFit fit;
  fit.alpha = simplex[0][0];
  fit.xi = simplex[0][1];
  fit.log_likelihood = -f[0];
  fit.evaluations = evaluations;
  fit.at_boundary = fit.alpha < kAlphaLo + 1e-3 || fit.alpha > kAlphaHi - 1e-3 ||
                    fit.xi < kXiLo + 1e-3 || fit.xi > kXiHi - 1e-3;
  if (fit.at_boundary)
    std::fprintf(stderr, "estimate_power_law: warning: optimum pinned to search boundary (alpha=%.4f xi=%.4f)\n",
                 fit.alpha, fit.xi);
  return fit;
}

namespace {

// Score (d/dp of the log likelihood) of truncated-geometric delay samples,
// aggregated as count l, total delay sum_t, and a histogram over windows T.
double pc_score(double p, double l, double sum_t,
                const std::vector<std::pair<Step, double>>& window_hist) {
  const double log1mp = std::log1p(-p);
  double score = l / p - sum_t / (1.0 - p);
  for (const auto& [window, count] : window_hist) {
    const double pow_t = std::exp(static_cast<double>(window) * log1mp);       // (1-p)^T
    const double z = -std::expm1(static_cast<double>(window + 1) * log1mp);    // 1-(1-p)^(T+1)
    score -= count * static_cast<double>(window + 1) * pow_t / z;
  }
  return score;
}

}  // namespace

double estimate_pc(const std::vector<double>& creation_delays_sec,
                   const std::vector<double>& paired_durations_sec,
                   double delta_sec, int step_seconds) {
  if (creation_delays_sec.empty())
    throw std::invalid_argument("estimate_pc: need at least one delay");
  if (creation_delays_sec.size() != paired_durations_sec.size())
    throw std::invalid_argument("estimate_pc: delays and paired durations must align");
  if (step_seconds <= 0) throw std::invalid_argument("estimate_pc: step_seconds must be > 0");
  const Step delta_steps = delta_to_steps(delta_sec, step_seconds);

  double sum_t = 0.0;
  std::map<Step, double> windows;
  for (std::size_t i = 0; i < creation_delays_sec.size(); ++i) {
    const Step window = duration_to_steps(paired_durations_sec[i], step_seconds) + delta_steps;
    Step delay = delay_to_steps(creation_delays_sec[i], step_seconds);
    // Rounding of a non-step-aligned delta can push a boundary delay one
    // step past its window; clamp rather than reject.
    if (delay > window) delay = window;
    sum_t += static_cast<double>(delay);
    windows[window] += 1.0;
  }
  std::vector<std::pair<Step, double>> window_hist(windows.begin(), windows.end());
  const double l = static_cast<double>(creation_delays_sec.size());

  double lo = 1e-8, hi = 1.0 - 1e-8;
  double f_lo = pc_score(lo, l, sum_t, window_hist);
  double f_hi = pc_score(hi, l, sum_t, window_hist);
  if (!std::isfinite(f_lo) || !std::isfinite(f_hi))
    throw std::runtime_error("estimate_pc: score evaluation failed at the bracket");
  if (f_lo > 0.0 && f_hi > 0.0) {
    // Monotone-increasing likelihood: all the mass sits at zero delay.
    std::fprintf(stderr, "estimate_pc: warning: no interior root, returning the upper bracket\n");
    return hi / step_seconds;
  }
  if (f_lo < 0.0 && f_hi < 0.0) {
    std::fprintf(stderr, "estimate_pc: warning: no interior root, returning the lower bracket\n");
    return lo / step_seconds;
  }
  for (int i = 0; i < 200 && hi - lo > 1e-15; ++i) {
    const double mid = 0.5 * (lo + hi);
    const double f_mid = pc_score(mid, l, sum_t, window_hist);
    if ((f_mid >= 0.0) == (f_lo >= 0.0)) { lo = mid; f_lo = f_mid; }
    else { hi = mid; f_hi = f_mid; }
  }
  const double p_step = 0.5 * (lo + hi);
  return p_step / step_seconds;
}

SpdtParams fit_all(const CipSamples& cip, int step_seconds) {
  cip.validate();
  if (cip.degrees.empty()) throw std::invalid_argument("fit_all: empty degree sample");
  if (cip.active_durations.empty()) throw std::invalid_argument("fit_all: empty duration sample");
  if (cip.activation_frequencies.empty()) throw std::invalid_argument("fit_all: empty frequency sample");
  if (cip.creation_delays.empty()) throw std::invalid_argument("fit_all: empty delay sample");

  SpdtParams params;
  params.step_seconds = step_seconds;
  params.rho_per_sec = estimate_rho(cip.active_durations, step_seconds);
  params.q_per_sec = estimate_q(cip.activation_frequencies, params.rho_per_sec,
                                cip.observation_days, step_seconds);
  const PowerLawFit power = estimate_power_law(cip.degrees);
  params.alpha = power.alpha;
  params.xi = power.xi;
  params.psi = 0.999;
  params.p_c_per_sec = estimate_pc(cip.creation_delays, cip.creation_delay_durations,
                                   cip.delta_sec, step_seconds);
  params.p_b_per_sec = params.rho_per_sec;
  params.delta_sec = cip.delta_sec;
  params.eta = 1.0;
  return validate_params(params);
}

}  // namespace spdt
