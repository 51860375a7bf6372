#pragma once

#include <cstdint>

#include "spdt/rng.hpp"

namespace spdt {

// The five CIP sampling laws. Every sampler consumes exactly one uniform per
// draw (inverse CDF) so draw counts per stream are predictable.

// P(t) = p(1-p)^(t-1) on {1, 2, ...}.
std::int64_t sample_geometric(double p, RandomSource& rng);

// P(t) = p(1-p)^t / (1 - (1-p)^(t_max+1)) on {0, ..., t_max}; the normalizer
// makes the t_max+1 point masses sum to one.
std::int64_t sample_truncated_geometric(double p_c, std::int64_t t_max, RandomSource& rng);

// Density f(x) = alpha x^-(alpha+1) / (xi^-alpha - psi^-alpha) on [xi, psi].
double sample_bounded_power_law(double alpha, double xi, double psi, RandomSource& rng);

// P(d) = (1-lambda) lambda^(d-1) on {1, 2, ...}.
std::int64_t sample_activation_degree(double lambda, RandomSource& rng);

// Inverse CDF of the bounded power law; u = 0 and u = 1 hit xi and psi.
double bounded_power_law_quantile(double alpha, double xi, double psi, double u);

// Analytic forms, used by the estimators and as test references.
double geometric_pmf(double p, std::int64_t t);
double truncated_geometric_pmf(double p_c, std::int64_t t_max, std::int64_t t);
double bounded_power_law_pdf(double alpha, double xi, double psi, double x);
double bounded_power_law_cdf(double alpha, double xi, double psi, double x);
double bounded_power_law_mean(double alpha, double xi, double psi);
double activation_degree_pmf(double lambda, std::int64_t d);

// Marginal activation-degree pmf when lambda is integrated out against the
// bounded power law with psi -> 1:
//   Pr(d) = [a/(xi^-a - 1)] * [(1 - xi^(d-a-1))/(d-a-1) - (1 - xi^(d-a))/(d-a)]
// with removable singularities at d = a and d = a+1 taken by their -ln(xi)
// limits.
double mixture_degree_pmf(std::int64_t d, double alpha, double xi);

}  // namespace spdt
