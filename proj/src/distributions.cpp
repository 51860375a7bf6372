#include "spdt/distributions.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace spdt {

namespace {

void require_probability(double p, const char* who) {
  if (!(p > 0.0) || !(p < 1.0))
    throw std::invalid_argument(std::string(who) + ": probability must lie in (0,1), got " + std::to_string(p));
}

void require_power_law_args(double alpha, double xi, double psi, const char* who) {
  if (!(alpha > 0.0))
    throw std::invalid_argument(std::string(who) + ": alpha must be > 0");
  if (!(xi > 0.0) || !(xi < psi) || !(psi <= 1.0))
    throw std::invalid_argument(std::string(who) + ": need 0 < xi < psi <= 1");
}

}  // namespace

std::int64_t sample_geometric(double p, RandomSource& rng) {
  require_probability(p, "sample_geometric");
  const double u = rng.uniform();
  // Smallest t with CDF(t) >= u; log1p keeps precision for small p and u.
  const double t = std::floor(std::log1p(-u) / std::log1p(-p));
  return 1 + static_cast<std::int64_t>(t);
}

std::int64_t sample_truncated_geometric(double p_c, std::int64_t t_max, RandomSource& rng) {
  require_probability(p_c, "sample_truncated_geometric");
  if (t_max < 0) throw std::invalid_argument("sample_truncated_geometric: t_max must be >= 0");
  if (t_max == 0) {
    rng.uniform();  // keep the one-draw contract even on the degenerate support
    return 0;
  }
  const double log1mp = std::log1p(-p_c);
  const double z = -std::expm1(static_cast<double>(t_max + 1) * log1mp);
  const double u = rng.uniform();
  const double t = std::ceil(std::log1p(-u * z) / log1mp) - 1.0;
  const auto draw = static_cast<std::int64_t>(t);
  if (draw < 0) return 0;
  return draw > t_max ? t_max : draw;
}

double bounded_power_law_quantile(double alpha, double xi, double psi, double u) {
  require_power_law_args(alpha, xi, psi, "bounded_power_law_quantile");
  if (!(u >= 0.0) || !(u <= 1.0))
    throw std::invalid_argument("bounded_power_law_quantile: u must lie in [0,1]");
  const double a = std::pow(xi, -alpha);
  const double b = std::pow(psi, -alpha);
  double x = std::pow(a - u * (a - b), -1.0 / alpha);
  if (x < xi) x = xi;
  if (x > psi) x = psi;
  return x;
}

double sample_bounded_power_law(double alpha, double xi, double psi, RandomSource& rng) {
  return bounded_power_law_quantile(alpha, xi, psi, rng.uniform());
}

std::int64_t sample_activation_degree(double lambda, RandomSource& rng) {
  if (!(lambda > 0.0) || !(lambda < 1.0))
    throw std::invalid_argument("sample_activation_degree: lambda must lie in (0,1)");
  return sample_geometric(1.0 - lambda, rng);
}

double geometric_pmf(double p, std::int64_t t) {
  require_probability(p, "geometric_pmf");
  if (t < 1) return 0.0;
  return p * std::exp(static_cast<double>(t - 1) * std::log1p(-p));
}

double truncated_geometric_pmf(double p_c, std::int64_t t_max, std::int64_t t) {
  require_probability(p_c, "truncated_geometric_pmf");
  if (t_max < 0) throw std::invalid_argument("truncated_geometric_pmf: t_max must be >= 0");
  if (t < 0 || t > t_max) return 0.0;
  const double log1mp = std::log1p(-p_c);
  const double z = -std::expm1(static_cast<double>(t_max + 1) * log1mp);
  return p_c * std::exp(static_cast<double>(t) * log1mp) / z;
}

double bounded_power_law_pdf(double alpha, double xi, double psi, double x) {
  require_power_law_args(alpha, xi, psi, "bounded_power_law_pdf");
  if (x < xi || x > psi) return 0.0;
  const double norm = std::pow(xi, -alpha) - std::pow(psi, -alpha);
  return alpha * std::pow(x, -alpha - 1.0) / norm;
}

double bounded_power_law_cdf(double alpha, double xi, double psi, double x) {
  require_power_law_args(alpha, xi, psi, "bounded_power_law_cdf");
  if (x <= xi) return 0.0;
  if (x >= psi) return 1.0;
  const double a = std::pow(xi, -alpha);
  const double b = std::pow(psi, -alpha);
  return (a - std::pow(x, -alpha)) / (a - b);
}

double bounded_power_law_mean(double alpha, double xi, double psi) {
  require_power_law_args(alpha, xi, psi, "bounded_power_law_mean");
  const double norm = std::pow(xi, -alpha) - std::pow(psi, -alpha);
  if (std::fabs(alpha - 1.0) < 1e-12)
    return (std::log(psi) - std::log(xi)) / norm;
  return alpha / (1.0 - alpha) * (std::pow(psi, 1.0 - alpha) - std::pow(xi, 1.0 - alpha)) / norm;
}

double activation_degree_pmf(double lambda, std::int64_t d) {
  if (!(lambda > 0.0) || !(lambda < 1.0))
    throw std::invalid_argument("activation_degree_pmf: lambda must lie in (0,1)");
  if (d < 1) return 0.0;
  return (1.0 - lambda) * std::exp(static_cast<double>(d - 1) * std::log(lambda));
}

namespace {

// (1 - xi^e)/e, continued through e = 0 by its limit -ln(xi).
double one_minus_pow_over(double xi, double e) {
  if (std::fabs(e) < 1e-9) return -std::log(xi);
  return -std::expm1(e * std::log(xi)) / e;
}

}  // namespace

double mixture_degree_pmf(std::int64_t d, double alpha, double xi) {
  if (d < 1) throw std::invalid_argument("mixture_degree_pmf: d must be >= 1");
  if (!(alpha > 0.0))
    throw std::invalid_argument("mixture_degree_pmf: alpha must be > 0");
  if (!(xi > 0.0) || !(xi < 1.0))
    throw std::invalid_argument("mixture_degree_pmf: xi must lie in (0,1)");
  const double scale = alpha / (std::pow(xi, -alpha) - 1.0);
  const double dd = static_cast<double>(d);
  return scale * (one_minus_pow_over(xi, dd - alpha - 1.0) - one_minus_pow_over(xi, dd - alpha));
}

}  // namespace spdt
