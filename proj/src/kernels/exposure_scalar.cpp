#include "spdt/kernels/exposure.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace spdt::kernels {

// Branchless two-phase evaluation. Phase 1 integrates the build-up
// concentration over [t_sp, t_lp] clamped to the host's presence, phase 2
// integrates the decaying concentration over the part after departure; each
// clamp collapses to an empty interval (zero contribution) when the link has
// no mass in that phase. The same algebra is mirrored by the AVX2 variant.
double exposure_scalar(double t_s, double t_l, double t_sp, double t_lp,
                       double g, double p_pulmonary, double V, double r) {
  if (!(r > 0.0)) throw std::invalid_argument("exposure_scalar: r must be > 0");
  if (!(V > 0.0)) throw std::invalid_argument("exposure_scalar: V must be > 0");
  const double c_inf = g / (V * r);  // steady-state concentration

  // Phase 1: [a1, b1] = [t_sp, t_lp] clamped to (-inf, t_l].
  const double a1 = std::min(t_sp, t_l);
  const double b1 = std::min(t_lp, t_l);
  const double phase1 = (b1 - a1) + (std::exp(-r * (b1 - t_s)) - std::exp(-r * (a1 - t_s))) / r;

  // Phase 2: [a2, b2] = [t_sp, t_lp] clamped to [t_l, inf).
  const double a2 = std::max(t_sp, t_l);
  const double b2 = std::max(t_lp, t_l);
  const double c_at_departure = c_inf * (1.0 - std::exp(-r * (t_l - t_s)));
  const double phase2 = c_at_departure * (std::exp(-r * (a2 - t_l)) - std::exp(-r * (b2 - t_l))) / r;

  const double dose = p_pulmonary * (c_inf * phase1 + phase2);
  return dose > 0.0 ? dose : 0.0;  // clamp the -0.0 / rounding fringe
}

void exposure_batch_scalar(const double* t_s, const double* t_l,
                           const double* t_sp, const double* t_lp,
                           double* out, std::size_t n,
                           double g, double p_pulmonary, double V, double r) {
  for (std::size_t i = 0; i < n; ++i)
    out[i] = exposure_scalar(t_s[i], t_l[i], t_sp[i], t_lp[i], g, p_pulmonary, V, r);
}

}  // namespace spdt::kernels
