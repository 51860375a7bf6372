#pragma once

#include <cstddef>

namespace spdt::kernels {

// Inhaled dose of a neighbor present over [t_sp, t_lp] against a host that
// emitted particles over [t_s, t_l], in a well-mixed volume V with particle
// generation rate g, removal rate r, and neighbor breathing rate p:
//
//   C'(t) = g/V - rC   for t in [t_s, t_l]    (host present, C(t_s) = 0)
//   C'(t) = -rC        for t > t_l            (decay after departure)
//   E     = p * integral of C over [t_sp, t_lp]
//
// Times are absolute seconds with t_s <= t_sp, t_sp <= t_lp. The evaluation
// uses only non-positive exponent arguments, so it cannot overflow however
// large the time values are.
double exposure_scalar(double t_s, double t_l, double t_sp, double t_lp,
                       double g, double p_pulmonary, double V, double r);

// out[i] = exposure of link i. Plain reference loop over the scalar form.
void exposure_batch_scalar(const double* t_s, const double* t_l,
                           const double* t_sp, const double* t_lp,
                           double* out, std::size_t n,
                           double g, double p_pulmonary, double V, double r);

#if defined(__x86_64__) || defined(_M_X64)
#define SPDT_HAVE_AVX2_KERNEL 1
// AVX2+FMA variant of exposure_batch_scalar (4 links per iteration, scalar
// tail). Call only when cpu_supports_avx2() is true.
void exposure_batch_avx2(const double* t_s, const double* t_l,
                         const double* t_sp, const double* t_lp,
                         double* out, std::size_t n,
                         double g, double p_pulmonary, double V, double r);
bool cpu_supports_avx2();
#endif

enum class KernelBackend { auto_detect, scalar, avx2 };

// Selects the batch implementation. auto_detect (the default) resolves to
// the best variant the CPU supports. Throws std::runtime_error if the
// requested backend is unavailable on this machine.
void set_exposure_backend(KernelBackend backend);

// The backend auto_detect currently resolves to (never auto_detect itself).
KernelBackend active_exposure_backend();

const char* backend_name(KernelBackend backend);
KernelBackend backend_from_name(const char* name);

// Dispatches to the active backend.
void exposure_batch(const double* t_s, const double* t_l,
                    const double* t_sp, const double* t_lp,
                    double* out, std::size_t n,
                    double g, double p_pulmonary, double V, double r);

}  // namespace spdt::kernels
