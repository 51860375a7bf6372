#include "spdt/kernels/exposure.hpp"

#include <stdexcept>
#include <string>

namespace spdt::kernels {

namespace {

KernelBackend g_requested = KernelBackend::auto_detect;

KernelBackend resolve(KernelBackend requested) {
  if (requested != KernelBackend::auto_detect) return requested;
#if defined(SPDT_HAVE_AVX2_KERNEL)
  if (cpu_supports_avx2()) return KernelBackend::avx2;
#endif
  return KernelBackend::scalar;
}

}  // namespace

void set_exposure_backend(KernelBackend backend) {
  if (backend == KernelBackend::avx2) {
#if defined(SPDT_HAVE_AVX2_KERNEL)
    if (!cpu_supports_avx2())
      throw std::runtime_error("exposure backend avx2 requested but this CPU lacks AVX2/FMA");
#else
    throw std::runtime_error("exposure backend avx2 is not built on this architecture");
#endif
  }
  g_requested = backend;
}

KernelBackend active_exposure_backend() { return resolve(g_requested); }

const char* backend_name(KernelBackend backend) {
  switch (backend) {
    case KernelBackend::auto_detect: return "auto";
    case KernelBackend::scalar: return "scalar";
    case KernelBackend::avx2: return "avx2";
  }
  return "unknown";
}

KernelBackend backend_from_name(const char* name) {
  const std::string s(name);
  if (s == "auto") return KernelBackend::auto_detect;
  if (s == "scalar") return KernelBackend::scalar;
  if (s == "avx2") return KernelBackend::avx2;
  throw std::invalid_argument("unknown kernel backend '" + s + "' (expected auto|scalar|avx2)");
}

void exposure_batch(const double* t_s, const double* t_l,
                    const double* t_sp, const double* t_lp,
                    double* out, std::size_t n,
                    double g, double p_pulmonary, double V, double r) {
  switch (resolve(g_requested)) {
#if defined(SPDT_HAVE_AVX2_KERNEL)
    case KernelBackend::avx2:
      exposure_batch_avx2(t_s, t_l, t_sp, t_lp, out, n, g, p_pulmonary, V, r);
      return;
#endif
    default:
      exposure_batch_scalar(t_s, t_l, t_sp, t_lp, out, n, g, p_pulmonary, V, r);
      return;
  }
}

}  // namespace spdt::kernels
