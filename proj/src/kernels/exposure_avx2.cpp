// AVX2+FMA batch exposure kernel. Compiled in its own translation unit with
// -mavx2 -mfma; callers must verify cpu_supports_avx2() first (the dispatcher
// in exposure_dispatch.cpp does).

#include "spdt/kernels/exposure.hpp"

#if defined(SPDT_HAVE_AVX2_KERNEL)

#include <immintrin.h>

#include <cstddef>

namespace spdt::kernels {

namespace {

// Vectorized exp(x) for x <= 0, Cephes-style:
//   x = n*ln2 + y, |y| <= ln2/2;  exp(y) by a rational minimax polynomial;
//   scale by 2^n through direct exponent-field construction.
// Inputs below -745 (underflow to subnormals) flush to zero; inputs are
// clamped at -708 so the 2^n construction never leaves the normal range.
// Accuracy ~1 ulp over the clamp range, which downstream tolerances absorb.
__m256d exp_negative_pd(__m256d x) {
  const __m256d underflow_cut = _mm256_set1_pd(-745.0);
  const __m256d clamp_lo = _mm256_set1_pd(-708.0);
  const __m256d log2e = _mm256_set1_pd(1.4426950408889634073599);
  const __m256d c1 = _mm256_set1_pd(6.93145751953125e-1);
  const __m256d c2 = _mm256_set1_pd(1.42860682030941723212e-6);
  const __m256d one = _mm256_set1_pd(1.0);
  const __m256d two = _mm256_set1_pd(2.0);

  const __m256d p0 = _mm256_set1_pd(1.26177193074810590878e-4);
  const __m256d p1 = _mm256_set1_pd(3.02994407707441961300e-2);
  const __m256d p2 = _mm256_set1_pd(9.99999999999999999910e-1);
  const __m256d q0 = _mm256_set1_pd(3.00198505138664455042e-6);
  const __m256d q1 = _mm256_set1_pd(2.52448340349684104192e-3);
  const __m256d q2 = _mm256_set1_pd(2.27265548208155028766e-1);
  const __m256d q3 = _mm256_set1_pd(2.00000000000000000005e0);

  const __m256d keep = _mm256_cmp_pd(x, underflow_cut, _CMP_GE_OQ);
  x = _mm256_max_pd(x, clamp_lo);

  const __m256d n = _mm256_round_pd(_mm256_mul_pd(x, log2e),
                                    _MM_FROUND_TO_NEAREST_INT | _MM_FROUND_NO_EXC);
  // Two-part Cody-Waite reduction keeps y = x - n*ln2 exact to the last bit.
  x = _mm256_fnmadd_pd(n, c1, x);
  x = _mm256_fnmadd_pd(n, c2, x);

  const __m256d xx = _mm256_mul_pd(x, x);
  __m256d px = _mm256_fmadd_pd(p0, xx, p1);
  px = _mm256_fmadd_pd(px, xx, p2);
  px = _mm256_mul_pd(px, x);
  __m256d qx = _mm256_fmadd_pd(q0, xx, q1);
  qx = _mm256_fmadd_pd(qx, xx, q2);
  qx = _mm256_fmadd_pd(qx, xx, q3);
  const __m256d ratio = _mm256_div_pd(px, _mm256_sub_pd(qx, px));
  const __m256d expy = _mm256_fmadd_pd(two, ratio, one);

  // 2^n: widen the 32-bit n to 64-bit lanes and build the exponent field.
  const __m128i n32 = _mm256_cvtpd_epi32(n);
  const __m256i n64 = _mm256_cvtepi32_epi64(n32);
  const __m256i biased = _mm256_add_epi64(n64, _mm256_set1_epi64x(1023));
  const __m256d scale = _mm256_castsi256_pd(_mm256_slli_epi64(biased, 52));

  return _mm256_and_pd(_mm256_mul_pd(expy, scale), keep);
}

}  // namespace

bool cpu_supports_avx2() {
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
}

void exposure_batch_avx2(const double* t_s, const double* t_l,
                         const double* t_sp, const double* t_lp,
                         double* out, std::size_t n,
                         double g, double p_pulmonary, double V, double r) {
  const __m256d neg_r = _mm256_set1_pd(-r);
  const __m256d inv_r = _mm256_set1_pd(1.0 / r);
  const __m256d c_inf = _mm256_set1_pd(g / (V * r));
  const __m256d vp = _mm256_set1_pd(p_pulmonary);
  const __m256d one = _mm256_set1_pd(1.0);
  const __m256d zero = _mm256_setzero_pd();

  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d s = _mm256_loadu_pd(t_s + i);
    const __m256d l = _mm256_loadu_pd(t_l + i);
    const __m256d sp = _mm256_loadu_pd(t_sp + i);
    const __m256d lp = _mm256_loadu_pd(t_lp + i);

    const __m256d a1 = _mm256_min_pd(sp, l);
    const __m256d b1 = _mm256_min_pd(lp, l);
    const __m256d a2 = _mm256_max_pd(sp, l);
    const __m256d b2 = _mm256_max_pd(lp, l);

    const __m256d e_b1 = exp_negative_pd(_mm256_mul_pd(neg_r, _mm256_sub_pd(b1, s)));
    const __m256d e_a1 = exp_negative_pd(_mm256_mul_pd(neg_r, _mm256_sub_pd(a1, s)));
    const __m256d e_dep = exp_negative_pd(_mm256_mul_pd(neg_r, _mm256_sub_pd(l, s)));
    const __m256d e_a2 = exp_negative_pd(_mm256_mul_pd(neg_r, _mm256_sub_pd(a2, l)));
    const __m256d e_b2 = exp_negative_pd(_mm256_mul_pd(neg_r, _mm256_sub_pd(b2, l)));

    const __m256d phase1 =
        _mm256_fmadd_pd(_mm256_sub_pd(e_b1, e_a1), inv_r, _mm256_sub_pd(b1, a1));
    const __m256d c_dep = _mm256_mul_pd(c_inf, _mm256_sub_pd(one, e_dep));
    const __m256d phase2 =
        _mm256_mul_pd(c_dep, _mm256_mul_pd(_mm256_sub_pd(e_a2, e_b2), inv_r));

    const __m256d dose =
        _mm256_mul_pd(vp, _mm256_fmadd_pd(c_inf, phase1, phase2));
    _mm256_storeu_pd(out + i, _mm256_max_pd(dose, zero));
  }
  if (i < n) {
    // Pad the remainder into a full vector so every element takes the same
    // code path; results must not depend on where in the batch a link sits.
    alignas(32) double s[4], l[4], sp[4], lp[4], tail[4];
    for (std::size_t k = 0; k < 4; ++k) {
      const std::size_t j = i + k < n ? i + k : n - 1;
      s[k] = t_s[j];
      l[k] = t_l[j];
      sp[k] = t_sp[j];
      lp[k] = t_lp[j];
    }
    exposure_batch_avx2(s, l, sp, lp, tail, 4, g, p_pulmonary, V, r);
    for (std::size_t k = 0; i + k < n; ++k) out[i + k] = tail[k];
  }
}

}  // namespace spdt::kernels

#endif  // SPDT_HAVE_AVX2_KERNEL
