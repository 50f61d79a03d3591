// Compiled with -mavx2 only; never called unless the CPU reports AVX2.
// Deliberately uses separate mul/add (no _mm256_fmadd_pd) to stay
// bit-identical with the scalar reference.

#include "kernels_impl.hpp"

#include <immintrin.h>

#include <cmath>

namespace nsaos::kernels::avx2 {

void window_gains(std::span<const double> gmax, std::span<const std::uint32_t> counts,
                  double wsize, std::span<double> out) {
  const std::size_t n = out.size();
  const __m256d w = _mm256_set1_pd(wsize);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m128i c32 = _mm_loadu_si128(reinterpret_cast<const __m128i*>(counts.data() + i));
    const __m256d c = _mm256_cvtepi32_pd(c32);
    const __m256d frac = _mm256_div_pd(_mm256_sub_pd(w, c), w);
    _mm256_storeu_pd(out.data() + i, _mm256_mul_pd(_mm256_loadu_pd(gmax.data() + i), frac));
  }
  for (; i < n; ++i) out[i] = gmax[i] * ((wsize - static_cast<double>(counts[i])) / wsize);
}

void ucb_scores(std::span<const double> means, std::span<const double> counts,
                double two_log_total, double scale, std::span<double> out) {
  const std::size_t n = out.size();
  const __m256d tl = _mm256_set1_pd(two_log_total);
  const __m256d s = _mm256_set1_pd(scale);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d bonus = _mm256_sqrt_pd(_mm256_div_pd(tl, _mm256_loadu_pd(counts.data() + i)));
    const __m256d r = _mm256_add_pd(_mm256_loadu_pd(means.data() + i), _mm256_mul_pd(s, bonus));
    _mm256_storeu_pd(out.data() + i, r);
  }
  for (; i < n; ++i) out[i] = means[i] + scale * std::sqrt(two_log_total / counts[i]);
}

void affine(std::span<const double> in, double offset, double factor, std::span<double> out) {
  const std::size_t n = out.size();
  const __m256d o = _mm256_set1_pd(offset);
  const __m256d f = _mm256_set1_pd(factor);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d x = _mm256_loadu_pd(in.data() + i);
    _mm256_storeu_pd(out.data() + i, _mm256_add_pd(o, _mm256_mul_pd(f, x)));
  }
  for (; i < n; ++i) out[i] = offset + factor * in[i];
}

void row_blend(std::span<double> row, std::span<const double> reward,
               std::span<const double> noise, double alpha, double beta) {
  const std::size_t n = row.size();
  const double keep = 1.0 - beta;
  const double learn = 1.0 - alpha;
  const __m256d vk = _mm256_set1_pd(keep);
  const __m256d vl = _mm256_set1_pd(learn);
  const __m256d va = _mm256_set1_pd(alpha);
  const __m256d vb = _mm256_set1_pd(beta);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d m = _mm256_loadu_pd(row.data() + i);
    const __m256d r = _mm256_loadu_pd(reward.data() + i);
    const __m256d z = _mm256_loadu_pd(noise.data() + i);
    const __m256d inner = _mm256_add_pd(_mm256_mul_pd(va, m), _mm256_mul_pd(vl, r));
    _mm256_storeu_pd(row.data() + i,
                     _mm256_add_pd(_mm256_mul_pd(vk, inner), _mm256_mul_pd(vb, z)));
  }
  for (; i < n; ++i) row[i] = keep * (alpha * row[i] + learn * reward[i]) + beta * noise[i];
}

}  // namespace nsaos::kernels::avx2
