#pragma once

// Per-step vector arithmetic shared by the policies and the scenario.
//
// Each kernel has a scalar reference implementation and, on x86-64, an AVX2
// variant. The variant is chosen once at startup from the CPU features and
// can be forced with NONSTAT_AOS_SIMD=scalar|avx2. All variants perform the
// same IEEE operations in the same order per element (no FMA), so their
// results are bit-identical and experiment output does not depend on the
// machine it ran on.

#include <cstdint>
#include <span>
#include <string_view>

namespace nsaos::kernels {

enum class Isa { kScalar, kAvx2 };

struct KernelTable {
  Isa isa;
  std::string_view name;

  // out[i] = gmax[i] * ((wsize - counts[i]) / wsize)
  void (*window_gains)(std::span<const double> gmax, std::span<const std::uint32_t> counts,
                       double wsize, std::span<double> out);

  // out[i] = means[i] + scale * sqrt(two_log_total / counts[i])
  void (*ucb_scores)(std::span<const double> means, std::span<const double> counts,
                     double two_log_total, double scale, std::span<double> out);

  // out[i] = offset + factor * in[i]   (in and out may alias)
  void (*affine)(std::span<const double> in, double offset, double factor,
                 std::span<double> out);

  // row[i] = (1 - beta) * (alpha * row[i] + (1 - alpha) * reward[i]) + beta * noise[i]
  void (*row_blend)(std::span<double> row, std::span<const double> reward,
                    std::span<const double> noise, double alpha, double beta);
};

const KernelTable& scalar_table();
/// nullptr when the variant was not compiled in or the CPU lacks the feature.
const KernelTable* table_for(Isa isa);
/// The table used by the free functions below.
const KernelTable& active();
/// Overrides the active table (tests, benchmarks). Returns false if unavailable.
bool select(Isa isa);

inline void window_gains(std::span<const double> gmax, std::span<const std::uint32_t> counts,
                         double wsize, std::span<double> out) {
  active().window_gains(gmax, counts, wsize, out);
}
inline void ucb_scores(std::span<const double> means, std::span<const double> counts,
                       double two_log_total, double scale, std::span<double> out) {
  active().ucb_scores(means, counts, two_log_total, scale, out);
}
inline void affine(std::span<const double> in, double offset, double factor,
                   std::span<double> out) {
  active().affine(in, offset, factor, out);
}
inline void row_blend(std::span<double> row, std::span<const double> reward,
                      std::span<const double> noise, double alpha, double beta) {
  active().row_blend(row, reward, noise, alpha, beta);
}

}  // namespace nsaos::kernels
