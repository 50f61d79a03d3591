#pragma once

#include "nsaos/kernels.hpp"

namespace nsaos::kernels {

namespace scalar {
void window_gains(std::span<const double> gmax, std::span<const std::uint32_t> counts,
                  double wsize, std::span<double> out);
void ucb_scores(std::span<const double> means, std::span<const double> counts,
                double two_log_total, double scale, std::span<double> out);
void affine(std::span<const double> in, double offset, double factor, std::span<double> out);
void row_blend(std::span<double> row, std::span<const double> reward,
               std::span<const double> noise, double alpha, double beta);
}  // namespace scalar

#if defined(NSAOS_HAVE_AVX2)
namespace avx2 {
void window_gains(std::span<const double> gmax, std::span<const std::uint32_t> counts,
                  double wsize, std::span<double> out);
void ucb_scores(std::span<const double> means, std::span<const double> counts,
                double two_log_total, double scale, std::span<double> out);
void affine(std::span<const double> in, double offset, double factor, std::span<double> out);
void row_blend(std::span<double> row, std::span<const double> reward,
               std::span<const double> noise, double alpha, double beta);
}  // namespace avx2
#endif

}  // namespace nsaos::kernels
