#include "kernels_impl.hpp"

#include <cmath>

namespace nsaos::kernels::scalar {

void window_gains(std::span<const double> gmax, std::span<const std::uint32_t> counts,
                  double wsize, std::span<double> out) {
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i] = gmax[i] * ((wsize - static_cast<double>(counts[i])) / wsize);
  }
}

void ucb_scores(std::span<const double> means, std::span<const double> counts,
                double two_log_total, double scale, std::span<double> out) {
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i] = means[i] + scale * std::sqrt(two_log_total / counts[i]);
  }
}

void affine(std::span<const double> in, double offset, double factor, std::span<double> out) {
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = offset + factor * in[i];
}

void row_blend(std::span<double> row, std::span<const double> reward,
               std::span<const double> noise, double alpha, double beta) {
  const double keep = 1.0 - beta;
  const double learn = 1.0 - alpha;
  for (std::size_t i = 0; i < row.size(); ++i) {
    row[i] = keep * (alpha * row[i] + learn * reward[i]) + beta * noise[i];
  }
}

}  // namespace nsaos::kernels::scalar
