#pragma once

// Transition-matrix policy run on a population of trajectories. Each
// individual draws its next operator from the row of the matrix indexed by
// the operator it applied last; after every step the matrix rows move toward
// the destinations that earned the best gain out of that row's island.

#include <cstddef>
#include <span>
#include <vector>

#include "nsaos/rng.hpp"
#include "nsaos/scenario.hpp"

namespace nsaos {

class TransitionMatrix {
 public:
  TransitionMatrix() = default;
  /// Every entry 1/n.
  static TransitionMatrix uniform(std::size_t n);

  std::size_t size() const { return n_; }
  std::span<double> row(std::size_t i) { return {data_.data() + i * n_, n_}; }
  std::span<const double> row(std::size_t i) const { return {data_.data() + i * n_, n_}; }
  double operator()(std::size_t i, std::size_t k) const { return data_[i * n_ + k]; }
  double& operator()(std::size_t i, std::size_t k) { return data_[i * n_ + k]; }

  /// Every row non-negative and summing to 1 within tol.
  bool is_stochastic(double tol = 1e-9) const;

  friend bool operator==(const TransitionMatrix&, const TransitionMatrix&) = default;

 private:
  std::size_t n_ = 0;
  std::vector<double> data_;
};

struct Individual {
  WindowState window;
  OperatorId island = 0;
  double total = 0.0;
  double last_gain = 0.0;
};

/// One move made during a step: from island `from` to operator `to`.
struct Transition {
  OperatorId from = 0;
  OperatorId to = 0;
  double gain = 0.0;
};

/// How the destinations out of an island are credited.
enum class CreditRule { kMax, kMean };

struct IslandPopulation {
  std::vector<Individual> individuals;
  TransitionMatrix matrix;
  double alpha = 0.8;  // inertia
  double beta = 0.01;  // noise
  CreditRule credit = CreditRule::kMax;

  std::size_t n_op() const { return matrix.size(); }
  /// Number of individuals currently on each island.
  std::vector<std::size_t> island_sizes() const;
};

/// Uniform matrix, individuals placed round-robin over the islands with
/// empty windows of capacity `wsize`. Throws std::invalid_argument if
/// psize < n_op or alpha/beta lie outside [0,1].
IslandPopulation im_init(std::size_t n_op, std::size_t psize, double alpha, double beta,
                         std::size_t wsize = 1, CreditRule credit = CreditRule::kMax);

/// Moves every individual once (roulette on its island's row, gain from its
/// own window) and returns the moves in individual order.
std::vector<Transition> im_step(IslandPopulation& pop, const ScenarioConfig& cfg, Rng& rng,
                                std::size_t iteration = 0);

/// Matrix after crediting `moves`:
///   M(i,.) <- (1 - beta) (alpha M(i,.) + (1 - alpha) R_i) + beta N
/// with N uniform, R_i uniform over the best destinations out of island i,
/// and R_i = M(i,.) for islands nobody left this step.
TransitionMatrix im_update_matrix(const IslandPopulation& pop, std::span<const Transition> moves);

/// im_step followed by the matrix update.
void im_advance(IslandPopulation& pop, const ScenarioConfig& cfg, Rng& rng,
                std::size_t iteration = 0);

/// Mean of the top_k individual totals.
double im_scores(const IslandPopulation& pop, std::size_t top_k);

}  // namespace nsaos
