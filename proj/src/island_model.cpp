#include "nsaos/island_model.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "nsaos/kernels.hpp"
#include "nsaos/policies.hpp"
#include "nsaos/stats.hpp"

namespace nsaos {

TransitionMatrix TransitionMatrix::uniform(std::size_t n) {
  TransitionMatrix m;
  m.n_ = n;
  m.data_.assign(n * n, 1.0 / static_cast<double>(n));
  return m;
}

bool TransitionMatrix::is_stochastic(double tol) const {
  for (std::size_t i = 0; i < n_; ++i) {
    if (!is_distribution(row(i), tol)) return false;
  }
  return true;
}

std::vector<std::size_t> IslandPopulation::island_sizes() const {
  std::vector<std::size_t> sizes(n_op(), 0);
  for (const auto& ind : individuals) ++sizes[ind.island];
  return sizes;
}

IslandPopulation im_init(std::size_t n_op, std::size_t psize, double alpha, double beta,
                         std::size_t wsize, CreditRule credit) {
  if (n_op == 0) throw std::invalid_argument("island model needs at least one operator");
  if (psize < n_op) {
    throw std::invalid_argument("psize (" + std::to_string(psize) +
                                ") must be at least the number of operators (" +
                                std::to_string(n_op) + ")");
  }
  if (!(alpha >= 0.0 && alpha <= 1.0) || !(beta >= 0.0 && beta <= 1.0)) {
    throw std::invalid_argument("island model alpha and beta must be in [0,1]");
  }
  IslandPopulation pop;
  pop.matrix = TransitionMatrix::uniform(n_op);
  pop.alpha = alpha;
  pop.beta = beta;
  pop.credit = credit;
  pop.individuals.reserve(psize);
  for (std::size_t j = 0; j < psize; ++j) {
    pop.individuals.push_back(Individual{WindowState(wsize, n_op), j % n_op, 0.0, 0.0});
  }
  return pop;
}

std::vector<Transition> im_step(IslandPopulation& pop, const ScenarioConfig& cfg, Rng& rng,
                                std::size_t iteration) {
  std::vector<Transition> moves;
  moves.reserve(pop.individuals.size());
  for (auto& ind : pop.individuals) {
    const OperatorId from = ind.island;
    const OperatorId to = roulette_draw(pop.matrix.row(from), rng);
    const double g = gain(cfg, to, ind.window, rng, iteration).value;
    ind.window.push(to);
    ind.island = to;
    ind.total += g;
    ind.last_gain = g;
    moves.push_back({from, to, g});
  }
  return moves;
}

TransitionMatrix im_update_matrix(const IslandPopulation& pop, std::span<const Transition> moves) {
  const std::size_t n = pop.n_op();
  constexpr double kNone = -std::numeric_limits<double>::infinity();

  // credit(i, k): best (or summed) gain of moves i -> k
  std::vector<double> credit(n * n, kNone);
  std::vector<std::size_t> hits(n * n, 0);
  for (const auto& mv : moves) {
    const std::size_t idx = mv.from * n + mv.to;
    if (pop.credit == CreditRule::kMax) {
      credit[idx] = std::max(credit[idx], mv.gain);
    } else {
      credit[idx] = hits[idx] == 0 ? mv.gain : credit[idx] + mv.gain;
    }
    ++hits[idx];
  }
  if (pop.credit == CreditRule::kMean) {
    for (std::size_t idx = 0; idx < credit.size(); ++idx) {
      if (hits[idx] > 0) credit[idx] /= static_cast<double>(hits[idx]);
    }
  }

  TransitionMatrix next = pop.matrix;
  const std::vector<double> noise(n, 1.0 / static_cast<double>(n));
  std::vector<double> reward(n);
  for (std::size_t i = 0; i < n; ++i) {
    const std::span<const double> c(credit.data() + i * n, n);
    double best = kNone;
    for (double v : c) best = std::max(best, v);
    if (best == kNone) {
      const auto row = pop.matrix.row(i);
      reward.assign(row.begin(), row.end());
    } else {
      std::size_t winners = 0;
      for (double v : c) winners += v == best;
      for (std::size_t k = 0; k < n; ++k) {
        reward[k] = c[k] == best ? 1.0 / static_cast<double>(winners) : 0.0;
      }
    }
    kernels::row_blend(next.row(i), reward, noise, pop.alpha, pop.beta);
  }
  return next;
}

void im_advance(IslandPopulation& pop, const ScenarioConfig& cfg, Rng& rng, std::size_t iteration) {
  const auto moves = im_step(pop, cfg, rng, iteration);
  pop.matrix = im_update_matrix(pop, moves);
}

double im_scores(const IslandPopulation& pop, std::size_t top_k) {
  std::vector<double> totals;
  totals.reserve(pop.individuals.size());
  for (const auto& ind : pop.individuals) totals.push_back(ind.total);
  return top_k_mean(totals, top_k);
}

}  // namespace nsaos
