#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Core>

#include "rifci/dataset.hpp"

namespace rifci {

struct SynthConfig {
  int n_journals = 10;
  int articles_min = 30;
  int articles_max = 60;
  // Planted journal quality; empty means linearly decreasing from n_journals to 1.
  std::vector<double> quality;
  // Reference-intensity multipliers of citing journals; empty means all ones.
  std::vector<double> citing_activity;
  // Variance of the per-article gamma multiplier (mean one). Zero gives
  // Poisson counts; larger values give heavier right tails.
  double dispersion = 2.0;
  double self_citation_boost = 0.0;
  // Expected citations from a unit-activity journal to an article of unit quality.
  double base_rate = 0.5;
  std::uint64_t seed = 0;

  // Throws std::invalid_argument on a malformed configuration.
  void validate() const;
};

struct SynthDataset {
  CitationDataset dataset;
  std::vector<double> true_quality_rank;  // midranks of quality, 1 = best
  std::vector<Index> zero_outgoing;       // journals that gave no citations
};

// Article k of journal j has a latent multiplier g_k ~ Gamma(1/dispersion,
// dispersion); journal i cites it Poisson(base_rate * quality_j *
// activity_i * (1 + boost [i == j]) * g_k) times. Without self-citation boost
// the population invariant RIF is proportional to quality.
SynthDataset generate(const SynthConfig& cfg);

}  // namespace rifci
