#include "rifci/synth.hpp"

#include <cstdio>
#include <random>
#include <stdexcept>

#include "rifci/rank_inference.hpp"

namespace rifci {

void SynthConfig::validate() const {
  if (n_journals < 2) throw std::invalid_argument("n_journals must be at least 2");
  if (articles_min < 1 || articles_max < articles_min) {
    throw std::invalid_argument("articles range must satisfy 1 <= min <= max");
  }
  if (!quality.empty() && static_cast<int>(quality.size()) != n_journals) {
    throw std::invalid_argument("quality must have n_journals entries");
  }
  if (!citing_activity.empty() && static_cast<int>(citing_activity.size()) != n_journals) {
    throw std::invalid_argument("citing_activity must have n_journals entries");
  }
  for (double q : quality) {
    if (!(q > 0.0)) throw std::invalid_argument("quality entries must be positive");
  }
  for (double a : citing_activity) {
    if (!(a > 0.0)) throw std::invalid_argument("citing_activity entries must be positive");
  }
  if (!(dispersion >= 0.0)) throw std::invalid_argument("dispersion must be nonnegative");
  if (!(self_citation_boost >= 0.0)) throw std::invalid_argument("self_citation_boost must be nonnegative");
  if (!(base_rate > 0.0)) throw std::invalid_argument("base_rate must be positive");
}

SynthDataset generate(const SynthConfig& cfg) {
  cfg.validate();
  const auto J = static_cast<std::size_t>(cfg.n_journals);
  std::vector<double> quality = cfg.quality;
  if (quality.empty()) {
    for (std::size_t j = 0; j < J; ++j) quality.push_back(static_cast<double>(J - j));
  }
  std::vector<double> activity = cfg.citing_activity;
  if (activity.empty()) activity.assign(J, 1.0);

  std::mt19937_64 rng(cfg.seed);
  std::uniform_int_distribution<int> article_count(cfg.articles_min, cfg.articles_max);
  std::gamma_distribution<double> multiplier(cfg.dispersion > 0.0 ? 1.0 / cfg.dispersion : 1.0,
                                             cfg.dispersion > 0.0 ? cfg.dispersion : 1.0);

  SynthDataset out;
  auto& ds = out.dataset;
  ds.article_offsets.push_back(0);
  std::vector<Eigen::Triplet<std::int64_t, Index>> entries;
  char buf[48];
  for (std::size_t j = 0; j < J; ++j) {
    std::snprintf(buf, sizeof buf, "%04zu-%04zu", (j + 1) / 10000, (j + 1) % 10000);
    const std::string issn = buf;
    const int count = article_count(rng);
    ds.journals.push_back({issn, "Synthetic Journal " + std::to_string(j + 1), count});
    for (int a = 0; a < count; ++a) {
      const auto row = static_cast<Index>(ds.article_ids.size());
      std::snprintf(buf, sizeof buf, "%s-A%06d", issn.c_str(), a + 1);
      ds.article_ids.emplace_back(buf);
      const double g = cfg.dispersion > 0.0 ? multiplier(rng) : 1.0;
      for (std::size_t i = 0; i < J; ++i) {
        double mean = cfg.base_rate * quality[j] * activity[i] * g;
        if (i == j) mean *= 1.0 + cfg.self_citation_boost;
        if (!(mean > 0.0)) continue;
        std::poisson_distribution<std::int64_t> cites(mean);
        const auto n = cites(rng);
        if (n > 0) entries.emplace_back(row, static_cast<Index>(i), n);
      }
    }
    ds.article_offsets.push_back(static_cast<Index>(ds.article_ids.size()));
  }
  ds.citations = CountMatrix(static_cast<Index>(ds.article_ids.size()), static_cast<Index>(J));
  ds.citations.setFromTriplets(entries.begin(), entries.end());
  ds.citations.makeCompressed();
  ds.validate();

  const auto given = outgoing_citations(ds);
  for (std::size_t i = 0; i < J; ++i) {
    if (given[i] == 0) out.zero_outgoing.push_back(static_cast<Index>(i));
  }
  const auto ranks = empirical_ranks(Eigen::Map<const Eigen::VectorXd>(quality.data(), static_cast<Index>(J)));
  out.true_quality_rank.assign(ranks.ranks.begin(), ranks.ranks.end());
  return out;
}

}  // namespace rifci
