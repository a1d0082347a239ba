#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "rifci/dataset.hpp"
#include "rifci/impact.hpp"
#include "rifci/rng.hpp"

namespace rifci {

enum class ResampleMode { ClusterWithinJournal, PooledAcrossJournals };

struct BootstrapConfig {
  int replications = 1000;
  std::uint64_t master_seed = 0;
  ResampleMode mode = ResampleMode::ClusterWithinJournal;
  int max_redraws_per_iteration = 100;
};

// One resample in P_b / Q_b form: draw r uses article row `articles[r]` of
// the original P and is assigned to journal `owners[r]`.
struct Resample {
  std::vector<Index> articles;
  std::vector<Index> owners;
  Eigen::VectorXd article_counts;  // articles assigned to each journal
};

// For each journal j, K_j uniform draws with replacement from its own K_j
// articles. Draws are grouped by journal in dataset order.
Resample cluster_resample(const CitationDataset& ds, RngStream& rng);

// K uniform draws from all articles; each draw keeps its publishing journal,
// so per-journal counts vary.
Resample pooled_resample(const CitationDataset& ds, RngStream& rng);

// C_b from the drawn P rows accumulated into their owners' rows, D_b its
// column sums, A_b the per-journal draw counts. Q_b is never materialized.
CrossCitationSystem resampled_system(const CitationDataset& ds, const Resample& draw);

struct BootstrapEnsemble {
  Eigen::MatrixXd samples;  // B x J, row b is the unit-length v_b
  BootstrapConfig config;
  ImpactVector empirical;
  std::vector<std::string> issns;
  std::vector<int> redraws;  // per iteration

  int redraw_count() const;
};

// Cluster bootstrap of the invariant RIF. Iteration b draws from
// iteration_stream(seed, b, attempt); a draw with a zero D_b (or, pooled,
// a zero A_b) is redrawn with the next attempt. Results do not depend on
// `workers`. Throws NumericalError when an iteration exhausts its budget.
BootstrapEnsemble run_bootstrap(const CitationDataset& ds, const CrossCitationSystem& sys,
                                const ImpactVector& empirical, const BootstrapConfig& cfg,
                                const PowerIterationConfig& iter_cfg = {}, unsigned workers = 1);

struct ScoreSummary {
  double mean = 0.0;
  double standard_error = 0.0;
  double ci_lower = 0.0;
  double ci_upper = 0.0;
};

// Per-journal mean, sample SD and percentile interval [alpha/2, 1 - alpha/2]
// (type-7 quantiles). Needs at least two rows.
std::vector<ScoreSummary> summarize_scores(const Eigen::MatrixXd& samples, double alpha);
std::vector<ScoreSummary> summarize_scores(const BootstrapEnsemble& ens, double alpha);

// Header row of ISSNs, then one row per draw.
struct EnsembleFile {
  std::vector<std::string> issns;
  Eigen::MatrixXd samples;
};

void write_ensemble_csv(std::ostream& out, const std::vector<std::string>& issns,
                        const Eigen::MatrixXd& samples);
void write_ensemble_csv(const std::filesystem::path& path, const BootstrapEnsemble& ens);
EnsembleFile read_ensemble_csv(std::istream& in, std::string_view source = "ensemble");
EnsembleFile read_ensemble_csv(const std::filesystem::path& path);

}  // namespace rifci
