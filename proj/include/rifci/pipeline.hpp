#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <vector>

#include "rifci/bootstrap.hpp"
#include "rifci/dataset.hpp"
#include "rifci/impact.hpp"
#include "rifci/rank_inference.hpp"
#include "rifci/report.hpp"
#include "rifci/synth.hpp"

namespace rifci {

struct RunConfig {
  DatasetSources inputs;
  std::filesystem::path out_dir = ".";
  std::filesystem::path ensemble;  // input for the ranks command
  double alpha = 0.05;
  int replications = 1000;
  std::uint64_t seed = 0;
  unsigned workers = 1;
  std::vector<RankMethod> methods = {RankMethod::Goldstein, RankMethod::Xie, RankMethod::XieSigmaDiff,
                                     RankMethod::Mogstad, RankMethod::MogstadCov};
  Norm norm = Norm::UnitEuclidean;
  std::int64_t min_outgoing = 12;
  bool paper_faithful = false;
  double rho = 0.85;
  double beta = 0.5;
  BandwidthMode bandwidth_mode = BandwidthMode::XieIQR;
  SigmaMode sigma_mode = SigmaMode::CovarianceAdjusted;

  // Throws std::invalid_argument on alpha outside (0, 0.5), non-distinct
  // paths, or other malformed settings.
  void validate() const;

  // Fixed 20 iterations from the simple IFs, 10 from the empirical RIF and
  // B = 1000 in paper-faithful mode; tolerance rule otherwise.
  PowerIterationConfig empirical_iterations() const;
  PowerIterationConfig bootstrap_iterations() const;
};

// Loaded, filtered data and the empirical solution shared by the commands.
struct EmpiricalFit {
  CitationDataset dataset;
  std::vector<RemovedJournal> removed;
  CrossCitationSystem system;
  ImpactVector simple;
  ImpactVector rif;
};

EmpiricalFit fit_empirical(const RunConfig& cfg, std::ostream& log);

struct ComputeOutputs {
  ResultsTable table;
  std::vector<WidthSummary> widths;
  int redraws = 0;
};

// Writes results.csv, ensemble.csv, scores.csv and rank_widths.csv into out_dir.
ComputeOutputs run_compute(const RunConfig& cfg, std::ostream& log);

// Reads cfg.ensemble, checks its ISSN header against the dataset, writes
// rank_cis.csv and rank_widths.csv, and logs one width line per method.
std::vector<WidthSummary> run_ranks(const RunConfig& cfg, std::ostream& log);

// Writes the three CSV inputs plus truth.csv (issn, quality, true_rank).
SynthDataset run_synth(const SynthConfig& cfg, const std::filesystem::path& out_dir, std::ostream& log);

}  // namespace rifci
