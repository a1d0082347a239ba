#include "rifci/bootstrap.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <exception>
#include <fstream>
#include <mutex>
#include <numeric>
#include <thread>

#include "rifci/csv.hpp"
#include "rifci/error.hpp"
#include "rifci/stats.hpp"

namespace rifci {

Resample cluster_resample(const CitationDataset& ds, RngStream& rng) {
  Resample out;
  const auto K = static_cast<std::size_t>(ds.article_count());
  out.articles.reserve(K);
  out.owners.reserve(K);
  out.article_counts.resize(ds.journal_count());
  for (Index j = 0; j < ds.journal_count(); ++j) {
    const auto first = ds.article_offsets[static_cast<std::size_t>(j)];
    const auto size = ds.article_offsets[static_cast<std::size_t>(j) + 1] - first;
    for (Index r = 0; r < size; ++r) {
      out.articles.push_back(first + static_cast<Index>(uniform_index(rng, static_cast<std::uint64_t>(size))));
      out.owners.push_back(j);
    }
    out.article_counts(j) = static_cast<double>(size);
  }
  return out;
}

Resample pooled_resample(const CitationDataset& ds, RngStream& rng) {
  const auto K = static_cast<std::uint64_t>(ds.article_count());
  std::vector<Index> drawn(K);
  for (auto& k : drawn) k = static_cast<Index>(uniform_index(rng, K));
  std::sort(drawn.begin(), drawn.end());

  Resample out;
  out.articles = std::move(drawn);
  out.owners.reserve(K);
  out.article_counts = Eigen::VectorXd::Zero(ds.journal_count());
  std::size_t j = 0;
  for (Index k : out.articles) {
    while (k >= ds.article_offsets[j + 1]) ++j;
    out.owners.push_back(static_cast<Index>(j));
    out.article_counts(static_cast<Index>(j)) += 1.0;
  }
  return out;
}

CrossCitationSystem resampled_system(const CitationDataset& ds, const Resample& draw) {
  const auto J = ds.journal_count();
  Eigen::MatrixXd c = Eigen::MatrixXd::Zero(J, J);
  for (std::size_t r = 0; r < draw.articles.size(); ++r) {
    const Index owner = draw.owners[r];
    for (CountMatrix::InnerIterator it(ds.citations, draw.articles[r]); it; ++it) {
      c(owner, it.col()) += static_cast<double>(it.value());
    }
  }
  return CrossCitationSystem::from_matrix(std::move(c), draw.article_counts);
}

int BootstrapEnsemble::redraw_count() const {
  return std::accumulate(redraws.begin(), redraws.end(), 0);
}

namespace {

struct Replicate {
  Eigen::VectorXd scores;
  int redraws = 0;
};

Replicate replicate(const CitationDataset& ds, const ImpactVector& empirical,
                    const BootstrapConfig& cfg, const PowerIterationConfig& iter_cfg,
                    std::uint64_t b) {
  for (int attempt = 0; attempt <= cfg.max_redraws_per_iteration; ++attempt) {
    auto rng = iteration_stream(cfg.master_seed, b, static_cast<std::uint64_t>(attempt));
    const Resample draw = cfg.mode == ResampleMode::ClusterWithinJournal ? cluster_resample(ds, rng)
                                                                         : pooled_resample(ds, rng);
    const auto sys = resampled_system(ds, draw);
    if ((sys.outgoing.array() <= 0.0).any() || (sys.article_counts.array() <= 0.0).any()) continue;
    auto v = invariant_rif(sys, empirical, iter_cfg);
    return {std::move(v.scores), attempt};
  }
  throw NumericalError("bootstrap iteration " + std::to_string(b) + " produced a singular D_b in " +
                       std::to_string(cfg.max_redraws_per_iteration + 1) +
                       " draws; raise the outgoing-citation filter threshold");
}

}  // namespace

BootstrapEnsemble run_bootstrap(const CitationDataset& ds, const CrossCitationSystem& sys,
                                const ImpactVector& empirical, const BootstrapConfig& cfg,
                                const PowerIterationConfig& iter_cfg, unsigned workers) {
  if (cfg.replications < 1) throw std::invalid_argument("replications must be at least 1");
  if (cfg.max_redraws_per_iteration < 0) throw std::invalid_argument("redraw budget must be >= 0");
  const auto J = ds.journal_count();
  if (sys.journal_count() != J || empirical.scores.size() != J) {
    throw std::invalid_argument("dataset, system and empirical vector disagree on journal count");
  }

  BootstrapEnsemble ens;
  ens.config = cfg;
  ens.empirical = empirical;
  ens.samples.resize(cfg.replications, J);
  ens.redraws.assign(static_cast<std::size_t>(cfg.replications), 0);
  for (const auto& j : ds.journals) ens.issns.push_back(j.issn);

  const auto B = static_cast<std::size_t>(cfg.replications);
  workers = std::max(1u, std::min<unsigned>(workers, static_cast<unsigned>(B)));

  std::exception_ptr failure;
  std::size_t failed_at = B;
  std::mutex failure_mutex;
  auto work = [&](unsigned worker) {
    for (std::size_t b = worker; b < B; b += workers) {
      try {
        auto rep = replicate(ds, empirical, cfg, iter_cfg, b);
        ens.samples.row(static_cast<Index>(b)) = rep.scores.transpose();
        ens.redraws[b] = rep.redraws;
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        // Report the lowest failing iteration so the error is worker-independent.
        if (b < failed_at) {
          failed_at = b;
          failure = std::current_exception();
        }
        return;
      }
    }
  };

  if (workers == 1) {
    work(0);
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work, w);
  }
  if (failure) std::rethrow_exception(failure);
  return ens;
}

std::vector<ScoreSummary> summarize_scores(const Eigen::MatrixXd& samples, double alpha) {
  if (samples.rows() < 2) throw std::invalid_argument("summaries need at least two draws");
  if (!(alpha > 0.0 && alpha < 1.0)) throw std::invalid_argument("alpha must lie in (0, 1)");
  std::vector<ScoreSummary> out(static_cast<std::size_t>(samples.cols()));
  std::vector<double> column(static_cast<std::size_t>(samples.rows()));
  for (Index j = 0; j < samples.cols(); ++j) {
    Eigen::Map<Eigen::VectorXd>(column.data(), samples.rows()) = samples.col(j);
    auto& s = out[static_cast<std::size_t>(j)];
    s.mean = stats::mean(column);
    s.standard_error = stats::sample_sd(column);
    std::sort(column.begin(), column.end());
    s.ci_lower = stats::quantile_sorted(column, alpha / 2.0);
    s.ci_upper = stats::quantile_sorted(column, 1.0 - alpha / 2.0);
  }
  return out;
}

std::vector<ScoreSummary> summarize_scores(const BootstrapEnsemble& ens, double alpha) {
  return summarize_scores(ens.samples, alpha);
}

void write_ensemble_csv(std::ostream& out, const std::vector<std::string>& issns,
                        const Eigen::MatrixXd& samples) {
  if (static_cast<Index>(issns.size()) != samples.cols()) {
    throw std::invalid_argument("ensemble header does not match column count");
  }
  csv::write_row(out, issns);
  char buf[40];
  for (Index b = 0; b < samples.rows(); ++b) {
    for (Index j = 0; j < samples.cols(); ++j) {
      // 17 significant digits round-trip a double exactly.
      std::snprintf(buf, sizeof buf, "%.17g", samples(b, j));
      if (j) out << ',';
      out << buf;
    }
    out << '\n';
  }
}

void write_ensemble_csv(const std::filesystem::path& path, const BootstrapEnsemble& ens) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write '" + path.string() + "'");
  write_ensemble_csv(out, ens.issns, ens.samples);
}

EnsembleFile read_ensemble_csv(std::istream& in, std::string_view source) {
  const auto table = csv::read(in, source);
  EnsembleFile file;
  file.issns = table.header;
  file.samples.resize(static_cast<Index>(table.rows.size()), static_cast<Index>(table.header.size()));
  for (std::size_t b = 0; b < table.rows.size(); ++b) {
    for (std::size_t j = 0; j < table.header.size(); ++j) {
      const auto& cell = table.rows[b][j];
      char* end = nullptr;
      const double value = std::strtod(cell.c_str(), &end);
      if (cell.empty() || end != cell.c_str() + cell.size() || !std::isfinite(value)) {
        throw DataError(std::string(source) + ": row " + std::to_string(b + 2) + " has invalid value '" +
                        cell + "'");
      }
      file.samples(static_cast<Index>(b), static_cast<Index>(j)) = value;
    }
  }
  return file;
}

EnsembleFile read_ensemble_csv(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open '" + path.string() + "'");
  return read_ensemble_csv(in, path.string());
}

}  // namespace rifci
