#include "rifci/pipeline.hpp"

#include <algorithm>
#include <fstream>
#include <numeric>
#include <ostream>
#include <set>
#include <stdexcept>

#include "rifci/csv.hpp"
#include "rifci/error.hpp"

namespace rifci {

namespace {

std::ofstream open_output(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write '" + path.string() + "'");
  return out;
}

void write_widths(const std::filesystem::path& path, const std::vector<WidthSummary>& widths) {
  auto out = open_output(path);
  csv::write_row(out, {"method", "mean_width"});
  for (const auto& w : widths) csv::write_row(out, {std::string(to_string(w.method)), csv::format_number(w.mean_width)});
}

void log_widths(std::ostream& log, const std::vector<WidthSummary>& widths) {
  for (const auto& w : widths) {
    log << "mean rank CI width " << to_string(w.method) << ": " << csv::format_number(w.mean_width, 6) << '\n';
  }
}

// Dataset positions in order of empirical rank; ties keep dataset order.
std::vector<std::size_t> rank_order(const Eigen::VectorXd& ranks) {
  std::vector<std::size_t> order(static_cast<std::size_t>(ranks.size()));
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return ranks(static_cast<Index>(a)) < ranks(static_cast<Index>(b));
  });
  return order;
}

}  // namespace

void RunConfig::validate() const {
  if (!(alpha > 0.0 && alpha < 0.5)) throw std::invalid_argument("alpha must lie in (0, 0.5)");
  if (replications < 2) throw std::invalid_argument("bootstrap replications must be at least 2");
  if (min_outgoing < 1) throw std::invalid_argument("min-out-citations must be positive");
  if (!(rho > 0.0 && rho < 1.0)) throw std::invalid_argument("rho must lie in (0, 1)");
  if (!(beta >= 0.0)) throw std::invalid_argument("beta must be nonnegative");
  if (workers < 1) throw std::invalid_argument("workers must be at least 1");
  if (methods.empty()) throw std::invalid_argument("at least one rank method is required");
  std::set<std::filesystem::path> seen;
  for (const auto* p : {&inputs.journals, &inputs.articles, &inputs.citations, &ensemble}) {
    if (p->empty()) continue;
    if (!seen.insert(p->lexically_normal()).second) {
      throw std::invalid_argument("input paths must be distinct: '" + p->string() + "' repeated");
    }
  }
}

PowerIterationConfig RunConfig::empirical_iterations() const {
  return paper_faithful ? PowerIterationConfig::fixed(20) : PowerIterationConfig{};
}

PowerIterationConfig RunConfig::bootstrap_iterations() const {
  return paper_faithful ? PowerIterationConfig::fixed(10) : PowerIterationConfig{};
}

EmpiricalFit fit_empirical(const RunConfig& cfg, std::ostream& log) {
  auto loaded = load_dataset(cfg.inputs);
  auto filtered = filter_low_citers(loaded, cfg.min_outgoing);
  for (const auto& r : filtered.removed) {
    log << "removed " << r.journal.issn << " (" << r.journal.name << "): gave " << r.outgoing
        << " citation(s), below " << cfg.min_outgoing << '\n';
  }
  EmpiricalFit fit{std::move(filtered.dataset), std::move(filtered.removed), {}, {}, {}};
  fit.system = build_system(fit.dataset);
  fit.simple = simple_if(fit.system);
  fit.rif = invariant_rif(fit.system, fit.simple, cfg.empirical_iterations());
  log << "journals: " << fit.dataset.journal_count() << ", articles: " << fit.dataset.article_count()
      << ", empirical RIF iterations: " << fit.rif.iterations << '\n';
  return fit;
}

ComputeOutputs run_compute(const RunConfig& cfg, std::ostream& log) {
  cfg.validate();
  const auto fit = fit_empirical(cfg, log);
  const auto& ds = fit.dataset;
  const auto& sys = fit.system;
  std::filesystem::create_directories(cfg.out_dir);

  BootstrapConfig boot;
  boot.replications = cfg.paper_faithful ? 1000 : cfg.replications;
  boot.master_seed = cfg.seed;
  const auto ens = run_bootstrap(ds, sys, fit.rif, boot, cfg.bootstrap_iterations(), cfg.workers);
  log << "bootstrap: " << boot.replications << " replications, " << ens.redraw_count() << " redraw(s)\n";
  write_ensemble_csv(cfg.out_dir / "ensemble.csv", ens);

  const auto summary = summarize_scores(ens, cfg.alpha);
  RankInferenceOptions opts;
  opts.alpha = cfg.alpha;
  opts.beta = cfg.beta;
  opts.xie_bandwidth = cfg.bandwidth_mode;
  opts.xie_sigma = cfg.sigma_mode;
  const auto sets = rank_confidence_sets(ens.samples, fit.rif.scores, cfg.methods, opts);
  const auto widths = ci_width_summary(sets);
  log_widths(log, widths);
  write_widths(cfg.out_dir / "rank_widths.csv", widths);

  const auto scaled = rescale(fit.rif, cfg.norm);
  const double factor = scaled.scores.maxCoeff() / fit.rif.scores.maxCoeff();
  const auto top100 = rescale(fit.rif, Norm::Top100);
  const auto ranks = empirical_ranks(fit.rif.scores);

  ComputeOutputs result;
  result.redraws = ens.redraw_count();
  result.widths = widths;
  result.table.methods = cfg.methods;
  for (auto j : rank_order(ranks.ranks)) {
    const auto jj = static_cast<Index>(j);
    ResultRow row;
    row.rank = ranks.ranks(jj);
    row.issn = ds.journals[j].issn;
    row.name = ds.journals[j].name;
    row.rif = scaled.scores(jj);
    row.rif_top100 = top100.scores(jj);
    row.se = summary[j].standard_error * factor;
    row.ci_lo = summary[j].ci_lower * factor;
    row.ci_hi = summary[j].ci_upper * factor;
    row.simple_if = fit.simple.scores(jj);
    for (const auto& s : sets) row.rank_cis.push_back({s.lower[j], s.upper[j]});
    result.table.rows.push_back(std::move(row));
  }
  {
    auto out = open_output(cfg.out_dir / "results.csv");
    write_results_csv(out, result.table);
  }

  // Scores under every impact method, dataset order.
  const auto lp = liebowitz_palmer(sys, fit.simple, cfg.empirical_iterations());
  const auto koczy = koczy_modified(sys, fit.simple, cfg.empirical_iterations());
  EigenfactorConfig ef_cfg;
  ef_cfg.rho = cfg.rho;
  const auto ef = eigenfactor(sys, ef_cfg);
  {
    auto out = open_output(cfg.out_dir / "scores.csv");
    csv::write_row(out, {"issn", "name", "simple_if", "invariant", "invariant_top100", "liebowitz_palmer", "koczy",
                         "eigenfactor", "article_influence"});
    for (std::size_t j = 0; j < ds.journals.size(); ++j) {
      const auto jj = static_cast<Index>(j);
      csv::write_row(out, {ds.journals[j].issn, ds.journals[j].name, csv::format_number(fit.simple.scores(jj)),
                           csv::format_number(fit.rif.scores(jj)), csv::format_number(top100.scores(jj)),
                           csv::format_number(lp.scores(jj)), csv::format_number(koczy.scores(jj)),
                           csv::format_number(ef.eigenfactor.scores(jj)),
                           csv::format_number(ef.article_influence.scores(jj))});
    }
  }
  return result;
}

std::vector<WidthSummary> run_ranks(const RunConfig& cfg, std::ostream& log) {
  cfg.validate();
  if (cfg.ensemble.empty()) throw std::invalid_argument("an ensemble file is required");
  const auto fit = fit_empirical(cfg, log);
  const auto file = read_ensemble_csv(cfg.ensemble);
  std::vector<std::string> issns;
  for (const auto& j : fit.dataset.journals) issns.push_back(j.issn);
  if (file.issns != issns) {
    throw DataError("ensemble/journal-order mismatch: '" + cfg.ensemble.string() +
                    "' columns do not match the filtered dataset's ISSN order");
  }
  if (file.samples.rows() < 2) throw DataError("ensemble '" + cfg.ensemble.string() + "' has fewer than 2 rows");

  RankInferenceOptions opts;
  opts.alpha = cfg.alpha;
  opts.beta = cfg.beta;
  opts.xie_bandwidth = cfg.bandwidth_mode;
  opts.xie_sigma = cfg.sigma_mode;
  const auto sets = rank_confidence_sets(file.samples, fit.rif.scores, cfg.methods, opts);
  const auto widths = ci_width_summary(sets);

  std::filesystem::create_directories(cfg.out_dir);
  const auto ranks = empirical_ranks(fit.rif.scores);
  {
    auto out = open_output(cfg.out_dir / "rank_cis.csv");
    csv::Row header = {"rank", "issn", "name", "rif"};
    for (const auto& s : sets) {
      header.push_back(std::string(to_string(s.method)) + "_lo");
      header.push_back(std::string(to_string(s.method)) + "_hi");
    }
    csv::write_row(out, header);
    for (auto j : rank_order(ranks.ranks)) {
      const auto jj = static_cast<Index>(j);
      csv::Row row = {csv::format_number(ranks.ranks(jj)), fit.dataset.journals[j].issn, fit.dataset.journals[j].name,
                      csv::format_number(fit.rif.scores(jj))};
      for (const auto& s : sets) {
        row.push_back(std::to_string(s.lower[j]));
        row.push_back(std::to_string(s.upper[j]));
      }
      csv::write_row(out, row);
    }
  }
  write_widths(cfg.out_dir / "rank_widths.csv", widths);
  log_widths(log, widths);
  return widths;
}

SynthDataset run_synth(const SynthConfig& cfg, const std::filesystem::path& out_dir, std::ostream& log) {
  auto synth = generate(cfg);
  std::filesystem::create_directories(out_dir);
  write_dataset(synth.dataset,
                {out_dir / "journals.csv", out_dir / "articles.csv", out_dir / "citations.csv"});
  auto out = open_output(out_dir / "truth.csv");
  csv::write_row(out, {"issn", "quality", "true_rank"});
  const auto J = synth.dataset.journals.size();
  for (std::size_t j = 0; j < J; ++j) {
    const double q = cfg.quality.empty() ? static_cast<double>(J - j) : cfg.quality[j];
    csv::write_row(out, {synth.dataset.journals[j].issn, csv::format_number(q),
                         csv::format_number(synth.true_quality_rank[j])});
  }
  for (auto i : synth.zero_outgoing) {
    log << "warning: journal " << synth.dataset.journals[static_cast<std::size_t>(i)].issn
        << " gives no citations; filter it before computing\n";
  }
  log << "wrote " << J << " journals, " << synth.dataset.article_count() << " articles to " << out_dir.string()
      << '\n';
  return synth;
}

}  // namespace rifci
