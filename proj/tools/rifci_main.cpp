// rifci: recursive impact factors with bootstrap confidence intervals for
// scores and ranks.

#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "rifci/csv.hpp"
#include "rifci/error.hpp"
#include "rifci/pipeline.hpp"

namespace {

enum ExitCode { kOk = 0, kUsage = 1, kData = 2, kNumerical = 3 };

std::vector<double> parse_list(const std::string& text, const char* flag) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw std::invalid_argument(std::string(flag) + ": '" + item + "' is not a number");
    }
  }
  return out;
}

struct Flags {
  std::string journals = "journals.csv";
  std::string articles = "articles.csv";
  std::string citations = "citations.csv";
  std::string out = ".";
  std::string ensemble;
  std::string results = "results.csv";
  std::string methods = "goldstein,xie,xie_sigmadiff,mogstad,mogstad_cov";
  std::string norm = "unit";
  std::string bandwidth_mode = "iqr";
  std::string sigma_mode = "cov";
  std::string quality;
  std::string activity;
};

void add_data_flags(CLI::App* cmd, Flags& f) {
  cmd->add_option("--journals", f.journals, "journals CSV (issn,name,article_count)")->capture_default_str();
  cmd->add_option("--articles", f.articles, "articles CSV (article_id,issn)")->capture_default_str();
  cmd->add_option("--citations", f.citations, "citations CSV (article_id,citing_issn,count)")
      ->capture_default_str();
  cmd->add_option("--out", f.out, "output directory")->capture_default_str();
}

void add_run_flags(CLI::App* cmd, rifci::RunConfig& cfg, Flags& f) {
  cmd->add_option("--alpha", cfg.alpha, "significance level, in (0, 0.5)")->capture_default_str();
  cmd->add_option("--bootstrap", cfg.replications, "bootstrap replications B")->capture_default_str();
  cmd->add_option("--seed", cfg.seed, "master seed")->capture_default_str();
  cmd->add_option("--workers", cfg.workers, "bootstrap worker threads (does not change results)")
      ->capture_default_str();
  cmd->add_option("--methods", f.methods, "comma separated rank methods")->capture_default_str();
  cmd->add_option("--min-out-citations", cfg.min_outgoing, "drop journals giving fewer citations")
      ->capture_default_str();
  cmd->add_option("--norm", f.norm, "score scaling of rif/se/ci columns: unit|top100|sum1")
      ->capture_default_str();
  cmd->add_flag("--paper-faithful", cfg.paper_faithful, "fixed 20/10 power iterations and B = 1000");
  cmd->add_option("--rho", cfg.rho, "Eigenfactor damping")->capture_default_str();
  cmd->add_option("--beta", cfg.beta, "Xie bandwidth exponent")->capture_default_str();
  cmd->add_option("--bandwidth-mode", f.bandwidth_mode, "bandwidth of the xie column: iqr|sigmadiff")
      ->capture_default_str();
  cmd->add_option("--sigma-mode", f.sigma_mode, "pairwise SD feeding Xie bandwidths: independent|cov")
      ->capture_default_str();
}

void finish_run_config(rifci::RunConfig& cfg, const Flags& f) {
  cfg.inputs = {f.journals, f.articles, f.citations};
  cfg.out_dir = f.out;
  if (!f.ensemble.empty()) cfg.ensemble = f.ensemble;
  cfg.norm = rifci::parse_norm(f.norm);
  if (cfg.norm == rifci::Norm::Raw) throw std::invalid_argument("--norm raw is not meaningful for eigenvectors");
  cfg.bandwidth_mode = rifci::parse_bandwidth_mode(f.bandwidth_mode);
  cfg.sigma_mode = rifci::parse_sigma_mode(f.sigma_mode);
  cfg.methods.clear();
  std::stringstream ss(f.methods);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) cfg.methods.push_back(rifci::parse_rank_method(item));
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Recursive journal impact factors with bootstrap confidence intervals for scores and ranks"};
  app.require_subcommand(1);

  Flags flags;
  rifci::RunConfig run;
  rifci::SynthConfig synth;

  auto* validate = app.add_subcommand("validate", "load, validate and filter a dataset; report its shape");
  add_data_flags(validate, flags);
  validate->add_option("--min-out-citations", run.min_outgoing, "drop journals giving fewer citations")
      ->capture_default_str();

  auto* compute = app.add_subcommand("compute", "impact factors, bootstrap, score and rank intervals");
  add_data_flags(compute, flags);
  add_run_flags(compute, run, flags);

  auto* ranks = app.add_subcommand("ranks", "rank intervals from a saved ensemble");
  add_data_flags(ranks, flags);
  add_run_flags(ranks, run, flags);
  ranks->add_option("--ensemble", flags.ensemble, "ensemble CSV written by compute")->required();

  auto* plot = app.add_subcommand("plot", "SVG figures from a results table");
  plot->add_option("--results", flags.results, "results.csv written by compute")->capture_default_str();
  plot->add_option("--out", flags.out, "output directory")->capture_default_str();

  auto* gen = app.add_subcommand("synth", "generate a synthetic dataset with planted journal quality");
  gen->add_option("--out", flags.out, "output directory")->capture_default_str();
  gen->add_option("--n-journals", synth.n_journals, "number of journals")->capture_default_str();
  gen->add_option("--articles-min", synth.articles_min, "fewest articles per journal")->capture_default_str();
  gen->add_option("--articles-max", synth.articles_max, "most articles per journal")->capture_default_str();
  gen->add_option("--quality", flags.quality, "comma separated planted quality (default J..1)");
  gen->add_option("--activity", flags.activity, "comma separated citing activity (default 1)");
  gen->add_option("--dispersion", synth.dispersion, "variance of the per-article multiplier")
      ->capture_default_str();
  gen->add_option("--self-boost", synth.self_citation_boost, "extra self-citation rate")->capture_default_str();
  gen->add_option("--base-rate", synth.base_rate, "expected citations per article and citing journal")
      ->capture_default_str();
  gen->add_option("--seed", synth.seed, "generator seed")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }

  try {
    if (validate->parsed()) {
      finish_run_config(run, flags);
      run.validate();
      const auto ds = rifci::load_dataset(run.inputs);
      const auto filtered = rifci::filter_low_citers(ds, run.min_outgoing);
      for (const auto& r : filtered.removed) {
        std::cout << "removed " << r.journal.issn << " (" << r.journal.name << "): gave " << r.outgoing
                  << " citation(s)\n";
      }
      const auto sys = rifci::build_system(filtered.dataset);
      std::cout << "journals: " << filtered.dataset.journal_count()
                << ", articles: " << filtered.dataset.article_count()
                << ", citations: " << static_cast<long long>(sys.citations.sum()) << '\n';
    } else if (compute->parsed()) {
      finish_run_config(run, flags);
      rifci::run_compute(run, std::cerr);
      std::cout << (std::filesystem::path(run.out_dir) / "results.csv").string() << '\n';
    } else if (ranks->parsed()) {
      finish_run_config(run, flags);
      rifci::run_ranks(run, std::cout);
    } else if (plot->parsed()) {
      const auto table = rifci::read_results_csv(std::filesystem::path(flags.results));
      const auto paths = rifci::write_plots(table, flags.out, std::cerr);
      std::cout << paths.scores.string() << '\n' << paths.scores_log.string() << '\n' << paths.ranks.string() << '\n';
    } else if (gen->parsed()) {
      if (!flags.quality.empty()) synth.quality = parse_list(flags.quality, "--quality");
      if (!flags.activity.empty()) synth.citing_activity = parse_list(flags.activity, "--activity");
      rifci::run_synth(synth, flags.out, std::cerr);
    }
  } catch (const rifci::DataError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kData;
  } catch (const rifci::NumericalError& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return kNumerical;
  } catch (const std::invalid_argument& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kData;
  }
  return kOk;
}
