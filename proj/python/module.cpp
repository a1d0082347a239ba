#include <pybind11/eigen.h>
#include <pybind11/operators.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include <sstream>

#include "rifci/bootstrap.hpp"
#include "rifci/dataset.hpp"
#include "rifci/error.hpp"
#include "rifci/impact.hpp"
#include "rifci/pipeline.hpp"
#include "rifci/rank_inference.hpp"
#include "rifci/synth.hpp"

namespace py = pybind11;
using namespace rifci;

namespace {

ImpactVector start_vector(const CrossCitationSystem& sys, const std::optional<Eigen::VectorXd>& init) {
  if (!init) return simple_if(sys);
  return {Method::Simple, *init, Norm::Raw, 0};
}

PowerIterationConfig iteration_config(int max_iterations, double tolerance) { return {max_iterations, tolerance}; }

py::tuple bounds(const RankConfidenceSet& s) { return py::make_tuple(s.lower, s.upper); }

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Recursive impact factors with bootstrap confidence intervals for scores and ranks.";

  py::register_exception<DataError>(m, "DataError", PyExc_ValueError);
  py::register_exception<NumericalError>(m, "NumericalError", PyExc_ArithmeticError);

  py::class_<Journal>(m, "Journal")
      .def_readonly("issn", &Journal::issn)
      .def_readonly("name", &Journal::name)
      .def_readonly("article_count", &Journal::article_count)
      .def("__repr__", [](const Journal& j) { return "<Journal " + j.issn + " " + j.name + ">"; });

  py::class_<CitationDataset>(m, "CitationDataset")
      .def_readonly("journals", &CitationDataset::journals)
      .def_readonly("article_ids", &CitationDataset::article_ids)
      .def_property_readonly("journal_count", &CitationDataset::journal_count)
      .def_property_readonly("article_count", &CitationDataset::article_count)
      .def_property_readonly("issns",
                             [](const CitationDataset& ds) {
                               std::vector<std::string> out;
                               for (const auto& j : ds.journals) out.push_back(j.issn);
                               return out;
                             })
      .def("save", [](const CitationDataset& ds, const std::filesystem::path& journals,
                      const std::filesystem::path& articles, const std::filesystem::path& citations) {
        write_dataset(ds, {journals, articles, citations});
      }, py::arg("journals"), py::arg("articles"), py::arg("citations"))
      .def(py::self == py::self);

  py::class_<CrossCitationSystem>(m, "CrossCitationSystem")
      .def_readonly("citations", &CrossCitationSystem::citations)
      .def_readonly("outgoing", &CrossCitationSystem::outgoing)
      .def_readonly("article_counts", &CrossCitationSystem::article_counts)
      .def_static("from_matrix", &CrossCitationSystem::from_matrix, py::arg("citations"), py::arg("article_counts"));

  m.def("load_dataset",
        [](const std::filesystem::path& j, const std::filesystem::path& a, const std::filesystem::path& c) {
          return load_dataset(DatasetSources{j, a, c});
        },
        py::arg("journals"), py::arg("articles"), py::arg("citations"));
  m.def("filter_low_citers",
        [](const CitationDataset& ds, std::int64_t min_outgoing) {
          auto r = filter_low_citers(ds, min_outgoing);
          std::vector<std::string> removed;
          for (const auto& j : r.removed) removed.push_back(j.journal.issn);
          return py::make_tuple(std::move(r.dataset), removed);
        },
        py::arg("dataset"), py::arg("min_outgoing") = 12,
        "Returns (filtered dataset, removed ISSNs in removal order).");
  m.def("build_system", &build_system, py::arg("dataset"));

  m.def("simple_if", [](const CrossCitationSystem& s) { return simple_if(s).scores; }, py::arg("system"));
  m.def("invariant_rif",
        [](const CrossCitationSystem& s, std::optional<Eigen::VectorXd> init, int max_iterations, double tol) {
          return invariant_rif(s, start_vector(s, init), iteration_config(max_iterations, tol)).scores;
        },
        py::arg("system"), py::arg("init") = py::none(), py::arg("max_iterations") = 200,
        py::arg("tolerance") = 1e-12);
  m.def("liebowitz_palmer",
        [](const CrossCitationSystem& s, std::optional<Eigen::VectorXd> init, int max_iterations, double tol) {
          return liebowitz_palmer(s, start_vector(s, init), iteration_config(max_iterations, tol)).scores;
        },
        py::arg("system"), py::arg("init") = py::none(), py::arg("max_iterations") = 200,
        py::arg("tolerance") = 1e-12);
  m.def("koczy_modified",
        [](const CrossCitationSystem& s, std::optional<Eigen::VectorXd> init, int max_iterations, double tol) {
          return koczy_modified(s, start_vector(s, init), iteration_config(max_iterations, tol)).scores;
        },
        py::arg("system"), py::arg("init") = py::none(), py::arg("max_iterations") = 200,
        py::arg("tolerance") = 1e-12);
  m.def("eigenfactor",
        [](const CrossCitationSystem& s, double rho) {
          EigenfactorConfig cfg;
          cfg.rho = rho;
          const auto r = eigenfactor(s, cfg);
          return py::make_tuple(r.eigenfactor.scores, r.article_influence.scores);
        },
        py::arg("system"), py::arg("rho") = 0.85, "Returns (eigenfactor, article_influence).");

  m.def("bootstrap",
        [](const CitationDataset& ds, int replications, std::uint64_t seed, unsigned workers, bool pooled) {
          const auto sys = build_system(ds);
          const auto rif = invariant_rif(sys, simple_if(sys));
          BootstrapConfig cfg;
          cfg.replications = replications;
          cfg.master_seed = seed;
          cfg.mode = pooled ? ResampleMode::PooledAcrossJournals : ResampleMode::ClusterWithinJournal;
          py::gil_scoped_release release;
          return run_bootstrap(ds, sys, rif, cfg, {}, workers).samples;
        },
        py::arg("dataset"), py::arg("replications") = 1000, py::arg("seed") = 0, py::arg("workers") = 1,
        py::arg("pooled") = false, "Bootstrap draws of the invariant RIF, shape (replications, journals).");

  m.def("empirical_ranks", [](const Eigen::VectorXd& v) { return empirical_ranks(v).ranks; }, py::arg("scores"));
  m.def("goldstein_rank_ci",
        [](const Eigen::MatrixXd& draws, double alpha) { return bounds(goldstein_rank_ci(draws, alpha)); },
        py::arg("draws"), py::arg("alpha") = 0.05, "Returns (lower, upper) integer rank bounds.");
  m.def("rank_confidence_sets",
        [](const Eigen::MatrixXd& draws, const Eigen::VectorXd& empirical, const std::vector<std::string>& methods,
           double alpha, double beta, const std::string& bandwidth_mode, const std::string& sigma_mode) {
          std::vector<RankMethod> parsed;
          for (const auto& name : methods) parsed.push_back(parse_rank_method(name));
          RankInferenceOptions opts;
          opts.alpha = alpha;
          opts.beta = beta;
          opts.xie_bandwidth = parse_bandwidth_mode(bandwidth_mode);
          opts.xie_sigma = parse_sigma_mode(sigma_mode);
          py::dict out;
          for (const auto& set : rank_confidence_sets(draws, empirical, parsed, opts)) {
            out[py::str(std::string(to_string(set.method)))] = bounds(set);
          }
          return out;
        },
        py::arg("draws"), py::arg("empirical"),
        py::arg("methods") = std::vector<std::string>{"goldstein", "xie", "xie_sigmadiff", "mogstad", "mogstad_cov"},
        py::arg("alpha") = 0.05, py::arg("beta") = 0.5, py::arg("bandwidth_mode") = "iqr",
        py::arg("sigma_mode") = "cov", "Returns {method: (lower, upper)}.");

  m.def("generate_synthetic",
        [](int n_journals, int articles_min, int articles_max, std::vector<double> quality,
           std::vector<double> citing_activity, double dispersion, double self_citation_boost, double base_rate,
           std::uint64_t seed) {
          SynthConfig cfg;
          cfg.n_journals = n_journals;
          cfg.articles_min = articles_min;
          cfg.articles_max = articles_max;
          cfg.quality = std::move(quality);
          cfg.citing_activity = std::move(citing_activity);
          cfg.dispersion = dispersion;
          cfg.self_citation_boost = self_citation_boost;
          cfg.base_rate = base_rate;
          cfg.seed = seed;
          auto s = generate(cfg);
          return py::make_tuple(std::move(s.dataset), s.true_quality_rank);
        },
        py::arg("n_journals") = 10, py::arg("articles_min") = 30, py::arg("articles_max") = 60,
        py::arg("quality") = std::vector<double>{}, py::arg("citing_activity") = std::vector<double>{},
        py::arg("dispersion") = 2.0, py::arg("self_citation_boost") = 0.0, py::arg("base_rate") = 0.5,
        py::arg("seed") = 0, "Returns (dataset, true quality midranks).");

  m.def("compute",
        [](const std::filesystem::path& j, const std::filesystem::path& a, const std::filesystem::path& c,
           const std::filesystem::path& out_dir, int replications, std::uint64_t seed, double alpha,
           unsigned workers) {
          RunConfig cfg;
          cfg.inputs = {j, a, c};
          cfg.out_dir = out_dir;
          cfg.replications = replications;
          cfg.seed = seed;
          cfg.alpha = alpha;
          cfg.workers = workers;
          std::ostringstream log;
          run_compute(cfg, log);
          return log.str();
        },
        py::arg("journals"), py::arg("articles"), py::arg("citations"), py::arg("out_dir"),
        py::arg("replications") = 1000, py::arg("seed") = 0, py::arg("alpha") = 0.05, py::arg("workers") = 1,
        "Full pipeline; writes results.csv, ensemble.csv, scores.csv and rank_widths.csv. Returns the log.");
}
