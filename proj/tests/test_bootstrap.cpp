#include <doctest.h>

#include <cmath>
#include <sstream>

#include "oracles.hpp"
#include "rifci/bootstrap.hpp"
#include "rifci/error.hpp"
#include "rifci/synth.hpp"

using namespace rifci;
using Eigen::MatrixXd;
using Eigen::VectorXd;

namespace {

struct Fit {
  CitationDataset ds;
  CrossCitationSystem sys;
  ImpactVector rif;
};

Fit fit(CitationDataset ds) {
  auto sys = build_system(ds);
  auto rif = invariant_rif(sys, simple_if(sys));
  return {std::move(ds), std::move(sys), std::move(rif)};
}

Fit toy() { return fit(load_dataset(oracle::toy_sources())); }

CitationDataset one_article_each() {
  std::istringstream j("issn,name,article_count\nA,A,1\nB,B,1\nC,C,1\n");
  std::istringstream a("article_id,issn\na,A\nb,B\nc,C\n");
  std::istringstream c("article_id,citing_issn,count\na,B,3\na,C,1\nb,A,2\nb,C,2\nc,A,1\nc,B,4\n");
  return load_dataset(j, a, c);
}

}  // namespace

TEST_CASE("cluster_resample preserves clusters") {
  const auto f = toy();
  auto rng = iteration_stream(11, 0);
  for (int rep = 0; rep < 50; ++rep) {
    const auto draw = cluster_resample(f.ds, rng);
    REQUIRE(draw.articles.size() == static_cast<std::size_t>(f.ds.article_count()));
    for (std::size_t r = 0; r < draw.articles.size(); ++r) {
      const auto j = static_cast<std::size_t>(draw.owners[r]);
      CHECK(draw.articles[r] >= f.ds.article_offsets[j]);
      CHECK(draw.articles[r] < f.ds.article_offsets[j + 1]);
    }
    for (Eigen::Index j = 0; j < f.ds.journal_count(); ++j) {
      CHECK(draw.article_counts(j) == static_cast<double>(f.ds.journals[j].article_count));
    }
  }
}

TEST_CASE("a singleton journal always contributes its own block") {
  const auto ds = one_article_each();
  auto rng = iteration_stream(5, 3);
  const auto draw = cluster_resample(ds, rng);
  CHECK(resampled_system(ds, draw).citations == build_system(ds).citations);
}

TEST_CASE("selection frequencies are uniform within a journal") {
  // Four-article journal: each of 4 draws picks article i with p = 1/4.
  const auto f = toy();
  const int reps = 10000;
  std::vector<int> hits(4, 0);
  for (int rep = 0; rep < reps; ++rep) {
    auto rng = iteration_stream(99, static_cast<std::uint64_t>(rep));
    const auto draw = cluster_resample(f.ds, rng);
    for (std::size_t r = 0; r < 4; ++r) ++hits[static_cast<std::size_t>(draw.articles[r])];
  }
  const double n = 4.0 * reps;
  const double sd = std::sqrt(n * 0.25 * 0.75);
  for (int h : hits) CHECK(std::abs(h - n * 0.25) <= 3 * sd);
}

TEST_CASE("uniform_index stays in range and hits every value") {
  auto rng = iteration_stream(1, 2, 3);
  std::vector<int> seen(7, 0);
  for (int i = 0; i < 7000; ++i) {
    const auto x = uniform_index(rng, 7);
    REQUIRE(x < 7);
    ++seen[x];
  }
  for (int s : seen) CHECK(s > 800);
}

TEST_CASE("one article per journal reproduces the empirical RIF") {
  const auto f = fit(one_article_each());
  BootstrapConfig cfg;
  cfg.replications = 1;
  const auto ens = run_bootstrap(f.ds, f.sys, f.rif, cfg);
  CHECK((ens.samples.row(0).transpose() - f.rif.scores).lpNorm<Eigen::Infinity>() < 1e-12);
}

TEST_CASE("bootstrap is deterministic and independent of worker count") {
  const auto f = toy();
  BootstrapConfig cfg;
  cfg.replications = 64;
  cfg.master_seed = 2024;
  const auto a = run_bootstrap(f.ds, f.sys, f.rif, cfg, {}, 1);
  const auto b = run_bootstrap(f.ds, f.sys, f.rif, cfg, {}, 1);
  const auto c = run_bootstrap(f.ds, f.sys, f.rif, cfg, {}, 3);
  CHECK(a.samples == b.samples);
  CHECK(a.samples == c.samples);
  CHECK(a.redraws == c.redraws);
  for (Eigen::Index r = 0; r < a.samples.rows(); ++r) CHECK(std::abs(a.samples.row(r).norm() - 1.0) < 1e-9);
  cfg.master_seed = 2025;
  CHECK(run_bootstrap(f.ds, f.sys, f.rif, cfg).samples != a.samples);
}

TEST_CASE("singular resamples are redrawn and an exhausted budget is reported") {
  // Journal B's only outgoing citations sit on one of A's 30 articles, so
  // most resamples of A leave B with D_b = 0.
  std::string articles = "article_id,issn\nb1,B\nc1,C\n";
  std::string journals = "issn,name,article_count\nA,A,30\nB,B,1\nC,C,1\n";
  std::string cites = "article_id,citing_issn,count\na00,B,1\nb1,A,3\nc1,A,3\nb1,C,2\nc1,C,2\n";
  for (int k = 0; k < 30; ++k) {
    char id[8];
    std::snprintf(id, sizeof id, "a%02d", k);
    articles += std::string(id) + ",A\n";
    cites += std::string(id) + ",C,1\n";
  }
  std::istringstream js(journals), as(articles), cs(cites);
  const auto f = fit(load_dataset(js, as, cs));

  BootstrapConfig cfg;
  cfg.replications = 20;
  cfg.max_redraws_per_iteration = 200;
  const auto ens = run_bootstrap(f.ds, f.sys, f.rif, cfg);
  CHECK(ens.redraw_count() > 0);
  for (Eigen::Index r = 0; r < ens.samples.rows(); ++r) CHECK(std::abs(ens.samples.row(r).norm() - 1.0) < 1e-9);

  cfg.max_redraws_per_iteration = 0;
  CHECK_THROWS_AS(run_bootstrap(f.ds, f.sys, f.rif, cfg), NumericalError);
}

TEST_CASE("bootstrap SE agrees with a naive dense reimplementation") {
  const auto f = toy();
  BootstrapConfig cfg;
  cfg.replications = 2000;
  cfg.master_seed = 17;
  const auto ens = run_bootstrap(f.ds, f.sys, f.rif, cfg);
  const auto ours = summarize_scores(ens, 0.05);
  const auto naive = summarize_scores(oracle::naive_bootstrap(f.ds, 2000, 4242), 0.05);
  for (std::size_t j = 0; j < ours.size(); ++j) {
    CHECK(ours[j].standard_error == doctest::Approx(naive[j].standard_error).epsilon(0.10));
    // Centering: bootstrap mean within a few SEs of the empirical score.
    CHECK(std::abs(ours[j].mean - f.rif.scores(static_cast<Eigen::Index>(j))) < 3 * ours[j].standard_error);
  }
}

TEST_CASE("pooled resampling gives similar SEs on a symmetric two-journal design") {
  SynthConfig sc;
  sc.n_journals = 2;
  sc.quality = {1.0, 1.0};
  sc.articles_min = sc.articles_max = 200;
  sc.base_rate = 2.0;
  sc.seed = 8;
  const auto f = fit(generate(sc).dataset);
  BootstrapConfig cfg;
  cfg.replications = 1000;
  const auto cluster = summarize_scores(run_bootstrap(f.ds, f.sys, f.rif, cfg), 0.05);
  cfg.mode = ResampleMode::PooledAcrossJournals;
  const auto pooled = summarize_scores(run_bootstrap(f.ds, f.sys, f.rif, cfg), 0.05);
  for (std::size_t j = 0; j < 2; ++j) {
    CHECK(pooled[j].standard_error == doctest::Approx(cluster[j].standard_error).epsilon(0.2));
  }
}

TEST_CASE("pooled resample lets per-journal counts vary") {
  const auto f = toy();
  auto rng = iteration_stream(3, 1);
  bool varied = false;
  for (int rep = 0; rep < 20; ++rep) {
    const auto draw = pooled_resample(f.ds, rng);
    CHECK(draw.article_counts.sum() == 12);
    if (draw.article_counts(0) != 4) varied = true;
  }
  CHECK(varied);
}

TEST_CASE("summarize_scores") {
  SUBCASE("constant column") {
    MatrixXd s = MatrixXd::Constant(10, 1, 0.3);
    const auto sum = summarize_scores(s, 0.05);
    CHECK(sum[0].standard_error < 1e-15);
    CHECK(sum[0].ci_lower == 0.3);
    CHECK(sum[0].ci_upper == 0.3);
  }
  SUBCASE("type-7 percentiles of 1..5") {
    // alpha = 0.2: p = 0.1 -> h = 0.4 -> 1.4; p = 0.9 -> h = 3.6 -> 4.6.
    MatrixXd s(5, 1);
    s << 3, 1, 5, 2, 4;
    const auto sum = summarize_scores(s, 0.2);
    CHECK(sum[0].ci_lower == doctest::Approx(1.4).epsilon(1e-14));
    CHECK(sum[0].ci_upper == doctest::Approx(4.6).epsilon(1e-14));
    CHECK(sum[0].mean == 3.0);
    CHECK(sum[0].standard_error == doctest::Approx(std::sqrt(2.5)).epsilon(1e-14));
  }
  SUBCASE("needs two draws") { CHECK_THROWS_AS(summarize_scores(MatrixXd::Ones(1, 3), 0.05), std::invalid_argument); }
}

TEST_CASE("ensemble CSV round trip is exact") {
  const auto f = toy();
  BootstrapConfig cfg;
  cfg.replications = 25;
  const auto ens = run_bootstrap(f.ds, f.sys, f.rif, cfg);
  std::stringstream buffer;
  write_ensemble_csv(buffer, ens.issns, ens.samples);
  const auto back = read_ensemble_csv(buffer);
  CHECK(back.issns == ens.issns);
  CHECK(back.samples == ens.samples);

  std::istringstream broken("A,B\n0.1,zz\n");
  CHECK_THROWS_AS(read_ensemble_csv(broken), DataError);
}
