#include <doctest.h>

#include <random>

#include "oracles.hpp"
#include "rifci/error.hpp"
#include "rifci/impact.hpp"

using namespace rifci;
using Eigen::MatrixXd;
using Eigen::VectorXd;

namespace {

CrossCitationSystem toy_system() { return build_system(load_dataset(oracle::toy_sources())); }

double max_diff(const VectorXd& a, const VectorXd& b) { return (a - b).lpNorm<Eigen::Infinity>(); }

// Rayleigh residual of v under the dense matrix m.
double eigen_residual(const MatrixXd& m, const VectorXd& v) {
  const VectorXd mv = m * v;
  return (mv - v.dot(mv) * v).lpNorm<Eigen::Infinity>();
}

CrossCitationSystem random_system(std::mt19937_64& rng, Eigen::Index J) {
  std::uniform_int_distribution<int> cites(0, 40);
  std::uniform_int_distribution<int> arts(1, 30);
  MatrixXd c(J, J);
  for (Eigen::Index j = 0; j < J; ++j) {
    for (Eigen::Index i = 0; i < J; ++i) c(j, i) = 1 + cites(rng);
  }
  VectorXd a(J);
  for (Eigen::Index j = 0; j < J; ++j) a(j) = arts(rng);
  return CrossCitationSystem::from_matrix(c, a);
}

}  // namespace

TEST_CASE("simple_if examples") {
  MatrixXd c(2, 2);
  c << 4, 6, 0, 0;
  VectorXd a(2);
  a << 4, 3;
  const auto s = simple_if(CrossCitationSystem::from_matrix(c, a));
  CHECK(s.scores(0) == 2.5);
  CHECK(s.scores(1) == 0.0);
  CHECK(s.norm == Norm::Raw);
}

TEST_CASE("simple_if equals the per-article mean of citation totals") {
  const auto ds = load_dataset(oracle::toy_sources());
  const auto s = simple_if(build_system(ds));
  for (Eigen::Index j = 0; j < ds.journal_count(); ++j) {
    double total = 0;
    for (auto k = ds.article_offsets[j]; k < ds.article_offsets[j + 1]; ++k) {
      total += static_cast<double>(ds.citations.row(k).sum());
    }
    CHECK(s.scores(j) == doctest::Approx(total / static_cast<double>(ds.journals[j].article_count)).epsilon(1e-15));
  }
}

TEST_CASE("symmetric two-journal systems give equal scores") {
  MatrixXd c(2, 2);
  c << 0, 7, 7, 0;
  VectorXd a(2);
  a << 5, 5;
  const auto sys = CrossCitationSystem::from_matrix(c, a);
  const auto init = simple_if(sys);
  const double h = 1.0 / std::sqrt(2.0);
  CHECK(max_diff(invariant_rif(sys, init).scores, VectorXd::Constant(2, h)) < 1e-15);
  CHECK(max_diff(liebowitz_palmer(sys, init).scores, VectorXd::Constant(2, h)) < 1e-15);
  const auto k = koczy_modified(sys, init).scores;
  CHECK(k(0) == doctest::Approx(k(1)).epsilon(1e-15));
}

TEST_CASE("power-iteration methods match the dense eigensolver on the toy fixture") {
  const auto sys = toy_system();
  const auto init = simple_if(sys);
  const auto& c = sys.citations;
  const auto& a = sys.article_counts;

  const auto inv = invariant_rif(sys, init);
  CHECK(max_diff(inv.scores, oracle::dominant_eigenvector(oracle::invariant_matrix(c, a))) < 1e-9);
  CHECK(std::abs(inv.scores.norm() - 1.0) < 1e-12);
  CHECK(eigen_residual(oracle::invariant_matrix(c, a), inv.scores) <= 1e-9);

  const auto lp = liebowitz_palmer(sys, init);
  CHECK(max_diff(lp.scores, oracle::dominant_eigenvector(oracle::lp_matrix(c, a))) < 1e-9);
  CHECK(eigen_residual(oracle::lp_matrix(c, a), lp.scores) <= 1e-9);

  const auto kz = koczy_modified(sys, init);
  CHECK(max_diff(kz.scores, oracle::dominant_eigenvector(oracle::koczy_matrix(c))) < 1e-9);
  CHECK(eigen_residual(oracle::koczy_matrix(c), kz.scores) <= 1e-9);

  for (const auto* v : {&inv, &lp, &kz}) CHECK((v->scores.array() >= 0).all());
}

TEST_CASE("dominant-eigenvector oracle equivalence on random systems") {
  std::mt19937_64 rng(7);
  for (int rep = 0; rep < 10; ++rep) {
    const auto sys = random_system(rng, 2 + rep % 9);
    const auto init = simple_if(sys);
    CHECK(max_diff(invariant_rif(sys, init).scores,
                   oracle::dominant_eigenvector(oracle::invariant_matrix(sys.citations, sys.article_counts))) < 1e-9);
    CHECK(max_diff(liebowitz_palmer(sys, init).scores,
                   oracle::dominant_eigenvector(oracle::lp_matrix(sys.citations, sys.article_counts))) < 1e-9);
    CHECK(max_diff(koczy_modified(sys, init).scores,
                   oracle::dominant_eigenvector(oracle::koczy_matrix(sys.citations))) < 1e-9);
  }
}

TEST_CASE("invariant RIF ignores reference intensity; Liebowitz-Palmer does not") {
  const auto sys = toy_system();
  const auto base = invariant_rif(sys, simple_if(sys)).scores;
  const auto lp_base = liebowitz_palmer(sys, simple_if(sys)).scores;
  for (double factor : {0.1, 3.0, 100.0}) {
    for (Eigen::Index i = 0; i < 3; ++i) {
      MatrixXd c = sys.citations;
      c.col(i) *= factor;
      const auto scaled = CrossCitationSystem::from_matrix(c, sys.article_counts);
      CHECK(max_diff(invariant_rif(scaled, simple_if(scaled)).scores, base) < 1e-10);
      CHECK(max_diff(liebowitz_palmer(scaled, simple_if(scaled)).scores, lp_base) > 1e-6);
    }
  }
}

TEST_CASE("Liebowitz-Palmer ordering can differ from invariant ordering") {
  // Journal 2 writes long reference lists, all to journal 1; journal 3 writes
  // short ones, all to journal 0. Raw counts favour 1, intensity-adjusted favour 0.
  MatrixXd c(4, 4);
  c << 1, 1, 10, 4,
       1, 1, 20, 1,
       2, 2, 10, 1,
       2, 2, 10, 1;
  const VectorXd a = VectorXd::Constant(4, 10);
  const auto sys = CrossCitationSystem::from_matrix(c, a);
  const auto inv = invariant_rif(sys, simple_if(sys)).scores;
  const auto lp = liebowitz_palmer(sys, simple_if(sys)).scores;
  CHECK(inv(0) > inv(1));
  CHECK(lp(1) > lp(0));
}

TEST_CASE("Koczy scores are unchanged by article splitting; invariant scores change") {
  // Journal 0 splits every article in two: a_0 doubles, C is unchanged.
  const auto sys = toy_system();
  VectorXd split_a = sys.article_counts;
  split_a(0) *= 2;
  const auto split = CrossCitationSystem::from_matrix(sys.citations, split_a);
  const auto k0 = koczy_modified(sys, simple_if(sys)).scores;
  const auto k1 = koczy_modified(split, simple_if(split)).scores;
  CHECK(max_diff(k0, k1) < 1e-12);
  const auto i0 = invariant_rif(sys, simple_if(sys)).scores;
  const auto i1 = invariant_rif(split, simple_if(split)).scores;
  CHECK(max_diff(i0, i1) > 1e-3);
}

TEST_CASE("row sums of A^-1 C reproduce the simple IF exactly") {
  const auto sys = toy_system();
  const auto s = simple_if(sys);
  for (Eigen::Index j = 0; j < 3; ++j) {
    // Common denominator a_j: the rational sum is (sum_i c_ji) / a_j.
    long long numerator = 0;
    for (Eigen::Index i = 0; i < 3; ++i) numerator += static_cast<long long>(sys.citations(j, i));
    CHECK(s.scores(j) == static_cast<double>(numerator) / sys.article_counts(j));
  }
}

TEST_CASE("power iteration is invariant to positive scaling of the start vector") {
  const auto sys = toy_system();
  auto init = simple_if(sys);
  const auto v1 = invariant_rif(sys, init).scores;
  init.scores *= 7.0;
  const auto v2 = invariant_rif(sys, init).scores;
  CHECK(max_diff(v1, v2) <= 1e-12);
}

TEST_CASE("nearly periodic systems still converge to the dominant eigenvector") {
  // V has eigenvalues 1 and about -0.95, so unshifted steps oscillate.
  MatrixXd c(3, 3);
  c << 1, 0, 5, 0, 0, 6, 8, 2, 0;
  const VectorXd a = (VectorXd(3) << 4, 3, 5).finished();
  const auto sys = CrossCitationSystem::from_matrix(c, a);
  const auto v = invariant_rif(sys, simple_if(sys));
  const MatrixXd m = oracle::invariant_matrix(c, a);
  CHECK(v.iterations > 200);
  CHECK(eigen_residual(m, v.scores) <= 1e-9);
  CHECK(max_diff(v.scores, oracle::dominant_eigenvector(m)) <= 1e-9);
}

TEST_CASE("power iteration configuration and failures") {
  const auto sys = toy_system();
  const auto init = simple_if(sys);
  const auto fixed = invariant_rif(sys, init, PowerIterationConfig::fixed(20));
  CHECK(fixed.iterations == 20);
  CHECK(std::abs(fixed.scores.norm() - 1.0) < 1e-12);
  CHECK(invariant_rif(sys, init).iterations <= 200);

  CHECK_THROWS_AS(invariant_rif(sys, init, PowerIterationConfig{1, 1e-15}), NumericalError);

  ImpactVector bad = init;
  bad.scores(0) = -1;
  CHECK_THROWS_AS(invariant_rif(sys, bad), std::invalid_argument);
  bad.scores.setZero();
  CHECK_THROWS_AS(invariant_rif(sys, bad), std::invalid_argument);

  MatrixXd c = sys.citations;
  c.col(1).setZero();
  const auto singular = CrossCitationSystem::from_matrix(c, sys.article_counts);
  CHECK_THROWS_AS(invariant_rif(singular, simple_if(singular)), NumericalError);
}

TEST_CASE("eigenfactor") {
  SUBCASE("uniform off-diagonal citations give 1/J each") {
    MatrixXd c = MatrixXd::Constant(4, 4, 3.0);
    c.diagonal().setConstant(9.0);
    const auto res = eigenfactor(CrossCitationSystem::from_matrix(c, VectorXd::Constant(4, 8)));
    CHECK(max_diff(res.eigenfactor.scores, VectorXd::Constant(4, 0.25)) < 1e-12);
    CHECK(max_diff(res.article_influence.scores, VectorXd::Constant(4, 0.25 / 8)) < 1e-12);
  }
  SUBCASE("toy fixture matches the dense oracle") {
    const auto sys = toy_system();
    const auto res = eigenfactor(sys, {0.85});
    CHECK(max_diff(res.eigenfactor.scores, oracle::eigenfactor_oracle(sys.citations, sys.article_counts, 0.85)) <
          1e-9);
    CHECK(std::abs(res.eigenfactor.scores.sum() - 1.0) < 1e-12);
    CHECK(res.eigenfactor.norm == Norm::SumOne);
  }
  SUBCASE("small rho approaches H a normalized") {
    const auto sys = toy_system();
    const auto res = eigenfactor(sys, {1e-9});
    MatrixXd h = sys.citations;
    h.diagonal().setZero();
    for (Eigen::Index i = 0; i < 3; ++i) h.col(i) /= h.col(i).sum();
    VectorXd ha = h * (sys.article_counts / sys.article_counts.sum());
    ha /= ha.sum();
    CHECK(max_diff(res.eigenfactor.scores, ha) < 1e-7);
  }
  SUBCASE("zero columns use the article shares") {
    MatrixXd c(3, 3);
    c << 0, 2, 0,
         1, 0, 0,
         3, 1, 0;
    VectorXd a(3);
    a << 1, 2, 3;
    const auto sys = CrossCitationSystem::from_matrix(c, a);
    CHECK(max_diff(eigenfactor(sys).eigenfactor.scores, oracle::eigenfactor_oracle(c, a, 0.85)) < 1e-9);
  }
  SUBCASE("no cross citations is an error") {
    MatrixXd c = MatrixXd::Zero(2, 2);
    c.diagonal().setConstant(5);
    CHECK_THROWS_AS(eigenfactor(CrossCitationSystem::from_matrix(c, VectorXd::Ones(2))), NumericalError);
  }
}

TEST_CASE("rescale") {
  ImpactVector v{Method::Invariant, VectorXd(2), Norm::UnitEuclidean, 0};
  v.scores << 0.6, 0.8;
  const auto top = rescale(v, Norm::Top100);
  CHECK(top.scores(0) == doctest::Approx(75.0).epsilon(1e-15));
  CHECK(top.scores(1) == 100.0);
  const auto back = rescale(top, Norm::UnitEuclidean);
  CHECK(max_diff(back.scores, v.scores) < 1e-12);
  const auto sum = rescale(v, Norm::SumOne);
  CHECK(std::abs(sum.scores.sum() - 1.0) < 1e-12);

  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(0.0, 5.0);
  for (int rep = 0; rep < 50; ++rep) {
    ImpactVector r{Method::Simple, VectorXd(6), Norm::Raw, 0};
    for (int i = 0; i < 6; ++i) r.scores(i) = u(rng);
    Eigen::Index before = 0, after = 0;
    r.scores.maxCoeff(&before);
    for (auto n : {Norm::UnitEuclidean, Norm::Top100, Norm::SumOne}) {
      rescale(r, n).scores.maxCoeff(&after);
      CHECK(before == after);
    }
  }
  ImpactVector zero{Method::Simple, VectorXd::Zero(2), Norm::Raw, 0};
  CHECK_THROWS_AS(rescale(zero, Norm::Top100), std::invalid_argument);
}
