#include <doctest.h>

#include <sstream>

#include "oracles.hpp"
#include "rifci/dataset.hpp"
#include "rifci/error.hpp"

using namespace rifci;

namespace {

CitationDataset from_strings(const std::string& j, const std::string& a, const std::string& c) {
  std::istringstream js(j), as(a), cs(c);
  return load_dataset(js, as, cs);
}

// Journal X gives `x_out` citations, Y and Z give plenty.
CitationDataset low_citer_fixture(int x_out) {
  std::string cites = "article_id,citing_issn,count\n"
                      "y1,Z,20\ny2,Z,20\nz1,Y,20\nz2,Y,20\ny1,Y,5\nz1,Z,5\n";
  if (x_out > 0) cites += "y1,X," + std::to_string(x_out) + "\n";
  cites += "x1,Y,3\n";
  return from_strings("issn,name,article_count\nX,Low,1\nY,Mid,2\nZ,High,2\n",
                      "article_id,issn\nx1,X\ny1,Y\ny2,Y\nz1,Z\nz2,Z\n", cites);
}

}  // namespace

TEST_CASE("load_dataset builds a sorted, validated dataset") {
  const auto ds = from_strings(
      "issn,name,article_count\nB,Beta,2\nA,Alpha,2\nC,Gamma,1\n",
      "article_id,issn\nb2,B\na1,A\nb1,B\na2,A\nc1,C\n",
      "article_id,citing_issn,count\na1,B,2\na1,C,1\nb1,A,3\nb2,C,1\nc1,A,1\nc1,B,4\na2,A,1\n");
  CHECK(ds.article_count() == 5);
  CHECK(ds.journal_count() == 3);
  CHECK(ds.citations.nonZeros() == 7);
  CHECK(ds.journals[0].issn == "A");
  CHECK(ds.article_ids == std::vector<std::string>{"a1", "a2", "b1", "b2", "c1"});
  CHECK(ds.article_offsets == std::vector<Index>{0, 2, 4, 5});
  CHECK(ds.citations.coeff(2, 0) == 3);  // b1 cited by A
}

TEST_CASE("toy fixture loads with the documented shape") {
  const auto ds = load_dataset(oracle::toy_sources());
  CHECK(ds.journal_count() == 3);
  CHECK(ds.article_count() == 12);
  CHECK(ds.journals[2].name == "Gamma Quarterly, Series B");
  // Loading twice yields identical layouts.
  CHECK(ds == load_dataset(oracle::toy_sources()));
}

TEST_CASE("load_dataset rejects broken references") {
  const std::string journals = "issn,name,article_count\nA,Alpha,1\nB,Beta,1\n";
  const std::string articles = "article_id,issn\na1,A\nb1,B\n";
  CHECK_THROWS_AS(from_strings(journals, articles, "article_id,citing_issn,count\nzz,A,1\n"), DataError);
  CHECK_THROWS_AS(from_strings(journals, articles, "article_id,citing_issn,count\na1,Q,1\n"), DataError);
  CHECK_THROWS_AS(from_strings(journals, articles, "article_id,citing_issn,count\na1,B,1\na1,B,2\n"), DataError);
  CHECK_THROWS_AS(from_strings(journals, articles, "article_id,citing_issn,count\na1,B,0\n"), DataError);
  CHECK_THROWS_AS(from_strings("issn,name,article_count\nA,Alpha,2\nB,Beta,1\n", articles,
                               "article_id,citing_issn,count\n"),
                  DataError);
  CHECK_THROWS_AS(from_strings("issn,name,article_count\nA,Alpha,1\nA,Again,1\n", articles,
                               "article_id,citing_issn,count\n"),
                  DataError);
  CHECK_THROWS_AS(from_strings(journals, "article_id,issn\na1,A\nb1,Z\n", "article_id,citing_issn,count\n"),
                  DataError);
}

TEST_CASE("missing file error names the path") {
  auto src = oracle::toy_sources();
  src.citations = "/nonexistent/citations.csv";
  try {
    load_dataset(src);
    FAIL("expected DataError");
  } catch (const DataError& e) {
    CHECK(std::string(e.what()).find("/nonexistent/citations.csv") != std::string::npos);
  }
}

TEST_CASE("filter_low_citers removes journals below the threshold") {
  SUBCASE("11 outgoing citations with threshold 12") {
    const auto res = filter_low_citers(low_citer_fixture(11), 12);
    REQUIRE(res.removed.size() == 1);
    CHECK(res.removed[0].journal.issn == "X");
    CHECK(res.removed[0].outgoing == 11);
    CHECK(res.dataset.journal_count() == 2);
    CHECK(res.dataset.article_count() == 4);
    // X's incoming citations disappear with its article row.
    CHECK(build_system(res.dataset).citations.sum() == 40 + 40 + 10);
  }
  SUBCASE("4 outgoing citations with threshold 12") {
    const auto res = filter_low_citers(low_citer_fixture(4), 12);
    REQUIRE(res.removed.size() == 1);
    CHECK(res.removed[0].outgoing == 4);
  }
  SUBCASE("all above threshold returns the dataset unchanged") {
    const auto ds = low_citer_fixture(30);
    const auto res = filter_low_citers(ds, 12);
    CHECK(res.removed.empty());
    CHECK(res.dataset == ds);
  }
  SUBCASE("fewer than two survivors is an error") {
    CHECK_THROWS_AS(filter_low_citers(low_citer_fixture(30), 1000), DataError);
  }
}

TEST_CASE("filter_low_citers iterates to a fixed point and is idempotent") {
  // W only cites V; V cites W and U. Removing W drops V below threshold.
  const auto ds = from_strings(
      "issn,name,article_count\nU,U,1\nV,V,1\nW,W,1\nX,X,1\n",
      "article_id,issn\nu,U\nv,V\nw,W\nx,X\n",
      "article_id,citing_issn,count\nu,X,50\nx,U,50\nw,V,6\nu,V,6\nv,W,5\n");
  const auto res = filter_low_citers(ds, 10);
  CHECK(res.removed.size() == 2);
  CHECK(res.dataset.journal_count() == 2);
  const auto again = filter_low_citers(res.dataset, 10);
  CHECK(again.removed.empty());
  CHECK(again.dataset == res.dataset);
}

TEST_CASE("build_system matches the dense Q P product") {
  const auto ds = load_dataset(oracle::toy_sources());
  const auto sys = build_system(ds);
  const auto dense = oracle::dense_qp(ds);
  CHECK(sys.citations == dense);
  // Mass conservation and D as column sums.
  long long p_total = 0;
  for (Index k = 0; k < ds.citations.outerSize(); ++k) {
    for (CountMatrix::InnerIterator it(ds.citations, k); it; ++it) p_total += it.value();
  }
  CHECK(sys.citations.sum() == static_cast<double>(p_total));
  for (Index i = 0; i < 3; ++i) CHECK(sys.outgoing(i) == dense.col(i).sum());
  CHECK(sys.article_counts(0) == 4);
  CHECK(sys.outgoing(0) == 12);
}

TEST_CASE("build_system single entry and singular D") {
  const auto ds = from_strings("issn,name,article_count\nA,A,1\nB,B,1\n", "article_id,issn\na,A\nb,B\n",
                               "article_id,citing_issn,count\na,B,2\nb,A,1\n");
  const auto sys = build_system(ds);
  CHECK(sys.citations(0, 1) == 2);
  CHECK(sys.citations(0, 0) == 0);

  const auto silent = from_strings("issn,name,article_count\nA,A,1\nB,B,1\n", "article_id,issn\na,A\nb,B\n",
                                   "article_id,citing_issn,count\na,B,2\n");
  CHECK_THROWS_AS(build_system(silent), DataError);
}

TEST_CASE("write_dataset round trips through load_dataset") {
  const auto ds = load_dataset(oracle::toy_sources());
  const auto dir = std::filesystem::temp_directory_path() / "rifci_roundtrip";
  std::filesystem::create_directories(dir);
  const DatasetSources out{dir / "j.csv", dir / "a.csv", dir / "c.csv"};
  write_dataset(ds, out);
  CHECK(load_dataset(out) == ds);
}
