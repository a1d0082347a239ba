#include "rifci/dataset.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <numeric>
#include <set>
#include <stdexcept>
#include <unordered_map>

#include "rifci/csv.hpp"
#include "rifci/error.hpp"

namespace rifci {

namespace {

std::int64_t parse_count(const std::string& text, std::string_view what) {
  std::size_t used = 0;
  long long value = 0;
  try {
    value = std::stoll(text, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != text.size()) {
    throw DataError(std::string(what) + ": '" + text + "' is not an integer");
  }
  return value;
}

using Triplet = Eigen::Triplet<std::int64_t, Index>;

CountMatrix make_matrix(Index rows, Index cols, const std::vector<Triplet>& entries) {
  CountMatrix m(rows, cols);
  m.setFromTriplets(entries.begin(), entries.end());
  m.makeCompressed();
  return m;
}

CitationDataset load_tables(const csv::Table& jt, const csv::Table& at, const csv::Table& ct,
                            std::string_view jsrc, std::string_view asrc, std::string_view csrc) {
  const auto j_issn = jt.column("issn", jsrc);
  const auto j_name = jt.column("name", jsrc);
  const auto j_count = jt.column("article_count", jsrc);

  std::vector<Journal> journals;
  journals.reserve(jt.rows.size());
  for (const auto& row : jt.rows) {
    Journal j{row[j_issn], row[j_name], parse_count(row[j_count], std::string(jsrc) + " article_count")};
    if (j.issn.empty()) throw DataError(std::string(jsrc) + ": empty issn");
    if (j.article_count < 1) {
      throw DataError(std::string(jsrc) + ": journal " + j.issn + " has article_count < 1");
    }
    journals.push_back(std::move(j));
  }
  std::sort(journals.begin(), journals.end(),
            [](const Journal& a, const Journal& b) { return a.issn < b.issn; });
  for (std::size_t i = 1; i < journals.size(); ++i) {
    if (journals[i].issn == journals[i - 1].issn) {
      throw DataError(std::string(jsrc) + ": duplicate issn " + journals[i].issn);
    }
  }
  std::unordered_map<std::string, Index> journal_index;
  for (std::size_t i = 0; i < journals.size(); ++i) {
    journal_index.emplace(journals[i].issn, static_cast<Index>(i));
  }

  const auto a_id = at.column("article_id", asrc);
  const auto a_issn = at.column("issn", asrc);
  std::vector<std::vector<std::string>> per_journal(journals.size());
  std::set<std::string> seen_articles;
  for (const auto& row : at.rows) {
    const auto it = journal_index.find(row[a_issn]);
    if (it == journal_index.end()) {
      throw DataError(std::string(asrc) + ": article " + row[a_id] + " references unknown journal " +
                      row[a_issn]);
    }
    if (row[a_id].empty()) throw DataError(std::string(asrc) + ": empty article_id");
    if (!seen_articles.insert(row[a_id]).second) {
      throw DataError(std::string(asrc) + ": duplicate article_id " + row[a_id]);
    }
    per_journal[static_cast<std::size_t>(it->second)].push_back(row[a_id]);
  }

  CitationDataset ds;
  ds.journals = std::move(journals);
  ds.article_offsets.push_back(0);
  std::unordered_map<std::string, Index> article_row;
  for (std::size_t j = 0; j < per_journal.size(); ++j) {
    auto& ids = per_journal[j];
    if (static_cast<std::int64_t>(ids.size()) != ds.journals[j].article_count) {
      throw DataError(std::string(asrc) + ": journal " + ds.journals[j].issn + " declares " +
                      std::to_string(ds.journals[j].article_count) + " articles but has " +
                      std::to_string(ids.size()) + " article rows");
    }
    std::sort(ids.begin(), ids.end());
    for (auto& id : ids) {
      article_row.emplace(id, static_cast<Index>(ds.article_ids.size()));
      ds.article_ids.push_back(std::move(id));
    }
    ds.article_offsets.push_back(static_cast<Index>(ds.article_ids.size()));
  }

  const auto c_article = ct.column("article_id", csrc);
  const auto c_citing = ct.column("citing_issn", csrc);
  const auto c_count = ct.column("count", csrc);
  std::vector<Triplet> entries;
  entries.reserve(ct.rows.size());
  std::set<std::pair<Index, Index>> pairs;
  for (const auto& row : ct.rows) {
    const auto art = article_row.find(row[c_article]);
    if (art == article_row.end()) {
      throw DataError(std::string(csrc) + ": unknown article id " + row[c_article]);
    }
    const auto citing = journal_index.find(row[c_citing]);
    if (citing == journal_index.end()) {
      throw DataError(std::string(csrc) + ": unknown citing issn " + row[c_citing]);
    }
    const auto count = parse_count(row[c_count], std::string(csrc) + " count");
    if (count < 1) {
      throw DataError(std::string(csrc) + ": count must be >= 1 for article " + row[c_article]);
    }
    if (!pairs.emplace(art->second, citing->second).second) {
      throw DataError(std::string(csrc) + ": duplicate row for article " + row[c_article] +
                      " and citing journal " + row[c_citing]);
    }
    entries.emplace_back(art->second, citing->second, count);
  }
  ds.citations = make_matrix(ds.article_count(), ds.journal_count(), entries);
  ds.validate();
  return ds;
}

}  // namespace

void CitationDataset::validate() const {
  const auto J = journals.size();
  if (article_offsets.size() != J + 1 || article_offsets.front() != 0) {
    throw DataError("article offsets do not match journal list");
  }
  for (std::size_t j = 0; j < J; ++j) {
    if (journals[j].issn.empty()) throw DataError("empty issn");
    if (j > 0 && !(journals[j - 1].issn < journals[j].issn)) {
      throw DataError("journals not strictly sorted by issn at " + journals[j].issn);
    }
    if (journals[j].article_count < 1) throw DataError("journal " + journals[j].issn + " has no articles");
    if (article_offsets[j + 1] - article_offsets[j] != journals[j].article_count) {
      throw DataError("journal " + journals[j].issn + " article rows do not match article_count");
    }
    for (Index k = article_offsets[j] + 1; k < article_offsets[j + 1]; ++k) {
      if (!(article_ids[static_cast<std::size_t>(k - 1)] < article_ids[static_cast<std::size_t>(k)])) {
        throw DataError("articles of journal " + journals[j].issn + " not strictly ordered");
      }
    }
  }
  if (static_cast<Index>(article_ids.size()) != article_offsets.back()) {
    throw DataError("article id list does not match article offsets");
  }
  if (citations.rows() != article_count() || citations.cols() != journal_count()) {
    throw DataError("citation matrix has the wrong shape");
  }
  for (Index k = 0; k < citations.outerSize(); ++k) {
    for (CountMatrix::InnerIterator it(citations, k); it; ++it) {
      if (it.value() < 0) throw DataError("negative citation count");
    }
  }
}

bool CitationDataset::operator==(const CitationDataset& other) const {
  if (journals != other.journals || article_ids != other.article_ids ||
      article_offsets != other.article_offsets) {
    return false;
  }
  if (citations.rows() != other.citations.rows() || citations.cols() != other.citations.cols() ||
      citations.nonZeros() != other.citations.nonZeros()) {
    return false;
  }
  return std::equal(citations.outerIndexPtr(), citations.outerIndexPtr() + citations.outerSize() + 1,
                    other.citations.outerIndexPtr()) &&
         std::equal(citations.innerIndexPtr(), citations.innerIndexPtr() + citations.nonZeros(),
                    other.citations.innerIndexPtr()) &&
         std::equal(citations.valuePtr(), citations.valuePtr() + citations.nonZeros(),
                    other.citations.valuePtr());
}

CrossCitationSystem CrossCitationSystem::from_matrix(Eigen::MatrixXd citations,
                                                     Eigen::VectorXd article_counts) {
  if (citations.rows() != citations.cols() || citations.rows() != article_counts.size()) {
    throw std::invalid_argument("citation matrix must be J x J with J article counts");
  }
  CrossCitationSystem sys;
  sys.outgoing = citations.colwise().sum().transpose();
  sys.citations = std::move(citations);
  sys.article_counts = std::move(article_counts);
  return sys;
}

CitationDataset load_dataset(const DatasetSources& sources) {
  const auto jt = csv::read_file(sources.journals);
  const auto at = csv::read_file(sources.articles);
  const auto ct = csv::read_file(sources.citations);
  return load_tables(jt, at, ct, sources.journals.string(), sources.articles.string(),
                     sources.citations.string());
}

CitationDataset load_dataset(std::istream& journals, std::istream& articles, std::istream& citations) {
  const auto jt = csv::read(journals, "journals");
  const auto at = csv::read(articles, "articles");
  const auto ct = csv::read(citations, "citations");
  return load_tables(jt, at, ct, "journals", "articles", "citations");
}

void write_dataset(const CitationDataset& ds, const DatasetSources& targets) {
  auto open = [](const std::filesystem::path& p) {
    std::ofstream out(p, std::ios::binary);
    if (!out) throw DataError("cannot write '" + p.string() + "'");
    return out;
  };
  {
    auto out = open(targets.journals);
    csv::write_row(out, {"issn", "name", "article_count"});
    for (const auto& j : ds.journals) csv::write_row(out, {j.issn, j.name, std::to_string(j.article_count)});
  }
  {
    auto out = open(targets.articles);
    csv::write_row(out, {"article_id", "issn"});
    for (std::size_t j = 0; j < ds.journals.size(); ++j) {
      for (Index k = ds.article_offsets[j]; k < ds.article_offsets[j + 1]; ++k) {
        csv::write_row(out, {ds.article_ids[static_cast<std::size_t>(k)], ds.journals[j].issn});
      }
    }
  }
  {
    auto out = open(targets.citations);
    csv::write_row(out, {"article_id", "citing_issn", "count"});
    for (Index k = 0; k < ds.citations.outerSize(); ++k) {
      for (CountMatrix::InnerIterator it(ds.citations, k); it; ++it) {
        if (it.value() == 0) continue;
        csv::write_row(out, {ds.article_ids[static_cast<std::size_t>(k)],
                             ds.journals[static_cast<std::size_t>(it.col())].issn,
                             std::to_string(it.value())});
      }
    }
  }
}

std::vector<std::int64_t> outgoing_citations(const CitationDataset& ds) {
  std::vector<std::int64_t> out(ds.journals.size(), 0);
  for (Index k = 0; k < ds.citations.outerSize(); ++k) {
    for (CountMatrix::InnerIterator it(ds.citations, k); it; ++it) {
      out[static_cast<std::size_t>(it.col())] += it.value();
    }
  }
  return out;
}

FilterResult filter_low_citers(const CitationDataset& ds, std::int64_t min_outgoing) {
  if (min_outgoing < 1) throw std::invalid_argument("min_outgoing must be positive");
  const auto J = ds.journals.size();
  std::vector<bool> keep(J, true);
  std::vector<RemovedJournal> removed;

  for (;;) {
    // Outgoing citations from each kept journal to articles of kept journals.
    std::vector<std::int64_t> given(J, 0);
    for (std::size_t j = 0; j < J; ++j) {
      if (!keep[j]) continue;
      for (Index k = ds.article_offsets[j]; k < ds.article_offsets[j + 1]; ++k) {
        for (CountMatrix::InnerIterator it(ds.citations, k); it; ++it) {
          given[static_cast<std::size_t>(it.col())] += it.value();
        }
      }
    }
    bool changed = false;
    for (std::size_t i = 0; i < J; ++i) {
      if (keep[i] && given[i] < min_outgoing) {
        keep[i] = false;
        removed.push_back({ds.journals[i], given[i]});
        changed = true;
      }
    }
    if (!changed) break;
  }

  const auto kept = static_cast<std::size_t>(std::count(keep.begin(), keep.end(), true));
  if (kept < 2) {
    throw DataError("filtering with min_outgoing=" + std::to_string(min_outgoing) + " leaves " +
                    std::to_string(kept) + " journal(s); at least 2 are required");
  }
  if (removed.empty()) return {ds, {}};

  std::vector<Index> new_column(J, -1);
  Index next = 0;
  for (std::size_t i = 0; i < J; ++i) {
    if (keep[i]) new_column[i] = next++;
  }

  CitationDataset out;
  out.article_offsets.push_back(0);
  std::vector<Triplet> entries;
  for (std::size_t j = 0; j < J; ++j) {
    if (!keep[j]) continue;
    out.journals.push_back(ds.journals[j]);
    for (Index k = ds.article_offsets[j]; k < ds.article_offsets[j + 1]; ++k) {
      const auto row = static_cast<Index>(out.article_ids.size());
      out.article_ids.push_back(ds.article_ids[static_cast<std::size_t>(k)]);
      for (CountMatrix::InnerIterator it(ds.citations, k); it; ++it) {
        const auto col = new_column[static_cast<std::size_t>(it.col())];
        if (col >= 0) entries.emplace_back(row, col, it.value());
      }
    }
    out.article_offsets.push_back(static_cast<Index>(out.article_ids.size()));
  }
  out.citations = make_matrix(static_cast<Index>(out.article_ids.size()), next, entries);
  out.validate();
  return {std::move(out), std::move(removed)};
}

CrossCitationSystem build_system(const CitationDataset& ds) {
  const auto J = ds.journal_count();
  Eigen::Matrix<std::int64_t, Eigen::Dynamic, Eigen::Dynamic> counts =
      Eigen::Matrix<std::int64_t, Eigen::Dynamic, Eigen::Dynamic>::Zero(J, J);
  for (Index j = 0; j < J; ++j) {
    for (Index k = ds.article_offsets[static_cast<std::size_t>(j)];
         k < ds.article_offsets[static_cast<std::size_t>(j) + 1]; ++k) {
      for (CountMatrix::InnerIterator it(ds.citations, k); it; ++it) counts(j, it.col()) += it.value();
    }
  }
  Eigen::VectorXd articles(J);
  for (Index j = 0; j < J; ++j) {
    articles(j) = static_cast<double>(ds.journals[static_cast<std::size_t>(j)].article_count);
  }
  auto sys = CrossCitationSystem::from_matrix(counts.cast<double>(), std::move(articles));
  for (Index i = 0; i < J; ++i) {
    if (sys.outgoing(i) == 0.0) {
      throw DataError("journal " + ds.journals[static_cast<std::size_t>(i)].issn +
                      " gives no citations (singular D); filter low citers first");
    }
  }
  return sys;
}

}  // namespace rifci
