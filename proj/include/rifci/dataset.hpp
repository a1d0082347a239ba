#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include <Eigen/Core>
#include <Eigen/SparseCore>

namespace rifci {

using Index = Eigen::Index;

// Article-by-citing-journal counts. Row k is an article, column i a citing
// journal; entry (k, i) is the number of times journal i cited article k.
using CountMatrix = Eigen::SparseMatrix<std::int64_t, Eigen::RowMajor, Index>;

struct Journal {
  std::string issn;
  std::string name;
  std::int64_t article_count = 0;

  bool operator==(const Journal&) const = default;
};

// Article-level citation data. Journals are sorted by ISSN, and the articles
// of journal j occupy the contiguous row range
// [article_offsets[j], article_offsets[j + 1]) of `citations`, ordered by
// article id. The logical assignment matrix Q is implied by these offsets.
struct CitationDataset {
  std::vector<Journal> journals;
  std::vector<std::string> article_ids;
  std::vector<Index> article_offsets;
  CountMatrix citations;

  Index journal_count() const { return static_cast<Index>(journals.size()); }
  Index article_count() const { return static_cast<Index>(article_ids.size()); }

  // Throws DataError on the first violated invariant.
  void validate() const;

  bool operator==(const CitationDataset& other) const;
};

// Journal-level system derived from a dataset. Values are stored as doubles
// but are integers whenever the system comes from article counts.
struct CrossCitationSystem {
  Eigen::MatrixXd citations;      // C(j, i): citations to j from i
  Eigen::VectorXd outgoing;       // D(i) = sum_j C(j, i)
  Eigen::VectorXd article_counts; // A(j)

  Index journal_count() const { return citations.rows(); }

  // D is recomputed from C. Throws std::invalid_argument on shape mismatch.
  static CrossCitationSystem from_matrix(Eigen::MatrixXd citations,
                                         Eigen::VectorXd article_counts);
};

struct DatasetSources {
  std::filesystem::path journals;
  std::filesystem::path articles;
  std::filesystem::path citations;
};

CitationDataset load_dataset(const DatasetSources& sources);
CitationDataset load_dataset(std::istream& journals, std::istream& articles,
                             std::istream& citations);

// Writes the three-file CSV layout read by load_dataset.
void write_dataset(const CitationDataset& ds, const DatasetSources& targets);

struct RemovedJournal {
  Journal journal;
  std::int64_t outgoing = 0;  // citations given to the set remaining at removal time
};

struct FilterResult {
  CitationDataset dataset;
  std::vector<RemovedJournal> removed;
};

// Repeatedly drops journals whose outgoing citations to the remaining set
// fall below `min_outgoing`, along with their articles and citing columns,
// until nothing changes. Throws DataError if fewer than two journals remain.
FilterResult filter_low_citers(const CitationDataset& ds, std::int64_t min_outgoing = 12);

// Citations given by each journal (column sums of Q P), integer exact.
std::vector<std::int64_t> outgoing_citations(const CitationDataset& ds);

// C = Q P, D = column sums, A = article counts. Throws DataError if any
// journal gives no citations.
CrossCitationSystem build_system(const CitationDataset& ds);

}  // namespace rifci
