#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "rifci/rank_inference.hpp"

namespace rifci {

struct RankInterval {
  int lower = 0;
  int upper = 0;
};

struct ResultRow {
  double rank = 0.0;
  std::string issn;
  std::string name;
  double rif = 0.0;
  double rif_top100 = 0.0;
  double se = 0.0;
  double ci_lo = 0.0;
  double ci_hi = 0.0;
  double simple_if = 0.0;
  std::vector<RankInterval> rank_cis;  // parallel to ResultsTable::methods
};

// The per-journal results table, rows sorted by empirical rank.
struct ResultsTable {
  std::vector<RankMethod> methods;
  std::vector<ResultRow> rows;

  std::optional<std::size_t> method_index(RankMethod m) const;
};

void write_results_csv(std::ostream& out, const ResultsTable& table);
ResultsTable read_results_csv(std::istream& in, std::string_view source = "results");
ResultsTable read_results_csv(const std::filesystem::path& path);

struct PlotPaths {
  std::filesystem::path scores;
  std::filesystem::path scores_log;
  std::filesystem::path ranks;
};

// Score intervals on linear and log axes, plus nested rank intervals
// (Goldstein inside Xie inside Mogstad, whichever are present). Nonpositive
// values on the log axis are clamped to the smallest positive value with a
// message on `warnings`. Throws DataError on an empty table.
PlotPaths write_plots(const ResultsTable& table, const std::filesystem::path& out_dir,
                      std::ostream& warnings);

}  // namespace rifci
