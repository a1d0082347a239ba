#include "rifci/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <ostream>
#include <sstream>

#include "rifci/csv.hpp"
#include "rifci/error.hpp"

namespace rifci {

std::optional<std::size_t> ResultsTable::method_index(RankMethod m) const {
  for (std::size_t i = 0; i < methods.size(); ++i) {
    if (methods[i] == m) return i;
  }
  return std::nullopt;
}

namespace {

const std::vector<std::string> kFixedColumns = {"rank", "issn",  "name",  "rif",      "rif_top100",
                                                "se",   "ci_lo", "ci_hi", "simple_if"};

double parse_double(const std::string& text, std::string_view what) {
  char* end = nullptr;
  const double v = std::strtod(text.c_str(), &end);
  if (text.empty() || end != text.c_str() + text.size()) {
    throw DataError(std::string(what) + ": '" + text + "' is not a number");
  }
  return v;
}

int parse_int(const std::string& text, std::string_view what) {
  const double v = parse_double(text, what);
  if (v != std::floor(v)) throw DataError(std::string(what) + ": '" + text + "' is not an integer");
  return static_cast<int>(v);
}

std::string fmt(double v, int digits = 4) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

std::string escape_xml(std::string_view s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out.push_back(c);
    }
  }
  return out;
}

// Horizontal layout: one row per journal, value axis along x.
struct Frame {
  double left = 190.0;
  double right = 30.0;
  double top = 40.0;
  double bottom = 50.0;
  double row = 14.0;
  double width = 820.0;

  double height(std::size_t n) const { return top + bottom + row * static_cast<double>(n); }
  double plot_width() const { return width - left - right; }
  double y(std::size_t i) const { return top + row * (static_cast<double>(i) + 0.5); }
};

void open_svg(std::ostream& out, const Frame& f, std::size_t n, std::string_view title) {
  out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
      << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" << fmt(f.width, 0)
      << "\" height=\"" << fmt(f.height(n), 0) << "\" viewBox=\"0 0 " << fmt(f.width, 0) << ' '
      << fmt(f.height(n), 0) << "\" font-family=\"sans-serif\" font-size=\"10\">\n"
      << "<title>" << escape_xml(title) << "</title>\n"
      << "<rect x=\"0\" y=\"0\" width=\"" << fmt(f.width, 0) << "\" height=\"" << fmt(f.height(n), 0)
      << "\" fill=\"white\"/>\n"
      << "<text x=\"" << fmt(f.width / 2, 1) << "\" y=\"20\" text-anchor=\"middle\" font-size=\"13\">"
      << escape_xml(title) << "</text>\n";
}

void journal_labels(std::ostream& out, const Frame& f, const ResultsTable& t) {
  out << "<g id=\"labels\" text-anchor=\"end\">\n";
  for (std::size_t i = 0; i < t.rows.size(); ++i) {
    const auto& r = t.rows[i];
    std::string label = r.name.empty() ? r.issn : r.name;
    if (label.size() > 32) label = label.substr(0, 31) + "...";
    out << "<text x=\"" << fmt(f.left - 6, 1) << "\" y=\"" << fmt(f.y(i) + 3.5, 1) << "\">"
        << escape_xml(label) << "</text>\n";
  }
  out << "</g>\n";
}

template <class Map>
void value_axis(std::ostream& out, const Frame& f, std::size_t n, const std::vector<double>& ticks,
                Map&& to_x, std::string_view caption) {
  const double base = f.top + f.row * static_cast<double>(n);
  out << "<g id=\"axis\" stroke=\"black\">\n"
      << "<line x1=\"" << fmt(f.left, 1) << "\" y1=\"" << fmt(base, 1) << "\" x2=\""
      << fmt(f.left + f.plot_width(), 1) << "\" y2=\"" << fmt(base, 1) << "\"/>\n";
  for (double t : ticks) {
    const double x = to_x(t);
    out << "<line x1=\"" << fmt(x, 1) << "\" y1=\"" << fmt(base, 1) << "\" x2=\"" << fmt(x, 1)
        << "\" y2=\"" << fmt(base + 4, 1) << "\"/>\n";
  }
  out << "</g>\n<g id=\"ticklabels\" text-anchor=\"middle\">\n";
  for (double t : ticks) {
    out << "<text x=\"" << fmt(to_x(t), 1) << "\" y=\"" << fmt(base + 15, 1) << "\">"
        << csv::format_number(t, 4) << "</text>\n";
  }
  out << "</g>\n<text x=\"" << fmt(f.left + f.plot_width() / 2, 1) << "\" y=\"" << fmt(base + 35, 1)
      << "\" text-anchor=\"middle\">" << escape_xml(caption) << "</text>\n";
}

std::vector<double> linear_ticks(double lo, double hi) {
  const double span = hi - lo;
  const double raw = span / 5.0;
  const double mag = std::pow(10.0, std::floor(std::log10(raw)));
  double step = mag;
  for (double m : {1.0, 2.0, 5.0, 10.0}) {
    step = m * mag;
    if (step >= raw) break;
  }
  std::vector<double> ticks;
  for (double t = std::ceil(lo / step) * step; t <= hi + 1e-12 * span; t += step) {
    ticks.push_back(std::abs(t) < 1e-12 * step ? 0.0 : t);
  }
  return ticks;
}

void write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write '" + path.string() + "'");
  out << text;
}

std::string score_plot(const ResultsTable& t, bool log_scale, std::ostream& warnings) {
  const Frame f;
  const std::size_t n = t.rows.size();
  std::vector<double> lo(n), hi(n), mid(n);
  for (std::size_t i = 0; i < n; ++i) {
    lo[i] = t.rows[i].ci_lo;
    hi[i] = t.rows[i].ci_hi;
    mid[i] = t.rows[i].rif;
  }
  if (log_scale) {
    double smallest = std::numeric_limits<double>::infinity();
    for (auto* v : {&lo, &hi, &mid}) {
      for (double x : *v) {
        if (x > 0.0) smallest = std::min(smallest, x);
      }
    }
    if (!std::isfinite(smallest)) throw DataError("log-scale plot needs at least one positive value");
    std::size_t clamped = 0;
    for (auto* v : {&lo, &hi, &mid}) {
      for (double& x : *v) {
        if (!(x > 0.0)) {
          x = smallest;
          ++clamped;
        }
      }
    }
    if (clamped) {
      warnings << "warning: " << clamped << " nonpositive value(s) clamped to " << csv::format_number(smallest, 6)
               << " on the logarithmic axis\n";
    }
  }
  double vmin = *std::min_element(lo.begin(), lo.end());
  double vmax = *std::max_element(hi.begin(), hi.end());
  vmin = std::min(vmin, *std::min_element(mid.begin(), mid.end()));
  vmax = std::max(vmax, *std::max_element(mid.begin(), mid.end()));
  std::vector<double> ticks;
  if (log_scale) {
    vmin = std::log10(vmin);
    vmax = std::log10(vmax);
    if (vmax - vmin < 1e-9) {
      vmin -= 0.5;
      vmax += 0.5;
    }
    for (double e = std::floor(vmin); e <= std::ceil(vmax); e += 1.0) {
      if (e >= vmin - 1e-12 && e <= vmax + 1e-12) ticks.push_back(std::pow(10.0, e));
    }
  } else {
    vmin = std::min(vmin, 0.0);
    if (vmax - vmin < 1e-12) vmax = vmin + 1.0;
    ticks = linear_ticks(vmin, vmax);
  }
  const auto to_x = [&](double v) {
    const double u = log_scale ? std::log10(v) : v;
    return f.left + f.plot_width() * (u - vmin) / (vmax - vmin);
  };

  std::ostringstream out;
  open_svg(out, f, n,
           log_scale ? "Recursive impact factor, confidence intervals (log scale)"
                     : "Recursive impact factor, confidence intervals");
  journal_labels(out, f, t);
  out << "<g id=\"intervals\" stroke=\"#1f4e79\" stroke-width=\"1.5\">\n";
  for (std::size_t i = 0; i < n; ++i) {
    out << "<line x1=\"" << fmt(to_x(lo[i]), 2) << "\" y1=\"" << fmt(f.y(i), 2) << "\" x2=\""
        << fmt(to_x(hi[i]), 2) << "\" y2=\"" << fmt(f.y(i), 2) << "\"/>\n";
  }
  out << "</g>\n<g id=\"estimates\" fill=\"#c00000\">\n";
  for (std::size_t i = 0; i < n; ++i) {
    out << "<circle cx=\"" << fmt(to_x(mid[i]), 2) << "\" cy=\"" << fmt(f.y(i), 2) << "\" r=\"2.5\"/>\n";
  }
  out << "</g>\n";
  value_axis(out, f, n, ticks, to_x, log_scale ? "recursive impact factor (log scale)" : "recursive impact factor");
  out << "</svg>\n";
  return out.str();
}

std::string rank_plot(const ResultsTable& t) {
  const Frame f;
  const std::size_t n = t.rows.size();
  const double J = static_cast<double>(n);
  const auto to_x = [&](double r) { return f.left + f.plot_width() * (r - 0.5) / J; };

  // Outer to inner so the narrowest interval is drawn on top.
  struct Layer {
    RankMethod method;
    const char* colour;
    double thickness;
  };
  const Layer layers[] = {{RankMethod::Mogstad, "#d9d9d9", 10.0},
                          {RankMethod::Xie, "#9dc3e6", 7.0},
                          {RankMethod::Goldstein, "#1f4e79", 4.0}};

  std::ostringstream out;
  open_svg(out, f, n, "Rank confidence intervals (inner Goldstein, middle Xie, outer Mogstad)");
  journal_labels(out, f, t);
  for (const auto& layer : layers) {
    const auto idx = t.method_index(layer.method);
    if (!idx) continue;
    out << "<g id=\"" << to_string(layer.method) << "\" fill=\"" << layer.colour << "\">\n";
    for (std::size_t i = 0; i < n; ++i) {
      const auto& ci = t.rows[i].rank_cis[*idx];
      const double x0 = to_x(ci.lower - 0.5);
      const double x1 = to_x(ci.upper + 0.5);
      out << "<rect x=\"" << fmt(x0, 2) << "\" y=\"" << fmt(f.y(i) - layer.thickness / 2, 2) << "\" width=\""
          << fmt(x1 - x0, 2) << "\" height=\"" << fmt(layer.thickness, 2) << "\"/>\n";
    }
    out << "</g>\n";
  }
  out << "<g id=\"estimates\" fill=\"#c00000\">\n";
  for (std::size_t i = 0; i < n; ++i) {
    out << "<circle cx=\"" << fmt(to_x(t.rows[i].rank), 2) << "\" cy=\"" << fmt(f.y(i), 2) << "\" r=\"2\"/>\n";
  }
  out << "</g>\n";
  std::vector<double> ticks = linear_ticks(1.0, J);
  if (ticks.empty() || ticks.front() != 1.0) ticks.insert(ticks.begin(), 1.0);
  ticks.erase(std::remove_if(ticks.begin(), ticks.end(), [](double v) { return v < 1.0; }), ticks.end());
  value_axis(out, f, n, ticks, to_x, "rank");
  out << "</svg>\n";
  return out.str();
}

}  // namespace

void write_results_csv(std::ostream& out, const ResultsTable& table) {
  csv::Row header = kFixedColumns;
  for (auto m : table.methods) {
    header.push_back(std::string(to_string(m)) + "_lo");
    header.push_back(std::string(to_string(m)) + "_hi");
  }
  csv::write_row(out, header);
  for (const auto& r : table.rows) {
    csv::Row row = {csv::format_number(r.rank),       r.issn,
                    r.name,                           csv::format_number(r.rif),
                    csv::format_number(r.rif_top100), csv::format_number(r.se),
                    csv::format_number(r.ci_lo),      csv::format_number(r.ci_hi),
                    csv::format_number(r.simple_if)};
    for (const auto& ci : r.rank_cis) {
      row.push_back(std::to_string(ci.lower));
      row.push_back(std::to_string(ci.upper));
    }
    csv::write_row(out, row);
  }
}

ResultsTable read_results_csv(std::istream& in, std::string_view source) {
  const auto table = csv::read(in, source);
  std::vector<std::size_t> fixed;
  for (const auto& c : kFixedColumns) fixed.push_back(table.column(c, source));

  ResultsTable out;
  std::vector<std::pair<std::size_t, std::size_t>> ci_columns;
  for (std::size_t c = 0; c < table.header.size(); ++c) {
    const auto& h = table.header[c];
    if (!h.ends_with("_lo") || h == "ci_lo") continue;
    const auto stem = h.substr(0, h.size() - 3);
    RankMethod m{};
    try {
      m = parse_rank_method(stem);
    } catch (const std::invalid_argument&) {
      continue;
    }
    out.methods.push_back(m);
    ci_columns.emplace_back(c, table.column(stem + "_hi", source));
  }

  for (const auto& row : table.rows) {
    ResultRow r;
    r.rank = parse_double(row[fixed[0]], "rank");
    r.issn = row[fixed[1]];
    r.name = row[fixed[2]];
    r.rif = parse_double(row[fixed[3]], "rif");
    r.rif_top100 = parse_double(row[fixed[4]], "rif_top100");
    r.se = parse_double(row[fixed[5]], "se");
    r.ci_lo = parse_double(row[fixed[6]], "ci_lo");
    r.ci_hi = parse_double(row[fixed[7]], "ci_hi");
    r.simple_if = parse_double(row[fixed[8]], "simple_if");
    for (const auto& [lo, hi] : ci_columns) {
      r.rank_cis.push_back({parse_int(row[lo], table.header[lo]), parse_int(row[hi], table.header[hi])});
    }
    out.rows.push_back(std::move(r));
  }
  return out;
}

ResultsTable read_results_csv(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open '" + path.string() + "'");
  return read_results_csv(in, path.string());
}

PlotPaths write_plots(const ResultsTable& table, const std::filesystem::path& out_dir, std::ostream& warnings) {
  if (table.rows.empty()) throw DataError("results table is empty; nothing to plot");
  std::filesystem::create_directories(out_dir);
  PlotPaths paths{out_dir / "rif_ci.svg", out_dir / "rif_ci_log.svg", out_dir / "rank_ci.svg"};
  write_file(paths.scores, score_plot(table, false, warnings));
  write_file(paths.scores_log, score_plot(table, true, warnings));
  write_file(paths.ranks, rank_plot(table));
  return paths;
}

}  // namespace rifci
