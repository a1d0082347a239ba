#include "rifci/rank_inference.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>

#include "rifci/stats.hpp"

namespace rifci {

using Eigen::Index;

std::string_view to_string(BandwidthMode m) {
  return m == BandwidthMode::XieIQR ? "iqr" : "sigmadiff";
}

std::string_view to_string(SigmaMode m) {
  return m == SigmaMode::IndependentSum ? "independent" : "cov";
}

std::string_view to_string(RankMethod m) {
  switch (m) {
    case RankMethod::Goldstein: return "goldstein";
    case RankMethod::Xie: return "xie";
    case RankMethod::XieSigmaDiff: return "xie_sigmadiff";
    case RankMethod::Mogstad: return "mogstad";
    case RankMethod::MogstadCov: return "mogstad_cov";
  }
  return "unknown";
}

BandwidthMode parse_bandwidth_mode(std::string_view text) {
  if (text == "iqr") return BandwidthMode::XieIQR;
  if (text == "sigmadiff") return BandwidthMode::SigmaDiff;
  throw std::invalid_argument("unknown bandwidth mode '" + std::string(text) + "'");
}

SigmaMode parse_sigma_mode(std::string_view text) {
  if (text == "independent") return SigmaMode::IndependentSum;
  if (text == "cov") return SigmaMode::CovarianceAdjusted;
  throw std::invalid_argument("unknown sigma mode '" + std::string(text) + "'");
}

RankMethod parse_rank_method(std::string_view text) {
  for (auto m : {RankMethod::Goldstein, RankMethod::Xie, RankMethod::XieSigmaDiff, RankMethod::Mogstad,
                 RankMethod::MogstadCov}) {
    if (text == to_string(m)) return m;
  }
  throw std::invalid_argument("unknown rank method '" + std::string(text) + "'");
}

double RankConfidenceSet::mean_width() const {
  if (lower.empty()) return 0.0;
  double total = 0.0;
  for (std::size_t j = 0; j < lower.size(); ++j) total += upper[j] - lower[j];
  return total / static_cast<double>(lower.size());
}

namespace {

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::numbers::sqrt2); }

double normal_pdf(double x) {
  return std::exp(-0.5 * x * x) / std::sqrt(2.0 * std::numbers::pi);
}

void check_alpha(double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw std::invalid_argument("alpha must lie in (0, 1)");
}

void check_draws(const Eigen::MatrixXd& draws) {
  if (draws.rows() < 2) throw std::invalid_argument("rank inference needs at least two draws");
  if (draws.cols() < 1) throw std::invalid_argument("rank inference needs at least one journal");
}

int clamp_rank(double r, Index J) {
  return static_cast<int>(std::clamp(r, 1.0, static_cast<double>(J)));
}

// Percentile interval of each column of `ranks` (B x J), widened by
// `widen[j]` per side, floor/ceil, clamped to [1, J].
RankConfidenceSet percentile_set(const Eigen::MatrixXd& ranks, double alpha, const Eigen::VectorXd& widen,
                                 RankMethod method) {
  const Index J = ranks.cols();
  RankConfidenceSet set{method, std::vector<int>(static_cast<std::size_t>(J)),
                        std::vector<int>(static_cast<std::size_t>(J)), alpha};
  std::vector<double> column(static_cast<std::size_t>(ranks.rows()));
  for (Index j = 0; j < J; ++j) {
    Eigen::Map<Eigen::VectorXd>(column.data(), ranks.rows()) = ranks.col(j);
    std::sort(column.begin(), column.end());
    const double lo = stats::quantile_sorted(column, alpha / 2.0) - 0.5 * widen(j);
    const double hi = stats::quantile_sorted(column, 1.0 - alpha / 2.0) + 0.5 * widen(j);
    auto& l = set.lower[static_cast<std::size_t>(j)];
    auto& u = set.upper[static_cast<std::size_t>(j)];
    // The tolerance absorbs rounding in smoothed ranks sitting on an integer.
    l = clamp_rank(std::floor(lo + 1e-9), J);
    u = clamp_rank(std::ceil(hi - 1e-9), J);
    if (u < l) u = l;
  }
  return set;
}

}  // namespace

double epsilon_floor(const Eigen::VectorXd& scores) {
  const double iqr =
      scores.size() > 0 ? stats::interquartile_range(std::vector<double>(scores.begin(), scores.end())) : 0.0;
  return std::max(1e-12 * iqr, std::numeric_limits<double>::min());
}

RankEstimate empirical_ranks(const Eigen::VectorXd& scores) {
  const Index J = scores.size();
  Eigen::VectorXd ranks(J);
  for (Index j = 0; j < J; ++j) {
    double above = 0.0;
    double tied = 0.0;
    for (Index i = 0; i < J; ++i) {
      if (i == j) continue;
      if (scores(i) > scores(j)) {
        above += 1.0;
      } else if (scores(i) == scores(j)) {
        tied += 1.0;
      }
    }
    ranks(j) = 1.0 + above + 0.5 * tied;
  }
  return {std::move(ranks)};
}

RankConfidenceSet goldstein_rank_ci(const Eigen::MatrixXd& draws, double alpha) {
  check_draws(draws);
  check_alpha(alpha);
  Eigen::MatrixXd ranks(draws.rows(), draws.cols());
  for (Index b = 0; b < draws.rows(); ++b) {
    ranks.row(b) = empirical_ranks(draws.row(b).transpose()).ranks.transpose();
  }
  return percentile_set(ranks, alpha, Eigen::VectorXd::Zero(draws.cols()), RankMethod::Goldstein);
}

PairwiseSigma pairwise_sigma(const Eigen::MatrixXd& draws, SigmaMode mode) {
  check_draws(draws);
  const Index J = draws.cols();
  const Eigen::MatrixXd centered = draws.rowwise() - draws.colwise().mean();
  const Eigen::MatrixXd cov = (centered.transpose() * centered) / static_cast<double>(draws.rows() - 1);

  PairwiseSigma out{Eigen::MatrixXd::Zero(J, J), mode};
  for (Index j = 0; j < J; ++j) {
    for (Index i = j + 1; i < J; ++i) {
      double radicand = cov(j, j) + cov(i, i);
      if (mode == SigmaMode::CovarianceAdjusted) radicand -= 2.0 * cov(j, i);
      const double s = std::sqrt(std::max(radicand, 0.0));
      out.sigma(j, i) = s;
      out.sigma(i, j) = s;
    }
  }
  return out;
}

BandwidthMatrix xie_bandwidth(double gamma, const PairwiseSigma& sigma, BandwidthMode mode, double beta,
                              double floor) {
  if (!(floor > 0.0)) throw std::invalid_argument("bandwidth floor must be positive");
  const Index J = sigma.sigma.rows();
  BandwidthMatrix out{Eigen::MatrixXd::Constant(J, J, floor), mode, gamma, beta};
  for (Index j = 0; j < J; ++j) {
    for (Index i = 0; i < J; ++i) {
      if (i == j) continue;
      const double s = sigma.sigma(j, i);
      const double t = mode == BandwidthMode::XieIQR ? gamma * std::pow(s, beta) : s;
      out.tau(j, i) = std::max(t, floor);
    }
  }
  return out;
}

BandwidthMatrix xie_bandwidth(const Eigen::VectorXd& empirical, const PairwiseSigma& sigma,
                              BandwidthMode mode, double beta) {
  const double gamma =
      stats::interquartile_range(std::vector<double>(empirical.begin(), empirical.end()));
  return xie_bandwidth(gamma, sigma, mode, beta, epsilon_floor(empirical));
}

RankEstimate xie_smoothed_rank(const Eigen::VectorXd& scores, const BandwidthMatrix& tau) {
  const Index J = scores.size();
  Eigen::VectorXd ranks(J);
  for (Index j = 0; j < J; ++j) {
    double r = 1.0;
    for (Index i = 0; i < J; ++i) {
      if (i != j) r += normal_cdf((scores(i) - scores(j)) / tau.tau(j, i));
    }
    ranks(j) = r;
  }
  return {std::move(ranks)};
}

Eigen::VectorXd xie_correction(const Eigen::VectorXd& scores, const BandwidthMatrix& tau) {
  const Index J = scores.size();
  Eigen::VectorXd t = Eigen::VectorXd::Zero(J);
  for (Index j = 0; j < J; ++j) {
    for (Index i = 0; i < J; ++i) {
      if (i != j) t(j) += std::min(normal_pdf((scores(i) - scores(j)) / tau.tau(j, i)), 1.0);
    }
  }
  return t;
}

RankConfidenceSet xie_rank_ci(const Eigen::MatrixXd& draws, const Eigen::VectorXd& empirical,
                              const BandwidthMatrix& tau, double alpha, RankMethod label) {
  check_draws(draws);
  check_alpha(alpha);
  Eigen::MatrixXd ranks(draws.rows(), draws.cols());
  for (Index b = 0; b < draws.rows(); ++b) {
    ranks.row(b) = xie_smoothed_rank(draws.row(b).transpose(), tau).ranks.transpose();
  }
  return percentile_set(ranks, alpha, xie_correction(empirical, tau), label);
}

double mogstad_critical_value(const Eigen::MatrixXd& draws, const PairwiseSigma& sigma, Index j,
                              double alpha, double floor) {
  check_draws(draws);
  check_alpha(alpha);
  const Index J = draws.cols();
  if (J < 2) return 0.0;
  const Eigen::RowVectorXd means = draws.colwise().mean();
  std::vector<double> stat(static_cast<std::size_t>(draws.rows()));
  for (Index b = 0; b < draws.rows(); ++b) {
    double worst = 0.0;
    for (Index i = 0; i < J; ++i) {
      if (i == j) continue;
      const double centered = (draws(b, j) - draws(b, i)) - (means(j) - means(i));
      worst = std::max(worst, std::abs(centered) / std::max(sigma.sigma(j, i), floor));
    }
    stat[static_cast<std::size_t>(b)] = worst;
  }
  return stats::quantile(std::move(stat), 1.0 - alpha);
}

Eigen::VectorXd mogstad_critical_values(const Eigen::MatrixXd& draws, const PairwiseSigma& sigma, double alpha,
                                        double floor) {
  Eigen::VectorXd s(draws.cols());
  for (Index j = 0; j < draws.cols(); ++j) s(j) = mogstad_critical_value(draws, sigma, j, alpha, floor);
  return s;
}

RankConfidenceSet mogstad_rank_set(const Eigen::VectorXd& empirical, const PairwiseSigma& sigma,
                                   const Eigen::VectorXd& critical, double alpha, double floor,
                                   RankMethod label) {
  const Index J = empirical.size();
  RankConfidenceSet set{label, std::vector<int>(static_cast<std::size_t>(J)),
                        std::vector<int>(static_cast<std::size_t>(J)), alpha};
  for (Index j = 0; j < J; ++j) {
    int better = 0;  // J-: journals proven to score above j
    int worse = 0;   // J+: journals proven to score below j
    for (Index i = 0; i < J; ++i) {
      if (i == j) continue;
      const double diff = empirical(j) - empirical(i);
      const double half = std::max(sigma.sigma(j, i), floor) * critical(j);
      if (diff + half < 0.0) ++better;
      if (diff - half > 0.0) ++worse;
    }
    set.lower[static_cast<std::size_t>(j)] = better + 1;
    set.upper[static_cast<std::size_t>(j)] = static_cast<int>(J) - worse;
  }
  return set;
}

std::vector<WidthSummary> ci_width_summary(std::span<const RankConfidenceSet> sets) {
  std::vector<WidthSummary> out;
  out.reserve(sets.size());
  for (const auto& s : sets) out.push_back({s.method, s.mean_width()});
  return out;
}

std::vector<RankConfidenceSet> rank_confidence_sets(const Eigen::MatrixXd& draws, const Eigen::VectorXd& empirical,
                                                    std::span<const RankMethod> methods,
                                                    const RankInferenceOptions& options) {
  check_draws(draws);
  check_alpha(options.alpha);
  if (empirical.size() != draws.cols()) {
    throw std::invalid_argument("empirical scores do not match ensemble columns");
  }
  const double floor = epsilon_floor(empirical);
  std::vector<RankConfidenceSet> out;
  for (auto method : methods) {
    switch (method) {
      case RankMethod::Goldstein:
        out.push_back(goldstein_rank_ci(draws, options.alpha));
        break;
      case RankMethod::Xie:
      case RankMethod::XieSigmaDiff: {
        const auto sigma = pairwise_sigma(draws, options.xie_sigma);
        const auto mode = method == RankMethod::Xie ? options.xie_bandwidth : BandwidthMode::SigmaDiff;
        const auto tau = xie_bandwidth(empirical, sigma, mode, options.beta);
        out.push_back(xie_rank_ci(draws, empirical, tau, options.alpha, method));
        break;
      }
      case RankMethod::Mogstad:
      case RankMethod::MogstadCov: {
        const auto mode =
            method == RankMethod::Mogstad ? SigmaMode::IndependentSum : SigmaMode::CovarianceAdjusted;
        const auto sigma = pairwise_sigma(draws, mode);
        const auto crit = mogstad_critical_values(draws, sigma, options.alpha, floor);
        out.push_back(mogstad_rank_set(empirical, sigma, crit, options.alpha, floor, method));
        break;
      }
    }
  }
  return out;
}

}  // namespace rifci
