#pragma once

#include <span>
#include <string_view>
#include <vector>

#include <Eigen/Core>

namespace rifci {

// Ranks with 1 = highest score; fractional under ties or smoothing.
struct RankEstimate {
  Eigen::VectorXd ranks;
};

enum class BandwidthMode { XieIQR, SigmaDiff };
enum class SigmaMode { IndependentSum, CovarianceAdjusted };
enum class RankMethod { Goldstein, Xie, XieSigmaDiff, Mogstad, MogstadCov };

std::string_view to_string(BandwidthMode m);
std::string_view to_string(SigmaMode m);
std::string_view to_string(RankMethod m);
BandwidthMode parse_bandwidth_mode(std::string_view text);  // "iqr" | "sigmadiff"
SigmaMode parse_sigma_mode(std::string_view text);          // "independent" | "cov"
RankMethod parse_rank_method(std::string_view text);        // column names, e.g. "mogstad_cov"

struct PairwiseSigma {
  Eigen::MatrixXd sigma;  // symmetric, zero diagonal
  SigmaMode mode = SigmaMode::IndependentSum;
};

struct BandwidthMatrix {
  Eigen::MatrixXd tau;  // symmetric, positive off the diagonal
  BandwidthMode mode = BandwidthMode::XieIQR;
  double gamma = 0.0;
  double beta = 0.5;
};

struct RankConfidenceSet {
  RankMethod method = RankMethod::Goldstein;
  std::vector<int> lower;
  std::vector<int> upper;
  double alpha = 0.05;

  double mean_width() const;
};

// Smallest admissible bandwidth or pairwise SD: 1e-12 times the
// interquartile range of `scores`, never below the smallest normal double.
double epsilon_floor(const Eigen::VectorXd& scores);

// R_j = 1 + #{i != j : v_i > v_j} + 0.5 #{i != j : v_i = v_j}.
RankEstimate empirical_ranks(const Eigen::VectorXd& scores);

// Percentile interval of per-draw midranks, floor/ceil to integers.
// `draws` is B x J.
RankConfidenceSet goldstein_rank_ci(const Eigen::MatrixXd& draws, double alpha = 0.05);

// IndependentSum: sqrt(var_j + var_i). CovarianceAdjusted:
// sqrt(var_j - 2 cov_ji + var_i), the SD of the per-draw differences.
PairwiseSigma pairwise_sigma(const Eigen::MatrixXd& draws, SigmaMode mode);

// XieIQR: tau = gamma * sigma^beta with gamma the IQR of the empirical
// scores. SigmaDiff: tau = sigma. Entries below `floor` are raised to it
// (default epsilon_floor(empirical)).
BandwidthMatrix xie_bandwidth(const Eigen::VectorXd& empirical, const PairwiseSigma& sigma,
                              BandwidthMode mode, double beta = 0.5);
BandwidthMatrix xie_bandwidth(double gamma, const PairwiseSigma& sigma, BandwidthMode mode,
                              double beta, double floor);

// R^X_j = 1 + sum_{i != j} Phi((v_i - v_j) / tau_ji).
RankEstimate xie_smoothed_rank(const Eigen::VectorXd& scores, const BandwidthMatrix& tau);

// T_j = sum_{i != j} min(phi((v_i - v_j) / tau_ji), 1), phi the standard normal density.
Eigen::VectorXd xie_correction(const Eigen::VectorXd& scores, const BandwidthMatrix& tau);

// Percentile interval of per-draw smoothed ranks widened by T_j / 2 on each
// side (T from the empirical scores), rounded outward and clamped to [1, J].
RankConfidenceSet xie_rank_ci(const Eigen::MatrixXd& draws, const Eigen::VectorXd& empirical,
                              const BandwidthMatrix& tau, double alpha = 0.05,
                              RankMethod label = RankMethod::Xie);

// 1 - alpha quantile over draws of max_{i != j} |(v_jb - v_ib) - (mean_j - mean_i)| / sigma_ji,
// with sigma floored at `floor`.
double mogstad_critical_value(const Eigen::MatrixXd& draws, const PairwiseSigma& sigma, Eigen::Index j,
                              double alpha, double floor);
Eigen::VectorXd mogstad_critical_values(const Eigen::MatrixXd& draws, const PairwiseSigma& sigma,
                                        double alpha, double floor);

// Pairwise sets [v_j - v_i +- sigma_ji s_j]. A set entirely below zero proves
// i outranks j (counted in J-), entirely above zero proves j outranks i
// (counted in J+). The rank set is {J- + 1, ..., J - J+}.
RankConfidenceSet mogstad_rank_set(const Eigen::VectorXd& empirical, const PairwiseSigma& sigma,
                                   const Eigen::VectorXd& critical, double alpha, double floor,
                                   RankMethod label = RankMethod::Mogstad);

struct WidthSummary {
  RankMethod method;
  double mean_width;
};

std::vector<WidthSummary> ci_width_summary(std::span<const RankConfidenceSet> sets);

struct RankInferenceOptions {
  double alpha = 0.05;
  double beta = 0.5;
  BandwidthMode xie_bandwidth = BandwidthMode::XieIQR;
  SigmaMode xie_sigma = SigmaMode::CovarianceAdjusted;
};

// Runs the requested methods over one ensemble in the order given.
std::vector<RankConfidenceSet> rank_confidence_sets(const Eigen::MatrixXd& draws,
                                                    const Eigen::VectorXd& empirical,
                                                    std::span<const RankMethod> methods,
                                                    const RankInferenceOptions& options = {});

}  // namespace rifci
