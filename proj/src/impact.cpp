#include "rifci/impact.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "rifci/error.hpp"

namespace rifci {

std::string_view to_string(Method m) {
  switch (m) {
    case Method::Simple: return "simple";
    case Method::Invariant: return "invariant";
    case Method::LiebowitzPalmer: return "liebowitz_palmer";
    case Method::Koczy: return "koczy";
    case Method::Eigenfactor: return "eigenfactor";
    case Method::ArticleInfluence: return "article_influence";
  }
  return "unknown";
}

std::string_view to_string(Norm n) {
  switch (n) {
    case Norm::UnitEuclidean: return "unit";
    case Norm::Top100: return "top100";
    case Norm::SumOne: return "sum1";
    case Norm::Raw: return "raw";
  }
  return "unknown";
}

Norm parse_norm(std::string_view text) {
  if (text == "unit") return Norm::UnitEuclidean;
  if (text == "top100") return Norm::Top100;
  if (text == "sum1") return Norm::SumOne;
  if (text == "raw") return Norm::Raw;
  throw std::invalid_argument("unknown normalization '" + std::string(text) + "'");
}

namespace {

void require_positive(const Eigen::VectorXd& d, std::string_view what) {
  for (Index i = 0; i < d.size(); ++i) {
    if (!(d(i) > 0.0)) {
      throw NumericalError(std::string(what) + " has a non-positive entry at index " +
                           std::to_string(i) + " (singular diagonal)");
    }
  }
}

void check_init(const CrossCitationSystem& sys, const ImpactVector& init) {
  if (init.scores.size() != sys.journal_count()) {
    throw std::invalid_argument("initial vector length does not match journal count");
  }
  if ((init.scores.array() < 0.0).any() || !(init.scores.norm() > 0.0)) {
    throw std::invalid_argument("initial vector must be nonnegative with nonzero length");
  }
}

// The largest-magnitude entry is made positive.
ImpactVector finish(Method method, Eigen::VectorXd v, int iterations) {
  Eigen::Index top = 0;
  v.cwiseAbs().maxCoeff(&top);
  if (v(top) < 0.0) v = -v;
  return {method, std::move(v), Norm::UnitEuclidean, iterations};
}

// Runs at most `limit` normalized steps of `apply` from unit-length v.
// Returns true once the infinity-norm step drops to `tolerance` (> 0).
template <class Apply>
bool iterate(Apply&& apply, Eigen::VectorXd& v, int limit, double tolerance, Method method, int& used,
             double& step) {
  for (int t = 1; t <= limit; ++t) {
    Eigen::VectorXd next = apply(v);
    const double length = next.norm();
    if (!(length > 0.0) || !std::isfinite(length)) {
      throw NumericalError(std::string(to_string(method)) + ": iterate vanished at iteration " +
                           std::to_string(used + 1));
    }
    next /= length;
    step = (next - v).lpNorm<Eigen::Infinity>();
    v = std::move(next);
    ++used;
    if (tolerance > 0.0 && step <= tolerance) return true;
  }
  return false;
}

// Under the tolerance rule, a pass that stalls (typically a nearly periodic
// matrix with an eigenvalue close to -rho) is followed by a second pass on
// V + mu I, mu the current Rayleigh quotient. The shift keeps the
// eigenvectors and makes the Perron root strictly dominant in modulus.
template <class Apply>
ImpactVector power_iterate(Apply&& apply, Eigen::VectorXd v, const PowerIterationConfig& cfg,
                           Method method) {
  if (cfg.max_iterations < 1) throw std::invalid_argument("max_iterations must be at least 1");
  if (cfg.residual_tolerance < 0.0) throw std::invalid_argument("residual_tolerance must be >= 0");
  v /= v.norm();
  int used = 0;
  double step = 0.0;
  if (iterate(apply, v, cfg.max_iterations, cfg.residual_tolerance, method, used, step) ||
      cfg.residual_tolerance == 0.0) {
    return finish(method, std::move(v), used);
  }
  const double mu = v.dot(apply(v));
  if (mu > 0.0 && std::isfinite(mu)) {
    auto shifted = [&](const Eigen::VectorXd& x) -> Eigen::VectorXd { return apply(x) + mu * x; };
    if (iterate(shifted, v, cfg.max_iterations, cfg.residual_tolerance, method, used, step)) {
      return finish(method, std::move(v), used);
    }
  }
  throw NumericalError(std::string(to_string(method)) + ": no convergence in " + std::to_string(used) +
                       " iterations (last step " + std::to_string(step) + ")");
}

}  // namespace

ImpactVector simple_if(const CrossCitationSystem& sys) {
  require_positive(sys.article_counts, "A");
  Eigen::VectorXd scores = sys.citations.rowwise().sum().cwiseQuotient(sys.article_counts);
  return {Method::Simple, std::move(scores), Norm::Raw, 0};
}

ImpactVector invariant_rif(const CrossCitationSystem& sys, const ImpactVector& init,
                           const PowerIterationConfig& cfg) {
  check_init(sys, init);
  require_positive(sys.article_counts, "A");
  require_positive(sys.outgoing, "D");
  const auto& a = sys.article_counts;
  const auto& d = sys.outgoing;
  return power_iterate(
      [&](const Eigen::VectorXd& v) -> Eigen::VectorXd {
        Eigen::VectorXd w = a.cwiseProduct(v).cwiseQuotient(d);
        return (sys.citations * w).cwiseQuotient(a);
      },
      init.scores, cfg, Method::Invariant);
}

ImpactVector liebowitz_palmer(const CrossCitationSystem& sys, const ImpactVector& init,
                              const PowerIterationConfig& cfg) {
  check_init(sys, init);
  require_positive(sys.article_counts, "A");
  return power_iterate(
      [&](const Eigen::VectorXd& v) -> Eigen::VectorXd {
        return (sys.citations * v).cwiseQuotient(sys.article_counts);
      },
      init.scores, cfg, Method::LiebowitzPalmer);
}

ImpactVector koczy_modified(const CrossCitationSystem& sys, const ImpactVector& init,
                            const PowerIterationConfig& cfg) {
  check_init(sys, init);
  require_positive(sys.outgoing, "D");
  // D^-1 C D^-1 D collapses to D^-1 C.
  return power_iterate(
      [&](const Eigen::VectorXd& v) -> Eigen::VectorXd {
        return (sys.citations * v).cwiseQuotient(sys.outgoing);
      },
      init.scores, cfg, Method::Koczy);
}

EigenfactorResult eigenfactor(const CrossCitationSystem& sys, const EigenfactorConfig& cfg) {
  const auto J = sys.journal_count();
  if (J < 2) throw std::invalid_argument("eigenfactor needs at least two journals");
  if (!(cfg.rho > 0.0 && cfg.rho < 1.0)) throw std::invalid_argument("rho must lie in (0, 1)");
  if (cfg.max_iterations < 1) throw std::invalid_argument("max_iterations must be at least 1");
  require_positive(sys.article_counts, "A");

  const Eigen::VectorXd share = sys.article_counts / sys.article_counts.sum();
  Eigen::MatrixXd h = sys.citations;
  h.diagonal().setZero();
  if (h.sum() == 0.0) throw NumericalError("eigenfactor: no cross-journal citations");
  for (Index i = 0; i < J; ++i) {
    const double total = h.col(i).sum();
    if (total > 0.0) {
      h.col(i) /= total;
    } else {
      h.col(i) = share;
    }
  }

  Eigen::VectorXd pi = share;
  int used = 0;
  for (int t = 1; t <= cfg.max_iterations; ++t) {
    Eigen::VectorXd next = cfg.rho * (h * pi) + ((1.0 - cfg.rho) * pi.sum()) * share;
    next /= next.sum();
    const double step = (next - pi).lpNorm<Eigen::Infinity>();
    pi = std::move(next);
    used = t;
    if (cfg.residual_tolerance > 0.0 && step <= cfg.residual_tolerance) break;
    if (t == cfg.max_iterations && cfg.residual_tolerance > 0.0) {
      throw NumericalError("eigenfactor: no convergence in " + std::to_string(cfg.max_iterations) +
                           " iterations");
    }
  }

  Eigen::VectorXd ef = h * pi;
  ef /= ef.sum();
  Eigen::VectorXd ai = ef.cwiseQuotient(sys.article_counts);
  return {{Method::Eigenfactor, std::move(ef), Norm::SumOne, used},
          {Method::ArticleInfluence, std::move(ai), Norm::Raw, used}};
}

ImpactVector rescale(const ImpactVector& v, Norm target) {
  if ((v.scores.array() < 0.0).any() || !(v.scores.maxCoeff() > 0.0)) {
    throw std::invalid_argument("rescale needs nonnegative scores with a positive entry");
  }
  ImpactVector out = v;
  out.norm = target;
  switch (target) {
    case Norm::UnitEuclidean: out.scores /= v.scores.norm(); break;
    case Norm::Top100: out.scores *= 100.0 / v.scores.maxCoeff(); break;
    case Norm::SumOne: out.scores /= v.scores.sum(); break;
    case Norm::Raw: out.norm = v.norm; break;
  }
  return out;
}

}  // namespace rifci
