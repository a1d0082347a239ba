#pragma once

#include <string_view>

#include <Eigen/Core>

#include "rifci/dataset.hpp"

namespace rifci {

enum class Method { Simple, Invariant, LiebowitzPalmer, Koczy, Eigenfactor, ArticleInfluence };

enum class Norm { UnitEuclidean, Top100, SumOne, Raw };

std::string_view to_string(Method m);
std::string_view to_string(Norm n);
// Accepts "unit", "top100", "sum1", "raw". Throws std::invalid_argument.
Norm parse_norm(std::string_view text);

// Journal scores aligned with dataset journal order.
struct ImpactVector {
  Method method = Method::Simple;
  Eigen::VectorXd scores;
  Norm norm = Norm::Raw;
  int iterations = 0;  // power iterations performed, 0 for closed forms
};

struct PowerIterationConfig {
  int max_iterations = 200;
  // Stop once the infinity norm of v_t - v_{t-1} is at most this. Zero runs
  // exactly max_iterations and never reports non-convergence.
  double residual_tolerance = 1e-12;

  static PowerIterationConfig fixed(int iterations) { return {iterations, 0.0}; }
};

struct EigenfactorConfig {
  double rho = 0.85;  // probability of following a citation
  int max_iterations = 1000;
  double residual_tolerance = 1e-12;
};

// Citations received per article: row sums of A^-1 C.
ImpactVector simple_if(const CrossCitationSystem& sys);

// Dominant eigenvector of A^-1 C D^-1 A by power iteration, unit Euclidean
// length. The product is evaluated as A^-1 (C (D^-1 (A v))).
ImpactVector invariant_rif(const CrossCitationSystem& sys, const ImpactVector& init,
                           const PowerIterationConfig& cfg = {});

// Dominant eigenvector of A^-1 C (no reference-intensity normalization).
ImpactVector liebowitz_palmer(const CrossCitationSystem& sys, const ImpactVector& init,
                              const PowerIterationConfig& cfg = {});

// Modified invariant method with A replaced by D: dominant eigenvector of D^-1 C.
ImpactVector koczy_modified(const CrossCitationSystem& sys, const ImpactVector& init,
                            const PowerIterationConfig& cfg = {});

struct EigenfactorResult {
  ImpactVector eigenfactor;        // SumOne
  ImpactVector article_influence;  // eigenfactor / article count, Raw
};

// Random-surfer scores on E = rho H + (1 - rho) a 1', where H is C with the
// diagonal zeroed and columns normalized, zero columns replaced by the
// article-share vector a. Returns H pi normalized to sum one.
EigenfactorResult eigenfactor(const CrossCitationSystem& sys, const EigenfactorConfig& cfg = {});

// Positive rescaling into `target`. Top100 puts the maximum at 100; Raw
// leaves the values unchanged.
ImpactVector rescale(const ImpactVector& v, Norm target);

}  // namespace rifci
