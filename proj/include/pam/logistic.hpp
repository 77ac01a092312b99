#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "pam/embeddings.hpp"

namespace pam {

// Rows are examples; labels are 0/1.
using Rows = std::vector<Vector>;
using Labels = std::vector<int>;

double sigmoid(double z);
/// log(1 + e^z) without overflow.
double softplus(double z);

struct ElasticNetOptions {
  double l1 = 0.01;
  double l2 = 0.01;
  double tolerance = 1e-6;  // absolute change of the objective between sweeps
  int max_sweeps = 20000;
  double selection_threshold = 1e-8;
};

struct ElasticNetFit {
  std::vector<std::size_t> selected;  // ascending
  Vector coefficients;                // full length
  double intercept = 0.0;
  int sweeps = 0;
  bool converged = false;
};

/// (1/n) sum_i [softplus(z_i) - y_i z_i] + l1 |w|_1 + (l2/2) |w|^2, z = Xw + b.
/// The intercept is not penalized.
double elastic_net_objective(const Rows& x, const Labels& y, std::span<const double> w, double b,
                             double l1, double l2);

/// Smooth part of the elastic-net objective (l1 dropped) and its gradient.
/// `gradient` receives d/dw followed by d/db.
double elastic_net_smooth(const Rows& x, const Labels& y, std::span<const double> w, double b,
                          double l2, Vector* gradient);

/// Coordinate descent with a quadratic majorizer per coordinate (logistic
/// curvature <= 1/4), so each coordinate step is a closed-form soft-threshold.
/// Throws NumericError on single-class labels or when nothing is selected.
ElasticNetFit fit_elastic_net(const Rows& x, const Labels& y, const ElasticNetOptions& options = {});

/// Diagonal Gaussian over logistic weights.
struct GaussianPosterior {
  Vector mean;
  Vector variance;

  double linear_mean(std::span<const double> x) const;
  double linear_variance(std::span<const double> x) const;
  /// sigma(mu / sqrt(1 + pi s^2 / 8)): logistic link moderated by the predictive variance.
  double predictive(std::span<const double> x) const;
};

double moderated_sigmoid(double mean, double variance);

struct BayesLogisticOptions {
  double prior_precision = 1.0;
  double gradient_tolerance = 1e-9;
  int max_iterations = 100;
};

/// sum_i [softplus(z_i) - y_i z_i] + (precision/2)|w|^2 and its gradient.
double map_objective(const Rows& x, const Labels& y, std::span<const double> w, double precision,
                     Vector* gradient);

/// Laplace approximation around the MAP of a logistic likelihood with a
/// zero-mean isotropic Gaussian prior. Variance is 1 / diag(Hessian) at the MAP.
/// Throws ConvergenceError if Newton does not reach the gradient tolerance.
GaussianPosterior fit_bayes_logistic(const Rows& x, const Labels& y, std::size_t dimension,
                                     const BayesLogisticOptions& options = {});

}  // namespace pam
