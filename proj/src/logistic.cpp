#include "pam/logistic.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "pam/error.hpp"

namespace pam {
namespace {

void check_data(const Rows& x, const Labels& y, bool require_both_classes) {
  if (x.size() != y.size()) throw InputError("feature rows and labels differ in length");
  std::size_t positives = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (y[i] != 0 && y[i] != 1) throw InputError("labels must be 0 or 1");
    if (x[i].size() != x.front().size()) throw InputError("feature rows differ in length");
    positives += static_cast<std::size_t>(y[i]);
  }
  if (require_both_classes && (positives == 0 || positives == y.size())) {
    throw NumericError("degenerate training data: labels contain a single class");
  }
}

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) s += a[k] * b[k];
  return s;
}

double soft_threshold(double z, double gamma) {
  if (z > gamma) return z - gamma;
  if (z < -gamma) return z + gamma;
  return 0.0;
}

}  // namespace

double sigmoid(double z) {
  if (z >= 0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

double softplus(double z) {
  if (z > 0) return z + std::log1p(std::exp(-z));
  return std::log1p(std::exp(z));
}

double elastic_net_smooth(const Rows& x, const Labels& y, std::span<const double> w, double b,
                          double l2, Vector* gradient) {
  const std::size_t n = x.size();
  const std::size_t d = w.size();
  if (gradient) gradient->assign(d + 1, 0.0);
  double loss = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double z = dot(x[i], w) + b;
    loss += softplus(z) - y[i] * z;
    if (gradient) {
      const double r = (sigmoid(z) - y[i]) / static_cast<double>(n);
      for (std::size_t k = 0; k < d; ++k) (*gradient)[k] += r * x[i][k];
      (*gradient)[d] += r;
    }
  }
  loss /= static_cast<double>(n);
  double ridge = 0.0;
  for (std::size_t k = 0; k < d; ++k) {
    ridge += w[k] * w[k];
    if (gradient) (*gradient)[k] += l2 * w[k];
  }
  return loss + 0.5 * l2 * ridge;
}

double elastic_net_objective(const Rows& x, const Labels& y, std::span<const double> w, double b,
                             double l1, double l2) {
  double lasso = 0.0;
  for (double v : w) lasso += std::fabs(v);
  return elastic_net_smooth(x, y, w, b, l2, nullptr) + l1 * lasso;
}

ElasticNetFit fit_elastic_net(const Rows& x, const Labels& y, const ElasticNetOptions& options) {
  if (x.empty()) throw NumericError("degenerate training data: no examples");
  check_data(x, y, true);
  if (options.l1 < 0 || options.l2 < 0) throw InputError("elastic-net penalties must be nonnegative");

  const std::size_t n = x.size();
  const std::size_t d = x.front().size();
  const double inv_n = 1.0 / static_cast<double>(n);

  // Column-major copy for cache-friendly coordinate sweeps.
  std::vector<double> cols(n * d);
  Vector curvature(d, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t k = 0; k < d; ++k) {
      cols[k * n + i] = x[i][k];
      curvature[k] += x[i][k] * x[i][k];
    }
  }
  for (double& c : curvature) c = 0.25 * c * inv_n + options.l2;

  ElasticNetFit fit;
  fit.coefficients.assign(d, 0.0);
  Vector z(n, 0.0);
  Vector residual(n);
  auto refresh_residual = [&] {
    for (std::size_t i = 0; i < n; ++i) residual[i] = sigmoid(z[i]) - y[i];
  };

  double previous = elastic_net_objective(x, y, fit.coefficients, fit.intercept, options.l1, options.l2);
  for (int sweep = 1; sweep <= options.max_sweeps; ++sweep) {
    refresh_residual();
    {
      double g = 0.0;
      for (double r : residual) g += r;
      const double step = -(g * inv_n) / 0.25;
      fit.intercept += step;
      for (std::size_t i = 0; i < n; ++i) {
        z[i] += step;
        residual[i] = sigmoid(z[i]) - y[i];
      }
    }
    for (std::size_t k = 0; k < d; ++k) {
      if (curvature[k] <= 0.0) continue;
      const double* col = cols.data() + k * n;
      double g = 0.0;
      for (std::size_t i = 0; i < n; ++i) g += residual[i] * col[i];
      g = g * inv_n + options.l2 * fit.coefficients[k];
      const double old = fit.coefficients[k];
      const double updated =
          soft_threshold(old - g / curvature[k], options.l1 / curvature[k]);
      const double delta = updated - old;
      if (delta == 0.0) continue;
      fit.coefficients[k] = updated;
      for (std::size_t i = 0; i < n; ++i) {
        z[i] += delta * col[i];
        residual[i] = sigmoid(z[i]) - y[i];
      }
    }
    const double current =
        elastic_net_objective(x, y, fit.coefficients, fit.intercept, options.l1, options.l2);
    fit.sweeps = sweep;
    if (std::fabs(previous - current) < options.tolerance) {
      fit.converged = true;
      break;
    }
    previous = current;
  }

  for (std::size_t k = 0; k < d; ++k) {
    if (std::fabs(fit.coefficients[k]) > options.selection_threshold) fit.selected.push_back(k);
  }
  if (fit.selected.empty()) {
    throw NumericError("elastic net selected no features (l1 penalty too strong)");
  }
  return fit;
}

double GaussianPosterior::linear_mean(std::span<const double> x) const {
  if (x.size() != mean.size()) throw InputError("feature length does not match posterior");
  return dot(mean, x);
}

double GaussianPosterior::linear_variance(std::span<const double> x) const {
  if (x.size() != variance.size()) throw InputError("feature length does not match posterior");
  double s = 0.0;
  for (std::size_t k = 0; k < x.size(); ++k) s += variance[k] * x[k] * x[k];
  return s;
}

double GaussianPosterior::predictive(std::span<const double> x) const {
  return moderated_sigmoid(linear_mean(x), linear_variance(x));
}

double moderated_sigmoid(double mean, double variance) {
  return sigmoid(mean / std::sqrt(1.0 + std::numbers::pi * variance / 8.0));
}

double map_objective(const Rows& x, const Labels& y, std::span<const double> w, double precision,
                     Vector* gradient) {
  const std::size_t d = w.size();
  if (gradient) gradient->assign(d, 0.0);
  double value = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double z = dot(x[i], w);
    value += softplus(z) - y[i] * z;
    if (gradient) {
      const double r = sigmoid(z) - y[i];
      for (std::size_t k = 0; k < d; ++k) (*gradient)[k] += r * x[i][k];
    }
  }
  for (std::size_t k = 0; k < d; ++k) {
    value += 0.5 * precision * w[k] * w[k];
    if (gradient) (*gradient)[k] += precision * w[k];
  }
  return value;
}

GaussianPosterior fit_bayes_logistic(const Rows& x, const Labels& y, std::size_t dimension,
                                     const BayesLogisticOptions& options) {
  check_data(x, y, false);
  if (!x.empty() && x.front().size() != dimension) {
    throw InputError("feature rows do not match the declared dimension");
  }
  if (!(options.prior_precision > 0.0)) throw InputError("prior precision must be positive");

  const std::size_t n = x.size();
  const std::size_t d = dimension;
  const double lambda = options.prior_precision;

  Eigen::MatrixXd design(n, d);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t k = 0; k < d; ++k) design(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)) = x[i][k];

  Vector w(d, 0.0);
  Vector grad;
  double value = map_objective(x, y, w, lambda, &grad);
  auto norm = [](const Vector& v) {
    double s = 0.0;
    for (double e : v) s += e * e;
    return std::sqrt(s);
  };

  Eigen::VectorXd weights(static_cast<Eigen::Index>(n));
  for (int iter = 0; norm(grad) > options.gradient_tolerance; ++iter) {
    if (iter >= options.max_iterations) {
      throw ConvergenceError("Bayesian logistic regression did not converge; gradient norm " +
                                 std::to_string(norm(grad)),
                             norm(grad));
    }
    Eigen::VectorXd z = design * Eigen::Map<const Eigen::VectorXd>(w.data(), static_cast<Eigen::Index>(d));
    for (Eigen::Index i = 0; i < z.size(); ++i) {
      const double p = sigmoid(z(i));
      weights(i) = p * (1.0 - p);
    }
    Eigen::Map<const Eigen::VectorXd> g(grad.data(), static_cast<Eigen::Index>(d));
    Eigen::VectorXd step;
    if (d <= n) {
      Eigen::MatrixXd h = design.transpose() * weights.asDiagonal() * design;
      h.diagonal().array() += lambda;
      step = h.llt().solve(g);
    } else {
      // (lambda I + X'WX)^-1 g = (g - X' (lambda W^-1 + X X')^-1 X g) / lambda
      Eigen::MatrixXd inner = design * design.transpose();
      for (Eigen::Index i = 0; i < inner.rows(); ++i) {
        inner(i, i) += lambda / std::max(weights(i), 1e-300);
      }
      Eigen::VectorXd t = inner.ldlt().solve(design * g);
      step = (g - design.transpose() * t) / lambda;
    }

    double scale = 1.0;
    Vector candidate(d);
    Vector candidate_grad;
    double candidate_value = value;
    for (int halving = 0; halving < 60; ++halving) {
      for (std::size_t k = 0; k < d; ++k) candidate[k] = w[k] - scale * step(static_cast<Eigen::Index>(k));
      candidate_value = map_objective(x, y, candidate, lambda, &candidate_grad);
      if (candidate_value <= value) break;
      scale *= 0.5;
    }
    if (candidate_value > value) {
      throw ConvergenceError("Bayesian logistic regression line search failed; gradient norm " +
                                 std::to_string(norm(grad)),
                             norm(grad));
    }
    w = candidate;
    grad = candidate_grad;
    value = candidate_value;
    // Steps this small no longer move w in double precision; the remaining
    // gradient is roundoff in the n-term sums.
    if (scale * step.norm() <= 1e-13 * (1.0 + norm(w)) && norm(grad) < 1e-6) break;
  }

  GaussianPosterior post;
  post.mean = w;
  post.variance.assign(d, lambda);
  for (std::size_t i = 0; i < n; ++i) {
    const double p = sigmoid(dot(x[i], w));
    const double s = p * (1.0 - p);
    for (std::size_t k = 0; k < d; ++k) post.variance[k] += s * x[i][k] * x[i][k];
  }
  for (double& v : post.variance) v = 1.0 / v;
  return post;
}

}  // namespace pam
