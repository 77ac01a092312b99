#include "pam/engine.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <string>

#include "pam/error.hpp"
#include "pam/sinkhorn.hpp"

namespace pam {
namespace {

using EdgeList = std::vector<std::pair<std::size_t, std::size_t>>;

// incident[i] = (edge index, other endpoint) for edges leaving (or entering) node i.
std::vector<EdgeList> incidence(const EdgeList& edges, std::size_t n, bool outgoing) {
  std::vector<EdgeList> out(n);
  for (std::size_t e = 0; e < edges.size(); ++e) {
    const auto [a, b] = edges[e];
    if (outgoing) out[a].emplace_back(e, b);
    else out[b].emplace_back(e, a);
  }
  return out;
}

// The floor keeps inputs strictly positive, so hitting the cap only means a slow
// tail; the last iterate is used as is.
Matrix normalized(const Matrix& raw) {
  if (raw.empty()) return raw;
  return bistochastic_normalize(raw).matrix;
}

double clamp_floor(double cos) { return std::max(cos, 0.0) + kSimilarityFloor; }

// Largest constraint violation accepted as balanced in slack mode.
constexpr double kSlackTolerance = 1e-11;

void normalize_rows_log(Matrix& log_m) {
  for (std::size_t i = 0; i < log_m.rows(); ++i) {
    double mx = -std::numeric_limits<double>::infinity();
    for (double v : log_m.row(i)) mx = std::max(mx, v);
    double s = 0.0;
    for (double v : log_m.row(i)) s += std::exp(v - mx);
    const double lse = mx + std::log(s);
    for (double& v : log_m.row(i)) v -= lse;
  }
}

// Scales exp(logits) so rows sum to one and each column, together with a slack
// entry of weight exp(v_c), sums to one. The potentials u, v minimize the convex
// sum exp(L + u + v) + sum exp(v) - sum u - sum v, solved by damped Newton;
// alternating normalization needs far too many passes once beta is large.
// On return logits holds the balanced log matrix and v the column potentials.
void balance_with_slack(Matrix& logits, std::vector<double>& v, int max_steps) {
  const std::size_t ns = logits.rows(), nt = logits.cols();
  const Eigen::Index n = static_cast<Eigen::Index>(ns + nt);
  std::vector<double> u(ns);
  for (std::size_t i = 0; i < ns; ++i) {
    double mx = -std::numeric_limits<double>::infinity();
    for (std::size_t c = 0; c < nt; ++c) mx = std::max(mx, logits(i, c) + v[c]);
    double s = 0.0;
    for (std::size_t c = 0; c < nt; ++c) s += std::exp(logits(i, c) + v[c] - mx);
    u[i] = -(mx + std::log(s));
  }
  auto objective = [&](const std::vector<double>& uu, const std::vector<double>& vv) {
    double f = 0.0;
    for (std::size_t c = 0; c < nt; ++c) {
      if (vv[c] > 700.0) return std::numeric_limits<double>::infinity();
      f += std::exp(vv[c]) - vv[c];
    }
    for (std::size_t i = 0; i < ns; ++i) {
      f -= uu[i];
      for (std::size_t c = 0; c < nt; ++c) {
        const double e = logits(i, c) + uu[i] + vv[c];
        if (e > 700.0) return std::numeric_limits<double>::infinity();
        f += std::exp(e);
      }
    }
    return f;
  };

  Eigen::MatrixXd h(n, n);
  Eigen::VectorXd g(n);
  std::vector<double> u_try(ns), v_try(nt);
  for (int step = 0; step < max_steps; ++step) {
    h.setZero();
    for (std::size_t c = 0; c < nt; ++c) {
      const double sc = std::exp(v[c]);
      h(static_cast<Eigen::Index>(ns + c), static_cast<Eigen::Index>(ns + c)) = sc;
      g(static_cast<Eigen::Index>(ns + c)) = sc - 1.0;
    }
    for (std::size_t i = 0; i < ns; ++i) g(static_cast<Eigen::Index>(i)) = -1.0;
    for (std::size_t i = 0; i < ns; ++i) {
      const auto ii = static_cast<Eigen::Index>(i);
      for (std::size_t c = 0; c < nt; ++c) {
        const auto cc = static_cast<Eigen::Index>(ns + c);
        const double p = std::exp(logits(i, c) + u[i] + v[c]);
        g(ii) += p;
        g(cc) += p;
        h(ii, ii) += p;
        h(cc, cc) += p;
        h(ii, cc) = h(cc, ii) = p;
      }
    }
    if (g.lpNorm<Eigen::Infinity>() < kSlackTolerance) break;
    const Eigen::VectorXd d = -h.ldlt().solve(g);
    if (!d.allFinite()) break;
    // Near the optimum the objective is flat to roundoff, so the full step is taken.
    const bool local = g.lpNorm<Eigen::Infinity>() < 1e-3;
    const double f0 = local ? 0.0 : objective(u, v);
    const double slope = g.dot(d);
    double t = 1.0;
    for (int half = 0; half < 60; ++half, t *= 0.5) {
      for (std::size_t i = 0; i < ns; ++i) u_try[i] = u[i] + t * d(static_cast<Eigen::Index>(i));
      for (std::size_t c = 0; c < nt; ++c) v_try[c] = v[c] + t * d(static_cast<Eigen::Index>(ns + c));
      if (local || objective(u_try, v_try) <= f0 + 1e-4 * t * slope) break;
    }
    u.swap(u_try);
    v.swap(v_try);
  }
  for (std::size_t i = 0; i < ns; ++i)
    for (std::size_t c = 0; c < nt; ++c) logits(i, c) += u[i] + v[c];
  // rows are exact even if the step cap was hit
  normalize_rows_log(logits);
}

}  // namespace

SimilarityTables normalize_similarities(const Matrix& raw_node, const Matrix& raw_edge,
                                        EdgeList source_edges, EdgeList target_edges) {
  if (raw_node.rows() == 0 || raw_node.cols() == 0) throw InputError("networks must be nonempty");
  if (raw_edge.rows() != source_edges.size() || raw_edge.cols() != target_edges.size()) {
    throw InputError("edge similarity table does not match the edge lists");
  }
  for (const auto& [a, b] : source_edges) {
    if (a >= raw_node.rows() || b >= raw_node.rows() || a == b) throw InputError("bad source edge");
  }
  for (const auto& [a, b] : target_edges) {
    if (a >= raw_node.cols() || b >= raw_node.cols() || a == b) throw InputError("bad target edge");
  }
  SimilarityTables t;
  t.node = normalized(raw_node);
  t.edge = normalized(raw_edge);
  t.source_edges = std::move(source_edges);
  t.target_edges = std::move(target_edges);
  return t;
}

SimilarityTables compute_similarities(const SemanticRelationNetwork& source,
                                      const SemanticRelationNetwork& target) {
  if (source.size() == 0 || target.size() == 0) throw InputError("networks must be nonempty");
  const auto& sn = source.nodes();
  const auto& tn = target.nodes();
  const auto& se = source.edges();
  const auto& te = target.edges();

  Matrix raw_node(sn.size(), tn.size());
  for (std::size_t i = 0; i < sn.size(); ++i) {
    for (std::size_t k = 0; k < tn.size(); ++k) {
      if (sn[i].attribute.size() != tn[k].attribute.size()) {
        throw InputError("node attributes of source and target differ in dimension");
      }
      raw_node(i, k) = clamp_floor(cosine_or_zero(sn[i].attribute, tn[k].attribute));
    }
  }
  Matrix raw_edge(se.size(), te.size());
  for (std::size_t e = 0; e < se.size(); ++e) {
    for (std::size_t f = 0; f < te.size(); ++f) {
      if (se[e].attribute.size() != te[f].attribute.size()) {
        throw InputError("edge attributes of source and target differ in dimension");
      }
      raw_edge(e, f) = clamp_floor(cosine_or_zero(se[e].attribute, te[f].attribute));
    }
  }
  EdgeList s_edges, t_edges;
  for (const auto& e : se) s_edges.emplace_back(e.from, e.to);
  for (const auto& e : te) t_edges.emplace_back(e.from, e.to);

  std::vector<double> sa, ta, sea, tea;
  for (const auto& n : sn) sa.push_back(n.attention);
  for (const auto& n : tn) ta.push_back(n.attention);
  for (const auto& e : se) sea.push_back(e.attention);
  for (const auto& e : te) tea.push_back(e.attention);
  return with_attention(normalize_similarities(raw_node, raw_edge, std::move(s_edges), std::move(t_edges)), sa,
                        ta, sea, tea);
}

SimilarityTables with_attention(SimilarityTables t, std::span<const double> source_nodes,
                                std::span<const double> target_nodes, std::span<const double> source_edges,
                                std::span<const double> target_edges) {
  auto factor = [](std::span<const double> a, std::size_t i) { return a.empty() ? 1.0 : a[i]; };
  auto check = [](std::span<const double> a, std::size_t n, const char* what) {
    if (!a.empty() && a.size() != n) throw InputError(std::string(what) + " attention has the wrong length");
  };
  check(source_nodes, t.node.rows(), "source node");
  check(target_nodes, t.node.cols(), "target node");
  check(source_edges, t.edge.rows(), "source edge");
  check(target_edges, t.edge.cols(), "target edge");
  for (std::size_t i = 0; i < t.node.rows(); ++i)
    for (std::size_t k = 0; k < t.node.cols(); ++k)
      t.node(i, k) *= factor(source_nodes, i) * factor(target_nodes, k);
  for (std::size_t e = 0; e < t.edge.rows(); ++e)
    for (std::size_t f = 0; f < t.edge.cols(); ++f)
      t.edge(e, f) *= factor(source_edges, e) * factor(target_edges, f);
  return t;
}

Matrix compatibility(const Matrix& m, const SimilarityTables& tables, double alpha, Compatibility mode) {
  const std::size_t ns = tables.source_size();
  const std::size_t nt = tables.target_size();
  Matrix q(ns, nt);
  for (std::size_t i = 0; i < ns; ++i)
    for (std::size_t k = 0; k < nt; ++k) q(i, k) = alpha * tables.node(i, k);

  auto accumulate = [&](bool outgoing) {
    const auto s_inc = incidence(tables.source_edges, ns, outgoing);
    const auto t_inc = incidence(tables.target_edges, nt, outgoing);
    for (std::size_t i = 0; i < ns; ++i) {
      for (std::size_t k = 0; k < nt; ++k) {
        double sum = 0.0;
        for (const auto& [e, j] : s_inc[i]) {
          for (const auto& [f, l] : t_inc[k]) sum += m(j, l) * tables.edge(e, f);
        }
        q(i, k) += sum;
      }
    }
  };
  accumulate(true);
  if (mode == Compatibility::Symmetric) accumulate(false);
  return q;
}

double energy(const Matrix& m, const SimilarityTables& tables, double alpha, double beta) {
  double entropy = 0.0;
  for (double v : m.values()) {
    if (v > 0.0) entropy += v * std::log(v);
  }
  return -g_score(m, tables, alpha) - entropy / beta;
}

double g_score(const Matrix& m, const SimilarityTables& tables, double alpha) {
  if (m.rows() != tables.source_size() || m.cols() != tables.target_size()) {
    throw InputError("mapping matrix shape does not match the similarity tables");
  }
  double edges = 0.0;
  for (std::size_t e = 0; e < tables.source_edges.size(); ++e) {
    const auto [i, j] = tables.source_edges[e];
    for (std::size_t f = 0; f < tables.target_edges.size(); ++f) {
      const auto [k, l] = tables.target_edges[f];
      edges += m(i, k) * m(j, l) * tables.edge(e, f);
    }
  }
  double nodes = 0.0;
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t k = 0; k < m.cols(); ++k) nodes += m(i, k) * tables.node(i, k);
  return edges + alpha * nodes;
}

std::vector<std::size_t> extract_hard(const Matrix& m) {
  std::vector<std::size_t> hard(m.rows(), kUnmapped);
  std::vector<bool> row_used(m.rows(), false), col_used(m.cols(), false);
  const std::size_t pairs = std::min(m.rows(), m.cols());
  for (std::size_t step = 0; step < pairs; ++step) {
    std::size_t best_r = kUnmapped, best_c = kUnmapped;
    double best = -std::numeric_limits<double>::infinity();
    for (std::size_t r = 0; r < m.rows(); ++r) {
      if (row_used[r]) continue;
      for (std::size_t c = 0; c < m.cols(); ++c) {
        if (!col_used[c] && m(r, c) > best) {
          best = m(r, c);
          best_r = r;
          best_c = c;
        }
      }
    }
    if (best_r == kUnmapped) break;  // only NaNs left
    hard[best_r] = best_c;
    row_used[best_r] = true;
    col_used[best_c] = true;
  }
  return hard;
}

Matrix assignment_matrix(const std::vector<std::size_t>& hard, std::size_t cols) {
  Matrix out(hard.size(), cols);
  for (std::size_t i = 0; i < hard.size(); ++i) {
    if (hard[i] != kUnmapped) out(i, hard[i]) = 1.0;
  }
  return out;
}

MappingResult run_pam(const SimilarityTables& tables, const PamOptions& options) {
  if (!(options.alpha >= 0.0) || !std::isfinite(options.alpha)) throw InputError("alpha must be nonnegative");
  if (!(options.beta0 > 0.0) || !std::isfinite(options.beta0)) throw InputError("beta0 must be positive");
  if (options.iterations < 1) throw InputError("iterations must be at least 1");
  if (options.normalization_passes < 1) throw InputError("normalization passes must be at least 1");
  if (options.slack_steps < 1) throw InputError("slack steps must be at least 1");
  const std::size_t ns = tables.source_size();
  const std::size_t nt = tables.target_size();
  if (ns == 0 || nt == 0) throw InputError("networks must be nonempty");

  MappingResult result;
  result.options = options;
  Matrix m(ns, nt, 1.0 / static_cast<double>(nt));
  Matrix log_m(ns, nt);
  const bool use_slack = options.slack && ns < nt;
  std::vector<double> col_potential(use_slack ? nt : 0);

  for (int k = 0; k < options.iterations; ++k) {
    const double beta = annealed_beta(options.beta0, k);
    const Matrix q = compatibility(m, tables, options.alpha, options.compatibility);
    for (std::size_t i = 0; i < ns; ++i)
      for (std::size_t c = 0; c < nt; ++c) log_m(i, c) = beta * q(i, c);

    if (use_slack) {
      // Column potentials grow with beta; rescaled they are a warm start.
      const double rescale = k == 0 ? 0.0 : beta / annealed_beta(options.beta0, k - 1);
      for (double& v : col_potential) v *= rescale;
      balance_with_slack(log_m, col_potential, options.slack_steps);
    } else {
      // exp(beta Q), divided by column sums, then by row sums; both as log-sum-exp shifts.
      for (int pass = 0; pass < options.normalization_passes; ++pass) {
        for (std::size_t c = 0; c < nt; ++c) {
          double mx = -std::numeric_limits<double>::infinity();
          for (std::size_t i = 0; i < ns; ++i) mx = std::max(mx, log_m(i, c));
          double s = 0.0;
          for (std::size_t i = 0; i < ns; ++i) s += std::exp(log_m(i, c) - mx);
          const double lse = mx + std::log(s);
          for (std::size_t i = 0; i < ns; ++i) log_m(i, c) -= lse;
        }
        normalize_rows_log(log_m);
      }
    }
    for (std::size_t i = 0; i < ns; ++i)
      for (std::size_t c = 0; c < nt; ++c) m(i, c) = std::exp(log_m(i, c));
    for (double v : m.values()) {
      if (!std::isfinite(v)) {
        throw NumericError("non-finite mapping value at iteration " + std::to_string(k + 1));
      }
    }
    result.energy_trace.push_back(energy(m, tables, options.alpha, beta));
  }

  result.final_beta = annealed_beta(options.beta0, options.iterations);
  result.soft = std::move(m);
  result.hard = extract_hard(result.soft);
  result.g_score = g_score(assignment_matrix(result.hard, nt), tables, options.alpha);
  return result;
}

MappingResult run_pam(const SemanticRelationNetwork& source, const SemanticRelationNetwork& target,
                      const PamOptions& options) {
  return run_pam(compute_similarities(source, target), options);
}

}  // namespace pam
