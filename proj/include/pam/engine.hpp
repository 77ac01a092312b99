#pragma once

#include <cstddef>
#include <limits>
#include <span>
#include <utility>
#include <vector>

#include "pam/matrix.hpp"
#include "pam/semnet.hpp"

namespace pam {

/// Normalized similarities shared by the solver, the energy and the G score.
struct SimilarityTables {
  Matrix node;  // n_source x n_target
  Matrix edge;  // source edges x target edges; rows/cols follow network edge order
  std::vector<std::pair<std::size_t, std::size_t>> source_edges;
  std::vector<std::pair<std::size_t, std::size_t>> target_edges;

  std::size_t source_size() const { return node.rows(); }
  std::size_t target_size() const { return node.cols(); }
};

// Added to clamped cosines before normalization so every row and column has mass.
inline constexpr double kSimilarityFloor = 1e-8;

/// Clamped (and floored) cosines, bistochastically normalized, then multiplied
/// by attention products. Throws InputError if either network is empty or
/// attribute dimensions disagree.
SimilarityTables compute_similarities(const SemanticRelationNetwork& source,
                                      const SemanticRelationNetwork& target);

/// Same pipeline from raw (pre-normalization, nonnegative) similarity matrices.
/// Attention factors default to 1.
SimilarityTables normalize_similarities(const Matrix& raw_node, const Matrix& raw_edge,
                                        std::vector<std::pair<std::size_t, std::size_t>> source_edges,
                                        std::vector<std::pair<std::size_t, std::size_t>> target_edges);

/// Multiplies normalized entries by attention products: node (i, i') by
/// a_s(i) a_t(i'), edge pair (e, f) by a_s(e) a_t(f). Empty spans mean all ones.
SimilarityTables with_attention(SimilarityTables tables, std::span<const double> source_nodes,
                                std::span<const double> target_nodes, std::span<const double> source_edges,
                                std::span<const double> target_edges);

enum class Compatibility {
  // Q_ii' sums over edges leaving i and i' only.
  Outgoing,
  // Q_ii' sums over edges leaving and entering i and i' (full energy gradient).
  Symmetric,
};

struct PamOptions {
  double alpha = 1.0;
  double beta0 = 1.0;
  int iterations = 500;
  Compatibility compatibility = Compatibility::Symmetric;
  // Column-then-row normalization passes per iteration. One pass is the plain
  // graduated-assignment update; more passes approach a full Sinkhorn projection.
  int normalization_passes = 1;
  // With fewer source than target nodes, add a slack row that absorbs the
  // leftover column mass and balance exactly (at most slack_steps Newton steps).
  // Without it, a target column claimed by a single source row normalizes to
  // one whatever its compatibility, so that row's preference is lost.
  bool slack = true;
  int slack_steps = 100;
};

inline double annealed_beta(double beta0, int k) { return beta0 * (1.0 + k / 10.0); }

inline constexpr std::size_t kUnmapped = std::numeric_limits<std::size_t>::max();

struct MappingResult {
  Matrix soft;                      // rows sum to 1
  std::vector<std::size_t> hard;    // target index per source node, or kUnmapped
  std::vector<double> energy_trace; // energy after each iteration, at that iteration's beta
  double g_score = 0.0;             // on the hardened mapping
  double final_beta = 0.0;          // beta after the last annealing step
  PamOptions options;
};

/// Compatibility matrix for the current mapping.
Matrix compatibility(const Matrix& m, const SimilarityTables& tables, double alpha, Compatibility mode);

/// Graduated assignment: uniform start, Q, exp(beta Q), normalize by column
/// sums then row sums, anneal beta by beta0/10. Computed in the log domain.
MappingResult run_pam(const SimilarityTables& tables, const PamOptions& options = {});
MappingResult run_pam(const SemanticRelationNetwork& source, const SemanticRelationNetwork& target,
                      const PamOptions& options = {});

/// -sum m m S_edge - alpha sum m S_node - (1/beta) sum m log m, with 0 log 0 = 0.
double energy(const Matrix& m, const SimilarityTables& tables, double alpha, double beta);

/// Edge and node terms of the energy with the signs flipped.
double g_score(const Matrix& m, const SimilarityTables& tables, double alpha);

/// Greedy: take the largest remaining entry, drop its row and column, repeat.
/// Ties go to the lowest (row, column).
std::vector<std::size_t> extract_hard(const Matrix& m);

/// 0/1 matrix of a hard assignment.
Matrix assignment_matrix(const std::vector<std::size_t>& hard, std::size_t cols);

}  // namespace pam
