#pragma once

// Test-side helpers and oracles. Oracles here are written independently of
// the library code they check (plain loops, brute force).

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <string>
#include <vector>

#include "pam/embeddings.hpp"
#include "pam/engine.hpp"
#include "pam/matrix.hpp"

namespace testutil {

inline pam::EmbeddingTable random_table(const std::vector<std::string>& words, std::size_t dim,
                                        std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g(0.0, 1.0);
  pam::EmbeddingTable t(dim);
  for (const auto& w : words) {
    std::vector<double> v(dim);
    for (auto& x : v) x = g(rng);
    t.add(w, std::span<const double>(v));
  }
  return t;
}

inline pam::Matrix random_matrix(std::size_t r, std::size_t c, std::mt19937_64& rng, double lo = 0.0,
                                 double hi = 1.0) {
  std::uniform_real_distribution<double> u(lo, hi);
  pam::Matrix m(r, c);
  for (auto& v : m.values()) v = u(rng);
  return m;
}

// Objective of a 0/1 assignment perm (source i -> target perm[i]) written directly
// from the edge and node sums.
inline double assignment_objective(const std::vector<std::size_t>& perm, const pam::SimilarityTables& t,
                                   double alpha) {
  double total = 0.0;
  for (std::size_t i = 0; i < perm.size(); ++i) total += alpha * t.node(i, perm[i]);
  for (std::size_t e = 0; e < t.source_edges.size(); ++e) {
    const auto [a, b] = t.source_edges[e];
    for (std::size_t f = 0; f < t.target_edges.size(); ++f) {
      const auto [c, d] = t.target_edges[f];
      if (perm[a] == c && perm[b] == d) total += t.edge(e, f);
    }
  }
  return total;
}

// Best full permutation by brute force (n == n'); ties keep the first in
// lexicographic order.
inline std::vector<std::size_t> best_permutation(const pam::SimilarityTables& t, double alpha,
                                                 double* best_value = nullptr) {
  std::vector<std::size_t> perm(t.source_size());
  std::iota(perm.begin(), perm.end(), 0);
  std::vector<std::size_t> best = perm;
  double best_v = -1e300;
  do {
    const double v = assignment_objective(perm, t, alpha);
    if (v > best_v) {
      best_v = v;
      best = perm;
    }
  } while (std::next_permutation(perm.begin(), perm.end()));
  if (best_value) *best_value = best_v;
  return best;
}

// Plain alternating scaling loop, fixed number of sweeps.
inline pam::Matrix scale_loop(pam::Matrix m, int sweeps) {
  const double col_target = static_cast<double>(m.rows()) / static_cast<double>(m.cols());
  for (int s = 0; s < sweeps; ++s) {
    for (std::size_t r = 0; r < m.rows(); ++r) {
      double sum = 0;
      for (std::size_t c = 0; c < m.cols(); ++c) sum += m(r, c);
      for (std::size_t c = 0; c < m.cols(); ++c) m(r, c) /= sum;
    }
    for (std::size_t c = 0; c < m.cols(); ++c) {
      double sum = 0;
      for (std::size_t r = 0; r < m.rows(); ++r) sum += m(r, c);
      for (std::size_t r = 0; r < m.rows(); ++r) m(r, c) *= col_target / sum;
    }
  }
  return m;
}

inline double rel_err(double a, double b) { return std::abs(a - b) / std::max({1.0, std::abs(a), std::abs(b)}); }

}  // namespace testutil
