#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "pam/embeddings.hpp"

namespace pam {

/// Indices (0-based) ordered by descending |diff[i]|, ties by ascending index.
std::vector<std::size_t> rank_permutation(std::span<const double> diff);

/// raw(w1) | ranked(w1) | raw(w2) | ranked(w2), length 4*D. Both words are
/// permuted by rank_permutation(w1 - w2), so the dimensions on which the pair
/// differs most line up across training pairs.
Vector build_augmented_features(std::span<const double> first, std::span<const double> second);

/// Length-2D slot for one word of an augmented vector: raw | ranked.
inline std::span<const double> word_slot(std::span<const double> augmented, int which) {
  const std::size_t half = augmented.size() / 2;
  return augmented.subspan(which == 0 ? 0 : half, half);
}

}  // namespace pam
