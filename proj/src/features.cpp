#include "pam/features.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "pam/error.hpp"

namespace pam {

std::vector<std::size_t> rank_permutation(std::span<const double> diff) {
  std::vector<std::size_t> order(diff.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return std::fabs(diff[a]) > std::fabs(diff[b]);
  });
  return order;
}

Vector build_augmented_features(std::span<const double> first, std::span<const double> second) {
  if (first.size() != second.size()) {
    throw InputError("augmented features need equal-length word vectors");
  }
  const std::size_t d = first.size();
  Vector diff(d);
  for (std::size_t k = 0; k < d; ++k) diff[k] = first[k] - second[k];
  const auto order = rank_permutation(diff);

  Vector out;
  out.reserve(4 * d);
  out.insert(out.end(), first.begin(), first.end());
  for (std::size_t k : order) out.push_back(first[k]);
  out.insert(out.end(), second.begin(), second.end());
  for (std::size_t k : order) out.push_back(second[k]);
  return out;
}

}  // namespace pam
