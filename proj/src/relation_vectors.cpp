#include "pam/relation_vectors.hpp"

#include <cmath>
#include <mutex>

#include "pam/error.hpp"
#include "pam/features.hpp"

namespace pam {

Variant parse_variant(std::string_view tag) {
  if (tag == "w2v-diff") return Variant::W2vDiff;
  if (tag == "bart-rel") return Variant::BartRel;
  if (tag == "bart-role") return Variant::BartRole;
  if (tag == "bart-full") return Variant::BartFull;
  throw InputError("unknown relation variant '" + std::string(tag) +
                   "' (expected w2v-diff, bart-rel, bart-role or bart-full)");
}

std::string_view variant_tag(Variant v) {
  switch (v) {
    case Variant::W2vDiff: return "w2v-diff";
    case Variant::BartRel: return "bart-rel";
    case Variant::BartRole: return "bart-role";
    case Variant::BartFull: return "bart-full";
  }
  return "?";
}

Vector power_transform(std::span<const double> v, double p) {
  if (!(p > 0.0) || !std::isfinite(p)) throw InputError("power must be positive");
  Vector out(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (!(v[i] >= 0.0 && v[i] <= 1.0)) throw InputError("power transform expects values in [0, 1]");
    out[i] = std::pow(v[i], p);
  }
  return out;
}

Vector DiffProvider::relation_vector(std::string_view w1, std::string_view w2) const {
  return diff_vector(table_, w1, w2, lookup_);
}

BartProvider::BartProvider(const EmbeddingTable& table, const RelationModelSet& models, Variant variant,
                           double power, LookupOptions lookup)
    : table_(table), models_(models), variant_(variant), power_(power), lookup_(lookup) {
  if (!is_bart(variant)) throw InputError("BartProvider needs a bart-* variant");
  if (models.models.empty()) throw InputError("BART provider needs at least one trained relation model");
  if (models.word_dimension != table.dimension()) {
    throw InputError("relation models were trained on " + std::to_string(models.word_dimension) +
                     "-d embeddings but the table has dimension " + std::to_string(table.dimension()));
  }
  if (!(power > 0.0)) throw InputError("power must be positive");
}

std::size_t BartProvider::dimension() const {
  const std::size_t n = models_.models.size();
  return variant_ == Variant::BartFull ? 2 * n : n;
}

Vector BartProvider::relation_vector(std::string_view w1, std::string_view w2) const {
  const Vector aug = build_augmented_features(table_.lookup(w1, lookup_), table_.lookup(w2, lookup_));
  const auto first = word_slot(aug, 0);
  Vector out;
  out.reserve(dimension());
  if (variant_ != Variant::BartRole) {
    for (const auto& m : models_.models) out.push_back(relation_posterior(m, aug));
  }
  if (variant_ != Variant::BartRel) {
    for (const auto& m : models_.models) out.push_back(role_posterior(m, first));
  }
  return power_transform(out, power_);
}

Vector CachedProvider::relation_vector(std::string_view w1, std::string_view w2) const {
  std::pair<std::string, std::string> key(w1, w2);
  {
    std::shared_lock lock(mutex_);
    auto it = cache_.find(key);
    if (it != cache_.end()) return it->second;
  }
  Vector v = inner_.relation_vector(w1, w2);
  std::unique_lock lock(mutex_);
  return cache_.emplace(std::move(key), std::move(v)).first->second;
}

}  // namespace pam
