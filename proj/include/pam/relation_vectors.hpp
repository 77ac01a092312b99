#pragma once

#include <cstddef>
#include <map>
#include <shared_mutex>
#include <span>
#include <string>
#include <string_view>

#include "pam/embeddings.hpp"
#include "pam/relation_model.hpp"

namespace pam {

enum class Variant { W2vDiff, BartRel, BartRole, BartFull };

/// "w2v-diff" | "bart-rel" | "bart-role" | "bart-full". Throws InputError otherwise.
Variant parse_variant(std::string_view tag);
std::string_view variant_tag(Variant v);
inline bool is_bart(Variant v) { return v != Variant::W2vDiff; }

/// Componentwise v_i^p. Throws InputError for components outside [0, 1] or p <= 0.
Vector power_transform(std::span<const double> v, double p);

/// Edge-attribute source for semantic relation networks. Implementations are
/// immutable and safe to query concurrently.
class RelationProvider {
 public:
  virtual ~RelationProvider() = default;
  virtual Variant variant() const = 0;
  virtual std::size_t dimension() const = 0;
  virtual Vector relation_vector(std::string_view w1, std::string_view w2) const = 0;
};

class DiffProvider final : public RelationProvider {
 public:
  explicit DiffProvider(const EmbeddingTable& table, LookupOptions lookup = {})
      : table_(table), lookup_(lookup) {}
  Variant variant() const override { return Variant::W2vDiff; }
  std::size_t dimension() const override { return table_.dimension(); }
  Vector relation_vector(std::string_view w1, std::string_view w2) const override;

 private:
  const EmbeddingTable& table_;
  LookupOptions lookup_;
};

/// Relation posteriors for every model, role posteriors of the first word,
/// or both concatenated; the power transform is applied to the whole output.
class BartProvider final : public RelationProvider {
 public:
  BartProvider(const EmbeddingTable& table, const RelationModelSet& models, Variant variant,
               double power = 5.0, LookupOptions lookup = {});
  Variant variant() const override { return variant_; }
  std::size_t dimension() const override;
  Vector relation_vector(std::string_view w1, std::string_view w2) const override;

 private:
  const EmbeddingTable& table_;
  const RelationModelSet& models_;
  Variant variant_;
  double power_;
  LookupOptions lookup_;
};

/// Memoizes another provider's vectors by (w1, w2). Thread-safe.
class CachedProvider final : public RelationProvider {
 public:
  explicit CachedProvider(const RelationProvider& inner) : inner_(inner) {}
  Variant variant() const override { return inner_.variant(); }
  std::size_t dimension() const override { return inner_.dimension(); }
  Vector relation_vector(std::string_view w1, std::string_view w2) const override;

 private:
  const RelationProvider& inner_;
  mutable std::shared_mutex mutex_;
  mutable std::map<std::pair<std::string, std::string>, Vector> cache_;
};

}  // namespace pam
