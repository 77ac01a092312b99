#pragma once

#include <cstddef>
#include <istream>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

namespace pam {

using Vector = std::vector<double>;

struct LoadOptions {
  std::size_t expected_dimension = 300;
  // When set, only these tokens (and their underscore/lowercase variants) are kept.
  // Pretrained news-corpus files hold millions of rows; benchmarks need a few hundred.
  std::optional<std::unordered_set<std::string>> vocabulary;
};

struct LookupOptions {
  bool case_fold = true;
  bool constituent_mean = true;
};

/// Token -> fixed-dimension vector table. Immutable after load; concurrent
/// const access is safe.
class EmbeddingTable {
 public:
  explicit EmbeddingTable(std::size_t dimension);

  std::size_t dimension() const { return dimension_; }
  std::size_t size() const { return tokens_.size(); }
  bool contains(std::string_view token) const;
  const std::vector<std::string>& tokens() const { return tokens_; }

  /// Raw stored row (single precision, as loaded).
  std::span<const float> row(std::string_view token) const;

  /// Adds a token. Throws LoadError on duplicates, wrong length, or non-finite values.
  void add(std::string token, std::span<const float> values);
  void add(std::string token, std::span<const double> values);

  /// Resolution order: verbatim, spaces->underscores, case-folded,
  /// then mean of whitespace/underscore constituents. Throws OovError.
  Vector lookup(std::string_view token, const LookupOptions& options = {}) const;
  bool resolvable(std::string_view token, const LookupOptions& options = {}) const;

  /// Text interchange format with a "count dimension" header; values are
  /// written in shortest round-trip form.
  void write(std::ostream& out) const;

 private:
  std::optional<std::size_t> find_exact(std::string_view token) const;
  std::optional<std::size_t> find_single(std::string_view token, bool case_fold) const;

  std::size_t dimension_;
  std::vector<std::string> tokens_;
  std::vector<float> data_;
  std::unordered_map<std::string, std::size_t> index_;
  std::unordered_map<std::string, std::size_t> folded_index_;  // first occurrence wins
};

EmbeddingTable load_embeddings(std::istream& in, const LoadOptions& options);
EmbeddingTable load_embeddings_file(const std::string& path, const LoadOptions& options);

/// u.v / (|u||v|). Throws NumericError for a zero vector or length mismatch.
double cosine(std::span<const double> u, std::span<const double> v);

/// Same as cosine but returns 0 when either vector has zero norm.
double cosine_or_zero(std::span<const double> u, std::span<const double> v);

Vector diff_vector(const EmbeddingTable& table, std::string_view w1, std::string_view w2,
                   const LookupOptions& options = {});

}  // namespace pam
