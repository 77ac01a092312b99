#include "pam/embeddings.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>

#include "pam/error.hpp"

namespace pam {
namespace {

std::string to_lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

std::string spaces_to_underscores(std::string_view s) {
  std::string out(s);
  std::replace(out.begin(), out.end(), ' ', '_');
  return out;
}

std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t')) ++i;
    std::size_t start = i;
    while (i < line.size() && line[i] != ' ' && line[i] != '\t') ++i;
    if (i > start) fields.push_back(line.substr(start, i - start));
  }
  return fields;
}

std::vector<std::string_view> constituents(std::string_view token) {
  std::vector<std::string_view> parts;
  std::size_t i = 0;
  while (i < token.size()) {
    while (i < token.size() && (token[i] == ' ' || token[i] == '_')) ++i;
    std::size_t start = i;
    while (i < token.size() && token[i] != ' ' && token[i] != '_') ++i;
    if (i > start) parts.push_back(token.substr(start, i - start));
  }
  return parts;
}

bool parse_unsigned(std::string_view s, std::size_t& value) {
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  return ec == std::errc() && ptr == s.data() + s.size();
}

}  // namespace

EmbeddingTable::EmbeddingTable(std::size_t dimension) : dimension_(dimension) {
  if (dimension == 0) throw InputError("embedding dimension must be positive");
}

bool EmbeddingTable::contains(std::string_view token) const {
  return index_.count(std::string(token)) > 0;
}

std::span<const float> EmbeddingTable::row(std::string_view token) const {
  auto it = index_.find(std::string(token));
  if (it == index_.end()) throw OovError(std::string(token));
  return {data_.data() + it->second * dimension_, dimension_};
}

void EmbeddingTable::add(std::string token, std::span<const float> values) {
  if (values.size() != dimension_) {
    throw LoadError("vector for '" + token + "' has " + std::to_string(values.size()) +
                    " components, expected " + std::to_string(dimension_));
  }
  for (float v : values) {
    if (!std::isfinite(v)) throw LoadError("non-finite component in vector for '" + token + "'");
  }
  if (index_.count(token)) throw LoadError("duplicate token '" + token + "'");
  const std::size_t id = tokens_.size();
  index_.emplace(token, id);
  folded_index_.emplace(to_lower(token), id);
  data_.insert(data_.end(), values.begin(), values.end());
  tokens_.push_back(std::move(token));
}

void EmbeddingTable::add(std::string token, std::span<const double> values) {
  std::vector<float> narrowed(values.begin(), values.end());
  add(std::move(token), std::span<const float>(narrowed));
}

std::optional<std::size_t> EmbeddingTable::find_exact(std::string_view token) const {
  auto it = index_.find(std::string(token));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

std::optional<std::size_t> EmbeddingTable::find_single(std::string_view token,
                                                       bool case_fold) const {
  if (auto id = find_exact(token)) return id;
  const std::string underscored = spaces_to_underscores(token);
  if (underscored != token) {
    if (auto id = find_exact(underscored)) return id;
  }
  if (case_fold) {
    auto it = folded_index_.find(to_lower(underscored));
    if (it != folded_index_.end()) return it->second;
  }
  return std::nullopt;
}

Vector EmbeddingTable::lookup(std::string_view token, const LookupOptions& options) const {
  if (auto id = find_single(token, options.case_fold)) {
    const float* p = data_.data() + *id * dimension_;
    return Vector(p, p + dimension_);
  }
  if (options.constituent_mean) {
    auto parts = constituents(token);
    if (parts.size() > 1) {
      Vector mean(dimension_, 0.0);
      for (auto part : parts) {
        auto id = find_single(part, options.case_fold);
        if (!id) throw OovError(std::string(token));
        const float* p = data_.data() + *id * dimension_;
        for (std::size_t k = 0; k < dimension_; ++k) mean[k] += p[k];
      }
      for (double& v : mean) v /= static_cast<double>(parts.size());
      return mean;
    }
  }
  throw OovError(std::string(token));
}

bool EmbeddingTable::resolvable(std::string_view token, const LookupOptions& options) const {
  if (find_single(token, options.case_fold)) return true;
  if (!options.constituent_mean) return false;
  auto parts = constituents(token);
  if (parts.size() < 2) return false;
  return std::all_of(parts.begin(), parts.end(),
                     [&](std::string_view p) { return find_single(p, options.case_fold); });
}

void EmbeddingTable::write(std::ostream& out) const {
  out << tokens_.size() << ' ' << dimension_ << '\n';
  std::array<char, 64> buf;
  for (std::size_t t = 0; t < tokens_.size(); ++t) {
    out << tokens_[t];
    for (std::size_t k = 0; k < dimension_; ++k) {
      auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), data_[t * dimension_ + k]);
      out << ' ' << std::string_view(buf.data(), static_cast<std::size_t>(end - buf.data()));
    }
    out << '\n';
  }
}

EmbeddingTable load_embeddings(std::istream& in, const LoadOptions& options) {
  const std::size_t dim = options.expected_dimension;
  EmbeddingTable table(dim);

  std::unordered_set<std::string> keep;
  if (options.vocabulary) {
    for (const auto& word : *options.vocabulary) {
      keep.insert(to_lower(spaces_to_underscores(word)));
      for (auto part : constituents(word)) keep.insert(to_lower(part));
    }
  }

  std::string line;
  std::size_t line_no = 0;
  std::size_t content_lines = 0;
  std::vector<float> values(dim);
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    auto fields = split_fields(line);
    if (fields.empty()) continue;
    ++content_lines;
    if (content_lines == 1 && fields.size() == 2 && dim != 1) {
      std::size_t count = 0, header_dim = 0;
      if (parse_unsigned(fields[0], count) && parse_unsigned(fields[1], header_dim)) {
        if (header_dim != dim) {
          throw LoadError("header declares dimension " + std::to_string(header_dim) +
                          ", expected " + std::to_string(dim));
        }
        continue;
      }
    }
    if (fields.size() != dim + 1) {
      throw LoadError("line " + std::to_string(line_no) + ": expected " + std::to_string(dim) +
                      " values, found " + std::to_string(fields.size() - 1));
    }
    std::string token(fields[0]);
    if (options.vocabulary && !keep.count(to_lower(token))) continue;
    for (std::size_t k = 0; k < dim; ++k) {
      auto f = fields[k + 1];
      auto [ptr, ec] = std::from_chars(f.data(), f.data() + f.size(), values[k]);
      if (ec != std::errc() || ptr != f.data() + f.size()) {
        throw LoadError("line " + std::to_string(line_no) + ": cannot parse value '" +
                        std::string(f) + "'");
      }
    }
    try {
      table.add(std::move(token), std::span<const float>(values));
    } catch (const LoadError& e) {
      throw LoadError("line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  if (content_lines == 0) throw LoadError("empty embedding stream");
  if (table.size() == 0 && !options.vocabulary) throw LoadError("embedding stream has no vectors");
  return table;
}

EmbeddingTable load_embeddings_file(const std::string& path, const LoadOptions& options) {
  std::ifstream in(path);
  if (!in) throw LoadError("cannot open embedding file '" + path + "'");
  return load_embeddings(in, options);
}

double cosine(std::span<const double> u, std::span<const double> v) {
  if (u.size() != v.size()) throw NumericError("cosine of vectors with different lengths");
  double dot = 0.0, nu = 0.0, nv = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    dot += u[i] * v[i];
    nu += u[i] * u[i];
    nv += v[i] * v[i];
  }
  if (nu == 0.0 || nv == 0.0) throw NumericError("cosine similarity undefined for a zero vector");
  return std::clamp(dot / (std::sqrt(nu) * std::sqrt(nv)), -1.0, 1.0);
}

double cosine_or_zero(std::span<const double> u, std::span<const double> v) {
  if (u.size() != v.size()) throw NumericError("cosine of vectors with different lengths");
  double dot = 0.0, nu = 0.0, nv = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    dot += u[i] * v[i];
    nu += u[i] * u[i];
    nv += v[i] * v[i];
  }
  if (nu == 0.0 || nv == 0.0) return 0.0;
  return std::clamp(dot / (std::sqrt(nu) * std::sqrt(nv)), -1.0, 1.0);
}

Vector diff_vector(const EmbeddingTable& table, std::string_view w1, std::string_view w2,
                   const LookupOptions& options) {
  Vector a = table.lookup(w1, options);
  Vector b = table.lookup(w2, options);
  for (std::size_t k = 0; k < a.size(); ++k) a[k] -= b[k];
  return a;
}

}  // namespace pam
