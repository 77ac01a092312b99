#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "pam/embeddings.hpp"
#include "pam/relation_vectors.hpp"

namespace pam {

struct Node {
  std::string token;
  Vector attribute;
  double attention = 1.0;
};

struct Edge {
  std::size_t from = 0;
  std::size_t to = 0;
  Vector attribute;
  double attention = 1.0;
};

/// Attributed directed graph. At most one edge per ordered pair, no self-edges.
class SemanticRelationNetwork {
 public:
  std::size_t add_node(std::string token, Vector attribute);
  std::size_t add_edge(std::size_t from, std::size_t to, Vector attribute);

  const std::vector<Node>& nodes() const { return nodes_; }
  const std::vector<Edge>& edges() const { return edges_; }
  std::size_t size() const { return nodes_.size(); }

  std::optional<std::size_t> node_index(const std::string& token) const;
  std::optional<std::size_t> edge_index(std::size_t from, std::size_t to) const;

  /// Weights must be positive and finite. Unknown elements raise InputError.
  void set_node_attention(std::size_t node, double weight);
  void set_edge_attention(std::size_t from, std::size_t to, double weight);
  void reset_attention();

 private:
  std::vector<Node> nodes_;
  std::vector<Edge> edges_;
  std::map<std::pair<std::size_t, std::size_t>, std::size_t> edge_lookup_;
};

/// Which ordered token pairs get an edge. Pairs never mentioned get none.
class EdgeSpec {
 public:
  /// Adds from->to, and to->from too unless `directed`.
  void add(const std::string& from, const std::string& to, bool directed);
  /// Subject-verb-object triad: subject->verb, verb->object, subject->object,
  /// with any reverse edges on those pairs removed (forward edges only).
  void add_nvn(const std::string& subject, const std::string& verb, const std::string& object);
  void remove(const std::string& from, const std::string& to);

  bool contains(const std::string& from, const std::string& to) const {
    return edges_.count({from, to}) > 0;
  }
  const std::set<std::pair<std::string, std::string>>& edges() const { return edges_; }

  /// Complete bidirectional spec over the concepts.
  static EdgeSpec complete(const std::vector<std::string>& concepts);

 private:
  std::set<std::pair<std::string, std::string>> edges_;
};

struct BuildOptions {
  // Concept -> token whose embedding stands in for it, for node and edge attributes alike
  // (e.g. invented country names all take the vector of "country").
  std::map<std::string, std::string> aliases;
  LookupOptions lookup;
};

/// Nodes in token order with embedding attributes; edges in (from, to)
/// index order with provider relation vectors. A null spec means complete
/// bidirectional. Throws on duplicate concepts, OOV, or spec entries naming
/// unknown concepts.
SemanticRelationNetwork build_network(const std::vector<std::string>& concepts, const EdgeSpec* spec,
                                      const EmbeddingTable& table, const RelationProvider& provider,
                                      const BuildOptions& options = {});

}  // namespace pam
