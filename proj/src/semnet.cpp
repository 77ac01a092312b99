#include "pam/semnet.hpp"

#include <cmath>

#include "pam/error.hpp"

namespace pam {
namespace {

void check_weight(double w) {
  if (!(w > 0.0) || !std::isfinite(w)) throw InputError("attention weight must be positive and finite");
}

}  // namespace

std::size_t SemanticRelationNetwork::add_node(std::string token, Vector attribute) {
  if (node_index(token)) throw InputError("duplicate token '" + token + "'");
  if (!nodes_.empty() && attribute.size() != nodes_.front().attribute.size()) {
    throw InputError("node attribute for '" + token + "' has a different dimension");
  }
  nodes_.push_back({std::move(token), std::move(attribute), 1.0});
  return nodes_.size() - 1;
}

std::size_t SemanticRelationNetwork::add_edge(std::size_t from, std::size_t to, Vector attribute) {
  if (from >= nodes_.size() || to >= nodes_.size()) throw InputError("edge endpoint out of range");
  if (from == to) throw InputError("self-edges are not allowed");
  if (edge_lookup_.count({from, to})) throw InputError("duplicate edge");
  if (!edges_.empty() && attribute.size() != edges_.front().attribute.size()) {
    throw InputError("edge attribute has a different dimension");
  }
  edges_.push_back({from, to, std::move(attribute), 1.0});
  edge_lookup_.emplace(std::make_pair(from, to), edges_.size() - 1);
  return edges_.size() - 1;
}

std::optional<std::size_t> SemanticRelationNetwork::node_index(const std::string& token) const {
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    if (nodes_[i].token == token) return i;
  }
  return std::nullopt;
}

std::optional<std::size_t> SemanticRelationNetwork::edge_index(std::size_t from, std::size_t to) const {
  auto it = edge_lookup_.find({from, to});
  if (it == edge_lookup_.end()) return std::nullopt;
  return it->second;
}

void SemanticRelationNetwork::set_node_attention(std::size_t node, double weight) {
  check_weight(weight);
  if (node >= nodes_.size()) throw InputError("attention on unknown node " + std::to_string(node));
  nodes_[node].attention = weight;
}

void SemanticRelationNetwork::set_edge_attention(std::size_t from, std::size_t to, double weight) {
  check_weight(weight);
  auto e = edge_index(from, to);
  if (!e) {
    throw InputError("attention on nonexistent edge " + std::to_string(from) + "->" + std::to_string(to));
  }
  edges_[*e].attention = weight;
}

void SemanticRelationNetwork::reset_attention() {
  for (auto& n : nodes_) n.attention = 1.0;
  for (auto& e : edges_) e.attention = 1.0;
}

void EdgeSpec::add(const std::string& from, const std::string& to, bool directed) {
  if (from == to) throw InputError("self-edge on '" + from + "'");
  edges_.insert({from, to});
  if (!directed) edges_.insert({to, from});
}

void EdgeSpec::add_nvn(const std::string& subject, const std::string& verb, const std::string& object) {
  const std::pair<std::string, std::string> triad[] = {{subject, verb}, {verb, object}, {subject, object}};
  for (const auto& [a, b] : triad) {
    if (a == b) throw InputError("noun-verb-noun triad repeats '" + a + "'");
    edges_.erase({b, a});
    edges_.insert({a, b});
  }
}

void EdgeSpec::remove(const std::string& from, const std::string& to) { edges_.erase({from, to}); }

EdgeSpec EdgeSpec::complete(const std::vector<std::string>& concepts) {
  EdgeSpec spec;
  for (const auto& a : concepts) {
    for (const auto& b : concepts) {
      if (a != b) spec.edges_.insert({a, b});
    }
  }
  return spec;
}

SemanticRelationNetwork build_network(const std::vector<std::string>& concepts, const EdgeSpec* spec,
                                      const EmbeddingTable& table, const RelationProvider& provider,
                                      const BuildOptions& options) {
  auto resolve = [&](const std::string& c) -> const std::string& {
    auto it = options.aliases.find(c);
    return it == options.aliases.end() ? c : it->second;
  };

  SemanticRelationNetwork net;
  for (const auto& c : concepts) net.add_node(c, table.lookup(resolve(c), options.lookup));

  if (spec) {
    for (const auto& [a, b] : spec->edges()) {
      if (!net.node_index(a)) throw InputError("edge names unknown token '" + a + "'");
      if (!net.node_index(b)) throw InputError("edge names unknown token '" + b + "'");
    }
  }
  for (std::size_t i = 0; i < concepts.size(); ++i) {
    for (std::size_t j = 0; j < concepts.size(); ++j) {
      if (i == j) continue;
      if (spec && !spec->contains(concepts[i], concepts[j])) continue;
      net.add_edge(i, j, provider.relation_vector(resolve(concepts[i]), resolve(concepts[j])));
    }
  }
  return net;
}

}  // namespace pam
