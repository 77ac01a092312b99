#pragma once

#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "pam/engine.hpp"
#include "pam/relation_vectors.hpp"
#include "pam/semnet.hpp"

namespace pam {

struct EdgeAttention {
  std::string from;
  std::string to;
  double weight = 1.0;
};

/// One analog as written in a problem file.
struct AnalogSpec {
  std::string id;
  std::vector<std::string> concepts;
  std::optional<EdgeSpec> edges;  // nullopt: complete bidirectional
  std::vector<std::tuple<std::string, std::string, std::string>> nvn;  // applied on top of `edges`
  std::map<std::string, std::string> aliases;  // "attribute_overrides"
  std::map<std::string, double> node_attention;
  std::vector<EdgeAttention> edge_attention;

  /// The edge set actually used: base edges (complete if absent) with triads applied.
  EdgeSpec effective_edges() const;
};

struct MappingParams {
  double alpha = 1.0;
  double beta0 = 1.0;
  int iterations = 500;
  double power = 5.0;
  Variant variant = Variant::BartFull;
  Compatibility compatibility = Compatibility::Symmetric;
  bool slack = true;  // see PamOptions::slack

  PamOptions pam() const;
};

struct Problem {
  AnalogSpec source;
  AnalogSpec target;
  MappingParams params;
  std::vector<std::pair<std::string, std::string>> expected;  // optional gold correspondences
};

/// Problem file: {"source": analog, "target": analog, "params": {...}, "expected": [[s, t], ...]}.
/// Analog: {"id"?, "concepts": [...], "edges"?: [{"from", "to", "directed"?}], "nvn"?: [[s, v, o]],
/// "attribute_overrides"?: {concept: token}, "attention"?: {"nodes": {concept: w},
/// "edges": [{"from", "to", "weight"}]}}. Params missing from the file keep `defaults`.
Problem read_problem(std::istream& in, const MappingParams& defaults = {});

/// Retrieval corpus: {"params"?, "sources": [analog with id], "targets": [analog with id],
/// "expected"?: {target id: source id}}, or {"params"?, "problems": [{"id", "source", "target"}]}
/// where problem i contributes source and target both named by its id.
struct Corpus {
  std::vector<AnalogSpec> sources;
  std::vector<AnalogSpec> targets;
  std::map<std::string, std::string> expected;
  MappingParams params;
};
Corpus read_corpus(std::istream& in, const MappingParams& defaults = {});

/// Builds the network with effective edges, aliases and attention applied.
SemanticRelationNetwork build_analog(const AnalogSpec& spec, const EmbeddingTable& table,
                                     const RelationProvider& provider, const LookupOptions& lookup = {});

/// Machine-readable mapping report (JSON, full-precision doubles).
void write_mapping_json(std::ostream& out, const MappingResult& result, const SemanticRelationNetwork& source,
                        const SemanticRelationNetwork& target);

/// Soft matrix as CSV: header row of target concepts, one row per source concept.
void write_soft_csv(std::ostream& out, const Matrix& soft, const SemanticRelationNetwork& source,
                    const SemanticRelationNetwork& target);

/// "symmetric" | "outgoing".
Compatibility parse_compatibility(const std::string& tag);

/// Shortest decimal that round-trips the double.
std::string format_double(double v);

}  // namespace pam
