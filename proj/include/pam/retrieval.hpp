#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "pam/engine.hpp"

namespace pam {

struct NamedNetwork {
  std::string id;
  SemanticRelationNetwork network;
};

struct RetrievalEntry {
  std::string source_id;
  double g_score = 0.0;
  std::vector<std::size_t> hard;  // source node -> target node
  std::string error;              // nonempty when this candidate failed
};

struct RetrievalReport {
  std::string target_id;
  std::vector<RetrievalEntry> ranked;  // successes by descending G (ties by id), then failures by id
  PamOptions options;
};

/// Maps every candidate (as source) onto the target and ranks by G score.
/// Candidates are independent, so `jobs` workers may evaluate them concurrently.
RetrievalReport rank_sources(const NamedNetwork& target, const std::vector<NamedNetwork>& candidates,
                             const PamOptions& options = {}, std::size_t jobs = 1);

}  // namespace pam
