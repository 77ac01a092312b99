#include "pam/retrieval.hpp"

#include <algorithm>

#include "pam/error.hpp"
#include "pam/parallel.hpp"

namespace pam {

RetrievalReport rank_sources(const NamedNetwork& target, const std::vector<NamedNetwork>& candidates,
                             const PamOptions& options, std::size_t jobs) {
  if (candidates.empty()) throw InputError("retrieval needs at least one candidate source");
  RetrievalReport report;
  report.target_id = target.id;
  report.options = options;
  report.ranked.resize(candidates.size());
  parallel_for(candidates.size(), jobs, [&](std::size_t c) {
    RetrievalEntry& entry = report.ranked[c];
    entry.source_id = candidates[c].id;
    try {
      MappingResult r = run_pam(candidates[c].network, target.network, options);
      entry.g_score = r.g_score;
      entry.hard = std::move(r.hard);
    } catch (const Error& e) {
      entry.error = e.what();
    }
  });
  std::sort(report.ranked.begin(), report.ranked.end(), [](const RetrievalEntry& a, const RetrievalEntry& b) {
    const bool fa = !a.error.empty(), fb = !b.error.empty();
    if (fa != fb) return fb;
    if (!fa && a.g_score != b.g_score) return a.g_score > b.g_score;
    return a.source_id < b.source_id;
  });
  return report;
}

}  // namespace pam
