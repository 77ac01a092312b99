#pragma once

#include <cstddef>
#include <istream>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "pam/semnet.hpp"

namespace pam {

enum class Pos { Noun, Verb, Adjective, Other };

using PosLexicon = std::map<std::string, Pos>;
using ReplacementMap = std::map<std::string, std::string>;

struct KeywordOptions {
  std::size_t top_k = 20;
  std::size_t window = 2;   // co-occurrence window of the centrality pass
  double damping = 0.85;
  double tolerance = 1e-6;
  int max_iterations = 1000;
  // Share of centrality-ranked words kept before intersecting with the frequent
  // set. Classic TextRank keeps a third; on short texts that drops too much.
  double centrality_keep = 1.0;
  ReplacementMap replacements;  // applied to tokens before anything else
};

struct KeywordResult {
  std::vector<std::string> keywords;  // centrality order
  EdgeSpec edges;
  std::vector<std::string> notes;     // why tokens were dropped and which rule made each edge
};

/// Lowercased sentences of tokens; sentences end at '.', '!' or '?'.
std::vector<std::vector<std::string>> tokenize(std::string_view text);

/// Frequency cut, centrality ranking over nouns/verbs/adjectives, adjacent
/// keyword pairs as bidirectional edges (noun-noun only within one sentence),
/// and noun-verb-noun runs as forward-only triads. Throws InputError on empty
/// text or when no token is in the lexicon.
KeywordResult extract_keywords(std::string_view text, const PosLexicon& lexicon,
                               const KeywordOptions& options = {});

/// Manual edge line: from<TAB>flag<TAB>to. Flag "->" adds a directed edge,
/// "<->" a bidirectional one; anything else is a verb and adds the
/// from -> verb -> to triad. Endpoints missing from the keywords are appended.
void apply_manual_edges(KeywordResult& result, std::istream& in);

PosLexicon read_lexicon(std::istream& in);
ReplacementMap read_replacements(std::istream& in);

}  // namespace pam
