#include "pam/textprep.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <optional>
#include <set>
#include <sstream>
#include <unordered_map>

#include "pam/error.hpp"

namespace pam {
namespace {

const std::set<std::string, std::less<>>& stopwords() {
  static const std::set<std::string, std::less<>> words = {
      "a", "about", "above", "after", "again", "against", "all", "also", "am", "an", "and", "any",
      "are", "as", "at", "be", "because", "been", "before", "being", "below", "between", "both",
      "but", "by", "can", "could", "did", "do", "does", "doing", "down", "during", "each", "either",
      "few", "for", "from", "further", "had", "has", "have", "having", "he", "her", "here", "hers",
      "him", "his", "how", "however", "i", "if", "in", "into", "is", "it", "its", "itself", "just",
      "may", "me", "might", "more", "most", "must", "my", "no", "nor", "not", "now", "of", "off",
      "on", "once", "only", "or", "other", "our", "out", "over", "own", "same", "she", "should",
      "so", "some", "such", "than", "that", "the", "their", "them", "then", "there", "these",
      "they", "this", "those", "through", "thus", "to", "too", "under", "unless", "until", "up",
      "upon", "very", "was", "we", "were", "what", "when", "where", "which", "while", "who",
      "whom", "why", "will", "with", "would", "you", "your"};
  return words;
}

bool word_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '-' || c == '\'';
}

std::string trim_token(std::string t) {
  if (t.size() > 2 && t.compare(t.size() - 2, 2, "'s") == 0) t.resize(t.size() - 2);
  while (!t.empty() && (t.back() == '-' || t.back() == '\'')) t.pop_back();
  std::size_t start = 0;
  while (start < t.size() && (t[start] == '-' || t[start] == '\'')) ++start;
  return t.substr(start);
}

std::string trim_field(std::string s) {
  while (!s.empty() && (s.back() == '\r' || s.back() == ' ' || s.back() == '\t')) s.pop_back();
  std::size_t start = 0;
  while (start < s.size() && (s[start] == ' ' || s[start] == '\t')) ++start;
  return s.substr(start);
}

std::vector<std::string> split_tabs(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string field;
  while (std::getline(ss, field, '\t')) out.push_back(trim_field(field));
  return out;
}

Pos parse_pos(const std::string& s, std::size_t line_no) {
  if (s == "noun" || s == "n") return Pos::Noun;
  if (s == "verb" || s == "v") return Pos::Verb;
  if (s == "adjective" || s == "adj" || s == "a") return Pos::Adjective;
  if (s == "other") return Pos::Other;
  throw InputError("lexicon line " + std::to_string(line_no) + ": unknown part of speech '" + s + "'");
}

}  // namespace

std::vector<std::vector<std::string>> tokenize(std::string_view text) {
  std::vector<std::vector<std::string>> sentences(1);
  std::string current;
  auto flush = [&] {
    if (current.empty()) return;
    std::string t = trim_token(std::move(current));
    current.clear();
    if (!t.empty()) sentences.back().push_back(std::move(t));
  };
  for (char c : text) {
    if (word_char(c)) {
      current.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
      continue;
    }
    flush();
    if ((c == '.' || c == '!' || c == '?') && !sentences.back().empty()) sentences.emplace_back();
  }
  flush();
  if (sentences.back().empty()) sentences.pop_back();
  return sentences;
}

KeywordResult extract_keywords(std::string_view text, const PosLexicon& lexicon, const KeywordOptions& options) {
  auto sentences = tokenize(text);
  if (sentences.empty()) throw InputError("keyword extraction needs nonempty text");
  if (!(options.centrality_keep > 0.0 && options.centrality_keep <= 1.0)) {
    throw InputError("centrality_keep must be in (0, 1]");
  }
  for (auto& s : sentences) {
    for (auto& t : s) {
      auto it = options.replacements.find(t);
      if (it != options.replacements.end()) t = it->second;
    }
  }
  auto pos_of = [&](const std::string& t) {
    auto it = lexicon.find(t);
    return it == lexicon.end() ? std::optional<Pos>() : std::optional<Pos>(it->second);
  };
  auto eligible = [&](const std::string& t) {
    auto p = pos_of(t);
    return p && *p != Pos::Other;
  };

  std::vector<std::string> unknown;
  bool any_known = false;
  for (const auto& s : sentences) {
    for (const auto& t : s) {
      if (pos_of(t)) any_known = true;
      else if (std::find(unknown.begin(), unknown.end(), t) == unknown.end()) unknown.push_back(t);
    }
  }
  if (!any_known) {
    std::string list;
    for (const auto& t : unknown) list += (list.empty() ? "" : ", ") + t;
    throw InputError("no token is in the part-of-speech lexicon: " + list);
  }

  KeywordResult result;

  // (1) frequency over content tokens; ties keep first-occurrence order.
  std::vector<std::string> order;
  std::unordered_map<std::string, std::size_t> count;
  for (const auto& s : sentences) {
    for (const auto& t : s) {
      if (stopwords().count(t)) continue;
      if (count[t]++ == 0) order.push_back(t);
    }
  }
  std::stable_sort(order.begin(), order.end(),
                   [&](const std::string& a, const std::string& b) { return count[a] > count[b]; });
  if (order.size() > options.top_k) order.resize(options.top_k);
  const std::set<std::string> frequent(order.begin(), order.end());

  // (2) centrality over nouns/verbs/adjectives linked within the window.
  std::vector<std::string> nodes;
  std::unordered_map<std::string, std::size_t> node_id;
  std::vector<std::set<std::size_t>> adjacency;
  for (const auto& s : sentences) {
    std::vector<std::size_t> ids;
    for (const auto& t : s) {
      if (!eligible(t)) continue;
      auto [it, inserted] = node_id.emplace(t, nodes.size());
      if (inserted) {
        nodes.push_back(t);
        adjacency.emplace_back();
      }
      ids.push_back(it->second);
    }
    for (std::size_t a = 0; a < ids.size(); ++a) {
      for (std::size_t b = a + 1; b < ids.size() && b < a + options.window; ++b) {
        if (ids[a] == ids[b]) continue;
        adjacency[ids[a]].insert(ids[b]);
        adjacency[ids[b]].insert(ids[a]);
      }
    }
  }
  std::vector<double> score(nodes.size(), 1.0);
  for (int it = 0; it < options.max_iterations; ++it) {
    std::vector<double> next(nodes.size(), 1.0 - options.damping);
    for (std::size_t v = 0; v < nodes.size(); ++v) {
      for (std::size_t u : adjacency[v]) {
        next[v] += options.damping * score[u] / static_cast<double>(adjacency[u].size());
      }
    }
    double change = 0.0;
    for (std::size_t v = 0; v < nodes.size(); ++v) change = std::max(change, std::fabs(next[v] - score[v]));
    score = std::move(next);
    if (change < options.tolerance) break;
  }
  std::vector<std::size_t> ranked(nodes.size());
  for (std::size_t v = 0; v < nodes.size(); ++v) ranked[v] = v;
  std::stable_sort(ranked.begin(), ranked.end(), [&](std::size_t a, std::size_t b) { return score[a] > score[b]; });

  const auto keep = static_cast<std::size_t>(
      std::ceil(options.centrality_keep * static_cast<double>(ranked.size())));
  for (std::size_t r = 0; r < ranked.size(); ++r) {
    const std::string& t = nodes[ranked[r]];
    if (!frequent.count(t)) continue;
    if (r < keep) result.keywords.push_back(t);
    else result.notes.push_back("frequent but low centrality: " + t);
  }
  for (const auto& t : order) {
    if (!eligible(t)) result.notes.push_back("frequent but not a noun/verb/adjective: " + t);
  }
  const std::set<std::string> keywords(result.keywords.begin(), result.keywords.end());

  // (3) adjacent keywords in the keyword-only stream; (4) noun pairs need a shared sentence.
  struct Occurrence {
    std::string token;
    std::size_t sentence;
  };
  std::vector<Occurrence> stream;
  for (std::size_t si = 0; si < sentences.size(); ++si) {
    for (const auto& t : sentences[si]) {
      if (keywords.count(t)) stream.push_back({t, si});
    }
  }
  for (std::size_t k = 0; k + 1 < stream.size(); ++k) {
    const auto& a = stream[k];
    const auto& b = stream[k + 1];
    if (a.token == b.token || result.edges.contains(a.token, b.token)) continue;
    if (pos_of(a.token) == Pos::Noun && pos_of(b.token) == Pos::Noun && a.sentence != b.sentence) {
      result.notes.push_back("dropped noun pair across sentences: " + a.token + " : " + b.token);
      continue;
    }
    result.edges.add(a.token, b.token, false);
    result.notes.push_back("2-gram edge: " + a.token + " <-> " + b.token);
  }
  for (std::size_t k = 0; k + 2 < stream.size(); ++k) {
    const auto& s = stream[k];
    const auto& v = stream[k + 1];
    const auto& o = stream[k + 2];
    if (s.sentence != v.sentence || v.sentence != o.sentence) continue;
    if (pos_of(s.token) != Pos::Noun || pos_of(v.token) != Pos::Verb || pos_of(o.token) != Pos::Noun) continue;
    if (s.token == v.token || v.token == o.token || s.token == o.token) continue;
    result.edges.add_nvn(s.token, v.token, o.token);
    result.notes.push_back("noun-verb-noun triad: " + s.token + " -> " + v.token + " -> " + o.token);
  }
  return result;
}

void apply_manual_edges(KeywordResult& result, std::istream& in) {
  auto ensure = [&](const std::string& t) {
    if (std::find(result.keywords.begin(), result.keywords.end(), t) == result.keywords.end()) {
      result.keywords.push_back(t);
    }
  };
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string trimmed = trim_field(line);
    if (trimmed.empty() || trimmed[0] == '#') continue;
    auto f = split_tabs(trimmed);
    if (f.size() != 3 || f[0].empty() || f[1].empty() || f[2].empty()) {
      throw InputError("manual edge line " + std::to_string(line_no) + ": expected from<TAB>flag<TAB>to");
    }
    ensure(f[0]);
    ensure(f[2]);
    if (f[1] == "->") {
      result.edges.add(f[0], f[2], true);
      result.notes.push_back("manual edge: " + f[0] + " -> " + f[2]);
    } else if (f[1] == "<->") {
      result.edges.add(f[0], f[2], false);
      result.notes.push_back("manual edge: " + f[0] + " <-> " + f[2]);
    } else {
      ensure(f[1]);
      result.edges.add_nvn(f[0], f[1], f[2]);
      result.notes.push_back("manual triad: " + f[0] + " -> " + f[1] + " -> " + f[2]);
    }
  }
}

PosLexicon read_lexicon(std::istream& in) {
  PosLexicon lexicon;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string trimmed = trim_field(line);
    if (trimmed.empty() || trimmed[0] == '#') continue;
    auto f = split_tabs(trimmed);
    if (f.size() != 2 || f[0].empty()) {
      throw InputError("lexicon line " + std::to_string(line_no) + ": expected token<TAB>pos");
    }
    std::string token = f[0];
    std::transform(token.begin(), token.end(), token.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    lexicon[token] = parse_pos(f[1], line_no);
  }
  return lexicon;
}

ReplacementMap read_replacements(std::istream& in) {
  ReplacementMap map;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string trimmed = trim_field(line);
    if (trimmed.empty() || trimmed[0] == '#') continue;
    auto f = split_tabs(trimmed);
    if (f.size() != 2 || f[0].empty() || f[1].empty()) {
      throw InputError("replacement line " + std::to_string(line_no) + ": expected token<TAB>replacement");
    }
    map[f[0]] = f[1];
  }
  return map;
}

}  // namespace pam
