#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <fstream>
#include <sstream>

#include "pam/error.hpp"
#include "pam/textprep.hpp"

using namespace pam;

namespace {

using Pairs = std::set<std::pair<std::string, std::string>>;

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  REQUIRE(in);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

PosLexicon shipped_lexicon() {
  std::ifstream in("data/text/lexicon.tsv");
  REQUIRE(in);
  return read_lexicon(in);
}

}  // namespace

TEST_CASE("tokenize") {
  const auto s = tokenize("The Dog's ball! Where is it? Here.");
  REQUIRE(s.size() == 3);
  CHECK(s[0] == std::vector<std::string>{"the", "dog", "ball"});
  CHECK(s[1] == std::vector<std::string>{"where", "is", "it"});
  CHECK(s[2] == std::vector<std::string>{"here"});
}

TEST_CASE("hand-traced example") {
  const PosLexicon lex{{"dog", Pos::Noun}, {"cat", Pos::Noun}, {"chased", Pos::Verb}};
  const auto r = extract_keywords("the dog chased the cat. the dog barked.", lex);
  // barked is frequent but has no part of speech; chased links both nouns so it is most central
  CHECK(r.keywords == std::vector<std::string>{"chased", "dog", "cat"});
  // the cross-sentence cat:dog pair is dropped; the triad keeps forward edges only
  CHECK(r.edges.edges() == Pairs{{"dog", "chased"}, {"chased", "cat"}, {"dog", "cat"}});
}

TEST_CASE("errors") {
  const PosLexicon lex{{"dog", Pos::Noun}};
  CHECK_THROWS_AS(extract_keywords("", lex), InputError);
  CHECK_THROWS_AS(extract_keywords("  . ", lex), InputError);
  CHECK_THROWS_AS(extract_keywords("the cat sat.", lex), InputError);
}

TEST_CASE("replacements apply before counting") {
  const PosLexicon lex{{"commander", Pos::Noun}, {"army", Pos::Noun}, {"leads", Pos::Verb}};
  KeywordOptions opts;
  opts.replacements = {{"general", "commander"}};
  const auto r = extract_keywords("the general leads the army.", lex, opts);
  CHECK(std::find(r.keywords.begin(), r.keywords.end(), "commander") != r.keywords.end());
  CHECK(std::find(r.keywords.begin(), r.keywords.end(), "general") == r.keywords.end());
}

TEST_CASE("top_k cuts by frequency") {
  const PosLexicon lex{{"fox", Pos::Noun}, {"hen", Pos::Noun}, {"owl", Pos::Noun}};
  KeywordOptions opts;
  opts.top_k = 2;
  const auto r = extract_keywords("fox hen owl. fox hen. fox.", lex, opts);
  CHECK(r.keywords.size() == 2);
  CHECK(std::find(r.keywords.begin(), r.keywords.end(), "owl") == r.keywords.end());
}

TEST_CASE("manual edges") {
  const PosLexicon lex{{"dog", Pos::Noun}, {"cat", Pos::Noun}};
  auto r = extract_keywords("dog cat.", lex);
  std::istringstream in("dog\tchases\tcat\ncat\t->\tmouse\n# comment\nmouse\t<->\tcheese\n");
  apply_manual_edges(r, in);
  for (const char* k : {"chases", "mouse", "cheese"})
    CHECK(std::find(r.keywords.begin(), r.keywords.end(), k) != r.keywords.end());
  CHECK(r.edges.contains("dog", "chases"));
  CHECK(r.edges.contains("chases", "cat"));
  CHECK(r.edges.contains("dog", "cat"));
  CHECK_FALSE(r.edges.contains("cat", "dog"));
  CHECK(r.edges.contains("cat", "mouse"));
  CHECK_FALSE(r.edges.contains("mouse", "cat"));
  CHECK(r.edges.contains("mouse", "cheese"));
  CHECK(r.edges.contains("cheese", "mouse"));
}

TEST_CASE("lexicon and replacement readers") {
  std::istringstream lex("# pos\ndog\tnoun\nrun\tv\nred\tadj\nthe\tother\n");
  const auto l = read_lexicon(lex);
  CHECK(l.at("dog") == Pos::Noun);
  CHECK(l.at("run") == Pos::Verb);
  CHECK(l.at("red") == Pos::Adjective);
  CHECK(l.at("the") == Pos::Other);
  std::istringstream bad("dog\tthing\n");
  CHECK_THROWS_AS(read_lexicon(bad), InputError);
  std::istringstream rep("general\tcommander\n");
  CHECK(read_replacements(rep).at("general") == "commander");
}

TEST_CASE("The General story recovers the reported keywords") {
  std::ifstream rep("data/text/general_replacements.tsv");
  REQUIRE(rep);
  KeywordOptions opts;
  opts.replacements = read_replacements(rep);
  const auto r = extract_keywords(slurp("data/text/general.txt"), shipped_lexicon(), opts);
  const std::vector<std::string> reported{"country", "dictator", "fortress", "villages", "commander",
                                          "large",   "army",     "capture",  "roads",    "landmines",
                                          "attack",  "small",    "many",     "troops"};
  int found = 0;
  for (const auto& k : reported) found += std::find(r.keywords.begin(), r.keywords.end(), k) != r.keywords.end();
  MESSAGE("General keywords recovered: " << found << "/14");
  CHECK(found >= 10);
}

TEST_CASE("radiation problem recovers most reported keywords") {
  const auto r = extract_keywords(slurp("data/text/radiation.txt"), shipped_lexicon());
  const std::vector<std::string> reported{"doctor", "tumor",     "patient", "destroyed", "ray",
                                          "high",   "intensity", "destroy", "healthy",   "tissue"};
  int found = 0;
  for (const auto& k : reported) found += std::find(r.keywords.begin(), r.keywords.end(), k) != r.keywords.end();
  MESSAGE("radiation keywords recovered: " << found << "/10");
  CHECK(found >= 7);
}

TEST_CASE("extraction is deterministic") {
  const auto text = slurp("data/text/radiation.txt");
  const auto a = extract_keywords(text, shipped_lexicon());
  const auto b = extract_keywords(text, shipped_lexicon());
  CHECK(a.keywords == b.keywords);
  CHECK(a.edges.edges() == b.edges.edges());
}
