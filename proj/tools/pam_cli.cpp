#include <CLI11.hpp>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <json.hpp>
#include <memory>
#include <set>
#include <sstream>
#include <unordered_set>

#include "pam/bench.hpp"
#include "pam/error.hpp"
#include "pam/problem.hpp"
#include "pam/relation_model.hpp"
#include "pam/relation_vectors.hpp"
#include "pam/retrieval.hpp"
#include "pam/textprep.hpp"

namespace {

using namespace pam;
using nlohmann::json;

struct RunConfig {
  std::string embeddings;
  std::string models;
  std::size_t dimension = 300;
  double alpha = 1.0;
  double beta0 = 1.0;
  int iterations = 500;
  double power = 5.0;
  std::string variant = "bart-full";
  std::string compatibility = "symmetric";
  bool slack = true;
  std::uint64_t seed = 1;
  std::size_t jobs = 1;
  std::string out;
};

// Which RunConfig fields were given on the command line (they beat file params).
struct Explicit {
  CLI::Option* alpha = nullptr;
  CLI::Option* beta0 = nullptr;
  CLI::Option* iterations = nullptr;
  CLI::Option* power = nullptr;
  CLI::Option* variant = nullptr;
  CLI::Option* compatibility = nullptr;
  CLI::Option* slack = nullptr;
};

std::ifstream open_in(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open '" + path + "'");
  return in;
}

std::string read_file(const std::string& path) {
  std::ifstream in = open_in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_out(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot write '" + path + "'");
  out << text;
}

MappingParams file_defaults(const RunConfig& c) {
  MappingParams p;
  p.alpha = c.alpha;
  p.beta0 = c.beta0;
  p.iterations = c.iterations;
  p.power = c.power;
  p.variant = parse_variant(c.variant);
  p.compatibility = parse_compatibility(c.compatibility);
  p.slack = c.slack;
  return p;
}

void apply_explicit(MappingParams& p, const RunConfig& c, const Explicit& e) {
  if (*e.alpha) p.alpha = c.alpha;
  if (*e.beta0) p.beta0 = c.beta0;
  if (*e.iterations) p.iterations = c.iterations;
  if (*e.power) p.power = c.power;
  if (*e.variant) p.variant = parse_variant(c.variant);
  if (*e.compatibility) p.compatibility = parse_compatibility(c.compatibility);
  if (*e.slack) p.slack = c.slack;
  if (!(p.alpha >= 0)) throw InputError("--alpha must be nonnegative");
  if (!(p.beta0 > 0)) throw InputError("--beta0 must be positive");
  if (p.iterations < 1) throw InputError("--iterations must be at least 1");
  if (!(p.power > 0)) throw InputError("--power must be positive");
}

void add_vocabulary(std::unordered_set<std::string>& vocab, const AnalogSpec& a) {
  for (const auto& c : a.concepts) vocab.insert(c);
  for (const auto& [k, v] : a.aliases) vocab.insert(v);
}

EmbeddingTable load_table(const RunConfig& c, std::optional<std::unordered_set<std::string>> vocab) {
  if (c.embeddings.empty()) throw InputError("--embeddings is required");
  LoadOptions opts;
  opts.expected_dimension = c.dimension;
  opts.vocabulary = std::move(vocab);
  return load_embeddings_file(c.embeddings, opts);
}

/// Owns whatever the provider needs (models) next to the provider itself.
struct ProviderBundle {
  RelationModelSet models;
  std::unique_ptr<RelationProvider> base;
  std::unique_ptr<CachedProvider> cached;
  const RelationProvider& get() const { return *cached; }
};

std::unique_ptr<ProviderBundle> make_provider(const RunConfig& c, const EmbeddingTable& table, Variant variant,
                                              double power) {
  auto b = std::make_unique<ProviderBundle>();
  if (variant == Variant::W2vDiff) {
    b->base = std::make_unique<DiffProvider>(table);
  } else {
    if (c.models.empty()) throw InputError("--models is required for " + std::string(variant_tag(variant)));
    std::ifstream in = open_in(c.models);
    b->models = read_model_set(in);
    b->base = std::make_unique<BartProvider>(table, b->models, variant, power);
  }
  b->cached = std::make_unique<CachedProvider>(*b->base);
  return b;
}

std::string node_name(const SemanticRelationNetwork& n, std::size_t i) {
  return i == kUnmapped ? std::string("(none)") : n.nodes()[i].token;
}

int cmd_map(const RunConfig& c, const Explicit& e, const std::string& problem_path, const std::string& dump_soft) {
  std::ifstream in = open_in(problem_path);
  Problem p = read_problem(in, file_defaults(c));
  apply_explicit(p.params, c, e);
  std::unordered_set<std::string> vocab;
  add_vocabulary(vocab, p.source);
  add_vocabulary(vocab, p.target);
  const EmbeddingTable table = load_table(c, vocab);
  auto provider = make_provider(c, table, p.params.variant, p.params.power);
  const auto s = build_analog(p.source, table, provider->get());
  const auto t = build_analog(p.target, table, provider->get());
  const MappingResult r = run_pam(s, t, p.params.pam());

  for (std::size_t i = 0; i < r.hard.size(); ++i) {
    std::cout << s.nodes()[i].token << " -> " << node_name(t, r.hard[i]);
    if (r.hard[i] != kUnmapped) std::cout << "  (p=" << format_double(r.soft(i, r.hard[i])) << ")";
    std::cout << '\n';
  }
  std::cout << "G = " << format_double(r.g_score) << '\n';
  if (!p.expected.empty()) {
    std::size_t right = 0;
    for (const auto& [src, tgt] : p.expected) {
      auto i = s.node_index(src);
      if (i && r.hard[*i] != kUnmapped && t.nodes()[r.hard[*i]].token == tgt) ++right;
    }
    std::cout << "expected correspondences recovered: " << right << '/' << p.expected.size() << '\n';
  }
  if (!c.out.empty()) {
    std::ostringstream os;
    write_mapping_json(os, r, s, t);
    write_out(c.out, os.str());
  }
  if (!dump_soft.empty()) {
    std::ostringstream os;
    write_soft_csv(os, r.soft, s, t);
    write_out(dump_soft, os.str());
  }
  return 0;
}

int cmd_train(const RunConfig& c, const std::string& training_path, double l1, double l2, double prior,
              std::size_t negatives) {
  if (c.out.empty()) throw InputError("--out is required for train");
  std::ifstream in = open_in(training_path);
  const auto sets = read_training_sets(in);
  std::unordered_set<std::string> vocab;
  for (const auto& s : sets) {
    for (const auto* list : {&s.positives, &s.negatives}) {
      for (const auto& [a, b] : *list) {
        vocab.insert(a);
        vocab.insert(b);
      }
    }
  }
  const EmbeddingTable table = load_table(c, vocab);
  RelationTrainingOptions opts;
  opts.elastic_net.l1 = l1;
  opts.elastic_net.l2 = l2;
  opts.prior_precision = prior;
  opts.sampled_negatives = negatives;
  opts.seed = c.seed;
  const RelationModelSet models = train_relations(sets, table, opts, c.jobs);
  std::ostringstream os;
  write_model_set(os, models);
  write_out(c.out, os.str());
  for (const auto& m : models.models) {
    std::cout << m.name << ": " << m.selected.size() << " features, " << m.role_positions.size()
              << " role features, " << m.metadata.positives << " positives, " << m.metadata.negatives
              << " negatives" << (m.metadata.sampled_negatives ? " (sampled)" : "") << '\n';
  }
  return 0;
}

int cmd_relvec(const RunConfig& c, const Explicit& e, const std::string& w1, const std::string& w2) {
  MappingParams p = file_defaults(c);
  apply_explicit(p, c, e);
  const EmbeddingTable table = load_table(c, std::unordered_set<std::string>{w1, w2});
  auto provider = make_provider(c, table, p.variant, p.power);
  const Vector v = provider->get().relation_vector(w1, w2);
  std::ostringstream os;
  for (std::size_t k = 0; k < v.size(); ++k) os << (k ? " " : "") << format_double(v[k]);
  os << '\n';
  if (!c.out.empty()) write_out(c.out, os.str());
  else std::cout << os.str();
  return 0;
}

int cmd_bench_triplets(const RunConfig& c, const Explicit& e, const std::string& triplets_path,
                       const std::string& mapper, const std::string& csv) {
  std::ifstream in = open_in(triplets_path);
  const auto sets = read_triplets(in);
  MappingParams p = file_defaults(c);
  apply_explicit(p, c, e);
  std::unordered_set<std::string> vocab;
  for (const auto& [type, list] : sets)
    for (const auto& t : list) vocab.insert(t.begin(), t.end());
  const EmbeddingTable table = load_table(c, vocab);
  auto provider = make_provider(c, table, p.variant, p.power);
  std::vector<Mapper> mappers;
  if (mapper == "both") mappers = {Mapper::Exhaustive, Mapper::Pam};
  else mappers = {parse_mapper(mapper)};
  std::vector<BenchReport> reports;
  for (const auto& [type, list] : sets) {
    const auto problems = make_triplet_problems(list, c.seed);
    for (Mapper m : mappers) {
      reports.push_back(run_triplet_benchmark(type, problems, table, provider->get(), m, p.pam(), c.jobs));
    }
  }
  write_bench_table(std::cout, reports);
  if (!c.out.empty()) {
    std::ostringstream os;
    write_bench_json(os, reports);
    write_out(c.out, os.str());
  }
  if (!csv.empty()) {
    std::ostringstream os;
    write_bench_csv(os, reports);
    write_out(csv, os.str());
  }
  return 0;
}

int cmd_bench_attention(const RunConfig& c, const Explicit& e, const std::string& path, std::size_t samples) {
  std::ifstream in = open_in(path);
  AttentionScenario s = read_attention_scenario(in);
  // Scenario params sit between built-in defaults and explicit flags.
  apply_explicit(s.params, c, e);
  std::unordered_set<std::string> vocab;
  add_vocabulary(vocab, s.source);
  add_vocabulary(vocab, s.target);
  const EmbeddingTable table = load_table(c, vocab);
  auto provider = make_provider(c, table, s.params.variant, s.params.power);
  const auto src = build_analog(s.source, table, provider->get());
  const auto tgt = build_analog(s.target, table, provider->get());
  const auto outcomes = run_attention_study(s, src, tgt, samples, c.seed, c.jobs);
  std::cout << std::left << std::setw(24) << "condition" << std::setw(12) << s.candidates[0] << std::setw(12)
            << s.candidates[1] << "soft share\n";
  for (const auto& o : outcomes) {
    std::cout << std::left << std::setw(24) << o.name << std::setw(12) << format_double(o.probability(0))
              << std::setw(12) << format_double(o.probability(1)) << format_double(o.mean_share) << '\n';
  }
  if (!c.out.empty()) {
    std::ostringstream os;
    write_attention_json(os, outcomes, s);
    write_out(c.out, os.str());
  }
  return 0;
}

int cmd_bench_shift(const RunConfig& c, const Explicit& e, const std::string& path) {
  std::ifstream in = open_in(path);
  ShiftScenario s = read_shift_scenario(in);
  apply_explicit(s.params, c, e);
  std::unordered_set<std::string> vocab(s.characters.begin(), s.characters.end());
  vocab.insert(s.verb);
  if (!s.systematic_extra.empty()) vocab.insert(s.systematic_extra);
  for (const auto& [level, chars] : s.targets) vocab.insert(chars.begin(), chars.end());
  const EmbeddingTable table = load_table(c, vocab);
  auto provider = make_provider(c, table, s.params.variant, s.params.power);
  const auto cells = run_relational_shift(s, table, provider->get(), c.jobs);
  for (const auto& cell : cells) {
    std::cout << (cell.systematic ? "systematic   " : "nonsystematic") << "  " << std::left << std::setw(8)
              << cell.compatibility << " alpha=" << format_double(cell.alpha)
              << "  accuracy=" << format_double(cell.accuracy) << '\n';
  }
  if (!c.out.empty()) {
    std::ostringstream os;
    write_shift_json(os, cells);
    write_out(c.out, os.str());
  }
  return 0;
}

int cmd_retrieve(const RunConfig& c, const Explicit& e, const std::string& path) {
  std::ifstream in = open_in(path);
  Corpus corpus = read_corpus(in, file_defaults(c));
  apply_explicit(corpus.params, c, e);
  std::unordered_set<std::string> vocab;
  for (const auto& a : corpus.sources) add_vocabulary(vocab, a);
  for (const auto& a : corpus.targets) add_vocabulary(vocab, a);
  const EmbeddingTable table = load_table(c, vocab);
  auto provider = make_provider(c, table, corpus.params.variant, corpus.params.power);
  std::vector<NamedNetwork> sources;
  for (const auto& a : corpus.sources) sources.push_back({a.id, build_analog(a, table, provider->get())});

  json reports = json::array();
  std::size_t hits = 0, scored = 0;
  for (const auto& spec : corpus.targets) {
    const NamedNetwork target{spec.id, build_analog(spec, table, provider->get())};
    const RetrievalReport r = rank_sources(target, sources, corpus.params.pam(), c.jobs);
    std::cout << "target: " << r.target_id << '\n';
    json ranked = json::array();
    for (std::size_t k = 0; k < r.ranked.size(); ++k) {
      const auto& entry = r.ranked[k];
      std::cout << "  " << std::setw(3) << k + 1 << "  " << std::left << std::setw(40) << entry.source_id
                << std::right;
      if (entry.error.empty()) std::cout << format_double(entry.g_score) << '\n';
      else std::cout << "failed: " << entry.error << '\n';
      json item{{"source", entry.source_id}, {"rank", k + 1}};
      if (entry.error.empty()) item["g_score"] = entry.g_score;
      else item["error"] = entry.error;
      ranked.push_back(item);
    }
    auto it = corpus.expected.find(spec.id);
    if (it != corpus.expected.end()) {
      ++scored;
      if (!r.ranked.empty() && r.ranked.front().error.empty() && r.ranked.front().source_id == it->second) ++hits;
    }
    reports.push_back({{"target", r.target_id}, {"ranked", ranked}});
  }
  if (scored) std::cout << "intended source ranked first: " << hits << '/' << scored << '\n';
  if (!c.out.empty()) {
    write_out(c.out, json{{"alpha", corpus.params.alpha},
                          {"beta0", corpus.params.beta0},
                          {"iterations", corpus.params.iterations},
                          {"variant", std::string(variant_tag(corpus.params.variant))},
                          {"reports", reports}}
                             .dump(2) +
                         "\n");
  }
  return 0;
}

int cmd_extract(const RunConfig& c, const std::string& text_path, const std::string& lexicon_path,
                const std::string& replacements_path, const std::string& edges_path, std::size_t top_k) {
  const std::string text = read_file(text_path);
  std::ifstream lex = open_in(lexicon_path);
  KeywordOptions opts;
  opts.top_k = top_k;
  if (!replacements_path.empty()) {
    std::ifstream r = open_in(replacements_path);
    opts.replacements = read_replacements(r);
  }
  KeywordResult result = extract_keywords(text, read_lexicon(lex), opts);
  if (!edges_path.empty()) {
    std::ifstream m = open_in(edges_path);
    apply_manual_edges(result, m);
  }
  json edges = json::array();
  for (const auto& [a, b] : result.edges.edges()) edges.push_back({{"from", a}, {"to", b}, {"directed", true}});
  const json analog{{"concepts", result.keywords}, {"edges", edges}, {"notes", result.notes}};
  std::cout << "keywords (" << result.keywords.size() << "):";
  for (const auto& k : result.keywords) std::cout << ' ' << k;
  std::cout << "\nedges: " << result.edges.edges().size() << '\n';
  if (!c.out.empty()) write_out(c.out, analog.dump(2) + "\n");
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Probabilistic analogical mapping over semantic relation networks"};
  app.require_subcommand(1);
  RunConfig c;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--embeddings", c.embeddings, "Word-embedding text file");
    sub->add_option("--dimension", c.dimension, "Embedding dimension")->check(CLI::PositiveNumber);
    sub->add_option("--models", c.models, "Relation model store (BART variants)");
    sub->add_option("--seed", c.seed, "Random seed");
    sub->add_option("--jobs", c.jobs, "Worker threads")->check(CLI::PositiveNumber);
    sub->add_option("--out", c.out, "Machine-readable output file");
  };
  auto add_mapping = [&](CLI::App* sub) {
    Explicit e;
    e.alpha = sub->add_option("--alpha", c.alpha, "Node-vs-edge weight");
    e.beta0 = sub->add_option("--beta0", c.beta0, "Initial inverse temperature");
    e.iterations = sub->add_option("--iterations", c.iterations, "Annealing iterations");
    e.power = sub->add_option("--power", c.power, "Power transform for BART vectors");
    e.variant = sub->add_option("--variant", c.variant, "w2v-diff | bart-rel | bart-role | bart-full");
    e.compatibility = sub->add_option("--compatibility", c.compatibility, "symmetric | outgoing");
    e.slack = sub->add_option("--slack", c.slack,
                              "Slack row when the source is smaller than the target (false: plain update)");
    return e;
  };

  auto* map = app.add_subcommand("map", "Map a source analog onto a target");
  std::string problem_path, dump_soft;
  map->add_option("problem", problem_path, "Problem JSON")->required();
  map->add_option("--dump-soft", dump_soft, "Write the soft mapping matrix as CSV");
  add_common(map);
  const Explicit e_map = add_mapping(map);

  auto* train = app.add_subcommand("train", "Train relation models and their converses");
  std::string training_path;
  double l1 = 0.01, l2 = 0.01, prior = 1.0;
  std::size_t negatives = 70;
  train->add_option("training", training_path, "Training-set JSON")->required();
  train->add_option("--l1", l1, "Elastic-net L1 penalty");
  train->add_option("--l2", l2, "Elastic-net L2 penalty");
  train->add_option("--prior-precision", prior, "Gaussian prior precision");
  train->add_option("--sampled-negatives", negatives, "Negatives drawn for sets without any");
  add_common(train);

  auto* relvec = app.add_subcommand("relvec", "Print the relation vector of a word pair");
  std::string w1, w2;
  relvec->add_option("w1", w1)->required();
  relvec->add_option("w2", w2)->required();
  add_common(relvec);
  const Explicit e_relvec = add_mapping(relvec);

  auto* bench = app.add_subcommand("bench", "Reproduction experiments");
  bench->require_subcommand(1);
  auto* triplets = bench->add_subcommand("triplets", "Triplet analogy benchmark");
  std::string triplets_path = "data/triplets.tsv", mapper = "both", csv;
  triplets->add_option("--triplets", triplets_path, "Triplet TSV");
  triplets->add_option("--mapper", mapper, "pam | exhaustive | both");
  triplets->add_option("--csv", csv, "Per-position accuracy CSV for plotting");
  add_common(triplets);
  const Explicit e_triplets = add_mapping(triplets);
  auto* attention = bench->add_subcommand("attention", "Attention-weighted mapping study");
  std::string attention_path;
  std::size_t samples = 1000;
  attention->add_option("scenario", attention_path)->required();
  attention->add_option("--samples", samples, "Attention samples per condition")->check(CLI::PositiveNumber);
  add_common(attention);
  const Explicit e_attention = add_mapping(attention);
  auto* shift = bench->add_subcommand("shift", "Relational shift grid");
  std::string shift_path;
  shift->add_option("scenario", shift_path)->required();
  add_common(shift);
  const Explicit e_shift = add_mapping(shift);

  auto* retrieve = app.add_subcommand("retrieve", "Rank candidate sources for each target by G score");
  std::string corpus_path;
  retrieve->add_option("corpus", corpus_path, "Corpus JSON")->required();
  add_common(retrieve);
  const Explicit e_retrieve = add_mapping(retrieve);

  auto* extract = app.add_subcommand("extract", "Keywords and edges from a short text");
  std::string text_path, lexicon_path, replacements_path, edges_path;
  std::size_t top_k = 20;
  extract->add_option("text", text_path)->required();
  extract->add_option("--lexicon", lexicon_path, "token<TAB>pos file")->required();
  extract->add_option("--replacements", replacements_path, "token<TAB>replacement file");
  extract->add_option("--manual-edges", edges_path, "from<TAB>verb-or-flag<TAB>to file");
  extract->add_option("--top-k", top_k, "Frequency cut")->check(CLI::PositiveNumber);
  add_common(extract);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& ex) {
    return app.exit(ex);
  } catch (const CLI::CallForAllHelp& ex) {
    return app.exit(ex);
  } catch (const CLI::ParseError& ex) {
    app.exit(ex);
    return 1;
  }

  try {
    if (*map) return cmd_map(c, e_map, problem_path, dump_soft);
    if (*train) return cmd_train(c, training_path, l1, l2, prior, negatives);
    if (*relvec) return cmd_relvec(c, e_relvec, w1, w2);
    if (*triplets) return cmd_bench_triplets(c, e_triplets, triplets_path, mapper, csv);
    if (*attention) return cmd_bench_attention(c, e_attention, attention_path, samples);
    if (*shift) return cmd_bench_shift(c, e_shift, shift_path);
    if (*retrieve) return cmd_retrieve(c, e_retrieve, corpus_path);
    if (*extract) return cmd_extract(c, text_path, lexicon_path, replacements_path, edges_path, top_k);
  } catch (const NumericError& ex) {
    std::cerr << "error: " << ex.what() << '\n';
    return 2;
  } catch (const Error& ex) {
    std::cerr << "error: " << ex.what() << '\n';
    return 1;
  } catch (const std::exception& ex) {
    std::cerr << "error: " << ex.what() << '\n';
    return 1;
  }
  return 1;
}
