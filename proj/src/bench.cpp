#include "pam/bench.hpp"

#include <algorithm>
#include <iomanip>
#include <json.hpp>
#include <numeric>
#include <random>
#include <sstream>

#include "pam/error.hpp"
#include "pam/parallel.hpp"

namespace pam {
namespace {

using nlohmann::json;

json parse_json(std::istream& in, const char* what) {
  try {
    json j;
    in >> j;
    return j;
  } catch (const json::exception& e) {
    throw InputError(std::string("cannot parse ") + what + ": " + e.what());
  }
}

// [r(a,b), r(b,c), r(a,c)]
Vector concat_relations(const RelationProvider& provider, const std::string& a, const std::string& b,
                        const std::string& c) {
  Vector out = provider.relation_vector(a, b);
  for (const Vector& v : {provider.relation_vector(b, c), provider.relation_vector(a, c)}) {
    out.insert(out.end(), v.begin(), v.end());
  }
  return out;
}

// Analogs in problem files are parsed by read_problem; scenario files reuse it
// by wrapping the two analogs into a problem object.
std::pair<AnalogSpec, AnalogSpec> parse_pair(const json& j, MappingParams& params) {
  json wrapper{{"source", j.at("source")}, {"target", j.at("target")}};
  if (j.contains("params")) wrapper["params"] = j.at("params");
  std::istringstream in(wrapper.dump());
  Problem p = read_problem(in, params);
  params = p.params;
  return {std::move(p.source), std::move(p.target)};
}

std::vector<std::size_t> select_edges(const SemanticRelationNetwork& net, const EdgeSelector& sel) {
  auto index = [&](const std::string& c) {
    auto i = net.node_index(c);
    if (!i) throw InputError("emphasis names unknown concept '" + c + "'");
    return *i;
  };
  std::vector<std::size_t> out;
  const auto& edges = net.edges();
  if (sel.all) {
    out.resize(edges.size());
    std::iota(out.begin(), out.end(), std::size_t{0});
  } else if (!sel.node.empty()) {
    const std::size_t n = index(sel.node);
    for (std::size_t e = 0; e < edges.size(); ++e) {
      if (edges[e].from == n || edges[e].to == n) out.push_back(e);
    }
  } else {
    const std::size_t a = index(sel.from), b = index(sel.to);
    for (std::size_t e = 0; e < edges.size(); ++e) {
      if ((edges[e].from == a && edges[e].to == b) || (edges[e].from == b && edges[e].to == a)) out.push_back(e);
    }
  }
  if (out.empty()) throw InputError("emphasis selector matches no edge");
  return out;
}

}  // namespace

std::map<std::string, std::vector<Triplet>> read_triplets(std::istream& in) {
  std::map<std::string, std::vector<Triplet>> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    std::vector<std::string> f;
    std::stringstream ss(line);
    std::string field;
    while (std::getline(ss, field, '\t')) f.push_back(field);
    if (f.size() != 4) throw InputError("triplet line " + std::to_string(line_no) + ": expected type<TAB>a<TAB>b<TAB>c");
    Triplet t{f[1], f[2], f[3]};
    if (t[0] == t[1] || t[1] == t[2] || t[0] == t[2]) {
      throw InputError("triplet line " + std::to_string(line_no) + ": words must be distinct");
    }
    out[f[0]].push_back(std::move(t));
  }
  if (out.empty()) throw InputError("triplet file has no triplets");
  return out;
}

std::vector<TripletProblem> make_triplet_problems(const std::vector<Triplet>& triplets, std::uint64_t seed) {
  std::vector<TripletProblem> out;
  for (std::size_t s = 0; s < triplets.size(); ++s) {
    for (std::size_t t = 0; t < triplets.size(); ++t) {
      if (s == t) continue;
      TripletProblem p;
      p.source = triplets[s];
      p.gold = triplets[t];
      p.presented.assign(p.gold.begin(), p.gold.end());
      std::seed_seq seq{seed, static_cast<std::uint64_t>(s), static_cast<std::uint64_t>(t)};
      std::mt19937_64 rng(seq);
      std::shuffle(p.presented.begin(), p.presented.end(), rng);
      out.push_back(std::move(p));
    }
  }
  return out;
}

Triplet exhaustive_triplet_map(const Triplet& source, const std::vector<std::string>& targets,
                               const RelationProvider& provider) {
  if (targets.size() != 3) throw InputError("triplet targets must have three words");
  const Vector s = concat_relations(provider, source[0], source[1], source[2]);
  std::vector<std::string> order = targets;
  std::sort(order.begin(), order.end());
  Triplet best{};
  double best_score = -std::numeric_limits<double>::infinity();
  do {
    const double score = cosine_or_zero(s, concat_relations(provider, order[0], order[1], order[2]));
    if (score > best_score) {
      best_score = score;
      best = {order[0], order[1], order[2]};
    }
  } while (std::next_permutation(order.begin(), order.end()));
  return best;
}

Triplet pam_triplet_map(const Triplet& source, const std::vector<std::string>& targets,
                        const EmbeddingTable& table, const RelationProvider& provider, const PamOptions& options,
                        const LookupOptions& lookup) {
  if (targets.size() != 3) throw InputError("triplet targets must have three words");
  BuildOptions build;
  build.lookup = lookup;
  const auto s = build_network({source.begin(), source.end()}, nullptr, table, provider, build);
  const auto t = build_network(targets, nullptr, table, provider, build);
  const MappingResult r = run_pam(s, t, options);
  Triplet out{};
  for (std::size_t i = 0; i < 3; ++i) {
    if (r.hard[i] != kUnmapped) out[i] = targets[r.hard[i]];
  }
  return out;
}

Mapper parse_mapper(const std::string& tag) {
  if (tag == "pam") return Mapper::Pam;
  if (tag == "exhaustive") return Mapper::Exhaustive;
  throw InputError("unknown mapper '" + tag + "' (expected pam or exhaustive)");
}

std::string mapper_tag(Mapper m) { return m == Mapper::Pam ? "pam" : "exhaustive"; }

BenchReport run_triplet_benchmark(const std::string& type, const std::vector<TripletProblem>& problems,
                                  const EmbeddingTable& table, const RelationProvider& provider, Mapper mapper,
                                  const PamOptions& options, std::size_t jobs, const LookupOptions& lookup) {
  if (problems.empty()) throw InputError("no triplet problems");
  BenchReport report;
  report.type = type;
  report.variant = std::string(variant_tag(provider.variant()));
  report.mapper = mapper;
  report.predictions.resize(problems.size());
  parallel_for(problems.size(), jobs, [&](std::size_t k) {
    const auto& p = problems[k];
    report.predictions[k] = mapper == Mapper::Pam
                                ? pam_triplet_map(p.source, p.presented, table, provider, options, lookup)
                                : exhaustive_triplet_map(p.source, p.presented, provider);
  });
  std::array<std::size_t, 3> hits{};
  std::size_t all = 0;
  for (std::size_t k = 0; k < problems.size(); ++k) {
    bool ok = true;
    for (std::size_t pos = 0; pos < 3; ++pos) {
      const bool hit = report.predictions[k][pos] == problems[k].gold[pos];
      hits[pos] += hit;
      ok = ok && hit;
    }
    report.correct.push_back(ok);
    all += ok;
  }
  const double n = static_cast<double>(problems.size());
  report.accuracy = static_cast<double>(all) / n;
  for (std::size_t pos = 0; pos < 3; ++pos) report.position_accuracy[pos] = static_cast<double>(hits[pos]) / n;
  return report;
}

void write_bench_json(std::ostream& out, const std::vector<BenchReport>& reports) {
  json arr = json::array();
  for (const auto& r : reports) {
    json preds = json::array();
    for (std::size_t k = 0; k < r.predictions.size(); ++k) {
      preds.push_back({{"mapping", r.predictions[k]}, {"correct", static_cast<bool>(r.correct[k])}});
    }
    arr.push_back({{"type", r.type},
                   {"variant", r.variant},
                   {"mapper", mapper_tag(r.mapper)},
                   {"problems", r.correct.size()},
                   {"accuracy", r.accuracy},
                   {"position_accuracy", r.position_accuracy},
                   {"predictions", preds}});
  }
  out << json{{"reports", arr}}.dump(2) << '\n';
}

void write_bench_csv(std::ostream& out, const std::vector<BenchReport>& reports) {
  static const char* positions[] = {"first", "middle", "last"};
  out << "type,variant,mapper,position,accuracy\n";
  for (const auto& r : reports) {
    for (std::size_t pos = 0; pos < 3; ++pos) {
      out << r.type << ',' << r.variant << ',' << mapper_tag(r.mapper) << ',' << positions[pos] << ','
          << format_double(r.position_accuracy[pos]) << '\n';
    }
    out << r.type << ',' << r.variant << ',' << mapper_tag(r.mapper) << ",all," << format_double(r.accuracy)
        << '\n';
  }
}

void write_bench_table(std::ostream& out, const std::vector<BenchReport>& reports) {
  out << std::left << std::setw(24) << "type" << std::setw(12) << "mapper" << std::setw(11) << "variant"
      << std::right << std::setw(9) << "problems" << std::setw(8) << "all" << std::setw(8) << "first"
      << std::setw(8) << "middle" << std::setw(8) << "last" << '\n';
  out << std::fixed << std::setprecision(3);
  for (const auto& r : reports) {
    out << std::left << std::setw(24) << r.type << std::setw(12) << mapper_tag(r.mapper) << std::setw(11)
        << r.variant << std::right << std::setw(9) << r.correct.size() << std::setw(8) << r.accuracy;
    for (double a : r.position_accuracy) out << std::setw(8) << a;
    out << '\n';
  }
  out.unsetf(std::ios::floatfield);
}

AttentionScenario read_attention_scenario(std::istream& in) {
  const json j = parse_json(in, "attention scenario");
  AttentionScenario s;
  try {
    std::tie(s.source, s.target) = parse_pair(j, s.params);
    s.ambiguous = j.at("ambiguous").get<std::string>();
    const auto cands = j.at("candidates").get<std::vector<std::string>>();
    if (cands.size() != 2) throw InputError("attention scenario needs exactly two candidates");
    s.candidates = {cands[0], cands[1]};
    for (const auto& c : j.at("conditions")) {
      AttentionCondition cond;
      cond.name = c.at("name").get<std::string>();
      cond.expected = c.value("expected", std::string());
      if (!cond.expected.empty() && cond.expected != s.candidates[0] && cond.expected != s.candidates[1]) {
        throw InputError("condition '" + cond.name + "' expects a non-candidate");
      }
      for (const auto& e : c.at("emphasis")) {
        EdgeSelector sel;
        sel.side = e.at("side").get<std::string>();
        if (sel.side != "source" && sel.side != "target") throw InputError("selector side must be source or target");
        sel.all = e.value("all", false);
        sel.node = e.value("node", std::string());
        sel.from = e.value("from", std::string());
        sel.to = e.value("to", std::string());
        if (!sel.all && sel.node.empty() && (sel.from.empty() || sel.to.empty())) {
          throw InputError("selector needs all, node, or from/to");
        }
        cond.emphasis.push_back(std::move(sel));
      }
      s.conditions.push_back(std::move(cond));
    }
  } catch (const json::exception& e) {
    throw InputError(std::string("malformed attention scenario: ") + e.what());
  }
  if (s.conditions.empty()) throw InputError("attention scenario has no conditions");
  return s;
}

std::vector<ConditionOutcome> run_attention_study(const AttentionScenario& scenario,
                                                  const SemanticRelationNetwork& source,
                                                  const SemanticRelationNetwork& target, std::size_t n_samples,
                                                  std::uint64_t seed, std::size_t jobs) {
  if (n_samples == 0) throw InputError("attention study needs at least one sample");
  const auto a = source.node_index(scenario.ambiguous);
  const auto c0 = target.node_index(scenario.candidates[0]);
  const auto c1 = target.node_index(scenario.candidates[1]);
  if (!a || !c0 || !c1) throw InputError("ambiguous concept or candidates missing from the analogs");

  const SimilarityTables base = compute_similarities(source, target);
  const PamOptions options = scenario.params.pam();

  std::vector<ConditionOutcome> outcomes;
  for (std::size_t c = 0; c < scenario.conditions.size(); ++c) {
    const auto& cond = scenario.conditions[c];
    std::vector<bool> s_emph(source.edges().size(), false), t_emph(target.edges().size(), false);
    for (const auto& sel : cond.emphasis) {
      const bool src = sel.side == "source";
      for (std::size_t e : select_edges(src ? source : target, sel)) (src ? s_emph : t_emph)[e] = true;
    }

    std::vector<int> pick(n_samples, -1);
    std::vector<double> share(n_samples, 0.0);
    parallel_for(n_samples, jobs, [&](std::size_t k) {
      std::seed_seq seq{seed, static_cast<std::uint64_t>(c), static_cast<std::uint64_t>(k)};
      std::mt19937_64 rng(seq);
      std::uniform_real_distribution<double> weight(1.0, 1.1);
      std::vector<double> sw(s_emph.size(), 1.0), tw(t_emph.size(), 1.0);
      for (std::size_t e = 0; e < sw.size(); ++e) if (s_emph[e]) sw[e] = weight(rng);
      for (std::size_t e = 0; e < tw.size(); ++e) if (t_emph[e]) tw[e] = weight(rng);
      const MappingResult r = run_pam(with_attention(base, {}, {}, sw, tw), options);
      if (r.hard[*a] == *c0) pick[k] = 0;
      else if (r.hard[*a] == *c1) pick[k] = 1;
      const double m0 = r.soft(*a, *c0), m1 = r.soft(*a, *c1);
      share[k] = m0 + m1 > 0.0 ? m0 / (m0 + m1) : 0.5;
    });

    ConditionOutcome out;
    out.name = cond.name;
    out.expected = cond.expected;
    out.samples = n_samples;
    for (std::size_t k = 0; k < n_samples; ++k) {
      if (pick[k] >= 0) ++out.hard_counts[static_cast<std::size_t>(pick[k])];
      out.mean_share += share[k];
    }
    out.mean_share /= static_cast<double>(n_samples);
    outcomes.push_back(std::move(out));
  }
  return outcomes;
}

void write_attention_json(std::ostream& out, const std::vector<ConditionOutcome>& outcomes,
                          const AttentionScenario& scenario) {
  json arr = json::array();
  for (const auto& o : outcomes) {
    arr.push_back({{"condition", o.name},
                   {"expected", o.expected},
                   {"samples", o.samples},
                   {"counts", {{scenario.candidates[0], o.hard_counts[0]}, {scenario.candidates[1], o.hard_counts[1]}}},
                   {"probability", {{scenario.candidates[0], o.probability(0)}, {scenario.candidates[1], o.probability(1)}}},
                   {"mean_soft_share_" + scenario.candidates[0], o.mean_share}});
  }
  out << json{{"ambiguous", scenario.ambiguous}, {"conditions", arr}}.dump(2) << '\n';
}

ShiftScenario read_shift_scenario(std::istream& in) {
  const json j = parse_json(in, "relational-shift scenario");
  ShiftScenario s;
  try {
    s.characters = j.at("characters").get<std::vector<std::string>>();
    s.verb = j.at("verb").get<std::string>();
    for (const auto& t : j.at("triads")) {
      const auto roles = t.get<std::vector<std::size_t>>();
      if (roles.size() != 2 || roles[0] >= s.characters.size() || roles[1] >= s.characters.size() ||
          roles[0] == roles[1]) {
        throw InputError("triads must be [subject role, object role] with distinct valid roles");
      }
      s.triads.push_back({roles[0], roles[1]});
    }
    s.systematic_extra = j.value("systematic_extra", std::string());
    s.targets = j.at("targets").get<std::map<std::string, std::vector<std::string>>>();
    s.all_orderings = j.value("all_orderings", std::vector<std::string>{});
    s.alphas = j.at("alphas").get<std::vector<double>>();
    if (j.contains("params")) {
      json wrapper{{"source", {{"concepts", {"x"}}}}, {"target", {{"concepts", {"x"}}}}, {"params", j.at("params")}};
      std::istringstream w(wrapper.dump());
      s.params = read_problem(w).params;
    }
  } catch (const json::exception& e) {
    throw InputError(std::string("malformed relational-shift scenario: ") + e.what());
  }
  for (const auto& [level, chars] : s.targets) {
    if (chars.size() != s.characters.size()) {
      throw InputError("target set '" + level + "' must list one character per role");
    }
  }
  return s;
}

std::vector<ShiftCell> run_relational_shift(const ShiftScenario& scenario, const EmbeddingTable& table,
                                            const RelationProvider& provider, std::size_t jobs,
                                            const LookupOptions& lookup) {
  struct Job {
    std::size_t cell;
    bool systematic;
    std::vector<std::string> target_roles;
    double alpha;
  };
  std::vector<ShiftCell> cells;
  std::vector<Job> work;
  for (bool systematic : {true, false}) {
    if (!systematic && scenario.systematic_extra.empty()) continue;
    for (const auto& [level, chars] : scenario.targets) {
      std::vector<std::vector<std::string>> assignments;
      const bool every = std::find(scenario.all_orderings.begin(), scenario.all_orderings.end(), level) !=
                         scenario.all_orderings.end();
      if (every) {
        std::vector<std::string> perm = chars;
        std::sort(perm.begin(), perm.end());
        do assignments.push_back(perm);
        while (std::next_permutation(perm.begin(), perm.end()));
      } else {
        assignments.push_back(chars);
      }
      for (double alpha : scenario.alphas) {
        cells.push_back({systematic, level, alpha, 0.0, assignments.size()});
        for (const auto& roles : assignments) work.push_back({cells.size() - 1, systematic, roles, alpha});
      }
    }
  }

  std::vector<double> scores(work.size());
  parallel_for(work.size(), jobs, [&](std::size_t w) {
    const Job& job = work[w];
    AnalogSpec src, tgt;
    src.concepts = scenario.characters;
    std::vector<std::string> presented = job.target_roles;
    std::sort(presented.begin(), presented.end());
    tgt.concepts = presented;
    for (auto* spec : {&src, &tgt}) {
      spec->concepts.push_back(scenario.verb);
      if (job.systematic && !scenario.systematic_extra.empty()) spec->concepts.push_back(scenario.systematic_extra);
    }
    for (const auto& [subj, obj] : scenario.triads) {
      src.nvn.emplace_back(scenario.characters[subj], scenario.verb, scenario.characters[obj]);
      tgt.nvn.emplace_back(job.target_roles[subj], scenario.verb, job.target_roles[obj]);
    }
    const auto s = build_analog(src, table, provider, lookup);
    const auto t = build_analog(tgt, table, provider, lookup);
    PamOptions options = scenario.params.pam();
    options.alpha = job.alpha;
    const MappingResult r = run_pam(s, t, options);
    std::size_t right = 0;
    for (std::size_t k = 0; k < scenario.characters.size(); ++k) {
      const std::size_t mapped = r.hard[k];
      if (mapped != kUnmapped && t.nodes()[mapped].token == job.target_roles[k]) ++right;
    }
    scores[w] = static_cast<double>(right) / static_cast<double>(scenario.characters.size());
  });
  for (std::size_t w = 0; w < work.size(); ++w) cells[work[w].cell].accuracy += scores[w];
  for (auto& c : cells) c.accuracy /= static_cast<double>(c.variants);
  return cells;
}

void write_shift_json(std::ostream& out, const std::vector<ShiftCell>& cells) {
  json arr = json::array();
  for (const auto& c : cells) {
    arr.push_back({{"systematic", c.systematic},
                   {"compatibility", c.compatibility},
                   {"alpha", c.alpha},
                   {"accuracy", c.accuracy},
                   {"variants", c.variants}});
  }
  out << json{{"cells", arr}}.dump(2) << '\n';
}

}  // namespace pam
