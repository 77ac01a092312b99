#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <istream>
#include <map>
#include <ostream>
#include <string>
#include <vector>

#include "pam/engine.hpp"
#include "pam/problem.hpp"
#include "pam/relation_vectors.hpp"

namespace pam {

// ---- triplets ----

using Triplet = std::array<std::string, 3>;

/// Lines "type<TAB>a<TAB>b<TAB>c"; '#' comments. Returns type -> triplets in file order.
std::map<std::string, std::vector<Triplet>> read_triplets(std::istream& in);

struct TripletProblem {
  Triplet source;
  Triplet gold;                     // gold[k] corresponds to source[k]
  std::vector<std::string> presented;  // target words in the order the mapper sees them
};

/// Every ordered pair of distinct triplets (n(n-1) problems). Target words are
/// shuffled with a per-problem seeded RNG.
std::vector<TripletProblem> make_triplet_problems(const std::vector<Triplet>& triplets, std::uint64_t seed);

/// Cosine between [r(A,B), r(B,C), r(A,C)] and the same concatenation for
/// each ordering of the targets. Orderings are tried in lexicographic order of
/// the words, so ties go to the lexicographically lowest.
Triplet exhaustive_triplet_map(const Triplet& source, const std::vector<std::string>& targets,
                               const RelationProvider& provider);

/// Three-node complete bidirectional networks mapped with PAM.
Triplet pam_triplet_map(const Triplet& source, const std::vector<std::string>& targets,
                        const EmbeddingTable& table, const RelationProvider& provider, const PamOptions& options,
                        const LookupOptions& lookup = {});

enum class Mapper { Pam, Exhaustive };
Mapper parse_mapper(const std::string& tag);
std::string mapper_tag(Mapper m);

struct BenchReport {
  std::string type;
  std::string variant;
  Mapper mapper = Mapper::Pam;
  std::vector<Triplet> predictions;
  std::vector<bool> correct;  // all three words right
  double accuracy = 0.0;
  std::array<double, 3> position_accuracy{};  // first, middle, last
};

BenchReport run_triplet_benchmark(const std::string& type, const std::vector<TripletProblem>& problems,
                                  const EmbeddingTable& table, const RelationProvider& provider, Mapper mapper,
                                  const PamOptions& options = {}, std::size_t jobs = 1,
                                  const LookupOptions& lookup = {});

void write_bench_json(std::ostream& out, const std::vector<BenchReport>& reports);
/// type,variant,mapper,position,accuracy rows for plotting.
void write_bench_csv(std::ostream& out, const std::vector<BenchReport>& reports);
void write_bench_table(std::ostream& out, const std::vector<BenchReport>& reports);

// ---- attention study ----

/// Picks edges of one analog: every edge touching `node`, every edge between
/// `from` and `to` (either direction), or every edge when `all` is set.
struct EdgeSelector {
  std::string side;  // "source" | "target"
  std::string node;
  std::string from;
  std::string to;
  bool all = false;
};

struct AttentionCondition {
  std::string name;
  std::vector<EdgeSelector> emphasis;
  std::string expected;  // candidate this condition should favour; empty for control
};

struct AttentionScenario {
  AnalogSpec source;
  AnalogSpec target;
  MappingParams params;
  std::string ambiguous;                 // source concept
  std::array<std::string, 2> candidates;  // target concepts
  std::vector<AttentionCondition> conditions;
};

AttentionScenario read_attention_scenario(std::istream& in);

struct ConditionOutcome {
  std::string name;
  std::string expected;
  std::size_t samples = 0;
  std::array<std::size_t, 2> hard_counts{};  // ambiguous node mapped to candidate 0 / 1
  double mean_share = 0.0;  // mean of m(a, c0) / (m(a, c0) + m(a, c1)) over samples
  double probability(int k) const {
    return samples ? static_cast<double>(hard_counts[k]) / static_cast<double>(samples) : 0.0;
  }
};

/// For each condition and sample, every emphasized edge draws an independent
/// attention weight from U[1, 1.1]; others stay 1. Sample s of condition c uses
/// an RNG seeded by (seed, c, s), so results do not depend on `jobs`.
std::vector<ConditionOutcome> run_attention_study(const AttentionScenario& scenario,
                                                  const SemanticRelationNetwork& source,
                                                  const SemanticRelationNetwork& target, std::size_t n_samples,
                                                  std::uint64_t seed, std::size_t jobs = 1);

void write_attention_json(std::ostream& out, const std::vector<ConditionOutcome>& outcomes,
                          const AttentionScenario& scenario);

// ---- relational shift ----

struct ShiftScenario {
  std::vector<std::string> characters;  // source characters in role order
  std::string verb;
  std::vector<std::array<std::size_t, 2>> triads;  // (subject role, object role) with the verb between
  std::string systematic_extra;  // keyword present only in the systematic version
  std::map<std::string, std::vector<std::string>> targets;  // compatibility -> characters in role order
  std::vector<std::string> all_orderings;  // compatibility levels averaged over every role assignment
  std::vector<double> alphas;
  MappingParams params;
};

ShiftScenario read_shift_scenario(std::istream& in);

struct ShiftCell {
  bool systematic = false;
  std::string compatibility;
  double alpha = 0.0;
  double accuracy = 0.0;  // share of characters mapped to their role counterpart
  std::size_t variants = 0;
};

std::vector<ShiftCell> run_relational_shift(const ShiftScenario& scenario, const EmbeddingTable& table,
                                            const RelationProvider& provider, std::size_t jobs = 1,
                                            const LookupOptions& lookup = {});

void write_shift_json(std::ostream& out, const std::vector<ShiftCell>& cells);

}  // namespace pam
