#pragma once

#include <cstddef>
#include <cstdint>
#include <istream>
#include <ostream>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "pam/embeddings.hpp"
#include "pam/logistic.hpp"

namespace pam {

using WordPair = std::pair<std::string, std::string>;

struct RelationTrainingSet {
  std::string relation;
  std::vector<WordPair> positives;
  std::vector<WordPair> negatives;

  /// Throws InputError when positives are empty or a pair is in both lists.
  void validate() const;
};

/// Swaps every pair and appends "-converse" to the name (or strips it).
RelationTrainingSet make_converse(const RelationTrainingSet& training);

struct RelationTrainingOptions {
  ElasticNetOptions elastic_net;
  double prior_precision = 1.0;
  // Used only for sets with no negatives: draw this many from other relations' positives.
  std::size_t sampled_negatives = 70;
  std::uint64_t seed = 1;
  LookupOptions lookup;
};

/// One learned relation: elastic-net-selected augmented-feature positions, a
/// Gaussian posterior over their weights (plus intercept, stored last), and a
/// role classifier over relation-weighted single-word features.
struct RelationModel {
  std::string name;
  std::size_t word_dimension = 0;          // D; augmented features have length 4D
  std::vector<std::size_t> selected;       // positions in [0, 4D)
  GaussianPosterior relation;              // length selected.size() + 1
  std::vector<std::size_t> role_positions; // positions in a word slot [0, 2D)
  Vector role_weights;                     // relation-weight means at role_positions
  GaussianPosterior role;                  // length role_positions.size() + 1

  struct Metadata {
    double l1 = 0.0;
    double l2 = 0.0;
    double prior_precision = 1.0;
    std::size_t positives = 0;
    std::size_t negatives = 0;
    bool sampled_negatives = false;
  } metadata;

  bool trained() const { return !selected.empty() && relation.mean.size() == selected.size() + 1; }
  bool role_trained() const { return role.mean.size() == role_positions.size() + 1 && !role.mean.empty(); }

  /// Selected augmented features followed by a constant 1.
  Vector relation_design(std::span<const double> augmented) const;
  /// Relation-weighted word-slot features followed by a constant 1.
  Vector role_design(std::span<const double> word_slot) const;
};

/// Posterior predictive P(R = 1 | pair). Throws InputError if untrained.
double relation_posterior(const RelationModel& model, std::span<const double> augmented);

/// Posterior predictive P(word fills the first role). `word_slot` is raw | ranked
/// for the word (length 2D).
double role_posterior(const RelationModel& model, std::span<const double> word_slot);

/// Fits selection + Bayesian weights from labelled augmented features.
RelationModel fit_relation(const std::string& name, std::size_t word_dimension, const Rows& augmented,
                           const Labels& labels, const RelationTrainingOptions& options);

/// Role classifier: for every positive pair, the first word's slot is a positive
/// example and the second word's slot a negative example.
void fit_role_model(RelationModel& model, const Rows& positive_augmented,
                    const RelationTrainingOptions& options);

/// Whole pipeline for one set against an embedding table. `negative_pool`
/// supplies negatives when the set has none.
RelationModel train_relation(const RelationTrainingSet& training, const EmbeddingTable& table,
                             const RelationTrainingOptions& options,
                             std::span<const WordPair> negative_pool = {});

struct RelationModelSet {
  static constexpr int kFormatVersion = 1;
  std::size_t word_dimension = 0;
  std::vector<RelationModel> models;
};

/// Trains every set and its converse (2 models per set, original then converse).
RelationModelSet train_relations(const std::vector<RelationTrainingSet>& sets,
                                 const EmbeddingTable& table, const RelationTrainingOptions& options,
                                 std::size_t jobs = 1);

std::vector<RelationTrainingSet> read_training_sets(std::istream& in);
void write_model_set(std::ostream& out, const RelationModelSet& set);
RelationModelSet read_model_set(std::istream& in);

}  // namespace pam
