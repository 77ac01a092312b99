#include "pam/relation_model.hpp"

#include <algorithm>
#include <json.hpp>
#include <random>
#include <set>

#include "pam/error.hpp"
#include "pam/features.hpp"
#include "pam/parallel.hpp"

namespace pam {
namespace {

using nlohmann::json;

constexpr std::string_view kConverseSuffix = "-converse";

Rows augment_pairs(std::span<const WordPair> pairs, const EmbeddingTable& table,
                   const LookupOptions& lookup) {
  Rows rows;
  rows.reserve(pairs.size());
  for (const auto& [a, b] : pairs) {
    rows.push_back(build_augmented_features(table.lookup(a, lookup), table.lookup(b, lookup)));
  }
  return rows;
}

json posterior_to_json(const GaussianPosterior& p) {
  return json{{"mean", p.mean}, {"variance", p.variance}};
}

GaussianPosterior posterior_from_json(const json& j) {
  GaussianPosterior p;
  p.mean = j.at("mean").get<Vector>();
  p.variance = j.at("variance").get<Vector>();
  if (p.mean.size() != p.variance.size()) throw InputError("posterior mean/variance length mismatch");
  for (double v : p.variance) {
    if (!(v > 0.0)) throw InputError("posterior variance must be strictly positive");
  }
  return p;
}

}  // namespace

void RelationTrainingSet::validate() const {
  if (positives.empty()) throw InputError("relation '" + relation + "' has no positive examples");
  std::set<WordPair> pos(positives.begin(), positives.end());
  for (const auto& p : negatives) {
    if (pos.count(p)) {
      throw InputError("relation '" + relation + "': pair (" + p.first + ", " + p.second +
                       ") is both positive and negative");
    }
  }
}

RelationTrainingSet make_converse(const RelationTrainingSet& training) {
  RelationTrainingSet out;
  const std::string& name = training.relation;
  if (name.size() >= kConverseSuffix.size() &&
      name.compare(name.size() - kConverseSuffix.size(), kConverseSuffix.size(), kConverseSuffix) == 0) {
    out.relation = name.substr(0, name.size() - kConverseSuffix.size());
  } else {
    out.relation = name + std::string(kConverseSuffix);
  }
  for (const auto& [a, b] : training.positives) out.positives.emplace_back(b, a);
  for (const auto& [a, b] : training.negatives) out.negatives.emplace_back(b, a);
  return out;
}

Vector RelationModel::relation_design(std::span<const double> augmented) const {
  if (augmented.size() != 4 * word_dimension) {
    throw InputError("augmented feature length does not match relation model '" + name + "'");
  }
  Vector x;
  x.reserve(selected.size() + 1);
  for (std::size_t k : selected) x.push_back(augmented[k]);
  x.push_back(1.0);
  return x;
}

Vector RelationModel::role_design(std::span<const double> word_slot) const {
  if (word_slot.size() != 2 * word_dimension) {
    throw InputError("word-slot feature length does not match relation model '" + name + "'");
  }
  Vector x;
  x.reserve(role_positions.size() + 1);
  for (std::size_t i = 0; i < role_positions.size(); ++i) {
    x.push_back(role_weights[i] * word_slot[role_positions[i]]);
  }
  x.push_back(1.0);
  return x;
}

double relation_posterior(const RelationModel& model, std::span<const double> augmented) {
  if (!model.trained()) throw InputError("relation model '" + model.name + "' is not trained");
  return model.relation.predictive(model.relation_design(augmented));
}

double role_posterior(const RelationModel& model, std::span<const double> word_slot) {
  if (!model.role_trained()) throw InputError("role model '" + model.name + "' is not trained");
  return model.role.predictive(model.role_design(word_slot));
}

RelationModel fit_relation(const std::string& name, std::size_t word_dimension, const Rows& augmented,
                           const Labels& labels, const RelationTrainingOptions& options) {
  ElasticNetFit selection = fit_elastic_net(augmented, labels, options.elastic_net);

  RelationModel model;
  model.name = name;
  model.word_dimension = word_dimension;
  model.selected = selection.selected;

  Rows design;
  design.reserve(augmented.size());
  for (const auto& row : augmented) design.push_back(model.relation_design(row));
  BayesLogisticOptions bayes;
  bayes.prior_precision = options.prior_precision;
  model.relation = fit_bayes_logistic(design, labels, model.selected.size() + 1, bayes);

  model.metadata.l1 = options.elastic_net.l1;
  model.metadata.l2 = options.elastic_net.l2;
  model.metadata.prior_precision = options.prior_precision;
  model.metadata.positives = static_cast<std::size_t>(std::count(labels.begin(), labels.end(), 1));
  model.metadata.negatives = labels.size() - model.metadata.positives;
  return model;
}

void fit_role_model(RelationModel& model, const Rows& positive_augmented,
                    const RelationTrainingOptions& options) {
  if (!model.trained()) throw InputError("role model needs relation weights first");
  const std::size_t slot = 2 * model.word_dimension;

  model.role_positions.clear();
  model.role_weights.clear();
  for (std::size_t i = 0; i < model.selected.size(); ++i) {
    if (model.selected[i] < slot) {
      model.role_positions.push_back(model.selected[i]);
      model.role_weights.push_back(model.relation.mean[i]);
    }
  }
  // No first-word feature was selected: fall back to the second word's positions.
  if (model.role_positions.empty()) {
    for (std::size_t i = 0; i < model.selected.size(); ++i) {
      model.role_positions.push_back(model.selected[i] - slot);
      model.role_weights.push_back(model.relation.mean[i]);
    }
  }

  Rows design;
  Labels labels;
  for (const auto& aug : positive_augmented) {
    design.push_back(model.role_design(word_slot(aug, 0)));
    labels.push_back(1);
    design.push_back(model.role_design(word_slot(aug, 1)));
    labels.push_back(0);
  }
  BayesLogisticOptions bayes;
  bayes.prior_precision = options.prior_precision;
  model.role = fit_bayes_logistic(design, labels, model.role_positions.size() + 1, bayes);
}

RelationModel train_relation(const RelationTrainingSet& training, const EmbeddingTable& table,
                             const RelationTrainingOptions& options,
                             std::span<const WordPair> negative_pool) {
  training.validate();
  std::vector<WordPair> negatives = training.negatives;
  bool sampled = false;
  if (negatives.empty()) {
    std::set<WordPair> own(training.positives.begin(), training.positives.end());
    std::vector<WordPair> pool;
    for (const auto& p : negative_pool) {
      if (!own.count(p)) pool.push_back(p);
    }
    std::sort(pool.begin(), pool.end());
    pool.erase(std::unique(pool.begin(), pool.end()), pool.end());
    std::mt19937_64 rng(options.seed ^ std::hash<std::string>{}(training.relation));
    std::shuffle(pool.begin(), pool.end(), rng);
    pool.resize(std::min(pool.size(), options.sampled_negatives));
    negatives = std::move(pool);
    sampled = true;
  }

  Rows positives = augment_pairs(training.positives, table, options.lookup);
  Rows rows = positives;
  Rows negative_rows = augment_pairs(negatives, table, options.lookup);
  rows.insert(rows.end(), negative_rows.begin(), negative_rows.end());
  Labels labels(positives.size(), 1);
  labels.resize(rows.size(), 0);

  RelationModel model = fit_relation(training.relation, table.dimension(), rows, labels, options);
  model.metadata.sampled_negatives = sampled;
  fit_role_model(model, positives, options);
  return model;
}

RelationModelSet train_relations(const std::vector<RelationTrainingSet>& sets,
                                 const EmbeddingTable& table, const RelationTrainingOptions& options,
                                 std::size_t jobs) {
  if (sets.empty()) throw InputError("no relation training sets");
  std::vector<RelationTrainingSet> all;
  for (const auto& s : sets) {
    all.push_back(s);
    all.push_back(make_converse(s));
  }
  RelationModelSet out;
  out.word_dimension = table.dimension();
  out.models.resize(all.size());
  parallel_for(all.size(), jobs, [&](std::size_t i) {
    std::vector<WordPair> pool;
    for (std::size_t j = 0; j < all.size(); ++j) {
      // A relation's converse is not a negative for it.
      if (j == i || j / 2 == i / 2) continue;
      pool.insert(pool.end(), all[j].positives.begin(), all[j].positives.end());
    }
    out.models[i] = train_relation(all[i], table, options, pool);
  });
  return out;
}

std::vector<RelationTrainingSet> read_training_sets(std::istream& in) {
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw InputError(std::string("cannot parse training file: ") + e.what());
  }
  if (!j.is_array()) throw InputError("training file must be a JSON array");
  std::vector<RelationTrainingSet> sets;
  auto read_pairs = [](const json& arr) {
    std::vector<WordPair> pairs;
    for (const auto& p : arr) {
      if (!p.is_array() || p.size() != 2) throw InputError("word pairs must be [w1, w2]");
      pairs.emplace_back(p[0].get<std::string>(), p[1].get<std::string>());
    }
    return pairs;
  };
  try {
    for (const auto& entry : j) {
      RelationTrainingSet s;
      s.relation = entry.at("relation").get<std::string>();
      s.positives = read_pairs(entry.at("positives"));
      if (entry.contains("negatives")) s.negatives = read_pairs(entry.at("negatives"));
      s.validate();
      sets.push_back(std::move(s));
    }
  } catch (const json::exception& e) {
    throw InputError(std::string("malformed training file: ") + e.what());
  }
  if (sets.empty()) throw InputError("training file contains no relations");
  return sets;
}

void write_model_set(std::ostream& out, const RelationModelSet& set) {
  json models = json::array();
  for (const auto& m : set.models) {
    models.push_back(json{
        {"name", m.name},
        {"selected", m.selected},
        {"relation", posterior_to_json(m.relation)},
        {"role_positions", m.role_positions},
        {"role_weights", m.role_weights},
        {"role", posterior_to_json(m.role)},
        {"metadata",
         {{"l1", m.metadata.l1},
          {"l2", m.metadata.l2},
          {"prior_precision", m.metadata.prior_precision},
          {"positives", m.metadata.positives},
          {"negatives", m.metadata.negatives},
          {"sampled_negatives", m.metadata.sampled_negatives}}},
    });
  }
  json j{{"format", "pam-relation-models"},
         {"version", RelationModelSet::kFormatVersion},
         {"word_dimension", set.word_dimension},
         {"models", models}};
  out << j.dump() << '\n';
}

RelationModelSet read_model_set(std::istream& in) {
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw InputError(std::string("cannot parse model store: ") + e.what());
  }
  RelationModelSet set;
  try {
    if (!j.contains("version")) throw InputError("model store has no version field");
    const int version = j.at("version").get<int>();
    if (version != RelationModelSet::kFormatVersion) {
      throw InputError("unsupported model store version " + std::to_string(version));
    }
    set.word_dimension = j.at("word_dimension").get<std::size_t>();
    for (const auto& e : j.at("models")) {
      RelationModel m;
      m.name = e.at("name").get<std::string>();
      m.word_dimension = set.word_dimension;
      m.selected = e.at("selected").get<std::vector<std::size_t>>();
      m.relation = posterior_from_json(e.at("relation"));
      m.role_positions = e.at("role_positions").get<std::vector<std::size_t>>();
      m.role_weights = e.at("role_weights").get<Vector>();
      m.role = posterior_from_json(e.at("role"));
      const auto& md = e.at("metadata");
      m.metadata.l1 = md.at("l1").get<double>();
      m.metadata.l2 = md.at("l2").get<double>();
      m.metadata.prior_precision = md.at("prior_precision").get<double>();
      m.metadata.positives = md.at("positives").get<std::size_t>();
      m.metadata.negatives = md.at("negatives").get<std::size_t>();
      m.metadata.sampled_negatives = md.at("sampled_negatives").get<bool>();
      if (m.selected.empty()) throw InputError("model '" + m.name + "' has no selected features");
      if (m.relation.mean.size() != m.selected.size() + 1 ||
          m.role.mean.size() != m.role_positions.size() + 1 ||
          m.role_weights.size() != m.role_positions.size()) {
        throw InputError("model '" + m.name + "' has inconsistent parameter lengths");
      }
      for (std::size_t k : m.selected) {
        if (k >= 4 * set.word_dimension) throw InputError("model '" + m.name + "' selects an out-of-range feature");
      }
      for (std::size_t k : m.role_positions) {
        if (k >= 2 * set.word_dimension) throw InputError("model '" + m.name + "' has an out-of-range role position");
      }
      set.models.push_back(std::move(m));
    }
  } catch (const json::exception& e) {
    throw InputError(std::string("malformed model store: ") + e.what());
  }
  return set;
}

}  // namespace pam
