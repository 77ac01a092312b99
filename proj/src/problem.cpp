#include "pam/problem.hpp"

#include <array>
#include <charconv>
#include <json.hpp>

#include "pam/error.hpp"

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

AnalogSpec parse_analog(const json& j) {
  AnalogSpec a;
  if (!j.is_object()) throw InputError("analog must be an object");
  if (j.contains("id")) a.id = j.at("id").get<std::string>();
  a.concepts = j.at("concepts").get<std::vector<std::string>>();
  if (a.concepts.empty()) throw InputError("analog '" + a.id + "' has no concepts");
  if (j.contains("edges")) {
    EdgeSpec spec;
    for (const auto& e : j.at("edges")) {
      spec.add(e.at("from").get<std::string>(), e.at("to").get<std::string>(), e.value("directed", false));
    }
    a.edges = std::move(spec);
  }
  if (j.contains("nvn")) {
    for (const auto& t : j.at("nvn")) {
      if (!t.is_array() || t.size() != 3) throw InputError("nvn entries must be [subject, verb, object]");
      a.nvn.emplace_back(t[0].get<std::string>(), t[1].get<std::string>(), t[2].get<std::string>());
    }
  }
  if (j.contains("attribute_overrides")) {
    a.aliases = j.at("attribute_overrides").get<std::map<std::string, std::string>>();
  }
  if (j.contains("attention")) {
    const auto& att = j.at("attention");
    if (att.contains("nodes")) a.node_attention = att.at("nodes").get<std::map<std::string, double>>();
    if (att.contains("edges")) {
      for (const auto& e : att.at("edges")) {
        a.edge_attention.push_back(
            {e.at("from").get<std::string>(), e.at("to").get<std::string>(), e.at("weight").get<double>()});
      }
    }
  }
  return a;
}

MappingParams parse_params(const json& j, MappingParams p) {
  if (j.contains("alpha")) p.alpha = j.at("alpha").get<double>();
  if (j.contains("beta0")) p.beta0 = j.at("beta0").get<double>();
  if (j.contains("iterations")) p.iterations = j.at("iterations").get<int>();
  if (j.contains("power")) p.power = j.at("power").get<double>();
  if (j.contains("variant")) p.variant = parse_variant(j.at("variant").get<std::string>());
  if (j.contains("compatibility")) p.compatibility = parse_compatibility(j.at("compatibility").get<std::string>());
  if (j.contains("slack")) p.slack = j.at("slack").get<bool>();
  if (!(p.alpha >= 0)) throw InputError("alpha must be nonnegative");
  if (!(p.beta0 > 0)) throw InputError("beta0 must be positive");
  if (p.iterations < 1) throw InputError("iterations must be at least 1");
  if (!(p.power > 0)) throw InputError("power must be positive");
  return p;
}

}  // namespace

EdgeSpec AnalogSpec::effective_edges() const {
  EdgeSpec spec = edges ? *edges : EdgeSpec::complete(concepts);
  for (const auto& [s, v, o] : nvn) spec.add_nvn(s, v, o);
  return spec;
}

PamOptions MappingParams::pam() const {
  PamOptions o;
  o.alpha = alpha;
  o.beta0 = beta0;
  o.iterations = iterations;
  o.compatibility = compatibility;
  o.slack = slack;
  return o;
}

Compatibility parse_compatibility(const std::string& tag) {
  if (tag == "symmetric") return Compatibility::Symmetric;
  if (tag == "outgoing") return Compatibility::Outgoing;
  throw InputError("unknown compatibility '" + tag + "' (expected symmetric or outgoing)");
}

Problem read_problem(std::istream& in, const MappingParams& defaults) {
  const json j = parse_json(in, "problem file");
  Problem p;
  try {
    p.source = parse_analog(j.at("source"));
    p.target = parse_analog(j.at("target"));
    if (p.source.id.empty()) p.source.id = "source";
    if (p.target.id.empty()) p.target.id = "target";
    p.params = parse_params(j.value("params", json::object()), defaults);
    if (j.contains("expected")) {
      for (const auto& e : j.at("expected")) {
        p.expected.emplace_back(e.at(0).get<std::string>(), e.at(1).get<std::string>());
      }
    }
  } catch (const json::exception& e) {
    throw InputError(std::string("malformed problem file: ") + e.what());
  }
  return p;
}

Corpus read_corpus(std::istream& in, const MappingParams& defaults) {
  const json j = parse_json(in, "corpus file");
  Corpus c;
  try {
    c.params = parse_params(j.value("params", json::object()), defaults);
    if (j.contains("problems")) {
      for (const auto& p : j.at("problems")) {
        const std::string id = p.at("id").get<std::string>();
        AnalogSpec s = parse_analog(p.at("source"));
        AnalogSpec t = parse_analog(p.at("target"));
        s.id = t.id = id;
        c.sources.push_back(std::move(s));
        c.targets.push_back(std::move(t));
        c.expected[id] = id;
      }
    } else {
      for (const auto& s : j.at("sources")) c.sources.push_back(parse_analog(s));
      for (const auto& t : j.at("targets")) c.targets.push_back(parse_analog(t));
      if (j.contains("expected")) c.expected = j.at("expected").get<std::map<std::string, std::string>>();
    }
  } catch (const json::exception& e) {
    throw InputError(std::string("malformed corpus file: ") + e.what());
  }
  for (const auto* list : {&c.sources, &c.targets}) {
    for (const auto& a : *list) {
      if (a.id.empty()) throw InputError("every corpus analog needs an id");
    }
  }
  if (c.sources.empty()) throw InputError("corpus has no source analogs");
  return c;
}

SemanticRelationNetwork build_analog(const AnalogSpec& spec, const EmbeddingTable& table,
                                     const RelationProvider& provider, const LookupOptions& lookup) {
  BuildOptions options;
  options.aliases = spec.aliases;
  options.lookup = lookup;
  const EdgeSpec edges = spec.effective_edges();
  SemanticRelationNetwork net = build_network(spec.concepts, &edges, table, provider, options);
  auto index = [&](const std::string& c) {
    auto i = net.node_index(c);
    if (!i) throw InputError("attention names unknown concept '" + c + "' in analog '" + spec.id + "'");
    return *i;
  };
  for (const auto& [c, w] : spec.node_attention) net.set_node_attention(index(c), w);
  for (const auto& e : spec.edge_attention) net.set_edge_attention(index(e.from), index(e.to), e.weight);
  return net;
}

std::string format_double(double v) {
  std::array<char, 32> buf;
  auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  return std::string(buf.data(), end);
}

void write_mapping_json(std::ostream& out, const MappingResult& result, const SemanticRelationNetwork& source,
                        const SemanticRelationNetwork& target) {
  json pairs = json::array();
  for (std::size_t i = 0; i < result.hard.size(); ++i) {
    if (result.hard[i] == kUnmapped) {
      pairs.push_back({{"source", source.nodes()[i].token}, {"target", nullptr}});
    } else {
      pairs.push_back({{"source", source.nodes()[i].token},
                       {"target", target.nodes()[result.hard[i]].token},
                       {"probability", result.soft(i, result.hard[i])}});
    }
  }
  json soft = json::array();
  for (std::size_t i = 0; i < result.soft.rows(); ++i) {
    soft.push_back(std::vector<double>(result.soft.row(i).begin(), result.soft.row(i).end()));
  }
  std::vector<std::string> s_names, t_names;
  for (const auto& n : source.nodes()) s_names.push_back(n.token);
  for (const auto& n : target.nodes()) t_names.push_back(n.token);
  json j{{"source_concepts", s_names},
         {"target_concepts", t_names},
         {"mapping", pairs},
         {"g_score", result.g_score},
         {"soft", soft},
         {"energy_trace", result.energy_trace},
         {"params",
          {{"alpha", result.options.alpha},
           {"beta0", result.options.beta0},
           {"iterations", result.options.iterations},
           {"slack", result.options.slack},
           {"final_beta", result.final_beta}}}};
  out << j.dump(2) << '\n';
}

void write_soft_csv(std::ostream& out, const Matrix& soft, const SemanticRelationNetwork& source,
                    const SemanticRelationNetwork& target) {
  out << "source";
  for (const auto& n : target.nodes()) out << ',' << n.token;
  out << '\n';
  for (std::size_t i = 0; i < soft.rows(); ++i) {
    out << source.nodes()[i].token;
    for (double v : soft.row(i)) out << ',' << format_double(v);
    out << '\n';
  }
}

}  // namespace pam
