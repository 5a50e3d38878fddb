#include "doris/taxonomy.hpp"

#include <algorithm>
#include <fstream>

#include "doris/textprep.hpp"

namespace doris {

using Code = TaxonomyError::Code;

std::string_view toString(MatchMode mode) {
  return mode == MatchMode::ExactPhrase ? "exact" : "all";
}

std::string_view toString(Polarity polarity) {
  return polarity == Polarity::Positive ? "positive" : "negative";
}

std::string_view toString(RuleSource source) {
  switch (source) {
    case RuleSource::Seed: return "seed";
    case RuleSource::Cooccurrence: return "cooccurrence";
    case RuleSource::Embedding: return "embedding";
    case RuleSource::Lda: return "lda";
  }
  return "?";
}

double defaultWeight(RuleSource source) {
  switch (source) {
    case RuleSource::Seed: return 1.0;
    case RuleSource::Embedding: return 0.7;
    case RuleSource::Cooccurrence:
    case RuleSource::Lda: return 0.5;
  }
  return 1.0;
}

KeywordRule KeywordRule::fromKeyword(std::string_view keyword, Polarity polarity,
                                     RuleSource source) {
  KeywordRule rule;
  rule.tokens = tokenize(keyword);
  if (rule.tokens.empty()) {
    throw TaxonomyError(Code::InvalidKeyword,
                        "keyword '" + std::string(keyword) + "' contains no tokens",
                        std::string(keyword));
  }
  const bool quoted = keyword.find('"') != std::string_view::npos;
  rule.mode = (quoted || rule.tokens.size() == 1) ? MatchMode::ExactPhrase
                                                  : MatchMode::AllTokensInSentence;
  rule.polarity = polarity;
  rule.source = source;
  rule.weight = defaultWeight(source);
  return rule;
}

KeywordRule KeywordRule::singleToken(std::string token, RuleSource source) {
  KeywordRule rule;
  rule.tokens.push_back(std::move(token));
  rule.source = source;
  rule.weight = defaultWeight(source);
  return rule;
}

std::string KeywordRule::keyword() const {
  std::string joined;
  for (const auto& t : tokens) {
    if (!joined.empty()) joined.push_back(' ');
    joined += t;
  }
  if (mode == MatchMode::ExactPhrase && tokens.size() > 1) return '"' + joined + '"';
  return joined;
}

bool ruleOrder(const KeywordRule& a, const KeywordRule& b) {
  if (a.tokens != b.tokens) return a.tokens < b.tokens;
  if (a.polarity != b.polarity) return a.polarity < b.polarity;
  return a.mode < b.mode;
}

namespace {

// Among rules with the same key, the higher weight wins; on equal weight
// the earlier source (seed first).
bool preferred(const KeywordRule& candidate, const KeywordRule& incumbent) {
  if (candidate.weight != incumbent.weight) return candidate.weight > incumbent.weight;
  return candidate.source < incumbent.source;
}

const nlohmann::json& requireField(const nlohmann::json& obj, const char* name,
                                   const std::string& where) {
  auto it = obj.find(name);
  if (it == obj.end()) {
    throw TaxonomyError(Code::MalformedFile, where + ": missing field '" + name + "'", where);
  }
  return *it;
}

std::vector<std::string> stringList(const nlohmann::json& value, const std::string& where) {
  if (!value.is_array()) {
    throw TaxonomyError(Code::MalformedFile, where + ": expected an array of strings", where);
  }
  std::vector<std::string> out;
  for (const auto& item : value) {
    if (!item.is_string()) {
      throw TaxonomyError(Code::MalformedFile, where + ": expected an array of strings", where);
    }
    out.push_back(item.get<std::string>());
  }
  return out;
}

template <typename Enum, std::size_t N>
Enum parseEnum(const nlohmann::json& value, const std::array<Enum, N>& options,
               const std::string& where) {
  if (value.is_string()) {
    const auto text = value.get<std::string>();
    for (Enum e : options) {
      if (toString(e) == text) return e;
    }
  }
  throw TaxonomyError(Code::InvalidRule, where + ": unrecognized value " + value.dump(), where);
}

KeywordRule parseRule(const nlohmann::json& obj, const std::string& where) {
  if (!obj.is_object()) {
    throw TaxonomyError(Code::InvalidRule, where + ": rule must be an object", where);
  }
  KeywordRule rule;
  for (const auto& raw : stringList(requireField(obj, "tokens", where), where)) {
    auto tokens = tokenize(raw);
    if (tokens.size() != 1 || tokens.front() != raw) {
      throw TaxonomyError(Code::InvalidRule, where + ": '" + raw + "' is not a single token",
                          where);
    }
    rule.tokens.push_back(raw);
  }
  if (rule.tokens.empty()) {
    throw TaxonomyError(Code::InvalidRule, where + ": rule has no tokens", where);
  }
  rule.mode = parseEnum(requireField(obj, "mode", where),
                        std::array{MatchMode::ExactPhrase, MatchMode::AllTokensInSentence}, where);
  rule.polarity = parseEnum(requireField(obj, "polarity", where),
                            std::array{Polarity::Positive, Polarity::Negative}, where);
  rule.source = parseEnum(requireField(obj, "source", where),
                          std::array{RuleSource::Seed, RuleSource::Cooccurrence,
                                     RuleSource::Embedding, RuleSource::Lda},
                          where);
  rule.weight = defaultWeight(rule.source);
  if (auto it = obj.find("weight"); it != obj.end()) {
    if (!it->is_number()) {
      throw TaxonomyError(Code::InvalidRule, where + ": weight must be a number", where);
    }
    rule.weight = it->get<double>();
  }
  if (!(rule.weight > 0.0 && rule.weight <= 1.0)) {
    throw TaxonomyError(Code::InvalidRule, where + ": weight must lie in (0, 1]", where);
  }
  return rule;
}

}  // namespace

TopicTaxonomy::TopicTaxonomy(std::vector<TopicNode> nodes) : nodes_(std::move(nodes)) {
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    auto& node = nodes_[i];
    if (!isValidId(node.id)) {
      throw TaxonomyError(Code::MalformedFile, "invalid topic id '" + node.id + "'", node.id);
    }
    if (!index_.emplace(node.id, i).second) {
      throw TaxonomyError(Code::DuplicateTopicId, "duplicate topic id " + node.id, node.id);
    }
    std::sort(node.parentIds.begin(), node.parentIds.end());
    node.parentIds.erase(std::unique(node.parentIds.begin(), node.parentIds.end()),
                         node.parentIds.end());
    for (const auto& rule : node.ownRules) {
      if (rule.tokens.empty() || !(rule.weight > 0.0 && rule.weight <= 1.0)) {
        throw TaxonomyError(Code::InvalidRule, "invalid rule on topic " + node.id, node.id);
      }
    }
  }

  children_.assign(nodes_.size(), {});
  for (const auto& node : nodes_) {
    for (const auto& parent : node.parentIds) {
      auto it = index_.find(parent);
      if (it == index_.end()) {
        throw TaxonomyError(Code::UnknownParent,
                            "topic " + node.id + " names unknown parent " + parent, parent);
      }
      children_[it->second].push_back(node.id);
    }
  }
  for (auto& list : children_) std::sort(list.begin(), list.end());

  // Cycle check over parent edges; records the offending path.
  enum class Mark { White, Grey, Black };
  std::vector<Mark> mark(nodes_.size(), Mark::White);
  std::vector<std::size_t> stack;
  std::vector<std::size_t> order;  // parents after all of their children
  auto visit = [&](auto&& self, std::size_t i) -> void {
    mark[i] = Mark::Grey;
    stack.push_back(i);
    for (const auto& child : children_[i]) {
      const std::size_t c = index_.at(child);
      if (mark[c] == Mark::Grey) {
        std::string path;
        auto from = std::find(stack.begin(), stack.end(), c);
        for (auto it = from; it != stack.end(); ++it) path += nodes_[*it].id + " -> ";
        path += nodes_[c].id;
        throw TaxonomyError(Code::CycleDetected, "cycle in topic hierarchy: " + path, path);
      }
      if (mark[c] == Mark::White) self(self, c);
    }
    stack.pop_back();
    mark[i] = Mark::Black;
    order.push_back(i);
  };
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    if (mark[i] == Mark::White) visit(visit, i);
  }

  for (const auto& node : nodes_) {
    const bool leaf = children_[index_.at(node.id)].empty();
    std::size_t seeds = 0;
    std::size_t positiveSeeds = 0;
    bool anyPositive = false;
    for (const auto& rule : node.ownRules) {
      if (rule.source == RuleSource::Seed) {
        ++seeds;
        if (rule.polarity == Polarity::Positive) ++positiveSeeds;
      }
      anyPositive = anyPositive || rule.polarity == Polarity::Positive;
    }
    if (leaf && positiveSeeds == 0) {
      throw TaxonomyError(Code::MissingSeed,
                          "leaf topic " + node.id + " has no positive seed keyword", node.id);
    }
    if (seeds > 16) {
      warnings_.push_back("topic " + node.id + " has " + std::to_string(seeds) +
                          " seed keywords (more than 16)");
    }
    if (!leaf && !node.ownRules.empty() && !anyPositive) {
      warnings_.push_back("topic " + node.id + " adds only negative keywords");
    }
  }

  // `order` lists every child before its parents.
  effective_.assign(nodes_.size(), {});
  for (std::size_t i : order) {
    std::vector<KeywordRule> merged = nodes_[i].ownRules;
    for (const auto& child : children_[i]) {
      const auto& rules = effective_[index_.at(child)];
      merged.insert(merged.end(), rules.begin(), rules.end());
    }
    std::stable_sort(merged.begin(), merged.end(), ruleOrder);
    std::vector<KeywordRule> unique;
    for (auto& rule : merged) {
      if (!unique.empty() && unique.back().sameKey(rule)) {
        if (preferred(rule, unique.back())) unique.back() = std::move(rule);
      } else {
        unique.push_back(std::move(rule));
      }
    }
    effective_[i] = std::move(unique);
  }
}

TopicTaxonomy TopicTaxonomy::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open taxonomy file " + path.string(), path.string());
  auto doc = nlohmann::json::parse(in, nullptr, /*allow_exceptions=*/false);
  if (doc.is_discarded()) {
    throw TaxonomyError(Code::MalformedFile, path.string() + " is not valid JSON", path.string());
  }
  return fromJson(doc);
}

TopicTaxonomy TopicTaxonomy::fromJson(const nlohmann::json& doc) {
  if (!doc.is_object() || !doc.contains("topics") || !doc["topics"].is_array()) {
    throw TaxonomyError(Code::MalformedFile, "taxonomy must be an object with a 'topics' array");
  }
  std::vector<TopicNode> nodes;
  for (const auto& entry : doc["topics"]) {
    if (!entry.is_object()) {
      throw TaxonomyError(Code::MalformedFile, "topic entries must be objects");
    }
    const auto& idValue = requireField(entry, "id", "topic");
    if (!idValue.is_string()) throw TaxonomyError(Code::MalformedFile, "topic id must be a string");
    TopicNode node;
    node.id = idValue.get<std::string>();
    const std::string where = "topic " + node.id;
    node.label = node.id;
    if (auto it = entry.find("label"); it != entry.end()) {
      if (!it->is_string()) throw TaxonomyError(Code::MalformedFile, where + ": label", node.id);
      node.label = it->get<std::string>();
    }
    if (auto it = entry.find("parents"); it != entry.end()) {
      node.parentIds = stringList(*it, where + " parents");
    }
    if (auto it = entry.find("keywords"); it != entry.end()) {
      if (!it->is_object()) {
        throw TaxonomyError(Code::MalformedFile, where + ": keywords must be an object", node.id);
      }
      for (auto [key, polarity] : {std::pair{"positive", Polarity::Positive},
                                   std::pair{"negative", Polarity::Negative}}) {
        if (auto kw = it->find(key); kw != it->end()) {
          for (const auto& keyword : stringList(*kw, where + " keywords")) {
            node.ownRules.push_back(KeywordRule::fromKeyword(keyword, polarity));
          }
        }
      }
    }
    if (auto it = entry.find("rules"); it != entry.end()) {
      if (!it->is_array()) {
        throw TaxonomyError(Code::MalformedFile, where + ": rules must be an array", node.id);
      }
      for (const auto& rule : *it) node.ownRules.push_back(parseRule(rule, where));
    }
    nodes.push_back(std::move(node));
  }
  return TopicTaxonomy(std::move(nodes));
}

nlohmann::ordered_json TopicTaxonomy::toJson() const {
  using nlohmann::ordered_json;
  ordered_json topics = ordered_json::array();
  for (const auto& node : nodes_) {
    ordered_json entry;
    entry["id"] = node.id;
    entry["label"] = node.label;
    entry["parents"] = node.parentIds;
    ordered_json positive = ordered_json::array();
    ordered_json negative = ordered_json::array();
    ordered_json rules = ordered_json::array();
    for (const auto& rule : node.ownRules) {
      // Shorthand only when it reproduces the rule exactly.
      const bool shorthand = rule.source == RuleSource::Seed &&
                             rule.weight == defaultWeight(RuleSource::Seed) &&
                             KeywordRule::fromKeyword(rule.keyword(), rule.polarity) == rule;
      if (shorthand) {
        (rule.polarity == Polarity::Positive ? positive : negative).push_back(rule.keyword());
        continue;
      }
      ordered_json r;
      r["tokens"] = rule.tokens;
      r["mode"] = toString(rule.mode);
      r["polarity"] = toString(rule.polarity);
      r["source"] = toString(rule.source);
      r["weight"] = rule.weight;
      rules.push_back(std::move(r));
    }
    entry["keywords"] = {{"positive", positive}, {"negative", negative}};
    if (!rules.empty()) entry["rules"] = std::move(rules);
    topics.push_back(std::move(entry));
  }
  ordered_json doc;
  doc["topics"] = std::move(topics);
  return doc;
}

bool TopicTaxonomy::contains(std::string_view id) const {
  return index_.find(std::string(id)) != index_.end();
}

std::size_t TopicTaxonomy::indexOf(std::string_view id) const {
  auto it = index_.find(std::string(id));
  if (it == index_.end()) {
    throw TaxonomyError(Code::UnknownTopic, "unknown topic " + std::string(id), std::string(id));
  }
  return it->second;
}

const TopicNode& TopicTaxonomy::node(std::string_view id) const { return nodes_[indexOf(id)]; }

std::vector<std::string> TopicTaxonomy::roots() const {
  std::vector<std::string> out;
  for (const auto& node : nodes_) {
    if (node.parentIds.empty()) out.push_back(node.id);
  }
  std::sort(out.begin(), out.end());
  return out;
}

const std::vector<std::string>& TopicTaxonomy::children(std::string_view id) const {
  return children_[indexOf(id)];
}

std::set<std::string> TopicTaxonomy::descendants(std::string_view id) const {
  std::set<std::string> out;
  std::vector<std::size_t> frontier{indexOf(id)};
  while (!frontier.empty()) {
    const std::size_t i = frontier.back();
    frontier.pop_back();
    for (const auto& child : children_[i]) {
      if (out.insert(child).second) frontier.push_back(index_.at(child));
    }
  }
  return out;
}

std::set<std::string> TopicTaxonomy::ancestors(std::string_view id) const {
  std::set<std::string> out;
  std::vector<std::size_t> frontier{indexOf(id)};
  while (!frontier.empty()) {
    const std::size_t i = frontier.back();
    frontier.pop_back();
    for (const auto& parent : nodes_[i].parentIds) {
      if (out.insert(parent).second) frontier.push_back(index_.at(parent));
    }
  }
  return out;
}

const std::vector<KeywordRule>& TopicTaxonomy::effectiveRules(std::string_view id) const {
  return effective_[indexOf(id)];
}

}  // namespace doris
