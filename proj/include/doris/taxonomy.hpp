#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <set>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "doris/error.hpp"
#include "json.hpp"

namespace doris {

enum class MatchMode : std::uint8_t { ExactPhrase, AllTokensInSentence };
enum class Polarity : std::uint8_t { Positive, Negative };
enum class RuleSource : std::uint8_t { Seed, Cooccurrence, Embedding, Lda };

std::string_view toString(MatchMode mode);
std::string_view toString(Polarity polarity);
std::string_view toString(RuleSource source);

/// Seed 1.0, Embedding 0.7, Cooccurrence and Lda 0.5.
double defaultWeight(RuleSource source);

struct KeywordRule {
  std::vector<std::string> tokens;
  MatchMode mode = MatchMode::ExactPhrase;
  Polarity polarity = Polarity::Positive;
  RuleSource source = RuleSource::Seed;
  double weight = 1.0;

  /// Interprets a keyword string from the taxonomy file: any `"` makes it an
  /// exact phrase, otherwise multiple words form a bag of words and a single
  /// word is an exact match. Throws TaxonomyError(InvalidKeyword) when the
  /// keyword has no tokens.
  static KeywordRule fromKeyword(std::string_view keyword, Polarity polarity,
                                 RuleSource source = RuleSource::Seed);

  /// Single-token exact positive rule with the source's default weight.
  static KeywordRule singleToken(std::string token, RuleSource source);

  /// The keyword string `fromKeyword` would turn back into this rule.
  std::string keyword() const;

  /// Identity used for de-duplication: tokens, mode and polarity.
  bool sameKey(const KeywordRule& other) const {
    return tokens == other.tokens && mode == other.mode && polarity == other.polarity;
  }

  bool operator==(const KeywordRule&) const = default;
};

/// Effective-rule order: tokens lexicographically, positives before
/// negatives, exact phrases before bags of words.
bool ruleOrder(const KeywordRule& a, const KeywordRule& b);

struct TopicNode {
  std::string id;
  std::string label;
  std::vector<std::string> parentIds;  // sorted, unique
  std::vector<KeywordRule> ownRules;
};

class TaxonomyError : public Error {
 public:
  enum class Code {
    MalformedFile,
    DuplicateTopicId,
    UnknownParent,
    CycleDetected,
    UnknownTopic,
    MissingSeed,
    InvalidKeyword,
    InvalidRule,
  };

  TaxonomyError(Code code, std::string message, std::string subject = {})
      : Error(std::move(message), std::move(subject)), code_(code) {}

  Code code() const noexcept { return code_; }

 private:
  Code code_;
};

/// Immutable topic DAG. Keyword rules flow from children to parents: a
/// topic's effective rules are its own plus those of every descendant.
class TopicTaxonomy {
 public:
  TopicTaxonomy() = default;

  /// Validates ids, parent references, acyclicity and leaf seeds.
  explicit TopicTaxonomy(std::vector<TopicNode> nodes);

  static TopicTaxonomy load(const std::filesystem::path& path);
  static TopicTaxonomy fromJson(const nlohmann::json& doc);

  /// File form. Default-weight seed rules are written back as `keywords`,
  /// everything else as explicit `rules` entries.
  nlohmann::ordered_json toJson() const;

  /// Nodes in file order.
  const std::vector<TopicNode>& nodes() const { return nodes_; }
  std::size_t size() const { return nodes_.size(); }
  bool empty() const { return nodes_.empty(); }
  bool contains(std::string_view id) const;

  /// Throws TaxonomyError(UnknownTopic).
  const TopicNode& node(std::string_view id) const;

  std::vector<std::string> roots() const;
  /// Direct children, sorted by id.
  const std::vector<std::string>& children(std::string_view id) const;
  /// Transitive closure of children, excluding `id`.
  std::set<std::string> descendants(std::string_view id) const;
  /// Transitive closure of parents, excluding `id`.
  std::set<std::string> ancestors(std::string_view id) const;

  /// Own rules plus the rules of all descendants, de-duplicated by
  /// (tokens, mode, polarity) keeping the highest weight, in `ruleOrder`.
  const std::vector<KeywordRule>& effectiveRules(std::string_view id) const;

  /// Non-fatal findings from construction (oversized seed lists,
  /// negative-only parents).
  const std::vector<std::string>& warnings() const { return warnings_; }

 private:
  std::size_t indexOf(std::string_view id) const;

  std::vector<TopicNode> nodes_;
  std::unordered_map<std::string, std::size_t> index_;
  std::vector<std::vector<std::string>> children_;
  std::vector<std::vector<KeywordRule>> effective_;
  std::vector<std::string> warnings_;
};

}  // namespace doris
