#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "doris/corpus.hpp"
#include "doris/taxonomy.hpp"
#include "doris/textprep.hpp"

namespace doris {

/// ExactPhrase: the rule tokens occur contiguously. AllTokensInSentence:
/// each rule token occurs somewhere in the sentence.
bool sentenceMatches(std::span<const std::string> tokens, const KeywordRule& rule);
inline bool sentenceMatches(const Sentence& sentence, const KeywordRule& rule) {
  return sentenceMatches(sentence.tokens, rule);
}

inline constexpr double kDefaultMinEvidence = 2.0;

struct TopicEvidence {
  std::string docId;
  std::string topicId;
  double evidence = 0.0;
  std::vector<std::size_t> matchedSentences;

  bool operator==(const TopicEvidence&) const = default;
};

/// Scores documents against a taxonomy.
///
/// Each topic T gets a local score per sentence: zero when any negative
/// rule in T's effective rules matches, otherwise the highest weight among
/// T's own positive rules that match. A topic's sentence contribution is the
/// maximum local score over the topic and all of its descendants, and its
/// evidence is the sum of contributions over sentences. For a leaf this is
/// exactly "veto on any negative, else max positive weight". Since an
/// ancestor maximises over a superset of topics, its evidence is never below
/// a descendant's, so annotations are closed under ancestors.
class Annotator {
 public:
  /// Keeps a reference; `taxonomy` must outlive the annotator.
  explicit Annotator(const TopicTaxonomy& taxonomy);

  std::optional<TopicEvidence> scoreDocument(const Document& doc,
                                             std::span<const Sentence> sentences,
                                             std::string_view topicId,
                                             double minEvidence = kDefaultMinEvidence) const;

  /// Evidence for every topic with at least one contributing sentence, in
  /// topic id order.
  std::vector<TopicEvidence> scoreAllTopics(const Document& doc,
                                            std::span<const Sentence> sentences) const;

  /// One statement per (document, topic) whose evidence reaches
  /// `minEvidence`, sorted by (docId, topicId).
  std::vector<AnnotationStatement> annotateCorpus(std::span<const Document> corpus,
                                                  double minEvidence = kDefaultMinEvidence) const;

 private:
  std::vector<double> sentenceContributions(std::span<const std::string> tokens) const;

  const TopicTaxonomy* taxonomy_;
  std::vector<std::string> ids_;                           // sorted topic ids
  std::vector<std::vector<std::size_t>> subtree_;          // self + descendants
  std::vector<std::vector<const KeywordRule*>> positives_; // own positive rules
  std::vector<std::vector<const KeywordRule*>> vetoes_;    // effective negatives
};

std::optional<TopicEvidence> scoreDocument(const Document& doc,
                                           std::span<const Sentence> sentences,
                                           const TopicTaxonomy& taxonomy,
                                           std::string_view topicId,
                                           double minEvidence = kDefaultMinEvidence);

std::vector<AnnotationStatement> annotateCorpus(std::span<const Document> corpus,
                                                const TopicTaxonomy& taxonomy,
                                                double minEvidence = kDefaultMinEvidence);

}  // namespace doris
