#include "doris/annotator.hpp"

#include <algorithm>
#include <unordered_map>

namespace doris {

bool sentenceMatches(std::span<const std::string> tokens, const KeywordRule& rule) {
  const auto& needle = rule.tokens;
  if (tokens.empty() || needle.empty()) return false;
  if (rule.mode == MatchMode::ExactPhrase) {
    return std::search(tokens.begin(), tokens.end(), needle.begin(), needle.end()) !=
           tokens.end();
  }
  return std::all_of(needle.begin(), needle.end(), [&](const std::string& t) {
    return std::find(tokens.begin(), tokens.end(), t) != tokens.end();
  });
}

Annotator::Annotator(const TopicTaxonomy& taxonomy) : taxonomy_(&taxonomy) {
  for (const auto& node : taxonomy.nodes()) ids_.push_back(node.id);
  std::sort(ids_.begin(), ids_.end());
  std::unordered_map<std::string_view, std::size_t> position;
  for (std::size_t i = 0; i < ids_.size(); ++i) position.emplace(ids_[i], i);

  subtree_.resize(ids_.size());
  positives_.resize(ids_.size());
  vetoes_.resize(ids_.size());
  for (std::size_t i = 0; i < ids_.size(); ++i) {
    const auto& node = taxonomy.node(ids_[i]);
    subtree_[i].push_back(i);
    for (const auto& d : taxonomy.descendants(node.id)) subtree_[i].push_back(position.at(d));
    for (const auto& rule : node.ownRules) {
      if (rule.polarity == Polarity::Positive) positives_[i].push_back(&rule);
    }
    for (const auto& rule : taxonomy.effectiveRules(node.id)) {
      if (rule.polarity == Polarity::Negative) vetoes_[i].push_back(&rule);
    }
  }
}

// Contribution of one sentence to every topic, indexed like `ids_`.
std::vector<double> Annotator::sentenceContributions(std::span<const std::string> tokens) const {
  std::vector<double> local(ids_.size(), 0.0);
  for (std::size_t i = 0; i < ids_.size(); ++i) {
    const bool vetoed = std::any_of(vetoes_[i].begin(), vetoes_[i].end(),
                                    [&](const KeywordRule* r) { return sentenceMatches(tokens, *r); });
    if (vetoed) continue;
    for (const KeywordRule* rule : positives_[i]) {
      if (rule->weight > local[i] && sentenceMatches(tokens, *rule)) local[i] = rule->weight;
    }
  }
  std::vector<double> contribution(ids_.size(), 0.0);
  for (std::size_t i = 0; i < ids_.size(); ++i) {
    for (std::size_t j : subtree_[i]) contribution[i] = std::max(contribution[i], local[j]);
  }
  return contribution;
}

std::vector<TopicEvidence> Annotator::scoreAllTopics(const Document& doc,
                                                     std::span<const Sentence> sentences) const {
  std::vector<TopicEvidence> evidence(ids_.size());
  for (std::size_t i = 0; i < ids_.size(); ++i) {
    evidence[i].docId = doc.id;
    evidence[i].topicId = ids_[i];
  }
  for (const auto& sentence : sentences) {
    const auto contribution = sentenceContributions(sentence.tokens);
    for (std::size_t i = 0; i < ids_.size(); ++i) {
      if (contribution[i] > 0.0) {
        evidence[i].evidence += contribution[i];
        evidence[i].matchedSentences.push_back(sentence.index);
      }
    }
  }
  std::erase_if(evidence, [](const TopicEvidence& e) { return e.matchedSentences.empty(); });
  return evidence;
}

std::optional<TopicEvidence> Annotator::scoreDocument(const Document& doc,
                                                      std::span<const Sentence> sentences,
                                                      std::string_view topicId,
                                                      double minEvidence) const {
  taxonomy_->node(topicId);  // throws UnknownTopic
  for (auto& e : scoreAllTopics(doc, sentences)) {
    if (e.topicId != topicId) continue;
    if (e.evidence >= minEvidence) return std::move(e);
    return std::nullopt;
  }
  return std::nullopt;
}

std::vector<AnnotationStatement> Annotator::annotateCorpus(std::span<const Document> corpus,
                                                           double minEvidence) const {
  std::vector<AnnotationStatement> out;
  for (const auto& doc : corpus) {
    const auto sentences = splitSentences(doc);
    for (const auto& e : scoreAllTopics(doc, sentences)) {
      if (e.evidence >= minEvidence) out.push_back({doc.id, e.topicId, {}});
    }
  }
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
    return std::tie(a.docId, a.topicId) < std::tie(b.docId, b.topicId);
  });
  return out;
}

std::optional<TopicEvidence> scoreDocument(const Document& doc,
                                           std::span<const Sentence> sentences,
                                           const TopicTaxonomy& taxonomy,
                                           std::string_view topicId, double minEvidence) {
  return Annotator(taxonomy).scoreDocument(doc, sentences, topicId, minEvidence);
}

std::vector<AnnotationStatement> annotateCorpus(std::span<const Document> corpus,
                                                const TopicTaxonomy& taxonomy,
                                                double minEvidence) {
  return Annotator(taxonomy).annotateCorpus(corpus, minEvidence);
}

}  // namespace doris
