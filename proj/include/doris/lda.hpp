#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "doris/expansion_config.hpp"
#include "doris/taxonomy.hpp"
#include "doris/textprep.hpp"
#include "json.hpp"

namespace doris {

/// Posterior-mean estimates from a collapsed Gibbs run. Both matrices are
/// row-major and row-stochastic.
struct LdaModel {
  std::size_t topics = 0;
  double alpha = 0.0;
  double beta = 0.0;
  std::vector<std::string> vocabulary;      // sorted
  std::vector<double> topicWord;            // topics x vocabulary
  std::vector<double> docTopic;             // documents x topics
  std::vector<std::size_t> documentIndex;   // input position of each modelled document
  std::uint64_t seed = 0;
  std::size_t iterations = 0;

  std::size_t vocabularySize() const { return vocabulary.size(); }
  std::size_t documentCount() const { return documentIndex.size(); }
  std::span<const double> topicRow(std::size_t k) const {
    return {topicWord.data() + k * vocabulary.size(), vocabulary.size()};
  }
  std::span<const double> documentRow(std::size_t d) const {
    return {docTopic.data() + d * topics, topics};
  }
};

/// Trains LDA over bags of tokens. The vocabulary is every non-stopword
/// token with corpus frequency >= cfg.ldaMinTokenFrequency; documents left
/// empty after filtering are dropped. Deterministic for a given
/// (docs, cfg, stopwords). Throws ExpansionError(InvalidK) for K < 2 and
/// ExpansionError(EmptyVocabulary) when nothing survives filtering.
LdaModel trainLda(std::span<const std::vector<std::string>> docs, const ExpansionConfig& cfg,
                  const StopwordList& stopwords = StopwordList::english());

/// The `n` most probable words of topic `k`, ties by token. Throws
/// ExpansionError(IndexOutOfRange).
std::vector<std::string> topWords(const LdaModel& model, std::size_t k, std::size_t n);

/// Manual LDA-topic assignments: a topic id pins the mapping, nullopt
/// suppresses it. File form: `{"7": "security", "12": null}`.
struct LdaOverrides {
  std::map<std::size_t, std::optional<std::string>> entries;

  static LdaOverrides fromJson(const nlohmann::json& doc);
  static LdaOverrides load(const std::filesystem::path& path);
};

/// Maps LDA topics onto taxonomy topics. LDA topic k goes to taxonomy topic
/// T when at least `ldaMatchMinOverlap` of its top `ldaMatchTopWords` words
/// are tokens of T's positive effective rules. Among qualifying topics the
/// largest overlap wins, then the smallest positive vocabulary (the most
/// specific topic, since ancestors inherit every descendant token), then
/// the smallest id. Overrides are applied last.
std::map<std::size_t, std::string> matchLdaTopics(const LdaModel& model,
                                                  const TopicTaxonomy& taxonomy,
                                                  const LdaOverrides& overrides,
                                                  const ExpansionConfig& cfg = {});

}  // namespace doris
