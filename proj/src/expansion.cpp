#include "doris/expansion.hpp"

#include <algorithm>
#include <set>

#include "doris/cooccurrence.hpp"

namespace doris {

void ExpansionConfig::validate() const {
  auto fail = [](const std::string& what) {
    throw ExpansionError(ExpansionError::Code::InvalidConfig, what, what);
  };
  if (cooccurMinCount == 0) fail("cooccurMinCount must be positive");
  if (cooccurTopN == 0) fail("cooccurTopN must be positive");
  if (!(embedThreshold >= -1.0 && embedThreshold <= 1.0)) fail("embedThreshold must lie in [-1, 1]");
  if (embedTopN == 0) fail("embedTopN must be positive");
  if (ldaK < 2) throw ExpansionError(ExpansionError::Code::InvalidK, "ldaK must be at least 2");
  if (ldaIterations == 0) fail("ldaIterations must be positive");
  if (ldaAlpha && !(*ldaAlpha > 0.0)) fail("ldaAlpha must be positive");
  if (!(ldaBeta > 0.0)) fail("ldaBeta must be positive");
  if (ldaMinTokenFrequency == 0) fail("ldaMinTokenFrequency must be positive");
  if (ldaTopWordsImported == 0) fail("ldaTopWordsImported must be positive");
  if (ldaMatchTopWords == 0) fail("ldaMatchTopWords must be positive");
  if (ldaMatchMinOverlap == 0) fail("ldaMatchMinOverlap must be positive");
}

namespace {

bool isSingleToken(const std::string& token) {
  auto tokens = tokenize(token);
  return tokens.size() == 1 && tokens.front() == token;
}

}  // namespace

ExpansionResult expandTaxonomy(const TopicTaxonomy& taxonomy, std::span<const Document> corpus,
                               const EmbeddingTable* embeddings, const ExpansionConfig& cfg,
                               const LdaOverrides& overrides, const StopwordList& stopwords) {
  cfg.validate();

  std::vector<Sentence> sentences;
  std::vector<std::vector<std::string>> bags;
  for (const auto& doc : corpus) {
    auto docSentences = splitSentences(doc);
    std::vector<std::string> bag;
    for (const auto& s : docSentences) bag.insert(bag.end(), s.tokens.begin(), s.tokens.end());
    bags.push_back(std::move(bag));
    std::move(docSentences.begin(), docSentences.end(), std::back_inserter(sentences));
  }
  const auto stats = CooccurrenceStats::build(sentences, stopwords);
  const auto model = trainLda(bags, cfg, stopwords);

  ExpansionResult result;
  result.ldaMapping = matchLdaTopics(model, taxonomy, overrides, cfg);
  std::map<std::string, std::vector<std::size_t>> ldaByTopic;
  for (const auto& [k, topic] : result.ldaMapping) ldaByTopic[topic].push_back(k);

  std::vector<TopicNode> nodes = taxonomy.nodes();
  for (auto& node : nodes) {
    std::set<std::vector<std::string>> blocked;
    for (const auto& rule : taxonomy.effectiveRules(node.id)) {
      if (rule.polarity == Polarity::Negative) blocked.insert(rule.tokens);
    }
    auto add = [&](const std::string& token, RuleSource source, std::size_t& counter) {
      if (!isSingleToken(token) || blocked.contains({token})) return;
      auto rule = KeywordRule::singleToken(token, source);
      const bool present = std::any_of(node.ownRules.begin(), node.ownRules.end(),
                                       [&](const KeywordRule& r) { return r.sameKey(rule); });
      if (present) return;
      node.ownRules.push_back(std::move(rule));
      ++counter;
    };

    std::vector<KeywordRule> seeds;
    for (const auto& rule : node.ownRules) {
      if (rule.source == RuleSource::Seed && rule.polarity == Polarity::Positive) {
        seeds.push_back(rule);
      }
    }
    for (const auto& seed : seeds) {
      for (const auto& c : cooccurCandidates(stats, seed, cfg, sentences)) {
        add(c.token, RuleSource::Cooccurrence, result.addedCooccurrence);
      }
    }
    if (embeddings != nullptr) {
      for (const auto& seed : seeds) {
        if (seed.tokens.size() != 1 || !embeddings->contains(seed.tokens.front())) continue;
        for (const auto& c : embeddingNeighbors(*embeddings, seed.tokens.front(), cfg)) {
          add(c.token, RuleSource::Embedding, result.addedEmbedding);
        }
      }
    }
    if (auto it = ldaByTopic.find(node.id); it != ldaByTopic.end()) {
      for (std::size_t k : it->second) {
        for (const auto& word : topWords(model, k, cfg.ldaTopWordsImported)) {
          add(word, RuleSource::Lda, result.addedLda);
        }
      }
    }
  }
  result.taxonomy = TopicTaxonomy(std::move(nodes));
  return result;
}

}  // namespace doris
