#include "doris/lda.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <numeric>
#include <random>
#include <set>
#include <unordered_map>

namespace doris {

using Code = ExpansionError::Code;

namespace {

// Uniform double in [0, 1) from the top 53 bits; unlike the standard
// distributions this is identical across standard library implementations.
double uniform01(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

}  // namespace

LdaModel trainLda(std::span<const std::vector<std::string>> docs, const ExpansionConfig& cfg,
                  const StopwordList& stopwords) {
  if (cfg.ldaK < 2) {
    throw ExpansionError(Code::InvalidK, "LDA needs at least 2 topics, got " +
                                             std::to_string(cfg.ldaK));
  }
  const std::size_t K = cfg.ldaK;
  const double alpha = cfg.alpha();
  const double beta = cfg.ldaBeta;

  std::unordered_map<std::string_view, std::size_t> frequency;
  for (const auto& doc : docs) {
    for (const auto& token : doc) {
      if (!stopwords.contains(token)) ++frequency[token];
    }
  }
  LdaModel model;
  for (const auto& [token, count] : frequency) {
    if (count >= cfg.ldaMinTokenFrequency) model.vocabulary.emplace_back(token);
  }
  if (model.vocabulary.empty()) {
    throw ExpansionError(Code::EmptyVocabulary, "no token reaches the LDA frequency cutoff");
  }
  std::sort(model.vocabulary.begin(), model.vocabulary.end());
  std::unordered_map<std::string_view, std::uint32_t> wordId;
  for (std::size_t w = 0; w < model.vocabulary.size(); ++w) {
    wordId.emplace(model.vocabulary[w], static_cast<std::uint32_t>(w));
  }
  const std::size_t V = model.vocabulary.size();

  std::vector<std::vector<std::uint32_t>> words;
  for (std::size_t d = 0; d < docs.size(); ++d) {
    std::vector<std::uint32_t> ids;
    for (const auto& token : docs[d]) {
      if (stopwords.contains(token)) continue;
      if (auto it = wordId.find(token); it != wordId.end()) ids.push_back(it->second);
    }
    if (ids.empty()) continue;
    words.push_back(std::move(ids));
    model.documentIndex.push_back(d);
  }
  const std::size_t M = words.size();

  std::mt19937_64 rng(cfg.rngSeed);
  std::vector<std::vector<std::uint32_t>> assignment(M);
  std::vector<std::uint32_t> docTopicCount(M * K, 0);
  std::vector<std::uint32_t> topicWordCount(K * V, 0);
  std::vector<std::uint32_t> topicCount(K, 0);
  for (std::size_t d = 0; d < M; ++d) {
    assignment[d].resize(words[d].size());
    for (std::size_t i = 0; i < words[d].size(); ++i) {
      auto k = static_cast<std::uint32_t>(uniform01(rng) * static_cast<double>(K));
      k = std::min<std::uint32_t>(k, static_cast<std::uint32_t>(K - 1));
      assignment[d][i] = k;
      ++docTopicCount[d * K + k];
      ++topicWordCount[k * V + words[d][i]];
      ++topicCount[k];
    }
  }

  const double vBeta = static_cast<double>(V) * beta;
  std::vector<double> cumulative(K);
  for (std::size_t sweep = 0; sweep < cfg.ldaIterations; ++sweep) {
    for (std::size_t d = 0; d < M; ++d) {
      std::uint32_t* nd = docTopicCount.data() + d * K;
      for (std::size_t i = 0; i < words[d].size(); ++i) {
        const std::uint32_t w = words[d][i];
        std::uint32_t k = assignment[d][i];
        --nd[k];
        --topicWordCount[k * V + w];
        --topicCount[k];

        double total = 0.0;
        for (std::size_t t = 0; t < K; ++t) {
          total += (nd[t] + alpha) * (topicWordCount[t * V + w] + beta) / (topicCount[t] + vBeta);
          cumulative[t] = total;
        }
        const double target = uniform01(rng) * total;
        auto pos = std::upper_bound(cumulative.begin(), cumulative.end(), target);
        k = static_cast<std::uint32_t>(
            std::min<std::size_t>(static_cast<std::size_t>(pos - cumulative.begin()), K - 1));

        assignment[d][i] = k;
        ++nd[k];
        ++topicWordCount[k * V + w];
        ++topicCount[k];
      }
    }
  }

  model.topics = K;
  model.alpha = alpha;
  model.beta = beta;
  model.seed = cfg.rngSeed;
  model.iterations = cfg.ldaIterations;
  model.topicWord.resize(K * V);
  for (std::size_t k = 0; k < K; ++k) {
    const double denom = topicCount[k] + vBeta;
    for (std::size_t w = 0; w < V; ++w) {
      model.topicWord[k * V + w] = (topicWordCount[k * V + w] + beta) / denom;
    }
  }
  model.docTopic.resize(M * K);
  const double kAlpha = static_cast<double>(K) * alpha;
  for (std::size_t d = 0; d < M; ++d) {
    const double denom = static_cast<double>(words[d].size()) + kAlpha;
    for (std::size_t k = 0; k < K; ++k) {
      model.docTopic[d * K + k] = (docTopicCount[d * K + k] + alpha) / denom;
    }
  }
  return model;
}

std::vector<std::string> topWords(const LdaModel& model, std::size_t k, std::size_t n) {
  if (k >= model.topics) {
    throw ExpansionError(Code::IndexOutOfRange,
                         "topic " + std::to_string(k) + " out of range (K=" +
                             std::to_string(model.topics) + ")",
                         std::to_string(k));
  }
  const auto row = model.topicRow(k);
  std::vector<std::size_t> order(row.size());
  std::iota(order.begin(), order.end(), 0);
  n = std::min(n, order.size());
  std::partial_sort(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(n), order.end(),
                    [&](std::size_t a, std::size_t b) {
                      if (row[a] != row[b]) return row[a] > row[b];
                      return model.vocabulary[a] < model.vocabulary[b];
                    });
  std::vector<std::string> out;
  for (std::size_t i = 0; i < n; ++i) out.push_back(model.vocabulary[order[i]]);
  return out;
}

LdaOverrides LdaOverrides::fromJson(const nlohmann::json& doc) {
  if (!doc.is_object()) {
    throw ExpansionError(Code::MalformedOverrides, "override file must be a JSON object");
  }
  LdaOverrides overrides;
  for (const auto& [key, value] : doc.items()) {
    std::size_t index = 0;
    auto [ptr, ec] = std::from_chars(key.data(), key.data() + key.size(), index);
    if (key.empty() || ec != std::errc{} || ptr != key.data() + key.size()) {
      throw ExpansionError(Code::MalformedOverrides, "override key '" + key + "' is not a topic index",
                           key);
    }
    if (value.is_null()) {
      overrides.entries[index] = std::nullopt;
    } else if (value.is_string()) {
      overrides.entries[index] = value.get<std::string>();
    } else {
      throw ExpansionError(Code::MalformedOverrides,
                           "override for " + key + " must be a topic id or null", key);
    }
  }
  return overrides;
}

LdaOverrides LdaOverrides::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open override file " + path.string(), path.string());
  auto doc = nlohmann::json::parse(in, nullptr, /*allow_exceptions=*/false);
  if (doc.is_discarded()) {
    throw ExpansionError(Code::MalformedOverrides, path.string() + " is not valid JSON",
                         path.string());
  }
  return fromJson(doc);
}

std::map<std::size_t, std::string> matchLdaTopics(const LdaModel& model,
                                                  const TopicTaxonomy& taxonomy,
                                                  const LdaOverrides& overrides,
                                                  const ExpansionConfig& cfg) {
  struct Candidate {
    std::string id;
    std::set<std::string> tokens;
  };
  std::vector<Candidate> candidates;
  for (const auto& node : taxonomy.nodes()) {
    Candidate c{node.id, {}};
    for (const auto& rule : taxonomy.effectiveRules(node.id)) {
      if (rule.polarity == Polarity::Positive) c.tokens.insert(rule.tokens.begin(), rule.tokens.end());
    }
    candidates.push_back(std::move(c));
  }

  std::map<std::size_t, std::string> mapping;
  for (std::size_t k = 0; k < model.topics; ++k) {
    const auto top = topWords(model, k, cfg.ldaMatchTopWords);
    const Candidate* best = nullptr;
    std::size_t bestOverlap = 0;
    for (const auto& c : candidates) {
      std::size_t overlap = 0;
      for (const auto& w : top) overlap += c.tokens.contains(w) ? 1 : 0;
      if (overlap < cfg.ldaMatchMinOverlap || overlap == 0) continue;
      const bool better =
          best == nullptr || overlap > bestOverlap ||
          (overlap == bestOverlap &&
           (c.tokens.size() < best->tokens.size() ||
            (c.tokens.size() == best->tokens.size() && c.id < best->id)));
      if (better) {
        best = &c;
        bestOverlap = overlap;
      }
    }
    if (best != nullptr) mapping[k] = best->id;
  }

  for (const auto& [k, target] : overrides.entries) {
    if (k >= model.topics) {
      throw ExpansionError(Code::IndexOutOfRange,
                           "override names LDA topic " + std::to_string(k) + " but K=" +
                               std::to_string(model.topics),
                           std::to_string(k));
    }
    if (!target) {
      mapping.erase(k);
      continue;
    }
    taxonomy.node(*target);  // throws UnknownTopic
    mapping[k] = *target;
  }
  return mapping;
}

}  // namespace doris
