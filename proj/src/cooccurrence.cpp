#include "doris/cooccurrence.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <unordered_set>

#include "doris/annotator.hpp"

namespace doris {

CooccurrenceStats CooccurrenceStats::build(std::span<const Sentence> sentences,
                                           const StopwordList& stopwords) {
  CooccurrenceStats stats;
  stats.sentenceCount_ = sentences.size();
  std::vector<TermId> present;
  for (const auto& sentence : sentences) {
    present.clear();
    for (const auto& token : sentence.tokens) {
      if (stopwords.contains(token)) continue;
      auto it = stats.ids_.find(token);
      TermId id;
      if (it == stats.ids_.end()) {
        id = static_cast<TermId>(stats.terms_.size());
        stats.terms_.push_back(token);
        stats.ids_.emplace(token, id);
        stats.termCount_.push_back(0);
        stats.partners_.emplace_back();
      } else {
        id = it->second;
      }
      present.push_back(id);
    }
    std::sort(present.begin(), present.end());
    present.erase(std::unique(present.begin(), present.end()), present.end());
    for (std::size_t i = 0; i < present.size(); ++i) {
      ++stats.termCount_[present[i]];
      for (std::size_t j = i + 1; j < present.size(); ++j) {
        ++stats.partners_[present[i]][present[j]];
        ++stats.partners_[present[j]][present[i]];
      }
    }
  }
  return stats;
}

std::size_t CooccurrenceStats::termSentenceCount(std::string_view term) const {
  auto it = ids_.find(term);
  return it == ids_.end() ? 0 : termCount_[it->second];
}

std::size_t CooccurrenceStats::pairSentenceCount(std::string_view a, std::string_view b) const {
  auto ia = ids_.find(a);
  auto ib = ids_.find(b);
  if (ia == ids_.end() || ib == ids_.end()) return 0;
  if (ia->second == ib->second) return termCount_[ia->second];
  const auto& partners = partners_[ia->second];
  auto it = partners.find(ib->second);
  return it == partners.end() ? 0 : it->second;
}

namespace {

double pmiFromCounts(std::size_t pair, std::size_t countA, std::size_t countB, std::size_t n) {
  if (pair == 0) return kNoCooccurrence;
  const double ratio = (static_cast<double>(pair) * static_cast<double>(n)) /
                       (static_cast<double>(countA) * static_cast<double>(countB));
  return std::log(ratio);
}

void sortAndTrim(std::vector<ScoredToken>& candidates, std::size_t topN) {
  std::sort(candidates.begin(), candidates.end(), [](const auto& a, const auto& b) {
    if (a.count != b.count) return a.count > b.count;
    if (a.score != b.score) return a.score > b.score;
    return a.token < b.token;
  });
  if (candidates.size() > topN) candidates.resize(topN);
}

}  // namespace

double pmi(const CooccurrenceStats& stats, std::string_view a, std::string_view b) {
  const std::size_t ca = stats.termSentenceCount(a);
  const std::size_t cb = stats.termSentenceCount(b);
  if (ca == 0 || cb == 0) {
    const std::string unknown(ca == 0 ? a : b);
    throw ExpansionError(ExpansionError::Code::UnknownTerm, "term '" + unknown + "' never occurs",
                         unknown);
  }
  return pmiFromCounts(stats.pairSentenceCount(a, b), ca, cb, stats.sentenceCount());
}

std::vector<ScoredToken> cooccurCandidates(const CooccurrenceStats& stats,
                                           const KeywordRule& rule,
                                           const ExpansionConfig& cfg,
                                           std::span<const Sentence> sentences) {
  std::vector<ScoredToken> candidates;
  if (rule.polarity != Polarity::Positive || stats.sentenceCount() == 0) return candidates;
  const std::size_t n = stats.sentenceCount();

  if (rule.tokens.size() == 1) {
    const auto& seed = rule.tokens.front();
    const std::size_t seedCount = stats.termSentenceCount(seed);
    if (seedCount == 0) return candidates;
    stats.forEachPartner(seed, [&](const std::string& partner, std::size_t joint) {
      if (joint < cfg.cooccurMinCount) return;
      const double score =
          pmiFromCounts(joint, seedCount, stats.termSentenceCount(partner), n);
      if (score >= cfg.cooccurMinPmi) candidates.push_back({partner, score, joint});
    });
  } else {
    std::size_t ruleCount = 0;
    std::unordered_map<std::string_view, std::size_t> joint;
    std::unordered_set<std::string_view> seen;
    for (const auto& sentence : sentences) {
      if (!sentenceMatches(sentence, rule)) continue;
      ++ruleCount;
      seen.clear();
      for (const auto& token : sentence.tokens) {
        if (stats.contains(token) && seen.insert(token).second) ++joint[token];
      }
    }
    if (ruleCount == 0) return candidates;
    const std::set<std::string_view> own(rule.tokens.begin(), rule.tokens.end());
    for (const auto& [token, count] : joint) {
      if (own.contains(token) || count < cfg.cooccurMinCount) continue;
      const double score = pmiFromCounts(count, ruleCount, stats.termSentenceCount(token), n);
      if (score >= cfg.cooccurMinPmi) candidates.push_back({std::string(token), score, count});
    }
  }
  sortAndTrim(candidates, cfg.cooccurTopN);
  return candidates;
}

}  // namespace doris
