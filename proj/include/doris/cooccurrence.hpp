#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "doris/expansion_config.hpp"
#include "doris/taxonomy.hpp"
#include "doris/textprep.hpp"

namespace doris {

/// Sentence-level presence counts. A token counts once per sentence no
/// matter how often it occurs there; stopwords are not counted.
class CooccurrenceStats {
 public:
  static CooccurrenceStats build(std::span<const Sentence> sentences,
                                 const StopwordList& stopwords = StopwordList::english());

  std::size_t sentenceCount() const { return sentenceCount_; }
  std::size_t vocabularySize() const { return terms_.size(); }
  bool contains(std::string_view term) const { return ids_.contains(term); }

  std::size_t termSentenceCount(std::string_view term) const;
  /// Symmetric; a term paired with itself yields its own sentence count.
  std::size_t pairSentenceCount(std::string_view a, std::string_view b) const;

  /// Calls `fn(partner, jointCount)` for every term sharing a sentence with
  /// `term`, in unspecified order.
  template <typename Fn>
  void forEachPartner(std::string_view term, Fn&& fn) const {
    auto it = ids_.find(term);
    if (it == ids_.end()) return;
    for (const auto& [other, count] : partners_[it->second]) fn(terms_[other], count);
  }

 private:
  using TermId = std::uint32_t;

  std::size_t sentenceCount_ = 0;
  std::vector<std::string> terms_;
  std::unordered_map<std::string, TermId, TransparentStringHash, std::equal_to<>> ids_;
  std::vector<std::size_t> termCount_;
  std::vector<std::unordered_map<TermId, std::uint32_t>> partners_;
};

/// Returned by `pmi` for terms that never share a sentence.
inline constexpr double kNoCooccurrence = -std::numeric_limits<double>::infinity();

/// ln((pair/N) / ((countA/N)(countB/N))). Throws ExpansionError(UnknownTerm)
/// when either term has no sentences.
double pmi(const CooccurrenceStats& stats, std::string_view a, std::string_view b);

struct ScoredToken {
  std::string token;
  double score = 0.0;      // pmi or cosine
  std::size_t count = 0;   // joint sentence count, 0 for embedding neighbours

  bool operator==(const ScoredToken&) const = default;
};

/// Tokens that co-occur with a positive rule above both the count and the
/// PMI threshold, best `cooccurTopN` by (count desc, pmi desc, token asc).
/// Single-token rules use the precomputed pair counts; longer rules treat the
/// set of sentences they match as a pseudo-term and need `sentences` (the
/// same sentences `stats` was built from). The rule's own tokens are never
/// candidates.
std::vector<ScoredToken> cooccurCandidates(const CooccurrenceStats& stats,
                                           const KeywordRule& rule,
                                           const ExpansionConfig& cfg,
                                           std::span<const Sentence> sentences = {});

}  // namespace doris
