#pragma once

#include <cstddef>
#include <map>
#include <span>
#include <string>

#include "doris/corpus.hpp"
#include "doris/embeddings.hpp"
#include "doris/expansion_config.hpp"
#include "doris/lda.hpp"
#include "doris/taxonomy.hpp"

namespace doris {

struct ExpansionResult {
  TopicTaxonomy taxonomy;
  std::map<std::size_t, std::string> ldaMapping;
  std::size_t addedCooccurrence = 0;
  std::size_t addedEmbedding = 0;
  std::size_t addedLda = 0;
};

/// Grows every topic's own rules with single-token positive exact rules:
/// co-occurrence candidates of each positive seed, embedding neighbours of
/// each single-token positive seed (skipped when `embeddings` is null or
/// lacks the seed), and the top `ldaTopWordsImported` words of every LDA
/// topic matched to the topic. Rules whose key already exists on the topic
/// are not added again, and a token that is a negative rule anywhere in the
/// topic's effective rules is never added. Existing rules are kept as is.
ExpansionResult expandTaxonomy(const TopicTaxonomy& taxonomy, std::span<const Document> corpus,
                               const EmbeddingTable* embeddings, const ExpansionConfig& cfg,
                               const LdaOverrides& overrides = {},
                               const StopwordList& stopwords = StopwordList::english());

}  // namespace doris
