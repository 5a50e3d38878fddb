#pragma once

#include <array>
#include <cstddef>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "doris/corpus.hpp"
#include "doris/taxonomy.hpp"
#include "json.hpp"

namespace doris {

struct ValidationReport {
  std::size_t documentCount = 0;
  std::size_t annotationCount = 0;
  /// Distinct ids, sorted.
  std::vector<std::string> danglingDocs;
  std::vector<std::string> danglingTopics;
  /// Indexed by DocumentKind; every kind is present, zero when unused.
  std::array<std::size_t, kAllDocumentKinds.size()> kindCounts{};
  std::map<std::string, std::size_t> authorCounts;

  std::size_t count(DocumentKind kind) const {
    return kindCounts[static_cast<std::size_t>(kind)];
  }
  bool ok() const { return danglingDocs.empty() && danglingTopics.empty(); }

  nlohmann::ordered_json toJson() const;
};

ValidationReport validateCorpus(std::span<const Document> docs,
                                std::span<const AnnotationStatement> annotations,
                                const TopicTaxonomy& taxonomy);

}  // namespace doris
