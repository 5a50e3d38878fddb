#include "doris/validation.hpp"

#include <set>
#include <unordered_set>

namespace doris {

ValidationReport validateCorpus(std::span<const Document> docs,
                                std::span<const AnnotationStatement> annotations,
                                const TopicTaxonomy& taxonomy) {
  ValidationReport report;
  report.documentCount = docs.size();
  report.annotationCount = annotations.size();

  std::unordered_set<std::string_view> ids;
  for (const auto& doc : docs) {
    ids.insert(doc.id);
    ++report.kindCounts[static_cast<std::size_t>(doc.kind)];
    ++report.authorCounts[doc.author];
  }

  std::set<std::string> danglingDocs;
  std::set<std::string> danglingTopics;
  for (const auto& s : annotations) {
    if (!ids.contains(s.docId)) danglingDocs.insert(s.docId);
    if (!taxonomy.contains(s.topicId)) danglingTopics.insert(s.topicId);
  }
  report.danglingDocs.assign(danglingDocs.begin(), danglingDocs.end());
  report.danglingTopics.assign(danglingTopics.begin(), danglingTopics.end());
  return report;
}

nlohmann::ordered_json ValidationReport::toJson() const {
  nlohmann::ordered_json out;
  out["documents"] = documentCount;
  out["annotations"] = annotationCount;
  out["danglingDocs"] = danglingDocs;
  out["danglingTopics"] = danglingTopics;
  nlohmann::ordered_json kinds = nlohmann::ordered_json::object();
  for (auto kind : kAllDocumentKinds) kinds[std::string(toString(kind))] = count(kind);
  out["kinds"] = std::move(kinds);
  nlohmann::ordered_json authors = nlohmann::ordered_json::object();
  for (const auto& [author, n] : authorCounts) authors[author] = n;
  out["authors"] = std::move(authors);
  return out;
}

}  // namespace doris
