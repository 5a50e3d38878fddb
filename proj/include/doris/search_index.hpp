#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "doris/corpus.hpp"
#include "doris/error.hpp"
#include "doris/taxonomy.hpp"
#include "doris/textprep.hpp"

namespace doris {

struct TermClause {
  enum class Kind : std::uint8_t { Word, Phrase };

  Kind kind = Kind::Word;
  std::vector<std::string> tokens;

  static TermClause word(std::string token) { return {Kind::Word, {std::move(token)}}; }
  static TermClause phrase(std::vector<std::string> tokens) {
    return {Kind::Phrase, std::move(tokens)};
  }

  bool operator==(const TermClause&) const = default;
};

/// Value sets are alternatives for authors and kinds (a document has one of
/// each); every listed topic must be covered. Topic filters include
/// descendants: a document annotated with a child covers the parent.
struct QueryFilters {
  std::set<std::string> authors;
  std::set<DocumentKind> kinds;
  std::set<std::string> topics;
  std::optional<int> yearFrom;  // inclusive
  std::optional<int> yearTo;    // inclusive

  bool empty() const {
    return authors.empty() && kinds.empty() && topics.empty() && !yearFrom && !yearTo;
  }
  bool operator==(const QueryFilters&) const = default;
};

/// Conjunction of clauses intersected with the filters.
struct Query {
  std::vector<TermClause> clauses;
  QueryFilters filters;

  /// Splits free text into clauses: double-quoted segments become phrases,
  /// everything else becomes one word clause per token. A quoted segment
  /// with a single token is a word clause.
  static Query parse(std::string_view text);

  /// At least one clause or one filter.
  bool valid() const { return !clauses.empty() || !filters.empty(); }
  bool operator==(const Query&) const = default;
};

struct SearchHit {
  std::string docId;
  double score = 0.0;
  std::string title;
  std::string author;
  Date date;
  DocumentKind kind = DocumentKind::Other;
  std::string snippet;
};

struct FacetEntry {
  std::string topicId;
  std::size_t count = 0;

  bool operator==(const FacetEntry&) const = default;
};

struct SearchResult {
  std::size_t totalCount = 0;
  std::vector<SearchHit> hits;
  std::vector<FacetEntry> topicFacet;
};

enum class AggregationMode : std::uint8_t { ByAuthorKind, ByYearKind, ByAuthorSubtopic };

std::string_view toString(AggregationMode mode);  // author_kind, year_kind, author_subtopic
std::optional<AggregationMode> parseAggregationMode(std::string_view text);

inline constexpr std::string_view kGeneralSegment = "(general)";

struct AggregationSegment {
  std::string key;
  std::size_t count = 0;

  bool operator==(const AggregationSegment&) const = default;
};

struct AggregationBucket {
  std::string key;
  std::vector<AggregationSegment> segments;  // non-zero segments only
  std::size_t total = 0;

  bool operator==(const AggregationBucket&) const = default;
};

/// Stacked-bar data. In the kind modes segments partition each bucket; in
/// the subtopic mode a document counts once per covered child (segments may
/// overlap) and `(general)` holds documents covering the parent but no child.
struct AggregationView {
  AggregationMode mode = AggregationMode::ByAuthorKind;
  std::string parentTopic;
  std::vector<std::string> segmentKeys;  // legend, in segment order
  std::vector<AggregationBucket> buckets;
  std::size_t totalCount = 0;            // documents in any bucket

  bool operator==(const AggregationView&) const = default;
};

class AggregationError : public Error {
 public:
  using Error::Error;  // invalid mode or unmet mode precondition
};

class IndexFormatError : public Error {
 public:
  using Error::Error;  // wrong magic, version mismatch, corrupt payload
};

struct Bm25Params {
  double k1 = 1.2;
  double b = 0.75;
};

/// Immutable positional inverted index over a corpus plus its metadata and
/// topic annotations. Document ordinals follow ascending document id.
class SearchIndex {
 public:
  using DocIndex = std::uint32_t;

  struct Posting {
    DocIndex doc = 0;
    std::vector<std::uint32_t> positions;  // strictly increasing

    bool operator==(const Posting&) const = default;
  };

  static constexpr std::uint32_t kFormatVersion = 1;

  SearchIndex() = default;

  /// Annotations naming unknown documents or topics are ignored; validate
  /// beforehand to report them.
  static SearchIndex build(std::vector<Document> corpus,
                           std::span<const AnnotationStatement> annotations,
                           TopicTaxonomy taxonomy);

  std::size_t documentCount() const { return docs_.size(); }
  const Document& document(DocIndex doc) const { return docs_[doc]; }
  std::optional<DocIndex> find(std::string_view docId) const;
  std::size_t documentLength(DocIndex doc) const { return lengths_[doc]; }
  double averageDocumentLength() const { return avgLength_; }
  const TopicTaxonomy& taxonomy() const { return taxonomy_; }

  /// Authors by earliest publication date, ties by name.
  const std::vector<std::string>& authorOrder() const { return authorOrder_; }

  /// Empty when the token is not indexed.
  std::span<const Posting> postings(std::string_view token) const;
  std::size_t vocabularySize() const { return postings_.size(); }

  /// Documents directly annotated with the topic, ascending.
  std::span<const DocIndex> topicDocuments(std::string_view topicId) const;
  /// Topics directly annotated on the document, ascending.
  std::span<const std::string> topicsOf(DocIndex doc) const { return docTopics_[doc]; }
  /// Annotated with the topic or any of its descendants.
  bool covers(DocIndex doc, std::string_view topicId) const;

  /// Matching documents in ascending id order.
  std::vector<DocIndex> evaluate(const Query& query) const;

  double score(const Query& query, DocIndex doc, const Bm25Params& params = {}) const;

  /// Scores `docs`, orders them by (score desc, id asc) and returns the
  /// window [offset, offset + limit).
  std::vector<SearchHit> rank(const Query& query, std::span<const DocIndex> docs,
                              std::size_t offset = 0, std::size_t limit = 10) const;

  /// Directly annotated topics over `docs`, best `k` by (count desc, id asc),
  /// excluding topics the query already filters on.
  std::vector<FacetEntry> topicFacet(const Query& query, std::span<const DocIndex> docs,
                                     std::size_t k = 5) const;

  /// Throws AggregationError when the mode's precondition does not hold:
  /// ByYearKind needs exactly one author filter, ByAuthorSubtopic needs a
  /// known parent topic with at least one child.
  AggregationView aggregate(const Query& query, std::span<const DocIndex> docs,
                            AggregationMode mode, std::string_view parentTopic = {}) const;

  /// evaluate + rank (1-based page) + topicFacet.
  SearchResult search(const Query& query, std::size_t page = 1, std::size_t pageSize = 10,
                      std::size_t facetK = 5) const;

  /// Snippet for a document: the first sentence that satisfies a clause
  /// (the first sentence when nothing does), whitespace collapsed and cut to
  /// 200 characters with a trailing ellipsis.
  std::string snippet(const Query& query, DocIndex doc) const;

  /// Hex digest of the serialized index; stable for identical inputs.
  const std::string& buildHash() const { return hash_; }

  std::string serialize() const;
  /// Throws IndexFormatError.
  static SearchIndex deserialize(std::string_view bytes);
  void save(const std::filesystem::path& path) const;
  static SearchIndex load(const std::filesystem::path& path);

 private:
  void finalize();
  std::string payload() const;
  static std::string digest(std::string_view payload);
  std::vector<DocIndex> clauseDocuments(const TermClause& clause) const;
  std::size_t phraseFrequency(const TermClause& clause, DocIndex doc) const;
  bool passesFilters(const QueryFilters& filters, DocIndex doc) const;

  std::vector<Document> docs_;
  std::vector<std::size_t> lengths_;
  double avgLength_ = 0.0;
  std::unordered_map<std::string, DocIndex, TransparentStringHash, std::equal_to<>> byId_;
  std::unordered_map<std::string, std::vector<Posting>, TransparentStringHash, std::equal_to<>>
      postings_;
  TopicTaxonomy taxonomy_;
  std::vector<std::vector<std::string>> docTopics_;
  std::unordered_map<std::string, std::vector<DocIndex>, TransparentStringHash, std::equal_to<>>
      topicDocs_;
  // Topic id -> the topic plus its descendants.
  std::unordered_map<std::string, std::vector<std::string>, TransparentStringHash, std::equal_to<>>
      closure_;
  std::vector<std::string> authorOrder_;
  std::string hash_;
};

}  // namespace doris
