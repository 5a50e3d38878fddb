#pragma once

#include <array>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace doris {

/// Kind of a corpus document. Declaration order is significant: it is the
/// segment order of every kind-based aggregation.
enum class DocumentKind : std::uint8_t {
  StateOfUnionReport,
  InauguralAddress,
  CommencementAddress,
  CampaignSpeech,
  PublicSpeech,
  PressRelease,
  Proclamation,
  ExecutiveAction,
  Other,
};

inline constexpr std::array<DocumentKind, 9> kAllDocumentKinds = {
    DocumentKind::StateOfUnionReport, DocumentKind::InauguralAddress,
    DocumentKind::CommencementAddress, DocumentKind::CampaignSpeech,
    DocumentKind::PublicSpeech,       DocumentKind::PressRelease,
    DocumentKind::Proclamation,       DocumentKind::ExecutiveAction,
    DocumentKind::Other,
};

std::string_view toString(DocumentKind kind);

/// Exact, case-sensitive lookup of a vocabulary name.
std::optional<DocumentKind> parseDocumentKind(std::string_view name);

/// Calendar date, ordered chronologically.
struct Date {
  int year = 0;
  unsigned month = 0;
  unsigned day = 0;

  /// Accepts exactly `YYYY-MM-DD` naming a real calendar day.
  static std::optional<Date> parseIso(std::string_view text);
  std::string toIso() const;

  auto operator<=>(const Date&) const = default;
};

struct Document {
  std::string id;
  std::string title;
  std::string author;
  Date datePublished;
  DocumentKind kind = DocumentKind::Other;
  std::string body;

  bool operator==(const Document&) const = default;
};

/// True when `id` is non-empty and only uses `[A-Za-z0-9._-]`.
bool isValidId(std::string_view id);

enum class IssueKind {
  MalformedRecord,
  DuplicateId,
  InvalidDate,
  InvalidId,
  EmptyBody,
  UnknownKind,
  MalformedTriple,
};

std::string_view toString(IssueKind kind);

/// A per-line problem found while reading a corpus or annotation file.
struct ParseIssue {
  std::size_t line = 0;  // 1-based
  IssueKind kind = IssueKind::MalformedRecord;
  std::string subject;   // offending id, kind name or raw line
  std::string message;

  bool operator==(const ParseIssue&) const = default;
};

struct CorpusParseResult {
  std::vector<Document> documents;
  std::vector<ParseIssue> errors;
  std::vector<ParseIssue> warnings;
};

/// Reads newline-delimited JSON documents. Bad records are skipped and
/// reported; the first record wins on duplicate ids. Throws IoError when the
/// file cannot be opened.
CorpusParseResult parseCorpus(const std::filesystem::path& path);
CorpusParseResult parseCorpus(std::istream& in);

/// One JSONL record (no trailing newline) with fields in canonical order.
std::string toJsonLine(const Document& doc);
void writeCorpus(std::ostream& out, std::span<const Document> docs);

inline constexpr std::string_view kDocUriPrefix = "urn:doris:doc:";
inline constexpr std::string_view kTopicUriPrefix = "urn:doris:topic:";
inline constexpr std::string_view kAboutPredicateUri = "http://schema.org/about";

/// A `(document, about, topic)` statement.
struct AnnotationStatement {
  std::string docId;
  std::string topicId;
  std::string source;  // file of origin, empty for in-memory statements

  static constexpr std::string_view predicate = "about";

  bool operator==(const AnnotationStatement&) const = default;
};

struct AnnotationParseResult {
  std::vector<AnnotationStatement> statements;
  std::vector<ParseIssue> errors;
};

/// Reads the N-Triples subset
/// `<urn:doris:doc:ID> <http://schema.org/about> <urn:doris:topic:ID> .`
/// Blank lines and lines starting with `#` are ignored; everything else must
/// match exactly.
AnnotationParseResult parseAnnotations(const std::filesystem::path& path);
AnnotationParseResult parseAnnotations(std::istream& in, std::string_view source = {});

std::string toNTriple(const AnnotationStatement& statement);
void writeAnnotations(std::ostream& out, std::span<const AnnotationStatement> statements);

}  // namespace doris
