#include "doris/corpus.hpp"

#include <charconv>
#include <cstdio>
#include <chrono>
#include <fstream>
#include <istream>
#include <ostream>
#include <unordered_set>

#include "doris/error.hpp"
#include "json.hpp"

namespace doris {

namespace {

constexpr std::array<std::string_view, 9> kKindNames = {
    "StateOfUnionReport", "InauguralAddress", "CommencementAddress",
    "CampaignSpeech",     "PublicSpeech",     "PressRelease",
    "Proclamation",       "ExecutiveAction",  "Other",
};

template <typename Int>
bool parseDigits(std::string_view text, Int& out) {
  for (char c : text) {
    if (c < '0' || c > '9') return false;
  }
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), out);
  return ec == std::errc{} && ptr == text.data() + text.size();
}

bool isBlank(std::string_view s) {
  return s.find_first_not_of(" \t\r\n\f\v") == std::string_view::npos;
}

std::string_view stripCr(std::string_view line) {
  if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
  return line;
}

}  // namespace

std::string_view toString(DocumentKind kind) {
  return kKindNames[static_cast<std::size_t>(kind)];
}

std::optional<DocumentKind> parseDocumentKind(std::string_view name) {
  for (std::size_t i = 0; i < kKindNames.size(); ++i) {
    if (kKindNames[i] == name) return kAllDocumentKinds[i];
  }
  return std::nullopt;
}

std::optional<Date> Date::parseIso(std::string_view text) {
  if (text.size() != 10 || text[4] != '-' || text[7] != '-') return std::nullopt;
  int y = 0;
  unsigned m = 0;
  unsigned d = 0;
  if (!parseDigits(text.substr(0, 4), y) || !parseDigits(text.substr(5, 2), m) ||
      !parseDigits(text.substr(8, 2), d)) {
    return std::nullopt;
  }
  std::chrono::year_month_day ymd{std::chrono::year{y}, std::chrono::month{m},
                                  std::chrono::day{d}};
  if (!ymd.ok()) return std::nullopt;
  return Date{y, m, d};
}

std::string Date::toIso() const {
  char buf[16];
  std::snprintf(buf, sizeof buf, "%04d-%02u-%02u", year, month, day);
  return buf;
}

bool isValidId(std::string_view id) {
  if (id.empty()) return false;
  for (char c : id) {
    bool ok = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') ||
              (c >= '0' && c <= '9') || c == '.' || c == '_' || c == '-';
    if (!ok) return false;
  }
  return true;
}

std::string_view toString(IssueKind kind) {
  switch (kind) {
    case IssueKind::MalformedRecord: return "MalformedRecord";
    case IssueKind::DuplicateId: return "DuplicateId";
    case IssueKind::InvalidDate: return "InvalidDate";
    case IssueKind::InvalidId: return "InvalidId";
    case IssueKind::EmptyBody: return "EmptyBody";
    case IssueKind::UnknownKind: return "UnknownKind";
    case IssueKind::MalformedTriple: return "MalformedTriple";
  }
  return "?";
}

CorpusParseResult parseCorpus(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open corpus file " + path.string(), path.string());
  return parseCorpus(in);
}

CorpusParseResult parseCorpus(std::istream& in) {
  using nlohmann::json;
  CorpusParseResult result;
  std::unordered_set<std::string> seen;
  std::string raw;
  std::size_t lineNo = 0;
  while (std::getline(in, raw)) {
    ++lineNo;
    std::string_view line = stripCr(raw);
    if (isBlank(line)) continue;

    auto malformed = [&](std::string message) {
      result.errors.push_back(
          {lineNo, IssueKind::MalformedRecord, std::string(line.substr(0, 80)), std::move(message)});
    };

    json record = json::parse(line, nullptr, /*allow_exceptions=*/false);
    if (record.is_discarded() || !record.is_object()) {
      malformed("line is not a JSON object");
      continue;
    }
    static constexpr std::array<const char*, 6> kFields = {"id",   "title", "author",
                                                           "date", "kind",  "text"};
    bool complete = true;
    for (const char* field : kFields) {
      auto it = record.find(field);
      if (it == record.end() || !it->is_string()) {
        malformed(std::string("missing or non-string field '") + field + "'");
        complete = false;
        break;
      }
    }
    if (!complete) continue;

    Document doc;
    doc.id = record["id"].get<std::string>();
    doc.title = record["title"].get<std::string>();
    doc.author = record["author"].get<std::string>();
    doc.body = record["text"].get<std::string>();
    const auto dateText = record["date"].get<std::string>();
    const auto kindText = record["kind"].get<std::string>();

    if (!isValidId(doc.id)) {
      result.errors.push_back({lineNo, IssueKind::InvalidId, doc.id,
                               "document id must match [A-Za-z0-9._-]+"});
      continue;
    }
    auto date = Date::parseIso(dateText);
    if (!date) {
      result.errors.push_back(
          {lineNo, IssueKind::InvalidDate, doc.id, "invalid date '" + dateText + "'"});
      continue;
    }
    doc.datePublished = *date;
    if (isBlank(doc.body)) {
      result.errors.push_back({lineNo, IssueKind::EmptyBody, doc.id, "document text is empty"});
      continue;
    }
    if (auto kind = parseDocumentKind(kindText)) {
      doc.kind = *kind;
    } else {
      doc.kind = DocumentKind::Other;
      result.warnings.push_back({lineNo, IssueKind::UnknownKind, kindText,
                                 "unknown kind '" + kindText + "' for " + doc.id + ", using Other"});
    }
    if (!seen.insert(doc.id).second) {
      result.errors.push_back({lineNo, IssueKind::DuplicateId, doc.id, "duplicate id " + doc.id});
      continue;
    }
    result.documents.push_back(std::move(doc));
  }
  return result;
}

std::string toJsonLine(const Document& doc) {
  nlohmann::ordered_json record;
  record["id"] = doc.id;
  record["title"] = doc.title;
  record["author"] = doc.author;
  record["date"] = doc.datePublished.toIso();
  record["kind"] = toString(doc.kind);
  record["text"] = doc.body;
  return record.dump();
}

void writeCorpus(std::ostream& out, std::span<const Document> docs) {
  for (const auto& doc : docs) out << toJsonLine(doc) << '\n';
}

namespace {

// Consumes `<prefix ID>` from the front of `rest`; returns the ID.
std::optional<std::string_view> takeIri(std::string_view& rest, std::string_view prefix) {
  if (rest.size() < prefix.size() + 2 || rest.front() != '<') return std::nullopt;
  rest.remove_prefix(1);
  if (rest.substr(0, prefix.size()) != prefix) return std::nullopt;
  rest.remove_prefix(prefix.size());
  auto close = rest.find('>');
  if (close == std::string_view::npos) return std::nullopt;
  auto id = rest.substr(0, close);
  rest.remove_prefix(close + 1);
  return id;
}

bool takeLiteral(std::string_view& rest, std::string_view literal) {
  if (rest.substr(0, literal.size()) != literal) return false;
  rest.remove_prefix(literal.size());
  return true;
}

}  // namespace

AnnotationParseResult parseAnnotations(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open annotation file " + path.string(), path.string());
  return parseAnnotations(in, path.string());
}

AnnotationParseResult parseAnnotations(std::istream& in, std::string_view source) {
  AnnotationParseResult result;
  std::string raw;
  std::size_t lineNo = 0;
  const std::string predicate = "<" + std::string(kAboutPredicateUri) + ">";
  while (std::getline(in, raw)) {
    ++lineNo;
    std::string_view line = raw;
    if (line.empty() || line.front() == '#') continue;

    std::string_view rest = line;
    auto doc = takeIri(rest, kDocUriPrefix);
    bool ok = doc && isValidId(*doc) && takeLiteral(rest, " ") && takeLiteral(rest, predicate) &&
              takeLiteral(rest, " ");
    std::optional<std::string_view> topic;
    if (ok) {
      topic = takeIri(rest, kTopicUriPrefix);
      ok = topic && isValidId(*topic) && rest == " .";
    }
    if (!ok) {
      result.errors.push_back({lineNo, IssueKind::MalformedTriple, std::string(line),
                               "line does not match the annotation triple grammar"});
      continue;
    }
    result.statements.push_back({std::string(*doc), std::string(*topic), std::string(source)});
  }
  return result;
}

std::string toNTriple(const AnnotationStatement& statement) {
  std::string line;
  line.reserve(96);
  line.append("<").append(kDocUriPrefix).append(statement.docId).append("> <");
  line.append(kAboutPredicateUri).append("> <").append(kTopicUriPrefix);
  line.append(statement.topicId).append("> .");
  return line;
}

void writeAnnotations(std::ostream& out, std::span<const AnnotationStatement> statements) {
  for (const auto& s : statements) out << toNTriple(s) << '\n';
}

}  // namespace doris
