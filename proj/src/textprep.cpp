#include "doris/textprep.hpp"

#include <unicode/uchar.h>
#include <unicode/utf8.h>

#include <fstream>
#include <istream>

#include "doris/error.hpp"

namespace doris {

namespace {

bool isWordChar(UChar32 c) {
  if (c < 0x80) {
    return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9');
  }
  const auto mask = U_GET_GC_MASK(c);
  return (mask & (U_GC_L_MASK | U_GC_M_MASK | U_GC_ND_MASK)) != 0;
}

bool isApostrophe(UChar32 c) { return c == 0x27 || c == 0x2019; }

void appendLower(std::string& out, UChar32 c) {
  if (c < 0x80) {
    out.push_back(static_cast<char>(c >= 'A' && c <= 'Z' ? c + ('a' - 'A') : c));
    return;
  }
  UChar32 lower = u_tolower(c);
  char buf[U8_MAX_LENGTH];
  int32_t len = 0;
  U8_APPEND_UNSAFE(buf, len, lower);
  out.append(buf, static_cast<std::size_t>(len));
}

// Decodes one code point at `pos`; invalid sequences yield a negative value.
UChar32 decodeAt(std::string_view text, std::size_t pos, std::size_t& next) {
  int32_t i = static_cast<int32_t>(pos);
  const auto* bytes = reinterpret_cast<const uint8_t*>(text.data());
  UChar32 c = 0;
  U8_NEXT(bytes, i, static_cast<int32_t>(text.size()), c);
  next = static_cast<std::size_t>(i);
  return c;
}

bool isAsciiSpace(char c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v';
}

}  // namespace

std::vector<TokenSpan> tokenizeWithSpans(std::string_view text) {
  std::vector<TokenSpan> tokens;
  TokenSpan current;
  bool inToken = false;
  // An apostrophe seen inside a token, kept only if a word char follows.
  bool pendingApostrophe = false;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t next = pos;
    UChar32 c = decodeAt(text, pos, next);
    if (c >= 0 && isWordChar(c)) {
      if (!inToken) {
        current = TokenSpan{{}, pos, pos};
        inToken = true;
      } else if (pendingApostrophe) {
        current.text.push_back('\'');
      }
      pendingApostrophe = false;
      appendLower(current.text, c);
      current.end = next;
    } else if (inToken && !pendingApostrophe && c >= 0 && isApostrophe(c)) {
      pendingApostrophe = true;
    } else if (inToken) {
      tokens.push_back(std::move(current));
      inToken = false;
      pendingApostrophe = false;
    }
    pos = next;
  }
  if (inToken) tokens.push_back(std::move(current));
  return tokens;
}

std::string lowercase(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t next = pos;
    UChar32 c = decodeAt(text, pos, next);
    if (c < 0) {
      out.append(text.substr(pos, next - pos));
    } else {
      appendLower(out, c);
    }
    pos = next;
  }
  return out;
}

std::vector<std::string> tokenize(std::string_view text) {
  std::vector<std::string> out;
  for (auto& t : tokenizeWithSpans(text)) out.push_back(std::move(t.text));
  return out;
}

std::vector<Sentence> splitSentences(std::string_view docId, std::string_view body) {
  std::vector<Sentence> sentences;
  auto emit = [&](std::size_t begin, std::size_t end) {
    while (begin < end && isAsciiSpace(body[begin])) ++begin;
    while (end > begin && isAsciiSpace(body[end - 1])) --end;
    if (begin == end) return;
    auto tokens = tokenize(body.substr(begin, end - begin));
    if (tokens.empty()) return;
    sentences.push_back(
        Sentence{std::string(docId), sentences.size(), std::move(tokens), begin, end});
  };

  std::size_t start = 0;
  std::size_t i = 0;
  while (i < body.size()) {
    const char c = body[i];
    if ((c == '.' || c == '!' || c == '?') && i + 1 < body.size() && isAsciiSpace(body[i + 1])) {
      emit(start, i + 1);
      start = i + 1;
      ++i;
      continue;
    }
    if (c == '\n') {
      std::size_t j = i + 1;
      while (j < body.size() && (body[j] == ' ' || body[j] == '\t' || body[j] == '\r')) ++j;
      if (j < body.size() && body[j] == '\n') {
        emit(start, i);
        start = j + 1;
        i = j + 1;
        continue;
      }
    }
    ++i;
  }
  emit(start, body.size());
  return sentences;
}

std::vector<Sentence> splitSentences(const Document& doc) {
  return splitSentences(doc.id, doc.body);
}

StopwordList::StopwordList(std::vector<std::string> words) {
  for (auto& w : words) words_.insert(std::move(w));
}

const StopwordList& StopwordList::english() {
  static const StopwordList list(std::vector<std::string>{
      "a",       "about",    "above",   "after",   "again",   "against", "all",     "also",
      "am",      "an",       "and",     "any",     "are",     "as",      "at",      "be",
      "because", "been",     "before",  "being",   "below",   "between", "both",    "but",
      "by",      "can",      "could",   "did",     "do",      "does",    "doing",   "down",
      "during",  "each",     "every",   "few",     "for",     "from",    "further", "had",
      "has",     "have",     "having",  "he",      "her",     "here",    "hers",    "herself",
      "him",     "himself",  "his",     "how",     "i",       "if",      "in",      "into",
      "is",      "it",       "its",     "itself",  "let",     "may",     "me",      "might",
      "more",    "most",     "must",    "my",      "myself",  "no",      "nor",     "not",
      "now",     "of",       "off",     "on",      "once",    "only",    "or",      "other",
      "ought",   "our",      "ours",    "ourselves", "out",   "over",    "own",     "same",
      "shall",   "she",      "should",  "so",      "some",    "such",    "than",    "that",
      "the",     "their",    "theirs",  "them",    "themselves", "then", "there",   "these",
      "they",    "this",     "those",   "through", "to",      "too",     "under",   "until",
      "up",      "upon",     "us",      "very",    "was",     "we",      "were",    "what",
      "when",    "where",    "which",   "while",   "who",     "whom",    "why",     "will",
      "with",    "would",    "yet",     "you",     "your",    "yours",   "yourself",
  });
  return list;
}

StopwordList StopwordList::fromFile(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open stopword file " + path.string(), path.string());
  return fromStream(in);
}

StopwordList StopwordList::fromStream(std::istream& in) {
  std::vector<std::string> words;
  std::string line;
  while (std::getline(in, line)) {
    auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    auto last = line.find_last_not_of(" \t\r");
    for (auto& token : tokenize(std::string_view(line).substr(first, last - first + 1))) {
      words.push_back(std::move(token));
    }
  }
  return StopwordList(std::move(words));
}

}  // namespace doris
