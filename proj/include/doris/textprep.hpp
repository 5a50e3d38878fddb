#pragma once

#include <cstddef>
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

#include "doris/corpus.hpp"

namespace doris {

/// A token with the byte range it was read from.
struct TokenSpan {
  std::string text;
  std::size_t begin = 0;
  std::size_t end = 0;

  bool operator==(const TokenSpan&) const = default;
};

/// Lowercased maximal runs of Unicode letters, combining marks and decimal
/// digits. An apostrophe (' or U+2019) between two word characters stays in
/// the token and is normalized to '. Everything else separates tokens;
/// invalid UTF-8 bytes are separators too.
std::vector<std::string> tokenize(std::string_view text);
std::vector<TokenSpan> tokenizeWithSpans(std::string_view text);

/// Per-code-point lowercase with the same mapping `tokenize` uses.
std::string lowercase(std::string_view text);

struct Sentence {
  std::string docId;
  std::size_t index = 0;
  std::vector<std::string> tokens;
  std::size_t begin = 0;  // byte offsets into the document body
  std::size_t end = 0;

  bool operator==(const Sentence&) const = default;
};

/// Splits after `.`, `!` or `?` followed by whitespace and at blank lines.
/// Spans are trimmed of surrounding whitespace; sentences without tokens are
/// dropped and the remaining ones are numbered densely from 0.
std::vector<Sentence> splitSentences(std::string_view docId, std::string_view body);
std::vector<Sentence> splitSentences(const Document& doc);

struct TransparentStringHash {
  using is_transparent = void;
  std::size_t operator()(std::string_view s) const noexcept {
    return std::hash<std::string_view>{}(s);
  }
};

class StopwordList {
 public:
  StopwordList() = default;
  explicit StopwordList(std::vector<std::string> words);

  /// Built-in English list.
  static const StopwordList& english();
  /// One word per line, `#` starts a comment line.
  static StopwordList fromFile(const std::filesystem::path& path);
  static StopwordList fromStream(std::istream& in);

  bool contains(std::string_view token) const {
    return words_.find(token) != words_.end();
  }
  std::size_t size() const { return words_.size(); }

 private:
  std::unordered_set<std::string, TransparentStringHash, std::equal_to<>> words_;
};

}  // namespace doris
