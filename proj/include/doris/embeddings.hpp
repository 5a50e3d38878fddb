#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "doris/cooccurrence.hpp"
#include "doris/corpus.hpp"
#include "doris/expansion_config.hpp"
#include "doris/textprep.hpp"

namespace doris {

/// Cosine of two equal-length vectors, clamped to [-1, 1]; 0 when either
/// vector is all zeros.
double cosineSimilarity(std::span<const double> u, std::span<const double> v);

/// Word vectors keyed by lowercased token.
class EmbeddingTable {
 public:
  explicit EmbeddingTable(std::size_t dimension = 0) : dimension_(dimension) {}

  /// Adds a vector; returns false (and keeps the first) on a repeated token.
  /// Throws InvalidArgument when the length differs from `dimension()`.
  bool add(std::string_view token, std::span<const double> values);

  std::size_t dimension() const { return dimension_; }
  std::size_t size() const { return tokens_.size(); }
  bool empty() const { return tokens_.empty(); }
  bool contains(std::string_view token) const;

  /// Tokens in insertion order.
  const std::vector<std::string>& tokens() const { return tokens_; }
  /// Throws ExpansionError(UnknownToken).
  std::span<const double> vector(std::string_view token) const;
  std::span<const double> row(std::size_t i) const {
    return {values_.data() + i * dimension_, dimension_};
  }

  double cosine(std::string_view a, std::string_view b) const;

 private:
  std::size_t rowOf(std::string_view token) const;

  std::size_t dimension_;
  std::vector<std::string> tokens_;
  std::unordered_map<std::string, std::size_t, TransparentStringHash, std::equal_to<>> index_;
  std::vector<double> values_;
};

struct EmbeddingLoadResult {
  EmbeddingTable table;
  std::vector<ParseIssue> warnings;  // skipped lines
};

/// Text format: `token v1 ... vD` per line, D fixed by the first line.
/// Lines with a different number of values, or values that do not parse, are
/// skipped with a warning. Throws ExpansionError(EmptyFile) when no vector
/// could be read and IoError when the file cannot be opened.
EmbeddingLoadResult loadEmbeddings(const std::filesystem::path& path);
EmbeddingLoadResult loadEmbeddings(std::istream& in);

/// Every other token with cosine >= embedThreshold, best embedTopN by
/// (cosine desc, token asc). Throws ExpansionError(UnknownToken).
std::vector<ScoredToken> embeddingNeighbors(const EmbeddingTable& table, std::string_view token,
                                            const ExpansionConfig& cfg);

}  // namespace doris
