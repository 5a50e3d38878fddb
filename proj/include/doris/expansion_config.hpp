#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>

#include "doris/error.hpp"

namespace doris {

class ExpansionError : public Error {
 public:
  enum class Code {
    UnknownTerm,
    UnknownToken,
    EmptyFile,
    EmptyVocabulary,
    InvalidK,
    IndexOutOfRange,
    InvalidConfig,
    MalformedOverrides,
  };

  ExpansionError(Code code, std::string message, std::string subject = {})
      : Error(std::move(message), std::move(subject)), code_(code) {}

  Code code() const noexcept { return code_; }

 private:
  Code code_;
};

/// Knobs for keyword expansion. Defaults are the shipped configuration.
struct ExpansionConfig {
  // Sentence co-occurrence.
  std::size_t cooccurMinCount = 5;
  double cooccurMinPmi = 1.0;  // natural log
  std::size_t cooccurTopN = 10;

  // Embedding neighbours.
  double embedThreshold = 0.55;
  std::size_t embedTopN = 10;

  // Topic model.
  std::size_t ldaK = 300;
  std::size_t ldaIterations = 200;
  std::optional<double> ldaAlpha;  // 50 / K when unset
  double ldaBeta = 0.01;
  std::size_t ldaMinTokenFrequency = 5;
  std::size_t ldaTopWordsImported = 3;
  std::size_t ldaMatchTopWords = 10;
  std::size_t ldaMatchMinOverlap = 2;

  std::uint64_t rngSeed = 42;

  double alpha() const { return ldaAlpha.value_or(50.0 / static_cast<double>(ldaK)); }

  /// Throws ExpansionError(InvalidConfig) on out-of-range values.
  void validate() const;
};

}  // namespace doris
