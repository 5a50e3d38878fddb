#include "doris/embeddings.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>

namespace doris {

double cosineSimilarity(std::span<const double> u, std::span<const double> v) {
  double dot = 0.0;
  double nu = 0.0;
  double nv = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    dot += u[i] * v[i];
    nu += u[i] * u[i];
    nv += v[i] * v[i];
  }
  if (nu == 0.0 || nv == 0.0) return 0.0;
  return std::clamp(dot / (std::sqrt(nu) * std::sqrt(nv)), -1.0, 1.0);
}

bool EmbeddingTable::add(std::string_view token, std::span<const double> values) {
  if (values.size() != dimension_) {
    throw InvalidArgument("vector for '" + std::string(token) + "' has " +
                              std::to_string(values.size()) + " values, expected " +
                              std::to_string(dimension_),
                          std::string(token));
  }
  auto key = lowercase(token);
  if (index_.contains(key)) return false;
  index_.emplace(key, tokens_.size());
  tokens_.push_back(std::move(key));
  values_.insert(values_.end(), values.begin(), values.end());
  return true;
}

bool EmbeddingTable::contains(std::string_view token) const {
  return index_.contains(lowercase(token));
}

std::size_t EmbeddingTable::rowOf(std::string_view token) const {
  auto it = index_.find(lowercase(token));
  if (it == index_.end()) {
    throw ExpansionError(ExpansionError::Code::UnknownToken,
                         "no vector for '" + std::string(token) + "'", std::string(token));
  }
  return it->second;
}

std::span<const double> EmbeddingTable::vector(std::string_view token) const {
  return row(rowOf(token));
}

double EmbeddingTable::cosine(std::string_view a, std::string_view b) const {
  return cosineSimilarity(vector(a), vector(b));
}

EmbeddingLoadResult loadEmbeddings(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open embedding file " + path.string(), path.string());
  return loadEmbeddings(in);
}

EmbeddingLoadResult loadEmbeddings(std::istream& in) {
  EmbeddingLoadResult result;
  std::optional<EmbeddingTable> table;
  std::string line;
  std::size_t lineNo = 0;
  std::vector<double> values;
  while (std::getline(in, line)) {
    ++lineNo;
    std::string_view rest = line;
    auto skipSpace = [&] {
      auto p = rest.find_first_not_of(" \t\r");
      rest.remove_prefix(p == std::string_view::npos ? rest.size() : p);
    };
    auto nextField = [&] {
      skipSpace();
      auto end = rest.find_first_of(" \t\r");
      auto field = rest.substr(0, end);
      rest.remove_prefix(field.size());
      return field;
    };

    const auto token = nextField();
    if (token.empty()) continue;
    values.clear();
    bool numeric = true;
    for (auto field = nextField(); !field.empty(); field = nextField()) {
      double x = 0.0;
      auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), x);
      if (ec != std::errc{} || ptr != field.data() + field.size()) {
        numeric = false;
        break;
      }
      values.push_back(x);
    }
    if (!numeric || values.empty()) {
      result.warnings.push_back({lineNo, IssueKind::MalformedRecord, std::string(token),
                                 "line is not a token followed by numbers"});
      continue;
    }
    if (!table) table.emplace(values.size());
    if (values.size() != table->dimension()) {
      result.warnings.push_back({lineNo, IssueKind::MalformedRecord, std::string(token),
                                 "dimension mismatch: " + std::to_string(values.size()) +
                                     " values, expected " + std::to_string(table->dimension())});
      continue;
    }
    if (!table->add(token, values)) {
      result.warnings.push_back({lineNo, IssueKind::DuplicateId, std::string(token),
                                 "repeated token, keeping the first vector"});
    }
  }
  if (!table || table->empty()) {
    throw ExpansionError(ExpansionError::Code::EmptyFile, "embedding file contains no vectors");
  }
  result.table = std::move(*table);
  return result;
}

std::vector<ScoredToken> embeddingNeighbors(const EmbeddingTable& table, std::string_view token,
                                            const ExpansionConfig& cfg) {
  const auto query = table.vector(token);
  const auto self = lowercase(token);
  std::vector<ScoredToken> out;
  for (std::size_t i = 0; i < table.size(); ++i) {
    if (table.tokens()[i] == self) continue;
    const double c = cosineSimilarity(query, table.row(i));
    if (c >= cfg.embedThreshold) out.push_back({table.tokens()[i], c, 0});
  }
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
    if (a.score != b.score) return a.score > b.score;
    return a.token < b.token;
  });
  if (out.size() > cfg.embedTopN) out.resize(cfg.embedTopN);
  return out;
}

}  // namespace doris
