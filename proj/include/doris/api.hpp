#pragma once

#include <cstddef>
#include <map>
#include <string>
#include <string_view>

#include "doris/search_index.hpp"
#include "json.hpp"

namespace doris {

// Same shape as httplib::Params so handlers stay independent of the server.
using QueryParams = std::multimap<std::string, std::string>;

inline constexpr std::string_view kCorpusVersionHeader = "X-Corpus-Version";

struct ApiOptions {
  std::size_t pageSize = 10;
  std::size_t facetK = 5;
};

struct ApiResponse {
  int status = 200;
  std::string body;  // JSON text terminated by a newline
  std::string contentType = "application/json; charset=utf-8";
};

/// Reads q, author*, kind*, topic*, yearFrom, yearTo and page. Throws
/// InvalidArgument for malformed numbers, unknown kind names and queries
/// with neither terms nor filters.
Query queryFromParams(const QueryParams& params, std::size_t* page = nullptr);

nlohmann::ordered_json toJson(const SearchResult& result, const SearchIndex& index,
                              std::size_t page, std::size_t pageSize);
nlohmann::ordered_json toJson(const AggregationView& view);
nlohmann::ordered_json topicsJson(const TopicTaxonomy& taxonomy);
nlohmann::ordered_json documentJson(const SearchIndex& index, SearchIndex::DocIndex doc);

/// Compact JSON plus a trailing newline. Every endpoint and the CLI render
/// through this so their bytes agree.
std::string renderJson(const nlohmann::ordered_json& value);

// Endpoint handlers. `index` null means the index is still loading.
ApiResponse handleSearch(const SearchIndex& index, const QueryParams& params,
                         const ApiOptions& options = {});
ApiResponse handleAggregate(const SearchIndex& index, const QueryParams& params);
ApiResponse handleTopics(const SearchIndex& index);
ApiResponse handleDocument(const SearchIndex& index, std::string_view docId);
ApiResponse handleHealth(const SearchIndex* index);

ApiResponse errorResponse(int status, std::string_view message);

}  // namespace doris
