#include "doris/api.hpp"

#include <charconv>

namespace doris {

using nlohmann::ordered_json;

namespace {

int parseYear(const std::string& name, const std::string& text) {
  int value = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (text.empty() || ec != std::errc{} || ptr != text.data() + text.size()) {
    throw InvalidArgument(name + " must be an integer year, got '" + text + "'", name);
  }
  return value;
}

// The last value wins for single-valued parameters.
const std::string* single(const QueryParams& params, const std::string& name) {
  auto range = params.equal_range(name);
  if (range.first == range.second) return nullptr;
  return &std::prev(range.second)->second;
}

}  // namespace

Query queryFromParams(const QueryParams& params, std::size_t* page) {
  Query query;
  if (const auto* q = single(params, "q")) query = Query::parse(*q);
  auto& f = query.filters;
  for (auto [it, end] = params.equal_range("author"); it != end; ++it) {
    if (!it->second.empty()) f.authors.insert(it->second);
  }
  for (auto [it, end] = params.equal_range("kind"); it != end; ++it) {
    if (it->second.empty()) continue;
    auto kind = parseDocumentKind(it->second);
    if (!kind) throw InvalidArgument("unknown document kind '" + it->second + "'", it->second);
    f.kinds.insert(*kind);
  }
  for (auto [it, end] = params.equal_range("topic"); it != end; ++it) {
    if (!it->second.empty()) f.topics.insert(it->second);
  }
  if (const auto* y = single(params, "yearFrom")) f.yearFrom = parseYear("yearFrom", *y);
  if (const auto* y = single(params, "yearTo")) f.yearTo = parseYear("yearTo", *y);
  if (page != nullptr) {
    *page = 1;
    if (const auto* p = single(params, "page")) {
      const int value = parseYear("page", *p);
      if (value < 1) throw InvalidArgument("page must be at least 1", "page");
      *page = static_cast<std::size_t>(value);
    }
  }
  if (!query.valid()) {
    throw InvalidArgument("a query needs search terms or at least one filter", "q");
  }
  return query;
}

ordered_json toJson(const SearchResult& result, const SearchIndex& index, std::size_t page,
                    std::size_t pageSize) {
  ordered_json out;
  out["totalCount"] = result.totalCount;
  out["page"] = page;
  out["pageSize"] = pageSize;
  auto& hits = out["hits"] = ordered_json::array();
  for (const auto& hit : result.hits) {
    hits.push_back({{"docId", hit.docId},
                    {"score", hit.score},
                    {"title", hit.title},
                    {"author", hit.author},
                    {"date", hit.date.toIso()},
                    {"kind", toString(hit.kind)},
                    {"snippet", hit.snippet}});
  }
  auto& facet = out["topicFacet"] = ordered_json::array();
  for (const auto& entry : result.topicFacet) {
    const auto& taxonomy = index.taxonomy();
    facet.push_back({{"topicId", entry.topicId},
                     {"label", taxonomy.contains(entry.topicId) ? taxonomy.node(entry.topicId).label
                                                                : entry.topicId},
                     {"count", entry.count}});
  }
  return out;
}

ordered_json toJson(const AggregationView& view) {
  ordered_json out;
  out["mode"] = toString(view.mode);
  out["parentTopic"] = view.parentTopic.empty() ? ordered_json() : ordered_json(view.parentTopic);
  out["totalCount"] = view.totalCount;
  out["segmentKeys"] = view.segmentKeys;
  auto& buckets = out["buckets"] = ordered_json::array();
  for (const auto& bucket : view.buckets) {
    ordered_json segments = ordered_json::array();
    for (const auto& s : bucket.segments) segments.push_back({{"key", s.key}, {"count", s.count}});
    buckets.push_back({{"key", bucket.key}, {"total", bucket.total}, {"segments", segments}});
  }
  return out;
}

ordered_json topicsJson(const TopicTaxonomy& taxonomy) {
  ordered_json topics = ordered_json::array();
  for (const auto& node : taxonomy.nodes()) {
    topics.push_back({{"id", node.id},
                      {"label", node.label},
                      {"parents", node.parentIds},
                      {"children", taxonomy.children(node.id)}});
  }
  return {{"topics", topics}};
}

ordered_json documentJson(const SearchIndex& index, SearchIndex::DocIndex doc) {
  const auto& d = index.document(doc);
  ordered_json topics = ordered_json::array();
  for (const auto& t : index.topicsOf(doc)) topics.push_back(t);
  return {{"id", d.id},
          {"title", d.title},
          {"author", d.author},
          {"date", d.datePublished.toIso()},
          {"kind", toString(d.kind)},
          {"text", d.body},
          {"topics", topics}};
}

std::string renderJson(const ordered_json& value) {
  return value.dump(-1, ' ', false, nlohmann::json::error_handler_t::replace) + "\n";
}

ApiResponse errorResponse(int status, std::string_view message) {
  return {status, renderJson({{"error", message}})};
}

ApiResponse handleSearch(const SearchIndex& index, const QueryParams& params,
                         const ApiOptions& options) {
  std::size_t page = 1;
  Query query;
  try {
    query = queryFromParams(params, &page);
  } catch (const InvalidArgument& e) {
    return errorResponse(400, e.what());
  }
  const auto result = index.search(query, page, options.pageSize, options.facetK);
  return {200, renderJson(toJson(result, index, page, options.pageSize))};
}

ApiResponse handleAggregate(const SearchIndex& index, const QueryParams& params) {
  const auto* modeText = single(params, "mode");
  if (modeText == nullptr) return errorResponse(400, "missing mode");
  const auto mode = parseAggregationMode(*modeText);
  if (!mode) return errorResponse(400, "unknown mode '" + *modeText + "'");
  std::string parent;
  if (const auto* p = single(params, "parentTopic")) parent = *p;
  if (*mode == AggregationMode::ByAuthorSubtopic && parent.empty()) {
    return errorResponse(400, "author_subtopic needs parentTopic");
  }
  try {
    const auto query = queryFromParams(params);
    const auto docs = index.evaluate(query);
    return {200, renderJson(toJson(index.aggregate(query, docs, *mode, parent)))};
  } catch (const InvalidArgument& e) {
    return errorResponse(400, e.what());
  } catch (const AggregationError& e) {
    return errorResponse(400, e.what());
  }
}

ApiResponse handleTopics(const SearchIndex& index) {
  return {200, renderJson(topicsJson(index.taxonomy()))};
}

ApiResponse handleDocument(const SearchIndex& index, std::string_view docId) {
  auto doc = index.find(docId);
  if (!doc) return errorResponse(404, "unknown document '" + std::string(docId) + "'");
  return {200, renderJson(documentJson(index, *doc))};
}

ApiResponse handleHealth(const SearchIndex* index) {
  if (index == nullptr) return {503, renderJson({{"status", "loading"}})};
  return {200, renderJson({{"status", "ok"},
                           {"documents", index->documentCount()},
                           {"corpusVersion", index->buildHash()}})};
}

}  // namespace doris
