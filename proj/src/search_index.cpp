#include "doris/search_index.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

#include "doris/annotator.hpp"

namespace doris {

std::string_view toString(AggregationMode mode) {
  switch (mode) {
    case AggregationMode::ByAuthorKind: return "author_kind";
    case AggregationMode::ByYearKind: return "year_kind";
    case AggregationMode::ByAuthorSubtopic: return "author_subtopic";
  }
  return "author_kind";
}

std::optional<AggregationMode> parseAggregationMode(std::string_view text) {
  for (auto mode : {AggregationMode::ByAuthorKind, AggregationMode::ByYearKind,
                    AggregationMode::ByAuthorSubtopic}) {
    if (toString(mode) == text) return mode;
  }
  return std::nullopt;
}

Query Query::parse(std::string_view text) {
  Query query;
  auto push = [&](TermClause clause) {
    if (std::find(query.clauses.begin(), query.clauses.end(), clause) == query.clauses.end()) {
      query.clauses.push_back(std::move(clause));
    }
  };
  bool quoted = false;
  std::size_t start = 0;
  auto flush = [&](std::size_t end) {
    auto tokens = tokenize(text.substr(start, end - start));
    if (quoted && tokens.size() > 1) {
      push(TermClause::phrase(std::move(tokens)));
    } else {
      for (auto& t : tokens) push(TermClause::word(std::move(t)));
    }
  };
  for (std::size_t i = 0; i < text.size(); ++i) {
    if (text[i] != '"') continue;
    flush(i);
    quoted = !quoted;
    start = i + 1;
  }
  flush(text.size());  // an unterminated quote runs to the end
  return query;
}

namespace {

template <typename Map>
auto* lookup(const Map& map, std::string_view key) {
  auto it = map.find(key);
  return it == map.end() ? nullptr : &it->second;
}

const SearchIndex::Posting* postingFor(std::span<const SearchIndex::Posting> list,
                                       SearchIndex::DocIndex doc) {
  auto it = std::lower_bound(list.begin(), list.end(), doc,
                             [](const SearchIndex::Posting& p, SearchIndex::DocIndex d) {
                               return p.doc < d;
                             });
  return it != list.end() && it->doc == doc ? &*it : nullptr;
}

std::string collapseWhitespace(std::string_view text) {
  std::string out;
  bool space = false;
  for (char c : text) {
    if (c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v') {
      space = !out.empty();
      continue;
    }
    if (space) out.push_back(' ');
    space = false;
    out.push_back(c);
  }
  return out;
}

constexpr std::size_t kSnippetChars = 200;

std::string truncateCodePoints(std::string text, std::size_t limit) {
  std::size_t count = 0;
  for (std::size_t i = 0; i < text.size(); ++i) {
    if ((static_cast<unsigned char>(text[i]) & 0xC0) == 0x80) continue;
    if (count == limit) {
      text.resize(i);
      while (!text.empty() && text.back() == ' ') text.pop_back();
      return text + "…";
    }
    ++count;
  }
  return text;
}

}  // namespace

SearchIndex SearchIndex::build(std::vector<Document> corpus,
                               std::span<const AnnotationStatement> annotations,
                               TopicTaxonomy taxonomy) {
  SearchIndex index;
  std::sort(corpus.begin(), corpus.end(),
            [](const Document& a, const Document& b) { return a.id < b.id; });
  corpus.erase(std::unique(corpus.begin(), corpus.end(),
                           [](const Document& a, const Document& b) { return a.id == b.id; }),
               corpus.end());
  index.docs_ = std::move(corpus);
  index.taxonomy_ = std::move(taxonomy);

  const auto n = index.docs_.size();
  index.lengths_.resize(n);
  for (DocIndex d = 0; d < n; ++d) {
    index.byId_.emplace(index.docs_[d].id, d);
    auto tokens = tokenize(index.docs_[d].body);
    index.lengths_[d] = tokens.size();
    for (std::uint32_t pos = 0; pos < tokens.size(); ++pos) {
      auto& list = index.postings_[tokens[pos]];
      if (list.empty() || list.back().doc != d) list.push_back({d, {}});
      list.back().positions.push_back(pos);
    }
  }

  index.docTopics_.resize(n);
  for (const auto& st : annotations) {
    auto it = index.byId_.find(st.docId);
    if (it == index.byId_.end() || !index.taxonomy_.contains(st.topicId)) continue;
    index.docTopics_[it->second].push_back(st.topicId);
  }
  for (auto& topics : index.docTopics_) {
    std::sort(topics.begin(), topics.end());
    topics.erase(std::unique(topics.begin(), topics.end()), topics.end());
  }
  index.finalize();
  return index;
}

// Derived lookups shared by build() and deserialize().
void SearchIndex::finalize() {
  byId_.clear();
  for (DocIndex d = 0; d < docs_.size(); ++d) byId_.emplace(docs_[d].id, d);

  const double total = std::accumulate(lengths_.begin(), lengths_.end(), 0.0);
  avgLength_ = docs_.empty() ? 0.0 : total / static_cast<double>(docs_.size());

  topicDocs_.clear();
  for (DocIndex d = 0; d < docTopics_.size(); ++d) {
    for (const auto& t : docTopics_[d]) topicDocs_[t].push_back(d);
  }

  closure_.clear();
  for (const auto& node : taxonomy_.nodes()) {
    std::vector<std::string> ids{node.id};
    for (const auto& d : taxonomy_.descendants(node.id)) ids.push_back(d);
    std::sort(ids.begin(), ids.end());
    closure_.emplace(node.id, std::move(ids));
  }

  std::map<std::string, Date> earliest;
  for (const auto& doc : docs_) {
    auto [it, inserted] = earliest.emplace(doc.author, doc.datePublished);
    if (!inserted) it->second = std::min(it->second, doc.datePublished);
  }
  authorOrder_.clear();
  for (const auto& [author, _] : earliest) authorOrder_.push_back(author);
  std::stable_sort(authorOrder_.begin(), authorOrder_.end(),
                   [&](const std::string& a, const std::string& b) {
                     return earliest.at(a) < earliest.at(b);
                   });

  hash_ = digest(payload());
}

std::optional<SearchIndex::DocIndex> SearchIndex::find(std::string_view docId) const {
  if (const auto* d = lookup(byId_, docId)) return *d;
  return std::nullopt;
}

std::span<const SearchIndex::Posting> SearchIndex::postings(std::string_view token) const {
  if (const auto* list = lookup(postings_, token)) return *list;
  return {};
}

std::span<const SearchIndex::DocIndex> SearchIndex::topicDocuments(std::string_view topicId) const {
  if (const auto* list = lookup(topicDocs_, topicId)) return *list;
  return {};
}

bool SearchIndex::covers(DocIndex doc, std::string_view topicId) const {
  const auto& topics = docTopics_[doc];
  if (topics.empty()) return false;
  const auto* ids = lookup(closure_, topicId);
  if (ids == nullptr) return std::binary_search(topics.begin(), topics.end(), topicId);
  // Both sides are sorted.
  auto a = topics.begin();
  auto b = ids->begin();
  while (a != topics.end() && b != ids->end()) {
    if (*a < *b) {
      ++a;
    } else if (*b < *a) {
      ++b;
    } else {
      return true;
    }
  }
  return false;
}

std::size_t SearchIndex::phraseFrequency(const TermClause& clause, DocIndex doc) const {
  std::vector<const Posting*> lists;
  for (const auto& token : clause.tokens) {
    const auto* p = postingFor(postings(token), doc);
    if (p == nullptr) return 0;
    lists.push_back(p);
  }
  if (lists.size() == 1) return lists.front()->positions.size();
  std::size_t count = 0;
  for (std::uint32_t start : lists.front()->positions) {
    bool all = true;
    for (std::size_t i = 1; i < lists.size() && all; ++i) {
      const auto& pos = lists[i]->positions;
      all = std::binary_search(pos.begin(), pos.end(), start + static_cast<std::uint32_t>(i));
    }
    count += all ? 1 : 0;
  }
  return count;
}

std::vector<SearchIndex::DocIndex> SearchIndex::clauseDocuments(const TermClause& clause) const {
  // Intersect the document lists of all tokens, shortest first.
  std::vector<std::span<const Posting>> lists;
  for (const auto& token : clause.tokens) lists.push_back(postings(token));
  std::sort(lists.begin(), lists.end(),
            [](const auto& a, const auto& b) { return a.size() < b.size(); });
  std::vector<DocIndex> docs;
  if (lists.empty()) return docs;
  for (const auto& p : lists.front()) {
    bool all = true;
    for (std::size_t i = 1; i < lists.size() && all; ++i) all = postingFor(lists[i], p.doc) != nullptr;
    if (all) docs.push_back(p.doc);
  }
  if (clause.tokens.size() > 1) {
    std::erase_if(docs, [&](DocIndex d) { return phraseFrequency(clause, d) == 0; });
  }
  return docs;
}

bool SearchIndex::passesFilters(const QueryFilters& filters, DocIndex doc) const {
  const auto& d = docs_[doc];
  if (!filters.authors.empty() && !filters.authors.contains(d.author)) return false;
  if (!filters.kinds.empty() && !filters.kinds.contains(d.kind)) return false;
  if (filters.yearFrom && d.datePublished.year < *filters.yearFrom) return false;
  if (filters.yearTo && d.datePublished.year > *filters.yearTo) return false;
  for (const auto& topic : filters.topics) {
    if (!covers(doc, topic)) return false;
  }
  return true;
}

std::vector<SearchIndex::DocIndex> SearchIndex::evaluate(const Query& query) const {
  std::vector<DocIndex> docs;
  if (query.clauses.empty()) {
    docs.resize(docs_.size());
    std::iota(docs.begin(), docs.end(), DocIndex{0});
  } else {
    std::vector<std::vector<DocIndex>> perClause;
    for (const auto& clause : query.clauses) perClause.push_back(clauseDocuments(clause));
    std::sort(perClause.begin(), perClause.end(),
              [](const auto& a, const auto& b) { return a.size() < b.size(); });
    docs = std::move(perClause.front());
    for (std::size_t i = 1; i < perClause.size() && !docs.empty(); ++i) {
      std::vector<DocIndex> next;
      std::set_intersection(docs.begin(), docs.end(), perClause[i].begin(), perClause[i].end(),
                            std::back_inserter(next));
      docs = std::move(next);
    }
  }
  if (!query.filters.empty()) {
    std::erase_if(docs, [&](DocIndex d) { return !passesFilters(query.filters, d); });
  }
  return docs;
}

// Okapi BM25. A phrase contributes the idf of each of its tokens weighted by
// the saturated phrase frequency, so a matched phrase outranks the same
// tokens scattered through a document.
double SearchIndex::score(const Query& query, DocIndex doc, const Bm25Params& params) const {
  const double n = static_cast<double>(docs_.size());
  const double norm =
      params.k1 * (1.0 - params.b +
                   params.b * static_cast<double>(lengths_[doc]) / std::max(avgLength_, 1e-12));
  double total = 0.0;
  for (const auto& clause : query.clauses) {
    const auto tf = static_cast<double>(phraseFrequency(clause, doc));
    if (tf == 0.0) continue;
    const double saturation = tf * (params.k1 + 1.0) / (tf + norm);
    for (const auto& token : clause.tokens) {
      const auto df = static_cast<double>(postings(token).size());
      total += std::log(1.0 + (n - df + 0.5) / (df + 0.5)) * saturation;
    }
  }
  return total;
}

std::string SearchIndex::snippet(const Query& query, DocIndex doc) const {
  const auto& d = docs_[doc];
  auto sentences = splitSentences(d);
  if (sentences.empty()) return {};
  const Sentence* chosen = &sentences.front();
  for (const auto& s : sentences) {
    const bool hit = std::any_of(query.clauses.begin(), query.clauses.end(), [&](const auto& c) {
      KeywordRule rule;
      rule.tokens = c.tokens;
      return sentenceMatches(s, rule);
    });
    if (hit) {
      chosen = &s;
      break;
    }
  }
  auto text = collapseWhitespace(std::string_view(d.body).substr(chosen->begin,
                                                                chosen->end - chosen->begin));
  return truncateCodePoints(std::move(text), kSnippetChars);
}

std::vector<SearchHit> SearchIndex::rank(const Query& query, std::span<const DocIndex> docs,
                                         std::size_t offset, std::size_t limit) const {
  std::vector<std::pair<double, DocIndex>> scored;
  scored.reserve(docs.size());
  for (DocIndex d : docs) scored.emplace_back(score(query, d), d);
  offset = std::min(offset, scored.size());
  const auto end = offset + std::min(limit, scored.size() - offset);
  auto cmp = [](const auto& a, const auto& b) {
    return a.first != b.first ? a.first > b.first : a.second < b.second;
  };
  std::partial_sort(scored.begin(), scored.begin() + static_cast<std::ptrdiff_t>(end),
                    scored.end(), cmp);

  std::vector<SearchHit> hits;
  for (std::size_t i = offset; i < end; ++i) {
    const auto& doc = docs_[scored[i].second];
    hits.push_back({doc.id, scored[i].first, doc.title, doc.author, doc.datePublished, doc.kind,
                    snippet(query, scored[i].second)});
  }
  return hits;
}

std::vector<FacetEntry> SearchIndex::topicFacet(const Query& query, std::span<const DocIndex> docs,
                                                std::size_t k) const {
  std::map<std::string_view, std::size_t> counts;
  for (DocIndex d : docs) {
    for (const auto& t : docTopics_[d]) {
      if (!query.filters.topics.contains(t)) ++counts[t];
    }
  }
  std::vector<FacetEntry> facet;
  for (const auto& [topic, count] : counts) facet.push_back({std::string(topic), count});
  std::stable_sort(facet.begin(), facet.end(),
                   [](const FacetEntry& a, const FacetEntry& b) { return a.count > b.count; });
  if (facet.size() > k) facet.resize(k);
  return facet;
}

AggregationView SearchIndex::aggregate(const Query& query, std::span<const DocIndex> docs,
                                       AggregationMode mode, std::string_view parentTopic) const {
  AggregationView view;
  view.mode = mode;

  // bucket key -> segment key -> count; both orders are fixed below.
  std::map<std::string, std::map<std::string, std::size_t>> counts;
  std::map<std::string, std::size_t> totals;
  std::vector<std::string> bucketOrder;
  std::vector<std::string> segmentOrder;

  if (mode == AggregationMode::ByAuthorKind || mode == AggregationMode::ByYearKind) {
    if (mode == AggregationMode::ByYearKind && query.filters.authors.size() != 1) {
      throw AggregationError("year_kind needs exactly one author filter", std::string(toString(mode)));
    }
    std::map<int, std::string> years;
    for (DocIndex d : docs) {
      const auto& doc = docs_[d];
      std::string key = doc.author;
      if (mode == AggregationMode::ByYearKind) {
        key = std::to_string(doc.datePublished.year);
        years.emplace(doc.datePublished.year, key);
      }
      ++counts[key][std::string(toString(doc.kind))];
      ++totals[key];
    }
    if (mode == AggregationMode::ByAuthorKind) {
      bucketOrder = authorOrder_;
    } else {
      for (const auto& [_, key] : years) bucketOrder.push_back(key);
    }
    for (auto kind : kAllDocumentKinds) segmentOrder.emplace_back(toString(kind));
  } else {
    if (!taxonomy_.contains(parentTopic)) {
      throw AggregationError("unknown parent topic '" + std::string(parentTopic) + "'",
                             std::string(parentTopic));
    }
    const auto& children = taxonomy_.children(parentTopic);
    if (children.empty()) {
      throw AggregationError("topic '" + std::string(parentTopic) + "' has no subtopics",
                             std::string(parentTopic));
    }
    view.parentTopic = parentTopic;
    for (DocIndex d : docs) {
      if (!covers(d, parentTopic)) continue;
      const auto& author = docs_[d].author;
      bool any = false;
      for (const auto& child : children) {
        if (covers(d, child)) {
          ++counts[author][child];
          any = true;
        }
      }
      if (!any) ++counts[author][std::string(kGeneralSegment)];
      ++totals[author];
    }
    bucketOrder = authorOrder_;
    segmentOrder = children;
    segmentOrder.emplace_back(kGeneralSegment);
  }

  std::set<std::string> used;
  for (const auto& key : bucketOrder) {
    auto it = counts.find(key);
    if (it == counts.end()) continue;
    AggregationBucket bucket{key, {}, totals[key]};
    for (const auto& segment : segmentOrder) {
      if (auto s = it->second.find(segment); s != it->second.end()) {
        bucket.segments.push_back({segment, s->second});
        used.insert(segment);
      }
    }
    view.totalCount += bucket.total;
    view.buckets.push_back(std::move(bucket));
  }
  if (mode == AggregationMode::ByAuthorSubtopic) {
    view.segmentKeys = segmentOrder;
  } else {
    for (const auto& segment : segmentOrder) {
      if (used.contains(segment)) view.segmentKeys.push_back(segment);
    }
  }
  return view;
}

SearchResult SearchIndex::search(const Query& query, std::size_t page, std::size_t pageSize,
                                 std::size_t facetK) const {
  SearchResult result;
  const auto docs = evaluate(query);
  result.totalCount = docs.size();
  const std::size_t offset = (std::max<std::size_t>(page, 1) - 1) * pageSize;
  result.hits = rank(query, docs, offset, pageSize);
  result.topicFacet = topicFacet(query, docs, facetK);
  return result;
}

}  // namespace doris
