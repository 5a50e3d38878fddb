// doris: command-line front end.
//
// Exit codes: 0 success, 1 data error (unreadable or invalid input), 2 usage.

#include <atomic>
#include <chrono>
#include <csignal>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

#include "CLI11.hpp"
#include "doris/annotator.hpp"
#include "doris/api.hpp"
#include "doris/expansion.hpp"
#include "doris/search_index.hpp"
#include "doris/server.hpp"
#include "doris/validation.hpp"

namespace {

using namespace doris;

constexpr int kDataError = 1;
constexpr int kUsageError = 2;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

void printIssues(std::string_view file, std::span<const ParseIssue> issues, std::string_view level) {
  for (const auto& issue : issues) {
    std::cerr << file << ":" << issue.line << ": " << level << ": " << issue.message << "\n";
  }
}

std::vector<Document> readCorpus(const std::string& path) {
  auto parsed = parseCorpus(path);
  printIssues(path, parsed.warnings, "warning");
  printIssues(path, parsed.errors, "error");
  if (!parsed.errors.empty()) {
    throw Error(path + ": " + std::to_string(parsed.errors.size()) + " invalid record(s)", path);
  }
  return std::move(parsed.documents);
}

std::vector<AnnotationStatement> readAnnotations(const std::vector<std::string>& paths) {
  std::vector<AnnotationStatement> all;
  for (const auto& path : paths) {
    auto parsed = parseAnnotations(path);
    printIssues(path, parsed.errors, "error");
    if (!parsed.errors.empty()) {
      throw Error(path + ": " + std::to_string(parsed.errors.size()) + " malformed triple(s)", path);
    }
    all.insert(all.end(), parsed.statements.begin(), parsed.statements.end());
  }
  return all;
}

void writeFile(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write " + path, path);
  out << content;
  if (!out) throw IoError("failed writing " + path, path);
}

// DORIS_INDEX beats --index.
std::string indexPath(const std::string& flag) {
  if (const char* env = std::getenv("DORIS_INDEX"); env != nullptr && *env != '\0') return env;
  return flag;
}

void reportDangling(const ValidationReport& report) {
  for (const auto& id : report.danglingDocs) std::cerr << "error: annotation names unknown document '" << id << "'\n";
  for (const auto& id : report.danglingTopics) std::cerr << "error: annotation names unknown topic '" << id << "'\n";
}

// ---- subcommands ---------------------------------------------------------

struct IngestArgs {
  std::string corpus;
  std::vector<std::string> annotations;
  std::string taxonomy;
  std::string output;
};

int runIngest(const IngestArgs& a) {
  auto docs = readCorpus(a.corpus);
  auto statements = readAnnotations(a.annotations);
  TopicTaxonomy taxonomy = a.taxonomy.empty() ? TopicTaxonomy{} : TopicTaxonomy::load(a.taxonomy);
  auto report = validateCorpus(docs, statements, taxonomy);
  if (a.taxonomy.empty()) report.danglingTopics.clear();  // nothing to resolve against
  if (!a.output.empty()) {
    std::ostringstream out;
    writeCorpus(out, docs);
    writeFile(a.output, out.str());
  }
  std::cout << renderJson(report.toJson());
  reportDangling(report);
  return report.ok() ? 0 : kDataError;
}

struct TaxonomyArgs {
  std::string file;
  std::string corpus;
  std::vector<std::string> annotations;
};

int runTaxonomyValidate(const TaxonomyArgs& a) {
  auto taxonomy = TopicTaxonomy::load(a.file);
  nlohmann::ordered_json out;
  out["topics"] = taxonomy.size();
  out["roots"] = taxonomy.roots();
  std::size_t rules = 0;
  for (const auto& node : taxonomy.nodes()) rules += node.ownRules.size();
  out["rules"] = rules;
  out["warnings"] = taxonomy.warnings();
  bool ok = true;
  if (!a.corpus.empty()) {
    auto docs = readCorpus(a.corpus);
    auto report = validateCorpus(docs, readAnnotations(a.annotations), taxonomy);
    out["corpus"] = report.toJson();
    reportDangling(report);
    ok = report.ok();
  }
  for (const auto& w : taxonomy.warnings()) std::cerr << "warning: " << w << "\n";
  std::cout << renderJson(out);
  return ok ? 0 : kDataError;
}

struct ExpandArgs {
  std::string corpus;
  std::string taxonomy;
  std::string embeddings;
  std::string overrides;
  std::string stopwords;
  std::string output;
  ExpansionConfig cfg;
  double ldaAlpha = 0.0;
};

int runExpand(ExpandArgs a) {
  const auto start = std::chrono::steady_clock::now();
  auto docs = readCorpus(a.corpus);
  auto taxonomy = TopicTaxonomy::load(a.taxonomy);
  std::optional<EmbeddingTable> embeddings;
  if (!a.embeddings.empty()) {
    auto loaded = loadEmbeddings(a.embeddings);
    printIssues(a.embeddings, loaded.warnings, "warning");
    embeddings = std::move(loaded.table);
  }
  LdaOverrides overrides;
  if (!a.overrides.empty()) overrides = LdaOverrides::load(a.overrides);
  auto stopwords = a.stopwords.empty() ? StopwordList::english() : StopwordList::fromFile(a.stopwords);
  if (a.ldaAlpha > 0.0) a.cfg.ldaAlpha = a.ldaAlpha;

  auto result = expandTaxonomy(taxonomy, docs, embeddings ? &*embeddings : nullptr, a.cfg,
                               overrides, stopwords);
  auto text = result.taxonomy.toJson().dump(2) + "\n";
  if (a.output.empty() || a.output == "-") {
    std::cout << text;
  } else {
    writeFile(a.output, text);
  }
  const auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                      std::chrono::steady_clock::now() - start).count();
  std::cerr << "expanded " << taxonomy.size() << " topics: +" << result.addedCooccurrence
            << " co-occurrence, +" << result.addedEmbedding << " embedding, +" << result.addedLda
            << " lda rules; " << result.ldaMapping.size() << " of " << a.cfg.ldaK
            << " lda topics matched (" << ms << " ms)\n";
  return 0;
}

struct AnnotateArgs {
  std::string corpus;
  std::string taxonomy;
  double minEvidence = kDefaultMinEvidence;
  std::string output;
};

int runAnnotate(const AnnotateArgs& a) {
  if (!(a.minEvidence > 0.0)) throw UsageError("--min-evidence must be positive");
  auto docs = readCorpus(a.corpus);
  auto taxonomy = TopicTaxonomy::load(a.taxonomy);
  auto statements = Annotator(taxonomy).annotateCorpus(docs, a.minEvidence);
  std::ostringstream out;
  writeAnnotations(out, statements);
  if (a.output.empty() || a.output == "-") {
    std::cout << out.str();
  } else {
    writeFile(a.output, out.str());
  }
  std::set<std::string_view> topics;
  std::set<std::string_view> annotated;
  for (const auto& s : statements) {
    topics.insert(s.topicId);
    annotated.insert(s.docId);
  }
  std::cerr << "annotated " << annotated.size() << " of " << docs.size() << " docs with "
            << topics.size() << " topics: " << statements.size() << " statements\n";
  return 0;
}

struct IndexArgs {
  std::string corpus;
  std::string taxonomy;
  std::vector<std::string> annotations;
  std::string output;
};

int runIndex(const IndexArgs& a) {
  auto docs = readCorpus(a.corpus);
  auto taxonomy = TopicTaxonomy::load(a.taxonomy);
  auto statements = readAnnotations(a.annotations);
  auto report = validateCorpus(docs, statements, taxonomy);
  if (!report.ok()) {
    reportDangling(report);
    return kDataError;
  }
  auto index = SearchIndex::build(std::move(docs), statements, std::move(taxonomy));
  index.save(a.output);
  std::cerr << "indexed " << index.documentCount() << " docs, " << index.vocabularySize()
            << " terms, " << statements.size() << " annotations; version " << index.buildHash()
            << "\n";
  return 0;
}

struct QueryArgs {
  std::string text;
  std::string index = "doris.idx";
  std::vector<std::string> authors;
  std::vector<std::string> kinds;
  std::vector<std::string> topics;
  std::optional<int> yearFrom;
  std::optional<int> yearTo;
  std::size_t page = 1;
  std::size_t pageSize = 10;
  std::string aggregate;
  std::string parentTopic;
  std::string format = "text";
};

QueryParams toParams(const QueryArgs& a) {
  QueryParams p;
  if (!a.text.empty()) p.emplace("q", a.text);
  for (const auto& v : a.authors) p.emplace("author", v);
  for (const auto& v : a.kinds) p.emplace("kind", v);
  for (const auto& v : a.topics) p.emplace("topic", v);
  if (a.yearFrom) p.emplace("yearFrom", std::to_string(*a.yearFrom));
  if (a.yearTo) p.emplace("yearTo", std::to_string(*a.yearTo));
  if (a.page != 1) p.emplace("page", std::to_string(a.page));
  if (!a.aggregate.empty()) p.emplace("mode", a.aggregate);
  if (!a.parentTopic.empty()) p.emplace("parentTopic", a.parentTopic);
  return p;
}

void printText(const nlohmann::json& body, bool aggregate) {
  if (aggregate) {
    std::cout << body["mode"].get<std::string>() << ": " << body["totalCount"] << " docs\n";
    for (const auto& b : body["buckets"]) {
      std::cout << "  " << b["key"].get<std::string>() << " (" << b["total"] << ")";
      for (const auto& s : b["segments"]) std::cout << "  " << s["key"].get<std::string>() << "=" << s["count"];
      std::cout << "\n";
    }
    return;
  }
  std::cout << body["totalCount"] << " matching docs, page " << body["page"] << "\n";
  std::size_t rank = (body["page"].get<std::size_t>() - 1) * body["pageSize"].get<std::size_t>();
  for (const auto& h : body["hits"]) {
    std::cout << ++rank << ". " << h["docId"].get<std::string>() << "  "
              << h["title"].get<std::string>() << "\n   " << h["author"].get<std::string>() << ", "
              << h["date"].get<std::string>() << ", " << h["kind"].get<std::string>()
              << ", score " << h["score"].get<double>() << "\n   "
              << h["snippet"].get<std::string>() << "\n";
  }
  if (!body["topicFacet"].empty()) {
    std::cout << "topics:";
    for (const auto& f : body["topicFacet"]) std::cout << "  " << f["topicId"].get<std::string>() << " (" << f["count"] << ")";
    std::cout << "\n";
  }
}

int runQuery(const QueryArgs& a) {
  const auto params = toParams(a);
  try {
    queryFromParams(params);
  } catch (const InvalidArgument& e) {
    throw UsageError(e.what());
  }
  const auto index = SearchIndex::load(indexPath(a.index));
  const bool aggregate = !a.aggregate.empty();
  const auto res = aggregate ? handleAggregate(index, params)
                             : handleSearch(index, params, {a.pageSize, 5});
  if (res.status == 400) throw UsageError(nlohmann::json::parse(res.body)["error"].get<std::string>());
  if (a.format == "json") {
    std::cout << res.body;
  } else {
    printText(nlohmann::json::parse(res.body), aggregate);
  }
  return 0;
}

struct ServeArgs {
  std::string index = "doris.idx";
  std::string bind = "127.0.0.1:8080";
  std::string staticDir;
  bool adminReload = false;
  std::size_t pageSize = 10;
  std::size_t facetK = 5;
};

std::atomic<int> gSignal{0};

extern "C" void onSignal(int sig) { gSignal.store(sig); }

int runServe(const ServeArgs& a) {
  ServerOptions options;
  try {
    std::tie(options.host, options.port) = parseBindAddress(a.bind);
  } catch (const InvalidArgument& e) {
    throw UsageError(e.what());
  }
  if (a.pageSize == 0) throw UsageError("--page-size must be at least 1");
  options.indexPath = indexPath(a.index);
  if (!std::filesystem::exists(options.indexPath)) {
    throw IoError("index not found: " + options.indexPath.string(), options.indexPath.string());
  }
  options.staticDir = a.staticDir;
  options.adminReload = a.adminReload;
  options.api = {a.pageSize, a.facetK};

  Server server(options);
  const int port = server.bind();
  std::cout << "listening on http://" << options.host << ":" << port << std::endl;

  std::signal(SIGHUP, onSignal);
  std::signal(SIGINT, onSignal);
  std::signal(SIGTERM, onSignal);

  std::thread http([&] { server.listen(); });
  if (auto error = server.reload(); !error.empty()) {
    std::cerr << "error: " << error << "\n";
    server.stop();
    http.join();
    return kDataError;
  }
  std::cerr << "index " << server.snapshot()->buildHash() << " loaded ("
            << server.snapshot()->documentCount() << " docs)\n";

  for (;;) {
    std::this_thread::sleep_for(std::chrono::milliseconds(100));
    const int sig = gSignal.exchange(0);
    if (sig == SIGHUP) {
      if (auto error = server.reload(); !error.empty()) {
        std::cerr << "reload failed, keeping current index: " << error << "\n";
      } else {
        std::cerr << "reloaded index " << server.snapshot()->buildHash() << "\n";
      }
    } else if (sig != 0) {
      break;
    }
  }
  server.stop();
  http.join();
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"doris: topic-annotated exploration of a speech corpus"};
  app.require_subcommand(1);

  IngestArgs ingest;
  auto* cIngest = app.add_subcommand("ingest", "Parse and validate a corpus, print a report");
  cIngest->add_option("--corpus", ingest.corpus, "Corpus JSONL")->required()->check(CLI::ExistingFile);
  cIngest->add_option("--annotations", ingest.annotations, "Annotation N-Triples file(s)")->check(CLI::ExistingFile);
  cIngest->add_option("--taxonomy", ingest.taxonomy, "Taxonomy JSON for resolving topic ids")->check(CLI::ExistingFile);
  cIngest->add_option("-o,--output", ingest.output, "Write the normalized corpus here");

  TaxonomyArgs tax;
  auto* cTax = app.add_subcommand("taxonomy", "Taxonomy tools");
  cTax->require_subcommand(1);
  auto* cValidate = cTax->add_subcommand("validate", "Load a taxonomy and print a report");
  cValidate->add_option("file", tax.file, "Taxonomy JSON")->required()->check(CLI::ExistingFile);
  cValidate->add_option("--corpus", tax.corpus, "Also validate this corpus")->check(CLI::ExistingFile);
  cValidate->add_option("--annotations", tax.annotations, "Annotation file(s)")->check(CLI::ExistingFile);

  ExpandArgs expand;
  auto* cExpand = app.add_subcommand("expand", "Grow topic keywords from the corpus");
  cExpand->add_option("--corpus", expand.corpus)->required()->check(CLI::ExistingFile);
  cExpand->add_option("--taxonomy", expand.taxonomy)->required()->check(CLI::ExistingFile);
  cExpand->add_option("--embeddings", expand.embeddings, "word vectors, `token v1 .. vD` per line")->check(CLI::ExistingFile);
  cExpand->add_option("--lda-overrides", expand.overrides, "JSON {\"k\": topicId|null}")->check(CLI::ExistingFile);
  cExpand->add_option("--stopwords", expand.stopwords)->check(CLI::ExistingFile);
  cExpand->add_option("--lda-k", expand.cfg.ldaK)->capture_default_str();
  cExpand->add_option("--lda-iters", expand.cfg.ldaIterations)->capture_default_str();
  cExpand->add_option("--lda-alpha", expand.ldaAlpha, "default 50/K");
  cExpand->add_option("--lda-beta", expand.cfg.ldaBeta)->capture_default_str();
  cExpand->add_option("--lda-min-freq", expand.cfg.ldaMinTokenFrequency)->capture_default_str();
  cExpand->add_option("--seed", expand.cfg.rngSeed)->capture_default_str();
  cExpand->add_option("--cooccur-min-count", expand.cfg.cooccurMinCount)->capture_default_str();
  cExpand->add_option("--cooccur-min-pmi", expand.cfg.cooccurMinPmi)->capture_default_str();
  cExpand->add_option("--cooccur-top-n", expand.cfg.cooccurTopN)->capture_default_str();
  cExpand->add_option("--embed-threshold", expand.cfg.embedThreshold)->capture_default_str();
  cExpand->add_option("--embed-top-n", expand.cfg.embedTopN)->capture_default_str();
  cExpand->add_option("-o,--output", expand.output, "Expanded taxonomy JSON (default stdout)");

  AnnotateArgs annotate;
  auto* cAnnotate = app.add_subcommand("annotate", "Tag documents with topics");
  cAnnotate->add_option("--corpus", annotate.corpus)->required()->check(CLI::ExistingFile);
  cAnnotate->add_option("--taxonomy", annotate.taxonomy)->required()->check(CLI::ExistingFile);
  cAnnotate->add_option("--min-evidence", annotate.minEvidence)->capture_default_str();
  cAnnotate->add_option("-o,--output", annotate.output, "N-Triples output (default stdout)");

  IndexArgs idx;
  auto* cIndex = app.add_subcommand("index", "Build the search index");
  cIndex->add_option("--corpus", idx.corpus)->required()->check(CLI::ExistingFile);
  cIndex->add_option("--taxonomy", idx.taxonomy)->required()->check(CLI::ExistingFile);
  cIndex->add_option("--annotations", idx.annotations)->check(CLI::ExistingFile);
  cIndex->add_option("-o,--output", idx.output)->required();

  QueryArgs query;
  auto* cQuery = app.add_subcommand("query", "Search the index");
  cQuery->add_option("text", query.text, "Words; quote a phrase as \"new deal\"");
  cQuery->add_option("--index", query.index, "Index file (DORIS_INDEX overrides)")->capture_default_str();
  cQuery->add_option("--author", query.authors);
  cQuery->add_option("--kind", query.kinds);
  cQuery->add_option("--topic", query.topics);
  cQuery->add_option("--year-from", query.yearFrom);
  cQuery->add_option("--year-to", query.yearTo);
  cQuery->add_option("--page", query.page)->check(CLI::PositiveNumber)->capture_default_str();
  cQuery->add_option("--page-size", query.pageSize)->check(CLI::PositiveNumber)->capture_default_str();
  cQuery->add_option("--aggregate", query.aggregate, "author_kind | year_kind | author_subtopic")
      ->check(CLI::IsMember({"author_kind", "year_kind", "author_subtopic"}));
  cQuery->add_option("--parent-topic", query.parentTopic);
  cQuery->add_option("--format", query.format)->check(CLI::IsMember({"text", "json"}))->capture_default_str();

  ServeArgs serve;
  auto* cServe = app.add_subcommand("serve", "Serve the HTTP API");
  cServe->add_option("--index", serve.index, "Index file (DORIS_INDEX overrides)")->capture_default_str();
  cServe->add_option("--bind", serve.bind, "host:port, port 0 picks one")->capture_default_str();
  cServe->add_option("--static", serve.staticDir, "Directory served under /")->check(CLI::ExistingDirectory);
  cServe->add_flag("--admin-reload", serve.adminReload, "Enable POST /api/admin/reload");
  cServe->add_option("--page-size", serve.pageSize)->capture_default_str();
  cServe->add_option("--facet-k", serve.facetK)->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsageError;
  }

  try {
    if (*cIngest) return runIngest(ingest);
    if (*cValidate) return runTaxonomyValidate(tax);
    if (*cExpand) return runExpand(expand);
    if (*cAnnotate) return runAnnotate(annotate);
    if (*cIndex) return runIndex(idx);
    if (*cQuery) return runQuery(query);
    if (*cServe) return runServe(serve);
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kUsageError;
  } catch (const doris::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kDataError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kDataError;
  }
  return kUsageError;
}
