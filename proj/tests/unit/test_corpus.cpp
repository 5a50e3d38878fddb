#include <gtest/gtest.h>

#include <sstream>

#include "doris/taxonomy.hpp"
#include "doris/validation.hpp"
#include "test_support.hpp"

namespace doris {
namespace {

using testing::dataPath;

CorpusParseResult parse(std::string_view text) {
  std::istringstream in{std::string(text)};
  return parseCorpus(in);
}

AnnotationParseResult parseTriples(std::string_view text) {
  std::istringstream in{std::string(text)};
  return parseAnnotations(in, "mem");
}

TEST(CorpusParse, SingleRecord) {
  auto r = parse(R"({"id":"sotu-1862","title":"Second Annual Message","author":"Abraham Lincoln","date":"1862-12-01","kind":"StateOfUnionReport","text":"..."})");
  ASSERT_TRUE(r.errors.empty());
  ASSERT_EQ(r.documents.size(), 1u);
  const auto& d = r.documents[0];
  EXPECT_EQ(d.id, "sotu-1862");
  EXPECT_EQ(d.author, "Abraham Lincoln");
  EXPECT_EQ(d.kind, DocumentKind::StateOfUnionReport);
  EXPECT_EQ(d.datePublished, (Date{1862, 12, 1}));
}

TEST(CorpusParse, EmptyInput) {
  auto r = parse("");
  EXPECT_TRUE(r.documents.empty());
  EXPECT_TRUE(r.errors.empty());
  EXPECT_TRUE(r.warnings.empty());
}

TEST(CorpusParse, DuplicateKeepsFirst) {
  auto r = parse(
      R"({"id":"x","title":"one","author":"a","date":"1900-01-01","kind":"Other","text":"first"})"
      "\n"
      R"({"id":"x","title":"two","author":"a","date":"1900-01-01","kind":"Other","text":"second"})");
  ASSERT_EQ(r.documents.size(), 1u);
  EXPECT_EQ(r.documents[0].body, "first");
  ASSERT_EQ(r.errors.size(), 1u);
  EXPECT_EQ(r.errors[0].kind, IssueKind::DuplicateId);
  EXPECT_EQ(r.errors[0].subject, "x");
  EXPECT_EQ(r.errors[0].line, 2u);
}

TEST(CorpusParse, UnknownKindIsOtherWithWarning) {
  auto r = parse(R"({"id":"m","title":"t","author":"a","date":"1900-01-01","kind":"Memo","text":"b"})");
  ASSERT_EQ(r.documents.size(), 1u);
  EXPECT_EQ(r.documents[0].kind, DocumentKind::Other);
  EXPECT_TRUE(r.errors.empty());
  ASSERT_EQ(r.warnings.size(), 1u);
  EXPECT_EQ(r.warnings[0].kind, IssueKind::UnknownKind);
}

TEST(CorpusParse, RecordErrorsCarryLineNumbers) {
  auto r = parse(
      "not json\n"
      "\n"
      R"({"id":"d","title":"t","author":"a","date":"1900-02-30","kind":"Other","text":"b"})" "\n"
      R"({"id":"bad id","title":"t","author":"a","date":"1900-01-01","kind":"Other","text":"b"})" "\n"
      R"({"id":"e","title":"t","author":"a","date":"1900-01-01","kind":"Other","text":"  "})" "\n"
      R"({"id":"f","title":"t","author":"a","date":"1900-01-01","kind":"Other"})" "\n");
  EXPECT_TRUE(r.documents.empty());
  ASSERT_EQ(r.errors.size(), 5u);
  EXPECT_EQ(r.errors[0].kind, IssueKind::MalformedRecord);
  EXPECT_EQ(r.errors[0].line, 1u);
  EXPECT_EQ(r.errors[1].kind, IssueKind::InvalidDate);
  EXPECT_EQ(r.errors[1].subject, "d");
  EXPECT_EQ(r.errors[1].line, 3u);
  EXPECT_EQ(r.errors[2].kind, IssueKind::InvalidId);
  EXPECT_EQ(r.errors[3].kind, IssueKind::EmptyBody);
  EXPECT_EQ(r.errors[4].kind, IssueKind::MalformedRecord);
}

TEST(CorpusParse, ExtraFieldsIgnored) {
  auto r = parse(R"({"id":"a","title":"t","author":"x","date":"2000-02-29","kind":"Other","text":"b","url":"u"})");
  EXPECT_EQ(r.documents.size(), 1u);
}

TEST(CorpusParse, SerializeRoundTrip) {
  const auto& docs = testing::fixtureCorpus();
  std::ostringstream out;
  writeCorpus(out, docs);
  auto again = parse(out.str());
  EXPECT_TRUE(again.errors.empty());
  EXPECT_EQ(again.documents, docs);
}

TEST(DocumentKind, NamesRoundTrip) {
  for (auto kind : kAllDocumentKinds) {
    auto name = toString(kind);
    EXPECT_EQ(parseDocumentKind(name), kind) << name;
  }
  EXPECT_FALSE(parseDocumentKind("stateofunionreport").has_value());
  EXPECT_EQ(toString(DocumentKind::StateOfUnionReport), "StateOfUnionReport");
}

TEST(Date, ParseIso) {
  EXPECT_EQ(Date::parseIso("1862-12-01"), (Date{1862, 12, 1}));
  EXPECT_EQ(Date::parseIso("2000-02-29")->toIso(), "2000-02-29");
  EXPECT_FALSE(Date::parseIso("1900-02-29"));
  EXPECT_FALSE(Date::parseIso("1862-12-1"));
  EXPECT_FALSE(Date::parseIso("1862/12/01"));
  EXPECT_FALSE(Date::parseIso(""));
  EXPECT_LT((Date{1862, 12, 1}), (Date{1863, 1, 1}));
}

TEST(Annotations, ParsesTriple) {
  auto r = parseTriples(
      "<urn:doris:doc:sotu-1862> <http://schema.org/about> <urn:doris:topic:race_relations> .\n");
  ASSERT_TRUE(r.errors.empty());
  ASSERT_EQ(r.statements.size(), 1u);
  EXPECT_EQ(r.statements[0].docId, "sotu-1862");
  EXPECT_EQ(r.statements[0].topicId, "race_relations");
  EXPECT_EQ(r.statements[0].source, "mem");
  EXPECT_EQ(AnnotationStatement::predicate, "about");
}

TEST(Annotations, CommentsOnly) {
  auto r = parseTriples("# header\n\n# another\n");
  EXPECT_TRUE(r.statements.empty());
  EXPECT_TRUE(r.errors.empty());
}

TEST(Annotations, GrammarIsStrict) {
  const char* bad[] = {
      "<urn:doris:doc:a> <http://schema.org/about> <urn:doris:topic:b>",      // no " ."
      "<urn:doris:doc:a> <http://schema.org/about> <urn:doris:topic:b>.",     // no space
      "<urn:doris:doc:a>  <http://schema.org/about> <urn:doris:topic:b> .",   // double space
      "<urn:doris:doc:a> <http://schema.org/name> <urn:doris:topic:b> .",     // predicate
      "<urn:other:a> <http://schema.org/about> <urn:doris:topic:b> .",        // prefix
      "<urn:doris:doc:a> <http://schema.org/about> <urn:doris:topic:b> . x",  // trailing
  };
  for (const char* line : bad) {
    auto r = parseTriples(line);
    EXPECT_TRUE(r.statements.empty()) << line;
    ASSERT_EQ(r.errors.size(), 1u) << line;
    EXPECT_EQ(r.errors[0].kind, IssueKind::MalformedTriple);
  }
}

TEST(Annotations, OrderPreservingAndIdempotent) {
  std::vector<AnnotationStatement> in = {{"d2", "t1", {}}, {"d1", "t9", {}}, {"d1", "t1", {}}};
  std::ostringstream out;
  writeAnnotations(out, in);
  auto once = parseTriples(out.str());
  std::ostringstream again;
  writeAnnotations(again, once.statements);
  EXPECT_EQ(out.str(), again.str());
  ASSERT_EQ(once.statements.size(), 3u);
  for (std::size_t i = 0; i < in.size(); ++i) {
    EXPECT_EQ(once.statements[i].docId, in[i].docId);
    EXPECT_EQ(once.statements[i].topicId, in[i].topicId);
  }
}

TEST(Validation, DanglingReferences) {
  auto taxonomy = TopicTaxonomy::load(dataPath("taxonomy.json"));
  std::vector<Document> docs = {testing::makeDoc("d1", "body")};
  std::vector<AnnotationStatement> ann = {{"zzz", "economy", {}}, {"d1", "nope", {}}, {"d1", "health", {}}};
  auto report = validateCorpus(docs, ann, taxonomy);
  EXPECT_EQ(report.danglingDocs, std::vector<std::string>{"zzz"});
  EXPECT_EQ(report.danglingTopics, std::vector<std::string>{"nope"});
  EXPECT_FALSE(report.ok());
}

TEST(Validation, EmptyInputs) {
  auto report = validateCorpus({}, {}, TopicTaxonomy{});
  EXPECT_EQ(report.documentCount, 0u);
  EXPECT_EQ(report.annotationCount, 0u);
  for (auto c : report.kindCounts) EXPECT_EQ(c, 0u);
  EXPECT_TRUE(report.authorCounts.empty());
  EXPECT_TRUE(report.ok());
}

// Counts from a one-pass Python scan of the fixture file:
//   collections.Counter(json.loads(l)["kind"] for l in open(...))
TEST(Validation, FixtureKindCounts) {
  auto report = validateCorpus(testing::fixtureCorpus(), {}, TopicTaxonomy{});
  EXPECT_EQ(report.documentCount, 60u);
  EXPECT_EQ(report.count(DocumentKind::StateOfUnionReport), 17u);
  EXPECT_EQ(report.count(DocumentKind::Proclamation), 13u);
  EXPECT_EQ(report.count(DocumentKind::ExecutiveAction), 12u);
  EXPECT_EQ(report.count(DocumentKind::InauguralAddress), 10u);
  EXPECT_EQ(report.count(DocumentKind::PublicSpeech), 4u);
  EXPECT_EQ(report.count(DocumentKind::CampaignSpeech), 3u);
  EXPECT_EQ(report.count(DocumentKind::Other), 1u);  // the Memorandum
  EXPECT_EQ(report.count(DocumentKind::CommencementAddress), 0u);
  EXPECT_EQ(report.count(DocumentKind::PressRelease), 0u);
  EXPECT_EQ(report.authorCounts.size(), 10u);
  for (const auto& [author, n] : report.authorCounts) EXPECT_EQ(n, 6u) << author;
}

}  // namespace
}  // namespace doris
