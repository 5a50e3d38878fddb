#include <gtest/gtest.h>

#include <cstring>
#include <random>

#include "doris/lda.hpp"
#include "test_support.hpp"

namespace doris {
namespace {

using Bags = std::vector<std::vector<std::string>>;

Bags fixtureBags() {
  Bags bags;
  for (const auto& d : testing::fixtureCorpus()) bags.push_back(tokenize(d.body));
  return bags;
}

ExpansionConfig smallConfig() {
  ExpansionConfig cfg;
  cfg.ldaK = 8;
  cfg.ldaIterations = 50;
  return cfg;
}

// Two disjoint three-word vocabularies, 20 long documents each.
Bags separable() {
  const std::vector<std::string> fruit = {"apple", "banana", "fruit"};
  const std::vector<std::string> engine = {"engine", "wheel", "motor"};
  std::mt19937 rng(42);
  Bags docs;
  for (int d = 0; d < 40; ++d) {
    const auto& words = d < 20 ? fruit : engine;
    std::vector<std::string> bag;
    for (int i = 0; i < 120; ++i) bag.push_back(words[rng() % words.size()]);
    docs.push_back(std::move(bag));
  }
  return docs;
}

void expectStochastic(std::span<const double> m, std::size_t rows, std::size_t cols) {
  ASSERT_EQ(m.size(), rows * cols);
  for (std::size_t r = 0; r < rows; ++r) {
    double sum = 0;
    for (std::size_t c = 0; c < cols; ++c) {
      EXPECT_GE(m[r * cols + c], 0.0);
      sum += m[r * cols + c];
    }
    EXPECT_NEAR(sum, 1.0, 1e-9) << "row " << r;
  }
}

TEST(Lda, RowStochastic) {
  auto model = trainLda(fixtureBags(), smallConfig());
  EXPECT_EQ(model.topics, 8u);
  EXPECT_TRUE(std::is_sorted(model.vocabulary.begin(), model.vocabulary.end()));
  expectStochastic(model.topicWord, model.topics, model.vocabularySize());
  expectStochastic(model.docTopic, model.documentCount(), model.topics);
  EXPECT_DOUBLE_EQ(model.alpha, 50.0 / 8);
}

TEST(Lda, SameSeedSameBytes) {
  auto bags = fixtureBags();
  auto a = trainLda(bags, smallConfig());
  auto b = trainLda(bags, smallConfig());
  ASSERT_EQ(a.topicWord.size(), b.topicWord.size());
  EXPECT_EQ(0, std::memcmp(a.topicWord.data(), b.topicWord.data(), a.topicWord.size() * sizeof(double)));
  EXPECT_EQ(0, std::memcmp(a.docTopic.data(), b.docTopic.data(), a.docTopic.size() * sizeof(double)));

  auto cfg = smallConfig();
  cfg.rngSeed = 43;
  EXPECT_NE(trainLda(bags, cfg).topicWord, a.topicWord);
}

TEST(Lda, SeparableCorpus) {
  ExpansionConfig cfg;
  cfg.ldaK = 2;
  cfg.ldaIterations = 200;
  auto model = trainLda(separable(), cfg);
  ASSERT_EQ(model.documentCount(), 40u);
  for (std::size_t d = 0; d < 40; ++d) {
    auto row = model.documentRow(d);
    EXPECT_GT(*std::max_element(row.begin(), row.end()), 0.8) << d;
  }
  // the two halves land on different topics
  auto dominant = [&](std::size_t d) {
    auto row = model.documentRow(d);
    return std::max_element(row.begin(), row.end()) - row.begin();
  };
  EXPECT_NE(dominant(0), dominant(39));
  auto top = topWords(model, dominant(0), 3);
  EXPECT_EQ(std::set<std::string>(top.begin(), top.end()),
            (std::set<std::string>{"apple", "banana", "fruit"}));
}

TEST(Lda, TopWordsBounds) {
  auto model = trainLda(separable(), [] {
    ExpansionConfig c;
    c.ldaK = 2;
    c.ldaIterations = 20;
    return c;
  }());
  EXPECT_TRUE(topWords(model, 0, 0).empty());
  auto all = topWords(model, 1, 100);
  EXPECT_EQ(all.size(), model.vocabularySize());
  try {
    topWords(model, 2, 3);
    FAIL();
  } catch (const ExpansionError& e) {
    EXPECT_EQ(e.code(), ExpansionError::Code::IndexOutOfRange);
  }
}

TEST(Lda, Errors) {
  auto code = [](const Bags& bags, std::size_t k) {
    ExpansionConfig cfg;
    cfg.ldaK = k;
    cfg.ldaIterations = 5;
    try {
      trainLda(bags, cfg);
    } catch (const ExpansionError& e) {
      return e.code();
    }
    return ExpansionError::Code::InvalidConfig;  // sentinel: no error
  };
  EXPECT_EQ(code(separable(), 1), ExpansionError::Code::InvalidK);
  EXPECT_EQ(code({}, 2), ExpansionError::Code::EmptyVocabulary);
  EXPECT_EQ(code({{"the", "and"}, {"rare"}}, 2), ExpansionError::Code::EmptyVocabulary);
}

TEST(Lda, DocumentsEmptyAfterFilteringAreDropped) {
  auto bags = separable();
  bags.insert(bags.begin() + 5, {"the", "of", "unique"});
  ExpansionConfig cfg;
  cfg.ldaK = 2;
  cfg.ldaIterations = 10;
  auto model = trainLda(bags, cfg);
  EXPECT_EQ(model.documentCount(), 40u);
  EXPECT_EQ(std::count(model.documentIndex.begin(), model.documentIndex.end(), 5u), 0);
  EXPECT_EQ(model.documentIndex[5], 6u);
  EXPECT_EQ(std::find(model.vocabulary.begin(), model.vocabulary.end(), "unique"),
            model.vocabulary.end());
}

// Hand-built topic-word matrix over a tiny vocabulary.
LdaModel handModel() {
  LdaModel m;
  m.vocabulary = {"apple", "banana", "economic", "economy", "exports", "tariff", "trade"};
  m.topics = 4;
  auto row = [&](std::map<std::string, double> w) {
    for (const auto& v : m.vocabulary) m.topicWord.push_back(w.contains(v) ? w[v] : 0.0);
  };
  row({{"tariff", .4}, {"trade", .3}, {"exports", .2}, {"apple", .1}});
  row({{"apple", .5}, {"banana", .5}});
  row({{"economy", .4}, {"economic", .3}, {"trade", .2}, {"banana", .1}});
  row({{"tariff", .5}, {"apple", .5}});
  return m;
}

const TopicTaxonomy& seedTaxonomy() {
  static const auto t = TopicTaxonomy::load(testing::dataPath("taxonomy.json"));
  return t;
}

TEST(LdaMatch, PicksMostSpecificTopic) {
  ExpansionConfig cfg;
  cfg.ldaMatchTopWords = 3;
  auto mapping = matchLdaTopics(handModel(), seedTaxonomy(), {}, cfg);
  // topic 0 overlaps economy and trade_relations equally; the child is narrower
  EXPECT_EQ(mapping, (std::map<std::size_t, std::string>{{0, "trade_relations"}, {2, "economy"}}));
}

TEST(LdaMatch, Overrides) {
  ExpansionConfig cfg;
  cfg.ldaMatchTopWords = 3;
  LdaOverrides o;
  o.entries[0] = std::nullopt;
  o.entries[1] = "health";
  auto mapping = matchLdaTopics(handModel(), seedTaxonomy(), o, cfg);
  EXPECT_EQ(mapping, (std::map<std::size_t, std::string>{{1, "health"}, {2, "economy"}}));

  LdaOverrides outOfRange;
  outOfRange.entries[4] = "health";
  try {
    matchLdaTopics(handModel(), seedTaxonomy(), outOfRange, cfg);
    FAIL();
  } catch (const ExpansionError& e) {
    EXPECT_EQ(e.code(), ExpansionError::Code::IndexOutOfRange);
  }

  LdaOverrides unknown;
  unknown.entries[1] = "nope";
  try {
    matchLdaTopics(handModel(), seedTaxonomy(), unknown, cfg);
    FAIL();
  } catch (const TaxonomyError& e) {
    EXPECT_EQ(e.code(), TaxonomyError::Code::UnknownTopic);
  }
}

TEST(LdaOverrides, FromJson) {
  auto o = LdaOverrides::fromJson(nlohmann::json::parse(R"({"7": "security", "12": null})"));
  EXPECT_EQ(o.entries.size(), 2u);
  EXPECT_EQ(o.entries.at(7), "security");
  EXPECT_FALSE(o.entries.at(12).has_value());

  for (const char* bad : {R"([])", R"({"x": "a"})", R"({"-1": "a"})", R"({"3": 4})"}) {
    try {
      LdaOverrides::fromJson(nlohmann::json::parse(bad));
      ADD_FAILURE() << bad;
    } catch (const ExpansionError& e) {
      EXPECT_EQ(e.code(), ExpansionError::Code::MalformedOverrides) << bad;
    }
  }
}

}  // namespace
}  // namespace doris
