#include <gtest/gtest.h>

#include <sstream>

#include "doris/embeddings.hpp"
#include "test_support.hpp"

namespace doris {
namespace {

const EmbeddingTable& fixtureTable() {
  static const auto t = loadEmbeddings(testing::dataPath("embeddings_200.txt")).table;
  return t;
}

EmbeddingLoadResult loadText(const std::string& text) {
  std::istringstream in(text);
  return loadEmbeddings(in);
}

TEST(Embeddings, LoadSmallFile) {
  auto r = loadText("a 1 0 0 0\nb 0 1 0 0\nc 1 1 0 0\n");
  EXPECT_TRUE(r.warnings.empty());
  EXPECT_EQ(r.table.dimension(), 4u);
  EXPECT_EQ(r.table.size(), 3u);
  EXPECT_NEAR(r.table.cosine("a", "c"), 1 / std::sqrt(2.0), 1e-15);
  EXPECT_EQ(r.table.cosine("a", "b"), 0.0);
}

TEST(Embeddings, ShortLineSkipped) {
  auto r = loadText("a 1 0 0 0\nb 0 1 0\nc 1 1 0 0\nd x y z w\n");
  EXPECT_EQ(r.table.size(), 2u);
  ASSERT_EQ(r.warnings.size(), 2u);
  EXPECT_EQ(r.warnings[0].line, 2u);
  EXPECT_EQ(r.warnings[0].subject, "b");
  EXPECT_FALSE(r.table.contains("b"));
}

TEST(Embeddings, EmptyFile) {
  try {
    loadText("\n\n");
    FAIL();
  } catch (const ExpansionError& e) {
    EXPECT_EQ(e.code(), ExpansionError::Code::EmptyFile);
  }
  EXPECT_THROW(loadEmbeddings("/nonexistent/vectors.txt"), IoError);
}

TEST(Embeddings, AddRejectsWrongDimension) {
  EmbeddingTable t(3);
  std::vector<double> v = {1, 2};
  EXPECT_THROW(t.add("x", v), InvalidArgument);
  std::vector<double> w = {1, 2, 3};
  EXPECT_TRUE(t.add("x", w));
  EXPECT_FALSE(t.add("x", w));
}

TEST(Embeddings, CosineEdgeCases) {
  std::vector<double> zero = {0, 0}, u = {1, 2}, neg = {-2, -4};
  EXPECT_EQ(cosineSimilarity(zero, u), 0.0);
  EXPECT_DOUBLE_EQ(cosineSimilarity(u, u), 1.0);
  EXPECT_DOUBLE_EQ(cosineSimilarity(u, neg), -1.0);
}

// Values from numpy: float64 dot / (norm * norm) over the fixture file.
TEST(Embeddings, FixtureCosines) {
  const auto& t = fixtureTable();
  EXPECT_EQ(t.dimension(), 50u);
  EXPECT_NEAR(t.cosine("king", "queen"), 0.8764256256003707, 1e-12);
  EXPECT_NEAR(t.cosine("king", "banana"), 0.06578122500868867, 1e-12);
  EXPECT_NEAR(t.cosine("war", "conflict"), 0.8331851061061327, 1e-12);
}

TEST(Embeddings, Neighbors) {
  const auto& t = fixtureTable();
  ExpansionConfig cfg;
  auto n = embeddingNeighbors(t, "war", cfg);
  ASSERT_FALSE(n.empty());
  EXPECT_LE(n.size(), cfg.embedTopN);
  EXPECT_TRUE(std::any_of(n.begin(), n.end(), [](const auto& s) { return s.token == "conflict"; }));
  for (std::size_t i = 0; i < n.size(); ++i) {
    EXPECT_NE(n[i].token, "war");
    EXPECT_GE(n[i].score, cfg.embedThreshold);
    if (i > 0) EXPECT_GE(n[i - 1].score, n[i].score);
  }
  EXPECT_EQ(embeddingNeighbors(t, "WAR", cfg), n);

  cfg.embedThreshold = 1.01;
  EXPECT_TRUE(embeddingNeighbors(t, "war", cfg).empty());
}

TEST(Embeddings, UnknownToken) {
  try {
    embeddingNeighbors(fixtureTable(), "zzzz", {});
    FAIL();
  } catch (const ExpansionError& e) {
    EXPECT_EQ(e.code(), ExpansionError::Code::UnknownToken);
    EXPECT_EQ(e.subject(), "zzzz");
  }
}

}  // namespace
}  // namespace doris
