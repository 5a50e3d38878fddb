#include <gtest/gtest.h>

#include <sstream>

#include "doris/error.hpp"
#include "doris/textprep.hpp"
#include "test_support.hpp"

namespace doris {
namespace {

using Tokens = std::vector<std::string>;

TEST(Tokenize, Basic) {
  EXPECT_EQ(tokenize("Oil, and GAS."), (Tokens{"oil", "and", "gas"}));
  EXPECT_TRUE(tokenize("").empty());
  EXPECT_TRUE(tokenize(" ,.;-- ").empty());
  EXPECT_EQ(tokenize("the State-of-the-Union (1862)"),
            (Tokens{"the", "state", "of", "the", "union", "1862"}));
}

TEST(Tokenize, Apostrophes) {
  EXPECT_EQ(tokenize("don't"), Tokens{"don't"});
  EXPECT_EQ(tokenize("don’t"), Tokens{"don't"});
  EXPECT_EQ(tokenize("'quoted'"), Tokens{"quoted"});
  EXPECT_EQ(tokenize("nations' trade"), (Tokens{"nations", "trade"}));
}

TEST(Tokenize, Unicode) {
  EXPECT_EQ(tokenize("Éire ÜBER straße"), (Tokens{"éire", "über", "straße"}));
  // combining acute stays inside the word
  EXPECT_EQ(tokenize("Café au lait"), (Tokens{"café", "au", "lait"}));
  EXPECT_EQ(tokenize("\xff" "abc\xc3"), Tokens{"abc"});
}

TEST(Tokenize, CaseInvariant) {
  for (const auto& doc : testing::fixtureCorpus()) {
    EXPECT_EQ(tokenize(doc.body), tokenize(lowercase(doc.body))) << doc.id;
  }
}

TEST(Tokenize, SpansPointIntoSource) {
  const std::string text = "  Oil, and GAS.";
  auto spans = tokenizeWithSpans(text);
  ASSERT_EQ(spans.size(), 3u);
  EXPECT_EQ(text.substr(spans[0].begin, spans[0].end - spans[0].begin), "Oil");
  EXPECT_EQ(text.substr(spans[2].begin, spans[2].end - spans[2].begin), "GAS");
  EXPECT_EQ(spans[2].text, "gas");
}

TEST(Sentences, SplitOnTerminators) {
  auto s = splitSentences("d", "A b. C d.");
  ASSERT_EQ(s.size(), 2u);
  EXPECT_EQ(s[0].tokens, (Tokens{"a", "b"}));
  EXPECT_EQ(s[1].tokens, (Tokens{"c", "d"}));
  EXPECT_EQ(s[1].index, 1u);
  EXPECT_EQ(s[1].docId, "d");
}

TEST(Sentences, NoTerminatorIsOneSentence) {
  auto s = splitSentences("d", "just some words");
  ASSERT_EQ(s.size(), 1u);
  EXPECT_EQ(s[0].begin, 0u);
  EXPECT_EQ(s[0].end, 15u);
}

TEST(Sentences, EmptyAndPunctuationOnly) {
  EXPECT_TRUE(splitSentences("d", "").empty());
  EXPECT_TRUE(splitSentences("d", "... !!! ??").empty());
}

// Abbreviations are not special-cased: "U.S." ends a sentence when followed
// by a space. Pinned so a change in behaviour is noticed.
TEST(Sentences, AbbreviationGolden) {
  auto s = splitSentences("d", "The U.S. Congress met.");
  ASSERT_EQ(s.size(), 2u);
  EXPECT_EQ(s[0].tokens, (Tokens{"the", "u", "s"}));
  EXPECT_EQ(s[1].tokens, (Tokens{"congress", "met"}));
}

TEST(Sentences, BlankLineSeparates) {
  auto s = splitSentences("d", "first part\n  \nsecond part\nsame sentence");
  ASSERT_EQ(s.size(), 2u);
  EXPECT_EQ(s[0].tokens, (Tokens{"first", "part"}));
  EXPECT_EQ(s[1].tokens, (Tokens{"second", "part", "same", "sentence"}));
}

TEST(Sentences, SpansCoverAllTokens) {
  for (const auto& doc : testing::fixtureCorpus()) {
    auto sentences = splitSentences(doc);
    Tokens joined;
    std::size_t prevEnd = 0;
    for (std::size_t i = 0; i < sentences.size(); ++i) {
      const auto& s = sentences[i];
      EXPECT_EQ(s.index, i);
      EXPECT_LE(prevEnd, s.begin);
      EXPECT_LT(s.begin, s.end);
      EXPECT_EQ(s.tokens, tokenize(std::string_view(doc.body).substr(s.begin, s.end - s.begin)));
      joined.insert(joined.end(), s.tokens.begin(), s.tokens.end());
      prevEnd = s.end;
    }
    EXPECT_EQ(joined, tokenize(doc.body)) << doc.id;
  }
}

TEST(Stopwords, English) {
  const auto& sw = StopwordList::english();
  EXPECT_TRUE(sw.contains("the"));
  EXPECT_TRUE(sw.contains("and"));
  EXPECT_FALSE(sw.contains("oil"));
  EXPECT_GT(sw.size(), 50u);
}

TEST(Stopwords, FromStream) {
  std::istringstream in("# comment\nthe\n\n  Of \nthe\n");
  auto sw = StopwordList::fromStream(in);
  EXPECT_EQ(sw.size(), 2u);
  EXPECT_TRUE(sw.contains("of"));
  EXPECT_FALSE(sw.contains("comment"));
}

TEST(Stopwords, MissingFileThrows) {
  EXPECT_THROW(StopwordList::fromFile("/nonexistent/stop.txt"), IoError);
}

}  // namespace
}  // namespace doris
