// Copyright 2026 The bitextclean Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "bitextclean/error.h"
#include "bitextclean/textnorm.h"
#include "bitextclean/utf8.h"
#include "testlib.h"

namespace bitext {
namespace {

using Tokens = std::vector<std::string>;

TEST(NormalizeTest, UnicodePunctuation) {
  EXPECT_EQ(Normalize("\xE2\x80\x9CHello\xE2\x80\x9D \xE2\x80\x94 world"
                      "\xE2\x80\xA6"),
            "\"Hello\" - world...");
}

TEST(NormalizeTest, ControlCharacters) {
  EXPECT_EQ(Normalize("a\x07" "b"), "ab");
  EXPECT_EQ(Normalize("a\xC2\x85" "b"), "ab");  // C1 NEL
  EXPECT_EQ(Normalize("a\tb"), "a\tb");
}

TEST(NormalizeTest, Whitespace) { EXPECT_EQ(Normalize("  a   b "), "a b"); }

TEST(NormalizeTest, IdempotentOnRandomInput) {
  const std::vector<std::string> alphabet = {
      "a", "B", " ", "  ", "\t", "\x07", "\xE2\x80\x9C", "\xE2\x80\x9D",
      "\xE2\x80\x94", "\xE2\x80\xA6", "\xE2\x80\x98", "\xE2\x80\x99", ".",
      ",", "\xC2\xA0", "\xC3\xA4", "!", "?", "\"", "'", "-", "1"};
  std::mt19937_64 rng(5);
  for (int i = 0; i < 500; ++i) {
    std::string s;
    int n = rng() % 30;
    for (int k = 0; k < n; ++k) s += alphabet[rng() % alphabet.size()];
    std::string once = Normalize(s);
    EXPECT_EQ(Normalize(once), once) << s;
  }
}

TEST(TokenizeTest, PunctuationSplit) {
  EXPECT_EQ(Tokenize("Hello, world!", Language::kEnglish),
            (Tokens{"Hello", ",", "world", "!"}));
}

TEST(TokenizeTest, NumbersStayWhole) {
  EXPECT_EQ(Tokenize("3.5 million", Language::kEnglish),
            (Tokens{"3.5", "million"}));
  EXPECT_EQ(Tokenize("1,000 people", Language::kEnglish),
            (Tokens{"1,000", "people"}));
}

TEST(TokenizeTest, Empty) { EXPECT_TRUE(Tokenize("", Language::kEnglish).empty()); }

TEST(TokenizeTest, EnglishClitics) {
  EXPECT_EQ(Tokenize("I don't know.", Language::kEnglish),
            (Tokens{"I", "do", "n't", "know", "."}));
  EXPECT_EQ(Tokenize("They're here", Language::kEnglish),
            (Tokens{"They", "'re", "here"}));
}

TEST(TokenizeTest, DetokenizeRoundTrip) {
  const std::vector<std::string> lines = {
      "Hello, world!", "I don't know.", "3.5 million people (roughly).",
      "\"Quoted\" text: yes; no?", "Ein Satz, mit Komma.",
      "Tämä on lause."};
  for (const auto& l : lines) {
    Language lang = l[0] == 'E'   ? Language::kGerman
                    : l[0] == 'T' ? Language::kFinnish
                                  : Language::kEnglish;
    EXPECT_EQ(Detokenize(Tokenize(Normalize(l), lang)), Normalize(l)) << l;
  }
}

TEST(TokenizeTest, PipelineIsIdempotentOnItsOutput) {
  std::mt19937_64 rng(9);
  const std::vector<std::string> punct = {",", ".", "!", "?", ":", ";",
                                          "(", ")", "'s", "n't", "\""};
  for (int i = 0; i < 300; ++i) {
    std::string s;
    int n = 1 + rng() % 10;
    for (int k = 0; k < n; ++k) {
      if (!s.empty()) s += rng() % 3 ? " " : "";
      s += rng() % 3 ? testing::RandomWord(rng, 1, 6)
                     : punct[rng() % punct.size()];
    }
    auto f = [](const std::string& x) {
      return Detokenize(Tokenize(Normalize(x), Language::kEnglish));
    };
    std::string once = f(s);
    EXPECT_EQ(f(once), once) << s;
  }
}

TEST(ContractionTest, TheyAre) {
  EXPECT_EQ(ExpandContractions({"They", "'re", "here"}),
            (Tokens{"They", "are", "here"}));
}

TEST(ContractionTest, CanNot) {
  EXPECT_EQ(ExpandContractions({"ca", "n't"}), (Tokens{"can", "not"}));
  EXPECT_EQ(ExpandContractions({"wo", "n't"}), (Tokens{"will", "not"}));
  EXPECT_EQ(ExpandContractions({"do", "n't"}), (Tokens{"do", "not"}));
}

TEST(ContractionTest, TableCoverage) {
  EXPECT_EQ(ExpandContractions({"we", "'ll"}), (Tokens{"we", "will"}));
  EXPECT_EQ(ExpandContractions({"I", "'ve"}), (Tokens{"I", "have"}));
  EXPECT_EQ(ExpandContractions({"I", "'m"}), (Tokens{"I", "am"}));
  EXPECT_EQ(ExpandContractions({"it", "'s"}), (Tokens{"it", "is"}));
}

TEST(ContractionTest, PossessiveUntouched) {
  EXPECT_EQ(ExpandContractions({"John", "'s", "book"}),
            (Tokens{"John", "'s", "book"}));
  EXPECT_EQ(ExpandContractions({"book"}), (Tokens{"book"}));
}

TEST(ContractionTest, CustomTable) {
  std::istringstream in("'d\twould\n's\tis\tit,he\n");
  ContractionTable t = ContractionTable::FromTsv(in);
  EXPECT_EQ(t.Expand({"I", "'d"}), (Tokens{"I", "would"}));
  EXPECT_EQ(t.Expand({"he", "'s"}), (Tokens{"he", "is"}));
  EXPECT_EQ(t.Expand({"she", "'s"}), (Tokens{"she", "'s"}));
}

TEST(TruecaserTest, MedialEvidenceWins) {
  TruecaseModel m = TruecaseModel::Train({"the Cat sat", "Cat naps"});
  ASSERT_NE(m.BestForm("cat"), nullptr);
  EXPECT_EQ(*m.BestForm("cat"), "Cat");
}

TEST(TruecaserTest, OnlyFormObserved) {
  TruecaseModel m =
      TruecaseModel::Train({"Paris is big", "Paris is big", "Paris is big"});
  ASSERT_NE(m.BestForm("paris"), nullptr);
  EXPECT_EQ(*m.BestForm("paris"), "Paris");
}

TEST(TruecaserTest, EmptyCorpus) {
  try {
    TruecaseModel::Train({});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kEmptyCorpus);
  }
}

TEST(TruecaserTest, ApplyExamples) {
  TruecaseModel m = TruecaseModel::Train(
      {"I saw the cat", "so the dog", "NASA launched NASA", "and NASA"});
  EXPECT_EQ(Truecase({"The", "Cat"}, m), (Tokens{"the", "Cat"}));
  EXPECT_EQ(Truecase({"NASA", "launched"}, m), (Tokens{"NASA", "launched"}));
  EXPECT_EQ(Truecase({"Xqz", "a"}, m), (Tokens{"Xqz", "a"}));
}

TEST(TruecaserTest, ModelInvariants) {
  std::mt19937_64 rng(21);
  std::vector<std::string> lines;
  for (int i = 0; i < 300; ++i) {
    std::string l;
    int n = 1 + rng() % 8;
    for (int k = 0; k < n; ++k) {
      std::string w = testing::RandomWord(rng, 2, 4);
      if (rng() % 3 == 0) w[0] = static_cast<char>(std::toupper(w[0]));
      l += (k ? " " : "") + w;
    }
    lines.push_back(l);
  }
  TruecaseModel m = TruecaseModel::Train(lines);
  for (const auto& [key, best] : m.best_forms()) {
    EXPECT_EQ(utf8::ToLower(best), key);
    for (const auto& [surface, count] : m.counts()) {
      if (utf8::ToLower(surface) == key) {
        EXPECT_GE(m.Count(best), count) << key;
      }
    }
  }
  std::stringstream io;
  m.Save(io);
  TruecaseModel back = TruecaseModel::Load(io);
  EXPECT_EQ(back.best_forms(), m.best_forms());
  EXPECT_EQ(back.counts(), m.counts());

  for (const auto& l : lines) {
    Tokens t = utf8::SplitWhitespace(l);
    Tokens out = Truecase(t, m);
    ASSERT_EQ(out.size(), t.size());
    size_t first = SentenceInitialIndex(t);
    for (size_t k = 0; k < t.size(); ++k) {
      if (k != first) {
        EXPECT_EQ(out[k], t[k]);
      }
    }
  }
}

}  // namespace
}  // namespace bitext
