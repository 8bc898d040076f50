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


#include <cmath>
#include <limits>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "bitextclean/error.h"
#include "bitextclean/lmfilter.h"
#include "bitextclean/utf8.h"
#include "testlib.h"

namespace bitext {
namespace {

using Lines = std::vector<std::string>;

const Lines kToy = {"a b", "a b", "a c"};

LmOptions Opts(int order, double threshold = 0.0) {
  LmOptions o;
  o.max_order = order;
  o.grow_threshold = threshold;
  return o;
}

Lines RandomCorpus(uint64_t seed, int lines, int vocab, int max_len) {
  std::mt19937_64 rng(seed);
  Lines out;
  for (int i = 0; i < lines; ++i) {
    std::string l;
    int n = rng() % (max_len + 1);
    for (int k = 0; k < n; ++k) {
      // Zipf-ish skew so the count-of-counts are not degenerate.
      int w = static_cast<int>(vocab * std::pow((rng() % 1000) / 1000.0, 2));
      l += (k ? " w" : "w") + std::to_string(w);
    }
    out.push_back(l);
  }
  return out;
}

std::vector<std::string> Words(const NgramModel& m, const std::vector<int>& ids) {
  std::vector<std::string> out;
  for (int id : ids) out.push_back(m.Word(id));
  return out;
}

TEST(TrainLmTest, ToyBigramOrdering) {
  NgramModel m = NgramModel::Train(kToy, Opts(2, 0.002));
  const double pb = m.Prob({"a"}, "b"), pc = m.Prob({"a"}, "c");
  EXPECT_GT(pb, pc);
  EXPECT_GT(pc, 0.0);
  // Both continuations back off to the same unigram mass, so the gap is the
  // difference of discounted counts: (2 - 1)/3 - (1 - 0.5)/3.
  EXPECT_NEAR(pb - pc, 1.0 / 6.0, 1e-12);
}

TEST(TrainLmTest, ToyMatchesReference) {
  NgramModel m = NgramModel::Train(kToy, Opts(2));
  testing::ReferenceKn ref(kToy, 2);
  for (const auto& ctx : std::vector<std::vector<std::string>>{
           {"<s>"}, {"a"}, {"b"}, {"c"}, {}}) {
    for (const auto& w : ref.vocab()) {
      EXPECT_NEAR(m.Prob(ctx, w), ref.Prob(ctx, w), 1e-9)
          << (ctx.empty() ? "" : ctx[0]) << " " << w;
    }
  }
}

TEST(TrainLmTest, Errors) {
  try {
    NgramModel::Train({}, Opts(2));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kEmptyCorpus);
  }
  try {
    NgramModel::Train(kToy, Opts(0));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kInvalidArgument);
  }
}

TEST(TrainLmTest, UnigramModel) {
  NgramModel m = NgramModel::Train(kToy, Opts(1));
  EXPECT_EQ(m.order(), 1);
  const std::string line = "a c b";
  double s = 0;
  for (const auto& w : {"a", "c", "b", "</s>"}) s -= std::log2(m.Prob({}, w));
  EXPECT_NEAR(m.CrossEntropy(line), s / 4, 1e-12);
  EXPECT_NEAR(m.Prob({"a"}, "b"), m.Prob({}, "b"), 1e-15);
}

TEST(TrainLmTest, InfiniteThresholdBlocksGrowth) {
  NgramModel m = NgramModel::Train(
      RandomCorpus(3, 100, 20, 8),
      Opts(20, std::numeric_limits<double>::infinity()));
  EXPECT_EQ(m.order(), 1);
  EXPECT_EQ(m.max_order(), 20);
}

TEST(TrainLmTest, MatchesReferenceAtFixedOrder) {
  for (int order : {2, 3}) {
    Lines corpus = RandomCorpus(10 + order, 40, 12, 7);
    NgramModel m = NgramModel::Train(corpus, Opts(order));
    testing::ReferenceKn ref(corpus, order);
    for (const auto& ctx : m.Contexts()) {
      for (const auto& w : ref.vocab()) {
        EXPECT_NEAR(m.Prob(Words(m, ctx), w), ref.Prob(Words(m, ctx), w), 1e-9);
      }
    }
    // Unseen contexts too.
    for (const auto& w : ref.vocab()) {
      EXPECT_NEAR(m.Prob({"w0", "zzz"}, w), ref.Prob({"w0", "zzz"}, w), 1e-9);
    }
  }
}

TEST(TrainLmTest, NormalizesPerContext) {
  for (uint64_t seed = 1; seed <= 6; ++seed) {
    Lines corpus = RandomCorpus(seed, 60, 15, 9);
    NgramModel m = NgramModel::Train(corpus, Opts(2 + seed % 4, seed % 2 ? 0.0 : 0.002));
    for (const auto& ctx : m.Contexts()) {
      double s = 0;
      for (int w : m.PredictableIds()) s += std::exp(m.LogProb(ctx, w));
      EXPECT_NEAR(s, 1.0, 1e-6);
    }
  }
}

TEST(TrainLmTest, TreeConsistency) {
  Lines corpus = RandomCorpus(7, 150, 10, 10);
  NgramModel m = NgramModel::Train(corpus, Opts(6, 0.002));
  for (const auto& ctx : m.Contexts()) {
    // Contexts() holds stored n-grams; each of them has stored prefix and
    // suffix.
    auto words = Words(m, ctx);
    if (words.size() < 2) continue;
    std::vector<std::string> prefix(words.begin(), words.end() - 1);
    std::vector<std::string> suffix(words.begin() + 1, words.end());
    EXPECT_TRUE(m.HasNgram(prefix));
    EXPECT_TRUE(m.HasNgram(suffix) || suffix.front() == "<s>");
  }
}

TEST(TrainLmTest, GrowthThresholdShrinksModel) {
  Lines corpus = RandomCorpus(8, 300, 30, 12);
  NgramModel full = NgramModel::Train(corpus, Opts(5, 0.0));
  NgramModel grown = NgramModel::Train(corpus, Opts(5, 0.5));
  size_t a = 0, b = 0;
  for (int k = 2; k <= full.order(); ++k) a += full.NumNgrams(k);
  for (int k = 2; k <= grown.order(); ++k) b += grown.NumNgrams(k);
  EXPECT_LT(b, a);
  EXPECT_GT(b, 0u);
}

TEST(CrossEntropyTest, EmptyLineScoresOnlyEnd) {
  NgramModel m = NgramModel::Train(kToy, Opts(2));
  EXPECT_NEAR(m.CrossEntropy(""), -std::log2(m.Prob({"<s>"}, "</s>")), 1e-12);
}

TEST(CrossEntropyTest, ToyLineMatchesReference) {
  NgramModel m = NgramModel::Train(kToy, Opts(2));
  testing::ReferenceKn ref(kToy, 2);
  const double want = -(std::log2(ref.Prob({"<s>"}, "a")) +
                        std::log2(ref.Prob({"a"}, "b")) +
                        std::log2(ref.Prob({"b"}, "</s>"))) /
                      3;
  EXPECT_NEAR(m.CrossEntropy("a b"), want, 1e-9);
}

TEST(CrossEntropyTest, UnknownTokensAreFinite) {
  NgramModel m = NgramModel::Train(kToy, Opts(2));
  EXPECT_TRUE(std::isfinite(m.CrossEntropy("zz yy xx")));
  EXPECT_GT(m.Prob({}, "zz"), 0.0);
}

TEST(CrossEntropyTest, FullOrderNeverWorseOnTrainingLines) {
  Lines corpus = RandomCorpus(12, 30, 8, 6);
  NgramModel uni = NgramModel::Train(corpus, Opts(1));
  NgramModel full = NgramModel::Train(corpus, Opts(8));
  double sum_full = 0, sum_uni = 0;
  for (const auto& l : corpus) {
    sum_full += full.CrossEntropy(l);
    sum_uni += uni.CrossEntropy(l);
    // An empty line is scored by p(</s>|<s>) alone, which a bigram makes
    // rarer than the unigram end marker.
    if (l.empty()) continue;
    EXPECT_LE(full.CrossEntropy(l), uni.CrossEntropy(l) + 1e-9) << l;
  }
  EXPECT_LT(sum_full, sum_uni);
}

TEST(ArpaTest, RoundTripPreservesProbabilities) {
  Lines corpus = RandomCorpus(5, 80, 12, 8);
  NgramModel m = NgramModel::Train(corpus, Opts(4, 0.002));
  std::stringstream io;
  m.WriteArpa(io);
  const std::string text = io.str();
  EXPECT_NE(text.find("\\data\\"), std::string::npos);
  EXPECT_NE(text.find("\\end\\"), std::string::npos);
  NgramModel back = NgramModel::ReadArpa(io);
  EXPECT_EQ(back.order(), m.order());
  for (const auto& l : corpus) {
    EXPECT_NEAR(back.CrossEntropy(l), m.CrossEntropy(l), 1e-4) << l;
  }
}

TEST(ArpaTest, RejectsGarbage) {
  std::istringstream in("hello\n");
  try {
    NgramModel::ReadArpa(in);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kModelLoadError);
  }
}

TEST(DiscountTest, FallbackOnDegenerateCounts) {
  KnDiscounts d = EstimateDiscounts(3, 0, 1, 0);
  EXPECT_EQ(d.d1, 0.5);
  EXPECT_EQ(d.d2, 1.0);
  EXPECT_EQ(d.d3, 1.5);
  // Standard estimate: Y = n1/(n1+2n2), D_i = i - (i+1) Y n_{i+1}/n_i.
  KnDiscounts e = EstimateDiscounts(100, 40, 20, 10);
  const double y = 100.0 / 180.0;
  EXPECT_NEAR(e.d1, 1 - 2 * y * 40 / 100, 1e-12);
  EXPECT_NEAR(e.d2, 2 - 3 * y * 20 / 40, 1e-12);
  EXPECT_NEAR(e.d3, 3 - 4 * y * 10 / 20, 1e-12);
}

TEST(FeaturesTest, Arithmetic) {
  CrossEntropyRecord r = MakeCrossEntropyRecord(12, 14);
  EXPECT_EQ(r.avg, 13);
  EXPECT_EQ(r.max, 14);
  EXPECT_EQ(r.absdiff, 2);
}

TEST(FeaturesTest, IdenticalModelsAndLines) {
  NgramModel m = NgramModel::Train(kToy, Opts(2));
  CrossEntropyRecord r = LmFeatures({"a b", "a b"}, m, m);
  EXPECT_EQ(r.absdiff, 0);
  EXPECT_EQ(r.h_src, r.h_tgt);
}

TEST(FeaturesTest, TrainingPairBeatsRandomWords) {
  auto pairs = testing::SubstitutionCorpus(300, 2, 60);
  Lines src, tgt;
  for (const auto& [s, t] : pairs) {
    src.push_back(s);
    tgt.push_back(t);
  }
  NgramModel qs = NgramModel::Train(src, Opts(3, 0.002));
  NgramModel qt = NgramModel::Train(tgt, Opts(3, 0.002));
  std::mt19937_64 rng(4);
  for (int i = 0; i < 20; ++i) {
    const auto& p = pairs[i];
    const size_t n = utf8::SplitWhitespace(p.first).size();
    SentencePair junk{testing::RandomSentence(rng, n), testing::RandomSentence(rng, n)};
    EXPECT_LT(LmFeatures({p.first, p.second}, qs, qt).avg,
              LmFeatures(junk, qs, qt).avg);
  }
}

TEST(FeaturesTest, FeatureRow) {
  EXPECT_EQ(FormatFeatureRow(7, MakeCrossEntropyRecord(1, 2)),
            "7\t1.000000\t2.000000\t1.500000\t2.000000\t1.000000");
}

CrossEntropyRecord Rec(double avg, double diff) {
  return MakeCrossEntropyRecord(avg - diff / 2, avg + diff / 2);
}

TEST(LmFilterTest, Boundaries) {
  EXPECT_TRUE(LmFilter(Rec(12.9, 4.0), FilterMode::kStrict).pass);
  EXPECT_TRUE(LmFilter(Rec(13.0, 4.0), FilterMode::kStrict).pass);
  LmVerdict v = LmFilter(Rec(14, 2), FilterMode::kStrict);
  EXPECT_FALSE(v.pass);
  EXPECT_EQ(v.reasons, std::vector<std::string>{"lm_avg_ce"});
  EXPECT_TRUE(LmFilter(Rec(14, 2), FilterMode::kRelaxed).pass);
  v = LmFilter(Rec(10, 4.5), FilterMode::kStrict);
  EXPECT_FALSE(v.pass);
  EXPECT_EQ(v.reasons, std::vector<std::string>{"lm_ce_diff"});
  v = LmFilter(Rec(16, 6), FilterMode::kRelaxed);
  EXPECT_EQ(v.reasons, (std::vector<std::string>{"lm_avg_ce", "lm_ce_diff"}));
}

TEST(LmFilterTest, RelaxedNeverRejectsAStrictPass) {
  for (double avg = 0; avg <= 20; avg += 0.25) {
    for (double diff = 0; diff <= 8; diff += 0.25) {
      auto r = Rec(avg, diff);
      if (LmFilter(r, FilterMode::kStrict).pass) {
        EXPECT_TRUE(LmFilter(r, FilterMode::kRelaxed).pass);
      }
    }
  }
}

TEST(LmFilterTest, ModeNames) {
  EXPECT_EQ(ParseFilterMode("strict"), FilterMode::kStrict);
  EXPECT_EQ(ParseFilterMode("relaxed"), FilterMode::kRelaxed);
  EXPECT_EQ(ParseFilterMode("relax"), FilterMode::kRelaxed);
  EXPECT_THROW(ParseFilterMode("loose"), Error);
  EXPECT_EQ(ThresholdsFor(FilterMode::kRelaxed).avg, 15);
  EXPECT_EQ(ThresholdsFor(FilterMode::kRelaxed).diff, 5);
}

}  // namespace
}  // namespace bitext
