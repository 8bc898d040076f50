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


#include <unistd.h>

#include <filesystem>
#include <functional>
#include <fstream>
#include <random>
#include <set>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "bitextclean/corpus_io.h"
#include "bitextclean/error.h"
#include "bitextclean/file_util.h"
#include "testlib.h"

namespace bitext {
namespace {

namespace fs = std::filesystem;

class TempDir {
 public:
  TempDir() {
    path_ = fs::temp_directory_path() /
            ("bitextclean_io_" + std::to_string(::getpid()) + "_" +
             std::to_string(counter_++));
    fs::create_directories(path_);
  }
  ~TempDir() { fs::remove_all(path_); }
  std::string File(const std::string& name) const {
    return (path_ / name).string();
  }

 private:
  static inline int counter_ = 0;
  fs::path path_;
};

void WriteText(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  out << text;
}

std::string ReadText(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  return std::string(std::istreambuf_iterator<char>(in), {});
}

ErrorCode CodeOf(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error thrown";
  return ErrorCode::kIoError;
}

TEST(ReadParallelTest, ThreeLinesNoBoundaries) {
  TempDir dir;
  WriteText(dir.File("s"), "a\nb\nc\n");
  WriteText(dir.File("t"), "x\ny\nz\n");
  Corpus c = ReadParallel(dir.File("s"), dir.File("t"));
  ASSERT_EQ(c.size(), 3u);
  EXPECT_FALSE(c.has_doc_index());
  EXPECT_EQ(c[1].src, "b");
  EXPECT_EQ(c[1].tgt, "y");
  EXPECT_EQ(c[2].line_no, 2u);
  EXPECT_FALSE(c[0].doc_id.has_value());
}

TEST(ReadParallelTest, BoundaryFileAssignsDocuments) {
  TempDir dir;
  WriteText(dir.File("s"), "a\nb\nc\n");
  WriteText(dir.File("t"), "x\ny\nz\n");
  WriteText(dir.File("b"), "d1\t2\nd2\t1\n");
  Corpus c = ReadParallel(dir.File("s"), dir.File("t"), dir.File("b"));
  ASSERT_EQ(c.docs().size(), 2u);
  EXPECT_EQ(c[0].doc_id, "d1");
  EXPECT_EQ(c[1].doc_id, "d1");
  EXPECT_EQ(c[1].pos_in_doc, 1u);
  EXPECT_EQ(c[2].doc_id, "d2");
  EXPECT_EQ(c[2].pos_in_doc, 0u);
  EXPECT_EQ(c.docs()[1], (DocRange{"d2", 2, 3}));
  EXPECT_EQ(c.DocumentOf(2)->id, "d2");
}

TEST(ReadParallelTest, SpaceSeparatedBoundaries) {
  auto recs = ParseBoundaries({"d1 2", "d2 1"});
  ASSERT_EQ(recs.size(), 2u);
  EXPECT_EQ(recs[0].first, "d1");
  EXPECT_EQ(recs[0].second, 2u);
}

TEST(ReadParallelTest, LineCountMismatch) {
  TempDir dir;
  WriteText(dir.File("s"), "a\nb\nc\n");
  WriteText(dir.File("t"), "x\ny\n");
  EXPECT_EQ(CodeOf([&] { ReadParallel(dir.File("s"), dir.File("t")); }),
            ErrorCode::kLineCountMismatch);
}

TEST(ReadParallelTest, BoundarySumMismatch) {
  TempDir dir;
  WriteText(dir.File("s"), "a\nb\nc\n");
  WriteText(dir.File("t"), "x\ny\nz\n");
  WriteText(dir.File("b"), "d1\t2\nd2\t2\n");
  EXPECT_EQ(CodeOf([&] {
              ReadParallel(dir.File("s"), dir.File("t"), dir.File("b"));
            }),
            ErrorCode::kBoundarySumMismatch);
}

TEST(ReadParallelTest, MissingFileIsIoError) {
  TempDir dir;
  EXPECT_EQ(CodeOf([&] { ReadParallel(dir.File("nope"), dir.File("no")); }),
            ErrorCode::kIoError);
}

TEST(ReadParallelTest, InvalidUtf8IsReplacedAndFlagged) {
  TempDir dir;
  WriteText(dir.File("s"), "ok\nbad\xff\n");
  WriteText(dir.File("t"), "ok\nfine\n");
  Corpus c = ReadParallel(dir.File("s"), dir.File("t"));
  EXPECT_FALSE(c[0].invalid_utf8);
  EXPECT_TRUE(c[1].invalid_utf8);
  EXPECT_EQ(c[1].src, "bad\xEF\xBF\xBD");
}

TEST(ReadParallelTest, RoundTripIsByteIdentical) {
  TempDir dir;
  std::mt19937_64 rng(3);
  std::string src, tgt, bnd;
  for (int d = 0; d < 7; ++d) {
    int n = 1 + d % 3;
    bnd += "doc" + std::to_string(d) + "\t" + std::to_string(n) + "\n";
    for (int i = 0; i < n; ++i) {
      src += testing::RandomSentence(rng, 1 + i) + "\n";
      tgt += (i == 1 ? std::string() : testing::RandomSentence(rng, 2)) + "\n";
    }
  }
  WriteText(dir.File("s"), src);
  WriteText(dir.File("t"), tgt);
  WriteText(dir.File("b"), bnd);
  Corpus c = ReadParallel(dir.File("s"), dir.File("t"), dir.File("b"));
  WriteParallel(c, dir.File("s2"), dir.File("t2"), dir.File("b2"));
  EXPECT_EQ(ReadText(dir.File("s2")), src);
  EXPECT_EQ(ReadText(dir.File("t2")), tgt);
  EXPECT_EQ(ReadText(dir.File("b2")), bnd);
  Corpus again = ReadParallel(dir.File("s2"), dir.File("t2"), dir.File("b2"));
  EXPECT_EQ(again.pairs(), c.pairs());
  EXPECT_EQ(again.docs(), c.docs());
}

Corpus DocCorpus(const std::vector<size_t>& sizes) {
  std::vector<SentencePair> pairs;
  std::vector<std::pair<std::string, size_t>> docs;
  for (size_t d = 0; d < sizes.size(); ++d) {
    docs.emplace_back("d" + std::to_string(d), sizes[d]);
    for (size_t i = 0; i < sizes[d]; ++i) {
      SentencePair p;
      p.src = "s" + std::to_string(pairs.size());
      p.tgt = "t" + std::to_string(pairs.size());
      p.line_no = pairs.size();
      pairs.push_back(p);
    }
  }
  return Corpus::WithDocuments(std::move(pairs), docs);
}

TEST(ShardTest, FourDocsTwoShards) {
  Corpus c = DocCorpus({2, 3, 1, 2});
  auto shards = Shard(c, 2);
  ASSERT_EQ(shards.size(), 2u);
  for (const auto& s : shards) {
    EXPECT_FALSE(s.empty());
    for (const auto& d : s.docs()) {
      const DocRange* orig = nullptr;
      for (const auto& od : c.docs()) {
        if (od.id == d.id) orig = &od;
      }
      ASSERT_NE(orig, nullptr);
      EXPECT_EQ(orig->size(), d.size());
    }
  }
  EXPECT_EQ(Concatenate(shards).pairs(), c.pairs());
}

TEST(ShardTest, OneDocThreeShards) {
  Corpus c = DocCorpus({5});
  auto shards = Shard(c, 3);
  ASSERT_EQ(shards.size(), 3u);
  int nonempty = 0;
  for (const auto& s : shards) {
    if (!s.empty()) {
      ++nonempty;
      EXPECT_EQ(s.size(), 5u);
    }
  }
  EXPECT_EQ(nonempty, 1);
}

TEST(ShardTest, OneShardIsIdentity) {
  Corpus c = DocCorpus({2, 2});
  auto shards = Shard(c, 1);
  ASSERT_EQ(shards.size(), 1u);
  EXPECT_EQ(shards[0].pairs(), c.pairs());
  EXPECT_EQ(shards[0].docs(), c.docs());
}

TEST(ShardTest, ZeroShardsRejected) {
  EXPECT_EQ(CodeOf([&] { Shard(DocCorpus({1}), 0); }),
            ErrorCode::kInvalidArgument);
}

TEST(ShardTest, PropertyNeverSplitsDocuments) {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<size_t> sizes(1 + rng() % 12);
    for (auto& s : sizes) s = 1 + rng() % 9;
    Corpus c = DocCorpus(sizes);
    size_t n = 1 + rng() % 6;
    auto shards = Shard(c, n);
    ASSERT_EQ(shards.size(), n);
    EXPECT_EQ(Concatenate(shards).pairs(), c.pairs());
    std::set<std::string> seen;
    for (const auto& s : shards) {
      for (const auto& p : s.pairs()) {
        ASSERT_TRUE(p.doc_id.has_value());
        const DocRange* own = nullptr;
        for (const auto& d : s.docs()) {
          if (d.id == *p.doc_id) own = &d;
        }
        ASSERT_NE(own, nullptr);
      }
      for (const auto& d : s.docs()) {
        EXPECT_TRUE(seen.insert(d.id).second) << d.id << " split";
      }
    }
  }
}

TEST(ShardTest, CorpusWithoutDocumentsSplitsByLine) {
  Corpus c = Corpus::FromLines({"a", "b", "c", "d", "e"},
                               {"1", "2", "3", "4", "5"});
  auto shards = Shard(c, 2);
  ASSERT_EQ(shards.size(), 2u);
  EXPECT_EQ(shards[0].size() + shards[1].size(), 5u);
  EXPECT_EQ(Concatenate(shards).pairs(), c.pairs());
}

TEST(AtomicFileTest, UncommittedWriteLeavesNoFile) {
  TempDir dir;
  {
    AtomicFile f(dir.File("out"));
    f.stream() << "partial";
  }
  EXPECT_FALSE(fs::exists(dir.File("out")));
  WriteFileAtomic(dir.File("out"), "done\n");
  EXPECT_EQ(ReadText(dir.File("out")), "done\n");
}

}  // namespace
}  // namespace bitext
