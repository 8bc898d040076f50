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

#ifndef BITEXTCLEAN_CORPUS_IO_H_
#define BITEXTCLEAN_CORPUS_IO_H_

#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace bitext {

struct SentencePair {
  std::string src;
  std::string tgt;
  std::optional<std::string> doc_id;
  std::optional<size_t> pos_in_doc;
  size_t line_no = 0;
  // Set when either side contained invalid UTF-8 that was replaced.
  bool invalid_utf8 = false;

  friend bool operator==(const SentencePair&, const SentencePair&) = default;
};

// Half-open line range [begin, end) occupied by one document.
struct DocRange {
  std::string id;
  size_t begin = 0;
  size_t end = 0;

  size_t size() const { return end - begin; }
  friend bool operator==(const DocRange&, const DocRange&) = default;
};

// An ordered, immutable sequence of sentence pairs with an optional document
// index. The constructor validates the document invariants and throws
// Error(kInvalidArgument) on violations.
class Corpus {
 public:
  Corpus() = default;
  explicit Corpus(std::vector<SentencePair> pairs,
                  std::vector<DocRange> docs = {});

  // Assigns doc_id/pos_in_doc from (doc_id, line count) records.
  static Corpus WithDocuments(
      std::vector<SentencePair> pairs,
      const std::vector<std::pair<std::string, size_t>>& doc_sizes);

  // Convenience for tests and tools: builds pairs with line_no = index.
  static Corpus FromLines(const std::vector<std::string>& src,
                          const std::vector<std::string>& tgt);

  const std::vector<SentencePair>& pairs() const { return pairs_; }
  const std::vector<DocRange>& docs() const { return docs_; }
  size_t size() const { return pairs_.size(); }
  bool empty() const { return pairs_.empty(); }
  bool has_doc_index() const { return !docs_.empty(); }
  const SentencePair& operator[](size_t i) const { return pairs_[i]; }

  // Returns the document range containing line i, if any.
  const DocRange* DocumentOf(size_t i) const;

 private:
  std::vector<SentencePair> pairs_;
  std::vector<DocRange> docs_;
};

// Boundary sidecar: one "doc_id<TAB>line_count" record per document.
std::vector<std::pair<std::string, size_t>> ParseBoundaries(
    const std::vector<std::string>& lines);

Corpus ReadParallel(const std::string& src_path, const std::string& tgt_path,
                    const std::optional<std::string>& boundaries_path = {});

void WriteParallel(const Corpus& corpus, const std::string& src_path,
                   const std::string& tgt_path,
                   const std::optional<std::string>& boundaries_path = {});

std::string FormatBoundaries(const Corpus& corpus);

// Splits into n contiguous shards of roughly equal line count without ever
// splitting a document. Concatenating the shards gives back the input.
std::vector<Corpus> Shard(const Corpus& corpus, size_t n);

// Concatenates shards (inverse of Shard).
Corpus Concatenate(const std::vector<Corpus>& parts);

}  // namespace bitext

#endif  // BITEXTCLEAN_CORPUS_IO_H_
