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

#include "bitextclean/corpus_io.h"

#include <algorithm>
#include <charconv>

#include "bitextclean/error.h"
#include "bitextclean/file_util.h"
#include "bitextclean/utf8.h"

namespace bitext {
namespace {

bool HasLineBreak(const std::string& s) {
  return s.find_first_of("\r\n") != std::string::npos;
}

}  // namespace

Corpus::Corpus(std::vector<SentencePair> pairs, std::vector<DocRange> docs)
    : pairs_(std::move(pairs)), docs_(std::move(docs)) {
  for (const auto& p : pairs_) {
    if (HasLineBreak(p.src) || HasLineBreak(p.tgt)) {
      throw Error(ErrorCode::kInvalidArgument,
                  "line break inside sentence at line " +
                      std::to_string(p.line_no));
    }
  }
  size_t prev_end = 0;
  std::vector<bool> covered(pairs_.size(), false);
  for (const auto& d : docs_) {
    if (d.begin < prev_end || d.end < d.begin || d.end > pairs_.size()) {
      throw Error(ErrorCode::kInvalidArgument,
                  "document ranges must be ordered, disjoint and in bounds");
    }
    prev_end = d.end;
    std::optional<size_t> last_pos;
    for (size_t i = d.begin; i < d.end; ++i) {
      const auto& p = pairs_[i];
      if (p.doc_id != d.id || !p.pos_in_doc ||
          (last_pos && *p.pos_in_doc <= *last_pos)) {
        throw Error(ErrorCode::kInvalidArgument,
                    "pair " + std::to_string(i) +
                        " inconsistent with document " + d.id);
      }
      last_pos = p.pos_in_doc;
      covered[i] = true;
    }
  }
  for (size_t i = 0; i < pairs_.size(); ++i) {
    if (!covered[i] && (pairs_[i].doc_id || pairs_[i].pos_in_doc)) {
      throw Error(ErrorCode::kInvalidArgument,
                  "pair " + std::to_string(i) +
                      " carries a document id outside the index");
    }
  }
}

Corpus Corpus::WithDocuments(
    std::vector<SentencePair> pairs,
    const std::vector<std::pair<std::string, size_t>>& doc_sizes) {
  size_t total = 0;
  for (const auto& [id, n] : doc_sizes) total += n;
  if (total != pairs.size()) {
    throw Error(ErrorCode::kBoundarySumMismatch,
                "document sizes sum to " + std::to_string(total) +
                    " but corpus has " + std::to_string(pairs.size()) +
                    " lines");
  }
  std::vector<DocRange> docs;
  size_t begin = 0;
  for (const auto& [id, n] : doc_sizes) {
    for (size_t k = 0; k < n; ++k) {
      pairs[begin + k].doc_id = id;
      pairs[begin + k].pos_in_doc = k;
    }
    docs.push_back({id, begin, begin + n});
    begin += n;
  }
  return Corpus(std::move(pairs), std::move(docs));
}

Corpus Corpus::FromLines(const std::vector<std::string>& src,
                         const std::vector<std::string>& tgt) {
  if (src.size() != tgt.size()) {
    throw Error(ErrorCode::kLineCountMismatch,
                std::to_string(src.size()) + " vs " +
                    std::to_string(tgt.size()) + " lines");
  }
  std::vector<SentencePair> pairs(src.size());
  for (size_t i = 0; i < src.size(); ++i) {
    pairs[i].src = src[i];
    pairs[i].tgt = tgt[i];
    pairs[i].line_no = i;
  }
  return Corpus(std::move(pairs));
}

const DocRange* Corpus::DocumentOf(size_t i) const {
  auto it = std::upper_bound(
      docs_.begin(), docs_.end(), i,
      [](size_t v, const DocRange& d) { return v < d.begin; });
  if (it == docs_.begin()) return nullptr;
  --it;
  return (i >= it->begin && i < it->end) ? &*it : nullptr;
}

std::vector<std::pair<std::string, size_t>> ParseBoundaries(
    const std::vector<std::string>& lines) {
  std::vector<std::pair<std::string, size_t>> out;
  for (size_t ln = 0; ln < lines.size(); ++ln) {
    const auto fields = utf8::SplitWhitespaceView(lines[ln]);
    if (fields.empty()) continue;
    if (fields.size() != 2) {
      throw Error(ErrorCode::kInvalidArgument,
                  "boundary line " + std::to_string(ln + 1) +
                      ": expected 'doc_id<TAB>count'");
    }
    size_t n = 0;
    const auto f = fields[1];
    auto [ptr, ec] = std::from_chars(f.data(), f.data() + f.size(), n);
    if (ec != std::errc() || ptr != f.data() + f.size()) {
      throw Error(ErrorCode::kInvalidArgument,
                  "boundary line " + std::to_string(ln + 1) + ": bad count");
    }
    out.emplace_back(std::string(fields[0]), n);
  }
  return out;
}

Corpus ReadParallel(const std::string& src_path, const std::string& tgt_path,
                    const std::optional<std::string>& boundaries_path) {
  auto src = ReadLines(src_path);
  auto tgt = ReadLines(tgt_path);
  if (src.size() != tgt.size()) {
    throw Error(ErrorCode::kLineCountMismatch,
                src_path + " has " + std::to_string(src.size()) +
                    " lines, " + tgt_path + " has " +
                    std::to_string(tgt.size()));
  }
  std::vector<SentencePair> pairs(src.size());
  for (size_t i = 0; i < src.size(); ++i) {
    auto& p = pairs[i];
    const bool ok_s = utf8::Sanitize(src[i], &p.src);
    const bool ok_t = utf8::Sanitize(tgt[i], &p.tgt);
    p.invalid_utf8 = !(ok_s && ok_t);
    p.line_no = i;
  }
  if (!boundaries_path) return Corpus(std::move(pairs));
  return Corpus::WithDocuments(std::move(pairs),
                               ParseBoundaries(ReadLines(*boundaries_path)));
}

std::string FormatBoundaries(const Corpus& corpus) {
  std::string out;
  for (const auto& d : corpus.docs()) {
    out += d.id;
    out += '\t';
    out += std::to_string(d.size());
    out += '\n';
  }
  return out;
}

void WriteParallel(const Corpus& corpus, const std::string& src_path,
                   const std::string& tgt_path,
                   const std::optional<std::string>& boundaries_path) {
  AtomicFile s(src_path);
  AtomicFile t(tgt_path);
  for (const auto& p : corpus.pairs()) {
    s.stream() << p.src << '\n';
    t.stream() << p.tgt << '\n';
  }
  if (boundaries_path) {
    AtomicFile b(*boundaries_path);
    b.stream() << FormatBoundaries(corpus);
    s.Commit();
    t.Commit();
    b.Commit();
  } else {
    s.Commit();
    t.Commit();
  }
}

std::vector<Corpus> Shard(const Corpus& corpus, size_t n) {
  if (n == 0) throw Error(ErrorCode::kInvalidArgument, "shard count is 0");
  // Units are whole documents or single undocumented lines.
  struct Unit {
    size_t begin, end;
    const DocRange* doc;
  };
  std::vector<Unit> units;
  size_t i = 0;
  size_t d = 0;
  const auto& docs = corpus.docs();
  while (i < corpus.size()) {
    if (d < docs.size() && docs[d].begin == i) {
      units.push_back({docs[d].begin, docs[d].end, &docs[d]});
      i = docs[d].end;
      ++d;
      continue;
    }
    units.push_back({i, i + 1, nullptr});
    ++i;
  }
  // Empty documents sitting at the end of the corpus.
  for (; d < docs.size(); ++d) {
    units.push_back({docs[d].begin, docs[d].end, &docs[d]});
  }

  std::vector<std::vector<SentencePair>> shard_pairs(n);
  std::vector<std::vector<DocRange>> shard_docs(n);
  const size_t total = corpus.size();
  for (const auto& u : units) {
    // Assign by the unit's starting offset so shards stay contiguous.
    size_t k = total == 0 ? 0 : (u.begin * n) / total;
    k = std::min(k, n - 1);
    auto& sp = shard_pairs[k];
    const size_t local_begin = sp.size();
    for (size_t j = u.begin; j < u.end; ++j) sp.push_back(corpus[j]);
    if (u.doc) shard_docs[k].push_back({u.doc->id, local_begin, sp.size()});
  }
  std::vector<Corpus> out;
  out.reserve(n);
  for (size_t k = 0; k < n; ++k) {
    out.emplace_back(std::move(shard_pairs[k]), std::move(shard_docs[k]));
  }
  return out;
}

Corpus Concatenate(const std::vector<Corpus>& parts) {
  std::vector<SentencePair> pairs;
  std::vector<DocRange> docs;
  for (const auto& c : parts) {
    const size_t offset = pairs.size();
    pairs.insert(pairs.end(), c.pairs().begin(), c.pairs().end());
    for (const auto& d : c.docs()) {
      docs.push_back({d.id, d.begin + offset, d.end + offset});
    }
  }
  return Corpus(std::move(pairs), std::move(docs));
}

}  // namespace bitext
