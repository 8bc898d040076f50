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

#include "bitextclean/doccontext.h"

#include <random>
#include <vector>

#include "bitextclean/error.h"
#include "bitextclean/utf8.h"

namespace bitext {
namespace {

bool HasToken(std::string_view text, std::string_view token) {
  for (auto t : utf8::SplitWhitespaceView(text)) {
    if (t == token) return true;
  }
  return false;
}

// Uniform integer in [0, bound) without modulo bias.
uint64_t Bounded(std::mt19937_64& rng, uint64_t bound) {
  const uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
  uint64_t x;
  do {
    x = rng();
  } while (x >= limit);
  return x % bound;
}

}  // namespace

ContextScheme ContextScheme::Parse(std::string_view name) {
  ContextScheme s;
  if (name == "2+1") {
    s.kind = ContextKind::k2Plus1;
  } else if (name == "3+1a") {
    s.kind = ContextKind::k3Plus1a;
  } else if (name == "3+1b") {
    s.kind = ContextKind::k3Plus1b;
  } else if (name == "1t+1s+1") {
    s.kind = ContextKind::k1t1sPlus1;
  } else if (name == "2+2") {
    s.kind = ContextKind::k2Plus2;
  } else {
    throw Error(ErrorCode::kInvalidArgument,
                "unknown context scheme '" + std::string(name) + "'");
  }
  return s;
}

const char* ContextScheme::Name() const {
  switch (kind) {
    case ContextKind::k2Plus1: return "2+1";
    case ContextKind::k3Plus1a: return "3+1a";
    case ContextKind::k3Plus1b: return "3+1b";
    case ContextKind::k1t1sPlus1: return "1t+1s+1";
    case ContextKind::k2Plus2: return "2+2";
  }
  return "?";
}

Corpus BuildContext(const Corpus& corpus, const ContextScheme& scheme) {
  if (!corpus.has_doc_index()) {
    throw Error(ErrorCode::kMissingDocIndex,
                "context schemes need document boundaries");
  }
  if (scheme.break_token.empty() ||
      utf8::SplitWhitespace(scheme.break_token).size() != 1) {
    throw Error(ErrorCode::kInvalidArgument,
                "break token must be a single token");
  }
  const std::string sep = " " + scheme.break_token + " ";
  std::vector<SentencePair> out;
  out.reserve(corpus.size());
  for (size_t i = 0; i < corpus.size(); ++i) {
    const SentencePair& cur = corpus[i];
    if (HasToken(cur.src, scheme.break_token) ||
        HasToken(cur.tgt, scheme.break_token)) {
      throw Error(ErrorCode::kInvalidArgument,
                  "line " + std::to_string(cur.line_no) +
                      " already contains the break token");
    }
    const DocRange* doc = corpus.DocumentOf(i);
    const bool has_prev = doc != nullptr && i > doc->begin;
    const bool has_prev2 = doc != nullptr && i >= doc->begin + 2;
    const bool has_next = doc != nullptr && i + 1 < doc->end;
    SentencePair p = cur;
    auto join = [&](std::initializer_list<const std::string*> parts) {
      std::string s;
      for (const std::string* x : parts) {
        if (x == nullptr) continue;
        if (!s.empty()) s += sep;
        s += *x;
      }
      return s;
    };
    const std::string* prev_src = has_prev ? &corpus[i - 1].src : nullptr;
    const std::string* prev_tgt = has_prev ? &corpus[i - 1].tgt : nullptr;
    switch (scheme.kind) {
      case ContextKind::k2Plus1:
        p.src = join({prev_src, &cur.src});
        break;
      case ContextKind::k3Plus1a:
        p.src = join({has_prev2 ? &corpus[i - 2].src : nullptr, prev_src,
                      &cur.src});
        break;
      case ContextKind::k3Plus1b:
        p.src = join(
            {prev_src, &cur.src, has_next ? &corpus[i + 1].src : nullptr});
        break;
      case ContextKind::k1t1sPlus1:
        p.src = join({prev_tgt, &cur.src});
        break;
      case ContextKind::k2Plus2:
        p.src = join({prev_src, &cur.src});
        p.tgt = join({prev_tgt, &cur.tgt});
        break;
    }
    out.push_back(std::move(p));
  }
  return Corpus(std::move(out), corpus.docs());
}

std::string ExtractCurrent(std::string_view translated,
                           const ContextScheme& scheme) {
  const auto tokens = utf8::SplitWhitespaceView(translated);
  size_t start = 0;
  bool found = false;
  for (size_t i = 0; i < tokens.size(); ++i) {
    if (tokens[i] == scheme.break_token) {
      start = i + 1;
      found = true;
    }
  }
  if (!found) return std::string(translated);
  std::string out;
  for (size_t i = start; i < tokens.size(); ++i) {
    if (!out.empty()) out += ' ';
    out.append(tokens[i]);
  }
  return out;
}

Corpus ShuffleDocs(const Corpus& corpus, uint64_t seed) {
  std::vector<SentencePair> pairs = corpus.pairs();
  std::mt19937_64 rng(seed);
  for (size_t i = pairs.size(); i > 1; --i) {
    const size_t j = static_cast<size_t>(Bounded(rng, i));
    std::swap(pairs[i - 1], pairs[j]);
  }
  for (auto& p : pairs) {
    p.doc_id.reset();
    p.pos_in_doc.reset();
  }
  return Corpus(std::move(pairs));
}

}  // namespace bitext
