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

#ifndef BITEXTCLEAN_TEXTNORM_H_
#define BITEXTCLEAN_TEXTNORM_H_

#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace bitext {

enum class Language { kEnglish, kGerman, kFinnish, kOther };

// "en", "de", "fi"; anything else maps to kOther.
Language ParseLanguage(std::string_view code);

// Unicode punctuation replacement, non-printing character removal and
// punctuation normalization, followed by space collapsing and trimming.
// Idempotent.
std::string Normalize(std::string_view line);

std::vector<std::string> Tokenize(std::string_view line, Language lang);
std::string Detokenize(const std::vector<std::string>& tokens);

// Maps English clitic tokens to full forms ("'re" -> "are", "ca n't" ->
// "can not"). Unknown tokens pass through.
class ContractionTable {
 public:
  // The built-in table.
  ContractionTable();

  // Reads "clitic<TAB>expansion" lines; an optional third column restricts
  // the rule to a comma-separated list of preceding words.
  static ContractionTable FromTsv(std::istream& in);

  std::vector<std::string> Expand(const std::vector<std::string>& tokens) const;

 private:
  struct Rule {
    std::string expansion;
    std::vector<std::string> after;  // lowercase; empty = unconditional
  };
  std::unordered_map<std::string, std::vector<Rule>> rules_;
};

std::vector<std::string> ExpandContractions(
    const std::vector<std::string>& tokens);

class TruecaseModel {
 public:
  TruecaseModel() = default;

  // Lines are whitespace-tokenized sentences.
  static TruecaseModel Train(const std::vector<std::string>& lines);
  static TruecaseModel Load(std::istream& in);
  void Save(std::ostream& out) const;

  // Returns nullptr when the lowercased key is unknown.
  const std::string* BestForm(std::string_view lowercase_key) const;
  int64_t Count(std::string_view surface) const;
  size_t size() const { return best_form_.size(); }

  const std::unordered_map<std::string, std::string>& best_forms() const {
    return best_form_;
  }
  const std::unordered_map<std::string, int64_t>& counts() const {
    return counts_;
  }

 private:
  std::unordered_map<std::string, std::string> best_form_;
  std::unordered_map<std::string, int64_t> counts_;
  // Surface forms per key, in save order (count desc, first seen).
  std::unordered_map<std::string, std::vector<std::string>> forms_;
};

// Index of the token whose case the truecaser may change: the first token
// that is not a delayed sentence-start mark such as a quote or bracket.
size_t SentenceInitialIndex(const std::vector<std::string>& tokens);

std::vector<std::string> Truecase(const std::vector<std::string>& tokens,
                                  const TruecaseModel& model);

}  // namespace bitext

#endif  // BITEXTCLEAN_TEXTNORM_H_
