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

#ifndef BITEXTCLEAN_CONFIG_H_
#define BITEXTCLEAN_CONFIG_H_

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace bitext {

// Sectioned key = value file. Lines starting with '#' or ';' are comments;
// keys before the first [section] belong to the "" section.
class IniConfig {
 public:
  // Throws Error(kConfigInvalid) on malformed lines.
  static IniConfig Parse(std::istream& in, const std::string& origin = "");
  static IniConfig Load(const std::string& path);

  bool Has(const std::string& section, const std::string& key) const;
  std::optional<std::string> Get(const std::string& section,
                                 const std::string& key) const;
  std::string GetString(const std::string& section, const std::string& key,
                        const std::string& fallback) const;
  // Typed getters throw Error(kConfigInvalid) when the value does not parse.
  double GetDouble(const std::string& section, const std::string& key,
                   double fallback) const;
  int64_t GetInt(const std::string& section, const std::string& key,
                 int64_t fallback) const;
  bool GetBool(const std::string& section, const std::string& key,
               bool fallback) const;

  void Set(const std::string& section, const std::string& key,
           const std::string& value);

  std::vector<std::string> Sections() const;
  std::vector<std::string> Keys(const std::string& section) const;

 private:
  std::map<std::string, std::map<std::string, std::string>> values_;
  std::string origin_;
};

}  // namespace bitext

#endif  // BITEXTCLEAN_CONFIG_H_
