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

#include "bitextclean/config.h"

#include <cerrno>
#include <cstdlib>
#include <fstream>
#include <istream>

#include "bitextclean/error.h"
#include "bitextclean/utf8.h"

namespace bitext {
namespace {

std::string Trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

}  // namespace

IniConfig IniConfig::Parse(std::istream& in, const std::string& origin) {
  IniConfig cfg;
  cfg.origin_ = origin;
  std::string section;
  std::string line;
  int n = 0;
  while (std::getline(in, line)) {
    ++n;
    const std::string t = Trim(line);
    if (t.empty() || t[0] == '#' || t[0] == ';') continue;
    auto where = [&] {
      return (origin.empty() ? std::string("config") : origin) + ":" +
             std::to_string(n);
    };
    if (t[0] == '[') {
      if (t.back() != ']') {
        throw Error(ErrorCode::kConfigInvalid, where() + ": unclosed section");
      }
      section = Trim(t.substr(1, t.size() - 2));
      cfg.values_[section];
      continue;
    }
    const auto eq = t.find('=');
    if (eq == std::string::npos) {
      throw Error(ErrorCode::kConfigInvalid, where() + ": expected key = value");
    }
    const std::string key = Trim(t.substr(0, eq));
    if (key.empty()) {
      throw Error(ErrorCode::kConfigInvalid, where() + ": empty key");
    }
    std::string value = t.substr(eq + 1);
    // Inline comments need whitespace before the marker.
    for (size_t i = 1; i < value.size(); ++i) {
      if ((value[i] == '#' || value[i] == ';') &&
          (value[i - 1] == ' ' || value[i - 1] == '\t')) {
        value.resize(i);
        break;
      }
    }
    cfg.values_[section][key] = Trim(value);
  }
  return cfg;
}

IniConfig IniConfig::Load(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw Error(ErrorCode::kConfigInvalid, "cannot open config " + path);
  }
  return Parse(in, path);
}

bool IniConfig::Has(const std::string& section, const std::string& key) const {
  return Get(section, key).has_value();
}

std::optional<std::string> IniConfig::Get(const std::string& section,
                                          const std::string& key) const {
  auto s = values_.find(section);
  if (s == values_.end()) return std::nullopt;
  auto k = s->second.find(key);
  if (k == s->second.end()) return std::nullopt;
  return k->second;
}

std::string IniConfig::GetString(const std::string& section,
                                 const std::string& key,
                                 const std::string& fallback) const {
  return Get(section, key).value_or(fallback);
}

double IniConfig::GetDouble(const std::string& section, const std::string& key,
                            double fallback) const {
  const auto v = Get(section, key);
  if (!v) return fallback;
  char* end = nullptr;
  errno = 0;
  const double d = std::strtod(v->c_str(), &end);
  if (v->empty() || *end != '\0' || errno == ERANGE) {
    throw Error(ErrorCode::kConfigInvalid,
                section + "." + key + ": not a number: " + *v);
  }
  return d;
}

int64_t IniConfig::GetInt(const std::string& section, const std::string& key,
                          int64_t fallback) const {
  const auto v = Get(section, key);
  if (!v) return fallback;
  char* end = nullptr;
  errno = 0;
  const long long x = std::strtoll(v->c_str(), &end, 10);
  if (v->empty() || *end != '\0' || errno == ERANGE) {
    throw Error(ErrorCode::kConfigInvalid,
                section + "." + key + ": not an integer: " + *v);
  }
  return x;
}

bool IniConfig::GetBool(const std::string& section, const std::string& key,
                        bool fallback) const {
  const auto v = Get(section, key);
  if (!v) return fallback;
  const std::string s = utf8::ToLower(*v);
  if (s == "1" || s == "true" || s == "yes" || s == "on") return true;
  if (s == "0" || s == "false" || s == "no" || s == "off") return false;
  throw Error(ErrorCode::kConfigInvalid,
              section + "." + key + ": not a boolean: " + *v);
}

void IniConfig::Set(const std::string& section, const std::string& key,
                    const std::string& value) {
  values_[section][key] = value;
}

std::vector<std::string> IniConfig::Sections() const {
  std::vector<std::string> out;
  for (const auto& [s, kv] : values_) out.push_back(s);
  return out;
}

std::vector<std::string> IniConfig::Keys(const std::string& section) const {
  std::vector<std::string> out;
  auto s = values_.find(section);
  if (s == values_.end()) return out;
  for (const auto& [k, v] : s->second) out.push_back(k);
  return out;
}

}  // namespace bitext
