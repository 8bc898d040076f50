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

#include "bitextclean/file_util.h"

#include <unistd.h>

#include <cstdio>
#include <filesystem>

#include "bitextclean/error.h"

namespace bitext {

std::vector<std::string> ReadLines(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIoError, "cannot open " + path);
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    lines.push_back(std::move(line));
  }
  return lines;
}

AtomicFile::AtomicFile(std::string path)
    : path_(std::move(path)),
      tmp_path_(path_ + ".tmp." + std::to_string(::getpid())),
      out_(tmp_path_, std::ios::binary | std::ios::trunc) {
  if (!out_) throw Error(ErrorCode::kIoError, "cannot create " + tmp_path_);
}

AtomicFile::~AtomicFile() {
  if (!committed_) {
    out_.close();
    std::error_code ec;
    std::filesystem::remove(tmp_path_, ec);
  }
}

void AtomicFile::Commit() {
  out_.flush();
  if (!out_) throw Error(ErrorCode::kIoError, "write failed: " + tmp_path_);
  out_.close();
  std::error_code ec;
  std::filesystem::rename(tmp_path_, path_, ec);
  if (ec) throw Error(ErrorCode::kIoError, "rename to " + path_ + " failed");
  committed_ = true;
}

void WriteFileAtomic(const std::string& path, const std::string& content) {
  AtomicFile f(path);
  f.stream() << content;
  f.Commit();
}

void WriteLinesAtomic(const std::string& path,
                      const std::vector<std::string>& lines) {
  AtomicFile f(path);
  for (const auto& l : lines) f.stream() << l << '\n';
  f.Commit();
}

}  // namespace bitext
