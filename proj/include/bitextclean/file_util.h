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

#ifndef BITEXTCLEAN_FILE_UTIL_H_
#define BITEXTCLEAN_FILE_UTIL_H_

#include <fstream>
#include <string>
#include <vector>

namespace bitext {

// Reads all lines; a trailing CR on each line is dropped. Throws
// Error(kIoError) if the file cannot be opened.
std::vector<std::string> ReadLines(const std::string& path);

// Output file that only appears at its final path after Commit(). The data
// goes to "<path>.tmp.<pid>" and is renamed on commit; if the writer is
// destroyed uncommitted the temporary file is removed.
class AtomicFile {
 public:
  explicit AtomicFile(std::string path);
  ~AtomicFile();
  AtomicFile(const AtomicFile&) = delete;
  AtomicFile& operator=(const AtomicFile&) = delete;

  std::ostream& stream() { return out_; }
  void Commit();

 private:
  std::string path_;
  std::string tmp_path_;
  std::ofstream out_;
  bool committed_ = false;
};

void WriteFileAtomic(const std::string& path, const std::string& content);
void WriteLinesAtomic(const std::string& path,
                      const std::vector<std::string>& lines);

}  // namespace bitext

#endif  // BITEXTCLEAN_FILE_UTIL_H_
