// Copyright 2026 The Retrofit Authors
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


#include <cstdio>
#include <string>
#include <vector>
int main() {
  std::vector<std::string> words;
  words.push_back("range");
  words.push_back("for");
  words.push_back("loop");
  for (const auto& w : words) {
    int upper = 0;
    for (char c : w) upper += c - 'a';
    std::printf("%s %d\n", w.c_str(), upper);
  }
  return 0;
}
