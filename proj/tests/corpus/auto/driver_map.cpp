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
#include <map>
#include <string>
int main() {
  std::map<std::string, int> counts;
  const char* words[6] = {"b", "a", "c", "a", "b", "a"};
  for (int i = 0; i < 6; ++i) counts[words[i]] += 1;
  for (auto it = counts.begin(); it != counts.end(); ++it) {
    auto key = it->first;
    auto n = it->second;
    std::printf("%s=%d\n", key.c_str(), n);
  }
  return 0;
}
